//! Exact-rational flag-algebra operators: densities, flag products,
//! averaging (unlabelling) and basis lifting via the chain rule.
//!
//! Everything is computed over [`num_rational::BigRational`]; no floating
//! point enters any density, so regenerated tables and certificate checks are
//! exact end to end.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::flags::{type_empty, Basis, Flag, FlagError};

/// Exact arbitrary-precision rational, the scalar type of the whole crate.
pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}

/// Parses a plain decimal string (`"-69.83"`, `"0.3465"`, `"12"`) into an
/// exact rational.
pub fn rational_from_decimal(s: &str) -> Result<Rational, AlgebraError> {
    let t = s.trim();
    let bad = || AlgebraError::Parse(format!("not a decimal number: `{s}`"));
    let (sign, digits) = match t.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    if all.is_empty() || !all.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let numer = num_bigint::BigInt::from_str(&all).map_err(|_| bad())?;
    let denom = num_traits::pow(num_bigint::BigInt::from(10), frac_part.len());
    Ok(Rational::new(numer * sign, denom))
}

/// Writes a rational whose reduced denominator is of the form 2^a·5^b as the
/// shortest exact decimal string — the inverse of [`rational_from_decimal`].
pub fn decimal_string(r: &Rational) -> Result<String, AlgebraError> {
    use num_traits::Signed;
    let mut denom = r.denom().clone();
    let two = num_bigint::BigInt::from(2);
    let five = num_bigint::BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return Err(AlgebraError::NotDecimal(r.to_string()));
    }
    let k = twos.max(fives);
    let pow10 = num_traits::pow(num_bigint::BigInt::from(10), k);
    let scaled = (r * Rational::from_integer(pow10.clone())).to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let abs = scaled.abs();
    if k == 0 {
        return Ok(format!("{sign}{abs}"));
    }
    let int_part = &abs / &pow10;
    let frac_part = &abs % &pow10;
    Ok(format!("{sign}{int_part}.{frac_part:0k$}"))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error("flag of order {inner} cannot be measured inside a flag of order {outer}")]
    OrderViolation { inner: usize, outer: usize },
    #[error("forms are over different bases")]
    BasisMismatch,
    #[error("expected {expected} coefficients, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("malformed linear form: {0}")]
    Parse(String),
    #[error("value {0} has no finite decimal representation")]
    NotDecimal(String),
}

/// A linear combination of the members of one flag basis.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearForm {
    basis: Arc<Basis>,
    coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn zero(basis: Arc<Basis>) -> LinearForm {
        let coeffs = vec![Rational::zero(); basis.len()];
        LinearForm { basis, coeffs }
    }

    pub fn from_coeffs(basis: Arc<Basis>, coeffs: Vec<Rational>) -> Result<LinearForm, AlgebraError> {
        if coeffs.len() != basis.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: basis.len(),
                got: coeffs.len(),
            });
        }
        Ok(LinearForm { basis, coeffs })
    }

    /// The form consisting of a single flag with coefficient one.
    pub fn from_flag(f: &Flag) -> Result<LinearForm, AlgebraError> {
        let basis = Basis::of(&f.type_digraph(), f.order())?;
        let idx = basis.index_of(f)?;
        let mut form = LinearForm::zero(basis);
        form.coeffs[idx] = Rational::one();
        Ok(form)
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    fn same_basis(&self, other: &LinearForm) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis)
            || (self.basis.sigma() == other.basis.sigma()
                && self.basis.order() == other.basis.order())
    }

    pub fn add(&self, other: &LinearForm) -> Result<LinearForm, AlgebraError> {
        if !self.same_basis(other) {
            return Err(AlgebraError::BasisMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(LinearForm {
            basis: Arc::clone(&self.basis),
            coeffs,
        })
    }

    pub fn sub(&self, other: &LinearForm) -> Result<LinearForm, AlgebraError> {
        self.add(&other.scaled(&-Rational::one()))
    }

    pub fn scaled(&self, by: &Rational) -> LinearForm {
        LinearForm {
            basis: Arc::clone(&self.basis),
            coeffs: self.coeffs.iter().map(|c| c * by).collect(),
        }
    }

    /// Exact dot product against a density vector.
    pub fn evaluate(&self, r: &[Rational]) -> Result<Rational, AlgebraError> {
        if r.len() != self.coeffs.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.coeffs.len(),
                got: r.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(r)
            .map(|(c, x)| c * x)
            .fold(Rational::zero(), |acc, t| acc + t))
    }

    /// JSON encoding `{basis, coeffs}` with exact `"p/q"` coefficient strings;
    /// the basis is its one-letter name for the shipped registries, otherwise
    /// `"sigma=<digraph>;order=<l>"`.
    pub fn to_json(&self) -> serde_json::Value {
        let basis = match self.basis.name() {
            Some(name) => name.to_string(),
            None => format!("sigma={};order={}", self.basis.sigma(), self.basis.order()),
        };
        serde_json::json!({
            "basis": basis,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LinearForm, AlgebraError> {
        let bad = |msg: &str| AlgebraError::Parse(msg.to_string());
        let basis_str = v
            .get("basis")
            .and_then(|b| b.as_str())
            .ok_or_else(|| bad("missing basis"))?;
        let basis = match basis_str {
            "H" => Basis::named(crate::flags::BasisName::H),
            "K" => Basis::named(crate::flags::BasisName::K),
            "L" => Basis::named(crate::flags::BasisName::L),
            other => {
                let rest = other
                    .strip_prefix("sigma=")
                    .ok_or_else(|| bad("unknown basis"))?;
                let (sigma_text, order_text) = rest
                    .split_once(";order=")
                    .ok_or_else(|| bad("unknown basis"))?;
                let sigma = sigma_text
                    .parse::<crate::digraph::Digraph>()
                    .map_err(|e| AlgebraError::Parse(e.to_string()))?;
                let order: usize = order_text
                    .parse()
                    .map_err(|_| bad("bad basis order"))?;
                Basis::of(&sigma, order)?
            }
        };
        let coeffs = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| bad("missing coeffs"))?
            .iter()
            .map(|c| {
                c.as_str()
                    .ok_or_else(|| bad("coefficient not a string"))
                    .and_then(|s| {
                        Rational::from_str(s)
                            .map_err(|_| AlgebraError::Parse(format!("bad rational `{s}`")))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        LinearForm::from_coeffs(basis, coeffs)
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LinearForm(sigma={}, order={},",
            self.basis.sigma(),
            self.basis.order()
        )?;
        let mut any = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " {c}·[{i}]")?;
                any = true;
            }
        }
        if !any {
            write!(f, " 0")?;
        }
        write!(f, ")")
    }
}

/// The density `p(fp; f)`: the probability that the restriction of `f` to its
/// labels plus a uniform random set of `|fp| - k` unlabeled vertices is
/// flag-isomorphic to `fp`.
pub fn density(fp: &Flag, f: &Flag) -> Result<Rational, AlgebraError> {
    if fp.type_digraph() != f.type_digraph() {
        return Err(AlgebraError::Flag(FlagError::TypeMismatch));
    }
    if fp.order() > f.order() {
        return Err(AlgebraError::OrderViolation {
            inner: fp.order(),
            outer: f.order(),
        });
    }
    let k = f.type_order();
    let labels = f.labels();
    let unlabeled: Vec<usize> = (0..f.order()).filter(|v| !labels.contains(v)).collect();
    let need = fp.order() - k;
    let target = fp.canonical();
    let mut hits: i64 = 0;
    let mut total: i64 = 0;
    for subset in unlabeled.iter().copied().combinations(need) {
        total += 1;
        let mut verts = labels.clone();
        verts.extend(subset);
        let sub = f
            .graph()
            .induced_subgraph(&verts)
            .expect("vertices of the flag");
        let restriction = Flag::new(sub, &(0..k).collect::<Vec<_>>())?;
        if restriction.canonical() == target {
            hits += 1;
        }
    }
    Ok(rat(hits, total))
}

/// The pair density `p(f1, f2; f)`: the probability, over ordered pairs of
/// disjoint unlabeled vertex sets of sizes `|f1| - k` and `|f2| - k` drawn
/// uniformly among all such pairs, that the two restrictions of `f` are
/// flag-isomorphic to `f1` and `f2` respectively.
pub fn pair_density(f1: &Flag, f2: &Flag, f: &Flag) -> Result<Rational, AlgebraError> {
    let sigma = f.type_digraph();
    if f1.type_digraph() != sigma || f2.type_digraph() != sigma {
        return Err(AlgebraError::Flag(FlagError::TypeMismatch));
    }
    let k = f.type_order();
    let (s1, s2) = (f1.order() - k, f2.order() - k);
    if f.order() < f1.order() + f2.order() - k {
        return Err(AlgebraError::OrderViolation {
            inner: f1.order() + f2.order() - k,
            outer: f.order(),
        });
    }
    let labels = f.labels();
    let unlabeled: Vec<usize> = (0..f.order()).filter(|v| !labels.contains(v)).collect();
    let label_slots: Vec<usize> = (0..k).collect();
    let t1 = f1.canonical();
    let t2 = f2.canonical();
    let mut hits: i64 = 0;
    let mut total: i64 = 0;
    for v1 in unlabeled.iter().copied().combinations(s1) {
        let rest: Vec<usize> = unlabeled
            .iter()
            .copied()
            .filter(|v| !v1.contains(v))
            .collect();
        for v2 in rest.iter().copied().combinations(s2) {
            total += 1;
            let mut verts1 = labels.clone();
            verts1.extend(&v1);
            let mut verts2 = labels.clone();
            verts2.extend(&v2);
            let r1 = Flag::new(
                f.graph().induced_subgraph(&verts1).expect("flag vertices"),
                &label_slots,
            )?;
            if r1.canonical() != t1 {
                continue;
            }
            let r2 = Flag::new(
                f.graph().induced_subgraph(&verts2).expect("flag vertices"),
                &label_slots,
            )?;
            if r2.canonical() == t2 {
                hits += 1;
            }
        }
    }
    Ok(rat(hits, total))
}

/// The flag product `f1 · f2` expanded at order `l`: the form
/// `Σ_F p(f1, f2; F) · F` over the basis of order-`l` flags of the same type.
pub fn product(f1: &Flag, f2: &Flag, l: usize) -> Result<LinearForm, AlgebraError> {
    let sigma = f1.type_digraph();
    if f2.type_digraph() != sigma {
        return Err(AlgebraError::Flag(FlagError::TypeMismatch));
    }
    let k = sigma.n();
    let needed = f1.order() + f2.order() - k;
    if l < needed {
        return Err(AlgebraError::OrderViolation {
            inner: needed,
            outer: l,
        });
    }
    let basis = Basis::of(&sigma, l)?;
    let coeffs = basis
        .members()
        .iter()
        .map(|m| pair_density(f1, f2, m))
        .collect::<Result<Vec<_>, _>>()?;
    LinearForm::from_coeffs(basis, coeffs)
}

/// The unlabelling factor `q(f)`: the probability that relabelling the graph
/// of `f` along a uniform injective label assignment produces a flag
/// isomorphic to `f`.  Always positive, at most one.
pub fn normalizing_factor(f: &Flag) -> Rational {
    let n = f.order();
    let k = f.type_order();
    let sigma = f.type_digraph();
    let target = f.canonical();
    let mut hits: i64 = 0;
    let mut total: i64 = 0;
    for cand in (0..n).permutations(k) {
        total += 1;
        let induced = f
            .graph()
            .induced_subgraph(&cand)
            .expect("vertices of the flag");
        if induced != sigma {
            continue;
        }
        let relabeled = Flag::new(*f.graph(), &cand).expect("distinct vertices");
        if relabeled.canonical() == target {
            hits += 1;
        }
    }
    rat(hits, total)
}

/// Full unlabelling: maps a form over σ-flags of order `l` to a form over
/// unlabeled graphs of order `l`, sending each flag `F` to
/// `q(F) · (F with labels removed)`.
pub fn average(f: &LinearForm) -> Result<LinearForm, AlgebraError> {
    let target = Basis::of(&type_empty(), f.basis().order())?;
    let mut out = LinearForm::zero(target);
    for (m, c) in f.basis().members().iter().zip(f.coeffs()) {
        if c.is_zero() {
            continue;
        }
        let q = normalizing_factor(m);
        let unlabeled = Flag::unlabeled(*m.graph());
        let idx = out.basis().index_of(&unlabeled)?;
        out.coeffs[idx] += c * q;
    }
    Ok(out)
}

/// Rewrites a form over order-`m` flags as a form over order-`l` flags of the
/// same type (`m ≤ l`), replacing each basis flag `F'` by `Σ p(F'; F̃) F̃`.
/// The chain rule makes this exact: evaluating either form against the
/// density vector of any larger host gives the same value.
pub fn lift_to_order(f: &LinearForm, l: usize) -> Result<LinearForm, AlgebraError> {
    let m = f.basis().order();
    if l < m {
        return Err(AlgebraError::OrderViolation { inner: m, outer: l });
    }
    if l == m {
        return Ok(f.clone());
    }
    let target = Basis::of(f.basis().sigma(), l)?;
    let mut coeffs = vec![Rational::zero(); target.len()];
    for (fp, c) in f.basis().members().iter().zip(f.coeffs()) {
        if c.is_zero() {
            continue;
        }
        for (j, host) in target.members().iter().enumerate() {
            let p = density(fp, host)?;
            if !p.is_zero() {
                coeffs[j] += c * p;
            }
        }
    }
    LinearForm::from_coeffs(target, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;
    use crate::flags::{named_flag, type_beta, type_point, BasisName};
    use crate::tables;

    fn flag(n: usize, edges: &[(usize, usize)], labels: &[usize]) -> Flag {
        Flag::new(Digraph::new(n, edges).unwrap(), labels).unwrap()
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(rational_from_decimal("0.3465").unwrap(), rat(3465, 10000));
        assert_eq!(rational_from_decimal("-69.83").unwrap(), rat(-6983, 100));
        assert_eq!(rational_from_decimal("12").unwrap(), rat(12, 1));
        assert_eq!(rational_from_decimal("+0.5").unwrap(), rat(1, 2));
        assert!(rational_from_decimal("1.2.3").is_err());
        assert!(rational_from_decimal("abc").is_err());
        assert!(rational_from_decimal(".").is_err());
    }

    #[test]
    fn decimal_serialization_is_minimal_and_exact() {
        assert_eq!(decimal_string(&rat(3465, 10000)).unwrap(), "0.3465");
        assert_eq!(decimal_string(&rat(-2440, 100)).unwrap(), "-24.4");
        assert_eq!(decimal_string(&rat(39648, 1)).unwrap(), "39648");
        assert_eq!(decimal_string(&rat(-1, 8)).unwrap(), "-0.125");
        assert_eq!(decimal_string(&rat(1, 200)).unwrap(), "0.005");
        assert_eq!(decimal_string(&Rational::zero()).unwrap(), "0");
        assert!(matches!(
            decimal_string(&rat(1, 3)),
            Err(AlgebraError::NotDecimal(_))
        ));
        for s in ["-69.83", "0.3465", "-1.246394", "100"] {
            let parsed = rational_from_decimal(s).unwrap();
            assert_eq!(decimal_string(&parsed).unwrap(), s);
        }
    }

    #[test]
    fn density_of_a_flag_in_itself_is_one() {
        for name in ["rho", "alpha", "kappa", "chi", "T"] {
            let f = named_flag(name).unwrap();
            assert_eq!(density(&f, &f).unwrap(), rat(1, 1), "{name}");
        }
    }

    #[test]
    fn edge_density_of_the_single_edge_host() {
        // One edge among four vertices: 1 of the 6 pairs spans it.
        let rho = named_flag("rho").unwrap();
        let h1 = Flag::unlabeled(Digraph::new(4, &[(2, 3)]).unwrap());
        assert_eq!(density(&rho, &h1).unwrap(), rat(1, 6));
    }

    #[test]
    fn fork_density_of_the_out_star() {
        // Out-star on four vertices: 3 of the 4 triples induce a fork.
        let kappa = named_flag("kappa").unwrap();
        let h8 = Flag::unlabeled(Digraph::new(4, &[(3, 0), (3, 1), (3, 2)]).unwrap());
        assert_eq!(density(&kappa, &h8).unwrap(), rat(3, 4));
    }

    #[test]
    fn density_rejects_mismatches() {
        let rho = named_flag("rho").unwrap();
        let alpha = named_flag("alpha").unwrap();
        assert_eq!(
            density(&rho, &alpha),
            Err(AlgebraError::Flag(FlagError::TypeMismatch))
        );
        let kappa = named_flag("kappa").unwrap();
        assert!(matches!(
            density(&kappa, &rho),
            Err(AlgebraError::OrderViolation { .. })
        ));
    }

    #[test]
    fn pair_density_matches_hand_counts() {
        // Two-label edge plus two extra isolated-from-label vertices joined by
        // nothing: both ordered pairs restrict to the bare labeled edge.
        let k0 = flag(3, &[(0, 1)], &[0, 1]);
        let host = flag(4, &[(2, 3)], &[2, 3]);
        assert_eq!(pair_density(&k0, &k0, &host).unwrap(), rat(1, 1));
        // Labeled center of an out-star: every ordered pair of out-neighbors
        // restricts to the out-edge twice.
        let alpha = named_flag("alpha").unwrap();
        let star = flag(4, &[(3, 0), (3, 1), (3, 2)], &[3]);
        assert_eq!(pair_density(&alpha, &alpha, &star).unwrap(), rat(1, 1));
    }

    #[test]
    fn pair_density_is_symmetric() {
        let basis_k = Basis::named(BasisName::K);
        let hosts = Basis::of(&type_beta(), 4).unwrap();
        for f1 in basis_k.members().iter().take(4) {
            for f2 in basis_k.members().iter().take(4) {
                for host in hosts.members().iter().step_by(7) {
                    assert_eq!(
                        pair_density(f1, f2, host).unwrap(),
                        pair_density(f2, f1, host).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn unit_law_for_products() {
        let basis_k = Basis::named(BasisName::K);
        let unit = Flag::unit_of_type(&type_beta());
        for (i, m) in basis_k.members().iter().enumerate() {
            let prod = product(&unit, m, 3).unwrap();
            for (j, c) in prod.coeffs().iter().enumerate() {
                let expected = if i == j { rat(1, 1) } else { rat(0, 1) };
                assert_eq!(*c, expected);
            }
        }
    }

    #[test]
    fn squared_edge_flag_hits_the_single_edge_host() {
        let k0 = flag(3, &[(0, 1)], &[0, 1]);
        let prod = product(&k0, &k0, 4).unwrap();
        let host = flag(4, &[(0, 1)], &[0, 1]);
        let idx = prod.basis().index_of(&host).unwrap();
        assert_eq!(*prod.coeff(idx), rat(1, 1));
    }

    #[test]
    fn averaged_square_of_the_edge_flag() {
        // 24·⟦K₀·K₀⟧ should equal 2ρ₁ + 4ρ₁₀.
        let k0 = flag(3, &[(0, 1)], &[0, 1]);
        let averaged = average(&product(&k0, &k0, 4).unwrap()).unwrap();
        let scaled = averaged.scaled(&rat(24, 1));
        let mut expected = vec![rat(0, 1); 32];
        expected[1] = rat(2, 1);
        expected[10] = rat(4, 1);
        assert_eq!(scaled.coeffs(), &expected[..]);
    }

    #[test]
    fn normalizing_factors_match_hand_counts() {
        assert_eq!(normalizing_factor(&named_flag("chi").unwrap()), rat(1, 3));
        assert_eq!(normalizing_factor(&named_flag("beta").unwrap()), rat(1, 2));
        assert_eq!(normalizing_factor(&named_flag("alpha").unwrap()), rat(1, 2));
        // Unlabeled flags have the empty label assignment only.
        assert_eq!(normalizing_factor(&named_flag("kappa").unwrap()), rat(1, 1));
        // A single labeled vertex can be any vertex of a one-vertex graph.
        let point = Flag::unit_of_type(&type_point());
        assert_eq!(normalizing_factor(&point), rat(1, 1));
    }

    #[test]
    fn averaging_named_flags() {
        let chi = LinearForm::from_flag(&named_flag("chi").unwrap()).unwrap();
        let averaged = average(&chi).unwrap();
        let kappa_idx = averaged
            .basis()
            .index_of(&named_flag("kappa").unwrap())
            .unwrap();
        for (i, c) in averaged.coeffs().iter().enumerate() {
            let expected = if i == kappa_idx { rat(1, 3) } else { rat(0, 1) };
            assert_eq!(*c, expected);
        }

        let beta_unit = LinearForm::from_flag(&named_flag("beta").unwrap()).unwrap();
        let averaged = average(&beta_unit).unwrap();
        let rho_idx = averaged
            .basis()
            .index_of(&named_flag("rho").unwrap())
            .unwrap();
        assert_eq!(*averaged.coeff(rho_idx), rat(1, 2));

        let zero = LinearForm::zero(Basis::named(BasisName::K));
        assert!(average(&zero).unwrap().is_zero());
    }

    #[test]
    fn lifting_the_fork_reproduces_the_reference_linear_part() {
        let kappa = LinearForm::from_flag(&named_flag("kappa").unwrap()).unwrap();
        assert_eq!(lift_to_order(&kappa, 3).unwrap(), kappa);
        let lifted = lift_to_order(&kappa, 4).unwrap().scaled(&rat(4, 1));
        let expected: Vec<Rational> = tables::FORK_LINEAR_REFERENCE
            .iter()
            .map(|&c| rat(c, 1))
            .collect();
        assert_eq!(lifted.coeffs(), &expected[..]);
    }

    #[test]
    fn lifting_composes() {
        let rho = LinearForm::from_flag(&named_flag("rho").unwrap()).unwrap();
        let direct = lift_to_order(&rho, 4).unwrap();
        let via3 = lift_to_order(&lift_to_order(&rho, 3).unwrap(), 4).unwrap();
        assert_eq!(direct, via3);
        assert!(matches!(
            lift_to_order(&direct, 3),
            Err(AlgebraError::OrderViolation { .. })
        ));
    }

    #[test]
    fn evaluation_is_an_exact_dot_product() {
        let kappa = LinearForm::from_flag(&named_flag("kappa").unwrap()).unwrap();
        let lifted = lift_to_order(&kappa, 4).unwrap().scaled(&rat(4, 1));
        let uniform = vec![rat(1, 32); 32];
        assert_eq!(lifted.evaluate(&uniform).unwrap(), rat(18, 32));
        assert_eq!(
            lifted.evaluate(&vec![rat(0, 1); 32]).unwrap(),
            rat(0, 1)
        );
        assert!(matches!(
            lifted.evaluate(&vec![rat(0, 1); 31]),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn densities_sum_to_one_at_every_intermediate_order() {
        let sigma = type_beta();
        let hosts = Basis::of(&sigma, 4).unwrap();
        for lp in 2..=4 {
            let level = Basis::of(&sigma, lp).unwrap();
            for host in hosts.members() {
                let total = level
                    .members()
                    .iter()
                    .map(|m| density(m, host).unwrap())
                    .fold(Rational::zero(), |a, b| a + b);
                assert_eq!(total, rat(1, 1));
            }
        }
    }

    #[test]
    fn chain_rule_on_a_sample() {
        // p(F'; F) = Σ_{F̃} p(F'; F̃) p(F̃; F) through the middle order.
        let sigma = type_point();
        let small = Basis::of(&sigma, 2).unwrap();
        let mid = Basis::of(&sigma, 3).unwrap();
        let hosts = Basis::of(&sigma, 4).unwrap();
        for fp in small.members() {
            for host in hosts.members().iter().step_by(5) {
                let direct = density(fp, host).unwrap();
                let chained = mid
                    .members()
                    .iter()
                    .map(|m| density(fp, m).unwrap() * density(m, host).unwrap())
                    .fold(Rational::zero(), |a, b| a + b);
                assert_eq!(direct, chained);
            }
        }
    }

    #[test]
    fn linear_form_json_round_trips() {
        let kappa = LinearForm::from_flag(&named_flag("kappa").unwrap()).unwrap();
        let lifted = lift_to_order(&kappa, 4).unwrap();
        let json = lifted.to_json();
        assert_eq!(json["basis"], "H");
        let back = LinearForm::from_json(&json).unwrap();
        assert_eq!(back, lifted);

        // A basis without a one-letter name round-trips through its sigma.
        let rho = LinearForm::from_flag(&named_flag("rho").unwrap()).unwrap();
        let order3 = lift_to_order(&rho, 3).unwrap();
        let json = order3.to_json();
        assert!(json["basis"].as_str().unwrap().starts_with("sigma="));
        let back = LinearForm::from_json(&json).unwrap();
        assert_eq!(back, order3);
        assert!(LinearForm::from_json(&serde_json::json!({"basis": "Z"})).is_err());
    }
}

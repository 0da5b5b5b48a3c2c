//! Regenerates, from first principles, every inequality object the
//! certificate pipeline uses: the Cauchy-Schwarz quadratic-form matrix over
//! the `K` basis, the out-regularity matrix pair, the two induction
//! identities, and the fork bound.
//!
//! Every generator works purely through [`crate::algebra`]; none of them read
//! the frozen transcriptions in [`crate::tables`], so the test-suite's
//! entry-by-entry comparisons against that module are meaningful.  All table
//! scales are fixed constants of the generation (they are part of the
//! published table units), with one exception: the regularity scale is
//! *verified configuration* — [`determine_reg_scale`] re-derives it by
//! matching a single generated row against the transcription and the diff
//! report carries the result, because the published prose and the published
//! tables disagree about it (24 versus the reproduced 12).

use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{
    average, lift_to_order, product, rat, AlgebraError, LinearForm, Rational,
};
use crate::digraph::Digraph;
use crate::flags::{
    enumerate_flags, named_flag, sink_extension, type_t, type_v, Basis, BasisName, Flag,
    FlagError,
};

/// Scale applied to averaged `K`-products in the quadratic-form matrix.
pub const CS_SCALE: i64 = 24;
/// Scale of the regularity matrices (the value [`determine_reg_scale`]
/// re-derives; the published prose claims 24 but the tables are in units
/// of 12).
pub const REG_SCALE: i64 = 12;
/// Base scale of the induction identities; each identity is divided by the
/// automorphism count of its type.
pub const IND_BASE_SCALE: i64 = 24;
/// Scale of the fork bound's linear part.
pub const FORK_SCALE: i64 = 4;
/// Multiplier of `(3c-1)^2` times the all-ones vector in the fork bound.
pub const FORK_QUADRATIC_MULTIPLIER: i64 = -12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InequalityError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("scaled coefficient {value} of entry {entry} is not a nonnegative integer")]
    ScaleMismatch { entry: String, value: String },
    #[error("induction identities exist only for the order-3 types T and V")]
    UnsupportedType,
    #[error("no positive integer scale matches the reference regularity row")]
    NoIntegerScale,
    #[error("forms are over different bases")]
    BasisMismatch,
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl From<FlagError> for InequalityError {
    fn from(e: FlagError) -> Self {
        InequalityError::Algebra(AlgebraError::Flag(e))
    }
}

fn integer_coeffs(form: &LinearForm, entry: &str) -> Result<Vec<i64>, InequalityError> {
    form.coeffs()
        .iter()
        .map(|c| {
            if c.is_integer() && !c.is_negative() {
                c.to_integer().to_i64().ok_or(())
            } else {
                Err(())
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| InequalityError::ScaleMismatch {
            entry: entry.to_string(),
            value: format!("{:?}", form.coeffs()),
        })
}

/// The symmetric 8×8 matrix of scaled averaged pair products of the `K`
/// basis: entry `(i, j)` is `24·⟦K_i · K_j⟧` expressed over the `H` basis.
/// Contracting it with a vector ā gives the Cauchy-Schwarz form
/// `ā M(r̄) āᵀ ≥ 0` valid for densities of triangle-free digraphs.
pub struct CsMatrix {
    entries: Vec<Vec<LinearForm>>,
}

impl CsMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &LinearForm {
        &self.entries[i][j]
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entry coefficients as nonnegative integers (the invariant the ×24
    /// scale guarantees).
    pub fn entry_integers(&self, i: usize, j: usize) -> Result<Vec<i64>, InequalityError> {
        integer_coeffs(&self.entries[i][j], &format!("CS({i},{j})"))
    }

    /// The quadratic form `Σ_{i,j} a_i a_j · entry(i, j)` as a single linear
    /// form over `H`.
    pub fn quadratic_form(&self, a: &[Rational]) -> Result<LinearForm, InequalityError> {
        let n = self.size();
        if a.len() != n {
            return Err(InequalityError::DimensionMismatch {
                expected: n,
                got: a.len(),
            });
        }
        let mut out = LinearForm::zero(Arc::clone(self.entries[0][0].basis()));
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, aj) in a.iter().enumerate() {
                if aj.is_zero() {
                    continue;
                }
                out = out.add(&self.entries[i][j].scaled(&(ai * aj)))?;
            }
        }
        Ok(out)
    }

    /// The numeric matrix `M(r̄)`: every entry contracted with a density
    /// vector.
    pub fn evaluate(&self, r: &[Rational]) -> Result<Vec<Vec<Rational>>, InequalityError> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|form| form.evaluate(r).map_err(InequalityError::from))
                    .collect()
            })
            .collect()
    }
}

/// Generates the full quadratic-form matrix from first principles.  All 64
/// entries are computed independently (symmetry is a checked property, not a
/// construction shortcut) and verified to be nonnegative integers at the
/// fixed ×24 scale.
pub fn cs_matrix() -> Result<CsMatrix, InequalityError> {
    let k_basis = Basis::named(BasisName::K);
    let scale = rat(CS_SCALE, 1);
    let mut entries = Vec::with_capacity(8);
    for i in 0..8 {
        let mut row = Vec::with_capacity(8);
        for j in 0..8 {
            let form = average(&product(k_basis.member(i), k_basis.member(j), 4)?)?
                .scaled(&scale);
            integer_coeffs(&form, &format!("CS({i},{j})"))?;
            row.push(form);
        }
        entries.push(row);
    }
    Ok(CsMatrix { entries })
}

/// The regularity matrix pair: integer matrices `A` (out-degree side) and
/// `B` (edge side), both 14×32.  For any multiplier vector b̄ the combination
/// `b̄ (B − c A) r̄ᵀ` vanishes on densities of `c`-out-regular digraphs.
pub struct RegMatrices {
    a: Vec<Vec<i64>>,
    b: Vec<Vec<i64>>,
}

impl RegMatrices {
    pub fn a(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn b(&self) -> &[Vec<i64>] {
        &self.b
    }

    /// The affine form `b̄ B r̄ᵀ − c · b̄ A r̄ᵀ` for a multiplier vector b̄.
    pub fn combination(&self, b_mult: &[Rational]) -> Result<AffineForm, InequalityError> {
        if b_mult.len() != self.a.len() {
            return Err(InequalityError::DimensionMismatch {
                expected: self.a.len(),
                got: b_mult.len(),
            });
        }
        let h = Basis::named(BasisName::H);
        let mut const_coeffs = vec![Rational::zero(); h.len()];
        let mut c_coeffs = vec![Rational::zero(); h.len()];
        for (j, bj) in b_mult.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            for i in 0..h.len() {
                const_coeffs[i] += bj * rat(self.b[j][i], 1);
                c_coeffs[i] -= bj * rat(self.a[j][i], 1);
            }
        }
        AffineForm::new(
            LinearForm::from_coeffs(Arc::clone(&h), const_coeffs)?,
            LinearForm::from_coeffs(h, c_coeffs)?,
        )
    }
}

fn reg_rows_at_scale(scale: i64) -> Result<(Vec<LinearForm>, Vec<LinearForm>), InequalityError> {
    let l_basis = Basis::named(BasisName::L);
    let alpha = named_flag("alpha")?;
    let s = rat(scale, 1);
    let mut a_rows = Vec::with_capacity(l_basis.len());
    let mut b_rows = Vec::with_capacity(l_basis.len());
    for lj in l_basis.members() {
        let lifted = lift_to_order(&LinearForm::from_flag(lj)?, 4)?;
        a_rows.push(average(&lifted)?.scaled(&s));
        b_rows.push(average(&product(lj, &alpha, 4)?)?.scaled(&s));
    }
    Ok((a_rows, b_rows))
}

/// Generates both regularity matrices at the fixed scale and checks that
/// every entry is a nonnegative integer.
pub fn reg_matrices() -> Result<RegMatrices, InequalityError> {
    let (a_rows, b_rows) = reg_rows_at_scale(REG_SCALE)?;
    let a = a_rows
        .iter()
        .enumerate()
        .map(|(j, row)| integer_coeffs(row, &format!("A[{j}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let b = b_rows
        .iter()
        .enumerate()
        .map(|(j, row)| integer_coeffs(row, &format!("B[{j}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RegMatrices { a, b })
}

/// Re-derives the regularity scale empirically: generates row 0 of the
/// out-degree matrix unscaled and finds the positive integer multiplier that
/// reproduces the transcribed reference row.  Returns that scale (expected to
/// equal [`REG_SCALE`]); errors if no integer works, which would mean the
/// generation pipeline and the transcription disagree structurally.
pub fn determine_reg_scale() -> Result<i64, InequalityError> {
    let l_basis = Basis::named(BasisName::L);
    let row0 = average(&lift_to_order(&LinearForm::from_flag(l_basis.member(0))?, 4)?)?;
    let reference = crate::tables::A_REG_REFERENCE[0];
    // Find the first nonzero generated coefficient and divide.
    let (idx, pivot) = row0
        .coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_zero())
        .ok_or(InequalityError::NoIntegerScale)?;
    let scale = rat(reference[idx], 1) / pivot;
    if !scale.is_integer() || !scale.is_positive() {
        return Err(InequalityError::NoIntegerScale);
    }
    for (c, &want) in row0.scaled(&scale).coeffs().iter().zip(reference.iter()) {
        if *c != rat(want, 1) {
            return Err(InequalityError::NoIntegerScale);
        }
    }
    scale
        .to_integer()
        .to_i64()
        .ok_or(InequalityError::NoIntegerScale)
}

/// A form affine in the out-degree ratio `c`: `const_part + c · c_part`,
/// both over the `H` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    const_part: LinearForm,
    c_part: LinearForm,
}

impl AffineForm {
    pub fn new(const_part: LinearForm, c_part: LinearForm) -> Result<AffineForm, InequalityError> {
        if const_part.basis().sigma() != c_part.basis().sigma()
            || const_part.basis().order() != c_part.basis().order()
        {
            return Err(InequalityError::BasisMismatch);
        }
        Ok(AffineForm { const_part, c_part })
    }

    pub fn const_part(&self) -> &LinearForm {
        &self.const_part
    }

    pub fn c_part(&self) -> &LinearForm {
        &self.c_part
    }

    /// Per-index coefficients at a concrete `c`.
    pub fn coefficients_at(&self, c: &Rational) -> Vec<Rational> {
        self.const_part
            .coeffs()
            .iter()
            .zip(self.c_part.coeffs())
            .map(|(k, s)| k + s * c)
            .collect()
    }

    pub fn evaluate(&self, c: &Rational, r: &[Rational]) -> Result<Rational, InequalityError> {
        Ok(self.const_part.evaluate(r)? + c * self.c_part.evaluate(r)?)
    }

    pub fn scaled(&self, by: &Rational) -> AffineForm {
        AffineForm {
            const_part: self.const_part.scaled(by),
            c_part: self.c_part.scaled(by),
        }
    }

    pub fn add(&self, other: &AffineForm) -> Result<AffineForm, InequalityError> {
        Ok(AffineForm {
            const_part: self.const_part.add(&other.const_part)?,
            c_part: self.c_part.add(&other.c_part)?,
        })
    }

    pub fn zero() -> AffineForm {
        let h = Basis::named(BasisName::H);
        AffineForm {
            const_part: LinearForm::zero(Arc::clone(&h)),
            c_part: LinearForm::zero(h),
        }
    }
}

/// Whether no edge of the flag's graph has an unlabeled tail (every edge
/// leaves the labeled image).
pub fn is_sigma_source(f: &Flag) -> bool {
    let labels = f.labels();
    f.graph().edges().iter().all(|(u, _)| labels.contains(u))
}

/// All σ-flags of order `l` that are σ-sources.
pub fn sigma_sources(sigma: &Digraph, l: usize) -> Result<Vec<Flag>, InequalityError> {
    Ok(enumerate_flags(sigma, l)?
        .into_iter()
        .filter(is_sigma_source)
        .collect())
}

/// The induction identity for one of the order-3 types `T` (transitive
/// triangle-free tournament) or `V` (in-star): the averaged form of
/// `- c·1_σ + Σ{σ-sources of order 4 not isomorphic to F₀} + c·F₀`
/// where `F₀` is the common out-neighbor extension, scaled so the published
/// integer coefficient table is reproduced (24 divided by the automorphism
/// count of the type).  Nonnegative on densities of large triangle-free
/// digraphs with minimum out-degree ratio `c`.
pub fn induction_form(sigma: &Digraph) -> Result<AffineForm, InequalityError> {
    if *sigma != type_t() && *sigma != type_v() {
        return Err(InequalityError::UnsupportedType);
    }
    let k = sigma.n();
    let scale = rat(IND_BASE_SCALE / sigma.automorphism_count() as i64, 1);
    let f0 = sink_extension(sigma);
    let f0_canonical = f0.canonical();

    let mut const_part = LinearForm::zero(Basis::named(BasisName::H));
    for source in sigma_sources(sigma, k + 1)? {
        if source.canonical() == f0_canonical {
            continue;
        }
        let averaged = average(&LinearForm::from_flag(&source)?)?;
        const_part = const_part.add(&averaged.scaled(&scale))?;
    }

    let f0_term = average(&LinearForm::from_flag(&f0)?)?.scaled(&scale);
    let unit = Flag::unit_of_type(sigma);
    let unit_term = lift_to_order(&average(&LinearForm::from_flag(&unit)?)?, k + 1)?
        .scaled(&scale);
    let c_part = f0_term.sub(&unit_term)?;
    AffineForm::new(const_part, c_part)
}

/// The fork bound: `linear + quadratic_multiplier · (3c-1)² · Σ_i r_i`,
/// nonnegative on densities of triangle-free digraphs with minimum
/// out-degree ratio `c ≥ 1/3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForkForm {
    linear: LinearForm,
    quadratic_multiplier: Rational,
}

impl ForkForm {
    /// The linear part (four times the order-4 expansion of the fork
    /// density).
    pub fn linear(&self) -> &LinearForm {
        &self.linear
    }

    /// The multiplier of `(3c-1)²` on the all-ones vector.
    pub fn quadratic_multiplier(&self) -> &Rational {
        &self.quadratic_multiplier
    }

    /// Per-index coefficients at a concrete `c`.
    pub fn coefficients_at(&self, c: &Rational) -> Vec<Rational> {
        let three_c_minus_one = rat(3, 1) * c - rat(1, 1);
        let shift = &self.quadratic_multiplier * &three_c_minus_one * &three_c_minus_one;
        self.linear.coeffs().iter().map(|l| l + &shift).collect()
    }

    pub fn evaluate(&self, c: &Rational, r: &[Rational]) -> Result<Rational, InequalityError> {
        let coeffs = self.coefficients_at(c);
        Ok(coeffs
            .iter()
            .zip(r)
            .map(|(a, b)| a * b)
            .fold(Rational::zero(), |acc, t| acc + t))
    }
}

/// Generates the fork bound from first principles.
pub fn fork_form() -> Result<ForkForm, InequalityError> {
    let kappa = LinearForm::from_flag(&named_flag("kappa")?)?;
    let linear = lift_to_order(&kappa, 4)?.scaled(&rat(FORK_SCALE, 1));
    Ok(ForkForm {
        linear,
        quadratic_multiplier: rat(FORK_QUADRATIC_MULTIPLIER, 1),
    })
}

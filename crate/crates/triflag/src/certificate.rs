//! Representation, evaluation and verification of proof certificates.
//!
//! A certificate bundles quadratic-form vectors ā₁..ā_k, a regularity
//! multiplier vector b̄, nonnegative multipliers for the two induction
//! identities and the fork bound, and a threshold out-degree ratio `c`.  Its
//! claim: the combined form
//!
//! ```text
//! F(c, r̄) = Σ_i ā_i M(r̄) ā_iᵀ + b̄ (B − cA) r̄ᵀ
//!           + c_T·Ind_T(r̄) + c_V·Ind_V(r̄) + d·Fork(r̄)
//! ```
//!
//! has strictly negative coefficients in every basis density r̄_i.  Since each
//! summand is nonnegative for the density vector of any large enough
//! triangle-free digraph with minimum out-degree ratio `c`, strict negativity
//! of all 32 coefficients shows no such digraph exists — out-degree ratio `c`
//! forces a directed triangle.  The crate ships the certificate for
//! `c = 0.3465` in `data/cert_0_3465.json` ([`Certificate::bundled`]).
//!
//! Everything is evaluated in exact rational arithmetic; files store exact
//! decimal strings, never binary floats.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::{decimal_string, rat, rational_from_decimal, AlgebraError, Rational};
use crate::flags::{type_t, type_v};
use crate::inequalities::{
    cs_matrix, fork_form, induction_form, reg_matrices, AffineForm, CsMatrix, ForkForm,
    InequalityError, RegMatrices,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Inequality(#[from] InequalityError),
    #[error("certificate JSON is malformed: {0}")]
    Parse(String),
    #[error("cs vector {index} has {got} entries, expected 8")]
    BadCsVector { index: usize, got: usize },
    #[error("reg vector has {0} entries, expected 14")]
    BadRegVector(usize),
    #[error("multiplier `{0}` must be nonnegative")]
    NegativeMultiplier(&'static str),
    #[error("threshold c = {0} is below 1/3, where the fork bound fails")]
    ThresholdBelowOneThird(String),
    #[error("cannot evaluate at c = {0} < 1/3 (fork bound precondition)")]
    CBelowOneThird(String),
}

/// The inequality objects every certificate evaluation needs, generated once
/// per process and shared.
pub struct Forms {
    pub cs: CsMatrix,
    pub reg: RegMatrices,
    pub ind_t: AffineForm,
    pub ind_v: AffineForm,
    pub fork: ForkForm,
}

impl Forms {
    pub fn get() -> &'static Forms {
        static FORMS: OnceLock<Forms> = OnceLock::new();
        FORMS.get_or_init(|| Forms {
            cs: cs_matrix().expect("quadratic-form matrix generates"),
            reg: reg_matrices().expect("regularity matrices generate"),
            ind_t: induction_form(&type_t()).expect("T induction form generates"),
            ind_v: induction_form(&type_v()).expect("V induction form generates"),
            fork: fork_form().expect("fork form generates"),
        })
    }
}

/// Multipliers and cut vectors claiming `F(c, r̄) < 0` for all r̄ ≥ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    cs_vectors: Vec<Vec<Rational>>,
    reg_vector: Vec<Rational>,
    ind_t_mult: Rational,
    ind_v_mult: Rational,
    fork_mult: Rational,
    threshold_c: Rational,
}

impl Certificate {
    pub fn new(
        cs_vectors: Vec<Vec<Rational>>,
        reg_vector: Vec<Rational>,
        ind_t_mult: Rational,
        ind_v_mult: Rational,
        fork_mult: Rational,
        threshold_c: Rational,
    ) -> Result<Certificate, CertificateError> {
        for (index, v) in cs_vectors.iter().enumerate() {
            if v.len() != 8 {
                return Err(CertificateError::BadCsVector {
                    index,
                    got: v.len(),
                });
            }
        }
        if reg_vector.len() != 14 {
            return Err(CertificateError::BadRegVector(reg_vector.len()));
        }
        for (name, m) in [
            ("c_T", &ind_t_mult),
            ("c_V", &ind_v_mult),
            ("d", &fork_mult),
        ] {
            if m.is_negative() {
                return Err(CertificateError::NegativeMultiplier(name));
            }
        }
        if threshold_c < rat(1, 3) {
            return Err(CertificateError::ThresholdBelowOneThird(
                threshold_c.to_string(),
            ));
        }
        Ok(Certificate {
            cs_vectors,
            reg_vector,
            ind_t_mult,
            ind_v_mult,
            fork_mult,
            threshold_c,
        })
    }

    /// The certificate shipped with the crate, proving the 0.3465 bound.
    /// Built from the frozen constants in [`crate::tables`]; the JSON file in
    /// `data/` holds the same values.
    pub fn bundled() -> Certificate {
        let cs_vectors = crate::tables::CERT_CS_VECTORS
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| rational_from_decimal(s).expect("frozen decimal"))
                    .collect()
            })
            .collect();
        let reg_vector = crate::tables::CERT_REG_VECTOR
            .iter()
            .map(|&v| rat(v, 1))
            .collect();
        Certificate::new(
            cs_vectors,
            reg_vector,
            rat(crate::tables::CERT_IND_T_MULT, 1),
            rat(crate::tables::CERT_IND_V_MULT, 1),
            rat(crate::tables::CERT_FORK_MULT, 1),
            rational_from_decimal(crate::tables::CERT_THRESHOLD_C).expect("frozen decimal"),
        )
        .expect("bundled certificate satisfies the invariants")
    }

    pub fn cs_vectors(&self) -> &[Vec<Rational>] {
        &self.cs_vectors
    }

    pub fn reg_vector(&self) -> &[Rational] {
        &self.reg_vector
    }

    pub fn ind_t_mult(&self) -> &Rational {
        &self.ind_t_mult
    }

    pub fn ind_v_mult(&self) -> &Rational {
        &self.ind_v_mult
    }

    pub fn fork_mult(&self) -> &Rational {
        &self.fork_mult
    }

    pub fn threshold_c(&self) -> &Rational {
        &self.threshold_c
    }

    /// Same certificate with a different threshold.
    pub fn with_threshold(&self, c: Rational) -> Result<Certificate, CertificateError> {
        Certificate::new(
            self.cs_vectors.clone(),
            self.reg_vector.clone(),
            self.ind_t_mult.clone(),
            self.ind_v_mult.clone(),
            self.fork_mult.clone(),
            c,
        )
    }
}

/// The exact coefficient of each of the 32 basis densities in `F(c, r̄)`.
pub fn evaluate_f(cert: &Certificate, c: &Rational) -> Result<Vec<Rational>, CertificateError> {
    if *c < rat(1, 3) {
        return Err(CertificateError::CBelowOneThird(c.to_string()));
    }
    let forms = Forms::get();
    let mut coeffs = vec![Rational::zero(); 32];
    for a in &cert.cs_vectors {
        for (acc, q) in coeffs.iter_mut().zip(forms.cs.quadratic_form(a)?.coeffs()) {
            *acc += q;
        }
    }
    let reg = forms.reg.combination(&cert.reg_vector)?.coefficients_at(c);
    let ind_t = forms.ind_t.coefficients_at(c);
    let ind_v = forms.ind_v.coefficients_at(c);
    let fork = forms.fork.coefficients_at(c);
    for i in 0..32 {
        coeffs[i] += &reg[i]
            + &cert.ind_t_mult * &ind_t[i]
            + &cert.ind_v_mult * &ind_v[i]
            + &cert.fork_mult * &fork[i];
    }
    Ok(coeffs)
}

/// Whether `F(c, r̄)` is non-increasing in `c` for every fixed r̄ ≥ 0 and all
/// `c ≥ 1/3`: the affine c-slope contributed by the regularity combination
/// and the induction multipliers must be ≤ 0 in every coordinate (the fork
/// contribution is automatically non-increasing because its multiplier is
/// nonnegative).
pub fn verify_monotonicity(cert: &Certificate) -> Result<bool, CertificateError> {
    let forms = Forms::get();
    let reg_slope = forms.reg.combination(&cert.reg_vector)?;
    for i in 0..32 {
        let slope = reg_slope.c_part().coeff(i)
            + &cert.ind_t_mult * forms.ind_t.c_part().coeff(i)
            + &cert.ind_v_mult * forms.ind_v.c_part().coeff(i);
        if slope.is_positive() {
            return Ok(false);
        }
    }
    Ok(!cert.fork_mult.is_negative())
}

/// Outcome of checking one certificate: all 32 exact coefficients, their
/// maximum, validity (`max < 0`) and the monotonicity flag that extends the
/// conclusion from the threshold to every larger `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub coefficients: Vec<Rational>,
    pub max_coefficient: Rational,
    pub valid: bool,
    pub monotone_in_c: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "valid": self.valid,
            "monotone_in_c": self.monotone_in_c,
            "max_coefficient": self.max_coefficient.to_string(),
            "coefficients": self
                .coefficients
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>(),
        })
    }
}

/// Evaluates the certificate at its own threshold and reports the outcome.
/// Invalid certificates produce `valid = false`, not an error.
pub fn verify(cert: &Certificate) -> Result<VerificationReport, CertificateError> {
    let coefficients = evaluate_f(cert, &cert.threshold_c)?;
    let max_coefficient = coefficients
        .iter()
        .max()
        .cloned()
        .expect("32 coefficients");
    let valid = max_coefficient.is_negative();
    let monotone_in_c = verify_monotonicity(cert)?;
    Ok(VerificationReport {
        coefficients,
        max_coefficient,
        valid,
        monotone_in_c,
    })
}

/// Whether truncating `exact` toward zero to the number of decimals shown in
/// `printed` reproduces `printed` — the relation between exact certificate
/// coefficients and their published truncated displays.
pub fn truncated_decimal_matches(exact: &Rational, printed: &str) -> bool {
    let Ok(printed_value) = rational_from_decimal(printed) else {
        return false;
    };
    let decimals = printed.split('.').nth(1).map_or(0, str::len);
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), decimals));
    (exact * &scale).trunc() / scale == printed_value
}

/// Parses a certificate from its JSON text form.
pub fn load_certificate(text: &str) -> Result<Certificate, CertificateError> {
    let bad = |msg: &str| CertificateError::Parse(msg.to_string());
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CertificateError::Parse(e.to_string()))?;
    match v.get("version").and_then(serde_json::Value::as_i64) {
        Some(1) => {}
        _ => return Err(bad("missing or unsupported version (expected 1)")),
    }
    let field = |name: &str| v.get(name).ok_or_else(|| bad(&format!("missing `{name}`")));
    let decimal = |val: &serde_json::Value, what: &str| -> Result<Rational, CertificateError> {
        let s = val
            .as_str()
            .ok_or_else(|| bad(&format!("{what} must be a decimal string")))?;
        rational_from_decimal(s).map_err(|_| bad(&format!("{what}: bad decimal `{s}`")))
    };
    let vector = |val: &serde_json::Value, what: &str| -> Result<Vec<Rational>, CertificateError> {
        val.as_array()
            .ok_or_else(|| bad(&format!("{what} must be an array")))?
            .iter()
            .map(|x| decimal(x, what))
            .collect()
    };
    let cs_vectors = field("cs_vectors")?
        .as_array()
        .ok_or_else(|| bad("cs_vectors must be an array"))?
        .iter()
        .map(|row| vector(row, "cs_vectors entry"))
        .collect::<Result<Vec<_>, _>>()?;
    let reg_vector = vector(field("reg_vector")?, "reg_vector")?;
    let ind_t_mult = decimal(field("c_T")?, "c_T")?;
    let ind_v_mult = decimal(field("c_V")?, "c_V")?;
    let fork_mult = decimal(field("d")?, "d")?;
    let threshold_c = decimal(field("c")?, "c")?;
    Certificate::new(
        cs_vectors,
        reg_vector,
        ind_t_mult,
        ind_v_mult,
        fork_mult,
        threshold_c,
    )
}

/// Serializes a certificate to its JSON text form (exact decimal strings,
/// minimal digits).
pub fn save_certificate(cert: &Certificate) -> Result<String, CertificateError> {
    let vec_strings = |v: &[Rational]| -> Result<Vec<String>, CertificateError> {
        v.iter()
            .map(|x| decimal_string(x).map_err(CertificateError::from))
            .collect()
    };
    let cs_vectors = cert
        .cs_vectors
        .iter()
        .map(|row| vec_strings(row))
        .collect::<Result<Vec<_>, _>>()?;
    let value = serde_json::json!({
        "version": 1,
        "c": decimal_string(&cert.threshold_c)?,
        "cs_vectors": cs_vectors,
        "reg_vector": vec_strings(&cert.reg_vector)?,
        "c_T": decimal_string(&cert.ind_t_mult)?,
        "c_V": decimal_string(&cert.ind_v_mult)?,
        "d": decimal_string(&cert.fork_mult)?,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables;

    fn zero_certificate() -> Certificate {
        Certificate::new(
            vec![],
            vec![Rational::zero(); 14],
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            rat(1, 3),
        )
        .unwrap()
    }

    #[test]
    fn construction_enforces_invariants() {
        assert!(matches!(
            Certificate::new(
                vec![vec![Rational::zero(); 7]],
                vec![Rational::zero(); 14],
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                rat(1, 3),
            ),
            Err(CertificateError::BadCsVector { index: 0, got: 7 })
        ));
        assert!(matches!(
            Certificate::new(
                vec![],
                vec![Rational::zero(); 13],
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                rat(1, 3),
            ),
            Err(CertificateError::BadRegVector(13))
        ));
        assert_eq!(
            Certificate::new(
                vec![],
                vec![Rational::zero(); 14],
                Rational::zero(),
                Rational::zero(),
                rat(-1, 1),
                rat(1, 3),
            ),
            Err(CertificateError::NegativeMultiplier("d"))
        );
        assert!(matches!(
            zero_certificate().with_threshold(rat(1, 4)),
            Err(CertificateError::ThresholdBelowOneThird(_))
        ));
    }

    #[test]
    fn zero_certificate_evaluates_to_zero_and_is_invalid() {
        let report = verify(&zero_certificate()).unwrap();
        assert!(report.coefficients.iter().all(Rational::is_zero));
        assert!(!report.valid);
        assert!(report.monotone_in_c);
    }

    #[test]
    fn bundled_certificate_is_valid_with_the_published_maximum() {
        let report = verify(&Certificate::bundled()).unwrap();
        assert!(report.valid);
        assert!(report.monotone_in_c);
        assert_eq!(report.max_coefficient, rat(-623197, 500000));
        assert!(report.coefficients.iter().all(Rational::is_negative));
    }

    #[test]
    fn bundled_coefficients_reproduce_the_published_table() {
        // Every published entry is the exact coefficient truncated toward
        // zero to the printed number of decimals; the entries listed as
        // full-precision are exactly equal.
        let coeffs = evaluate_f(&Certificate::bundled(), &rational_from_decimal("0.3465").unwrap())
            .unwrap();
        for (i, printed) in tables::FINAL_COEFFS_REFERENCE.iter().enumerate() {
            assert!(
                truncated_decimal_matches(&coeffs[i], printed),
                "entry {i}: exact {} vs printed {printed}",
                coeffs[i]
            );
        }
        for &i in &tables::FINAL_FULL_PRECISION {
            let printed = rational_from_decimal(tables::FINAL_COEFFS_REFERENCE[i]).unwrap();
            assert_eq!(coeffs[i], printed, "full-precision entry {i}");
        }
    }

    #[test]
    fn lowering_the_threshold_invalidates_the_bundled_certificate() {
        let lowered = Certificate::bundled()
            .with_threshold(rational_from_decimal("0.34").unwrap())
            .unwrap();
        let report = verify(&lowered).unwrap();
        assert!(!report.valid);
        assert!(report.max_coefficient.is_positive());
    }

    #[test]
    fn coefficients_decrease_as_c_grows_under_monotonicity() {
        let cert = Certificate::bundled();
        assert!(verify_monotonicity(&cert).unwrap());
        let at_threshold = evaluate_f(&cert, &rational_from_decimal("0.3465").unwrap()).unwrap();
        let above = evaluate_f(&cert, &rational_from_decimal("0.35").unwrap()).unwrap();
        for i in 0..32 {
            assert!(above[i] <= at_threshold[i], "coefficient {i} increased");
        }
    }

    #[test]
    fn monotonicity_fails_for_a_positive_out_degree_slope() {
        // b̄ = -e₁ makes the c-slope equal row 1 of the out-degree matrix,
        // which has positive entries.
        let mut reg = vec![Rational::zero(); 14];
        reg[1] = rat(-1, 1);
        let cert = Certificate::new(
            vec![],
            reg,
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            rat(1, 3),
        )
        .unwrap();
        assert!(!verify_monotonicity(&cert).unwrap());
    }

    #[test]
    fn evaluation_is_linear_in_the_multipliers() {
        let base = zero_certificate();
        let with_t = Certificate::new(
            vec![],
            vec![Rational::zero(); 14],
            rat(2, 1),
            Rational::zero(),
            Rational::zero(),
            rat(1, 3),
        )
        .unwrap();
        let c = rat(347, 1000);
        let doubled = evaluate_f(&with_t, &c).unwrap();
        let zero = evaluate_f(&base, &c).unwrap();
        let ind_t = Forms::get().ind_t.coefficients_at(&c);
        for i in 0..32 {
            assert_eq!(doubled[i], &zero[i] + rat(2, 1) * &ind_t[i]);
        }
    }

    #[test]
    fn evaluation_rejects_c_below_one_third() {
        assert!(matches!(
            evaluate_f(&zero_certificate(), &rat(1, 4)),
            Err(CertificateError::CBelowOneThird(_))
        ));
    }

    #[test]
    fn truncation_matching_semantics() {
        assert!(truncated_decimal_matches(
            &rat(-1246394, 1000000),
            "-1.24639"
        ));
        assert!(!truncated_decimal_matches(
            &rat(-1246394, 1000000),
            "-1.24640"
        ));
        // Truncation is toward zero, not toward minus infinity.
        assert!(truncated_decimal_matches(&rat(-19, 10), "-1.9"));
        assert!(truncated_decimal_matches(&rat(-199, 100), "-1.9"));
        assert!(!truncated_decimal_matches(&rat(-199, 100), "-2.0"));
        assert!(truncated_decimal_matches(&rat(5, 1), "5"));
    }

    #[test]
    fn json_round_trip_preserves_the_certificate() {
        let cert = Certificate::bundled();
        let text = save_certificate(&cert).unwrap();
        let back = load_certificate(&text).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn shipped_file_matches_the_bundled_certificate() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/cert_0_3465.json");
        let text = std::fs::read_to_string(path).unwrap();
        let loaded = load_certificate(&text).unwrap();
        assert_eq!(loaded, Certificate::bundled());
        // Saving reproduces the same JSON value (key order aside).
        let saved: serde_json::Value =
            serde_json::from_str(&save_certificate(&loaded).unwrap()).unwrap();
        let original: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(saved, original);
    }

    #[test]
    fn malformed_certificates_are_rejected() {
        assert!(load_certificate("not json").is_err());
        assert!(load_certificate("{}").is_err());
        assert!(load_certificate(r#"{"version": 2}"#).is_err());
        let seven = r#"{
            "version": 1, "c": "0.35",
            "cs_vectors": [["1","2","3","4","5","6","7"]],
            "reg_vector": ["0","0","0","0","0","0","0","0","0","0","0","0","0","0"],
            "c_T": "0", "c_V": "0", "d": "0"
        }"#;
        assert!(matches!(
            load_certificate(seven),
            Err(CertificateError::BadCsVector { index: 0, got: 7 })
        ));
        let bad_decimal = r#"{
            "version": 1, "c": "0.35", "cs_vectors": [],
            "reg_vector": ["0","0","0","0","0","0","0","0","0","0","0","0","0","x"],
            "c_T": "0", "c_V": "0", "d": "0"
        }"#;
        assert!(load_certificate(bad_decimal).is_err());
    }

}

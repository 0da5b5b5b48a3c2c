//! Cutting-plane rediscovery of certificate cut vectors.
//!
//! The relaxation `R_k(c)` is the polytope of density vectors r̄ ∈ ℚ³² that
//! every large triangle-free digraph with minimum out-degree ratio `c` must
//! obey: nonnegativity, total mass one, the fourteen out-regularity
//! identities, the two induction bounds, the fork bound, and one linearized
//! quadratic-form bound per accumulated cut vector ā.  If `R_k(c)` is empty,
//! no such digraph exists at ratio `c`.
//!
//! The loop alternates exact and floating-point work: an exact bisection
//! locates the feasibility threshold `c_k` and a witness r̄_k ∈ R_k(c_k);
//! the 8×8 moment matrix `CS(r̄_k)` is then eigendecomposed in floats, and an
//! eigenvector of its most negative eigenvalue — rounded to two (or, if
//! rounding costs the sign, four) decimals and rescaled — becomes the next
//! cut after an exact re-check that it separates r̄_k.  Cuts only shrink the
//! polytope, so the `c_k` sequence never increases.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{decimal_string, rat, AlgebraError, Rational};
use crate::certificate::{Certificate, CertificateError, Forms};
use crate::eigen::{jacobi_eigen, EigenError};
use crate::inequalities::InequalityError;
use crate::lp::{solve, LPError, LPProblem, LPResult};

/// Eigenvalues above this are treated as numerically nonnegative: the moment
/// matrix is considered PSD and the search stops.
pub const PSD_TOLERANCE: f64 = -1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error(transparent)]
    Lp(#[from] LPError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Inequality(#[from] InequalityError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error("invalid search interval: need 1/3 ≤ lo < hi and positive tolerances")]
    InvalidInterval,
    #[error("the relaxation is already empty at c = {0}; nothing to search")]
    LoInfeasible(String),
    #[error("rounded cut is no longer exactly negative at 2 or 4 decimals")]
    CutRoundingFailed,
    #[error("matrix entry does not fit in a float")]
    FloatConversion,
}

/// Builds the linear relaxation `R_k(c)` over the 32 order-4 densities:
/// `Σ r_i = 1` plus the fourteen regularity equalities, then the two
/// induction bounds, the fork bound, and one `ā(CS(r̄))āᵀ ≥ 0` row per cut.
pub fn build_rk(c: &Rational, cuts: &[Vec<Rational>]) -> Result<LPProblem, SearchError> {
    let forms = Forms::get();
    let mut equalities = Vec::with_capacity(15);
    equalities.push((vec![rat(1, 1); 32], rat(1, 1)));
    for (b_row, a_row) in forms.reg.b().iter().zip(forms.reg.a()) {
        let coeffs = b_row
            .iter()
            .zip(a_row)
            .map(|(&b, &a)| rat(b, 1) - c * rat(a, 1))
            .collect();
        equalities.push((coeffs, Rational::zero()));
    }
    let mut inequalities = vec![
        (forms.ind_t.coefficients_at(c), Rational::zero()),
        (forms.ind_v.coefficients_at(c), Rational::zero()),
        (forms.fork.coefficients_at(c), Rational::zero()),
    ];
    for cut in cuts {
        let row = forms.cs.quadratic_form(cut)?;
        inequalities.push((row.coeffs().to_vec(), Rational::zero()));
    }
    Ok(LPProblem {
        num_vars: 32,
        equalities,
        inequalities,
        nonneg: true,
    })
}

/// Result of bisecting for the feasibility threshold: the largest `c` found
/// feasible (with a witness point), plus post-checks that feasibility really
/// did flip within one tolerance of the answer.  The flags report — rather
/// than hide — any failure of the assumed monotonicity in `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisection {
    pub c: Rational,
    pub point: Vec<Rational>,
    pub feasible_below: bool,
    pub infeasible_above: bool,
}

fn bisect<F>(
    mut feasible: F,
    lo: &Rational,
    hi: &Rational,
    tol: &Rational,
) -> Result<Bisection, SearchError>
where
    F: FnMut(&Rational) -> Result<Option<Vec<Rational>>, SearchError>,
{
    if lo >= hi || !tol.is_positive() {
        return Err(SearchError::InvalidInterval);
    }
    let Some(mut point) = feasible(lo)? else {
        return Err(SearchError::LoInfeasible(lo.to_string()));
    };
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    if let Some(p) = feasible(&hi)? {
        // The whole interval is feasible; the threshold lies above it.  The
        // post-check below will report the missing flip.
        lo = hi.clone();
        point = p;
    }
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / rat(2, 1);
        match feasible(&mid)? {
            Some(p) => {
                lo = mid;
                point = p;
            }
            None => hi = mid,
        }
    }
    let feasible_below = feasible(&(&lo - tol))?.is_some();
    let infeasible_above = feasible(&(&lo + tol))?.is_none();
    Ok(Bisection {
        c: lo,
        point,
        feasible_below,
        infeasible_above,
    })
}

/// Bisects `[lo, hi]` for the feasibility threshold of `R_k(c)` with the
/// given cuts, to within `tol`.
pub fn binary_search_c(
    cuts: &[Vec<Rational>],
    lo: &Rational,
    hi: &Rational,
    tol: &Rational,
) -> Result<Bisection, SearchError> {
    bisect(
        |c| match solve(&build_rk(c, cuts)?)? {
            LPResult::Feasible(point) => Ok(Some(point)),
            LPResult::Infeasible => Ok(None),
        },
        lo,
        hi,
        tol,
    )
}

/// One record of the search trace.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchIteration {
    pub k: usize,
    pub c_k: Rational,
    pub r_k: Vec<Rational>,
    /// The cut appended this iteration; `None` on a stopping iteration.
    pub cut: Option<Vec<Rational>>,
    pub min_eig: f64,
}

impl SearchIteration {
    pub fn to_json(&self) -> serde_json::Value {
        let cut = self.cut.as_ref().map(|cut| {
            cut.iter()
                .map(|v| decimal_string(v).expect("rounded cuts have power-of-ten denominators"))
                .collect::<Vec<_>>()
        });
        serde_json::json!({
            "k": self.k,
            "c_k": self.c_k.to_string(),
            "r_k": self.r_k.iter().map(Rational::to_string).collect::<Vec<_>>(),
            "cut": cut,
            "min_eig": self.min_eig,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The moment matrix at r̄_k had no eigenvalue below the PSD tolerance.
    PsdReached,
    /// `c_k` stopped improving by more than `stop_delta`.
    DeltaBelowThreshold,
    MaxIterations,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchTrace {
    pub iterations: Vec<SearchIteration>,
    pub stop_reason: StopReason,
}

impl SearchTrace {
    /// One JSON object per line, in iteration order.
    pub fn to_jsonl(&self) -> String {
        self.iterations
            .iter()
            .map(|it| format!("{}\n", it.to_json()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchParams {
    pub lo: Rational,
    pub hi: Rational,
    pub tol_c: Rational,
    pub stop_delta: Rational,
    pub max_iters: usize,
    pub seed_cuts: Vec<Vec<Rational>>,
}

/// The trace plus a certificate skeleton holding the accumulated cut vectors
/// and the last threshold; the regularity vector and the three multipliers
/// are left zero for a separate fitting step.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub certificate: Certificate,
    pub trace: SearchTrace,
}

fn to_float_matrix(m: &[Vec<Rational>]) -> Result<Vec<Vec<f64>>, SearchError> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|v| v.to_f64().ok_or(SearchError::FloatConversion))
                .collect()
        })
        .collect()
}

fn rounded_cut(vector: &[f64], decimals: u32) -> Vec<Rational> {
    let max_abs = vector.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let scale = if max_abs > 0.0 { 100.0 / max_abs } else { 1.0 };
    let denom = 10_i64.pow(decimals);
    vector
        .iter()
        .map(|v| {
            let scaled = (v * scale * denom as f64).round() as i64;
            Rational::new(BigInt::from(scaled), BigInt::from(denom))
        })
        .collect()
}

/// Rounds an eigenvector into a cut vector and proves, in exact arithmetic,
/// that it still separates r̄: first at two decimals, then at four if the
/// coarse rounding lost the strict negativity.
fn certified_cut(vector: &[f64], r: &[Rational]) -> Result<Vec<Rational>, SearchError> {
    let forms = Forms::get();
    for decimals in [2, 4] {
        let cut = rounded_cut(vector, decimals);
        let value = forms.cs.quadratic_form(&cut)?.evaluate(r)?;
        if value.is_negative() {
            return Ok(cut);
        }
    }
    Err(SearchError::CutRoundingFailed)
}

/// Runs the cutting-plane loop: bisect for the threshold, take a witness
/// point, eigendecompose its moment matrix, append a certified cut, repeat.
pub fn cutting_plane_search(params: &SearchParams) -> Result<SearchOutcome, SearchError> {
    if params.lo < rat(1, 3)
        || params.lo >= params.hi
        || !params.tol_c.is_positive()
        || !params.stop_delta.is_positive()
        || params.max_iters == 0
    {
        return Err(SearchError::InvalidInterval);
    }
    let forms = Forms::get();
    let mut cuts = params.seed_cuts.clone();
    let mut iterations: Vec<SearchIteration> = Vec::new();
    let mut prev_c: Option<Rational> = None;
    let mut stop_reason = StopReason::MaxIterations;

    for k in 0..params.max_iters {
        let bis = binary_search_c(&cuts, &params.lo, &params.hi, &params.tol_c)?;
        let c_k = bis.c;
        let r_k = bis.point;

        let moment = forms.cs.evaluate(&r_k)?;
        let eigen = jacobi_eigen(&to_float_matrix(&moment)?)?;
        let min_eig = eigen.values[0];

        if min_eig >= PSD_TOLERANCE {
            iterations.push(SearchIteration {
                k,
                c_k: c_k.clone(),
                r_k,
                cut: None,
                min_eig,
            });
            prev_c = Some(c_k);
            stop_reason = StopReason::PsdReached;
            break;
        }

        let cut = certified_cut(&eigen.vectors[0], &r_k)?;
        cuts.push(cut.clone());
        iterations.push(SearchIteration {
            k,
            c_k: c_k.clone(),
            r_k,
            cut: Some(cut),
            min_eig,
        });

        let improvement_stalled = prev_c
            .as_ref()
            .is_some_and(|prev| prev - &c_k < params.stop_delta);
        prev_c = Some(c_k);
        if improvement_stalled {
            stop_reason = StopReason::DeltaBelowThreshold;
            break;
        }
    }

    let threshold = prev_c.expect("max_iters ≥ 1 guarantees at least one iteration");
    let certificate = Certificate::new(
        cuts,
        vec![Rational::zero(); 14],
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        threshold,
    )?;
    Ok(SearchOutcome {
        certificate,
        trace: SearchTrace {
            iterations,
            stop_reason,
        },
    })
}

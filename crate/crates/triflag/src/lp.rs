//! Exact-arithmetic linear feasibility testing.
//!
//! A phase-1 simplex over `BigRational` decides whether a system of linear
//! equalities and `≥` inequalities (optionally with `x ≥ 0`) has a solution,
//! and produces one when it does.  Bland's pivoting rule makes the solver
//! immune to cycling, so termination is guaranteed; every number stays an
//! exact rational from input to output.  The feasibility *status* is a
//! property of the constraint set — reordering constraints can change which
//! point is returned, never whether one exists.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LPError {
    #[error("constraint {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("phase-1 objective became unbounded; the tableau is corrupt")]
    Unbounded,
}

/// A linear system over `num_vars` variables: `equalities` are rows
/// `a·x = b`, `inequalities` are rows `a·x ≥ b`, and `nonneg` additionally
/// imposes `x ≥ 0` componentwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPProblem {
    pub num_vars: usize,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
    pub nonneg: bool,
}

impl LPProblem {
    fn validate(&self) -> Result<(), LPError> {
        let rows = self.equalities.iter().chain(&self.inequalities);
        for (row, (coeffs, _)) in rows.enumerate() {
            if coeffs.len() != self.num_vars {
                return Err(LPError::DimensionMismatch {
                    row,
                    got: coeffs.len(),
                    expected: self.num_vars,
                });
            }
        }
        Ok(())
    }

    /// Exact check that `x` satisfies every constraint.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        if self.nonneg && x.iter().any(Rational::is_negative) {
            return false;
        }
        let dot = |a: &[Rational]| a.iter().zip(x).map(|(c, v)| c * v).sum::<Rational>();
        self.equalities.iter().all(|(a, b)| dot(a) == *b)
            && self.inequalities.iter().all(|(a, b)| dot(a) >= *b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LPResult {
    /// The system has a solution; one satisfying point is returned.
    Feasible(Vec<Rational>),
    Infeasible,
}

impl LPResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LPResult::Feasible(_))
    }
}

/// Decides feasibility of `problem` with a phase-1 simplex under Bland's
/// rule.  Free variables (when `nonneg` is false) are split into positive and
/// negative parts internally; inequalities get surplus variables; every row
/// starts with an artificial variable whose sum is minimized.
pub fn solve(problem: &LPProblem) -> Result<LPResult, LPError> {
    problem.validate()?;
    let n = problem.num_vars;
    let structural = if problem.nonneg { n } else { 2 * n };
    let slacks = problem.inequalities.len();
    let m = problem.equalities.len() + problem.inequalities.len();
    let total = structural + slacks + m;

    let expand = |a: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); structural + slacks];
        if problem.nonneg {
            out[..n].clone_from_slice(a);
        } else {
            for (i, c) in a.iter().enumerate() {
                out[2 * i] = c.clone();
                out[2 * i + 1] = -c.clone();
            }
        }
        out
    };

    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::with_capacity(m);
    for (a, b) in &problem.equalities {
        rows.push((expand(a), b.clone()));
    }
    for (k, (a, b)) in problem.inequalities.iter().enumerate() {
        let mut coeffs = expand(a);
        coeffs[structural + k] = -Rational::one();
        rows.push((coeffs, b.clone()));
    }
    for (coeffs, b) in &mut rows {
        if b.is_negative() {
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
            *b = -b.clone();
        }
    }

    // Tableau: one row per constraint over all columns plus rhs; artificial
    // variable i starts basic in row i.
    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for (i, (coeffs, b)) in rows.into_iter().enumerate() {
        let mut row = coeffs;
        row.resize(total, Rational::zero());
        row[structural + slacks + i] = Rational::one();
        row.push(b);
        tableau.push(row);
        basis.push(structural + slacks + i);
    }

    // Reduced costs for minimizing the sum of artificials: the objective
    // equals `obj_val + Σ obj[j]·x_j` over nonbasic variables.
    let mut obj = vec![Rational::zero(); total];
    let mut obj_val = Rational::zero();
    for row in &tableau {
        for (j, o) in obj.iter_mut().enumerate().take(structural + slacks) {
            *o -= &row[j];
        }
        obj_val += &row[total];
    }

    loop {
        // Bland: enter the lowest-index column with a negative reduced cost.
        let Some(enter) = (0..total).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test; ties broken by the lowest-index basic variable.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..m {
            if tableau[i][enter].is_positive() {
                let ratio = &tableau[i][total] / &tableau[i][enter];
                let better = match (&best, leave) {
                    (None, _) => true,
                    (Some(b), Some(l)) => ratio < *b || (ratio == *b && basis[i] < basis[l]),
                    (Some(_), None) => unreachable!("best set without a leaving row"),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // The phase-1 objective is bounded below by zero, so an
            // unbounded ray would mean arithmetic corruption.
            return Err(LPError::Unbounded);
        };

        let pivot = tableau[r][enter].clone();
        for v in tableau[r].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = tableau[r].clone();
        for (i, row) in tableau.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let factor = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
            }
        }
        let factor = obj[enter].clone();
        if !factor.is_zero() {
            for (o, p) in obj.iter_mut().zip(&pivot_row) {
                *o -= &factor * p;
            }
            obj_val += &factor * &pivot_row[total];
        }
        basis[r] = enter;
    }

    if obj_val.is_positive() {
        return Ok(LPResult::Infeasible);
    }

    let mut values = vec![Rational::zero(); structural];
    for (i, &b) in basis.iter().enumerate() {
        if b < structural {
            values[b] = tableau[i][total].clone();
        }
    }
    let x = if problem.nonneg {
        values
    } else {
        (0..n).map(|i| &values[2 * i] - &values[2 * i + 1]).collect()
    };
    debug_assert!(problem.satisfied_by(&x));
    Ok(LPResult::Feasible(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use itertools::Itertools;

    fn rats(values: &[(i64, i64)]) -> Vec<Rational> {
        values.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    fn feasible_point(problem: &LPProblem) -> Vec<Rational> {
        match solve(problem).unwrap() {
            LPResult::Feasible(x) => x,
            LPResult::Infeasible => panic!("expected a feasible system"),
        }
    }

    #[test]
    fn conflicting_sum_and_gap_is_infeasible() {
        // x₁ + x₂ = 1 with x₁ - x₂ ≥ 2 and x ≥ 0 has no solution.
        let problem = LPProblem {
            num_vars: 2,
            equalities: vec![(rats(&[(1, 1), (1, 1)]), rat(1, 1))],
            inequalities: vec![(rats(&[(1, 1), (-1, 1)]), rat(2, 1))],
            nonneg: true,
        };
        assert_eq!(solve(&problem).unwrap(), LPResult::Infeasible);
    }

    #[test]
    fn single_lower_bound_is_met_exactly() {
        let problem = LPProblem {
            num_vars: 1,
            equalities: vec![],
            inequalities: vec![(rats(&[(1, 1)]), rat(3, 10))],
            nonneg: true,
        };
        let x = feasible_point(&problem);
        assert!(x[0] >= rat(3, 10));
        assert!(problem.satisfied_by(&x));
    }

    #[test]
    fn equalities_with_a_unique_solution_return_it() {
        let problem = LPProblem {
            num_vars: 2,
            equalities: vec![
                (rats(&[(1, 1), (1, 1)]), rat(1, 1)),
                (rats(&[(1, 1), (-1, 1)]), rat(0, 1)),
            ],
            inequalities: vec![],
            nonneg: true,
        };
        assert_eq!(feasible_point(&problem), rats(&[(1, 2), (1, 2)]));
    }

    #[test]
    fn free_variables_can_go_negative() {
        let problem = LPProblem {
            num_vars: 1,
            equalities: vec![(rats(&[(1, 1)]), rat(-5, 1))],
            inequalities: vec![],
            nonneg: false,
        };
        assert_eq!(feasible_point(&problem), rats(&[(-5, 1)]));
    }

    #[test]
    fn nonnegativity_blocks_a_negative_equality() {
        let problem = LPProblem {
            num_vars: 1,
            equalities: vec![(rats(&[(1, 1)]), rat(-3, 1))],
            inequalities: vec![],
            nonneg: true,
        };
        assert_eq!(solve(&problem).unwrap(), LPResult::Infeasible);
    }

    #[test]
    fn contradictory_equalities_are_infeasible() {
        let problem = LPProblem {
            num_vars: 1,
            equalities: vec![
                (rats(&[(1, 1)]), rat(1, 1)),
                (rats(&[(1, 1)]), rat(2, 1)),
            ],
            inequalities: vec![],
            nonneg: false,
        };
        assert_eq!(solve(&problem).unwrap(), LPResult::Infeasible);
    }

    #[test]
    fn mixed_system_returns_an_exactly_satisfying_point() {
        let problem = LPProblem {
            num_vars: 3,
            equalities: vec![(rats(&[(1, 1), (1, 1), (1, 1)]), rat(1, 1))],
            inequalities: vec![
                (rats(&[(1, 1), (-1, 1), (0, 1)]), rat(1, 7)),
                (rats(&[(0, 1), (1, 1), (2, 1)]), rat(1, 3)),
            ],
            nonneg: true,
        };
        let x = feasible_point(&problem);
        assert!(problem.satisfied_by(&x));
    }

    #[test]
    fn infeasibility_is_stable_under_constraint_reordering() {
        let equalities = vec![(rats(&[(1, 1), (1, 1)]), rat(1, 1))];
        let inequalities = vec![
            (rats(&[(1, 1), (-1, 1)]), rat(2, 1)),
            (rats(&[(1, 1), (0, 1)]), rat(0, 1)),
            (rats(&[(0, 1), (1, 1)]), rat(0, 1)),
        ];
        for perm in inequalities.iter().cloned().permutations(3) {
            let problem = LPProblem {
                num_vars: 2,
                equalities: equalities.clone(),
                inequalities: perm,
                nonneg: true,
            };
            assert_eq!(solve(&problem).unwrap(), LPResult::Infeasible);
        }
    }

    #[test]
    fn degenerate_rows_terminate_under_blands_rule() {
        // Heavily redundant constraints force degenerate pivots.
        let problem = LPProblem {
            num_vars: 2,
            equalities: vec![
                (rats(&[(1, 1), (1, 1)]), rat(0, 1)),
                (rats(&[(2, 1), (2, 1)]), rat(0, 1)),
                (rats(&[(1, 1), (-1, 1)]), rat(0, 1)),
            ],
            inequalities: vec![
                (rats(&[(1, 1), (0, 1)]), rat(0, 1)),
                (rats(&[(0, 1), (1, 1)]), rat(0, 1)),
            ],
            nonneg: false,
        };
        assert_eq!(feasible_point(&problem), rats(&[(0, 1), (0, 1)]));
    }

    #[test]
    fn empty_problem_is_feasible() {
        let problem = LPProblem {
            num_vars: 0,
            equalities: vec![],
            inequalities: vec![],
            nonneg: true,
        };
        assert_eq!(feasible_point(&problem), Vec::<Rational>::new());
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let problem = LPProblem {
            num_vars: 2,
            equalities: vec![(rats(&[(1, 1)]), rat(1, 1))],
            inequalities: vec![],
            nonneg: true,
        };
        assert_eq!(
            solve(&problem),
            Err(LPError::DimensionMismatch {
                row: 0,
                got: 1,
                expected: 2,
            })
        );
    }

    #[test]
    fn satisfied_by_checks_all_constraint_kinds() {
        let problem = LPProblem {
            num_vars: 2,
            equalities: vec![(rats(&[(1, 1), (1, 1)]), rat(1, 1))],
            inequalities: vec![(rats(&[(1, 1), (0, 1)]), rat(1, 4))],
            nonneg: true,
        };
        assert!(problem.satisfied_by(&rats(&[(1, 2), (1, 2)])));
        assert!(!problem.satisfied_by(&rats(&[(1, 5), (4, 5)])));
        assert!(!problem.satisfied_by(&rats(&[(3, 2), (-1, 2)])));
        assert!(!problem.satisfied_by(&rats(&[(1, 1)])));
    }

    #[test]
    fn fractional_data_stays_exact() {
        // 3/7·x₁ + 2/11·x₂ = 5/13 with x₂ = 1/9 fixed: solve for x₁ exactly.
        let problem = LPProblem {
            num_vars: 2,
            equalities: vec![
                (rats(&[(3, 7), (2, 11)]), rat(5, 13)),
                (rats(&[(0, 1), (1, 1)]), rat(1, 9)),
            ],
            inequalities: vec![],
            nonneg: true,
        };
        let x = feasible_point(&problem);
        assert_eq!(x[1], rat(1, 9));
        assert_eq!(x[0], (rat(5, 13) - rat(2, 11) * rat(1, 9)) * rat(7, 3));
    }
}

//! Exact flag-algebra computations for triangle-free digraphs.
//!
//! The crate enumerates small triangle-free digraphs and partially labeled
//! "flags" over them, computes densities and flag products in exact rational
//! arithmetic, and assembles the linear and quadratic inequality systems used
//! to bound the minimum out-degree forcing a directed triangle (the m = 1 case
//! of the Caccetta-Häggkvist conjecture).  On top of the algebra it provides:
//!
//! * regeneration of the Cauchy-Schwarz, regularity, induction and fork
//!   inequality tables from first principles, with a diff against the
//!   hardcoded transcriptions shipped in [`tables`];
//! * verification of a numeric certificate establishing that every 0.3465 n
//!   out-regular digraph on n vertices contains a directed triangle
//!   ([`certificate`]);
//! * an exact-arithmetic cutting-plane search that rediscovers such
//!   certificates ([`search`]), built on a rational simplex solver ([`lp`])
//!   and a Jacobi eigensolver ([`eigen`]);
//! * an independent brute-force oracle used by the test-suite to cross-check
//!   every density computation ([`oracle`]).

pub mod algebra;
pub mod certificate;
pub mod digraph;
pub mod eigen;
pub mod flags;
pub mod inequalities;
pub mod lp;
pub mod oracle;
pub mod search;
pub mod tables;


pub use algebra::{LinearForm, Rational};
pub use certificate::{Certificate, VerificationReport};
pub use digraph::Digraph;
pub use flags::{Basis, BasisName, Flag};


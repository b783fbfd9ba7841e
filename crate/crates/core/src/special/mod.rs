//! Zeta-type functions, their derivatives and Laurent data.

mod contour;
mod hurwitz;
mod lfunc;
mod stieltjes;
mod target;

pub use contour::{contour_derivative, laurent_extract, LaurentExpansion, MAX_NODES};
pub use hurwitz::{hurwitz_zeta, riemann_zeta, EvalAccuracy, MIN_REAL_PART};
pub use lfunc::{dedekind_quadratic, dirichlet_l};
pub use stieltjes::{stieltjes_gamma, stieltjes_gamma_limit, MAX_STIELTJES_INDEX};
pub use target::{evaluate_target, growth_exponent, parse_complex, Family, Pole, TargetFunction};

use num_complex::Complex64;

use crate::error::Result;

/// `f^{(k)}(s)` for the family `f` by contour differentiation.
pub fn derivative(family: &Family, k: u32, s: Complex64, acc: &EvalAccuracy) -> Result<Complex64> {
    TargetFunction::new(family.clone(), k).value(s, acc)
}

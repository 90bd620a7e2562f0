//! Special functions, quadrature, root finding and one-dimensional
//! minimisation shared by the rest of the crate.

mod minimize;
mod quad;
mod roots;
mod special;

pub use minimize::{brent_min, minimize_1d, minimize_1d_grid};
pub use quad::{adaptive_integrate, integrate, integrate_points, integrate_to_infinity, integrate_vec, Integral};
pub use roots::find_root;
pub use special::{
    chi2_cdf, chi2_pdf, chi2_sf, ln_1m_exp, ln_add, ln_q_function, ln_reg_lower_gamma, ln_reg_upper_gamma,
    ln_sin_power_integral, ln_sin_power_integral_sc, ln_wallis, log_sum_exp, q_function,
    reg_lower_gamma, reg_upper_gamma, sin_power_integral, IncGamma,
};

use crate::error::{domain, Result};

/// Stopping rule shared by the iterative routines.
///
/// A routine stops when its error estimate falls below
/// `max(abs_tol, rel_tol * |value|)` or after `max_iter` steps (subdivisions for
/// quadrature, iterations for root finding and minimisation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        let t = Tolerance { abs_tol, rel_tol, max_iter };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return domain("tolerances must be nonnegative");
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return domain("at least one of abs_tol, rel_tol must be positive");
        }
        if self.max_iter == 0 {
            return domain("max_iter must be at least 1");
        }
        Ok(())
    }

    pub(crate) fn bound(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_tol: 1e-300, rel_tol: 1e-10, max_iter: 2000 }
    }
}

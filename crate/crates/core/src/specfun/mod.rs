//! Real special functions used by the eigenvalue formulas.

mod bessel;
mod erf;
mod expint;
mod gamma;
mod hyperu;
mod identity;

pub use bessel::{bessel_k0, bessel_k1, bessel_k_int, scaled_k, BesselLadder};
pub use erf::{erfc, gauss_q};
pub use expint::{expint_n, expint_n_scaled};
pub use gamma::{
    binomial, digamma_half, digamma_int, factorial, gamma, gamma_half, gamma_int, harmonic, ln_gamma,
    lower_inc_gamma_int, upper_inc_gamma_int,
};
pub use hyperu::{hyp_u, hyp_u_with};
pub use identity::{integral_identity_sides, verify_integral_identity};

use crate::error::{Error, Result};

/// Accuracy controls for series and quadrature based evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FnAccuracy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for FnAccuracy {
    fn default() -> Self {
        FnAccuracy {
            rel_tol: 1e-12,
            max_terms: 500,
        }
    }
}

impl FnAccuracy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-6) {
            return Err(Error::InvalidParameter(format!("rel_tol {rel_tol} outside (0, 1e-6]")));
        }
        if max_terms < 50 {
            return Err(Error::InvalidParameter(format!("max_terms {max_terms} below 50")));
        }
        Ok(FnAccuracy { rel_tol, max_terms })
    }
}

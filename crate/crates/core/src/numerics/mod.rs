//! Shared numerical kernels: principal-branch roots, the complex error
//! function family, a monic cubic solver, Brent's method and oscillatory
//! quadrature.

mod branch;
mod brent;
mod cubic;
mod erf;
mod quadrature;

pub use branch::{principal_cbrt, principal_sqrt};
pub use brent::brent_root;
pub use cubic::cubic_roots_complex;
pub use erf::{erf_complex, erfc_scaled, erfc_scaled_checked, faddeeva};
pub use quadrature::{filon_exp_uniform, filon_gaussian_uniform, gaussian_panel};

use crate::Real;

/// Tolerances shared by the root finders, quadratures and special
/// functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig<T> {
    pub root_tol: T,
    pub quad_tol: T,
    pub erf_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for ToleranceConfig<T> {
    fn default() -> Self {
        Self {
            root_tol: T::tol(1e-12),
            quad_tol: T::tol(1e-8),
            erf_tol: T::tol(1e-10),
            max_iter: 200,
        }
    }
}

impl<T: Real> ToleranceConfig<T> {
    /// Checks that every tolerance is positive and finite and that at
    /// least one iteration is allowed.
    pub fn validate(&self) -> Result<(), NumericsError> {
        for (name, v) in [
            ("root_tol", self.root_tol),
            ("quad_tol", self.quad_tol),
            ("erf_tol", self.erf_tol),
        ] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(NumericsError::InvalidTolerance {
                    name,
                    value: v.to_f64_lossy(),
                });
            }
        }
        if self.max_iter == 0 {
            return Err(NumericsError::InvalidTolerance {
                name: "max_iter",
                value: 0.0,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("root finder did not converge in {iterations} iterations (last bracket [{lo}, {hi}])")]
    MaxIterations { iterations: usize, lo: f64, hi: f64 },
    #[error("erfc_scaled evaluated outside its accuracy region at z = {z_re} + {z_im}i (value {re} + {im}i)")]
    AccuracyLoss { z_re: f64, z_im: f64, re: f64, im: f64 },
    #[error("tolerance {name} must be positive and finite, got {value}")]
    InvalidTolerance { name: &'static str, value: f64 },
}

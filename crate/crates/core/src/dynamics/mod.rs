//! Excited-state amplitude `a2(t)` of a two-level atom coupled to an
//! isotropic band edge, by several independent routes, and the spectrum
//! of the emitted photon.
//!
//! Everything here is dimensionless: times are `beta t`, detunings
//! `delta_hat = delta_g / beta`. In these units the amplitude obeys
//!
//! ```text
//! da/dt = -\int_0^t K(t - t') a(t') dt',   K(tau) = e^{-i pi/4} e^{i delta_hat tau} / sqrt(pi tau)
//! ```
//!
//! with Laplace transform `a(s) = sqrt(s - i delta_hat) / (s sqrt(s - i delta_hat) - e^{3 i pi/4})`.

mod analytic;
mod fit;
mod laplace;
mod roots;
mod spectrum;
mod volterra;
mod ww;

pub use analytic::{a2_analytic, a2_asymptotic, a2_asymptotic_with, trapped_fraction, DEFAULT_ASYMPTOTIC_START};
pub use fit::{best_exponential_fit, ExponentialFit};
pub use laplace::{a2_laplace, a2_laplace_dimensionless, a2_talbot, a2_talbot_with, TalbotOptions};
pub use roots::{dressed_roots, RootSet};
pub use spectrum::{emission_spectrum, emission_spectrum_with, SpectrumOptions, SpectrumTrace, MIN_SPECTRUM_TIME};
pub use volterra::{volterra_solve, volterra_solve_with, VolterraOptions, VolterraSolution};
pub use ww::ww_decay;

use num_complex::Complex;

use crate::numerics::NumericsError;
use crate::Real;

/// Largest `|delta_hat|` accepted by the band-edge solvers. Beyond it the
/// dynamics is either frozen or Markovian; use [`a2_asymptotic`] or
/// [`ww_decay`] there.
pub const MAX_DELTA_HAT: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("|delta_hat| = {delta_hat} exceeds {max}; use the asymptotic or Weisskopf-Wigner form")]
    DetuningOutOfRange { delta_hat: f64, max: f64 },
    #[error("closed-form and cubic-solver roots disagree by {deviation:e} at delta_hat = {delta_hat}")]
    RootMismatch { delta_hat: f64, deviation: f64 },
    #[error("dressed roots nearly coincide at delta_hat = {delta_hat} (separation {separation:e}); the residue weights are ill-conditioned, use the Volterra or Talbot solver")]
    DegenerateRoots { delta_hat: f64, separation: f64 },
    #[error("closed form overflowed at beta t = {time}")]
    EvaluationOverflow { time: f64 },
    #[error("asymptotic form requested at beta t = {time} < {start}")]
    TooEarly { time: f64, start: f64 },
    #[error("step-halving error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    StepTooCoarse { estimate: f64, tolerance: f64 },
    #[error("a(s) is singular at s = {re} + {im}i")]
    OnSingularity { re: f64, im: f64 },
    #[error("Talbot inversion did not converge at beta t = {time} (change {change:e} between contour refinements)")]
    ContourFailure { time: f64, change: f64 },
    #[error("spectrum needs a trace reaching beta t >= {needed}, got {got}")]
    TraceTooShort { needed: f64, got: f64 },
    #[error("spectrum needs an analytic or Volterra trace for the same detuning, got {0}")]
    UnsupportedTrace(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Which solver produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Analytic,
    Asymptotic,
    Volterra,
    Talbot,
    WeisskopfWigner,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Asymptotic => "asymptotic",
            Method::Volterra => "volterra",
            Method::Talbot => "talbot",
            Method::WeisskopfWigner => "weisskopf_wigner",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sampled excited-state amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayTrace<T> {
    times: Vec<T>,
    amplitude: Vec<Complex<T>>,
    method: Method,
    delta_hat: Option<T>,
}

impl<T: Real> DecayTrace<T> {
    pub fn new(
        times: Vec<T>,
        amplitude: Vec<Complex<T>>,
        method: Method,
        delta_hat: Option<T>,
    ) -> Result<Self, DynamicsError> {
        check_times(&times)?;
        if times.len() != amplitude.len() {
            return Err(DynamicsError::InvalidInput(format!(
                "{} times but {} amplitudes",
                times.len(),
                amplitude.len()
            )));
        }
        Ok(Self { times, amplitude, method, delta_hat })
    }

    /// Times in units of `1/beta`.
    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn amplitude(&self) -> &[Complex<T>] {
        &self.amplitude
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Detuning the trace was computed for, if it depends on one.
    pub fn delta_hat(&self) -> Option<T> {
        self.delta_hat
    }

    /// `|a2|^2` at every sample.
    pub fn population(&self) -> Vec<T> {
        self.amplitude.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest amplitude difference to another trace on the same grid.
    pub fn sup_distance(&self, other: &Self) -> Result<T, DynamicsError> {
        if self.times.len() != other.times.len()
            || self.times.iter().zip(&other.times).any(|(a, b)| (*a - *b).abs() > T::tol(1e-12) * a.abs().max(T::one()))
        {
            return Err(DynamicsError::InvalidInput("traces are on different grids".into()));
        }
        Ok(self
            .amplitude
            .iter()
            .zip(&other.amplitude)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm())))
    }
}

pub(crate) fn check_times<T: Real>(times: &[T]) -> Result<(), DynamicsError> {
    if times.iter().any(|t| !(t.is_finite() && *t >= T::zero())) {
        return Err(DynamicsError::InvalidInput("times must be finite and >= 0".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DynamicsError::InvalidInput("times must be strictly increasing".into()));
    }
    Ok(())
}

pub(crate) fn check_delta_hat<T: Real>(delta_hat: T) -> Result<(), DynamicsError> {
    if !(delta_hat.abs() <= T::lit(MAX_DELTA_HAT)) {
        return Err(DynamicsError::DetuningOutOfRange {
            delta_hat: delta_hat.to_f64_lossy(),
            max: MAX_DELTA_HAT,
        });
    }
    Ok(())
}

/// Uniform grid `0, dt, ..., n dt` with `n = round(t_max / dt)`.
pub fn uniform_times<T: Real>(t_max: T, dt: T) -> Vec<T> {
    let n = (t_max / dt).round().to_f64_lossy().max(0.0) as usize;
    (0..=n).map(|i| dt * T::from_usize_lossy(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_validation() {
        let c = Complex::new(1.0, 0.0);
        assert!(DecayTrace::new(vec![0.0, 1.0], vec![c], Method::Analytic, None).is_err());
        assert!(DecayTrace::new(vec![1.0, 0.5], vec![c, c], Method::Analytic, None).is_err());
        assert!(DecayTrace::new(vec![-1.0, 0.5], vec![c, c], Method::Analytic, None).is_err());
        let t = DecayTrace::new(vec![0.0, 1.0], vec![c, Complex::new(0.6, 0.8)], Method::Volterra, Some(0.0)).unwrap();
        let p: Vec<f64> = t.population();
        assert_eq!(p[0], 1.0);
        assert!((p[1] - 1.0).abs() < 1e-15);
        assert_eq!(t.method().as_str(), "volterra");
    }

    #[test]
    fn uniform_grid() {
        let g = uniform_times(1.0, 0.25);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn method_names() {
        let names: Vec<_> = [Method::Analytic, Method::Asymptotic, Method::Volterra, Method::Talbot, Method::WeisskopfWigner]
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(names, ["analytic", "asymptotic", "volterra", "talbot", "weisskopf_wigner"]);
    }
}

//! The 1-D periodic dielectric: scatterers of index `n` and half-width `a`
//! separated by vacuum spacers of width `b`, period `L = 2a + b`.
//!
//! Units are `c = 1`: a frequency `omega` is measured in `c / length` and
//! coincides with the vacuum wavenumber.

mod bloch;
mod dispersion;
mod gaps;

pub use bloch::BlochMode;
pub use dispersion::{
    dispersion_analytic, dispersion_numeric, dispersion_rhs, dispersion_rhs_derivative,
    DispersionSolver,
};
pub use gaps::{find_gaps, find_gaps_with, GapInterval, DEFAULT_SCAN_PER_PI};

use crate::numerics::{NumericsError, ToleranceConfig};
use crate::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LatticeError {
    #[error("invalid lattice: {0}")]
    InvalidSpec(String),
    #[error("analytic dispersion needs b = 2na (isotropic case)")]
    NotIsotropicCase,
    #[error("wavevector k = {k} outside [0, pi/L] = [0, {max}]")]
    WavevectorOutOfRange { k: f64, max: f64 },
    #[error("no bracket for branch {branch} at k = {k} below omega = {window}")]
    BracketNotFound { k: f64, branch: usize, window: f64 },
    #[error("(k, omega) = ({k}, {omega}) is off the dispersion relation (residual {residual:e})")]
    OffShell { k: f64, omega: f64, residual: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Geometry and index of the 1-D crystal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec<T> {
    n: T,
    a: T,
    b: T,
    period: T,
}

impl<T: Real> LatticeSpec<T> {
    /// Builds a lattice from the scatterer index `n`, half-width `a` and
    /// spacer width `b`; the period is `2a + b`.
    pub fn new(n: T, a: T, b: T) -> Result<Self, LatticeError> {
        if !(n.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(LatticeError::InvalidSpec("parameters must be finite".into()));
        }
        if n < T::one() {
            return Err(LatticeError::InvalidSpec(format!("n = {n} must be >= 1")));
        }
        if a <= T::zero() {
            return Err(LatticeError::InvalidSpec(format!("a = {a} must be > 0")));
        }
        if b < T::zero() {
            return Err(LatticeError::InvalidSpec(format!("b = {b} must be >= 0")));
        }
        Ok(Self {
            n,
            a,
            b,
            period: T::lit(2.0) * a + b,
        })
    }

    /// The special geometry `b = 2na` in which the dispersion relation can
    /// be inverted in closed form.
    pub fn isotropic(n: T, a: T) -> Result<Self, LatticeError> {
        Self::new(n, a, T::lit(2.0) * n * a)
    }

    pub fn n(&self) -> T {
        self.n
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// Lattice constant `L = 2a + b`.
    pub fn period(&self) -> T {
        self.period
    }

    /// Edge of the first Brillouin zone, `pi / L`.
    pub fn zone_edge(&self) -> T {
        T::PI() / self.period
    }

    /// True iff `|b - 2na| <= 1e-12 L`.
    pub fn isotropic_case(&self) -> bool {
        (self.b - T::lit(2.0) * self.n * self.a).abs() <= T::tol(1e-12) * self.period
    }

    pub(crate) fn check_k(&self, k: T) -> Result<(), LatticeError> {
        let max = self.zone_edge();
        let slack = T::tol(1e-12) * max;
        if k.is_nan() || k < -slack || k > max + slack {
            return Err(LatticeError::WavevectorOutOfRange {
                k: k.to_f64_lossy(),
                max: max.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

/// Dielectric fluctuation `u(x)`: `n^2 - 1` inside a scatterer, 0 in the
/// spacer. `x` is reduced into the unit cell centred on a scatterer.
pub fn epsilon_fluct<T: Real>(spec: &LatticeSpec<T>, x: T) -> T {
    let l = spec.period;
    let xr = x - l * (x / l).round();
    if xr.abs() < spec.a {
        spec.n * spec.n - T::one()
    } else {
        T::zero()
    }
}

/// Scattering potential `Phi(x) = -omega^2 u(x)`.
pub fn scattering_potential<T: Real>(spec: &LatticeSpec<T>, x: T, omega: T) -> T {
    -omega * omega * epsilon_fluct(spec, x)
}

/// Sampled dispersion branches on a uniform grid `k in [0, pi/L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure<T> {
    lattice: LatticeSpec<T>,
    k: Vec<T>,
    bands: Vec<Vec<T>>,
}

impl<T: Real> BandStructure<T> {
    /// Samples `num_bands` branches at `num_k >= 2` evenly spaced
    /// wavevectors with the general root solver.
    pub fn compute(
        lattice: LatticeSpec<T>,
        num_k: usize,
        num_bands: usize,
        tol: &ToleranceConfig<T>,
    ) -> Result<Self, LatticeError> {
        if num_k < 2 {
            return Err(LatticeError::InvalidSpec(format!(
                "need at least 2 k points, got {num_k}"
            )));
        }
        let edge = lattice.zone_edge();
        let k: Vec<T> = (0..num_k)
            .map(|i| edge * T::from_usize_lossy(i) / T::from_usize_lossy(num_k - 1))
            .collect();
        let window = DispersionSolver::<T>::default_window(&lattice, num_bands.saturating_sub(1));
        let solver = DispersionSolver::new(lattice, window, *tol)?;
        let bands = (0..num_bands)
            .map(|m| k.iter().map(|&kk| solver.solve(kk, m)).collect())
            .collect::<Result<Vec<Vec<T>>, _>>()?;
        Ok(Self { lattice, k, bands })
    }

    /// Assembles a band structure from precomputed samples.
    pub fn from_samples(
        lattice: LatticeSpec<T>,
        k: Vec<T>,
        bands: Vec<Vec<T>>,
    ) -> Result<Self, LatticeError> {
        if k.len() < 2 || bands.iter().any(|b| b.len() != k.len()) {
            return Err(LatticeError::InvalidSpec(
                "every branch needs one frequency per k sample (at least 2)".into(),
            ));
        }
        Ok(Self { lattice, k, bands })
    }

    pub fn lattice(&self) -> &LatticeSpec<T> {
        &self.lattice
    }

    pub fn k(&self) -> &[T] {
        &self.k
    }

    pub fn num_bands(&self) -> usize {
        self.bands.len()
    }

    pub fn branch(&self, m: usize) -> Option<&[T]> {
        self.bands.get(m).map(|b| b.as_slice())
    }

    pub fn bands(&self) -> &[Vec<T>] {
        &self.bands
    }

    /// Largest `|RHS(omega) - cos(kL)|` over every sample.
    pub fn max_residual(&self) -> T {
        let l = self.lattice.period;
        let mut worst = T::zero();
        for band in &self.bands {
            for (&k, &w) in self.k.iter().zip(band) {
                worst = worst.max((dispersion_rhs(&self.lattice, w) - (k * l).cos()).abs());
            }
        }
        worst
    }
}

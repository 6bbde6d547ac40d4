use super::{positive, BandEdgeError};
use crate::lattice1d::BandStructure;
use crate::Real;

/// Which extremum of a branch the expansion is taken around.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// Bottom of the branch: `omega = omega_g + A (k - k0)^2`.
    Lower,
    /// Top of the branch: `omega = omega_g - A (k - k0)^2`.
    Upper,
}

/// Quadratic expansion of a branch around a band extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEdgeModel<T> {
    pub omega_g: T,
    pub k0: T,
    /// Curvature `A > 0`.
    pub curvature: T,
    pub edge: Edge,
}

impl<T: Real> BandEdgeModel<T> {
    pub fn new(omega_g: T, k0: T, curvature: T, edge: Edge) -> Result<Self, BandEdgeError> {
        positive("curvature", curvature)?;
        if !(omega_g.is_finite() && k0.is_finite()) {
            return Err(BandEdgeError::InvalidParameter("omega_g and k0 must be finite".into()));
        }
        Ok(Self { omega_g, k0, curvature, edge })
    }

    /// A lower-edge model with the rough curvature `omega_g / k0^2`.
    pub fn with_estimated_curvature(omega_g: T, k0: T) -> Result<Self, BandEdgeError> {
        positive("k0", k0)?;
        Self::new(omega_g, k0, omega_g / (k0 * k0), Edge::Lower)
    }

    /// The order-of-magnitude curvature `omega_g / k0^2` (infinite at `k0 = 0`).
    pub fn curvature_estimate(&self) -> T {
        self.omega_g / (self.k0 * self.k0)
    }

    pub fn omega(&self, k: T) -> T {
        let d = k - self.k0;
        match self.edge {
            Edge::Lower => self.omega_g + self.curvature * d * d,
            Edge::Upper => self.omega_g - self.curvature * d * d,
        }
    }
}

/// Fits a [`BandEdgeModel`] to branch `branch` of a sampled band structure.
///
/// The edge sits at `k = 0` or `k = pi/L`, whichever end holds the
/// branch minimum (lower edge) or maximum (upper edge). Branches are even
/// about both ends, so one-sided differences `d_j = |omega(k0 +- jh) -
/// omega(k0)|` give curvature estimates `D_j = d_j/(jh)^2 = A + O(h^2)`,
/// combined as `1.5 D_1 - 0.6 D_2 + 0.1 D_3` to cancel the `h^2` and `h^4`
/// terms. The slope `(4 d_1 - d_2)/(2h)` must be below `1e-3` (units of
/// `c`).
pub fn band_edge_from_structure<T: Real>(
    bs: &BandStructure<T>,
    branch: usize,
    edge: Edge,
) -> Result<BandEdgeModel<T>, BandEdgeError> {
    let w = bs.branch(branch).ok_or(BandEdgeError::NoSuchBranch {
        branch,
        available: bs.num_bands(),
    })?;
    let k = bs.k();
    if k.len() < 4 {
        return Err(BandEdgeError::InsufficientSamples { needed: 4, got: k.len() });
    }
    let last = k.len() - 1;
    let pick_first = match edge {
        Edge::Lower => w[0] <= w[last],
        Edge::Upper => w[0] >= w[last],
    };
    let (idx, dir): (usize, isize) = if pick_first { (0, 1) } else { (last, -1) };
    let at = |j: usize| w[(idx as isize + dir * j as isize) as usize];
    let h = (k[1] - k[0]).abs();
    let d = |j: usize| match edge {
        Edge::Lower => at(j) - at(0),
        Edge::Upper => at(0) - at(j),
    };
    let (d1, d2, d3) = (d(1), d(2), d(3));
    let slope = (T::lit(4.0) * d1 - d2) / (T::lit(2.0) * h);
    if slope.abs() > T::lit(1e-3) {
        return Err(BandEdgeError::NotAnExtremum {
            k0: k[idx].to_f64_lossy(),
            slope: slope.to_f64_lossy(),
        });
    }
    let dj = |dj: T, j: f64| dj / (T::lit(j * j) * h * h);
    let curvature =
        T::lit(1.5) * dj(d1, 1.0) - T::lit(0.6) * dj(d2, 2.0) + T::lit(0.1) * dj(d3, 3.0);
    BandEdgeModel::new(at(0), k[idx], curvature, edge)
}

/// Density of photon states per unit frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DosModel<T> {
    /// `rho = scale * omega^2`.
    FreeSpace { scale: T },
    /// `rho = strength / sqrt(omega - omega_g)` above the edge, zero below.
    IsotropicBandEdge { omega_g: T, strength: T },
}

impl<T: Real> DosModel<T> {
    pub fn free_space(scale: T) -> Result<Self, BandEdgeError> {
        Ok(Self::FreeSpace { scale: positive("scale", scale)? })
    }

    pub fn band_edge(omega_g: T, strength: T) -> Result<Self, BandEdgeError> {
        if !omega_g.is_finite() {
            return Err(BandEdgeError::InvalidParameter("omega_g must be finite".into()));
        }
        Ok(Self::IsotropicBandEdge { omega_g, strength: positive("strength", strength)? })
    }

    /// Band-edge DOS normalised so that [`super::kernel_from_dos`]
    /// converges to [`super::kernel_band_edge`] for coupling `beta`:
    /// `strength = beta^{3/2} / pi`.
    pub fn band_edge_for_coupling(omega_g: T, beta: T) -> Result<Self, BandEdgeError> {
        positive("beta", beta)?;
        Self::band_edge(omega_g, beta.powf(T::lit(1.5)) / T::PI())
    }

    /// Mode density per unit volume of the isotropic model built from
    /// `model`: every direction shares the expansion around `|k| = k0`, and
    /// both sides of the shell count, giving `k0^2 / (2 pi^2 sqrt(A))`.
    pub fn from_edge_model(model: &BandEdgeModel<T>) -> Result<Self, BandEdgeError> {
        if model.edge != Edge::Lower {
            return Err(BandEdgeError::UnsupportedEdge);
        }
        let strength =
            model.k0 * model.k0 / (T::lit(2.0) * T::PI() * T::PI() * model.curvature.sqrt());
        Self::band_edge(model.omega_g, strength)
    }
}

pub fn dos_eval<T: Real>(model: &DosModel<T>, omega: T) -> T {
    match *model {
        DosModel::FreeSpace { scale } => scale * omega * omega,
        DosModel::IsotropicBandEdge { omega_g, strength } => {
            if omega <= omega_g {
                T::zero()
            } else {
                strength / (omega - omega_g).sqrt()
            }
        }
    }
}

use num_complex::Complex;

use super::{dos_eval, positive, BandEdgeError, DosModel, EmitterSpec};
use crate::numerics::{filon_gaussian_uniform, ToleranceConfig};
use crate::scalar::{cis, cx};
use crate::Real;

/// Memory kernel of the isotropic band edge,
/// `K(tau) = beta^{3/2} e^{-i(pi/4 - delta_g tau)} / sqrt(pi tau)`.
pub fn kernel_band_edge<T: Real>(em: &EmitterSpec<T>, tau: T) -> Result<Complex<T>, BandEdgeError> {
    if !(tau > T::zero()) {
        return Err(BandEdgeError::SingularAtZero { tau: tau.to_f64_lossy() });
    }
    let modulus = em.beta_three_halves() / (T::PI() * tau).sqrt();
    Ok(cis(em.delta_g * tau - T::FRAC_PI_4()) * modulus)
}

/// The free-space reservoir responds instantaneously: its kernel is
/// `weight * delta(tau)` with `weight = gamma21 / 2`, which turns the
/// amplitude equation into `da/dt = -weight * a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImmediateResponseKernel<T> {
    pub weight: T,
}

pub fn free_space_kernel<T: Real>(em: &EmitterSpec<T>) -> Result<ImmediateResponseKernel<T>, BandEdgeError> {
    Ok(ImmediateResponseKernel { weight: gamma_free_space(em)? / T::lit(2.0) })
}

/// Free-space spontaneous emission rate from the physical block.
pub fn gamma_free_space<T: Real>(em: &EmitterSpec<T>) -> Result<T, BandEdgeError> {
    em.physical
        .map(|p| p.gamma21())
        .ok_or(BandEdgeError::MissingPhysicalBlock)
}

/// [`kernel_from_dos_with`] at default tolerances.
pub fn kernel_from_dos<T: Real>(
    model: &DosModel<T>,
    em: &EmitterSpec<T>,
    tau: T,
    cutoff: T,
) -> Result<Complex<T>, BandEdgeError> {
    kernel_from_dos_with(model, em, tau, cutoff, &ToleranceConfig::default())
}

const BASE_PANELS: usize = 2400;

/// Kernel `\int rho(omega) e^{-i(omega - omega12) tau} d omega` by
/// quadrature, with `omega12 = omega_g + delta_g` and the coupling carried
/// by the DOS strength (see [`DosModel::band_edge_for_coupling`]).
///
/// The frequency cutoff is imposed as a smooth roll-off
/// `e^{-(omega - omega_g)/Lambda}`, `Lambda = cutoff - omega_g`; a hard cut
/// would leave an `O((Lambda tau)^{-1/2})` ringing error, the roll-off an
/// `O(1/(Lambda tau))` one. After `omega = omega_g + u^2` the edge
/// singularity is gone: the integrand is `2 u rho(omega_g + u^2)` times
/// `e^{-(1/Lambda + i tau) u^2}` on `[0, 6 sqrt(Lambda)]`. The Gaussian
/// factor is integrated exactly panel by panel and the amplitude linearly.
/// Two panel counts are compared; their difference is the error estimate
/// checked against `quad_tol`.
pub fn kernel_from_dos_with<T: Real>(
    model: &DosModel<T>,
    em: &EmitterSpec<T>,
    tau: T,
    cutoff: T,
    tol: &ToleranceConfig<T>,
) -> Result<Complex<T>, BandEdgeError> {
    tol.validate()?;
    if !(tau > T::zero()) {
        return Err(BandEdgeError::SingularAtZero { tau: tau.to_f64_lossy() });
    }
    let (omega_g, strength) = match *model {
        DosModel::FreeSpace { .. } => return Err(BandEdgeError::InstantaneousKernel),
        DosModel::IsotropicBandEdge { omega_g, strength } => (omega_g, strength),
    };
    let lambda = positive("cutoff - omega_g", cutoff - omega_g)?;
    let u_max = T::lit(6.0) * lambda.sqrt();
    let kappa = cx(T::one() / lambda, tau);
    let two = T::lit(2.0);
    let level = |panels: usize| {
        let h = u_max / T::from_usize_lossy(panels);
        let amp: Vec<Complex<T>> = (0..=panels)
            .map(|j| {
                let u = h * T::from_usize_lossy(j);
                let a = if j == 0 {
                    two * strength
                } else {
                    two * u * dos_eval(model, omega_g + u * u)
                };
                cx(a, T::zero())
            })
            .collect();
        filon_gaussian_uniform(&amp, h, kappa)
    };
    let coarse = level(BASE_PANELS);
    let fine = level(2 * BASE_PANELS);
    let estimate = (fine - coarse).norm();
    let allowed = tol.quad_tol * fine.norm();
    if !(estimate <= allowed) {
        return Err(BandEdgeError::QuadratureFailure {
            estimate: estimate.to_f64_lossy(),
            tolerance: allowed.to_f64_lossy(),
        });
    }
    Ok(fine * cis(em.delta_g * tau))
}

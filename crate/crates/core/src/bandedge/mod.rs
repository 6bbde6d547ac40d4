//! Effective-mass description of a band edge, the densities of states it
//! induces, and the reservoir memory kernels seen by an emitter.

mod emitter;
mod kernel;
mod model;

pub use emitter::{EmitterSpec, PhysicalEmitter, HBAR, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
pub use kernel::{
    free_space_kernel, gamma_free_space, kernel_band_edge, kernel_from_dos, kernel_from_dos_with,
    ImmediateResponseKernel,
};
pub use model::{band_edge_from_structure, dos_eval, BandEdgeModel, DosModel, Edge};

use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BandEdgeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("band {branch} does not exist (structure has {available})")]
    NoSuchBranch { branch: usize, available: usize },
    #[error("need at least {needed} k samples for the edge fit, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("k = {k0} is not a band extremum: slope d omega/dk = {slope:e}")]
    NotAnExtremum { k0: f64, slope: f64 },
    #[error("the kernel is singular at tau = {tau}; only tau > 0 may be evaluated")]
    SingularAtZero { tau: f64 },
    #[error("kernel quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureFailure { estimate: f64, tolerance: f64 },
    #[error("the emitter has no physical parameter block")]
    MissingPhysicalBlock,
    #[error("the free-space reservoir has an instantaneous kernel; use free_space_kernel")]
    InstantaneousKernel,
    #[error("only a band that rises above its edge induces an inverse-square-root DOS")]
    UnsupportedEdge,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub(crate) fn positive<T: crate::Real>(name: &str, v: T) -> Result<T, BandEdgeError> {
    if v > T::zero() && v.is_finite() {
        Ok(v)
    } else {
        Err(BandEdgeError::InvalidParameter(format!("{name} = {v} must be positive and finite")))
    }
}

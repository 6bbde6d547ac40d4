//! Photonic band structures of a 1-D dielectric stack and the spontaneous
//! emission dynamics of a two-level atom coupled to a photonic band edge.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: complex error function, cubic roots, Brent's method and
//!   oscillatory quadrature.
//! * [`lattice1d`]: the periodic dielectric, its dispersion relation, gaps
//!   and Bloch modes.
//! * [`bandedge`]: effective-mass band-edge models, densities of states and
//!   reservoir memory kernels.
//! * [`dynamics`]: excited-state amplitude of the atom by several
//!   independent routes (closed form, long-time asymptote, Volterra
//!   marching, Talbot inversion) and the emitted spectrum.
//!
//! Every type is generic over the scalar `T: Real` (`f32` or `f64`). The
//! aliases at the crate root fix `T = f64`, which is what the tolerances
//! quoted in the docs assume.
//!
//! Units: lattice quantities use `c = 1`, so frequencies carry units of
//! `c / length`. Atom dynamics are dimensionless: time in `1/beta`,
//! detunings and Laplace variables in `beta`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandedge;
pub mod dynamics;
pub mod lattice1d;
pub mod numerics;
pub mod scalar;

pub use scalar::Real;

use num_complex::Complex;

pub type Complex64 = Complex<f64>;

pub type Lattice = lattice1d::LatticeSpec<f64>;
pub type Bands = lattice1d::BandStructure<f64>;
pub type Gap = lattice1d::GapInterval<f64>;
pub type Mode = lattice1d::BlochMode<f64>;
pub type Tolerances = numerics::ToleranceConfig<f64>;

pub type EdgeModel = bandedge::BandEdgeModel<f64>;
pub type Dos = bandedge::DosModel<f64>;
pub type Emitter = bandedge::EmitterSpec<f64>;
pub type PhysicalEmitter = bandedge::PhysicalEmitter<f64>;

pub type Roots = dynamics::RootSet<f64>;
pub type Trace = dynamics::DecayTrace<f64>;
pub type Spectrum = dynamics::SpectrumTrace<f64>;

/// Any error produced by the library, for callers that do not care which
/// module failed.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] numerics::NumericsError),
    #[error(transparent)]
    Lattice(#[from] lattice1d::LatticeError),
    #[error(transparent)]
    BandEdge(#[from] bandedge::BandEdgeError),
    #[error(transparent)]
    Dynamics(#[from] dynamics::DynamicsError),
}

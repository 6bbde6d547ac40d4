use super::{positive, BandEdgeError};
use crate::Real;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// SI description of the atom: transition angular frequency (rad/s),
/// dipole moment (C m), and the two constants the couplings depend on.
///
/// The SI magnitudes are far outside `f32` range, so the couplings are
/// always formed in `f64` and converted at the end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalEmitter<T> {
    pub omega12: T,
    pub dipole: T,
    pub epsilon0: T,
    pub hbar: T,
}

impl<T: Real> PhysicalEmitter<T> {
    pub fn new(omega12: T, dipole: T) -> Result<Self, BandEdgeError> {
        Self::with_constants(omega12, dipole, T::lit(VACUUM_PERMITTIVITY), T::lit(HBAR))
    }

    pub fn with_constants(omega12: T, dipole: T, epsilon0: T, hbar: T) -> Result<Self, BandEdgeError> {
        positive("omega12", omega12)?;
        positive("dipole", dipole)?;
        positive("epsilon0", epsilon0)?;
        positive("hbar", hbar)?;
        Ok(Self { omega12, dipole, epsilon0, hbar })
    }

    fn parts(&self) -> (f64, f64, f64, f64) {
        (
            self.omega12.to_f64_lossy(),
            self.dipole.to_f64_lossy(),
            self.epsilon0.to_f64_lossy(),
            self.hbar.to_f64_lossy(),
        )
    }

    /// `beta^{3/2} = omega12^{7/2} mu^2 / (6 pi eps0 hbar c^3)`.
    pub fn beta_three_halves(&self) -> f64 {
        let (w, mu, e0, hb) = self.parts();
        w.powf(3.5) * mu * mu / (6.0 * std::f64::consts::PI * e0 * hb * SPEED_OF_LIGHT.powi(3))
    }

    pub fn beta(&self) -> T {
        T::lit(self.beta_three_halves().powf(2.0 / 3.0))
    }

    /// Free-space decay rate `omega12^3 mu^2 / (3 pi eps0 hbar c^3)`.
    pub fn gamma21(&self) -> T {
        let (w, mu, e0, hb) = self.parts();
        T::lit(w.powi(3) * mu * mu / (3.0 * std::f64::consts::PI * e0 * hb * SPEED_OF_LIGHT.powi(3)))
    }

    /// Inverts the `beta` formula for the dipole moment at fixed
    /// `omega12` and constants.
    pub fn dipole_for_beta(omega12: T, beta: T, epsilon0: T, hbar: T) -> T {
        let (w, b, e0, hb) = (
            omega12.to_f64_lossy(),
            beta.to_f64_lossy(),
            epsilon0.to_f64_lossy(),
            hbar.to_f64_lossy(),
        );
        let mu2 = b.powf(1.5) * 6.0 * std::f64::consts::PI * e0 * hb * SPEED_OF_LIGHT.powi(3)
            / w.powf(3.5);
        T::lit(mu2.sqrt())
    }
}

/// Coupling of a two-level atom to a band-edge reservoir.
///
/// `delta_g` is the transition frequency measured from the band edge,
/// `omega12 - omega_g`: negative values place the transition inside the gap,
/// where a photon-atom bound state forms. It enters the memory kernel as
/// `e^{+i delta_g tau}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterSpec<T> {
    pub beta: T,
    pub delta_g: T,
    pub physical: Option<PhysicalEmitter<T>>,
}

impl<T: Real> EmitterSpec<T> {
    pub fn new(beta: T, delta_g: T) -> Result<Self, BandEdgeError> {
        positive("beta", beta)?;
        if !delta_g.is_finite() {
            return Err(BandEdgeError::InvalidParameter("delta_g must be finite".into()));
        }
        Ok(Self { beta, delta_g, physical: None })
    }

    /// Detuning given in units of `beta`.
    pub fn with_delta_hat(beta: T, delta_hat: T) -> Result<Self, BandEdgeError> {
        Self::new(beta, delta_hat * beta)
    }

    /// Coupling derived from SI atomic parameters.
    pub fn from_physical(physical: PhysicalEmitter<T>, delta_g: T) -> Result<Self, BandEdgeError> {
        let mut em = Self::new(physical.beta(), delta_g)?;
        em.physical = Some(physical);
        Ok(em)
    }

    /// `delta_g / beta`.
    pub fn delta_hat(&self) -> T {
        self.delta_g / self.beta
    }

    pub fn beta_three_halves(&self) -> T {
        self.beta.powf(T::lit(1.5))
    }

    /// Recomputes `beta` from the physical block, if any, and reports the
    /// relative mismatch against the stored value.
    pub fn physical_mismatch(&self) -> Option<T> {
        self.physical.map(|p| {
            let b32 = T::lit(p.beta_three_halves());
            ((b32 - self.beta_three_halves()) / b32).abs()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rubidium_like() -> PhysicalEmitter<f64> {
        PhysicalEmitter::new(2.4e15, 2.5e-29).unwrap()
    }

    #[test]
    fn validation() {
        assert!(EmitterSpec::new(0.0, 1.0).is_err());
        assert!(EmitterSpec::new(1.0, f64::INFINITY).is_err());
        assert!(PhysicalEmitter::new(-1.0, 1e-29).is_err());
        let e = EmitterSpec::with_delta_hat(2.0, -3.5).unwrap();
        assert_eq!(e.delta_g, -7.0);
        assert_eq!(e.delta_hat(), -3.5);
    }

    #[test]
    fn ratio_of_couplings() {
        let p = rubidium_like();
        let ratio = p.beta_three_halves() / p.gamma21();
        let want = p.omega12.sqrt() / 2.0;
        assert!((ratio - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn stored_beta_consistent() {
        let em = EmitterSpec::from_physical(rubidium_like(), 0.0).unwrap();
        assert!(em.physical_mismatch().unwrap() <= 1e-12);
        assert!(EmitterSpec::new(1.0, 0.0).unwrap().physical_mismatch().is_none());
    }

    #[test]
    fn dipole_round_trip() {
        let p = rubidium_like();
        let em = EmitterSpec::from_physical(p, 0.0).unwrap();
        let mu = PhysicalEmitter::dipole_for_beta(p.omega12, em.beta, p.epsilon0, p.hbar);
        assert!((mu - p.dipole).abs() <= 1e-10 * p.dipole);
    }
}

use num_complex::Complex;

use super::{check_times, DecayTrace, DynamicsError, Method};
use crate::Real;

/// Weisskopf-Wigner decay `a2(t) = e^{-gamma t / 2}`. The grid and `gamma`
/// share whatever time unit the caller chooses.
pub fn ww_decay<T: Real>(gamma: T, times: &[T]) -> Result<DecayTrace<T>, DynamicsError> {
    if !(gamma >= T::zero() && gamma.is_finite()) {
        return Err(DynamicsError::InvalidInput(format!("gamma = {gamma} must be >= 0")));
    }
    check_times(times)?;
    let half = T::lit(0.5);
    let amp = times
        .iter()
        .map(|&t| Complex::new((-gamma * t * half).exp(), T::zero()))
        .collect();
    DecayTrace::new(times.to_vec(), amp, Method::WeisskopfWigner, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let t = ww_decay(0.0, &[0.0, 1.0, 5.0]).unwrap();
        assert!(t.population().iter().all(|&p| p == 1.0));
        let t = ww_decay(1.0, &[0.0, 1.0]).unwrap();
        assert!((t.population()[1] - (-1.0f64).exp()).abs() < 1e-15);
        let gamma = 0.7;
        let half_life = 2.0f64.ln() / gamma;
        let t = ww_decay(gamma, &[half_life]).unwrap();
        assert!((t.population()[0] - 0.5).abs() < 1e-15);
        assert!(ww_decay(-1.0, &[0.0]).is_err());
    }
}

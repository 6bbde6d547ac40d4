use super::DynamicsError;
use crate::Real;

/// Least-squares fit `P(t) ~ A e^{-gamma t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialFit<T> {
    pub amplitude: T,
    pub rate: T,
    /// `sqrt(mean((P - fit)^2)) / sqrt(mean(P^2))`.
    pub rms_relative: T,
}

/// Fits a single decaying exponential to sampled populations.
///
/// For fixed `gamma` the best amplitude is linear, so only the rate is
/// searched: a log-spaced scan over `[1e-6, 1e3] / span` followed by golden
/// section around the best scan point. A rate of 0 is also tried.
pub fn best_exponential_fit<T: Real>(times: &[T], population: &[T]) -> Result<ExponentialFit<T>, DynamicsError> {
    if times.len() != population.len() || times.len() < 2 {
        return Err(DynamicsError::InvalidInput("fit needs at least two (t, P) samples of equal length".into()));
    }
    if times.iter().chain(population).any(|v| !v.is_finite()) {
        return Err(DynamicsError::InvalidInput("fit samples must be finite".into()));
    }
    let t0 = times[0];
    let span = times[times.len() - 1] - t0;
    if !(span > T::zero()) {
        return Err(DynamicsError::InvalidInput("fit needs a positive time span".into()));
    }
    // residual with the optimal amplitude, times measured from t0
    let eval = |g: T| -> (T, T) {
        let (mut pe, mut ee) = (T::zero(), T::zero());
        for (&t, &p) in times.iter().zip(population) {
            let e = (-g * (t - t0)).exp();
            pe += p * e;
            ee += e * e;
        }
        let a = if ee > T::zero() { pe / ee } else { T::zero() };
        let r = times
            .iter()
            .zip(population)
            .fold(T::zero(), |s, (&t, &p)| {
                let d = p - a * (-g * (t - t0)).exp();
                s + d * d
            });
        (r, a)
    };

    let scan = 200usize;
    let lo = (T::lit(1e-6) / span).ln();
    let hi = (T::lit(1e3) / span).ln();
    let rate_at = |i: usize| (lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(scan)).exp();
    let mut best_i = 0;
    let mut best_r = T::infinity();
    for i in 0..=scan {
        let (r, _) = eval(rate_at(i));
        if r < best_r {
            best_r = r;
            best_i = i;
        }
    }
    let (mut a, mut b) = (rate_at(best_i.saturating_sub(1)), rate_at((best_i + 1).min(scan)));
    let phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (eval(c).0, eval(d).0);
    for _ in 0..100 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c).0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d).0;
        }
        if (b - a).abs() <= T::tol(1e-12) * b.abs() {
            break;
        }
    }
    let mut rate = (a + b) / T::lit(2.0);
    let (mut res, mut amp) = eval(rate);
    let (r0, a0) = eval(T::zero());
    if r0 < res {
        rate = T::zero();
        res = r0;
        amp = a0;
    }
    // amplitude referenced to t = 0 rather than the first sample
    let amplitude = amp * (rate * t0).exp();
    let n = T::from_usize_lossy(times.len());
    let p2 = population.iter().fold(T::zero(), |s, &p| s + p * p) / n;
    let rms_relative = if p2 > T::zero() { (res / n).sqrt() / p2.sqrt() } else { T::zero() };
    Ok(ExponentialFit { amplitude, rate, rms_relative })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_exponential() {
        let t: Vec<f64> = (0..100).map(|i| 2.0 + 0.06 * i as f64).collect();
        let p: Vec<f64> = t.iter().map(|t| 0.8 * (-0.37 * t).exp()).collect();
        let f = best_exponential_fit(&t, &p).unwrap();
        assert!((f.rate - 0.37).abs() < 1e-7, "{f:?}");
        assert!((f.amplitude - 0.8).abs() < 1e-6);
        assert!(f.rms_relative < 1e-7);
    }

    #[test]
    fn constant_is_rate_zero() {
        let t: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let f = best_exponential_fit(&t, &[0.5; 10]).unwrap();
        assert_eq!(f.rate, 0.0);
        assert!((f.amplitude - 0.5).abs() < 1e-14);
    }

    #[test]
    fn non_exponential_has_large_residual() {
        let t: Vec<f64> = (0..200).map(|i| 0.05 * i as f64).collect();
        let p: Vec<f64> = t.iter().map(|t| 0.5 + 0.5 * (-t).exp() * (3.0 * t).cos()).collect();
        assert!(best_exponential_fit(&t, &p).unwrap().rms_relative > 0.05);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(best_exponential_fit(&[0.0], &[1.0]).is_err());
        assert!(best_exponential_fit(&[0.0, 1.0], &[1.0]).is_err());
        assert!(best_exponential_fit(&[1.0, 1.0], &[1.0, 1.0]).is_err());
    }
}

use num_complex::Complex;

use super::{check_times, dressed_roots, DecayTrace, DynamicsError, Method};
use crate::bandedge::EmitterSpec;
use crate::scalar::cis;
use crate::Real;

/// Default earliest `beta t` accepted by [`a2_asymptotic`].
pub const DEFAULT_ASYMPTOTIC_START: f64 = 10.0;

/// Closed-form amplitude
///
/// ```text
/// a2(t) = e^{i delta_hat t} [ 2 b1 x1 e^{x1^2 t} + b2 (x2 + y2) e^{x2^2 t}
///                             - sum_j b_j y_j e^{x_j^2 t} erfc(y_j sqrt t) ]
/// ```
///
/// on a grid of `beta t` values, with the last sum evaluated through the
/// scaled complementary error function.
pub fn a2_analytic<T: Real>(em: &EmitterSpec<T>, times: &[T]) -> Result<DecayTrace<T>, DynamicsError> {
    check_times(times)?;
    let dh = em.delta_hat();
    let roots = dressed_roots(dh)?;
    let amp = times
        .iter()
        .map(|&t| {
            let a = (roots.pole_part(t) + roots.cut_part(t)?) * cis(dh * t);
            if a.re.is_finite() && a.im.is_finite() {
                Ok(a)
            } else {
                Err(DynamicsError::EvaluationOverflow { time: t.to_f64_lossy() })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    DecayTrace::new(times.to_vec(), amp, Method::Analytic, Some(dh))
}

/// [`a2_asymptotic_with`] with the default start `beta t >= 10`.
pub fn a2_asymptotic<T: Real>(em: &EmitterSpec<T>, times: &[T]) -> Result<DecayTrace<T>, DynamicsError> {
    a2_asymptotic_with(em, times, T::lit(DEFAULT_ASYMPTOTIC_START))
}

/// Long-time form: the two exponential dressed terms plus the leading
/// branch-cut tail `(1/(2 sqrt pi)) [sum_j b_j / x_j^2] e^{i delta_hat t} t^{-3/2}`.
pub fn a2_asymptotic_with<T: Real>(
    em: &EmitterSpec<T>,
    times: &[T],
    start: T,
) -> Result<DecayTrace<T>, DynamicsError> {
    check_times(times)?;
    if let Some(&t) = times.iter().find(|&&t| t < start) {
        return Err(DynamicsError::TooEarly {
            time: t.to_f64_lossy(),
            start: start.to_f64_lossy(),
        });
    }
    let dh = em.delta_hat();
    let roots = dressed_roots(dh)?;
    let c3 = roots.cut_tail_coefficient();
    let amp: Vec<Complex<T>> = times
        .iter()
        .map(|&t| (roots.pole_part(t) + c3 / (t * t.sqrt())) * cis(dh * t))
        .collect();
    DecayTrace::new(times.to_vec(), amp, Method::Asymptotic, Some(dh))
}

/// Long-time excited-state population `|2 b1 x1|^2` when the `x1` term
/// does not decay (`Re x1^2 >= -1e-10`), else 0.
pub fn trapped_fraction<T: Real>(em: &EmitterSpec<T>) -> Result<T, DynamicsError> {
    let roots = dressed_roots(em.delta_hat())?;
    Ok(if roots.has_bound_state() {
        roots.bound_amplitude().norm_sqr()
    } else {
        T::zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::uniform_times;

    fn em(d: f64) -> EmitterSpec<f64> {
        EmitterSpec::with_delta_hat(1.0, d).unwrap()
    }

    #[test]
    fn reference_values() {
        let a = a2_analytic(&em(0.0), &[1.0]).unwrap().amplitude()[0];
        assert!((a - Complex::new(0.4802475535951174, 0.3787178429909837)).norm() < 1e-12);
        let a = a2_analytic(&em(-10.0), &[1.0]).unwrap().amplitude()[0];
        assert!((a - Complex::new(0.9368001167453446, 0.30660417800346873)).norm() < 1e-12);
        let p = a2_analytic(&em(10.0), &[1.0]).unwrap().population()[0];
        assert!((p - 0.52170).abs() < 5e-5);
        let p = a2_analytic(&em(1.0), &[3.0]).unwrap().population()[0];
        assert!((p - 0.14671).abs() < 5e-5);
    }

    #[test]
    fn starts_at_one_and_stays_normalised() {
        for d in [-10.0, -3.5, -1.0, 0.0, 1.0, 10.0] {
            let tr = a2_analytic(&em(d), &uniform_times(20.0, 0.05)).unwrap();
            assert!((tr.amplitude()[0] - Complex::new(1.0, 0.0)).norm() < 1e-8);
            assert!(tr.population().iter().all(|&p| p <= 1.0 + 1e-6));
        }
    }

    #[test]
    fn trapped_examples() {
        let deep = trapped_fraction(&em(-10.0)).unwrap();
        assert!((deep - 0.97047).abs() < 1e-5);
        assert!((trapped_fraction(&em(0.0)).unwrap() - 4.0 / 9.0).abs() < 1e-12);
        assert!((trapped_fraction(&em(1.0)).unwrap() - 0.15094).abs() < 1e-5);
        assert!(trapped_fraction(&em(10.0)).unwrap() < 1e-5);
        let vals: Vec<f64> = (0..=40).map(|i| trapped_fraction(&em(-10.0 + 0.5 * i as f64)).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn asymptotic_guard_and_accuracy() {
        assert!(matches!(a2_asymptotic(&em(0.0), &[5.0, 20.0]), Err(DynamicsError::TooEarly { .. })));
        for d in [-1.0, 0.0, 1.0] {
            let exact = a2_analytic(&em(d), &[50.0]).unwrap().amplitude()[0];
            let asym = a2_asymptotic(&em(d), &[50.0]).unwrap().amplitude()[0];
            assert!((exact - asym).norm() <= 0.01 * exact.norm(), "d={d}");
        }
    }

    #[test]
    fn deep_gap_asymptote_is_bound_term() {
        let r = dressed_roots(-10.0).unwrap();
        let t: f64 = 50.0;
        let bound = (r.bound_amplitude() * (r.x[0] * r.x[0] * t).exp()).norm();
        let other = (r.b[1] * (r.x[1] + r.y[1]) * (r.x[1] * r.x[1] * t).exp()).norm()
            + r.cut_tail_coefficient().norm() / t.powf(1.5);
        assert!(bound > 100.0 * other);
    }

    #[test]
    fn f32_smoke() {
        let e = EmitterSpec::with_delta_hat(1.0f32, 0.0).unwrap();
        let tr = a2_analytic(&e, &[0.0, 1.0]).unwrap();
        assert!((tr.amplitude()[1] - Complex::new(0.480_247_55, 0.378_717_8)).norm() < 1e-4);
    }
}

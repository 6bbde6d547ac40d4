use num_complex::Complex;

use super::{dressed_roots, DecayTrace, DynamicsError, Method, RootSet};
use crate::bandedge::EmitterSpec;
use crate::numerics::{erfc_scaled_checked, filon_exp_uniform, principal_sqrt};
use crate::scalar::{cis, cx};
use crate::Real;

/// Shortest trace (in `beta t`) accepted by [`emission_spectrum`].
pub const MIN_SPECTRUM_TIME: f64 = 100.0;

/// Photon spectrum left behind by the decay.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace<T> {
    /// `delta_k = omega_k - omega_12` in units of `beta`.
    pub detunings: Vec<T>,
    /// Photon weight per unit `delta_k / beta` at each detuning.
    pub density: Vec<T>,
    /// Long-time excited-state population `|2 b1 x1|^2` held in the
    /// non-decaying dressed state.
    pub bound_weight: T,
    /// Integral of the density over the whole band.
    pub emitted_weight: T,
}

/// Controls for [`emission_spectrum_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions<T> {
    /// Upper limit of `u = sqrt(delta_k + delta_hat)` for the weight integral.
    pub u_max: T,
    /// Number of trapezoid intervals on `[0, u_max]`.
    pub n_u: usize,
}

impl<T: Real> Default for SpectrumOptions<T> {
    fn default() -> Self {
        Self { u_max: T::lit(30.0), n_u: 3000 }
    }
}

pub fn emission_spectrum<T: Real>(
    trace: &DecayTrace<T>,
    em: &EmitterSpec<T>,
    detunings: &[T],
) -> Result<SpectrumTrace<T>, DynamicsError> {
    emission_spectrum_with(trace, em, detunings, &SpectrumOptions::default())
}

/// Photon spectrum `|b_k|^2` from a sampled amplitude.
///
/// The photon amplitude is the time integral of `a2(t) e^{i delta_k t}`.
/// The non-decaying part `c e^{i Omega t}` (`c = 2 b1 x1`,
/// `Omega = Im x1^2 + delta_hat`) is subtracted before quadrature and
/// handled in closed form; what is left decays and is integrated by Filon
/// over the trace, plus the `t^{-3/2}` branch-cut tail beyond its end. The
/// bound part leaves two contributions: a step in the radiated amplitude
/// and a photon cloud `|c|^2 / (Omega + delta_k)^2` that stays with the
/// atom. Both are included in `density`, which is the time-averaged photon
/// distribution; with the DOS `(1/pi) x^{-1/2}`, `x = delta_k + delta_hat`,
/// its integral plus `bound_weight` is 1.
pub fn emission_spectrum_with<T: Real>(
    trace: &DecayTrace<T>,
    em: &EmitterSpec<T>,
    detunings: &[T],
    opts: &SpectrumOptions<T>,
) -> Result<SpectrumTrace<T>, DynamicsError> {
    let dh = em.delta_hat();
    match (trace.method(), trace.delta_hat()) {
        (Method::Analytic | Method::Volterra, Some(d)) if (d - dh).abs() <= T::tol(1e-12) * dh.abs().max(T::one()) => {}
        (m, d) => {
            return Err(DynamicsError::UnsupportedTrace(format!(
                "{m} trace for delta_hat = {:?}, emitter has {}",
                d.map(|v| v.to_f64_lossy()),
                dh.to_f64_lossy()
            )))
        }
    }
    let times = trace.times();
    let end = times.last().copied().unwrap_or_else(T::zero);
    if end < T::lit(MIN_SPECTRUM_TIME) {
        return Err(DynamicsError::TraceTooShort {
            needed: MIN_SPECTRUM_TIME,
            got: end.to_f64_lossy(),
        });
    }
    if times[0] != T::zero() {
        return Err(DynamicsError::InvalidInput("spectrum trace must start at t = 0".into()));
    }
    if opts.n_u < 2 || !(opts.u_max > T::zero()) {
        return Err(DynamicsError::InvalidInput("spectrum weight grid needs n_u >= 2 and u_max > 0".into()));
    }
    if detunings.iter().any(|d| !d.is_finite()) {
        return Err(DynamicsError::InvalidInput("detunings must be finite".into()));
    }

    let roots = dressed_roots(dh)?;
    let sp = Spectral::new(trace, &roots)?;
    let density = detunings
        .iter()
        .map(|&dk| {
            let x = dk + dh;
            if x <= T::zero() {
                Ok(T::zero())
            } else {
                Ok(sp.weight(dk, x)? / (T::PI() * x.sqrt()))
            }
        })
        .collect::<Result<Vec<_>, DynamicsError>>()?;

    // Weight integral in u = sqrt(x): rho d(delta_k) = (2/pi) du.
    let hu = opts.u_max / T::from_usize_lossy(opts.n_u);
    let mut emitted = T::zero();
    for i in 0..=opts.n_u {
        let u = hu * T::from_usize_lossy(i);
        let x = u * u;
        let w = sp.weight(x - dh, x)?;
        let f = if i == 0 || i == opts.n_u { T::lit(0.5) } else { T::one() };
        emitted += f * w;
    }
    emitted = emitted * hu * T::lit(2.0) / T::PI();

    Ok(SpectrumTrace {
        detunings: detunings.to_vec(),
        density,
        bound_weight: sp.bound_weight,
        emitted_weight: emitted,
    })
}

struct Spectral<'a, T> {
    times: &'a [T],
    remainder: Vec<Complex<T>>,
    uniform_dt: Option<T>,
    c: Complex<T>,
    omega: T,
    tail: Complex<T>,
    bound_weight: T,
}

impl<'a, T: Real> Spectral<'a, T> {
    fn new(trace: &'a DecayTrace<T>, roots: &RootSet<T>) -> Result<Self, DynamicsError> {
        let times = trace.times();
        let (c, omega) = if roots.has_bound_state() {
            let x1sq = roots.x[0] * roots.x[0];
            (roots.bound_amplitude(), x1sq.im + roots.delta_hat)
        } else {
            (cx(T::zero(), T::zero()), T::zero())
        };
        let remainder = trace
            .amplitude()
            .iter()
            .zip(times)
            .map(|(&a, &t)| a - c * cis(omega * t))
            .collect();
        let dt = times[1] - times[0];
        let uniform = times
            .windows(2)
            .all(|w| ((w[1] - w[0]) - dt).abs() <= T::tol(1e-9) * dt);
        Ok(Self {
            times,
            remainder,
            uniform_dt: uniform.then_some(dt),
            c,
            omega,
            tail: roots.cut_tail_coefficient(),
            bound_weight: c.norm_sqr(),
        })
    }

    /// `|A + i c/(Omega + dk)|^2 + |c|^2/(Omega + dk)^2` for `x = dk + delta_hat > 0`.
    fn weight(&self, dk: T, x: T) -> Result<T, DynamicsError> {
        let body = match self.uniform_dt {
            Some(dt) => filon_exp_uniform(&self.remainder, dt, dk),
            None => filon_exp_nonuniform(self.times, &self.remainder, dk),
        };
        let a = body + self.tail_integral(x)?;
        let den = self.omega + dk;
        let (step, cloud) = if self.c.norm_sqr() == T::zero() {
            (cx(T::zero(), T::zero()), T::zero())
        } else {
            (cx(T::zero(), T::one()) * self.c / den, self.c.norm_sqr() / (den * den))
        };
        Ok((a + step).norm_sqr() + cloud)
    }

    /// `\int_T^inf C3 t^{-3/2} e^{i x t} dt`.
    fn tail_integral(&self, x: T) -> Result<Complex<T>, DynamicsError> {
        let t = *self.times.last().unwrap();
        let phase = cis(x * t);
        let mut v = phase * (T::lit(2.0) / t.sqrt());
        if x != T::zero() {
            let mix = cx(T::zero(), -x);
            let w = erfc_scaled_checked(principal_sqrt(mix * t))?;
            v = v + cx(T::zero(), T::lit(2.0) * x) * T::PI().sqrt() / principal_sqrt(mix) * phase * w;
        }
        Ok(self.tail * v)
    }
}

/// `\int f(t) e^{i omega t} dt` with `f` piecewise linear on an arbitrary grid.
fn filon_exp_nonuniform<T: Real>(times: &[T], values: &[Complex<T>], omega: T) -> Complex<T> {
    let mut acc = cx(T::zero(), T::zero());
    for k in 0..times.len() - 1 {
        let h = times[k + 1] - times[k];
        let (e1, e2) = linear_moments(omega * h);
        let f0 = values[k];
        let df = values[k + 1] - f0;
        acc = acc + cis(omega * times[k]) * (f0 * e1 + df * e2) * h;
    }
    acc
}

/// `(\int_0^1 e^{i theta v} dv, \int_0^1 v e^{i theta v} dv)`.
fn linear_moments<T: Real>(theta: T) -> (Complex<T>, Complex<T>) {
    let it = cx(T::zero(), theta);
    if theta.abs() < T::lit(0.05) {
        let mut term = cx(T::one(), T::zero());
        let (mut e1, mut e2) = (cx(T::zero(), T::zero()), cx(T::zero(), T::zero()));
        for k in 0..10usize {
            if k > 0 {
                term = term * it / T::from_usize_lossy(k);
            }
            e1 = e1 + term / T::from_usize_lossy(k + 1);
            e2 = e2 + term / T::from_usize_lossy(k + 2);
        }
        (e1, e2)
    } else {
        let e = cis(theta);
        let one = cx(T::one(), T::zero());
        let e1 = (e - one) / it;
        (e1, e / it - e1 / it)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{a2_analytic, a2_laplace_dimensionless, uniform_times};

    fn em(d: f64) -> EmitterSpec<f64> {
        EmitterSpec::with_delta_hat(1.0, d).unwrap()
    }

    fn trace(d: f64) -> DecayTrace<f64> {
        a2_analytic(&em(d), &uniform_times(120.0, 0.01)).unwrap()
    }

    #[test]
    fn unitarity() {
        for d in [-1.0, 0.0, 1.0] {
            let s = emission_spectrum(&trace(d), &em(d), &[]).unwrap();
            let total = s.emitted_weight + s.bound_weight;
            assert!((total - 1.0).abs() < 0.02, "d={d}: {} + {}", s.emitted_weight, s.bound_weight);
        }
    }

    #[test]
    fn decayed_emitter_has_little_bound_weight() {
        let s = emission_spectrum(&trace(10.0), &em(10.0), &[]).unwrap();
        assert!(s.bound_weight < 1e-3);
        assert!((s.emitted_weight + s.bound_weight - 1.0).abs() < 0.02);
    }

    #[test]
    fn density_zero_in_gap_and_nonnegative() {
        let d = 0.5;
        let grid: Vec<f64> = (0..200).map(|i| -5.0 + 0.05 * i as f64).collect();
        let s = emission_spectrum(&trace(d), &em(d), &grid).unwrap();
        for (dk, rho) in grid.iter().zip(&s.density) {
            assert!(*rho >= 0.0);
            if dk + d <= 0.0 {
                assert_eq!(*rho, 0.0);
            }
        }
        assert!(s.density.iter().any(|&r| r > 0.0));
    }

    #[test]
    fn radiated_amplitude_matches_transform() {
        // With the tail added, the Filon integral of the remainder is the
        // Laplace transform of the remainder at s = -i delta_k.
        let d = 0.0;
        let tr = trace(d);
        let roots = dressed_roots(d).unwrap();
        let sp = Spectral::new(&tr, &roots).unwrap();
        for dk in [0.3, 1.0, 4.0] {
            let body = filon_exp_uniform(&sp.remainder, 0.01, dk) + sp.tail_integral(dk + d).unwrap();
            let s = Complex::new(0.0, -dk);
            let want = a2_laplace_dimensionless(d, s).unwrap() - sp.c / (s - Complex::new(0.0, sp.omega));
            assert!((body - want).norm() < 1e-4, "dk={dk}: {body} vs {want}");
        }
    }

    #[test]
    fn nonuniform_filon_matches_uniform() {
        let t: Vec<f64> = (0..=400).map(|i| 0.025 * i as f64).collect();
        let f: Vec<Complex<f64>> = t.iter().map(|t| Complex::new((-t).exp(), t.sin())).collect();
        for w in [0.0, 0.7, 30.0] {
            let a = filon_exp_uniform(&f, 0.025, w);
            let b = filon_exp_nonuniform(&t, &f, w);
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_short_or_foreign_traces() {
        let short = a2_analytic(&em(0.0), &uniform_times(50.0, 0.1)).unwrap();
        assert!(matches!(emission_spectrum(&short, &em(0.0), &[1.0]), Err(DynamicsError::TraceTooShort { .. })));
        let other = trace(1.0);
        assert!(matches!(emission_spectrum(&other, &em(0.0), &[1.0]), Err(DynamicsError::UnsupportedTrace(_))));
        let ww = crate::dynamics::ww_decay(1.0, &uniform_times(120.0, 0.1)).unwrap();
        assert!(matches!(emission_spectrum(&ww, &em(0.0), &[1.0]), Err(DynamicsError::UnsupportedTrace(_))));
    }
}

use num_complex::Complex;

use super::{check_delta_hat, DecayTrace, DynamicsError, Method};
use crate::bandedge::EmitterSpec;
use crate::scalar::{cis, cx};
use crate::Real;

/// Controls for [`volterra_solve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolterraOptions<T> {
    /// Largest accepted step-halving error estimate.
    pub tolerance: T,
    /// Run a second pass at `dt/2` to estimate the error.
    pub error_control: bool,
    /// Multiplies the kernel; 0 switches the reservoir off.
    pub coupling: T,
}

impl<T: Real> Default for VolterraOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::tol(1e-4),
            error_control: true,
            coupling: T::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolterraSolution<T> {
    pub trace: DecayTrace<T>,
    /// `(4/3) max |a_dt - a_{dt/2}|` on the shared grid, when requested.
    pub error_estimate: Option<T>,
}

/// [`volterra_solve_with`] with default options (error control at
/// tolerance `1e-4`).
pub fn volterra_solve<T: Real>(em: &EmitterSpec<T>, t_max: T, dt: T) -> Result<VolterraSolution<T>, DynamicsError> {
    volterra_solve_with(em, t_max, dt, &VolterraOptions::default())
}

/// Marches the integro-differential equation on the grid `t_n = n dt`
/// (`beta t` units) up to `t_max`.
///
/// With `tau = u^2` the history term becomes
/// `f(t) = -2 G \int_0^{sqrt t} e^{i delta_hat u^2} a(t - u^2) du`,
/// `G = e^{-i pi/4}/sqrt(pi)`, whose integrand is smooth. It is integrated
/// by the trapezoid rule on a uniform `u` grid of spacing `dt`, with `a`
/// interpolated linearly in `t`, plus a partial last interval ending at
/// `u = sqrt t`. The step uses an Adams-Bashforth-2 predictor and a
/// trapezoidal corrector on `f - f_s`, where `f_s(t) = -2 G sqrt t` is the
/// non-smooth leading behaviour, integrated exactly.
pub fn volterra_solve_with<T: Real>(
    em: &EmitterSpec<T>,
    t_max: T,
    dt: T,
    opts: &VolterraOptions<T>,
) -> Result<VolterraSolution<T>, DynamicsError> {
    if !(dt > T::zero() && t_max >= T::zero() && t_max.is_finite()) {
        return Err(DynamicsError::InvalidInput(format!("need dt > 0 and t_max >= 0, got dt = {dt}, t_max = {t_max}")));
    }
    let steps_f = (t_max / dt).round().to_f64_lossy();
    if steps_f > 1e7 {
        return Err(DynamicsError::InvalidInput(format!("t_max/dt = {steps_f} exceeds 1e7")));
    }
    let dh = em.delta_hat();
    check_delta_hat(dh)?;
    let steps = steps_f as usize;
    let coarse = march(dh, dt, steps, opts.coupling);
    let error_estimate = if opts.error_control {
        let fine = march(dh, dt / T::lit(2.0), 2 * steps, opts.coupling);
        let diff = coarse
            .iter()
            .enumerate()
            .fold(T::zero(), |m, (i, a)| m.max((*a - fine[2 * i]).norm()));
        let est = diff * T::lit(4.0 / 3.0);
        if !(est <= opts.tolerance) {
            return Err(DynamicsError::StepTooCoarse {
                estimate: est.to_f64_lossy(),
                tolerance: opts.tolerance.to_f64_lossy(),
            });
        }
        Some(est)
    } else {
        None
    };
    let times = (0..=steps).map(|i| dt * T::from_usize_lossy(i)).collect();
    Ok(VolterraSolution {
        trace: DecayTrace::new(times, coarse, Method::Volterra, Some(dh))?,
        error_estimate,
    })
}

fn march<T: Real>(dh: T, dt: T, steps: usize, coupling: T) -> Vec<Complex<T>> {
    let zero = cx(T::zero(), T::zero());
    let one = cx(T::one(), T::zero());
    let mut a = vec![one; steps + 1];
    if steps == 0 || coupling == T::zero() {
        return a;
    }
    let g = cis(-T::FRAC_PI_4()) * (coupling / T::PI().sqrt());
    let minus_two_g = g * T::lit(-2.0);
    let h = dt;
    let t_end = dt * T::from_usize_lossy(steps);
    let nodes = (t_end.sqrt() / h).floor().to_f64_lossy() as usize + 2;
    let u: Vec<T> = (0..=nodes).map(|j| h * T::from_usize_lossy(j)).collect();
    let phase: Vec<Complex<T>> = u.iter().map(|&uj| cis(dh * uj * uj)).collect();

    // f - f_s at the previous two steps.
    let mut f = vec![zero; steps + 1];
    let fs = |t: T| minus_two_g * t.sqrt();
    let half = T::lit(0.5);
    let four_thirds = T::lit(4.0 / 3.0);
    for n in 1..=steps {
        let t = dt * T::from_usize_lossy(n);
        let tp = dt * T::from_usize_lossy(n - 1);
        let (i0, i1) = history(&a, &u, &phase, n, t, dt, dh);
        let eval = |an: Complex<T>| minus_two_g * (i0 + i1 * an);
        let singular = g * (-four_thirds) * (t * t.sqrt() - tp * tp.sqrt());
        let prev = f[n - 1];
        let pred = if n == 1 {
            a[0] + prev * dt + singular
        } else {
            a[n - 1] + (prev * T::lit(1.5) - f[n - 2] * half) * dt + singular
        };
        let f_pred = eval(pred) - fs(t);
        let corr = a[n - 1] + (prev + f_pred) * (dt * half) + singular;
        a[n] = corr;
        f[n] = eval(corr) - fs(t);
    }
    a
}

/// History integral at step `n` split as `I0 + I1 a_n`.
fn history<T: Real>(
    a: &[Complex<T>],
    u: &[T],
    phase: &[Complex<T>],
    n: usize,
    t: T,
    dt: T,
    dh: T,
) -> (Complex<T>, Complex<T>) {
    let zero = cx(T::zero(), T::zero());
    let h = u[1] - u[0];
    let big_u = t.sqrt();
    let m = ((big_u / h).floor().to_f64_lossy() as usize).min(u.len() - 1);
    let m = if u[m] > big_u { m - 1 } else { m };
    // Integrand at node j as (known part, coefficient of a_n).
    let node = |j: usize| -> (Complex<T>, Complex<T>) {
        let s = (t - u[j] * u[j]) / dt;
        let mut i = s.floor().to_f64_lossy().max(0.0) as usize;
        if i > n - 1 {
            i = n - 1;
        }
        let fr = s - T::from_usize_lossy(i);
        let lo = a[i] * (T::one() - fr);
        if i + 1 == n {
            (phase[j] * lo, phase[j] * fr)
        } else {
            (phase[j] * (lo + a[i + 1] * fr), zero)
        }
    };
    let half = T::lit(0.5);
    let (mut k0, mut k1) = (zero, zero);
    let mut last = node(0);
    if m > 0 {
        k0 = last.0 * half;
        k1 = last.1 * half;
        for j in 1..m {
            let (c0, c1) = node(j);
            k0 = k0 + c0;
            k1 = k1 + c1;
        }
        last = node(m);
        k0 = (k0 + last.0 * half) * h;
        k1 = (k1 + last.1 * half) * h;
    }
    // Partial interval [u_m, sqrt t]; the integrand there ends at a(0).
    let rem = big_u - u[m];
    let end = cis(dh * t) * a[0];
    k0 = k0 + (last.0 + end) * (rem * half);
    k1 = k1 + last.1 * (rem * half);
    (k0, k1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::a2_analytic;

    fn em(d: f64) -> EmitterSpec<f64> {
        EmitterSpec::with_delta_hat(1.0, d).unwrap()
    }

    fn raw(d: f64, t_max: f64, dt: f64) -> DecayTrace<f64> {
        let opts = VolterraOptions { error_control: false, ..Default::default() };
        volterra_solve_with(&em(d), t_max, dt, &opts).unwrap().trace
    }

    #[test]
    fn zero_coupling_is_frozen() {
        let opts = VolterraOptions { coupling: 0.0, ..Default::default() };
        let s = volterra_solve_with(&em(0.0), 5.0, 0.01, &opts).unwrap();
        assert!(s.trace.amplitude().iter().all(|a| *a == Complex::new(1.0, 0.0)));
    }

    #[test]
    fn matches_closed_form() {
        for d in [-10.0, 0.0, 1.0] {
            let tr = raw(d, 2.0, 0.01);
            let ex = a2_analytic(&em(d), tr.times()).unwrap();
            let err = tr.sup_distance(&ex).unwrap();
            assert!(err < 1e-4, "d={d} err={err}");
        }
    }

    #[test]
    fn second_order() {
        let errs: Vec<f64> = [0.04, 0.02, 0.01]
            .iter()
            .map(|&dt| {
                let tr = raw(0.0, 2.0, dt);
                tr.sup_distance(&a2_analytic(&em(0.0), tr.times()).unwrap()).unwrap()
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((1.7..=2.3).contains(&order), "order {order} from {errs:?}");
        }
    }

    #[test]
    fn step_too_coarse_reported() {
        let opts = VolterraOptions { tolerance: 1e-9, ..Default::default() };
        let r = volterra_solve_with(&em(0.0), 1.0, 0.05, &opts);
        assert!(matches!(r, Err(DynamicsError::StepTooCoarse { .. })));
        let ok = volterra_solve(&em(0.0), 1.0, 0.01).unwrap();
        assert!(ok.error_estimate.unwrap() < 1e-4);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(volterra_solve(&em(0.0), 1.0, 0.0).is_err());
        assert!(volterra_solve(&em(0.0), 1e8, 1.0e-1).is_err());
    }

    #[test]
    fn f32_smoke() {
        let e = EmitterSpec::with_delta_hat(1.0f32, 0.0).unwrap();
        let opts = VolterraOptions { error_control: false, ..Default::default() };
        let s = volterra_solve_with(&e, 1.0, 0.01, &opts).unwrap();
        let last = *s.trace.amplitude().last().unwrap();
        assert!((last - Complex::new(0.480_247_55, 0.378_717_8)).norm() < 1e-3);
    }
}

use super::{NumericsError, ToleranceConfig};
use crate::Real;

/// Root of `f` on `[lo, hi]` by Brent's method.
///
/// Stops when `f(x) == 0` or the bracket is narrower than
/// `root_tol * max(1, |x|)`. There is no residual test: near a band edge the
/// slope is tiny and a small `|f|` says little about the root.
pub fn brent_root<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    lo: T,
    hi: T,
    tol: &ToleranceConfig<T>,
) -> Result<T, NumericsError> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if (fa > T::zero()) == (fb > T::zero()) || fa.is_nan() || fb.is_nan() {
        return Err(NumericsError::NoSignChange {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
            flo: fa.to_f64_lossy(),
            fhi: fb.to_f64_lossy(),
        });
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..tol.max_iter {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let width_tol = tol.root_tol * b.abs().max(T::one());
        let m = half * (c - b);
        if fb == T::zero() || m.abs() * two <= width_tol {
            return Ok(b);
        }
        let tol1 = half * width_tol;
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (T::lit(3.0) * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else if m > T::zero() {
            b + tol1
        } else {
            b - tol1
        };
        fb = f(b);
    }
    Err(NumericsError::MaxIterations {
        iterations: tol.max_iter,
        lo: b.min(c).to_f64_lossy(),
        hi: b.max(c).to_f64_lossy(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear() {
        let t = ToleranceConfig::default();
        let r: f64 = brent_root(|x| x - 1.0, 0.0, 2.0, &t).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_half_pi() {
        let t = ToleranceConfig::default();
        let r: f64 = brent_root(f64::cos, 1.0, 2.0, &t).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change() {
        let t = ToleranceConfig::default();
        let r = brent_root(|x: f64| x * x + 1.0, -1.0, 1.0, &t);
        assert!(matches!(r, Err(NumericsError::NoSignChange { .. })));
    }

    #[test]
    fn max_iterations_reported() {
        let t = ToleranceConfig {
            max_iter: 2,
            root_tol: 1e-300,
            ..Default::default()
        };
        let r = brent_root(|x: f64| x.powi(3) - 2.0, 0.0, 2.0, &t);
        assert!(matches!(r, Err(NumericsError::MaxIterations { iterations: 2, .. })));
    }

    #[test]
    fn f32_smoke() {
        let t = ToleranceConfig::<f32>::default();
        let r = brent_root(|x: f32| x * x - 2.0, 0.0, 2.0, &t).unwrap();
        assert!((r - std::f32::consts::SQRT_2).abs() < 1e-5);
    }
}

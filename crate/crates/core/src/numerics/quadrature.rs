//! Oscillatory quadrature rules that integrate the oscillating factor
//! exactly and interpolate only the slowly varying amplitude.

use num_complex::Complex;

use super::branch::principal_sqrt;
use super::erf::erfc_scaled;
use crate::scalar::{cis, cx};
use crate::Real;

/// `1 - e^{-w}`, accurate for small `|w|`.
fn one_minus_exp_neg<T: Real>(w: Complex<T>) -> Complex<T> {
    if w.norm() < T::lit(1e-3) {
        let mut term = w;
        let mut sum = w;
        for n in 2..8 {
            term = -term * w / T::from_usize_lossy(n);
            sum = sum + term;
        }
        sum
    } else {
        cx(T::one(), T::zero()) - (-w).exp()
    }
}

/// `\int_{u0}^{u1} (p + q u) e^{-kappa u^2} du` for `0 <= u0 <= u1` and
/// `Re kappa >= 0`, in closed form through the scaled complementary error
/// function (no cancellation between panel ends).
pub fn gaussian_panel<T: Real>(
    kappa: Complex<T>,
    u0: T,
    u1: T,
    p: Complex<T>,
    q: Complex<T>,
) -> Complex<T> {
    let two = T::lit(2.0);
    if kappa.norm() == T::zero() {
        return p * (u1 - u0) + q * ((u1 * u1 - u0 * u0) / two);
    }
    let sk = principal_sqrt(kappa);
    let e0 = (-(kappa * (u0 * u0))).exp();
    let e1 = (-(kappa * (u1 * u1))).exp();
    let f0 = e0 * erfc_scaled(sk * u0);
    let f1 = e1 * erfc_scaled(sk * u1);
    let gauss = (f0 - f1) * (T::PI().sqrt() / two) / sk;
    let lin = e0 * one_minus_exp_neg(kappa * (u1 * u1 - u0 * u0)) / (kappa * two);
    p * gauss + q * lin
}

/// `\int_0^{(N-1) h} g(u) e^{-kappa u^2} du` with `g` piecewise linear
/// through `values` on the grid `u_j = j h` and `Re kappa >= 0`. The same
/// closed-form panel as [`gaussian_panel`], with the error-function values
/// shared between neighbouring panels.
pub fn filon_gaussian_uniform<T: Real>(values: &[Complex<T>], h: T, kappa: Complex<T>) -> Complex<T> {
    let n = values.len();
    let zero = cx(T::zero(), T::zero());
    if n < 2 {
        return zero;
    }
    let two = T::lit(2.0);
    if kappa.norm() == T::zero() {
        return values
            .windows(2)
            .fold(zero, |acc, w| acc + (w[0] + w[1]) * (h / two));
    }
    let sk = principal_sqrt(kappa);
    let gauss_scale = cx(T::PI().sqrt() / two, T::zero()) / sk;
    let node = |j: usize| {
        let u = h * T::from_usize_lossy(j);
        let e = (-(kappa * (u * u))).exp();
        (e, e * erfc_scaled(sk * u))
    };
    let mut acc = zero;
    let (mut e0, mut f0) = node(0);
    for j in 0..n - 1 {
        let (e1, f1) = node(j + 1);
        let u0 = h * T::from_usize_lossy(j);
        let u1 = u0 + h;
        let q = (values[j + 1] - values[j]) / h;
        let p = values[j] - q * u0;
        let gauss = (f0 - f1) * gauss_scale;
        let lin = e0 * one_minus_exp_neg(kappa * (u1 * u1 - u0 * u0)) / (kappa * two);
        acc = acc + p * gauss + q * lin;
        e0 = e1;
        f0 = f1;
    }
    acc
}

/// Moments `\int_0^1 e^{i theta x} dx` and `\int_0^1 x e^{i theta x} dx`.
fn unit_moments<T: Real>(theta: T) -> (Complex<T>, Complex<T>) {
    let it = cx(T::zero(), theta);
    if theta.abs() < T::lit(0.05) {
        let mut pow = cx(T::one(), T::zero());
        let mut fact = T::one();
        let (mut m0, mut m1) = (cx(T::zero(), T::zero()), cx(T::zero(), T::zero()));
        for n in 0..12usize {
            if n > 0 {
                pow = pow * it;
                fact *= T::from_usize_lossy(n);
            }
            let nf = T::from_usize_lossy(n);
            m0 = m0 + pow / (fact * (nf + T::one()));
            m1 = m1 + pow / (fact * (nf + T::lit(2.0)));
        }
        (m0, m1)
    } else {
        let e = cis(theta);
        let m0 = (e - T::one()) / it;
        let m1 = e / it - m0 / it;
        (m0, m1)
    }
}

/// `\int_0^{(N-1) dt} f(t) e^{i omega t} dt` with `f` piecewise linear
/// through `values` on the uniform grid `t_j = j dt` (Filon-linear rule).
pub fn filon_exp_uniform<T: Real>(values: &[Complex<T>], dt: T, omega: T) -> Complex<T> {
    let n = values.len();
    if n < 2 {
        return cx(T::zero(), T::zero());
    }
    let (m0, m1) = unit_moments(omega * dt);
    // Per interval: dt e^{i w t_j} [f_j (m0 - m1) + f_{j+1} m1].
    let wl = (m0 - m1) * dt;
    let wr = m1 * dt;
    let step = cis(omega * dt);
    let mut phase = cx(T::one(), T::zero());
    let mut acc = cx(T::zero(), T::zero());
    for j in 0..n - 1 {
        if j % 256 == 0 {
            phase = cis(omega * dt * T::from_usize_lossy(j));
        }
        acc = acc + phase * (values[j] * wl + values[j + 1] * wr);
        phase = phase * step;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_panel_matches_fresnel_closed_form() {
        // \int_0^inf e^{-i tau u^2} du = (1/2) sqrt(pi/tau) e^{-i pi/4}
        for &tau in &[0.1_f64, 1.0, 10.0] {
            let kappa = Complex::new(0.0, tau);
            let mut sum = Complex::new(0.0, 0.0);
            let h = 0.5;
            // Add a tiny damping so the tail beyond U can be ignored.
            let k = kappa + Complex::new(1e-6, 0.0);
            for i in 0..20000 {
                let u0 = i as f64 * h;
                sum += gaussian_panel(k, u0, u0 + h, Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
            }
            let want = Complex::from_polar(0.5 * (PI / tau).sqrt(), -PI / 4.0);
            assert!((sum - want).norm() / want.norm() < 1e-4, "tau {tau}: {sum} vs {want}");
        }
    }

    #[test]
    fn gaussian_panel_linear_term() {
        // \int_0^2 u e^{-u^2} du = (1 - e^{-4})/2
        let v = gaussian_panel(Complex::new(1.0, 0.0), 0.0, 2.0, Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
        assert!((v.re - (1.0 - (-4.0f64).exp()) / 2.0).abs() < 1e-15);
        // \int_0^1 e^{-u^2} = sqrt(pi)/2 erf(1)
        let v = gaussian_panel(Complex::new(1.0, 0.0), 0.0, 1.0, Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
        assert!((v.re - 0.5 * PI.sqrt() * 0.842_700_792_949_714_9).abs() < 1e-14);
        // kappa = 0 falls back to polynomial
        let v = gaussian_panel(Complex::new(0.0_f64, 0.0), 1.0, 3.0, Complex::new(2.0, 0.0), Complex::new(1.0, 0.0));
        assert!((v.re - 8.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_filon_matches_panels() {
        let kappa = Complex::new(0.01, 2.0);
        let h = 0.3;
        let vals: Vec<Complex<f64>> = (0..40).map(|j| Complex::new((j as f64 * 0.1).cos(), 0.2 * j as f64)).collect();
        let fast = filon_gaussian_uniform(&vals, h, kappa);
        let mut slow = Complex::new(0.0, 0.0);
        for j in 0..39 {
            let (u0, u1) = (j as f64 * h, (j + 1) as f64 * h);
            let q = (vals[j + 1] - vals[j]) / h;
            slow += gaussian_panel(kappa, u0, u1, vals[j] - q * u0, q);
        }
        assert!((fast - slow).norm() < 1e-13);
        let flat = filon_gaussian_uniform(&vals, h, Complex::new(0.0, 0.0));
        let trap: Complex<f64> = vals.windows(2).map(|w| (w[0] + w[1]) * (h / 2.0)).sum();
        assert!((flat - trap).norm() < 1e-13);
    }

    #[test]
    fn filon_is_exact_for_linear_amplitude() {
        // \int_0^T t e^{i w t} dt, T = 10, w = 3
        let (dt, n, w) = (0.1_f64, 101, 3.0);
        let vals: Vec<_> = (0..n).map(|j| Complex::new(j as f64 * dt, 0.0)).collect();
        let got = filon_exp_uniform(&vals, dt, w);
        let t = 10.0;
        let i = Complex::new(0.0, 1.0);
        let e = Complex::from_polar(1.0, w * t);
        let want = t * e / (i * w) + (e - 1.0) / (w * w);
        assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        // small-frequency branch
        let got = filon_exp_uniform(&vals, dt, 1e-3);
        let wsmall = 1e-3;
        let e = Complex::from_polar(1.0, wsmall * t);
        let want = t * e / (i * wsmall) + (e - 1.0) / (wsmall * wsmall);
        assert!((got - want).norm() < 1e-8);
    }
}

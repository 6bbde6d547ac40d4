//! The one place that fixes the branch convention for complex roots:
//! argument in (-pi, pi], with a negative-zero imaginary part read as +0 so
//! that the negative real axis always maps to the upper half plane.

use num_complex::Complex;

use crate::Real;

fn principal_arg<T: Real>(z: Complex<T>) -> T {
    let im = if z.im == T::zero() { T::zero() } else { z.im };
    im.atan2(z.re)
}

/// Principal square root, `Re >= 0`, with `sqrt(-x) = +i sqrt(x)`.
pub fn principal_sqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = z.norm();
    if r == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let two = T::lit(2.0);
    if z.re >= T::zero() {
        let s = ((r + z.re) / two).sqrt();
        Complex::new(s, z.im / (two * s))
    } else {
        let s = ((r - z.re) / two).sqrt();
        let s = if z.im < T::zero() { -s } else { s };
        Complex::new(z.im / (two * s), s)
    }
}

/// Principal cube root: modulus `|z|^{1/3}`, argument `arg(z)/3`.
pub fn principal_cbrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = z.norm();
    if r == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    Complex::from_polar(r.cbrt(), principal_arg(z) / T::lit(3.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn sqrt_of_negative_real_is_upper() {
        let s = principal_sqrt(Complex::new(-4.0, 0.0));
        assert_eq!(s, Complex::new(0.0, 2.0));
        let s = principal_sqrt(Complex::new(-4.0, -0.0));
        assert_eq!(s, Complex::new(0.0, 2.0));
        let s = principal_sqrt(Complex::new(-4.0, -1e-300));
        assert!(s.im < 0.0);
    }

    #[test]
    fn sqrt_squares_back() {
        for &(re, im) in &[(1.0, 2.0), (-3.0, 0.5), (-0.2, -7.0), (5.0, -1.0)] {
            let z = Complex::new(re, im);
            let s = principal_sqrt(z);
            assert!(s.re >= 0.0);
            assert_abs_diff_eq!((s * s - z).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn cbrt_principal() {
        let c = principal_cbrt(Complex::new(-8.0, 0.0));
        assert_abs_diff_eq!(c.re, 2.0 * (PI / 3.0).cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(c.im, 2.0 * (PI / 3.0).sin(), epsilon = 1e-14);
        let z = Complex::new(0.3, -1.7);
        let c = principal_cbrt(z);
        assert_abs_diff_eq!((c * c * c - z).norm(), 0.0, epsilon = 1e-14);
        assert!(c.arg() > -PI / 3.0 && c.arg() <= PI / 3.0);
    }
}

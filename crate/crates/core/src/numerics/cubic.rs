use num_complex::Complex;

use super::branch::{principal_cbrt, principal_sqrt};
use crate::scalar::cx;
use crate::Real;

fn eval<T: Real>(x: Complex<T>, c2: Complex<T>, c1: Complex<T>, c0: Complex<T>) -> Complex<T> {
    ((x + c2) * x + c1) * x + c0
}

fn eval_deriv<T: Real>(x: Complex<T>, c2: Complex<T>, c1: Complex<T>) -> Complex<T> {
    (x * T::lit(3.0) + c2 * T::lit(2.0)) * x + c1
}

/// Roots of the monic cubic `x^3 + c2 x^2 + c1 x + c0`.
///
/// Cardano's formula with the numerically stable choice of the square-root
/// sign, followed by two Newton polishing steps per root. The result is
/// sorted lexicographically by `(re, im)`.
pub fn cubic_roots_complex<T: Real>(
    c2: Complex<T>,
    c1: Complex<T>,
    c0: Complex<T>,
) -> [Complex<T>; 3] {
    let three = T::lit(3.0);
    let shift = c2 / three;
    // Depressed cubic y^3 + p y + q with x = y - c2/3.
    let p = c1 - c2 * c2 / three;
    let q = c2 * c2 * c2 * T::lit(2.0 / 27.0) - c2 * c1 / three + c0;
    let half_q = q / T::lit(2.0);
    let disc = principal_sqrt(half_q * half_q + p * p * p / T::lit(27.0));
    let plus = -half_q + disc;
    let minus = -half_q - disc;
    let u3 = if plus.norm() >= minus.norm() { plus } else { minus };
    let u = principal_cbrt(u3);
    let zero = cx(T::zero(), T::zero());
    let omega = Complex::from_polar(T::one(), T::lit(2.0) * T::PI() / three);
    let mut roots = if u.norm() == T::zero() {
        [zero; 3]
    } else {
        let v = -p / (u * three);
        let omega2 = omega * omega;
        [u + v, u * omega + v * omega2, u * omega2 + v * omega]
    };
    for r in roots.iter_mut() {
        *r = *r - shift;
        for _ in 0..2 {
            let d = eval_deriv(*r, c2, c1);
            let f = eval(*r, c2, c1, c0);
            if d.norm() > T::zero() {
                let cand = *r - f / d;
                // Near a multiple root the derivative vanishes; keep the
                // step only if it actually lowers the residual.
                if eval(cand, c2, c1, c0).norm() < f.norm() {
                    *r = cand;
                }
            }
        }
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    roots
}

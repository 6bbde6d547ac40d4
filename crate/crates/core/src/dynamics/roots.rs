use num_complex::Complex;

use super::{check_delta_hat, DynamicsError};
use crate::numerics::{cubic_roots_complex, erfc_scaled_checked, principal_cbrt, principal_sqrt};
use crate::scalar::{cis, cx};
use crate::Real;

/// Dressed-state roots of `x^3 + i delta_hat x - e^{3 i pi/4} = 0` with the
/// residue weights and square roots that enter the closed-form amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSet<T> {
    pub delta_hat: T,
    pub x: [Complex<T>; 3],
    /// `b_j = x_j / ((x_j - x_i)(x_j - x_k))`.
    pub b: [Complex<T>; 3],
    /// Principal `sqrt(x_j^2)`.
    pub y: [Complex<T>; 3],
    pub a_plus: Complex<T>,
    pub a_minus: Complex<T>,
}

/// Smallest root separation, relative to the root scale, below which the
/// residue weights are considered ill-conditioned.
const DEGENERACY: f64 = 1e-5;

/// Builds the roots from the closed-form `A+-` construction (which fixes
/// the labels) and cross-checks them against the cubic solver.
///
/// `A+ = (1/2 + 1/2 sqrt(1 + 4 delta_hat^3/27))^{1/3}` with principal
/// roots, and `A- = -delta_hat / (3 A+)`, the cube root paired with `A+` so
/// that `A+ A- = -delta_hat/3`; the principal cube root of the `A-` radicand
/// gives the wrong pairing for `delta_hat > 0`. Then
///
/// ```text
/// x1 = (A+ + A-) e^{i pi/4}
/// x2 = (A+ e^{-i pi/6} - A- e^{i pi/6}) e^{-i pi/4}
/// x3 = (A+ e^{i pi/6} - A- e^{-i pi/6}) e^{3 i pi/4}
/// ```
pub fn dressed_roots<T: Real>(delta_hat: T) -> Result<RootSet<T>, DynamicsError> {
    check_delta_hat(delta_hat)?;
    let one = cx(T::one(), T::zero());
    let half = T::lit(0.5);
    let d = delta_hat;
    let radicand = one + cx(T::lit(4.0) * d * d * d / T::lit(27.0), T::zero());
    let a_plus = principal_cbrt(one * half + principal_sqrt(radicand) * half);
    let a_minus = cx(-d, T::zero()) / (a_plus * T::lit(3.0));
    let pi = T::PI();
    let six = T::lit(6.0);
    let four = T::lit(4.0);
    let x1 = (a_plus + a_minus) * cis(pi / four);
    let x2 = (a_plus * cis(-pi / six) - a_minus * cis(pi / six)) * cis(-pi / four);
    let x3 = (a_plus * cis(pi / six) - a_minus * cis(-pi / six)) * cis(T::lit(3.0) * pi / four);
    let x = [x1, x2, x3];

    let scale = x.iter().fold(T::one(), |m, r| m.max(r.norm()));
    let separation = [(0, 1), (1, 2), (0, 2)]
        .iter()
        .map(|&(i, j)| (x[i] - x[j]).norm())
        .fold(T::infinity(), T::min)
        / scale;
    if separation < T::lit(DEGENERACY) {
        return Err(DynamicsError::DegenerateRoots {
            delta_hat: d.to_f64_lossy(),
            separation: separation.to_f64_lossy(),
        });
    }
    let c0 = -cis(T::lit(3.0) * pi / four);
    let solved = cubic_roots_complex(cx(T::zero(), T::zero()), cx(T::zero(), d), c0);
    let deviation = multiset_deviation(&x, &solved) / scale;
    if !(deviation <= T::tol(1e-9)) {
        return Err(DynamicsError::RootMismatch {
            delta_hat: d.to_f64_lossy(),
            deviation: deviation.to_f64_lossy(),
        });
    }
    let b = [
        x[0] / ((x[0] - x[1]) * (x[0] - x[2])),
        x[1] / ((x[1] - x[0]) * (x[1] - x[2])),
        x[2] / ((x[2] - x[0]) * (x[2] - x[1])),
    ];
    let y = [
        principal_sqrt(x[0] * x[0]),
        principal_sqrt(x[1] * x[1]),
        principal_sqrt(x[2] * x[2]),
    ];
    Ok(RootSet { delta_hat: d, x, b, y, a_plus, a_minus })
}

/// Largest distance from a root in `a` to its greedy partner in `b`.
fn multiset_deviation<T: Real>(a: &[Complex<T>; 3], b: &[Complex<T>; 3]) -> T {
    let mut used = [false; 3];
    let mut worst = T::zero();
    for r in a {
        let mut best = (T::infinity(), 0);
        for (j, s) in b.iter().enumerate() {
            let dist = (*r - *s).norm();
            if !used[j] && dist < best.0 {
                best = (dist, j);
            }
        }
        used[best.1] = true;
        worst = worst.max(best.0);
    }
    worst
}

impl<T: Real> RootSet<T> {
    /// Residual of root `j` in the pole cubic.
    pub fn cubic_residual(&self, j: usize) -> T {
        let x = self.x[j];
        (x * x * x + x * cx(T::zero(), self.delta_hat) - cis(T::lit(0.75) * T::PI())).norm()
    }

    /// Amplitude of the non-decaying dressed term, `2 b1 x1`.
    pub fn bound_amplitude(&self) -> Complex<T> {
        self.b[0] * self.x[0] * T::lit(2.0)
    }

    /// The two exponential dressed terms of the closed form, without the
    /// common `e^{i delta_hat t}` factor.
    pub fn pole_part(&self, t: T) -> Complex<T> {
        let (x, b, y) = (&self.x, &self.b, &self.y);
        self.bound_amplitude() * (x[0] * x[0] * t).exp() + b[1] * (x[1] + y[1]) * (x[1] * x[1] * t).exp()
    }

    /// `- sum_j b_j y_j e^{x_j^2 t} erfc(y_j sqrt t)`, the branch-cut part of
    /// the closed form without the common phase, in the overflow-free
    /// scaled form.
    pub fn cut_part(&self, t: T) -> Result<Complex<T>, DynamicsError> {
        let st = t.sqrt();
        let mut acc = cx(T::zero(), T::zero());
        for j in 0..3 {
            let w = erfc_scaled_checked(self.y[j] * st)?;
            acc = acc - self.b[j] * self.y[j] * w;
        }
        Ok(acc)
    }

    /// Coefficient of `t^{-3/2}` in the long-time branch-cut term:
    /// `(1/(2 sqrt pi)) sum_j b_j / x_j^2`.
    pub fn cut_tail_coefficient(&self) -> Complex<T> {
        let s = (0..3).fold(cx(T::zero(), T::zero()), |acc, j| acc + self.b[j] / (self.x[j] * self.x[j]));
        s / (T::lit(2.0) * T::PI().sqrt())
    }

    /// True when `Re(x1^2) >= -1e-10`, i.e. the `x1` term does not decay.
    pub fn has_bound_state(&self) -> bool {
        (self.x[0] * self.x[0]).re >= T::lit(-1e-10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_detuning_roots() {
        let r = dressed_roots(0.0f64).unwrap();
        let want = [cis(PI / 4.0), cis(-5.0 * PI / 12.0), cis(11.0 * PI / 12.0)];
        for (j, w) in want.iter().enumerate() {
            assert!((r.x[j] - w).norm() < 1e-14, "x{} = {}", j + 1, r.x[j]);
        }
        let x1sq = r.x[0] * r.x[0];
        assert!((x1sq - Complex::new(0.0, 1.0)).norm() <= 1e-12);
        assert!((r.x[0] + r.x[1] + r.x[2]).norm() < 1e-14);
    }

    #[test]
    fn residuals_on_grid() {
        for i in 0..=40 {
            let d = -10.0 + 0.5 * i as f64;
            let r = dressed_roots(d).unwrap();
            for j in 0..3 {
                assert!(r.cubic_residual(j) <= 1e-10, "d={d} j={j}");
            }
            let sb = r.b[0] + r.b[1] + r.b[2];
            assert!(sb.norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_is_unity_at_zero() {
        for d in [-10.0, -3.5, -1.0, -0.5, 0.0, 0.3, 1.0, 10.0] {
            let r = dressed_roots(d).unwrap();
            let a0 = r.pole_part(0.0) + r.cut_part(0.0).unwrap();
            assert!((a0 - Complex::new(1.0, 0.0)).norm() < 1e-12, "d={d} a0={a0}");
        }
    }

    #[test]
    fn degenerate_point_is_reported() {
        let d = -(27.0f64 / 4.0).cbrt();
        assert!(matches!(dressed_roots(d), Err(DynamicsError::DegenerateRoots { .. })));
        assert!(dressed_roots(d + 1e-3).is_ok());
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(dressed_roots(2e3), Err(DynamicsError::DetuningOutOfRange { .. })));
    }

    #[test]
    fn f32_smoke() {
        let r = dressed_roots(0.0f32).unwrap();
        assert!((r.x[0] * r.x[0] - Complex::new(0.0, 1.0)).norm() < 1e-5);
    }
}

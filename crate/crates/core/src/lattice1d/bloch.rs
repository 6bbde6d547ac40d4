use num_complex::Complex;

use super::{dispersion_rhs, LatticeError, LatticeSpec};
use crate::scalar::{cis, cx};
use crate::Real;

/// Field of a Bloch mode on the unit cell `[-L/2, L/2)`:
///
/// ```text
/// E(x) = A e^{i q x}  + B e^{-i q x}    x < -a
///        C e^{i q' x} + D e^{-i q' x}   |x| < a
///        E e^{i q x}  + F e^{-i q x}    x > a
/// ```
///
/// with `q = omega` and `q' = n omega`. The coefficients are normalised to
/// `A = 1`; when the mode has no `A` component at all (`|A|` below
/// `1e-12` of the coefficient scale) it is normalised to `B = 1` instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMode<T> {
    pub spec: LatticeSpec<T>,
    pub k: T,
    pub omega: T,
    /// `[A, B, C, D, E, F]`.
    pub coefficients: [Complex<T>; 6],
}

/// Maps `(u, v)` on the left of an interface at `x0` (wavenumber `q1`) to
/// the coefficients on the right (wavenumber `q2`), matching value and
/// slope.
fn interface<T: Real>(q1: T, q2: T, x0: T, u: Complex<T>, v: Complex<T>) -> (Complex<T>, Complex<T>) {
    let rho = q1 / q2;
    let half = T::lit(0.5);
    let uu = u * cis(q1 * x0);
    let vv = v * cis(-q1 * x0);
    let r = (uu * (T::one() + rho) + vv * (T::one() - rho)) * half * cis(-q2 * x0);
    let s = (uu * (T::one() - rho) + vv * (T::one() + rho)) * half * cis(q2 * x0);
    (r, s)
}

impl<T: Real> BlochMode<T> {
    /// Solves the interface and Floquet conditions for an on-shell
    /// `(k, omega)`; the residual `|RHS(omega) - cos kL|` must be at most
    /// `1e-8`.
    pub fn new(spec: &LatticeSpec<T>, k: T, omega: T) -> Result<Self, LatticeError> {
        let residual = (dispersion_rhs(spec, omega) - (k * spec.period()).cos()).abs();
        if !(residual <= T::tol(1e-8)) || omega < T::zero() {
            return Err(LatticeError::OffShell {
                k: k.to_f64_lossy(),
                omega: omega.to_f64_lossy(),
                residual: residual.to_f64_lossy(),
            });
        }
        let one = cx(T::one(), T::zero());
        let zero = cx(T::zero(), T::zero());
        if omega == T::zero() {
            return Ok(Self {
                spec: *spec,
                k,
                omega,
                coefficients: [one, zero, one, zero, one, zero],
            });
        }
        let (q, qp, a) = (omega, spec.n() * omega, spec.a());
        let propagate = |u: Complex<T>, v: Complex<T>| {
            let (c, d) = interface(q, qp, -a, u, v);
            let (e, f) = interface(qp, q, a, c, d);
            (c, d, e, f)
        };
        let (_, _, m11, m21) = propagate(one, zero);
        let (_, _, m12, m22) = propagate(zero, one);
        let l = spec.period();
        let lambda = cis(k * l);
        let n11 = m11 - lambda * cis(-q * l);
        let n22 = m22 - lambda * cis(q * l);
        let (n12, n21) = (m12, m21);
        let row1 = n11.norm_sqr() + n12.norm_sqr();
        let row2 = n21.norm_sqr() + n22.norm_sqr();
        let scale = m11.norm_sqr() + m12.norm_sqr() + m21.norm_sqr() + m22.norm_sqr();
        let (mut av, mut bv) = if row1.max(row2) <= T::tol(1e-24) * scale {
            (one, zero)
        } else if row1 >= row2 {
            (n12, -n11)
        } else {
            (n22, -n21)
        };
        let norm = (av.norm_sqr() + bv.norm_sqr()).sqrt();
        if av.norm() > T::tol(1e-12) * norm {
            bv = bv / av;
            av = one;
        } else {
            av = av / bv;
            bv = one;
        }
        let (c, d, e, f) = propagate(av, bv);
        Ok(Self {
            spec: *spec,
            k,
            omega,
            coefficients: [av, bv, c, d, e, f],
        })
    }

    fn q(&self) -> T {
        self.omega
    }

    fn qp(&self) -> T {
        self.spec.n() * self.omega
    }

    fn pair(&self, u: Complex<T>, v: Complex<T>, q: T, x: T) -> (Complex<T>, Complex<T>) {
        let ep = cis(q * x);
        let em = cis(-q * x);
        let value = u * ep + v * em;
        let slope = (u * ep - v * em) * cx(T::zero(), q);
        (value, slope)
    }

    /// Field and derivative from the left-spacer expansion.
    pub fn left(&self, x: T) -> (Complex<T>, Complex<T>) {
        let c = &self.coefficients;
        self.pair(c[0], c[1], self.q(), x)
    }

    /// Field and derivative from the scatterer expansion.
    pub fn inner(&self, x: T) -> (Complex<T>, Complex<T>) {
        let c = &self.coefficients;
        self.pair(c[2], c[3], self.qp(), x)
    }

    /// Field and derivative from the right-spacer expansion.
    pub fn right(&self, x: T) -> (Complex<T>, Complex<T>) {
        let c = &self.coefficients;
        self.pair(c[4], c[5], self.q(), x)
    }

    /// `(E(x), E'(x))` anywhere on the line, extended from the cell
    /// `[-L/2, L/2)` by the Bloch factor `e^{ikL}` per period.
    pub fn field(&self, x: T) -> (Complex<T>, Complex<T>) {
        let l = self.spec.period();
        let half = l / T::lit(2.0);
        let j = ((x + half) / l).floor();
        let xr = x - j * l;
        let (v, s) = if xr < -self.spec.a() {
            self.left(xr)
        } else if xr <= self.spec.a() {
            self.inner(xr)
        } else {
            self.right(xr)
        };
        let phase = cis(self.k * l * j);
        (v * phase, s * phase)
    }

    fn scale(&self) -> T {
        self.coefficients.iter().fold(T::zero(), |m, c| m.max(c.norm()))
            * (T::one() + self.qp())
    }

    /// Largest mismatch of `E` and `E'` across `x = -a` and `x = +a`,
    /// relative to the coefficient scale.
    pub fn continuity_residual(&self) -> T {
        let a = self.spec.a();
        let (l0, l1) = self.left(-a);
        let (i0, i1) = self.inner(-a);
        let (j0, j1) = self.inner(a);
        let (r0, r1) = self.right(a);
        let worst = (l0 - i0)
            .norm()
            .max((l1 - i1).norm())
            .max((j0 - r0).norm())
            .max((j1 - r1).norm());
        worst / self.scale()
    }

    /// Mismatch of `E(x + L) = e^{ikL} E(x)` and the same for `E'`, for `x`
    /// in the left spacer `(a - L, -a)`: the right-spacer expansion at
    /// `x + L` against the left-spacer expansion at `x`.
    pub fn floquet_residual(&self, x: T) -> T {
        let l = self.spec.period();
        let lambda = cis(self.k * l);
        let (v0, s0) = self.left(x);
        let (v1, s1) = self.right(x + l);
        (v1 - v0 * lambda).norm().max((s1 - s0 * lambda).norm()) / self.scale()
    }
}

use num_complex::Complex;

use super::{check_delta_hat, check_times, DecayTrace, DynamicsError, Method};
use crate::bandedge::EmitterSpec;
use crate::numerics::{cubic_roots_complex, principal_sqrt};
use crate::scalar::{cis, cx};
use crate::Real;

/// Laplace transform of the amplitude in physical units,
/// `a(s) = (s - i delta_g)^{1/2} / (s (s - i delta_g)^{1/2} - (i beta)^{3/2})`
/// with `(i beta)^{3/2} = beta^{3/2} e^{3 i pi/4}` and the principal root.
pub fn a2_laplace<T: Real>(em: &EmitterSpec<T>, s: Complex<T>) -> Result<Complex<T>, DynamicsError> {
    Ok(a2_laplace_dimensionless(em.delta_hat(), s / em.beta)? / em.beta)
}

/// The same transform for `beta = 1`.
pub fn a2_laplace_dimensionless<T: Real>(delta_hat: T, s: Complex<T>) -> Result<Complex<T>, DynamicsError> {
    let shifted = s - cx(T::zero(), delta_hat);
    let singular = || DynamicsError::OnSingularity {
        re: s.re.to_f64_lossy(),
        im: s.im.to_f64_lossy(),
    };
    if shifted.im == T::zero() && shifted.re <= T::zero() {
        return Err(singular());
    }
    let r = principal_sqrt(shifted);
    let den = s * r - cis(T::lit(0.75) * T::PI());
    if den.norm() <= T::tol(1e-14) * (T::one() + (s * r).norm()) {
        return Err(singular());
    }
    Ok(r / den)
}

/// Controls for [`a2_talbot_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TalbotOptions<T> {
    /// Nodes on each half of the contour.
    pub nodes: usize,
    /// Largest accepted change when the contour is refined by 16 nodes.
    pub tolerance: T,
}

impl<T: Real> Default for TalbotOptions<T> {
    fn default() -> Self {
        Self { nodes: 32, tolerance: T::tol(1e-6) }
    }
}

pub fn a2_talbot<T: Real>(em: &EmitterSpec<T>, times: &[T]) -> Result<DecayTrace<T>, DynamicsError> {
    a2_talbot_with(em, times, &TalbotOptions::default())
}

/// Numerical Bromwich inversion on a fixed Talbot contour.
///
/// Working in `s' = s - i delta_hat` puts the branch cut of
/// `sqrt(s - i delta_hat)` on the negative real axis, where the Talbot
/// contour `s' = r theta (cot theta + i)` wraps around it. The poles of the
/// principal sheet (`s' = w^2` for cubic roots `w` with `Re w > 0`) are
/// subtracted with their residues and added back in closed form, so the
/// contour only has to resolve the cut. Each time is evaluated with `M`
/// and `M + 16` nodes; a change above the tolerance is a contour failure.
pub fn a2_talbot_with<T: Real>(
    em: &EmitterSpec<T>,
    times: &[T],
    opts: &TalbotOptions<T>,
) -> Result<DecayTrace<T>, DynamicsError> {
    check_times(times)?;
    if opts.nodes < 2 {
        return Err(DynamicsError::InvalidInput("Talbot contour needs at least 2 nodes".into()));
    }
    let dh = em.delta_hat();
    check_delta_hat(dh)?;
    let inv = Inverter::new(dh);
    let amp = times
        .iter()
        .map(|&t| {
            if t == T::zero() {
                return Ok(cx(T::one(), T::zero()));
            }
            let coarse = inv.eval(t, opts.nodes);
            let fine = inv.eval(t, opts.nodes + 16);
            let change = (fine - coarse).norm();
            if !(change <= opts.tolerance) {
                return Err(DynamicsError::ContourFailure {
                    time: t.to_f64_lossy(),
                    change: change.to_f64_lossy(),
                });
            }
            Ok(fine)
        })
        .collect::<Result<Vec<_>, _>>()?;
    DecayTrace::new(times.to_vec(), amp, Method::Talbot, Some(dh))
}

struct Inverter<T> {
    dh: T,
    /// (pole in s, residue)
    poles: Vec<(Complex<T>, Complex<T>)>,
}

impl<T: Real> Inverter<T> {
    fn new(dh: T) -> Self {
        let zero = cx(T::zero(), T::zero());
        let c3 = cis(T::lit(0.75) * T::PI());
        let ws = cubic_roots_complex(zero, cx(T::zero(), dh), -c3);
        let poles = ws
            .iter()
            .filter(|w| w.re > T::zero())
            .map(|&w| {
                let p = w * w + cx(T::zero(), dh);
                let dprime = w + p / (w * T::lit(2.0));
                (p, w / dprime)
            })
            .collect();
        Self { dh, poles }
    }

    /// Transform minus its pole terms, as a function of `s' = s - i dh`.
    fn remainder(&self, sp: Complex<T>) -> Complex<T> {
        let s = sp + cx(T::zero(), self.dh);
        let r = principal_sqrt(sp);
        let mut v = r / (s * r - cis(T::lit(0.75) * T::PI()));
        for &(p, res) in &self.poles {
            v = v - res / (s - p);
        }
        v
    }

    fn eval(&self, t: T, m: usize) -> Complex<T> {
        let mf = T::from_usize_lossy(m);
        let r = T::lit(2.0) * mf / (T::lit(5.0) * t);
        let mut acc = (cx(r, T::zero()) * t).exp() * self.remainder(cx(r, T::zero()));
        for k in 1..m {
            let theta = T::PI() * T::from_usize_lossy(k) / mf;
            let cot = T::one() / theta.tan();
            let sigma = theta + (theta * cot - T::one()) * cot;
            for sign in [T::one(), -T::one()] {
                let th = theta * sign;
                let s = cx(r * theta * cot, r * th);
                let dsig = cx(T::one(), sigma * sign);
                acc = acc + (s * t).exp() * self.remainder(s) * dsig;
            }
        }
        let mut f = acc * (r / (T::lit(2.0) * mf)) * cis(self.dh * t);
        for &(p, res) in &self.poles {
            f = f + res * (p * t).exp();
        }
        f
    }
}

use super::{LatticeError, LatticeSpec};
use crate::numerics::{brent_root, ToleranceConfig};
use crate::Real;

/// Right-hand side of the Bloch condition `cos(kL) = RHS(omega)`:
/// `cos(2na w) cos(b w) - (n^2 + 1)/(2n) sin(2na w) sin(b w)`.
pub fn dispersion_rhs<T: Real>(spec: &LatticeSpec<T>, omega: T) -> T {
    let two = T::lit(2.0);
    let n = spec.n();
    let p = two * n * spec.a() * omega;
    let q = spec.b() * omega;
    let g = (n * n + T::one()) / (two * n);
    p.cos() * q.cos() - g * p.sin() * q.sin()
}

/// `d RHS / d omega`.
pub fn dispersion_rhs_derivative<T: Real>(spec: &LatticeSpec<T>, omega: T) -> T {
    let two = T::lit(2.0);
    let n = spec.n();
    let pa = two * n * spec.a();
    let qb = spec.b();
    let (p, q) = (pa * omega, qb * omega);
    let g = (n * n + T::one()) / (two * n);
    let (sp, cp, sq, cq) = (p.sin(), p.cos(), q.sin(), q.cos());
    -pa * sp * cq - qb * cp * sq - g * (pa * cp * sq + qb * sp * cq)
}

/// Closed-form inverse of the dispersion relation for `b = 2na`.
///
/// Branch `m` takes `4na omega` in `[m pi, (m+1) pi]`. The arccosine of
/// `(4n cos kL + (1-n)^2)/(1+n)^2` is evaluated as
/// `2 asin(2 sqrt(n) sin(kL/2) / (1+n))`, the same quantity written so that
/// it stays well conditioned near `k = 0`.
pub fn dispersion_analytic<T: Real>(
    spec: &LatticeSpec<T>,
    k: T,
    branch: usize,
) -> Result<T, LatticeError> {
    if !spec.isotropic_case() {
        return Err(LatticeError::NotIsotropicCase);
    }
    spec.check_k(k)?;
    let n = spec.n();
    let two = T::lit(2.0);
    let s = (two * n.sqrt() * (k * spec.period() / two).sin() / (T::one() + n)).min(T::one());
    let base = two * s.asin();
    let m = T::from_usize_lossy(branch);
    let theta = if branch.is_multiple_of(2) {
        m * T::PI() + base
    } else {
        (m + T::one()) * T::PI() - base
    };
    Ok(theta / (T::lit(4.0) * n * spec.a()))
}

/// Solves `RHS(omega) = cos(kL)` for arbitrary geometry.
///
/// The critical points of `RHS` below `window` are located once; between
/// consecutive critical points `RHS` is monotone and each such segment
/// holds exactly one branch, so every query is a single bracketed Brent
/// solve. Build one solver per lattice and reuse it across a k sweep.
#[derive(Debug, Clone)]
pub struct DispersionSolver<T> {
    spec: LatticeSpec<T>,
    window: T,
    /// Segment boundaries `0 = e_0 < e_1 < ... `, the last being `window`
    /// when the final segment is cut short.
    edges: Vec<T>,
    /// Number of complete segments (both ends are genuine extrema).
    complete: usize,
    tol: ToleranceConfig<T>,
}

impl<T: Real> DispersionSolver<T> {
    /// Default scan window for branches up to `branch`: `(branch + 2) pi / L`.
    pub fn default_window(spec: &LatticeSpec<T>, branch: usize) -> T {
        T::from_usize_lossy(branch + 2) * spec.zone_edge()
    }

    pub fn new(
        spec: LatticeSpec<T>,
        window: T,
        tol: ToleranceConfig<T>,
    ) -> Result<Self, LatticeError> {
        Self::with_scan_density(spec, window, super::DEFAULT_SCAN_PER_PI, tol)
    }

    /// As [`new`](Self::new) with `scan_per_pi` samples of `RHS'` per
    /// `pi / L` of frequency.
    pub fn with_scan_density(
        spec: LatticeSpec<T>,
        window: T,
        scan_per_pi: usize,
        tol: ToleranceConfig<T>,
    ) -> Result<Self, LatticeError> {
        tol.validate()?;
        if !(window > T::zero() && window.is_finite()) || scan_per_pi == 0 {
            return Err(LatticeError::InvalidSpec(format!(
                "scan window {window} and density {scan_per_pi} must be positive"
            )));
        }
        let steps = ((window / spec.zone_edge()).to_f64_lossy() * scan_per_pi as f64)
            .ceil()
            .max(1.0) as usize;
        let h = window / T::from_usize_lossy(steps);
        let d = |w: T| dispersion_rhs_derivative(&spec, w);
        let mut edges = vec![T::zero()];
        let mut prev_w = T::zero();
        // RHS'(0) = 0 exactly; start the sign tracking just above it.
        let mut prev_d = d(h * T::lit(1e-3));
        for i in 1..=steps {
            let w = h * T::from_usize_lossy(i);
            let dw = d(w);
            if dw == T::zero() {
                edges.push(w);
                prev_w = w;
                prev_d = d(w + h * T::lit(1e-3));
                continue;
            }
            if (dw > T::zero()) != (prev_d > T::zero()) && prev_d != T::zero() {
                let lo = if i == 1 { h * T::lit(1e-3) } else { prev_w };
                edges.push(brent_root(d, lo, w, &tol)?);
            }
            prev_w = w;
            prev_d = dw;
        }
        let complete = edges.len() - 1;
        if *edges.last().expect("nonempty") < window {
            edges.push(window);
        }
        Ok(Self {
            spec,
            window,
            edges,
            complete,
            tol,
        })
    }

    pub fn spec(&self) -> &LatticeSpec<T> {
        &self.spec
    }

    /// Extrema of `RHS` found inside the window, starting with 0.
    pub fn critical_points(&self) -> &[T] {
        &self.edges[..=self.complete]
    }

    /// The `(branch + 1)`-th smallest `omega >= 0` with `RHS = cos(kL)`.
    pub fn solve(&self, k: T, branch: usize) -> Result<T, LatticeError> {
        self.spec.check_k(k)?;
        let target = (k * self.spec.period()).cos();
        let not_found = || LatticeError::BracketNotFound {
            k: k.to_f64_lossy(),
            branch,
            window: self.window.to_f64_lossy(),
        };
        if branch + 1 >= self.edges.len() {
            return Err(not_found());
        }
        let (lo, hi) = (self.edges[branch], self.edges[branch + 1]);
        let g = |w: T| dispersion_rhs(&self.spec, w) - target;
        let (glo, ghi) = (g(lo), g(hi));
        // Touching branches (closed gaps) meet the level tangentially at a
        // segment end.
        let accept = self.tol.root_tol.max(T::tol(1e-14));
        if glo.abs() <= accept {
            return Ok(lo);
        }
        if ghi.abs() <= accept {
            return Ok(hi);
        }
        if (glo > T::zero()) == (ghi > T::zero()) {
            return Err(not_found());
        }
        Ok(brent_root(g, lo, hi, &self.tol)?)
    }
}

/// `(branch + 1)`-th smallest frequency on the dispersion relation at `k`,
/// scanning up to the default window for that branch.
pub fn dispersion_numeric<T: Real>(
    spec: &LatticeSpec<T>,
    k: T,
    branch: usize,
) -> Result<T, LatticeError> {
    let window = DispersionSolver::<T>::default_window(spec, branch);
    DispersionSolver::new(*spec, window, ToleranceConfig::default())?.solve(k, branch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn rhs_examples() {
        for (n, a, b) in [(1.0, 0.25, 0.5), (3.0, 0.25, 1.5), (2.0, 0.2, 0.9)] {
            let s = LatticeSpec::<f64>::new(n, a, b).unwrap();
            assert_eq!(dispersion_rhs(&s, 0.0), 1.0);
        }
        let vac = LatticeSpec::<f64>::new(1.0, 0.3, 0.7).unwrap();
        for w in [0.1, 1.7, 12.0] {
            assert!((dispersion_rhs(&vac, w) - (w * vac.period()).cos()).abs() < 1e-14);
        }
        let s = LatticeSpec::<f64>::isotropic(3.0, 0.25).unwrap();
        let mid = PI / (4.0 * 3.0 * 0.25);
        assert!((dispersion_rhs(&s, mid) + 5.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = LatticeSpec::<f64>::new(2.3, 0.2, 0.7).unwrap();
        for w in [0.3, 2.0, 7.7] {
            let h = 1e-6;
            let fd = (dispersion_rhs(&s, w + h) - dispersion_rhs(&s, w - h)) / (2.0 * h);
            assert!((fd - dispersion_rhs_derivative(&s, w)).abs() < 1e-7);
        }
    }

    #[test]
    fn analytic_examples() {
        let vac = LatticeSpec::<f64>::isotropic(1.0, 0.25).unwrap();
        for k in [0.0, 0.5, 1.0, PI] {
            assert!((dispersion_analytic(&vac, k, 0).unwrap() - k).abs() < 1e-14);
        }
        let s = LatticeSpec::<f64>::isotropic(3.0, 0.25).unwrap();
        assert_eq!(dispersion_analytic(&s, 0.0, 0).unwrap(), 0.0);
        // Zone edge of branch 0, checked against bisection on RHS = -1.
        let w = dispersion_analytic(&s, s.zone_edge(), 0).unwrap();
        assert!((dispersion_rhs(&s, w) + 1.0).abs() <= 1e-10);
        let (mut lo, mut hi) = (0.1, PI / 3.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if dispersion_rhs(&s, mid) + 1.0 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((w - lo).abs() < 1e-12);
        let bad = LatticeSpec::<f64>::new(2.0, 0.2, 0.9).unwrap();
        assert_eq!(dispersion_analytic(&bad, 0.1, 0), Err(LatticeError::NotIsotropicCase));
        assert!(matches!(
            dispersion_analytic(&s, 10.0, 0),
            Err(LatticeError::WavevectorOutOfRange { .. })
        ));
    }

    #[test]
    fn analytic_matches_the_printed_cosine_argument() {
        let s = LatticeSpec::<f64>::isotropic(2.5, 0.3).unwrap();
        let n = s.n();
        for i in 0..=16 {
            let k = s.zone_edge() * i as f64 / 16.0;
            let arg = (4.0 * n * (k * s.period()).cos() + (1.0 - n).powi(2)) / (1.0 + n).powi(2);
            let w = dispersion_analytic(&s, k, 0).unwrap();
            assert!((arg.acos() / (4.0 * n * s.a()) - w).abs() < 1e-7);
            assert!((dispersion_rhs(&s, w) - (k * s.period()).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn numeric_examples() {
        let vac = LatticeSpec::<f64>::new(1.0, 0.3, 0.4).unwrap();
        for i in 0..=10 {
            let k = vac.zone_edge() * i as f64 / 10.0;
            assert!((dispersion_numeric(&vac, k, 0).unwrap() - k).abs() < 1e-10);
        }
        let s = LatticeSpec::<f64>::new(2.0, 0.2, 0.9).unwrap();
        let w = dispersion_numeric(&s, s.zone_edge(), 0).unwrap();
        assert!((dispersion_rhs(&s, w) + 1.0).abs() <= 1e-10);
    }

    #[test]
    fn numeric_window_too_small() {
        let s = LatticeSpec::<f64>::new(2.0, 0.2, 0.9).unwrap();
        let solver = DispersionSolver::new(s, 0.5 * s.zone_edge(), ToleranceConfig::default()).unwrap();
        assert!(matches!(solver.solve(0.5, 3), Err(LatticeError::BracketNotFound { .. })));
    }

    #[test]
    fn numeric_agrees_with_analytic_on_isotropic() {
        let s = LatticeSpec::<f64>::isotropic(3.0, 0.25).unwrap();
        let solver = DispersionSolver::new(s, DispersionSolver::default_window(&s, 3), ToleranceConfig::default()).unwrap();
        for i in 0..=64 {
            let k = s.zone_edge() * i as f64 / 64.0;
            for m in 0..4 {
                let a = dispersion_analytic(&s, k, m).unwrap();
                let b = solver.solve(k, m).unwrap();
                assert!((a - b).abs() <= 1e-9 * a.max(1e-300), "k={k} m={m}: {a} vs {b}");
            }
        }
    }

    proptest! {
        #[test]
        fn vacuum_limit(a in 0.05f64..1.0, b in 0.0f64..2.0, frac in 0.0f64..=1.0) {
            let s = LatticeSpec::<f64>::new(1.0, a, b).unwrap();
            let k = frac * s.zone_edge();
            let w = dispersion_numeric(&s, k, 0).unwrap();
            prop_assert!((w - k).abs() <= 1e-10 * k.max(1.0));
        }

        #[test]
        fn numeric_residual(n in 1.0f64..4.0, a in 0.05f64..1.0, b in 0.0f64..2.0, frac in 0.0f64..=1.0, m in 0usize..4) {
            let s = LatticeSpec::<f64>::new(n, a, b).unwrap();
            let k = frac * s.zone_edge();
            let w = dispersion_numeric(&s, k, m).unwrap();
            prop_assert!((dispersion_rhs(&s, w) - (k * s.period()).cos()).abs() <= 1e-10);
        }
    }
}

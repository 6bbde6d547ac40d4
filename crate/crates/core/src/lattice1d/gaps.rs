use super::{dispersion_rhs, LatticeError, LatticeSpec};
use crate::numerics::{brent_root, ToleranceConfig};
use crate::Real;

/// Default number of scan samples per `pi / L` of frequency.
pub const DEFAULT_SCAN_PER_PI: usize = 4096;

/// A forbidden frequency window, `|RHS| > 1` strictly inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapInterval<T> {
    pub omega_low: T,
    pub omega_high: T,
    pub midgap: T,
    pub gap_midgap_ratio: T,
}

impl<T: Real> GapInterval<T> {
    pub fn new(omega_low: T, omega_high: T) -> Self {
        let midgap = (omega_low + omega_high) / T::lit(2.0);
        Self {
            omega_low,
            omega_high,
            midgap,
            gap_midgap_ratio: (omega_high - omega_low) / midgap,
        }
    }

    pub fn contains(&self, omega: T) -> bool {
        omega >= self.omega_low && omega <= self.omega_high
    }

    pub fn width(&self) -> T {
        self.omega_high - self.omega_low
    }
}

/// All gaps in `(0, omega_max)` using the default scan density and
/// tolerances.
pub fn find_gaps<T: Real>(spec: &LatticeSpec<T>, omega_max: T) -> Result<Vec<GapInterval<T>>, LatticeError> {
    find_gaps_with(spec, omega_max, DEFAULT_SCAN_PER_PI, &ToleranceConfig::default())
}

/// Scans `|RHS|` on a uniform grid and refines each run with `|RHS| > 1`
/// by Brent's method on `RHS -/+ 1`.
///
/// A gap still open at `omega_max` is left out, since its upper edge is
/// unknown. Samples must exceed 1 by more than `root_tol` to open a run, so
/// closed gaps where `|RHS|` only touches 1 are not reported.
pub fn find_gaps_with<T: Real>(
    spec: &LatticeSpec<T>,
    omega_max: T,
    scan_per_pi: usize,
    tol: &ToleranceConfig<T>,
) -> Result<Vec<GapInterval<T>>, LatticeError> {
    tol.validate()?;
    if !(omega_max > T::zero() && omega_max.is_finite()) || scan_per_pi == 0 {
        return Err(LatticeError::InvalidSpec(format!(
            "omega_max = {omega_max} and scan density {scan_per_pi} must be positive"
        )));
    }
    let steps = ((omega_max / spec.zone_edge()).to_f64_lossy() * scan_per_pi as f64)
        .ceil()
        .max(2.0) as usize;
    let h = omega_max / T::from_usize_lossy(steps);
    let threshold = T::one() + tol.root_tol;
    let mut gaps = Vec::new();
    // (index of last sample inside the band, sign of RHS in the gap)
    let mut open: Option<(usize, T)> = None;
    for i in 1..steps {
        let w = h * T::from_usize_lossy(i);
        let r = dispersion_rhs(spec, w);
        let inside = r.abs() > threshold;
        match (open, inside) {
            (None, true) => open = Some((i - 1, r.signum())),
            (Some((start, sign)), false) => {
                let g = |x: T| dispersion_rhs(spec, x) - sign;
                let lo_a = h * T::from_usize_lossy(start);
                let lo = refine_edge(g, lo_a, lo_a + h, tol)?;
                let hi = refine_edge(g, w - h, w, tol)?;
                gaps.push(GapInterval::new(lo, hi));
                open = None;
            }
            _ => {}
        }
    }
    Ok(gaps)
}

/// Brent on `[a, b]`, tolerating a band-side sample that already sits
/// within `root_tol` above the level.
fn refine_edge<T: Real, F: Fn(T) -> T>(
    g: F,
    a: T,
    b: T,
    tol: &ToleranceConfig<T>,
) -> Result<T, LatticeError> {
    let (ga, gb) = (g(a), g(b));
    if (ga > T::zero()) == (gb > T::zero()) {
        return Ok(if ga.abs() <= gb.abs() { a } else { b });
    }
    Ok(brent_root(g, a, b, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn vacuum_has_no_gaps() {
        let s = LatticeSpec::<f64>::new(1.0, 0.25, 0.5).unwrap();
        assert!(find_gaps(&s, 20.0).unwrap().is_empty());
    }

    #[test]
    fn interval_fields() {
        let g = GapInterval::new(1.0, 3.0);
        assert_eq!(g.midgap, 2.0);
        assert_eq!(g.gap_midgap_ratio, 1.0);
        assert!(g.contains(1.5) && !g.contains(3.5));
    }

    #[test]
    fn isotropic_first_gap_contains_midgap() {
        let s = LatticeSpec::<f64>::isotropic(3.0, 0.25).unwrap();
        let gaps = find_gaps(&s, 3.0 * PI / s.period()).unwrap();
        let mid = PI / (4.0 * 3.0 * 0.25);
        assert!(gaps[0].contains(mid));
        // symmetric about the midgap in the isotropic case
        assert!((gaps[0].midgap - mid).abs() < 1e-10);
    }

    #[test]
    fn edges_against_dense_scan() {
        let s = LatticeSpec::<f64>::isotropic(3.0, 0.25).unwrap();
        let wmax = 3.0 * PI / s.period();
        let gaps = find_gaps(&s, wmax).unwrap();
        assert!(!gaps.is_empty());
        for g in &gaps {
            assert!((dispersion_rhs(&s, g.omega_low).abs() - 1.0).abs() <= 1e-10);
            assert!((dispersion_rhs(&s, g.omega_high).abs() - 1.0).abs() <= 1e-10);
        }
        // Independent oracle: 1e5-point scan of |RHS| > 1.
        let n = 100_000;
        let mut runs = Vec::new();
        let mut start: Option<f64> = None;
        for i in 1..n {
            let w = wmax * i as f64 / n as f64;
            let inside = dispersion_rhs(&s, w).abs() > 1.0 + 1e-12;
            match (start, inside) {
                (None, true) => start = Some(w),
                (Some(w0), false) => {
                    runs.push((w0, w));
                    start = None;
                }
                _ => {}
            }
        }
        assert_eq!(runs.len(), gaps.len());
        let dw = wmax / n as f64;
        for (r, g) in runs.iter().zip(&gaps) {
            assert!((r.0 - g.omega_low).abs() <= dw && (r.1 - g.omega_high).abs() <= dw);
        }
    }

    #[test]
    fn truncated_gap_is_dropped() {
        let s = LatticeSpec::<f64>::isotropic(3.0, 0.25).unwrap();
        let mid = PI / (4.0 * 3.0 * 0.25);
        assert!(find_gaps(&s, mid).unwrap().is_empty());
    }

    #[test]
    fn inside_gap_no_real_solution() {
        let s = LatticeSpec::<f64>::new(2.0, 0.2, 0.9).unwrap();
        for g in find_gaps(&s, 4.0 * s.zone_edge()).unwrap() {
            for j in 1..20 {
                let w = g.omega_low + g.width() * j as f64 / 20.0;
                assert!(dispersion_rhs(&s, w).abs() > 1.0);
            }
        }
    }
}

//! Complex error function family built on the Faddeeva function
//! `w(z) = e^{-z^2} erfc(-iz)`.
//!
//! In the upper half plane `w` is evaluated with Weideman's rational
//! expansion (36 terms) for `|z| < 6` and with the Laplace continued
//! fraction beyond; the lower half plane follows by reflection. `erf` uses
//! its Maclaurin series inside the unit disk and `1 - e^{-z^2} w(iz)` in the
//! first quadrant elsewhere, extended by the exact odd and conjugate
//! symmetries.

use num_complex::Complex;

use super::NumericsError;
use crate::scalar::cx;
use crate::Real;

const WEIDEMAN_L: f64 = 5.045_378_491_522_287;

/// Polynomial coefficients in the Moebius variable, highest degree first.
#[allow(clippy::excessive_precision)]
const WEIDEMAN_COEFFS: [f64; 36] = [
    5.35639948982415955e-14,
    -8.04629199360370846e-14,
    -3.23886208809731234e-13,
    4.43161828520043918e-13,
    2.09804498809729778e-12,
    -2.11706834823930269e-12,
    -1.43125193498338358e-11,
    6.34627184768827175e-12,
    9.93931801357668786e-11,
    3.19719194511292649e-11,
    -6.63484717339888380e-10,
    -9.09223835036381173e-10,
    3.77344312369858300e-09,
    1.18838872673661180e-08,
    -1.09622778655904959e-08,
    -1.13031571942584770e-07,
    -1.28948429202458681e-07,
    6.74165566382208653e-07,
    2.76540866574354692e-06,
    1.41870584787424452e-06,
    -2.17411865655270796e-05,
    -8.81779714186354250e-05,
    -1.13966306444632690e-04,
    4.62903169399817493e-04,
    3.54844470869956127e-03,
    1.38982537632514735e-02,
    4.10510430165770893e-02,
    1.00842933718479674e-01,
    2.15016363201074090e-01,
    4.07342418950334295e-01,
    6.95662191897100324e-01,
    1.08135803717658896e+00,
    1.54016257881536545e+00,
    2.01939764361135055e+00,
    2.44537849285192088e+00,
    2.74074502740986015e+00,
];

const CF_RADIUS: f64 = 6.0;

fn weideman<T: Real>(z: Complex<T>) -> Complex<T> {
    let l = T::lit(WEIDEMAN_L);
    let iz = Complex::new(-z.im, z.re);
    let den = cx(l, T::zero()) - iz;
    let zz = (cx(l, T::zero()) + iz) / den;
    let mut p = Complex::new(T::zero(), T::zero());
    for &c in WEIDEMAN_COEFFS.iter() {
        p = p * zz + cx(T::lit(c), T::zero());
    }
    let inv_sqrt_pi = T::one() / T::PI().sqrt();
    (p * T::lit(2.0) / (den * den)) + cx(inv_sqrt_pi, T::zero()) / den
}

fn continued_fraction<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = z.norm().to_f64_lossy();
    let terms = if r < 8.0 {
        60
    } else if r < 12.0 {
        30
    } else {
        16
    };
    let mut t = z;
    for k in (1..=terms).rev() {
        t = z - cx(T::lit(k as f64 * 0.5), T::zero()) / t;
    }
    Complex::new(T::zero(), T::one() / T::PI().sqrt()) / t
}

fn faddeeva_upper<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() >= T::lit(CF_RADIUS) {
        continued_fraction(z)
    } else {
        weideman(z)
    }
}

/// The Faddeeva function `w(z) = e^{-z^2} erfc(-iz)`.
pub fn faddeeva<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.im >= T::zero() {
        faddeeva_upper(z)
    } else {
        let e = (-(z * z)).exp();
        e * T::lit(2.0) - faddeeva_upper(-z)
    }
}

/// Scaled complementary error function `e^{z^2} erfc(z) = w(iz)`.
pub fn erfc_scaled<T: Real>(z: Complex<T>) -> Complex<T> {
    faddeeva(Complex::new(-z.im, z.re))
}

/// [`erfc_scaled`] with a flag for arguments outside the region where
/// accuracy is guaranteed (`Re z >= -50` or `|z| <= 10`, finite). The value
/// is carried inside the error so callers can still use it.
pub fn erfc_scaled_checked<T: Real>(z: Complex<T>) -> Result<Complex<T>, NumericsError> {
    let v = erfc_scaled(z);
    let ok = (z.re >= T::lit(-50.0) || z.norm() <= T::lit(10.0))
        && z.re.is_finite()
        && z.im.is_finite()
        && v.re.is_finite()
        && v.im.is_finite();
    if ok {
        Ok(v)
    } else {
        Err(NumericsError::AccuracyLoss {
            z_re: z.re.to_f64_lossy(),
            z_im: z.im.to_f64_lossy(),
            re: v.re.to_f64_lossy(),
            im: v.im.to_f64_lossy(),
        })
    }
}

fn erf_maclaurin<T: Real>(z: Complex<T>) -> Complex<T> {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let eps = T::epsilon();
    for n in 1..60usize {
        let nf = T::from_usize_lossy(n);
        term = -term * z2 / nf;
        let contrib = term / (T::lit(2.0) * nf + T::one());
        sum = sum + contrib;
        if contrib.norm() <= eps * sum.norm() {
            break;
        }
    }
    sum * (T::lit(2.0) / T::PI().sqrt())
}

fn erf_first_quadrant<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() < T::one() {
        return erf_maclaurin(z);
    }
    let e = (-(z * z)).exp();
    cx(T::one(), T::zero()) - e * faddeeva(Complex::new(-z.im, z.re))
}

/// Error function of a complex argument. Odd and conjugate symmetric by
/// construction.
pub fn erf_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let (re_neg, im_neg) = (z.re < T::zero(), z.im < T::zero());
    let q = Complex::new(z.re.abs(), z.im.abs());
    let v = erf_first_quadrant(q);
    match (re_neg, im_neg) {
        (false, false) => v,
        (true, false) => -v.conj(),
        (false, true) => v.conj(),
        (true, true) => -v,
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: Complex<f64>, b: Complex<f64>) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[rustfmt::skip]
    const ERF_REF: [(f64, f64, f64, f64); 13] = [
        (0.5, 0.0, 0.52049987781304653768, 0.0),
        (1.0, 0.0, 0.84270079294971486934, 0.0),
        (2.0, 1.0, 1.0036063427256517509, -0.011259006028815025076),
        (-1.5, 0.75, -1.0486730028174111932, 0.027906540765740641002),
        (0.3, -2.2, 30.753951161358601425, -14.374319537416993497),
        (4.0, 4.0, 0.97854923307608192587, 0.097339690630831865347),
        (5.5, 0.1, 0.9999999999999967467, 6.6806410761160333263e-15),
        (0.0, 3.0, 0.0, 1629.9946226015656511),
        (1e-6, 2e-6, 1.1283791670996499131e-6, 2.2567583341917772984e-6),
        (7.0, -0.5, 1.0, -3.7946712159121859294e-23),
        (-3.0, -6.0, 3.7145626240951595685e10, 2.5475636064793879734e10),
        (0.8, 5.9, 8.1928313894511205468e12, -6.5953055400034968176e13),
        (2.5, -0.01, 0.99959359246739167697, -2.1774492825706809276e-5),
    ];

    #[rustfmt::skip]
    const W_REF: [(f64, f64, f64, f64); 10] = [
        (0.0, 0.0, 1.0, 0.0),
        (1.0, 1.0, 0.30474420525691259246, 0.20821893820283162729),
        (-2.0, 0.5, 0.10335882374136665895, -0.28478588475009374558),
        (3.0, 0.001, 2.0197242455732031454e-4, 0.2011565420455975816),
        (6.5, 2.0, 0.025127822274544268357, 0.079853544205047831667),
        (0.1, -0.2, 1.2566938731503850549, 0.16244298499632387025),
        (20.0, 20.0, 0.014113538470519280935, 0.014095907649337069551),
        (-8.0, 0.3, 2.7051565495498397845e-3, -0.070984152401429020379),
        (0.0, 9.0, 0.062307724037774684147, 0.0),
        (4.5, 5.5, 0.061791410269075203492, 0.049573944447481149793),
    ];

    #[test]
    fn erf_matches_high_precision_values() {
        for &(zr, zi, er, ei) in ERF_REF.iter() {
            let got = erf_complex(Complex::new(zr, zi));
            let want = Complex::new(er, ei);
            assert!(rel(got, want) < 1e-12, "erf({zr},{zi}) = {got}, want {want}");
        }
    }

    #[test]
    fn faddeeva_matches_high_precision_values() {
        for &(zr, zi, wr, wi) in W_REF.iter() {
            let got = faddeeva(Complex::new(zr, zi));
            let want = Complex::new(wr, wi);
            assert!(rel(got, want) < 1e-12, "w({zr},{zi}) = {got}, want {want}");
        }
    }

    #[test]
    fn erf_of_zero_and_one() {
        assert_eq!(erf_complex(Complex::new(0.0, 0.0)), Complex::new(0.0, 0.0));
        let e1 = erf_complex(Complex::new(1.0_f64, 0.0));
        assert!((e1.re - 0.842700792949715).abs() < 1e-10);
        assert_eq!(e1.im, 0.0);
    }

    #[test]
    fn erfc_scaled_limits() {
        assert!((erfc_scaled(Complex::new(0.0, 0.0)) - Complex::new(1.0, 0.0)).norm() < 1e-15);
        for &x in &[10.0_f64, 20.0, 30.0] {
            let v = erfc_scaled(Complex::new(x, 0.0)).re;
            let ratio = v * x * std::f64::consts::PI.sqrt();
            assert!((ratio - 1.0).abs() < 1.0 / (2.0 * x * x) + 1e-12, "x={x} ratio={ratio}");
        }
        let v30 = erfc_scaled(Complex::new(30.0_f64, 0.0)).re * 30.0 * std::f64::consts::PI.sqrt();
        assert!((v30 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn checked_flags_far_left_half_plane() {
        assert!(erfc_scaled_checked(Complex::new(-5.0, 3.0)).is_ok());
        let r = erfc_scaled_checked(Complex::new(-60.0, 0.0));
        assert!(matches!(r, Err(NumericsError::AccuracyLoss { .. })));
        assert!(erfc_scaled_checked(Complex::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn erf_maclaurin_oracle_on_disk_of_radius_three() {
        // Independent long-series oracle: 200 terms, compensated by
        // evaluating in f64 with terms built by recurrence.
        fn oracle(z: Complex<f64>) -> Complex<f64> {
            let z2 = z * z;
            let mut term = z;
            let mut sum = z;
            for n in 1..200 {
                term = -term * z2 / n as f64;
                sum += term / (2.0 * n as f64 + 1.0);
            }
            sum * (2.0 / std::f64::consts::PI.sqrt())
        }
        let mut worst = 0.0_f64;
        for i in 0..=30 {
            for j in 0..24 {
                let r = 3.0 * i as f64 / 30.0;
                let th = 2.0 * std::f64::consts::PI * j as f64 / 24.0;
                let z = Complex::from_polar(r, th);
                // The alternating series loses digits to cancellation along
                // the real axis for large |z|; only use it where the
                // largest term is within 1e4 of the result.
                let o = oracle(z);
                let peak = (z.norm().powi(2)).exp();
                if peak / o.norm().max(1e-300) > 1e4 {
                    continue;
                }
                worst = worst.max(rel(erf_complex(z), o));
            }
        }
        assert!(worst < 1e-10, "worst {worst}");
    }

    #[test]
    fn f32_smoke() {
        let v = erf_complex(Complex::new(1.0_f32, 0.0));
        assert!((v.re - 0.842_700_8).abs() < 1e-5);
        let w = faddeeva(Complex::new(1.0_f32, 1.0));
        assert!((w.re - 0.304_744_2).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn erf_symmetries(re in -6.0f64..6.0, im in -6.0f64..6.0) {
            let z = Complex::new(re, im);
            let e = erf_complex(z);
            prop_assert_eq!(erf_complex(-z), -e);
            prop_assert_eq!(erf_complex(z.conj()), e.conj());
        }

        #[test]
        fn erfc_scaled_consistent_with_erf(r in 0.0f64..5.0, th in 0.0f64..std::f64::consts::TAU) {
            let z = Complex::from_polar(r, th);
            let growth = (z * z).exp();
            let direct = growth * (Complex::new(1.0, 0.0) - erf_complex(z));
            let scaled = erfc_scaled(z);
            // 1 - erf(z) is formed in double precision, so the direct form
            // carries an absolute error of a few ulps times |e^{z^2}|.
            let slack = 8.0 * f64::EPSILON * growth.norm();
            prop_assert!((direct - scaled).norm() <= 1e-8 * scaled.norm().max(1.0) + slack);
        }

        #[test]
        fn faddeeva_regimes_agree_on_seam(th in 0.0f64..std::f64::consts::PI) {
            let z = Complex::from_polar(CF_RADIUS, th);
            let a = weideman(z);
            let b = continued_fraction(z);
            prop_assert!((a - b).norm() <= 1e-12 * a.norm());
        }
    }
}

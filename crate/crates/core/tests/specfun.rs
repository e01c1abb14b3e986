#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use approx::assert_relative_eq;
use ctinv::specfun::{self, bessel_jy, bessel_jy_with, log_gamma, riccati, Regime};
use proptest::prelude::*;

/// Reference values frozen from a 30-digit arbitrary-precision evaluation.
const FROZEN: &[(f64, f64, f64, f64)] = &[
    (0.3, 0.5, 0.700_260_488_507_054_67, -0.808_047_507_477_490_89),
    (0.3, 1.9, 0.472_013_645_155_499_76, 0.326_449_541_375_929_49),
    (2.7, 2.1, 0.200_994_230_020_150_96, -0.859_006_913_853_977_06),
    (7.25, 15.0, -0.024_437_220_128_115_998, -0.218_569_693_861_406_27),
    (0.1, 80.0, -0.077_581_740_500_502_262, -0.044_030_347_794_261_311),
    (4.6, 3.3, 0.098_064_419_161_304_96, -1.044_867_952_735_189_6),
    (-0.4, 0.7, 0.821_150_373_765_659_79, 0.445_470_606_207_298_96),
    (9.5, 99.0, -0.038_159_860_479_590_294, 0.070_739_330_330_308_36),
];

/// Ascending power series for `J_nu`, summed until terms stop mattering.
fn j_series(nu: f64, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = (nu * h.ln() - log_gamma(nu + 1.0).unwrap()).exp();
    let mut sum = term;
    for k in 1..200 {
        term *= -h * h / (k as f64 * (k as f64 + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

#[test]
fn frozen_reference_values() {
    for &(nu, x, j, y) in FROZEN {
        let b = bessel_jy(nu, x).unwrap();
        assert_relative_eq!(b.j, j, max_relative = 1e-10, epsilon = 1e-13);
        assert_relative_eq!(b.y, y, max_relative = 1e-10, epsilon = 1e-13);
    }
}

#[test]
fn agrees_with_ascending_series_at_small_argument() {
    for nu in [0.05, 0.3, 1.0, 2.5, 6.2] {
        for x in [0.01, 0.2, 1.0, 3.0] {
            let j = specfun::bessel_j(nu, x).unwrap();
            assert_relative_eq!(j, j_series(nu, x), max_relative = 1e-10);
        }
    }
}

#[test]
fn half_integer_closed_forms() {
    for &x in &[0.05f64, 0.7, PI / 2.0, 2.0, 9.3, 47.0, 100.0] {
        let (s, c) = x.sin_cos();
        let pre = (2.0 / (PI * x)).sqrt();
        assert_relative_eq!(specfun::bessel_j(0.5, x).unwrap(), pre * s, max_relative = 1e-10, epsilon = 1e-14);
        assert_relative_eq!(specfun::bessel_y(0.5, x).unwrap(), -pre * c, max_relative = 1e-10, epsilon = 1e-14);
        let j32 = pre * (s / x - c);
        let y32 = -pre * (c / x + s);
        assert_relative_eq!(specfun::bessel_j(1.5, x).unwrap(), j32, max_relative = 1e-10, epsilon = 1e-14);
        assert_relative_eq!(specfun::bessel_y(1.5, x).unwrap(), y32, max_relative = 1e-10, epsilon = 1e-14);
        let r = riccati(1.0, x).unwrap();
        assert_relative_eq!(r.u, s / x - c, max_relative = 1e-10, epsilon = 1e-14);
        assert_relative_eq!(r.v, -(c / x + s), max_relative = 1e-10, epsilon = 1e-14);
    }
}

#[test]
fn normalisation_survives_vanishing_fractional_order() {
    // Below the crossover the recurrence bottoms out near order -1/2, whose
    // first zero sits in (pi/2, 2).
    for nu in [0.51, 1.5, 2.5, 3.52, 5.5] {
        for k in 0..=40 {
            let x = 1.55 + 0.01 * k as f64;
            let b = bessel_jy(nu, x).unwrap();
            let w = b.j * b.yp - b.jp * b.y;
            assert_relative_eq!(w, 2.0 / (PI * x), max_relative = 1e-10);
            let c = bessel_jy_with(nu, x, Regime::ContinuedFraction).unwrap();
            assert_relative_eq!(b.j, c.j, max_relative = 1e-10);
        }
    }
}

#[test]
fn exact_zeros_of_y_keep_derivatives_finite() {
    for nu in [0.75, 2.5, 4.1] {
        for z in ctinv::zeros::bessel_zeros(nu, ctinv::zeros::ZeroKind::Y, 8).unwrap() {
            let b = bessel_jy(nu, z).unwrap();
            assert!(b.yp.is_finite() && b.jp.is_finite(), "nu={nu} z={z}");
            assert_relative_eq!(b.j * b.yp - b.jp * b.y, 2.0 / (PI * z), max_relative = 1e-10);
        }
    }
}

#[test]
fn regimes_agree_near_crossover() {
    for nu in [0.0, 0.4, 1.7, 3.3, 8.0] {
        for k in 0..=20 {
            let x = 1.5 + 0.05 * k as f64;
            let a = bessel_jy_with(nu, x, Regime::Series).unwrap();
            let b = bessel_jy_with(nu, x, Regime::ContinuedFraction).unwrap();
            for (p, q) in [(a.j, b.j), (a.y, b.y), (a.jp, b.jp), (a.yp, b.yp)] {
                assert_relative_eq!(p, q, max_relative = 1e-11, epsilon = 1e-13);
            }
        }
    }
}

fn five_point(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

#[test]
fn derivatives_match_finite_differences() {
    for nu in [0.2, 1.0, 3.6, 9.1] {
        for x in [0.4f64, 1.9, 2.1, 7.0, 33.0, 90.0] {
            let h = 1e-3 * x.min(1.0);
            let b = bessel_jy(nu, x).unwrap();
            let jp = five_point(|t| specfun::bessel_j(nu, t).unwrap(), x, h);
            let yp = five_point(|t| specfun::bessel_y(nu, t).unwrap(), x, h);
            assert!((b.jp - jp).abs() <= 1e-6 * (1.0 + jp.abs()), "J' nu={nu} x={x}");
            assert!((b.yp - yp).abs() <= 1e-6 * (1.0 + yp.abs()), "Y' nu={nu} x={x}");
        }
    }
}

#[test]
fn frozen_zeros_and_log_gamma() {
    assert_relative_eq!(log_gamma(0.3).unwrap(), 1.095_797_994_818_075_6, max_relative = 1e-12);
    assert_relative_eq!(log_gamma(17.5).unwrap(), 32.081_114_895_947_349, max_relative = 1e-13);
    assert_eq!(log_gamma(1.0).unwrap(), 0.0);
    assert!(log_gamma(0.0).is_err());
}

#[test]
fn domain_errors() {
    assert!(bessel_jy(1.0, 0.0).is_err());
    assert!(bessel_jy(1.0, -2.0).is_err());
    assert!(riccati(-0.5, 1.0).is_err());
    assert!(riccati(0.0, f64::NAN).is_err());
}

proptest! {
    #[test]
    fn cross_wronskian(nu in 0.0f64..10.0, x in 1e-3f64..100.0) {
        let b = bessel_jy(nu, x).unwrap();
        let w = b.j * b.yp - b.jp * b.y;
        let expect = 2.0 / (PI * x);
        prop_assert!(((w - expect) / expect).abs() <= 1e-9, "nu={} x={} w={}", nu, x, w);
    }

    #[test]
    fn riccati_normalization(l in -0.4f64..10.0, x in 1e-2f64..100.0) {
        let r = riccati(l, x).unwrap();
        prop_assert!((r.u * r.vp - r.up * r.v - 1.0).abs() <= 1e-9, "l={} x={}", l, x);
    }

    #[test]
    fn upward_recurrence(nu in 0.0f64..8.0, x in 0.1f64..60.0) {
        let a = bessel_jy(nu, x).unwrap();
        let b = bessel_jy(nu + 1.0, x).unwrap();
        let c = bessel_jy(nu + 2.0, x).unwrap();
        let scale = a.j.abs() + b.j.abs() + c.j.abs();
        prop_assert!((c.j - 2.0 * (nu + 1.0) / x * b.j + a.j).abs() <= 1e-10 * scale.max(1e-300) + 1e-14);
    }
}

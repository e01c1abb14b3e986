use std::f64::consts::PI;

use approx::assert_relative_eq;
use ctinv::specfun::{bessel_jy, riccati};
use ctinv::wronskian::{
    find_roots, find_roots_with, infinity_limit, is_nonsingular_pair, origin_coefficient, theorem_case,
    wronskian, wronskian_orders, wronskian_with_derivative, PairParams, ScanOptions, Verdict,
};
use ctinv::zeros::{bessel_zeros, ZeroKind};
use ctinv::Execution;
use proptest::prelude::*;

fn pair(l: f64, big_l: f64) -> PairParams {
    PairParams::new(l, big_l).unwrap()
}

#[test]
fn pair_validation() {
    assert!(PairParams::new(1.0, 1.0).is_err());
    assert!(PairParams::new(-0.5, 1.0).is_err());
    assert!(PairParams::new(0.0, f64::NAN).is_err());
}

#[test]
fn equal_orders_give_unit_wronskian() {
    for x in [0.01, 1.0, 17.0, 80.0] {
        assert_relative_eq!(wronskian_orders(2.3, 2.3, x).unwrap(), 1.0, max_relative = 1e-10);
    }
}

#[test]
fn half_integer_closed_form() {
    let p = pair(0.0, 1.0);
    assert_relative_eq!(wronskian(&p, PI).unwrap(), 1.0 / PI, max_relative = 1e-12);
    for k in 1..400 {
        let x = 0.25 * k as f64;
        let closed = (1.0 - (2.0 * x).sin() / (2.0 * x)) / x;
        let w = wronskian(&p, x).unwrap();
        assert_relative_eq!(w, closed, max_relative = 1e-10, epsilon = 1e-14);
        assert!(w > 0.0);
    }
}

#[test]
fn origin_coefficients() {
    let (c, e) = origin_coefficient(&pair(2.0, 0.0)).unwrap();
    assert_relative_eq!(c, 9.0, max_relative = 1e-12);
    assert_eq!(e, -2.0);
    let (c, e) = origin_coefficient(&pair(0.0, 1.0)).unwrap();
    assert_relative_eq!(c, 2.0 / 3.0, max_relative = 1e-12);
    assert_eq!(e, 1.0);
}

#[test]
fn origin_asymptotics_match_small_x() {
    let vals = [0.0, 0.3, 1.0, 2.5, 4.0];
    for &l in &vals {
        for &big_l in &vals {
            if l == big_l {
                continue;
            }
            let p = pair(l, big_l);
            let (c, e) = origin_coefficient(&p).unwrap();
            let x = 1e-4;
            let w = wronskian(&p, x).unwrap();
            assert!(w.signum() == c.signum());
            assert_relative_eq!(w * x.powf(-e), c, max_relative = 1e-2);
        }
    }
}

#[test]
fn limits_at_infinity() {
    assert_relative_eq!(infinity_limit(&pair(2.0, 0.0)), -1.0);
    assert!(infinity_limit(&pair(0.0, 1.0)).abs() < 1e-15);
    assert!(infinity_limit(&pair(1.5, 0.5)).abs() < 1e-15);
}

#[test]
fn nonsingularity_predicate() {
    assert!(is_nonsingular_pair(&pair(0.0, -0.497)));
    assert!(!is_nonsingular_pair(&pair(0.0, 2.0)));
    assert!(is_nonsingular_pair(&pair(0.5, 1.5)));
}

#[test]
fn root_examples() {
    assert!(find_roots(&pair(0.0, 1.0), 100.0).unwrap().roots.is_empty());
    assert!(find_roots(&pair(1.0, 0.045), 100.0).unwrap().roots.is_empty());

    let prof = find_roots(&pair(0.0, 2.0), 100.0).unwrap();
    let first = prof.first_root().unwrap();
    assert!(first > 0.0 && first < 5.763_459_196_894_55);
    for r in &prof.roots {
        let (a, b) = r.bracket;
        let wa = wronskian(&prof.pair, a).unwrap();
        let wb = wronskian(&prof.pair, b).unwrap();
        assert!(wa * wb < 0.0);
        assert!(wronskian(&prof.pair, r.x).unwrap().abs() < 1e-9);
    }
    assert!(prof.failures.is_empty());
}

#[test]
fn scan_is_execution_independent() {
    let p = pair(0.25, 3.5);
    let seq = find_roots_with(&p, ScanOptions { exec: Execution::Sequential, ..Default::default() }).unwrap();
    let par = find_roots_with(&p, ScanOptions { exec: Execution::Parallel, ..Default::default() }).unwrap();
    assert_eq!(seq, par);
}

#[test]
fn narrow_cutoff_is_inconclusive() {
    let case = theorem_case(&pair(0.0, 2.0), 2.0).unwrap();
    assert_eq!(case.verdict, Verdict::Inconclusive);
    let case = theorem_case(&pair(0.0, 2.0), 100.0).unwrap();
    assert_eq!(case.verdict, Verdict::Consistent);
}

/// At zeros of `Y_{l+1/2}` and `J_{L+1/2}` one of the two products in the
/// Wronskian drops out.
#[test]
fn extremum_sign_simplification() {
    for (l, big_l) in [(0.0, 2.0), (0.7, 1.3), (2.0, 0.25)] {
        let p = pair(l, big_l);
        for y in bessel_zeros(l + 0.5, ZeroKind::Y, 6).unwrap() {
            let jl = bessel_jy(big_l + 0.5, y).unwrap();
            let jy = bessel_jy(l + 0.5, y).unwrap();
            let reduced = 0.5 * PI * y * jl.j * jy.yp;
            assert!((wronskian(&p, y).unwrap() - reduced).abs() <= 1e-8 * (1.0 + reduced.abs()), "l={l} L={big_l} y={y} w={} r={reduced}", wronskian(&p, y).unwrap());
        }
        for j in bessel_zeros(big_l + 0.5, ZeroKind::J, 6).unwrap() {
            let jl = bessel_jy(big_l + 0.5, j).unwrap();
            let jy = bessel_jy(l + 0.5, j).unwrap();
            let reduced = -0.5 * PI * j * jl.jp * jy.y;
            assert!((wronskian(&p, j).unwrap() - reduced).abs() <= 1e-8 * (1.0 + reduced.abs()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_identity(l in -0.45f64..5.0, big_l in -0.45f64..5.0, x in 0.3f64..60.0) {
        prop_assume!((l - big_l).abs() > 1e-3);
        let p = pair(l, big_l);
        let (_, dw) = wronskian_with_derivative(&p, x).unwrap();
        let h = 1e-3;
        let f = |t: f64| wronskian(&p, t).unwrap();
        let fd = (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
        let ru = riccati(big_l, x).unwrap();
        let rv = riccati(l, x).unwrap();
        let identity = p.coupling() * ru.u * rv.v / (x * x);
        prop_assert!((dw - identity).abs() <= 1e-10 * (1.0 + identity.abs()));
        prop_assert!((fd - identity).abs() <= 1e-8 * (1.0 + identity.abs()), "fd={} id={}", fd, identity);
    }
}

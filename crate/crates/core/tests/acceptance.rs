//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Thresholds are the contractual ones; nothing here is
//! loosened to make a case pass.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use ctinv::oneterm::{
    branch_parameter, kernel_k, potential_value, residual_integral_equation, select_nonsingular, BranchParams,
    PhaseShiftSpec,
};
use ctinv::specfun::{bessel_jy, riccati};
use ctinv::verify::{pole_order_estimate, roundtrip, weighted_abs_integral, RoundTripOptions};
use ctinv::wronskian::{find_roots, theorem_sweep, PairParams, Verdict};
use ctinv::zeros::proposition_sweep;
use ctinv::Execution;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_branch_map() -> Outcome {
    let a = branch_parameter(&PhaseShiftSpec::new(0.0, 0.780).map_err(|e| e.to_string())?, 0).map_err(|e| e.to_string())?;
    let b = branch_parameter(&PhaseShiftSpec::new(1.0, 1.50).map_err(|e| e.to_string())?, 0).map_err(|e| e.to_string())?;
    let ok = (a.big_l + 0.497).abs() <= 5e-4 && (b.big_l - 0.045).abs() <= 5e-4;
    check(ok, format!("L = {:.5} and {:.5}", a.big_l, b.big_l))
}

fn c2_theorem_sweep() -> Outcome {
    let values: Vec<f64> = (0..=20).map(|k| 0.25 * k as f64).collect();
    let cases = theorem_sweep(&values, 100.0, Execution::Parallel).map_err(|e| e.to_string())?;
    let bad: Vec<_> = cases.iter().filter(|c| c.verdict != Verdict::Consistent).collect();
    let banded = cases.iter().filter(|c| c.sign_band).count();
    check(
        bad.is_empty(),
        match bad.first() {
            None => format!("{} pairs consistent ({banded} in a sign-change band)", cases.len()),
            Some(c) => format!("{} of {} pairs off, first (l={}, L={}) {:?}", bad.len(), cases.len(), c.l, c.big_l, c.verdict),
        },
    )
}

fn c3_proposition_sweep() -> Outcome {
    let nus: Vec<f64> = (1..=100).map(|k| 0.1 * k as f64).collect();
    let checks = proposition_sweep(&nus, 20, Execution::Parallel).map_err(|e| e.to_string())?;
    let worst_prop = checks.iter().map(|c| c.proposition_gap).fold(f64::INFINITY, f64::min);
    let worst_all = checks.iter().map(|c| c.min_gap()).fold(f64::INFINITY, f64::min);
    check(
        worst_prop > 1e-6 && worst_all > 0.0,
        format!("{} cases, smallest proposition gap {worst_prop:.3e}, smallest chain gap {worst_all:.3e}", checks.len()),
    )
}

fn c4_identities() -> Outcome {
    let mut worst_norm: f64 = 0.0;
    let mut worst_cross: f64 = 0.0;
    let xs: Vec<f64> = (0..=240).map(|k| 1e-2 * 10f64.powf(k as f64 / 60.0)).collect();
    for k in 0..=104 {
        let l = -0.4 + 0.1 * k as f64;
        for &x in &xs {
            let r = riccati(l, x).map_err(|e| e.to_string())?;
            worst_norm = worst_norm.max((r.u * r.vp - r.up * r.v - 1.0).abs());
            let b = bessel_jy(l + 0.5, x).map_err(|e| e.to_string())?;
            let expect = 2.0 / (PI * x);
            worst_cross = worst_cross.max(((b.j * b.yp - b.jp * b.y - expect) / expect).abs());
        }
    }
    check(
        worst_norm <= 1e-9 && worst_cross <= 1e-9,
        format!("max |uv' - u'v - 1| = {worst_norm:.2e}, max cross-Wronskian rel. error = {worst_cross:.2e}"),
    )
}

fn c5_residual() -> Outcome {
    let mut worst: f64 = 0.0;
    for (l, big_l) in [(0.0, -0.4966), (1.0, 0.0451)] {
        let b = BranchParams::from_orders(l, big_l).map_err(|e| e.to_string())?;
        for i in 1..=10 {
            let x = i as f64;
            for j in 1..=10 {
                let y = x * j as f64 / 10.0;
                let k = kernel_k(&b, x, y).map_err(|e| e.to_string())?;
                let r = residual_integral_equation(&b, x, y, 64).map_err(|e| e.to_string())?;
                worst = worst.max(r.abs() / (1.0 + k.abs()));
            }
        }
    }
    check(worst <= 1e-6, format!("max |residual| / (1 + |K|) = {worst:.2e}"))
}

fn c6_roundtrip() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (l, delta) in [(0.0, 0.780), (1.0, 1.50), (0.0, -0.3), (0.5, 0.4)] {
        let spec = PhaseShiftSpec::new(l, delta).map_err(|e| e.to_string())?;
        match roundtrip(&spec, RoundTripOptions::default()) {
            Ok(r) => {
                ok &= r.error <= 5e-3;
                parts.push(format!("({l}, {delta}) err {:.1e}", r.error));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("({l}, {delta}) {e}"));
            }
        }
    }
    check(ok, parts.join(", "))
}

fn c7_degenerate() -> Outcome {
    let b = select_nonsingular(&PhaseShiftSpec::new(0.0, 0.0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let mut sup: f64 = 0.0;
    for k in 0..=4000 {
        let x = 0.1 + 19.9 * k as f64 / 4000.0;
        sup = sup.max(potential_value(&b, x).map_err(|e| e.to_string())?.abs());
    }
    check(
        b.degenerate && (b.big_l + 1e-6).abs() < 1e-15 && sup <= 1e-4,
        format!("L = {:e}, sup |q| on [0.1, 20] = {sup:.2e}", b.big_l),
    )
}

fn c8_singular_branch() -> Outcome {
    let b = BranchParams::from_orders(0.0, 2.0).map_err(|e| e.to_string())?;
    let pair = PairParams::new(0.0, 2.0).map_err(|e| e.to_string())?;
    let roots = find_roots(&pair, 100.0).map_err(|e| e.to_string())?.root_positions();
    let Some(&root) = roots.first() else {
        return Err("no Wronskian root found".into());
    };
    let order = pole_order_estimate(&b, root, 0.01).map_err(|e| e.to_string())?;
    let radii = [0.1, 0.05, 0.025, 0.0125];
    let sums = radii
        .iter()
        .map(|&r| weighted_abs_integral(&b, 1e-3, 20.0, 200_000, &[(root, r)], Execution::Parallel))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| e.to_string())?;
    let growing = sums.windows(2).all(|w| w[1] > w[0]);
    check(
        !roots.is_empty() && (order - 2.0).abs() <= 0.2 && growing,
        format!(
            "{} root(s), first at {root:.6}, pole order {order:.4}, x|q| integrals {}",
            roots.len(),
            sums.iter().map(|s| format!("{s:.4e}")).collect::<Vec<_>>().join(" < ")
        ),
    )
}

fn c9_two_singularities() -> Outcome {
    let pair = PairParams::new(1.0, 4.0451).map_err(|e| e.to_string())?;
    let roots = find_roots(&pair, 100.0).map_err(|e| e.to_string())?.root_positions();
    let wide = find_roots(&pair, 200.0).map_err(|e| e.to_string())?.root_positions();
    check(
        roots.len() >= 2,
        format!("roots on (0, 100]: {roots:.4?}; on (0, 200]: {wide:.4?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("C1 branch map", c1_branch_map),
        ("C2 nonsingularity sweep", c2_theorem_sweep),
        ("C3 zero inequality sweep", c3_proposition_sweep),
        ("C4 special-function identities", c4_identities),
        ("C5 integral-equation residual", c5_residual),
        ("C6 round trip", c6_roundtrip),
        ("C7 degenerate limit", c7_degenerate),
        ("C8 singular branch", c8_singular_branch),
        ("C9 two singularities", c9_two_singularities),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

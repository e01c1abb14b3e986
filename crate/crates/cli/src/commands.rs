use ctinv::oneterm::{self, GridSpec, PhaseShiftSpec, TableOptions};
use ctinv::verify::{self, RoundTripOptions, SolverOptions};
use ctinv::wronskian::{self, PairParams, ScanOptions, TheoremCase, Verdict};
use ctinv::zeros::{self, ChainCheck, ZeroQuery};
use ctinv::Execution;
use serde::Serialize;

use crate::args::{
    Command, Format, InvertArgs, PropositionArgs, RoundTripArgs, ScanArgs, TheoremArgs, ZerosArgs,
};
use crate::output::{num, opt_num, Config, Envelope, Sink};
use crate::{CliError, Ctx};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn order(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > -0.5 {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be a finite number above -1/2, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

/// Check every argument before any computation starts.
pub fn validate(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Invert(a) => {
            order("l", a.l)?;
            if !a.delta.is_finite() {
                return Err(usage("--delta must be finite"));
            }
            positive("xmin", a.xmin)?;
            positive("scan-xmax", a.scan_xmax)?;
            if !(a.xmax > a.xmin && a.xmax.is_finite()) {
                return Err(usage("--xmax must exceed --xmin"));
            }
            if a.points < 2 {
                return Err(usage("--points must be at least 2"));
            }
        }
        Command::CheckTheorem(a) => {
            if let (Some(l), Some(big_l)) = (a.l, a.big_l) {
                order("l", l)?;
                order("L", big_l)?;
                if l == big_l {
                    return Err(usage("--l and --L must differ"));
                }
            } else {
                order("min", a.min)?;
                positive("step", a.step)?;
                if !(a.max >= a.min && a.max.is_finite()) {
                    return Err(usage("--max must not be below --min"));
                }
            }
            positive("xmax", a.xmax)?;
        }
        Command::CheckProposition(a) => {
            positive("nu-min", a.nu_min)?;
            positive("nu-step", a.nu_step)?;
            if !(a.nu_max >= a.nu_min && a.nu_max.is_finite()) {
                return Err(usage("--nu-max must not be below --nu-min"));
            }
            if a.count == 0 {
                return Err(usage("--count must be at least 1"));
            }
            if a.margin.is_nan() || a.margin < 0.0 {
                return Err(usage("--margin must be non-negative"));
            }
        }
        Command::ScanWronskian(a) => {
            order("l", a.l)?;
            order("L", a.big_l)?;
            if a.l == a.big_l {
                return Err(usage("--l and --L must differ"));
            }
            positive("xmax", a.xmax)?;
            positive("step", a.step)?;
            if a.step > wronskian::DEFAULT_STEP {
                return Err(usage("--step may not exceed pi/8"));
            }
        }
        Command::Zeros(a) => {
            positive("nu", a.nu)?;
            if a.count == 0 {
                return Err(usage("--count must be at least 1"));
            }
        }
        Command::VerifyRoundtrip(a) => {
            order("l", a.l)?;
            if !a.delta.is_finite() {
                return Err(usage("--delta must be finite"));
            }
            positive("match-radius", a.match_radius)?;
            positive("step", a.step)?;
            positive("tolerance", a.tolerance)?;
            if a.points < 4 {
                return Err(usage("--points must be at least 4"));
            }
        }
    }
    Ok(())
}

/// Evenly spaced values from `min` to `max`, endpoints included when the
/// range is a whole number of steps.
fn range(min: f64, max: f64, step: f64) -> Vec<f64> {
    let n = ((max - min) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| min + step * k as f64).collect()
}

fn config<'a>(ctx: &Ctx, cmd: &'a Command) -> Config<'a> {
    Config {
        format: ctx.format,
        sequential: ctx.exec == Execution::Sequential,
        command: cmd,
    }
}

pub fn invert(ctx: &Ctx, cmd: &Command, a: &InvertArgs) -> Result<(), CliError> {
    let spec = PhaseShiftSpec::new(a.l, a.delta)?;
    let grid = GridSpec::new(a.xmin, a.xmax, a.points)?;
    let opts = TableOptions {
        scan_x_max: a.scan_xmax,
        exec: ctx.exec,
    };
    let table = oneterm::potential_table(&spec, a.branch.into(), &grid, opts)?;
    let meta = table.metadata();

    let mut sink = Sink::open(ctx.output.as_deref())?;
    match ctx.format {
        Format::Csv => table.write_csv(sink.data())?,
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                branch: &'a oneterm::TableMetadata,
                x: &'a [f64],
                q: Vec<Option<f64>>,
                singular_flag: Vec<u8>,
            }
            let body = Body {
                branch: &meta,
                x: &table.grid,
                q: table.q.iter().map(|q| q.is_finite().then_some(*q)).collect(),
                singular_flag: table.singular.iter().map(|&s| u8::from(s)).collect(),
            };
            sink.json(&Envelope::new("ctinv.potential-table/1", config(ctx, cmd), body))?;
        }
    }
    sink.note(&format!("n = {}", meta.n));
    sink.note(&format!("L = {}", meta.big_l));
    sink.note(&format!("coupling = {}", meta.coupling));
    sink.note(&format!("degenerate = {}", meta.degenerate));
    sink.note(&format!("nonsingular = {}", meta.nonsingular));
    if meta.singular_points.is_empty() {
        sink.note(&format!("singular points in (0, {}]: none", meta.scan_x_max));
    } else {
        for s in &meta.singular_points {
            sink.note(&format!("singular point x = {} (excluded radius {})", s.x, s.exclusion_radius));
        }
    }
    sink.finish()?;
    Ok(())
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Consistent => "PASS",
        Verdict::Inconsistent => "FAIL",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn check_theorem(ctx: &Ctx, cmd: &Command, a: &TheoremArgs) -> Result<(), CliError> {
    let cases: Vec<TheoremCase> = match (a.l, a.big_l) {
        (Some(l), Some(big_l)) => vec![wronskian::theorem_case(&PairParams::new(l, big_l)?, a.xmax)?],
        _ => wronskian::theorem_sweep(&range(a.min, a.max, a.step), a.xmax, ctx.exec)?,
    };

    println!("{:>8} {:>8} {:>12} {:>6} {:>12}  result", "l", "L", "nonsingular", "roots", "first_root");
    for c in &cases {
        println!(
            "{:>8} {:>8} {:>12} {:>6} {:>12}  {}",
            c.l,
            c.big_l,
            c.expected_nonsingular,
            c.roots,
            c.first_root.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into()),
            verdict_word(c.verdict)
        );
    }
    let count = |v| cases.iter().filter(|c| c.verdict == v).count();
    let (ok, bad, open) = (count(Verdict::Consistent), count(Verdict::Inconsistent), count(Verdict::Inconclusive));
    let overall = if bad > 0 {
        "FAIL"
    } else if open > 0 {
        "inconclusive"
    } else {
        "PASS"
    };
    println!("{} pairs: {ok} consistent, {open} inconclusive, {bad} inconsistent (x_max = {}) -> {overall}", cases.len(), a.xmax);

    if let Some(path) = ctx.output.as_deref() {
        let mut sink = Sink::open(Some(path))?;
        match ctx.format {
            Format::Csv => {
                let w = sink.data();
                writeln!(w, "l,L,expected_nonsingular,roots,first_root,sign_band,sign_origin,limit_infinity,verdict")?;
                for c in &cases {
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{},{}",
                        num(c.l),
                        num(c.big_l),
                        c.expected_nonsingular,
                        c.roots,
                        opt_num(c.first_root),
                        c.sign_band,
                        num(c.sign_origin),
                        num(c.limit_infinity),
                        verdict_word(c.verdict)
                    )?;
                }
            }
            Format::Json => {
                #[derive(Serialize)]
                struct Body<'a> {
                    overall: &'a str,
                    cases: &'a [TheoremCase],
                }
                let body = Body { overall, cases: &cases };
                sink.json(&Envelope::new("ctinv.theorem-check/1", config(ctx, cmd), body))?;
            }
        }
        sink.finish()?;
    }
    if bad > 0 {
        return Err(CliError::Failed(format!("{bad} pair(s) contradict the nonsingularity criterion")));
    }
    Ok(())
}

pub fn check_proposition(ctx: &Ctx, cmd: &Command, a: &PropositionArgs) -> Result<(), CliError> {
    let nus = range(a.nu_min, a.nu_max, a.nu_step);
    let checks = zeros::proposition_sweep(&nus, a.count, ctx.exec)?;
    let failing: Vec<&ChainCheck> = checks.iter().filter(|c| !c.holds(a.margin)).collect();

    println!("{:>8} {:>14} {:>14}  result", "nu", "min prop. gap", "min chain gap");
    for &nu in &nus {
        let rows: Vec<&ChainCheck> = checks.iter().filter(|c| c.nu == nu).collect();
        let prop = rows.iter().map(|c| c.proposition_gap).fold(f64::INFINITY, f64::min);
        let all = rows.iter().map(|c| c.min_gap()).fold(f64::INFINITY, f64::min);
        let word = if rows.iter().all(|c| c.holds(a.margin)) { "PASS" } else { "FAIL" };
        println!("{nu:>8.4} {prop:>14.6e} {all:>14.6e}  {word}");
    }
    let overall = if failing.is_empty() { "PASS" } else { "FAIL" };
    println!("{} cases (n <= {}), {} failing, margin {:e} -> {overall}", checks.len(), a.count, failing.len(), a.margin);

    if let Some(path) = ctx.output.as_deref() {
        let mut sink = Sink::open(Some(path))?;
        match ctx.format {
            Format::Csv => {
                let w = sink.data();
                writeln!(w, "nu,n,proposition_gap,classical_chain_gap,y_chain_gap,intermediate_gap,holds")?;
                for c in &checks {
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{}",
                        num(c.nu),
                        c.n,
                        num(c.proposition_gap),
                        num(c.classical_chain_gap),
                        num(c.y_chain_gap),
                        num(c.intermediate_gap),
                        c.holds(a.margin)
                    )?;
                }
            }
            Format::Json => {
                #[derive(Serialize)]
                struct Body<'a> {
                    overall: &'a str,
                    checks: &'a [ChainCheck],
                }
                let body = Body { overall, checks: &checks };
                sink.json(&Envelope::new("ctinv.proposition-check/1", config(ctx, cmd), body))?;
            }
        }
        sink.finish()?;
    }
    if !failing.is_empty() {
        return Err(CliError::Failed(format!("{} zero inequality case(s) failed", failing.len())));
    }
    Ok(())
}

pub fn scan_wronskian(ctx: &Ctx, cmd: &Command, a: &ScanArgs) -> Result<(), CliError> {
    let pair = PairParams::new(a.l, a.big_l)?;
    let profile = wronskian::find_roots_with(
        &pair,
        ScanOptions {
            x_max: a.xmax,
            step: a.step,
            exec: ctx.exec,
        },
    )?;
    let mut sink = Sink::open(ctx.output.as_deref())?;
    match ctx.format {
        Format::Csv => {
            let w = sink.data();
            writeln!(w, "x,W")?;
            for &(x, v) in &profile.samples {
                writeln!(w, "{},{}", num(x), num(v))?;
            }
        }
        Format::Json => {
            sink.json(&Envelope::new("ctinv.wronskian-scan/1", config(ctx, cmd), &profile))?;
        }
    }
    let summary = serde_json::json!({
        "l": a.l,
        "L": a.big_l,
        "x_max": a.xmax,
        "roots": profile.root_positions(),
        "nonsingular_pair": wronskian::is_nonsingular_pair(&pair),
        "sign_origin": profile.sign_origin,
        "limit_infinity": profile.limit_infinity,
        "warnings": profile.warnings,
    });
    sink.note(&serde_json::to_string(&summary).map_err(std::io::Error::from)?);
    sink.finish()?;
    if !profile.failures.is_empty() {
        return Err(CliError::Failed(format!("{} root(s) failed to polish", profile.failures.len())));
    }
    Ok(())
}

pub fn zeros_table(ctx: &Ctx, cmd: &Command, a: &ZerosArgs) -> Result<(), CliError> {
    ZeroQuery::new(a.nu, a.count, a.kind)?;
    let zs = zeros::bessel_zeros(a.nu, a.kind, a.count)?;
    let mut sink = Sink::open(ctx.output.as_deref())?;
    match ctx.format {
        Format::Csv => {
            let w = sink.data();
            writeln!(w, "n,zero")?;
            for (i, z) in zs.iter().enumerate() {
                writeln!(w, "{},{}", i + 1, num(*z))?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                zeros: &'a [f64],
            }
            sink.json(&Envelope::new("ctinv.zeros/1", config(ctx, cmd), Body { zeros: &zs }))?;
        }
    }
    sink.finish()?;
    Ok(())
}

pub fn verify_roundtrip(ctx: &Ctx, cmd: &Command, a: &RoundTripArgs) -> Result<(), CliError> {
    let spec = PhaseShiftSpec::new(a.l, a.delta)?;
    let opts = RoundTripOptions {
        choice: a.branch.into(),
        match_radius: a.match_radius,
        step: a.step,
        table_points: (!a.analytic).then_some(a.points),
        solver: SolverOptions {
            tolerance: a.tolerance,
            exec: ctx.exec,
            ..Default::default()
        },
    };
    let report = verify::roundtrip(&spec, opts)?;
    let within = report.error <= a.tolerance;
    let mut sink = Sink::open(ctx.output.as_deref())?;
    match ctx.format {
        Format::Csv => {
            let w = sink.data();
            writeln!(w, "l,delta,n,L,delta_recovered,error,convergence,within_tolerance")?;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                num(report.l),
                num(report.delta_input),
                report.branch.n,
                num(report.branch.big_l),
                num(report.result.delta_mod_pi),
                num(report.error),
                num(report.result.convergence),
                within
            )?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                within_tolerance: bool,
                report: &'a verify::RoundTripReport,
            }
            let body = Body {
                within_tolerance: within,
                report: &report,
            };
            sink.json(&Envelope::new("ctinv.roundtrip/1", config(ctx, cmd), body))?;
        }
    }
    sink.note(&format!(
        "delta in = {}, recovered = {}, error = {:.3e}, convergence = {:.3e} -> {}",
        report.delta_input_mod_pi,
        report.result.delta_mod_pi,
        report.error,
        report.result.convergence,
        if within { "PASS" } else { "FAIL" }
    ));
    sink.finish()?;
    if !within {
        return Err(CliError::Failed(format!(
            "recovered phase shift off by {:e} (tolerance {:e})",
            report.error, a.tolerance
        )));
    }
    Ok(())
}

//! Forward checks on a constructed potential: phase shift at `k = 1` from
//! the radial equation, pole-order fits and the `x |q|` integrability proxy.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::oneterm::{self, BranchChoice, BranchParams, GridSpec, PhaseShiftSpec, PotentialTable, TableOptions};
use crate::specfun::riccati;

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_X_START: f64 = 1e-2;
pub const DEFAULT_MATCH_RADIUS: f64 = 100.0;
pub const DEFAULT_TOLERANCE: f64 = 5e-3;
/// Uniform table size used by [`roundtrip`]; spacing 5e-3 on `(0, 100]`.
pub const DEFAULT_TABLE_POINTS: usize = 20_001;
/// The match-radius probe sits at this fraction of the main radius.
pub const RADIUS_PROBE_FRACTION: f64 = 0.8;
/// Matches recorded between `0.4 R` and `R` for the tail fit.
const RADIUS_SAMPLES: usize = 120;

/// Anything that can be sampled as `q(x)`. A non-finite value marks a
/// singular point.
pub trait Potential: Sync {
    fn value(&self, x: f64) -> f64;

    fn describe(&self) -> String {
        "callable".to_string()
    }
}

impl<F> Potential for F
where
    F: Fn(f64) -> f64 + Sync,
{
    fn value(&self, x: f64) -> f64 {
        self(x)
    }
}

impl Potential for BranchParams {
    fn value(&self, x: f64) -> f64 {
        oneterm::potential_value(self, x).unwrap_or(f64::NAN)
    }

    fn describe(&self) -> String {
        format!("analytic branch l = {}, L = {}", self.spec.l, self.big_l)
    }
}

/// Cubic Lagrange interpolation through the four surrounding samples.
/// Returns NaN outside the tabulated range, next to a flagged sample, or
/// when a singular point falls inside the stencil.
impl Potential for PotentialTable {
    fn value(&self, x: f64) -> f64 {
        let g = &self.grid;
        let n = g.len();
        if n < 4 || !(x >= g[0] && x <= g[n - 1]) {
            return f64::NAN;
        }
        let i = g.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
        let start = i.saturating_sub(1).min(n - 4);
        let (lo, hi) = (g[start], g[start + 3]);
        if self
            .singular_points
            .iter()
            .any(|s| s.x + s.exclusion_radius >= lo && s.x - s.exclusion_radius <= hi)
        {
            return f64::NAN;
        }
        let idx = start..start + 4;
        let mut sum = 0.0;
        for j in idx.clone() {
            let mut w = 1.0;
            for k in idx.clone() {
                if k != j {
                    w *= (x - g[k]) / (g[j] - g[k]);
                }
            }
            sum += w * self.q[j];
        }
        sum
    }

    fn describe(&self) -> String {
        format!("table of {} samples", self.grid.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub x_start: f64,
    pub tolerance: f64,
    /// Remove the `1/R` tail bias by fitting matches over `[R/2, R]`.
    pub extrapolate: bool,
    pub exec: Execution,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            x_start: DEFAULT_X_START,
            tolerance: DEFAULT_TOLERANCE,
            extrapolate: true,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub label: String,
    pub x_start: f64,
    pub step: f64,
    pub match_radius: f64,
    pub delta_mod_pi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub x_start: f64,
    pub step: f64,
    pub source: String,
    pub tail_extrapolated: bool,
    pub probes: Vec<Probe>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftResult {
    /// Phase shift reduced to `(-pi/2, pi/2]`.
    pub delta_mod_pi: f64,
    pub match_radius: f64,
    /// Largest deviation of any probe from the main solve.
    pub convergence: f64,
    pub diagnostics: Diagnostics,
}

/// Reduce an angle to `(-pi/2, pi/2]`.
pub fn reduce_mod_pi(delta: f64) -> f64 {
    let r = delta - PI * (delta / PI).round();
    if r <= -PI / 2.0 {
        r + PI
    } else {
        r
    }
}

/// Distance between two phase shifts on the circle of period pi.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    reduce_mod_pi(a - b).abs()
}

/// Phase shift with the default start radius and tolerance.
pub fn solve_phase_shift<P: Potential + ?Sized>(potential: &P, l: f64, x_max: f64, step: f64) -> Result<PhaseShiftResult> {
    solve_phase_shift_with(potential, l, x_max, step, SolverOptions::default())
}

/// Integrate `u'' = (l(l+1)/x^2 + q(x) - 1) u` outward and match to
/// `u_l cos(delta) - v_l sin(delta)`, i.e. `u ~ sin(x - l pi/2 + delta)`.
///
/// Matches are recorded on `[0.4 R, R]`. With `opts.extrapolate` the
/// reported phase is the `1/R` extrapolation over `[R/2, R]`, otherwise the
/// plain match at `R`. Three probes (a smaller match window, half the step,
/// twice the start radius) accompany the main solve; their largest
/// deviation is the convergence estimate, which must stay below
/// `opts.tolerance`.
pub fn solve_phase_shift_with<P: Potential + ?Sized>(
    potential: &P,
    l: f64,
    x_max: f64,
    step: f64,
    opts: SolverOptions,
) -> Result<PhaseShiftResult> {
    if !(l > -0.5) {
        return Err(Error::domain(format!("angular momentum must exceed -1/2, got {l}")));
    }
    if !(step > 0.0 && opts.x_start > 0.0 && x_max > 2.0 * opts.x_start && x_max.is_finite()) {
        return Err(Error::domain(format!(
            "need 0 < step, 0 < 2 x_start < x_max (step = {step}, x_start = {}, x_max = {x_max})",
            opts.x_start
        )));
    }
    let runs = [
        ("main", opts.x_start, step),
        ("half_step", opts.x_start, 0.5 * step),
        ("double_start", 2.0 * opts.x_start, step),
    ];
    let radii: Vec<f64> = (0..=RADIUS_SAMPLES)
        .map(|k| x_max * (0.4 + 0.6 * k as f64 / RADIUS_SAMPLES as f64))
        .collect();
    let results = exec::map(opts.exec, &runs, |&(_, xs, h)| integrate(potential, l, xs, h, &radii))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let estimate = |phases: &[f64], lo: f64, hi: f64| -> f64 {
        if opts.extrapolate {
            extrapolate_tail(&radii, phases, lo * x_max, hi * x_max)
        } else {
            let i = radii.iter().rposition(|&r| r <= hi * x_max * (1.0 + 1e-12)).unwrap_or(radii.len() - 1);
            phases[i]
        }
    };
    let main = estimate(&results[0], 0.5, 1.0);
    let mut probes = vec![Probe {
        label: "reduced_radius".into(),
        x_start: opts.x_start,
        step,
        match_radius: RADIUS_PROBE_FRACTION * x_max,
        delta_mod_pi: estimate(&results[0], 0.5 * RADIUS_PROBE_FRACTION, RADIUS_PROBE_FRACTION),
    }];
    for (run, res) in runs.iter().zip(&results).skip(1) {
        probes.push(Probe {
            label: run.0.into(),
            x_start: run.1,
            step: run.2,
            match_radius: x_max,
            delta_mod_pi: estimate(res, 0.5, 1.0),
        });
    }
    let convergence = probes
        .iter()
        .map(|p| phase_distance(p.delta_mod_pi, main))
        .fold(0.0, f64::max);
    if !(convergence <= opts.tolerance) {
        return Err(Error::PhaseNotConverged {
            estimate: convergence,
            tolerance: opts.tolerance,
        });
    }
    Ok(PhaseShiftResult {
        delta_mod_pi: main,
        match_radius: x_max,
        convergence,
        diagnostics: Diagnostics {
            x_start: opts.x_start,
            step,
            source: potential.describe(),
            tail_extrapolated: opts.extrapolate,
            probes,
        },
    })
}

/// Least-squares fit of `delta(R) = delta_inf + a / R` over matches with
/// `lo <= R <= hi`; returns `delta_inf` reduced mod pi.
///
/// A potential tail decaying like `1/x^2` leaves a `1/R` bias in the
/// matched phase, while its oscillating part only enters at `1/R^2`.
fn extrapolate_tail(radii: &[f64], phases: &[f64], lo: f64, hi: f64) -> f64 {
    let tol = 1e-12 * hi;
    let sel: Vec<(f64, f64)> = radii
        .iter()
        .zip(phases)
        .filter(|(&r, _)| r >= lo - tol && r <= hi + tol)
        .map(|(&r, &d)| (r, d))
        .collect();
    let reference = sel.last().map(|p| p.1).unwrap_or(0.0);
    // unwrap around the reference so the fit never straddles a branch cut
    let pts: Vec<(f64, f64)> = sel
        .iter()
        .map(|&(r, d)| (1.0 / r, reference + reduce_mod_pi(d - reference)))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return reference;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    reduce_mod_pi(my - slope * mx)
}

fn q_at<P: Potential + ?Sized>(p: &P, x: f64) -> Result<f64> {
    let q = p.value(x);
    if q.is_finite() {
        Ok(q)
    } else {
        Err(Error::NonFinitePotential { x })
    }
}

/// RK4 on `(u, u')`; returns the phase shift at each radius in `radii`
/// (ascending). Steps are graded as `min(h, x/20)` near the origin where the
/// centrifugal term varies on the scale of `x`.
fn integrate<P: Potential + ?Sized>(p: &P, l: f64, x_start: f64, h: f64, radii: &[f64]) -> Result<Vec<f64>> {
    let ll = l * (l + 1.0);
    let rhs = |x: f64, q: f64, u: f64| (ll / (x * x) + q - 1.0) * u;

    // Free regular solution with the first Frobenius correction for a
    // potential behaving like q_{-1}/x near the origin.
    let q0 = q_at(p, x_start)?;
    let a1 = x_start * q0 / (2.0 * l + 2.0);
    let r0 = riccati(l, x_start)?;
    let mut u = r0.u * (1.0 + a1 * x_start);
    let mut du = r0.up * (1.0 + a1 * x_start) + r0.u * a1;

    let mut x = x_start;
    let mut qx = q0;
    let mut out = Vec::with_capacity(radii.len());
    for &target in radii {
        while x < target {
            let mut dx = h.min(x / 20.0);
            if x + dx > target {
                dx = target - x;
            }
            let q_half = q_at(p, x + 0.5 * dx)?;
            let q_end = q_at(p, x + dx)?;
            let k1u = du;
            let k1v = rhs(x, qx, u);
            let k2u = du + 0.5 * dx * k1v;
            let k2v = rhs(x + 0.5 * dx, q_half, u + 0.5 * dx * k1u);
            let k3u = du + 0.5 * dx * k2v;
            let k3v = rhs(x + 0.5 * dx, q_half, u + 0.5 * dx * k2u);
            let k4u = du + dx * k3v;
            let k4v = rhs(x + dx, q_end, u + dx * k3u);
            u += dx / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            du += dx / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            x += dx;
            qx = q_end;
            let norm = u.abs() + du.abs();
            if norm > 1e100 {
                u /= norm;
                du /= norm;
            }
        }
        let r = riccati(l, x)?;
        let c_cos = u * r.vp - du * r.v;
        let c_sin = u * r.up - du * r.u;
        out.push(reduce_mod_pi(c_sin.atan2(c_cos)));
    }
    Ok(out)
}

/// Exponent `p` of `|q| ~ |x - x_tilde|^-p`, fitted by least squares on
/// `log|q|` versus `log|x - x_tilde|` at distances from `window / 100` to
/// `window` on both sides of the pole.
pub fn pole_order_estimate<P: Potential + ?Sized>(potential: &P, x_tilde: f64, window: f64) -> Result<f64> {
    if !(window > 0.0 && x_tilde.is_finite()) {
        return Err(Error::domain("pole fit needs a positive window"));
    }
    const PER_SIDE: usize = 12;
    let mut pts = Vec::with_capacity(2 * PER_SIDE);
    for k in 0..PER_SIDE {
        let d = window * 10f64.powf(-2.0 * k as f64 / (PER_SIDE - 1) as f64);
        for x in [x_tilde - d, x_tilde + d] {
            if x <= 0.0 {
                continue;
            }
            let q = potential.value(x).abs();
            if q.is_finite() && q > 0.0 {
                pts.push((d.ln(), q.ln()));
            }
        }
    }
    if pts.len() < 4 {
        return Err(Error::InsufficientRange(format!(
            "only {} usable samples around x = {x_tilde}",
            pts.len()
        )));
    }
    let (lo, hi) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, y)| (lo.min(y), hi.max(y)));
    if hi - lo < 10f64.ln() {
        return Err(Error::InsufficientRange(format!(
            "|q| varies by less than a decade around x = {x_tilde}"
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

/// Midpoint sum of `x |q(x)|` over `[a, b]`, skipping cells whose midpoint
/// falls inside any `(center, radius)` exclusion.
pub fn weighted_abs_integral<P: Potential + ?Sized>(
    potential: &P,
    a: f64,
    b: f64,
    cells: usize,
    exclusions: &[(f64, f64)],
    exec: Execution,
) -> Result<f64> {
    if !(b > a && cells > 0) {
        return Err(Error::domain("integral needs b > a and at least one cell"));
    }
    let h = (b - a) / cells as f64;
    let parts = exec::map_range(exec, 0..cells, |i| -> Result<f64> {
        let x = a + (i as f64 + 0.5) * h;
        if exclusions.iter().any(|&(c, r)| (x - c).abs() < r) {
            return Ok(0.0);
        }
        Ok(x * q_at(potential, x)?.abs() * h)
    });
    parts.into_iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTripOptions {
    pub choice: BranchChoice,
    pub match_radius: f64,
    pub step: f64,
    /// Solve on a tabulated potential with this many uniform samples, or on
    /// the analytic branch when `None`.
    pub table_points: Option<usize>,
    pub solver: SolverOptions,
}

impl Default for RoundTripOptions {
    fn default() -> Self {
        RoundTripOptions {
            choice: BranchChoice::Auto,
            match_radius: DEFAULT_MATCH_RADIUS,
            step: DEFAULT_STEP,
            table_points: Some(DEFAULT_TABLE_POINTS),
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub l: f64,
    pub delta_input: f64,
    pub delta_input_mod_pi: f64,
    pub branch: BranchParams,
    pub result: PhaseShiftResult,
    /// Distance between recovered and input phase shifts, modulo pi.
    pub error: f64,
}

/// Invert one phase shift, tabulate the potential and recover the phase
/// shift with the forward solver.
pub fn roundtrip(spec: &PhaseShiftSpec, opts: RoundTripOptions) -> Result<RoundTripReport> {
    let branch = oneterm::resolve_branch(spec, opts.choice)?;
    let result = match opts.table_points {
        Some(points) => {
            let grid = GridSpec::new(0.1 * opts.solver.x_start, opts.match_radius, points)?;
            let table = oneterm::potential_table(
                spec,
                opts.choice,
                &grid,
                TableOptions {
                    scan_x_max: opts.match_radius,
                    exec: opts.solver.exec,
                },
            )?;
            solve_phase_shift_with(&table, spec.l, opts.match_radius, opts.step, opts.solver)?
        }
        None => solve_phase_shift_with(&branch, spec.l, opts.match_radius, opts.step, opts.solver)?,
    };
    let error = phase_distance(result.delta_mod_pi, spec.delta);
    Ok(RoundTripReport {
        l: spec.l,
        delta_input: spec.delta,
        delta_input_mod_pi: reduce_mod_pi(spec.delta),
        branch,
        result,
        error,
    })
}

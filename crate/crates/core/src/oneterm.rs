//! One-term inversion: phase shift to `L` branches, selection of the
//! nonsingular branch, the closed-form transformation kernel and the
//! potential it generates.
//!
//! With a single phase shift the Regge-Newton kernel is separable,
//!
//! ```text
//! K(x, y) = c v_l(x) u_L(y) / W_Ll(x),    c = l(l+1) - L(L+1),
//! q(x)    = -(2/x) d/dx [K(x, x) / x],
//! ```
//!
//! and `L` is tied to the phase shift by `L = l - 2 delta / pi + 2n`.

use std::f64::consts::PI;
use std::io::{self, Write};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::quadrature::GaussLegendre;
use crate::specfun::riccati;
use crate::wronskian::{self, PairParams, ScanOptions, DEFAULT_STEP, DEFAULT_X_MAX};

/// Offset used in place of `L = l` when the phase shift is a multiple of pi.
pub const EPSILON_DEG: f64 = 1e-6;
/// `|L - l|` below this is treated as `L = l`.
pub const DEGENERATE_TOL: f64 = 1e-9;
/// Relative Wronskian size below which the kernel is reported singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;
/// Smallest exclusion radius around a tabulated pole.
pub const MIN_EXCLUSION: f64 = 1e-3;
/// Potential magnitude that defines the edge of an exclusion window.
pub const EXCLUSION_LEVEL: f64 = 1e8;
/// Below this abscissa the quadrature integrand is replaced by its
/// power-law asymptotics.
pub const ORIGIN_CUTOFF: f64 = 1e-6;

pub fn default_branch_window() -> RangeInclusive<i32> {
    -5..=5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftSpec {
    pub l: f64,
    pub delta: f64,
}

impl PhaseShiftSpec {
    pub fn new(l: f64, delta: f64) -> Result<Self> {
        if !(l.is_finite() && l > -0.5) {
            return Err(Error::domain(format!("angular momentum must exceed -1/2, got {l}")));
        }
        if !delta.is_finite() {
            return Err(Error::domain("phase shift must be finite"));
        }
        Ok(PhaseShiftSpec { l, delta })
    }
}

/// One solution branch of `tan(delta - l pi/2) = tan(-L pi/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchParams {
    pub spec: PhaseShiftSpec,
    pub n: i32,
    #[serde(rename = "L")]
    pub big_l: f64,
    pub coupling: f64,
    /// `L -> l` limit: either snapped to `L = l` (zero coupling) or replaced
    /// by the surrogate `L = l -/+ EPSILON_DEG`.
    pub degenerate: bool,
}

impl BranchParams {
    pub fn l(&self) -> f64 {
        self.spec.l
    }

    /// The order pair, or `None` for an exactly degenerate branch.
    pub fn pair(&self) -> Option<PairParams> {
        PairParams::new(self.spec.l, self.big_l).ok()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.degenerate || self.pair().is_some_and(|p| wronskian::is_nonsingular_pair(&p))
    }

    fn pair_or_err(&self) -> Result<PairParams> {
        PairParams::new(self.spec.l, self.big_l)
    }

    /// Build a branch directly from `(l, L)`, bypassing the phase shift map.
    /// `delta` and `n` are back-filled from `L = l - 2 delta/pi`.
    pub fn from_orders(l: f64, big_l: f64) -> Result<Self> {
        let pair = PairParams::new(l, big_l)?;
        let delta = (l - big_l) * PI / 2.0;
        Ok(BranchParams {
            spec: PhaseShiftSpec::new(l, delta)?,
            n: 0,
            big_l,
            coupling: pair.coupling(),
            degenerate: (big_l - l).abs() <= EPSILON_DEG * (1.0 + 1e-9),
        })
    }
}

fn coupling_of(l: f64, big_l: f64) -> f64 {
    l * (l + 1.0) - big_l * (big_l + 1.0)
}

fn branch_l(spec: &PhaseShiftSpec, n: i32) -> f64 {
    spec.l - 2.0 / PI * spec.delta + 2.0 * n as f64
}

/// `L = l - (2/pi) delta + 2n`; rejects `L <= -1/2`.
pub fn branch_parameter(spec: &PhaseShiftSpec, n: i32) -> Result<BranchParams> {
    let big_l = branch_l(spec, n);
    if !(big_l > -0.5) {
        return Err(Error::InadmissibleBranch { n, big_l });
    }
    if (big_l - spec.l).abs() < DEGENERATE_TOL {
        return Ok(BranchParams {
            spec: *spec,
            n,
            big_l: spec.l,
            coupling: 0.0,
            degenerate: true,
        });
    }
    Ok(BranchParams {
        spec: *spec,
        n,
        big_l,
        coupling: coupling_of(spec.l, big_l),
        degenerate: false,
    })
}

/// The branch with `0 < |L - l| <= 1`, searched over `n` in
/// [`default_branch_window`].
pub fn select_nonsingular(spec: &PhaseShiftSpec) -> Result<BranchParams> {
    select_nonsingular_in(spec, default_branch_window())
}

/// As [`select_nonsingular`] over an explicit branch window.
///
/// When `delta` is a multiple of pi the formula lands on `L = l`, which is
/// excluded; the returned branch then carries the surrogate
/// `L = l - EPSILON_DEG` and the degenerate flag. If both `L = l - 1` and
/// `L = l + 1` qualify (delta an odd multiple of pi/2), the smaller `n` wins.
pub fn select_nonsingular_in(spec: &PhaseShiftSpec, window: RangeInclusive<i32>) -> Result<BranchParams> {
    let candidates: Vec<(i32, f64)> = window.map(|n| (n, branch_l(spec, n))).collect();
    let l = spec.l;
    if let Some(&(n, _)) = candidates.iter().find(|(_, big_l)| (big_l - l).abs() < DEGENERATE_TOL) {
        let big_l = if l - EPSILON_DEG > -0.5 {
            l - EPSILON_DEG
        } else {
            l + EPSILON_DEG
        };
        return Ok(BranchParams {
            spec: *spec,
            n,
            big_l,
            coupling: coupling_of(l, big_l),
            degenerate: true,
        });
    }
    let found = candidates.iter().find(|&&(_, big_l)| {
        let d = (big_l - l).abs();
        big_l > -0.5 && d > 0.0 && d <= 1.0
    });
    match found {
        Some(&(n, big_l)) => Ok(BranchParams {
            spec: *spec,
            n,
            big_l,
            coupling: coupling_of(l, big_l),
            degenerate: false,
        }),
        None => Err(Error::NoNonsingularBranch {
            l,
            delta: spec.delta,
            candidates,
        }),
    }
}

/// Input kernel `g(x, y) = c u_l(min) v_l(max)`.
pub fn input_kernel_g(branch: &BranchParams, x: f64, y: f64) -> Result<f64> {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let l = branch.l();
    let u = riccati(l, lo)?.u;
    let v = riccati(l, hi)?.v;
    Ok(branch.coupling * u * v)
}

fn check_wronskian(x: f64, w: f64, scale: f64) -> Result<()> {
    if !(w.abs() > SINGULAR_THRESHOLD * scale) {
        return Err(Error::Singular { x, wronskian: w.abs() });
    }
    Ok(())
}

/// Transformation kernel `K(x, y) = c v_l(x) u_L(y) / W_Ll(x)` for `x >= y > 0`.
pub fn kernel_k(branch: &BranchParams, x: f64, y: f64) -> Result<f64> {
    if !(y > 0.0 && x >= y) {
        return Err(Error::domain(format!("kernel needs x >= y > 0, got x = {x}, y = {y}")));
    }
    if branch.coupling == 0.0 {
        return Ok(0.0);
    }
    let pair = branch.pair_or_err()?;
    let rl = riccati(pair.l, x)?;
    let rbig_x = riccati(pair.big_l, x)?;
    let w = rbig_x.u * rl.vp - rbig_x.up * rl.v;
    let scale = (rbig_x.u * rl.vp).abs().max((rbig_x.up * rl.v).abs());
    check_wronskian(x, w, scale)?;
    let u_big_y = if y == x { rbig_x.u } else { riccati(pair.big_l, y)?.u };
    Ok(branch.coupling * rl.v * u_big_y / w)
}

/// `q(x) = -(2/x) d/dx [K(x,x)/x]`, differentiated analytically using
/// `W' = c u_L v_l / x^2`.
pub fn potential_value(branch: &BranchParams, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("potential needs x > 0, got {x}")));
    }
    let c = branch.coupling;
    if c == 0.0 {
        return Ok(0.0);
    }
    let pair = branch.pair_or_err()?;
    let rl = riccati(pair.l, x)?;
    let rb = riccati(pair.big_l, x)?;
    let w = rb.u * rl.vp - rb.up * rl.v;
    let scale = (rb.u * rl.vp).abs().max((rb.up * rl.v).abs());
    check_wronskian(x, w, scale)?;
    let dw = c * rb.u * rl.v / (x * x);
    let num = rl.v * rb.u;
    let dnum = rl.vp * rb.u + rl.v * rb.up;
    let xw = x * w;
    let dxw = w + x * dw;
    let df = c * (dnum / xw - num * dxw / (xw * xw));
    Ok(-2.0 * df / x)
}

/// `K(x, x) / x`, the quantity differentiated to obtain the potential.
pub fn diagonal_kernel_over_x(branch: &BranchParams, x: f64) -> Result<f64> {
    Ok(kernel_k(branch, x, x)? / x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "n")]
pub enum BranchChoice {
    Auto,
    Index(i32),
}

pub fn resolve_branch(spec: &PhaseShiftSpec, choice: BranchChoice) -> Result<BranchParams> {
    match choice {
        BranchChoice::Auto => select_nonsingular(spec),
        BranchChoice::Index(n) => branch_parameter(spec, n),
    }
}

/// Uniform grid with `points` samples from `x_min` to `x_max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<Self> {
        if !(x_min > 0.0 && x_max > x_min && x_max.is_finite()) {
            return Err(Error::domain(format!(
                "grid needs 0 < x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if points < 2 {
            return Err(Error::domain("grid needs at least two points"));
        }
        Ok(GridSpec { x_min, x_max, points })
    }

    pub fn abscissae(&self) -> Vec<f64> {
        let h = (self.x_max - self.x_min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.x_max
                } else {
                    self.x_min + h * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub x: f64,
    pub exclusion_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    /// Upper end of the Wronskian root scan; independent of the grid.
    pub scan_x_max: f64,
    pub exec: Execution,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            scan_x_max: DEFAULT_X_MAX,
            exec: Execution::default(),
        }
    }
}

/// The potential sampled on a grid. Samples inside an exclusion window
/// around a pole carry `q = NaN` and `singular = true`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTable {
    pub branch: BranchParams,
    pub grid: Vec<f64>,
    pub q: Vec<f64>,
    pub singular: Vec<bool>,
    pub singular_points: Vec<SingularPoint>,
    pub scan_x_max: f64,
}

/// Branch metadata and singular points; the JSON form of a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub l: f64,
    pub delta: f64,
    pub n: i32,
    #[serde(rename = "L")]
    pub big_l: f64,
    pub coupling: f64,
    pub degenerate: bool,
    pub nonsingular: bool,
    pub scan_x_max: f64,
    pub grid_points: usize,
    pub singular_points: Vec<SingularPoint>,
}

impl PotentialTable {
    pub fn metadata(&self) -> TableMetadata {
        TableMetadata {
            l: self.branch.spec.l,
            delta: self.branch.spec.delta,
            n: self.branch.n,
            big_l: self.branch.big_l,
            coupling: self.branch.coupling,
            degenerate: self.branch.degenerate,
            nonsingular: self.branch.is_nonsingular(),
            scan_x_max: self.scan_x_max,
            grid_points: self.grid.len(),
            singular_points: self.singular_points.clone(),
        }
    }

    /// CSV with header `x,q,singular_flag`; numbers in 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,q,singular_flag")?;
        for ((x, q), s) in self.grid.iter().zip(&self.q).zip(&self.singular) {
            writeln!(out, "{x:.16e},{q:.16e},{}", u8::from(*s))?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(out, &self.metadata()).map_err(io::Error::from)
    }
}

/// Radius inside which `|q|` exceeds [`EXCLUSION_LEVEL`], from the
/// double-pole amplitude measured a short distance away.
fn exclusion_radius(branch: &BranchParams, x_root: f64) -> f64 {
    let d = 1e-2;
    let amp = [x_root - d, x_root + d]
        .iter()
        .filter(|&&x| x > 0.0)
        .filter_map(|&x| potential_value(branch, x).ok())
        .map(|q| q.abs() * d * d)
        .fold(0.0, f64::max);
    (amp / EXCLUSION_LEVEL).sqrt().max(MIN_EXCLUSION)
}

/// Tabulate the potential of the chosen branch. Never aborts on a pole:
/// samples near Wronskian roots are flagged instead.
pub fn potential_table(
    spec: &PhaseShiftSpec,
    choice: BranchChoice,
    grid: &GridSpec,
    opts: TableOptions,
) -> Result<PotentialTable> {
    let branch = resolve_branch(spec, choice)?;
    let singular_points = match branch.pair() {
        Some(pair) if branch.coupling != 0.0 => {
            let profile = wronskian::find_roots_with(
                &pair,
                ScanOptions {
                    x_max: opts.scan_x_max.max(grid.x_max),
                    step: DEFAULT_STEP,
                    exec: opts.exec,
                },
            )?;
            profile
                .roots
                .iter()
                .map(|r| SingularPoint {
                    x: r.x,
                    exclusion_radius: exclusion_radius(&branch, r.x),
                })
                .collect()
        }
        _ => Vec::new(),
    };
    let xs = grid.abscissae();
    let samples = exec::map(opts.exec, &xs, |&x| -> Result<(f64, bool)> {
        let near = singular_points
            .iter()
            .any(|s: &SingularPoint| (x - s.x).abs() <= s.exclusion_radius);
        if near {
            return Ok((f64::NAN, true));
        }
        match potential_value(&branch, x) {
            Ok(q) => Ok((q, false)),
            Err(Error::Singular { .. }) => Ok((f64::NAN, true)),
            Err(e) => Err(e),
        }
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (q, singular) = samples.into_iter().unzip();
    Ok(PotentialTable {
        branch,
        grid: xs,
        q,
        singular,
        singular_points,
        scan_x_max: opts.scan_x_max.max(grid.x_max),
    })
}

/// Residual of the Regge-Newton equation at `(x, y)`:
/// `K(x,y) - g(x,y) + int_0^x t^-2 K(x,t) g(t,y) dt`.
///
/// The integral is split at `t = y` where `g` has a kink. On `[0, y]` the
/// integrand behaves like `t^(L+l)`; the substitution `t = y s^m` with
/// `m = max(2, 2/(L+l+1))` absorbs that power so Gauss-Legendre sees a smooth
/// integrand. Each panel uses `quad_nodes / 2` nodes.
pub fn residual_integral_equation(branch: &BranchParams, x: f64, y: f64, quad_nodes: usize) -> Result<f64> {
    if !(y > 0.0 && x >= y) {
        return Err(Error::domain(format!("residual needs x >= y > 0, got x = {x}, y = {y}")));
    }
    if quad_nodes < 2 {
        return Err(Error::domain("need at least two quadrature nodes"));
    }
    if branch.coupling == 0.0 {
        return Ok(0.0);
    }
    let alpha = branch.big_l + branch.l();
    if !(alpha > -1.0) {
        return Err(Error::domain(format!(
            "integrand ~ t^{alpha} is not integrable at the origin"
        )));
    }
    let k_xy = kernel_k(branch, x, y)?;
    let g_xy = input_kernel_g(branch, x, y)?;
    let rule = GaussLegendre::new((quad_nodes / 2).max(1));

    let integrand = |t: f64| -> Result<f64> { Ok(kernel_k(branch, x, t)? * input_kernel_g(branch, t, y)? / (t * t)) };
    let at_cutoff = if ORIGIN_CUTOFF < y {
        Some(integrand(ORIGIN_CUTOFF)?)
    } else {
        None
    };
    let near_origin = |t: f64| -> Result<f64> {
        match at_cutoff {
            Some(h0) if t < ORIGIN_CUTOFF => Ok(h0 * (t / ORIGIN_CUTOFF).powf(alpha)),
            _ => integrand(t),
        }
    };

    let m = (2.0 / (alpha + 1.0)).max(2.0);
    let inner = rule.try_integrate(0.0, 1.0, |s| -> Result<f64> {
        if s <= 0.0 {
            return Ok(0.0);
        }
        let t = y * s.powf(m);
        let jac = y * m * s.powf(m - 1.0);
        Ok(near_origin(t)? * jac)
    })?;
    let outer = if x > y {
        rule.try_integrate(y, x, integrand)?
    } else {
        0.0
    };
    Ok(k_xy - g_xy + inner + outer)
}

//! The one-term Wronskian `W_Ll(x) = u_L v'_l - u'_L v_l`, its limits at the
//! origin and at infinity, and the search for its roots (the set where the
//! transformation kernel is singular).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::roots;
use crate::specfun::{log_gamma, riccati};

/// Default upper cutoff for the root search.
pub const DEFAULT_X_MAX: f64 = 100.0;
/// Default sampling step; the Wronskian oscillates on a scale of ~pi.
pub const DEFAULT_STEP: f64 = PI / 8.0;
/// Left end of the geometric sampling near the origin.
pub const ORIGIN_SAMPLE: f64 = 1e-4;
const ORIGIN_SAMPLES: usize = 24;
/// Relative size below which a sample without a sign change is flagged as a
/// possible tangency.
pub const TANGENCY_THRESHOLD: f64 = 1e-12;

/// The `(l, L)` order pair. `l` is the physical angular momentum, `L` the
/// shifted parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    pub l: f64,
    #[serde(rename = "L")]
    pub big_l: f64,
}

impl PairParams {
    pub fn new(l: f64, big_l: f64) -> Result<Self> {
        if !(l.is_finite() && big_l.is_finite()) {
            return Err(Error::InvalidPair { l, big_l, reason: "orders must be finite" });
        }
        if !(l > -0.5 && big_l > -0.5) {
            return Err(Error::InvalidPair { l, big_l, reason: "orders must exceed -1/2" });
        }
        if l == big_l {
            return Err(Error::InvalidPair { l, big_l, reason: "l and L must differ" });
        }
        Ok(PairParams { l, big_l })
    }

    /// `l(l+1) - L(L+1)`
    pub fn coupling(&self) -> f64 {
        self.l * (self.l + 1.0) - self.big_l * (self.big_l + 1.0)
    }

    pub fn separation(&self) -> f64 {
        (self.big_l - self.l).abs()
    }
}

/// `W_Ll(x)` for arbitrary orders, including `l == L` where it is identically 1.
pub fn wronskian_orders(l: f64, big_l: f64, x: f64) -> Result<f64> {
    let rl = riccati(l, x)?;
    let rbig = riccati(big_l, x)?;
    Ok(rbig.u * rl.vp - rbig.up * rl.v)
}

pub fn wronskian(pair: &PairParams, x: f64) -> Result<f64> {
    wronskian_orders(pair.l, pair.big_l, x)
}

/// Value and derivative. The derivative follows from the two Riccati-Bessel
/// equations: `W' = [l(l+1) - L(L+1)] u_L v_l / x^2`.
pub fn wronskian_with_derivative(pair: &PairParams, x: f64) -> Result<(f64, f64)> {
    let rl = riccati(pair.l, x)?;
    let rbig = riccati(pair.big_l, x)?;
    let w = rbig.u * rl.vp - rbig.up * rl.v;
    let dw = pair.coupling() * rbig.u * rl.v / (x * x);
    Ok((w, dw))
}

/// Magnitude of the larger of the two products making up `W`, the natural
/// scale against which a small `W` is judged.
pub fn wronskian_scale(pair: &PairParams, x: f64) -> Result<f64> {
    let rl = riccati(pair.l, x)?;
    let rbig = riccati(pair.big_l, x)?;
    Ok((rbig.u * rl.vp).abs().max((rbig.up * rl.v).abs()))
}

/// Leading small-`x` behaviour `W ~ coefficient * x^exponent` with
/// coefficient `2^{l-L-1} (L+l+1) Gamma(l+1/2) / Gamma(L+3/2)` and exponent
/// `L - l`. The coefficient is positive for all admissible pairs.
pub fn origin_coefficient(pair: &PairParams) -> Result<(f64, f64)> {
    let (l, big_l) = (pair.l, pair.big_l);
    let log_ratio = log_gamma(l + 0.5)? - log_gamma(big_l + 1.5)?;
    let coef = 2f64.powf(l - big_l - 1.0) * (big_l + l + 1.0) * log_ratio.exp();
    Ok((coef, big_l - l))
}

/// `cos((l - L) pi / 2)`.
pub fn infinity_limit(pair: &PairParams) -> f64 {
    ((pair.l - pair.big_l) * PI / 2.0).cos()
}

/// Nonsingularity predicate: `W_Ll` has no positive root iff `0 < |L - l| <= 1`.
pub fn is_nonsingular_pair(pair: &PairParams) -> bool {
    let d = pair.separation();
    d > 0.0 && d <= 1.0
}

/// True when `1 + 4k < l - L < 3 + 4k` for some integer `k`; then the origin
/// and infinity signs of `W` differ.
pub fn in_sign_change_band(pair: &PairParams) -> bool {
    let r = (pair.l - pair.big_l - 1.0).rem_euclid(4.0);
    r > 0.0 && r < 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WronskianRoot {
    pub x: f64,
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootFailure {
    pub bracket: (f64, f64),
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WronskianProfile {
    pub pair: PairParams,
    pub x_max: f64,
    pub step: f64,
    pub samples: Vec<(f64, f64)>,
    pub roots: Vec<WronskianRoot>,
    pub failures: Vec<RootFailure>,
    pub warnings: Vec<String>,
    pub origin_coefficient: f64,
    pub origin_exponent: f64,
    pub sign_origin: f64,
    pub limit_infinity: f64,
}

impl WronskianProfile {
    pub fn root_positions(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.x).collect()
    }

    pub fn first_root(&self) -> Option<f64> {
        self.roots.first().map(|r| r.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub x_max: f64,
    pub step: f64,
    pub exec: Execution,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            x_max: DEFAULT_X_MAX,
            step: DEFAULT_STEP,
            exec: Execution::default(),
        }
    }
}

fn sample_grid(x_max: f64, step: f64) -> Vec<f64> {
    let mut xs = Vec::new();
    let first = step.min(x_max);
    if ORIGIN_SAMPLE < first {
        let ratio = (first / ORIGIN_SAMPLE).ln();
        for k in 0..ORIGIN_SAMPLES {
            xs.push(ORIGIN_SAMPLE * (ratio * k as f64 / ORIGIN_SAMPLES as f64).exp());
        }
    }
    let mut k = 1usize;
    loop {
        let x = step * k as f64;
        if x >= x_max {
            break;
        }
        xs.push(x);
        k += 1;
    }
    xs.push(x_max);
    xs
}

/// Roots of `W_Ll` on `(0, x_max]` with the default step.
pub fn find_roots(pair: &PairParams, x_max: f64) -> Result<WronskianProfile> {
    find_roots_with(
        pair,
        ScanOptions {
            x_max,
            ..ScanOptions::default()
        },
    )
}

/// Dense sign scan followed by bracketed Newton polish of every sign change.
///
/// Only strict sign changes between samples count as roots; an envelope that
/// decays towards zero never does. Near-zero samples without a sign change
/// are reported as warnings.
pub fn find_roots_with(pair: &PairParams, opts: ScanOptions) -> Result<WronskianProfile> {
    if !(opts.x_max > 0.0 && opts.x_max.is_finite()) {
        return Err(Error::domain(format!("x_max must be positive, got {}", opts.x_max)));
    }
    if !(opts.step > 0.0 && opts.step <= DEFAULT_STEP) {
        return Err(Error::domain(format!(
            "sampling step must lie in (0, pi/8], got {}",
            opts.step
        )));
    }
    let xs = sample_grid(opts.x_max, opts.step);
    let evaluated = exec::map(opts.exec, &xs, |&x| -> Result<(f64, f64, f64)> {
        Ok((x, wronskian(pair, x)?, wronskian_scale(pair, x)?))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let (coef, exponent) = origin_coefficient(pair)?;
    let sign_origin = coef.signum();
    let mut warnings = Vec::new();
    let (x0, w0, _) = evaluated[0];
    if w0.signum() != sign_origin {
        warnings.push(format!(
            "sign of W at x = {x0:e} disagrees with the origin asymptotics; a root may lie below the first sample"
        ));
    }

    let brackets: Vec<(f64, f64)> = evaluated
        .windows(2)
        .filter(|p| p[0].1 != 0.0 && p[0].1.signum() != p[1].1.signum() && p[1].1 != 0.0)
        .map(|p| (p[0].0, p[1].0))
        .collect();
    for p in evaluated.windows(3) {
        let (x, w, s) = p[1];
        let flanks_same = p[0].1.signum() == w.signum() && p[2].1.signum() == w.signum();
        if flanks_same && w.abs() <= TANGENCY_THRESHOLD * s {
            warnings.push(format!("possible tangency (double root) near x = {x}"));
        }
    }
    for &(x, w, _) in &evaluated {
        if w == 0.0 {
            warnings.push(format!("W vanishes exactly at sample x = {x}"));
        }
    }

    let polished = exec::map(opts.exec, &brackets, |&(a, b)| {
        roots::polish(|x| wronskian_with_derivative(pair, x), a, b, None)
    });
    let mut roots_found = Vec::new();
    let mut failures = Vec::new();
    for (bracket, res) in brackets.into_iter().zip(polished) {
        match res {
            Ok(x) => roots_found.push(WronskianRoot { x, bracket }),
            Err(e) => failures.push(RootFailure {
                bracket,
                message: e.to_string(),
            }),
        }
    }

    Ok(WronskianProfile {
        pair: *pair,
        x_max: opts.x_max,
        step: opts.step,
        samples: evaluated.into_iter().map(|(x, w, _)| (x, w)).collect(),
        roots: roots_found,
        failures,
        warnings,
        origin_coefficient: coef,
        origin_exponent: exponent,
        sign_origin,
        limit_infinity: infinity_limit(pair),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    /// A root is expected but none was found below the cutoff.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCase {
    pub l: f64,
    #[serde(rename = "L")]
    pub big_l: f64,
    pub expected_nonsingular: bool,
    pub roots: usize,
    pub first_root: Option<f64>,
    pub sign_band: bool,
    pub sign_origin: f64,
    pub limit_infinity: f64,
    pub verdict: Verdict,
}

/// Check one pair against the nonsingularity predicate.
pub fn theorem_case(pair: &PairParams, x_max: f64) -> Result<TheoremCase> {
    let profile = find_roots_with(
        pair,
        ScanOptions {
            x_max,
            step: DEFAULT_STEP,
            exec: Execution::Sequential,
        },
    )?;
    let expected_nonsingular = is_nonsingular_pair(pair);
    let sign_band = in_sign_change_band(pair);
    let nroots = profile.roots.len();
    let verdict = if !profile.failures.is_empty() {
        Verdict::Inconsistent
    } else if expected_nonsingular {
        if nroots == 0 {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        }
    } else if sign_band && !(profile.sign_origin > 0.0 && profile.limit_infinity < 0.0) {
        Verdict::Inconsistent
    } else if nroots > 0 {
        Verdict::Consistent
    } else {
        Verdict::Inconclusive
    };
    Ok(TheoremCase {
        l: pair.l,
        big_l: pair.big_l,
        expected_nonsingular,
        roots: nroots,
        first_root: profile.first_root(),
        sign_band,
        sign_origin: profile.sign_origin,
        limit_infinity: profile.limit_infinity,
        verdict,
    })
}

/// All ordered pairs `l != L` drawn from `values`, checked in parallel.
pub fn theorem_sweep(values: &[f64], x_max: f64, exec: Execution) -> Result<Vec<TheoremCase>> {
    let mut pairs = Vec::new();
    for &l in values {
        for &big_l in values {
            if l != big_l {
                pairs.push(PairParams::new(l, big_l)?);
            }
        }
    }
    exec::map(exec, &pairs, |p| theorem_case(p, x_max))
        .into_iter()
        .collect()
}

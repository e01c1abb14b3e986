//! Positive zeros of `J_nu`, `Y_nu`, `J'_nu` and the interlacing patterns
//! that decide whether a Wronskian `W_Ll` can vanish.
//!
//! Zeros are located by a sign scan with step `pi/8` starting just below the
//! first possible zero, then polished by safeguarded Newton with a McMahon
//! initial guess. Indexing is 1-based and counts only strictly positive
//! zeros; for `J'_nu` (nu > 0) the first stationary point is `n = 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::roots;
use crate::specfun::bessel_jy;

/// Sign-scan step; zeros of all three kinds are separated by more than this.
pub const SCAN_STEP: f64 = PI / 8.0;

/// Margin a strict zero inequality must clear to count as satisfied.
pub const STRICT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZeroKind {
    J,
    Y,
    #[serde(rename = "Jprime")]
    JPrime,
}

impl std::str::FromStr for ZeroKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "J" | "j" => Ok(ZeroKind::J),
            "Y" | "y" => Ok(ZeroKind::Y),
            "Jprime" | "jprime" | "Jp" | "jp" => Ok(ZeroKind::JPrime),
            other => Err(Error::domain(format!("unknown zero kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroQuery {
    pub nu: f64,
    pub n: usize,
    pub kind: ZeroKind,
}

impl ZeroQuery {
    pub fn new(nu: f64, n: usize, kind: ZeroKind) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::domain(format!("zero query needs nu > 0, got {nu}")));
        }
        if n == 0 {
            return Err(Error::domain("zero index is 1-based"));
        }
        Ok(ZeroQuery { nu, n, kind })
    }
}

/// Function value and derivative whose zeros are requested.
fn target(nu: f64, kind: ZeroKind, x: f64) -> Result<(f64, f64)> {
    let b = bessel_jy(nu, x)?;
    Ok(match kind {
        ZeroKind::J => (b.j, b.jp),
        ZeroKind::Y => (b.y, b.yp),
        // Bessel's equation: J'' = -J'/x - (1 - nu^2/x^2) J
        ZeroKind::JPrime => (b.jp, -b.jp / x - (1.0 - nu * nu / (x * x)) * b.j),
    })
}

/// McMahon's large-zero expansion, used only as a Newton seed.
pub fn mcmahon(nu: f64, n: usize, kind: ZeroKind) -> f64 {
    let mu = 4.0 * nu * nu;
    let s = n as f64;
    match kind {
        ZeroKind::J | ZeroKind::Y => {
            let shift = if kind == ZeroKind::J { 0.25 } else { 0.75 };
            let beta = (s + 0.5 * nu - shift) * PI;
            let e = 8.0 * beta;
            beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e.powi(3))
        }
        ZeroKind::JPrime => {
            let beta = (s + 0.5 * nu - 0.75) * PI;
            let e = 8.0 * beta;
            beta - (mu + 3.0) / e - 4.0 * (7.0 * mu * mu + 82.0 * mu - 9.0) / (3.0 * e.powi(3))
        }
    }
}

/// The first `count` positive zeros of the requested kind, strictly
/// increasing.
pub fn bessel_zeros(nu: f64, kind: ZeroKind, count: usize) -> Result<Vec<f64>> {
    ZeroQuery::new(nu, count.max(1), kind)?;
    let mut zeros = Vec::with_capacity(count);
    // Every first zero of the three kinds lies above sqrt(nu (nu + 2)) / 2.
    let mut x0 = 0.5 * (nu * (nu + 2.0)).sqrt();
    let (mut f0, _) = target(nu, kind, x0)?;
    while zeros.len() < count {
        let x1 = x0 + SCAN_STEP;
        let (f1, _) = target(nu, kind, x1)?;
        if f1 == 0.0 {
            zeros.push(x1);
            x0 = x1 + 1e-3 * SCAN_STEP;
            f0 = target(nu, kind, x0)?.0;
            continue;
        }
        if f0.signum() != f1.signum() {
            let seed = mcmahon(nu, zeros.len() + 1, kind);
            let z = roots::polish(|x| target(nu, kind, x), x0, x1, Some(seed))?;
            if let Some(&last) = zeros.last() {
                if z <= last {
                    return Err(Error::Convergence {
                        what: "zero sequence (non-increasing root)",
                        iterations: zeros.len(),
                    });
                }
            }
            zeros.push(z);
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(zeros)
}

/// The `n`-th positive zero, absolute accuracy well below `1e-9`.
pub fn bessel_zero(q: ZeroQuery) -> Result<f64> {
    let zs = bessel_zeros(q.nu, q.kind, q.n)?;
    Ok(zs[q.n - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interlace {
    Regular,
    Irregular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlaceReport {
    pub l: f64,
    #[serde(rename = "L")]
    pub big_l: f64,
    pub checked_up_to: usize,
    pub pattern: Vec<Interlace>,
    pub first_irregular: Option<usize>,
}

/// For `l < L`, classify each `n <= count` as regular when
/// `y_{l+1/2,n} < j_{L+1/2,n} < y_{l+1/2,n+1}`.
pub fn interlace_scan(l: f64, big_l: f64, count: usize) -> Result<InterlaceReport> {
    if !(l < big_l) {
        return Err(Error::InvalidPair {
            l,
            big_l,
            reason: "interlace scan requires l < L",
        });
    }
    if !(l > -0.5) {
        return Err(Error::InvalidPair {
            l,
            big_l,
            reason: "orders must exceed -1/2",
        });
    }
    if count == 0 {
        return Err(Error::domain("interlace scan needs at least one index"));
    }
    let y = bessel_zeros(l + 0.5, ZeroKind::Y, count + 1)?;
    let j = bessel_zeros(big_l + 0.5, ZeroKind::J, count)?;
    let pattern: Vec<Interlace> = (0..count)
        .map(|i| {
            if y[i] < j[i] && j[i] < y[i + 1] {
                Interlace::Regular
            } else {
                Interlace::Irregular
            }
        })
        .collect();
    let first_irregular = pattern
        .iter()
        .position(|&p| p == Interlace::Irregular)
        .map(|i| i + 1);
    Ok(InterlaceReport {
        l,
        big_l,
        checked_up_to: count,
        pattern,
        first_irregular,
    })
}

/// `j'_{nu,n+1} - j_{nu+1,n}`; positive when the inequality holds.
pub fn proposition_gap(nu: f64, n: usize) -> Result<f64> {
    let jp = bessel_zero(ZeroQuery::new(nu, n + 1, ZeroKind::JPrime)?)?;
    let j1 = bessel_zero(ZeroQuery::new(nu + 1.0, n, ZeroKind::J)?)?;
    Ok(jp - j1)
}

/// Whether `j_{nu+1,n} < j'_{nu,n+1}` holds with margin [`STRICT_MARGIN`].
pub fn check_proposition(nu: f64, n: usize) -> Result<bool> {
    Ok(proposition_gap(nu, n)? > STRICT_MARGIN)
}

/// Every inequality checked for one `(nu, n)`, as the smallest gap in each
/// chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub nu: f64,
    pub n: usize,
    /// `j'_{nu,n+1} - j_{nu+1,n}`
    pub proposition_gap: f64,
    /// Smallest step in `j_{nu,n} < j_{nu+1,n} < j'_{nu,n+1} < j_{nu,n+1}`.
    pub classical_chain_gap: f64,
    /// `y_{nu,n+1} - j_{nu+1,n}`
    pub y_chain_gap: f64,
    /// `y_{nu,n+1} - j'_{nu,n+1}`
    pub intermediate_gap: f64,
}

impl ChainCheck {
    pub fn min_gap(&self) -> f64 {
        self.proposition_gap
            .min(self.classical_chain_gap)
            .min(self.y_chain_gap)
            .min(self.intermediate_gap)
    }

    pub fn holds(&self, margin: f64) -> bool {
        self.min_gap() > margin
    }
}

/// Chain checks for `n = 1..=count` at one order.
pub fn chain_checks(nu: f64, count: usize) -> Result<Vec<ChainCheck>> {
    let j = bessel_zeros(nu, ZeroKind::J, count + 1)?;
    let j1 = bessel_zeros(nu + 1.0, ZeroKind::J, count)?;
    let jp = bessel_zeros(nu, ZeroKind::JPrime, count + 1)?;
    let y = bessel_zeros(nu, ZeroKind::Y, count + 1)?;
    Ok((0..count)
        .map(|i| {
            let classical = (j1[i] - j[i]).min(jp[i + 1] - j1[i]).min(j[i + 1] - jp[i + 1]);
            ChainCheck {
                nu,
                n: i + 1,
                proposition_gap: jp[i + 1] - j1[i],
                classical_chain_gap: classical,
                y_chain_gap: y[i + 1] - j1[i],
                intermediate_gap: y[i + 1] - jp[i + 1],
            }
        })
        .collect())
}

/// Run [`chain_checks`] over a list of orders.
pub fn proposition_sweep(nus: &[f64], count: usize, exec: Execution) -> Result<Vec<ChainCheck>> {
    exec::map(exec, nus, |&nu| chain_checks(nu, count))
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero(nu: f64, n: usize, kind: ZeroKind) -> f64 {
        bessel_zero(ZeroQuery::new(nu, n, kind).unwrap()).unwrap()
    }

    #[test]
    fn half_order_zeros() {
        assert!((zero(0.5, 3, ZeroKind::J) - 3.0 * PI).abs() < 1e-10);
        assert!((zero(0.5, 1, ZeroKind::Y) - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn stationary_point_index_starts_near_origin() {
        // J_{0.1} rises from 0 and turns over well before 1.
        let z = zero(0.1, 1, ZeroKind::JPrime);
        assert!((z - 0.463_510_493_617_849_7).abs() < 1e-9);
        let z2 = zero(0.1, 2, ZeroKind::JPrime);
        assert!((z2 - 3.991_098_612_703_807).abs() < 1e-9);
    }

    #[test]
    fn query_validation() {
        assert!(ZeroQuery::new(0.0, 1, ZeroKind::J).is_err());
        assert!(ZeroQuery::new(1.0, 0, ZeroKind::J).is_err());
        assert!("Q".parse::<ZeroKind>().is_err());
        assert_eq!("Jprime".parse::<ZeroKind>().unwrap(), ZeroKind::JPrime);
    }

    #[test]
    fn interlace_rejects_unordered_pair() {
        assert!(interlace_scan(2.0, 0.0, 5).is_err());
        assert!(interlace_scan(1.0, 1.0, 5).is_err());
    }

    #[test]
    fn mcmahon_is_close_for_large_index() {
        let z = zero(1.5, 20, ZeroKind::J);
        assert!((mcmahon(1.5, 20, ZeroKind::J) - z).abs() < 1e-6);
    }
}

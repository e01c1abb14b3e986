//! Bracketed root polishing shared by the zero finders and the Wronskian
//! root search.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Safeguarded Newton iteration inside a sign-change bracket `[a, b]`.
///
/// `f` returns `(value, derivative)`. A Newton step that leaves the current
/// bracket, or fails to halve the residual, is replaced by bisection, so the
/// iteration always converges to the bracketed root.
pub fn polish<F>(f: F, mut a: f64, mut b: f64, guess: Option<f64>) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let (fa, _) = f(a)?;
    let (fb, _) = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::domain(format!("[{a}, {b}] does not bracket a sign change")));
    }
    let sa = fa.signum();
    let mut x = match guess {
        Some(g) if g > a && g < b => g,
        _ => 0.5 * (a + b),
    };
    let mut prev_step = b - a;
    for _ in 0..MAX_ITER {
        let (fx, dfx) = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        let newton = if dfx != 0.0 { x - fx / dfx } else { f64::NAN };
        let step;
        if newton.is_finite() && newton > a && newton < b && (newton - x).abs() < 0.5 * prev_step.abs() {
            step = newton - x;
            x = newton;
        } else {
            let mid = 0.5 * (a + b);
            step = mid - x;
            x = mid;
        }
        prev_step = step;
        let tol = 4.0 * f64::EPSILON * x.abs().max(1e-300);
        if step.abs() <= tol || (b - a) <= tol {
            return Ok(x);
        }
    }
    Err(Error::Convergence {
        what: "bracketed Newton polish",
        iterations: MAX_ITER,
    })
}

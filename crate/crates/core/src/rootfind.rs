//! Bracketed bisection with a Newton polish.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds a root of the increasing function `f` inside `[lo, hi]`.
///
/// Bisects until the bracket is narrower than `rel_width * max(|lo|, |hi|)`
/// (or an absolute floor of `rel_width`), then takes up to three Newton steps
/// with `df`, each kept only if it stays inside the bracket and lowers
/// `|f|`.
pub fn bisect_newton<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, rel_width: f64) -> Result<Root>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::Accuracy {
            message: format!("root not bracketed by [{lo}, {hi}] (f = {flo:e}, {fhi:e})"),
            value: if flo.abs() < fhi.abs() { lo } else { hi },
            bound: hi - lo,
        });
    }
    if flo == 0.0 {
        return Ok(Root { x: lo, residual: 0.0, iterations: 0 });
    }
    if fhi == 0.0 {
        return Ok(Root { x: hi, residual: 0.0, iterations: 0 });
    }
    let mut iterations = 0;
    while hi - lo > rel_width * lo.abs().max(hi.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        iterations += 1;
        if fm == 0.0 {
            return Ok(Root { x: mid, residual: 0.0, iterations });
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if iterations > 2000 {
            return Err(Error::Accuracy {
                message: format!("bisection stalled in [{lo}, {hi}]"),
                value: mid,
                bound: hi - lo,
            });
        }
    }
    let mut x = 0.5 * (lo + hi);
    let mut fx = f(x)?;
    for _ in 0..3 {
        let d = df(x)?;
        if !(d.is_finite() && d > 0.0) {
            break;
        }
        let cand = x - fx / d;
        if !(cand >= lo && cand <= hi) {
            break;
        }
        let fc = f(cand)?;
        iterations += 1;
        if fc.abs() >= fx.abs() {
            break;
        }
        x = cand;
        fx = fc;
        if fx == 0.0 {
            break;
        }
    }
    Ok(Root { x, residual: fx, iterations })
}

//! Adaptive Gauss–Legendre quadrature by interval halving.
//!
//! Each panel is integrated with a fixed 16-point rule and again as two
//! halves; the difference of the two is the panel's error estimate. Panels
//! whose estimate exceeds their share of the tolerance are split.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 16;
const MAX_DEPTH: u32 = 40;
const MAX_PANELS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// Nodes and weights on `[-1, 1]` from Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = [0.0; ORDER];
    let mut weights = [0.0; ORDER];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = 0.0;
    for (x, w) in r.nodes.iter().zip(r.weights.iter()) {
        s += w * f(mid + half * x);
    }
    s * half
}

/// Integrates `f` over `[a, b]` to an absolute tolerance `abs_tol`, also
/// accepting a relative tolerance `rel_tol` on the running total.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let width = b - a;
    let mut evaluations = ORDER;
    let mut stack = vec![(a, b, panel(&f, a, b), 0u32)];
    let mut value = 0.0;
    let mut error = 0.0;
    let mut unresolved = false;
    let mut panels = 0usize;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(&f, lo, mid);
        let right = panel(&f, mid, hi);
        evaluations += 2 * ORDER;
        panels += 1;
        let halves = left + right;
        let est = (halves - whole).abs();
        let share = (hi - lo) / width;
        let tol = abs_tol.max(rel_tol * (value + halves).abs()) * share;
        if est <= tol || depth >= MAX_DEPTH || panels >= MAX_PANELS {
            if est > tol {
                unresolved = true;
            }
            value += halves;
            error += est;
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    if !value.is_finite() {
        return Err(Error::Accuracy {
            message: "integrand produced a non-finite value".into(),
            value,
            bound: f64::INFINITY,
        });
    }
    if unresolved && error > abs_tol.max(rel_tol * value.abs()) {
        return Err(Error::Accuracy {
            message: format!("adaptive quadrature on [{a}, {b}] did not converge"),
            value,
            bound: error,
        });
    }
    Ok(Integral { value, error, evaluations })
}

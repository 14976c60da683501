//! Series representations of `Li_nu(x)` and `-Li_nu(-x)`.

use super::zeta::{riemann_zeta, CompensatedSum};
use super::PolylogResult;

const U: f64 = f64::EPSILON;

/// Partial sum `sum_{k=1}^{n} x^k / k^nu` for `0 <= x < 1`, with the
/// geometric tail bound `x^{n+1} / ((n+1)^nu (1 - x))`.
pub fn bose_partial(nu: f64, x: f64, n: usize) -> PolylogResult {
    let mut acc = CompensatedSum::default();
    let mut p = 1.0;
    for k in 1..=n {
        p *= x;
        acc.add(p / (k as f64).powf(nu));
    }
    let nf = (n + 1) as f64;
    let tail = if x < 1.0 {
        p * x / (nf.powf(nu) * (1.0 - x))
    } else {
        f64::INFINITY
    };
    let value = acc.value();
    PolylogResult {
        value,
        abs_error_bound: tail + (n as f64 + 4.0) * U * acc.magnitude(),
        terms_or_nodes_used: n,
    }
}

/// Number of terms for which the tail of the direct series drops below a
/// relative `1e-17`.
pub(crate) fn direct_terms(x: f64) -> usize {
    let n = ((1e-17 * (1.0 - x)).ln() / x.ln()).ceil();
    (n as usize).clamp(1, 100_000)
}

/// Accelerated alternating sum for `f_nu(x) = sum_{k>=1} (-1)^{k+1} x^k / k^nu`
/// with `0 <= x <= 1`.
///
/// The terms are moments of a positive measure on `[0, x]`, so the
/// Chebyshev-weighted acceleration of Cohen, Rodriguez Villegas and Zagier
/// applies and its error is at most `2 |S| / (3 + sqrt 8)^n`.
pub fn fermi_accelerated(nu: f64, x: f64, n: usize) -> PolylogResult {
    let n = n.clamp(1, 300);
    let nf = n as f64;
    let rate = 3.0 + 8f64.sqrt();
    let mut d = rate.powf(nf);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut acc = CompensatedSum::default();
    let mut p = 1.0;
    for k in 0..n {
        p *= x;
        let a = p / ((k + 1) as f64).powf(nu);
        c = b - c;
        acc.add(c * a);
        let kf = k as f64;
        b = (kf + nf) * (kf - nf) * b / ((kf + 0.5) * (kf + 1.0));
    }
    let value = acc.value() / d;
    let truncation = 2.0 * value.abs() / rate.powf(nf) * (1.0 + 1e-12);
    PolylogResult {
        value,
        abs_error_bound: truncation + 8.0 * U * (acc.magnitude() / d + value.abs()),
        terms_or_nodes_used: n,
    }
}

/// `Li_nu(e^mu)` for `mu = ln x < 0` small, by the expansion in `mu`:
///
/// ```text
/// Li_nu(e^mu) = Gamma(1 - nu) (-mu)^{nu - 1} + sum_k zeta(nu - k) mu^k / k!
/// ```
///
/// with the harmonic-number form of the singular term for integer `nu`.
/// Converges for `|mu| < 2 pi`; used for `1/2 < x < 1`.
pub fn bose_log_expansion(nu: f64, x: f64) -> PolylogResult {
    let mu = x.ln();
    let integer_nu = nu.fract() == 0.0;
    let singular_k = if integer_nu { Some(nu as usize - 1) } else { None };
    let mut acc = CompensatedSum::default();
    if !integer_nu {
        acc.add(libm::tgamma(1.0 - nu) * (-mu).powf(nu - 1.0));
    }
    let mut pow_over_fact = 1.0; // mu^k / k!
    let mut last = f64::INFINITY;
    let mut k = 0usize;
    loop {
        let term = if Some(k) == singular_k {
            let harmonic: f64 = (1..=k).map(|i| 1.0 / i as f64).sum();
            pow_over_fact * (harmonic - (-mu).ln())
        } else {
            riemann_zeta(nu - k as f64) * pow_over_fact
        };
        acc.add(term);
        if term != 0.0 {
            last = term.abs();
        }
        k += 1;
        pow_over_fact *= mu / k as f64;
        if (k as f64 > nu + 2.0 && last <= 1e-18 * acc.value().abs()) || k > 80 {
            break;
        }
    }
    PolylogResult {
        value: acc.value(),
        abs_error_bound: 2.0 * last + 8.0 * U * acc.magnitude(),
        terms_or_nodes_used: k,
    }
}

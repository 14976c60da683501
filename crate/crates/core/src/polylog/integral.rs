//! Momentum-integral representations, after the substitution
//! `t = p sqrt(beta / 2m)`:
//!
//! ```text
//! f_{5/2}(x) =  (4/sqrt pi) int_0^inf t^2 ln(1 + x e^{-t^2}) dt
//! g_{5/2}(x) = -(4/sqrt pi) int_0^inf t^2 ln(1 - x e^{-t^2}) dt
//! f_{3/2}(x) =  (4/sqrt pi) int_0^inf t^2 x e^{-t^2} / (1 + x e^{-t^2}) dt
//! g_{3/2}(x) =  (4/sqrt pi) int_0^inf t^2 x e^{-t^2} / (1 - x e^{-t^2}) dt
//! ```

use super::PolylogResult;
use crate::error::{Error, Result};
use crate::quadrature::integrate;

const ABS_TOL: f64 = 1e-14;
const REL_TOL: f64 = 1e-13;
/// Largest admissible error estimate; anything worse is an accuracy error.
const TARGET: f64 = 1e-10;
const CUTOFF: f64 = 1e-16;

fn prefactor() -> f64 {
    4.0 / std::f64::consts::PI.sqrt()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Order {
    ThreeHalves,
    FiveHalves,
}

fn order(nu: f64) -> Result<Order> {
    if nu == 1.5 {
        Ok(Order::ThreeHalves)
    } else if nu == 2.5 {
        Ok(Order::FiveHalves)
    } else {
        Err(Error::domain(format!("momentum integrals are available for nu = 3/2 and 5/2, got {nu}")))
    }
}

/// Integrates over `[0, inf)`, cutting at a `t_max` where `envelope` (an
/// upper bound on the integrand for large `t`, decaying like `e^{-t^2}`) is
/// below `1e-16`; the tail beyond `t_max` is folded into the error bound.
/// `edge` is an interior breakpoint (the Fermi edge `sqrt(ln x)` for `x > 1`).
fn semi_infinite<F, E>(f: F, envelope: E, edge: f64, x: f64) -> Result<PolylogResult>
where
    F: Fn(f64) -> f64,
    E: Fn(f64) -> f64,
{
    let mut t_max = 4.0f64.max(2.0 * edge);
    while envelope(t_max) >= CUTOFF {
        t_max *= 2.0;
    }
    // for a Gaussian-type envelope, int_T^inf env(t) dt <= env(T) / T
    let tail = envelope(t_max) / t_max;

    let mut breaks = vec![0.0];
    if edge > 0.0 && edge < t_max {
        breaks.push(edge);
    }
    breaks.push(t_max);
    let mut value = 0.0;
    let mut error = tail;
    let mut nodes = 0;
    for w in breaks.windows(2) {
        let r = integrate(&f, w[0], w[1], ABS_TOL, REL_TOL)?;
        value += r.value;
        error += r.error;
        nodes += r.evaluations;
    }
    let c = prefactor();
    // quadrature estimates ignore rounding in the integrand and the panel sums
    let (value, error) = (c * value, c * error + 32.0 * f64::EPSILON * (c * value).abs());
    if error > TARGET.max(1e-12 * value.abs()) {
        return Err(Error::Accuracy {
            message: format!("momentum integral at x = {x} missed its tolerance"),
            value,
            bound: error,
        });
    }
    Ok(PolylogResult { value, abs_error_bound: error, terms_or_nodes_used: nodes })
}

fn fermi_envelope(x: f64, power: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| t.powf(power) * x * (-t * t).exp()
}

fn bose_envelope(x: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        let y = x * (-t * t).exp();
        t * t * y / (1.0 - y)
    }
}

/// Fermi function by quadrature, `nu` in `{3/2, 5/2}` and `x >= 0`.
pub fn quadrature_f(nu: f64, x: f64) -> Result<PolylogResult> {
    let ord = order(nu)?;
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::domain(format!("fermi quadrature needs finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(PolylogResult::exact(0.0));
    }
    let ln_x = x.ln();
    let edge = if ln_x > 0.0 { ln_x.sqrt() } else { 0.0 };
    match ord {
        Order::FiveHalves => semi_infinite(|t| t * t * (x * (-t * t).exp()).ln_1p(), fermi_envelope(x, 2.0), edge, x),
        Order::ThreeHalves => semi_infinite(|t| t * t / (1.0 + (t * t - ln_x).exp()), fermi_envelope(x, 2.0), edge, x),
    }
}

/// Bose function by quadrature, `nu` in `{3/2, 5/2}` and `0 <= x < 1`.
pub fn quadrature_g(nu: f64, x: f64) -> Result<PolylogResult> {
    let ord = order(nu)?;
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!("bose quadrature needs 0 <= x < 1, got {x}")));
    }
    if x == 0.0 {
        return Ok(PolylogResult::exact(0.0));
    }
    let ln_x = x.ln();
    // 1 - x e^{-t^2}, accurate when the product is close to one
    let one_minus = move |t: f64| {
        let y = x * (-t * t).exp();
        if y < 0.5 {
            1.0 - y
        } else {
            -(ln_x - t * t).exp_m1()
        }
    };
    match ord {
        Order::FiveHalves => semi_infinite(
            |t| {
                let y = x * (-t * t).exp();
                let ln_one_minus = if y < 0.5 { (-y).ln_1p() } else { one_minus(t).ln() };
                -t * t * ln_one_minus
            },
            bose_envelope(x),
            0.0,
            x,
        ),
        Order::ThreeHalves => semi_infinite(|t| t * t * x * (-t * t).exp() / one_minus(t), bose_envelope(x), 0.0, x),
    }
}

/// General Fermi–Dirac integral
/// `f_nu(x) = (2 / Gamma(nu)) int_0^inf t^{2nu - 1} / (e^{t^2} / x + 1) dt`, `nu > 0`.
pub(crate) fn fermi_dirac_integral(nu: f64, x: f64) -> Result<PolylogResult> {
    let ln_x = x.ln();
    let edge = if ln_x > 0.0 { ln_x.sqrt() } else { 0.0 };
    let p = 2.0 * nu - 1.0;
    let scale = 2.0 / libm::tgamma(nu) / prefactor();
    let r = semi_infinite(|t| t.powf(p) / (1.0 + (t * t - ln_x).exp()), fermi_envelope(x, p), edge, x)?;
    Ok(PolylogResult {
        value: r.value * scale,
        abs_error_bound: r.abs_error_bound * scale,
        terms_or_nodes_used: r.terms_or_nodes_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        assert_eq!(quadrature_f(2.5, 0.0).unwrap().value, 0.0);
        assert_eq!(quadrature_g(1.5, 0.0).unwrap().value, 0.0);
    }

    #[test]
    fn domain_checks() {
        assert!(quadrature_f(2.0, 0.5).is_err());
        assert!(quadrature_g(1.5, 1.0).is_err());
        assert!(quadrature_f(1.5, -0.1).is_err());
    }

    #[test]
    fn general_integral_matches_momentum_form() {
        for &x in &[0.3, 2.0, 50.0] {
            let a = fermi_dirac_integral(1.5, x).unwrap();
            let b = quadrature_f(1.5, x).unwrap();
            assert!((a.value - b.value).abs() < 1e-12, "x = {x}");
        }
    }
}

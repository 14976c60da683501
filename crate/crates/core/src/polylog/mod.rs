//! Bose functions `g_nu(x) = sum_k x^k / k^nu` and Fermi functions
//! `f_nu(x) = sum_k (-1)^{k+1} x^k / k^nu`, each with a certified absolute
//! error bound.
//!
//! Routes:
//!
//! | function | argument        | method                                   |
//! |----------|-----------------|------------------------------------------|
//! | `g_nu`   | `x <= 1/2`      | direct series with geometric tail bound  |
//! | `g_nu`   | `1/2 < x < 1`   | expansion in `ln x`                      |
//! | `g_nu`   | `x = 1`         | Euler–Maclaurin `zeta(nu)`, 10^4 terms   |
//! | `f_nu`   | `x <= 0.9`      | accelerated alternating series           |
//! | `f_nu`   | `x > 0.9`       | adaptive quadrature                      |
//!
//! The momentum integrals ([`quadrature_f`], [`quadrature_g`]) are an
//! independent second route for `nu` in `{3/2, 5/2}`.

mod integral;
pub mod series;
pub mod zeta;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use integral::{quadrature_f, quadrature_g};
pub use zeta::riemann_zeta;

/// Fermi functions switch from the series to quadrature above this argument.
pub const FERMI_SERIES_SWITCH: f64 = 0.9;
/// Explicit terms in the Euler–Maclaurin sum for `g_nu(1) = zeta(nu)`.
pub const ZETA_EXPLICIT_TERMS: usize = 10_000;

const ACCELERATED_TERMS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolylogResult {
    pub value: f64,
    pub abs_error_bound: f64,
    pub terms_or_nodes_used: usize,
}

impl PolylogResult {
    pub(crate) fn exact(value: f64) -> Self {
        PolylogResult { value, abs_error_bound: 0.0, terms_or_nodes_used: 0 }
    }
}

/// `g_nu(x)` for `nu > 1`, `0 <= x <= 1`.
pub fn bose_g(nu: f64, x: f64) -> Result<PolylogResult> {
    if !(nu.is_finite() && nu > 1.0) {
        return Err(Error::domain(format!("bose function needs nu > 1, got {nu}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain_with_boundary(
            format!("bose function needs 0 <= x <= 1, got {x}"),
            1.0,
        ));
    }
    Ok(bose_unchecked(nu, x))
}

/// `g_nu(x)` without argument checks; `nu > 0` and `0 <= x < 1`, or
/// `nu > 1` at `x = 1`.
pub(crate) fn bose_unchecked(nu: f64, x: f64) -> PolylogResult {
    if x == 0.0 {
        PolylogResult::exact(0.0)
    } else if x == 1.0 {
        let (value, bound) = zeta::zeta_euler_maclaurin(nu, ZETA_EXPLICIT_TERMS, 6);
        PolylogResult { value, abs_error_bound: bound, terms_or_nodes_used: ZETA_EXPLICIT_TERMS }
    } else if x <= 0.5 {
        series::bose_partial(nu, x, series::direct_terms(x))
    } else {
        series::bose_log_expansion(nu, x)
    }
}

/// `f_nu(x) = -Li_nu(-x)` for `nu > 0`, `x >= 0`.
pub fn fermi_f(nu: f64, x: f64) -> Result<PolylogResult> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::domain(format!("fermi function needs nu > 0, got {nu}")));
    }
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::domain(format!("fermi function needs finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        Ok(PolylogResult::exact(0.0))
    } else if x <= FERMI_SERIES_SWITCH {
        Ok(series::fermi_accelerated(nu, x, ACCELERATED_TERMS))
    } else if nu == 1.5 || nu == 2.5 {
        quadrature_f(nu, x)
    } else {
        integral::fermi_dirac_integral(nu, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_arguments() {
        assert_eq!(bose_g(1.5, 0.0).unwrap().value, 0.0);
        assert_eq!(fermi_f(2.5, 0.0).unwrap().value, 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(bose_g(1.5, 1.01).is_err());
        assert!(bose_g(1.0, 0.5).is_err());
        assert!(bose_g(0.9, 1.0).is_err());
        assert!(fermi_f(1.5, -1.0).is_err());
        assert!(fermi_f(0.0, 1.0).is_err());
    }

    #[test]
    fn leading_terms_at_small_argument() {
        let x = 1e-3;
        let g = bose_g(2.5, x).unwrap().value;
        let f = fermi_f(2.5, x).unwrap().value;
        let second = x * x / 2f64.powf(2.5);
        assert!((g - x - second).abs() < 2.0 * x.powi(3) / 3f64.powf(2.5));
        assert!((f - x + second).abs() < 2.0 * x.powi(3) / 3f64.powf(2.5));
    }

    #[test]
    fn bose_at_one_is_zeta() {
        let r = bose_g(1.5, 1.0).unwrap();
        assert!((r.value - 2.612_375_348_685_488).abs() < 1e-14);
        assert!(r.abs_error_bound < 1e-10);
        let r = bose_g(2.5, 1.0).unwrap();
        assert!((r.value - 1.341_487_257_250_917).abs() < 1e-14);
    }

    #[test]
    fn routes_join_continuously() {
        // series / log-expansion boundary and fermi series / quadrature boundary
        let ga = bose_g(1.5, 0.5).unwrap().value;
        let gb = bose_g(1.5, 0.500_000_001).unwrap().value;
        assert!((ga - gb).abs() < 1e-8);
        let fa = fermi_f(1.5, 0.9).unwrap().value;
        let fb = fermi_f(1.5, 0.900_000_001).unwrap().value;
        assert!((fa - fb).abs() < 1e-8 && fb > fa);
    }

    #[test]
    fn fermi_at_large_argument() {
        // reference values from an independent high-precision evaluation
        let r = fermi_f(1.5, 1e3).unwrap();
        assert!((r.value - 14.018_663_493_590_66).abs() < 1e-10, "{}", r.value);
        let r = fermi_f(2.5, 10.0).unwrap();
        assert!((r.value - 5.088_775_864_187_183).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn half_order_fermi_function() {
        // f_{1/2}(x) = x d f_{3/2} / dx, checked by central differences
        for &x in &[0.5, 3.0] {
            let h = 1e-4 * x;
            let d = (fermi_f(1.5, x + h).unwrap().value - fermi_f(1.5, x - h).unwrap().value) / (2.0 * h);
            let f12 = fermi_f(0.5, x).unwrap().value;
            assert!((x * d - f12).abs() < 1e-7 * f12, "x = {x}");
        }
    }
}

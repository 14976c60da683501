//! Free gas of q-particles in three dimensions, in the continuum limit.
//!
//! Everything is expressed through the dimensionless combinations `z|q|` and
//! `rho lambda^3`; SI units enter only through [`thermal_wavelength`].
//!
//! | regime          | `beta P`                                   | `rho`                                         |
//! |-----------------|--------------------------------------------|-----------------------------------------------|
//! | `q < 0`         | `f_{5/2}(z|q|) / (|q| lambda^3)`           | `f_{3/2}(z|q|) / (|q| lambda^3)`              |
//! | `q = 0`         | `z / lambda^3`                             | `z / lambda^3`                                |
//! | `q > 0`         | `[g_{5/2}(zq)/lambda^3 - (a/V) ln(1-zq)]/q`| `[g_{3/2}(zq)/lambda^3 + (a/V) zq/(1-zq)]/q`  |
//!
//! `a >= 0` weighs the zero-momentum level split off before the continuum
//! limit; it defaults to zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polylog::{self, bose_g, fermi_f};
use crate::rootfind::bisect_newton;

/// Planck constant in J s.
pub const PLANCK: f64 = 6.626_070_04e-34;
/// Boltzmann constant in J / K.
pub const BOLTZMANN: f64 = 1.380_648_8e-23;

/// Relative residual accepted from [`solve_fugacity`].
pub const SOLVE_RESIDUAL: f64 = 1e-10;

/// `h / sqrt(2 pi m k_B T)` in metres, for `mass` in kg and `temperature` in K.
pub fn thermal_wavelength(mass: f64, temperature: f64) -> Result<f64> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::domain(format!("mass must be positive, got {mass}")));
    }
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::domain(format!("temperature must be positive, got {temperature}")));
    }
    Ok(PLANCK / (2.0 * std::f64::consts::PI * mass * BOLTZMANN * temperature).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasPoint {
    pub q: f64,
    pub fugacity: f64,
    /// Thermal wavelength, in whatever length unit the caller uses.
    pub lambda: f64,
    pub condensate_a: f64,
    /// Volume in length units cubed; only needed when `condensate_a > 0`.
    pub volume: Option<f64>,
}

impl GasPoint {
    pub fn new(q: f64, fugacity: f64, lambda: f64) -> Result<Self> {
        let gp = GasPoint { q, fugacity, lambda, condensate_a: 0.0, volume: None };
        gp.check()?;
        Ok(gp)
    }

    pub fn with_condensate(mut self, a: f64, volume: f64) -> Result<Self> {
        self.condensate_a = a;
        self.volume = Some(volume);
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.q) {
            return Err(Error::domain(format!("q must lie in [-1, 1], got {}", self.q)));
        }
        if !(self.fugacity.is_finite() && self.fugacity > 0.0) {
            return Err(Error::domain(format!("fugacity must be positive, got {}", self.fugacity)));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::domain(format!("thermal wavelength must be positive, got {}", self.lambda)));
        }
        if !(self.condensate_a.is_finite() && self.condensate_a >= 0.0) {
            return Err(Error::domain(format!("condensate constant must be >= 0, got {}", self.condensate_a)));
        }
        if self.condensate_a > 0.0 && !matches!(self.volume, Some(v) if v.is_finite() && v > 0.0) {
            return Err(Error::domain("a positive volume is required when the condensate constant is positive"));
        }
        if self.q > 0.0 && self.reduced_fugacity() > 1.0 {
            return Err(Error::domain_with_boundary(
                format!("z q = {} exceeds 1", self.fugacity * self.q),
                1.0 / self.q,
            ));
        }
        Ok(())
    }

    /// `z |q|`, snapped to exactly 1 when within a few ulps of it so that
    /// `z = 1/q` lands on the condensation point.
    pub fn reduced_fugacity(&self) -> f64 {
        reduced(self.fugacity, self.q)
    }

    fn condensate_weight(&self) -> f64 {
        match self.volume {
            Some(v) if self.condensate_a > 0.0 => self.condensate_a / v,
            _ => 0.0,
        }
    }

    fn check_condensate_term(&self, x: f64) -> Result<()> {
        if self.condensate_a > 0.0 && x >= 1.0 {
            return Err(Error::domain_with_boundary(
                "condensate term diverges at z q = 1",
                1.0 / self.q,
            ));
        }
        Ok(())
    }
}

fn reduced(z: f64, q: f64) -> f64 {
    let x = z * q.abs();
    if (x - 1.0).abs() <= 4.0 * f64::EPSILON {
        1.0
    } else {
        x
    }
}

/// `P / (k_B T)`, in inverse length cubed.
pub fn beta_pressure(gp: &GasPoint) -> Result<f64> {
    gp.check()?;
    let l3 = gp.lambda.powi(3);
    let x = gp.reduced_fugacity();
    if gp.q < 0.0 {
        Ok(fermi_f(2.5, x)?.value / (gp.q.abs() * l3))
    } else if gp.q == 0.0 {
        Ok(gp.fugacity / l3)
    } else {
        gp.check_condensate_term(x)?;
        let condensate = if gp.condensate_a > 0.0 { -gp.condensate_weight() * (-x).ln_1p() } else { 0.0 };
        Ok((bose_g(2.5, x)?.value / l3 + condensate) / gp.q)
    }
}

/// Number density, in inverse length cubed.
pub fn density(gp: &GasPoint) -> Result<f64> {
    gp.check()?;
    let l3 = gp.lambda.powi(3);
    let x = gp.reduced_fugacity();
    if gp.q < 0.0 {
        Ok(fermi_f(1.5, x)?.value / (gp.q.abs() * l3))
    } else if gp.q == 0.0 {
        Ok(gp.fugacity / l3)
    } else {
        gp.check_condensate_term(x)?;
        let condensate = if gp.condensate_a > 0.0 { gp.condensate_weight() * x / (1.0 - x) } else { 0.0 };
        Ok((bose_g(1.5, x)?.value / l3 + condensate) / gp.q)
    }
}

/// `PV / (N k_B T)` with no condensate term.
pub fn eos_ratio(q: f64, fugacity: f64) -> Result<f64> {
    let gp = GasPoint::new(q, fugacity, 1.0)?;
    let x = gp.reduced_fugacity();
    if q == 0.0 {
        Ok(1.0)
    } else if q < 0.0 {
        Ok(fermi_f(2.5, x)?.value / fermi_f(1.5, x)?.value)
    } else {
        Ok(bose_g(2.5, x)?.value / bose_g(1.5, x)?.value)
    }
}

/// Critical density `g_{3/2}(1) / (q lambda^3)` of a Bose-like gas.
pub fn critical_density(q: f64, lambda: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain(format!(
            "condensation needs q in (0, 1]; q = {q} gives no critical density"
        )));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::domain(format!("thermal wavelength must be positive, got {lambda}")));
    }
    Ok(critical_density_lambda3() / (q * lambda.powi(3)))
}

fn critical_density_lambda3() -> f64 {
    polylog::bose_unchecked(1.5, 1.0).value
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EosSolution {
    pub fugacity: f64,
    /// Fraction of particles in the condensate, `1 - rho_c / rho` above the
    /// critical density.
    pub condensate_fraction: f64,
    pub condensed: bool,
}

impl EosSolution {
    fn normal(fugacity: f64) -> Self {
        EosSolution { fugacity, condensate_fraction: 0.0, condensed: false }
    }

    /// Gas point of the non-condensed component.
    pub fn gas_point(&self, q: f64, lambda: f64) -> Result<GasPoint> {
        GasPoint::new(q, self.fugacity, lambda)
    }
}

/// Inverts the density relation: finds the fugacity for a given `rho lambda^3`.
///
/// For `q > 0` and `q rho lambda^3 >= g_{3/2}(1)` the gas is condensed:
/// `z = 1/q` and the excess density sits in the ground state.
pub fn solve_fugacity(rho_lambda3: f64, q: f64) -> Result<EosSolution> {
    if !(rho_lambda3.is_finite() && rho_lambda3 > 0.0) {
        return Err(Error::domain(format!("rho lambda^3 must be positive, got {rho_lambda3}")));
    }
    if !(-1.0..=1.0).contains(&q) {
        return Err(Error::domain(format!("q must lie in [-1, 1], got {q}")));
    }
    if q == 0.0 {
        return Ok(EosSolution::normal(rho_lambda3));
    }
    let target = q.abs() * rho_lambda3;
    let sol = if q < 0.0 { solve_fermi_like(target, q)? } else { solve_bose_like(target, q)? };

    let normal = density(&sol.gas_point(q, 1.0)?)?;
    let total = normal / (1.0 - sol.condensate_fraction);
    let residual = (total - rho_lambda3).abs() / rho_lambda3;
    if !sol.condensed && residual.is_nan() || residual > SOLVE_RESIDUAL + rounding_floor(q, sol.fugacity)? {
        return Err(Error::Accuracy {
            message: format!("fugacity inversion residual {residual:e} at rho lambda^3 = {rho_lambda3}, q = {q}"),
            value: sol.fugacity,
            bound: residual,
        });
    }
    Ok(sol)
}

/// Relative density change caused by rounding `z|q|` to the nearest double:
/// `4 eps y d(ln rho)/dy`. It diverges at the condensation point, where the
/// density cannot be resolved to better than about `sqrt(eps)`.
fn rounding_floor(q: f64, fugacity: f64) -> Result<f64> {
    let y = reduced(fugacity, q);
    let log_slope = if q < 0.0 {
        fermi_f(0.5, y)?.value / fermi_f(1.5, y)?.value
    } else if y >= 1.0 {
        f64::INFINITY
    } else {
        polylog::bose_unchecked(0.5, y).value / polylog::bose_unchecked(1.5, y).value
    };
    Ok(4.0 * f64::EPSILON * log_slope)
}

/// `f_{3/2}(e^u) = target`, solved in `u = ln(z|q|)`. Since
/// `f_{3/2}(y) <= y`, the bracket starts at `u = ln(target)`.
fn solve_fermi_like(target: f64, q: f64) -> Result<EosSolution> {
    let f = |u: f64| Ok(fermi_f(1.5, u.exp())?.value - target);
    let df = |u: f64| Ok(fermi_f(0.5, u.exp())?.value);
    let lo = target.ln();
    let mut step = 1.0;
    let mut hi = lo.max(0.0) + step;
    while f(hi)? < 0.0 {
        step *= 2.0;
        hi = lo.max(0.0) + step;
        if hi > 700.0 {
            return Err(Error::Accuracy {
                message: format!("fugacity for f_3/2 = {target} overflows"),
                value: hi.exp(),
                bound: f64::INFINITY,
            });
        }
    }
    let root = bisect_newton(f, df, lo, hi, 1e-14)?;
    Ok(EosSolution::normal(root.x.exp() / q.abs()))
}

/// `g_{3/2}(e^{-s^2}) = target` below the critical value, solved in
/// `s = sqrt(-ln(zq))`, where the function has a bounded slope at the
/// condensation point.
fn solve_bose_like(target: f64, q: f64) -> Result<EosSolution> {
    let critical = critical_density_lambda3();
    if target >= critical {
        return Ok(EosSolution {
            fugacity: 1.0 / q,
            condensate_fraction: 1.0 - critical / target,
            condensed: true,
        });
    }
    let f = |s: f64| Ok(target - polylog::bose_unchecked(1.5, (-s * s).exp()).value);
    let df = |s: f64| Ok(2.0 * s * polylog::bose_unchecked(0.5, (-s * s).exp()).value);
    // g_{3/2}(y) <= y / (1 - y), so y = t / (1 + t) lies below the root in y
    let hi = (1.0 / target).ln_1p().sqrt();
    let root = bisect_newton(f, df, 0.0, hi, 1e-14)?;
    let x = (-root.x * root.x).exp();
    Ok(EosSolution::normal(x / q))
}

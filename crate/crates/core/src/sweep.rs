//! Parameter sweeps over a one-dimensional grid.
//!
//! Grid points are evaluated independently (in parallel when enabled) and
//! collected in grid order. Points that are not admissible are recorded in
//! the skipped list instead of aborting the sweep.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::freegas::{self, GasPoint};
use crate::par::{map_ordered, Execution};
use crate::qgrand::GrandState;
use crate::report::Skipped;
use crate::spectrum::{Spectrum, ThermoState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Fugacity,
    Beta,
    Q,
    /// `rho`, continuum sweeps only.
    Density,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Fugacity => "fugacity",
            SweepVariable::Beta => "beta",
            SweepVariable::Q => "q",
            SweepVariable::Density => "density",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fugacity" | "z" => Ok(SweepVariable::Fugacity),
            "beta" => Ok(SweepVariable::Beta),
            "q" => Ok(SweepVariable::Q),
            "density" | "rho" => Ok(SweepVariable::Density),
            _ => Err(Error::parse("sweep variable", format!("unknown variable '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            _ => Err(Error::parse("sweep scale", format!("unknown scale '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, start: f64, stop: f64, steps: usize, scale: Scale) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(Error::domain(format!("sweep needs finite start < stop, got {start} and {stop}")));
        }
        if steps < 2 {
            return Err(Error::domain(format!("sweep needs at least 2 steps, got {steps}")));
        }
        if scale == Scale::Log && start <= 0.0 {
            return Err(Error::domain(format!("log-scaled sweep needs start > 0, got {start}")));
        }
        Ok(SweepSpec { variable, start, stop, steps, scale })
    }

    /// Grid points; both endpoints are reproduced exactly.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.steps - 1;
        let (a, b) = match self.scale {
            Scale::Linear => (self.start, self.stop),
            Scale::Log => (self.start.ln(), self.stop.ln()),
        };
        (0..self.steps)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == last {
                    return self.stop;
                }
                let t = i as f64 / last as f64;
                let v = a + (b - a) * t;
                match self.scale {
                    Scale::Linear => v,
                    Scale::Log => v.exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    LnZ,
    Omega,
    PV,
    N,
    Fugacity,
    BetaP,
    Rho,
    EosRatio,
    CondensateFraction,
}

impl Quantity {
    pub const DISCRETE: [Quantity; 4] = [Quantity::LnZ, Quantity::Omega, Quantity::PV, Quantity::N];
    pub const CONTINUUM: [Quantity; 5] =
        [Quantity::Fugacity, Quantity::BetaP, Quantity::Rho, Quantity::EosRatio, Quantity::CondensateFraction];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::LnZ => "lnZ",
            Quantity::Omega => "Omega",
            Quantity::PV => "PV",
            Quantity::N => "N",
            Quantity::Fugacity => "fugacity",
            Quantity::BetaP => "betaP",
            Quantity::Rho => "rho",
            Quantity::EosRatio => "eos_ratio",
            Quantity::CondensateFraction => "condensate_fraction",
        }
    }

    pub fn default_discrete() -> Vec<Quantity> {
        vec![Quantity::LnZ, Quantity::PV, Quantity::N]
    }

    pub fn default_continuum() -> Vec<Quantity> {
        vec![Quantity::BetaP, Quantity::Rho, Quantity::EosRatio, Quantity::CondensateFraction]
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Quantity::DISCRETE
            .iter()
            .chain(Quantity::CONTINUUM.iter())
            .copied()
            .find(|q| q.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::parse("column list", format!("unknown column '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub skipped: Vec<Skipped>,
}

fn assemble(spec: &SweepSpec, columns: &[Quantity], results: Vec<(f64, Result<Vec<f64>>)>) -> Result<SweepTable> {
    let mut names = vec![spec.variable.name().to_string()];
    names.extend(columns.iter().map(|c| c.name().to_string()));
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (x, r) in results {
        match r {
            Ok(values) => {
                let mut row = vec![x];
                row.extend(values);
                rows.push(row);
            }
            Err(e @ (Error::Domain { .. } | Error::Accuracy { .. })) => {
                skipped.push(Skipped { value: x, reason: e.to_string() })
            }
            Err(e) => return Err(e),
        }
    }
    if rows.is_empty() {
        return Err(Error::domain(format!(
            "every one of the {} sweep points was rejected; first reason: {}",
            skipped.len(),
            skipped.first().map(|s| s.reason.as_str()).unwrap_or("none")
        )));
    }
    Ok(SweepTable { columns: names, rows, skipped })
}

fn check_columns(columns: &[Quantity], allowed: &[Quantity], kind: &str) -> Result<()> {
    match columns.iter().find(|c| !allowed.contains(c)) {
        Some(c) => Err(Error::parse("column list", format!("column '{c}' is not available for {kind} sweeps"))),
        None if columns.is_empty() => Err(Error::parse("column list", "no columns requested")),
        None => Ok(()),
    }
}

/// Sweep of a discrete-spectrum state; `base` supplies the fixed fields.
pub fn sweep_discrete(
    spectrum: &Spectrum,
    base: ThermoState,
    spec: &SweepSpec,
    columns: &[Quantity],
    exec: Execution,
) -> Result<SweepTable> {
    check_columns(columns, &Quantity::DISCRETE, "discrete")?;
    if spec.variable == SweepVariable::Density {
        return Err(Error::parse("sweep variable", "density sweeps need the continuum model"));
    }
    let grid = spec.grid();
    let results = map_ordered(&grid, exec, |&x| {
        let mut st = base;
        match spec.variable {
            SweepVariable::Fugacity => st.fugacity = x,
            SweepVariable::Beta => st.beta = x,
            SweepVariable::Q => st.q = x,
            SweepVariable::Density => unreachable!(),
        }
        (x, discrete_row(spectrum, st, columns))
    });
    assemble(spec, columns, results)
}

fn discrete_row(spectrum: &Spectrum, st: ThermoState, columns: &[Quantity]) -> Result<Vec<f64>> {
    let st = ThermoState::new(st.beta, st.fugacity, st.q)?;
    let gs = GrandState::new(spectrum.clone(), st)?;
    let ln_z = gs.ln_grand_partition()?;
    columns
        .iter()
        .map(|c| match c {
            Quantity::LnZ => Ok(ln_z),
            Quantity::Omega => Ok(-ln_z / st.beta),
            Quantity::PV => Ok(ln_z / st.beta),
            Quantity::N => gs.total_number(),
            _ => unreachable!("checked by check_columns"),
        })
        .collect()
}

/// Fixed fields of a continuum sweep. Exactly one of `fugacity` and
/// `density` fixes the state unless the swept variable supplies it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumBase {
    pub q: f64,
    pub fugacity: Option<f64>,
    pub density: Option<f64>,
    pub lambda: f64,
    pub condensate_a: f64,
    pub volume: Option<f64>,
}

impl Default for ContinuumBase {
    fn default() -> Self {
        ContinuumBase { q: 1.0, fugacity: None, density: None, lambda: 1.0, condensate_a: 0.0, volume: None }
    }
}

/// One continuum state, fixed either by fugacity or by density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumRow {
    pub fugacity: f64,
    pub beta_pressure: f64,
    pub density: f64,
    pub eos_ratio: f64,
    pub condensate_fraction: f64,
}

impl ContinuumRow {
    fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::Fugacity => self.fugacity,
            Quantity::BetaP => self.beta_pressure,
            Quantity::Rho => self.density,
            Quantity::EosRatio => self.eos_ratio,
            Quantity::CondensateFraction => self.condensate_fraction,
            _ => unreachable!("checked by check_columns"),
        }
    }
}

/// Evaluates a continuum state from `base`, which must fix exactly one of
/// fugacity and density.
pub fn continuum_point(base: &ContinuumBase) -> Result<ContinuumRow> {
    match (base.fugacity, base.density) {
        (Some(z), None) => {
            let mut gp = GasPoint::new(base.q, z, base.lambda)?;
            if base.condensate_a > 0.0 {
                let v = base.volume.ok_or_else(|| Error::domain("a volume is required with a condensate constant"))?;
                gp = gp.with_condensate(base.condensate_a, v)?;
            }
            let beta_pressure = freegas::beta_pressure(&gp)?;
            let density = freegas::density(&gp)?;
            let (eos_ratio, condensate_fraction) = if base.condensate_a > 0.0 {
                let normal = freegas::density(&GasPoint::new(base.q, z, base.lambda)?)?;
                (beta_pressure / density, 1.0 - normal / density)
            } else {
                (freegas::eos_ratio(base.q, z)?, 0.0)
            };
            Ok(ContinuumRow { fugacity: z, beta_pressure, density, eos_ratio, condensate_fraction })
        }
        (None, Some(rho)) => {
            if base.condensate_a > 0.0 {
                return Err(Error::domain("density-fixed states do not take a condensate constant"));
            }
            if !(base.lambda.is_finite() && base.lambda > 0.0) {
                return Err(Error::domain(format!("thermal wavelength must be positive, got {}", base.lambda)));
            }
            let sol = freegas::solve_fugacity(rho * base.lambda.powi(3), base.q)?;
            let gp = GasPoint::new(base.q, sol.fugacity, base.lambda)?;
            let beta_pressure = freegas::beta_pressure(&gp)?;
            let eos_ratio = if sol.condensed { beta_pressure / rho } else { freegas::eos_ratio(base.q, sol.fugacity)? };
            Ok(ContinuumRow {
                fugacity: sol.fugacity,
                beta_pressure,
                density: rho,
                eos_ratio,
                condensate_fraction: sol.condensate_fraction,
            })
        }
        _ => Err(Error::domain("a continuum state needs exactly one of fugacity and density")),
    }
}

/// Sweep of the free gas in the continuum limit.
pub fn sweep_continuum(
    base: ContinuumBase,
    spec: &SweepSpec,
    columns: &[Quantity],
    exec: Execution,
) -> Result<SweepTable> {
    check_columns(columns, &Quantity::CONTINUUM, "continuum")?;
    if spec.variable == SweepVariable::Beta {
        return Err(Error::parse("sweep variable", "continuum sweeps run at fixed thermal wavelength; sweep density or fugacity"));
    }
    let grid = spec.grid();
    let results = map_ordered(&grid, exec, |&x| {
        let mut b = base;
        match spec.variable {
            SweepVariable::Fugacity => {
                b.fugacity = Some(x);
                b.density = None;
            }
            SweepVariable::Density => {
                b.density = Some(x);
                b.fugacity = None;
            }
            SweepVariable::Q => b.q = x,
            SweepVariable::Beta => unreachable!(),
        }
        let row = continuum_point(&b).map(|r| columns.iter().map(|&c| r.get(c)).collect());
        (x, row)
    });
    assemble(spec, columns, results)
}

//! One-particle spectra, the canonical partition function and the
//! admissibility rules for grand-canonical states.
//!
//! Energies are dimensionless with `k_B = 1`. A spectrum is a finite list of
//! levels; an infinite discrete spectrum has to be truncated by the caller,
//! and the truncation error is theirs to control.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub energy: f64,
    /// Multiplicity of the level. Integer in the physical picture, but any
    /// positive weight is accepted (coarse-grained densities of states).
    pub degeneracy: f64,
}

impl EnergyLevel {
    pub fn new(energy: f64, degeneracy: f64) -> Result<Self> {
        if !energy.is_finite() || energy < 0.0 {
            return Err(Error::domain(format!(
                "energy must be finite and nonnegative, got {energy}"
            )));
        }
        if !degeneracy.is_finite() || degeneracy <= 0.0 {
            return Err(Error::domain(format!(
                "degeneracy must be finite and positive, got {degeneracy}"
            )));
        }
        Ok(EnergyLevel { energy, degeneracy })
    }

    /// Boltzmann weight `g e^{-beta e}` of the level.
    #[inline]
    pub fn weight(&self, beta: f64) -> f64 {
        self.degeneracy * (-beta * self.energy).exp()
    }
}

/// Nonempty list of levels with strictly increasing energies.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    levels: Vec<EnergyLevel>,
}

impl Spectrum {
    /// Builds a spectrum from levels in any order. Levels sharing an energy
    /// (exact equality) are merged by summing their degeneracies.
    pub fn new(levels: impl IntoIterator<Item = EnergyLevel>) -> Result<Self> {
        let mut levels: Vec<EnergyLevel> = levels.into_iter().collect();
        if levels.is_empty() {
            return Err(Error::domain("spectrum must contain at least one level"));
        }
        for l in &levels {
            EnergyLevel::new(l.energy, l.degeneracy)?;
        }
        levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        let mut merged: Vec<EnergyLevel> = Vec::with_capacity(levels.len());
        for l in levels {
            match merged.last_mut() {
                Some(last) if last.energy == l.energy => last.degeneracy += l.degeneracy,
                _ => merged.push(l),
            }
        }
        Ok(Spectrum { levels: merged })
    }

    /// Convenience constructor from `(energy, degeneracy)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let levels = pairs
            .iter()
            .map(|&(e, g)| EnergyLevel::new(e, g))
            .collect::<Result<Vec<_>>>()?;
        Spectrum::new(levels)
    }

    /// The eight-level reference spectrum shipped with the library: energies
    /// `0, 0.5, ..., 3.5` with a doubly degenerate ground level.
    pub fn reference() -> Self {
        const DEGENERACIES: [f64; 8] = [2.0, 3.0, 3.0, 5.0, 4.0, 6.0, 5.0, 7.0];
        let levels = DEGENERACIES
            .iter()
            .enumerate()
            .map(|(i, &g)| EnergyLevel {
                energy: 0.5 * i as f64,
                degeneracy: g,
            })
            .collect();
        Spectrum { levels }
    }

    pub fn levels(&self) -> &[EnergyLevel] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_energy(&self) -> f64 {
        self.levels[0].energy
    }

    /// Total degeneracy, i.e. the dimension of the one-particle space.
    pub fn dimension(&self) -> f64 {
        self.levels.iter().map(|l| l.degeneracy).sum()
    }

    pub fn find_level(&self, energy: f64) -> Option<&EnergyLevel> {
        self.levels
            .binary_search_by(|l| l.energy.total_cmp(&energy))
            .ok()
            .map(|i| &self.levels[i])
    }

    /// Same spectrum with every energy shifted by `c` (must keep energies
    /// nonnegative).
    pub fn shifted(&self, c: f64) -> Result<Self> {
        Spectrum::new(
            self.levels
                .iter()
                .map(|l| EnergyLevel::new(l.energy + c, l.degeneracy))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Canonical partition function `sum_i g_i e^{-beta e_i}`.
    pub fn partition_function(&self, beta: f64) -> Result<f64> {
        check_beta(beta)?;
        let mut zeta = 0.0;
        for (i, l) in self.levels.iter().enumerate() {
            zeta += l.weight(beta);
            if !zeta.is_finite() {
                return Err(Error::domain(format!(
                    "partition function overflows at level {i} (energy {}, degeneracy {})",
                    l.energy, l.degeneracy
                )));
            }
        }
        Ok(zeta)
    }

    /// Checks the spectrum-dependent admissibility of a state. Bose-like
    /// states (`q > 0`) need `z q e^{-beta min_energy} < 1`.
    pub fn validate(&self, st: &ThermoState) -> Verdict {
        if st.q > 0.0 {
            let x = st.fugacity * st.q * (-st.beta * self.min_energy()).exp();
            if x >= 1.0 {
                return Verdict::Rejected(Rejection {
                    constraint: Constraint::FugacityBound,
                    boundary: Some(st.fugacity_bound(self.min_energy())),
                });
            }
        }
        Verdict::Admissible
    }

    /// CSV form with the `energy,degeneracy` header, shortest round-trip
    /// decimal for every number.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("energy,degeneracy\n");
        for l in &self.levels {
            out.push_str(&format!("{},{}\n", l.energy, l.degeneracy));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.levels).expect("levels serialize")
    }

    /// Parses either a CSV table with the exact header `energy,degeneracy` or
    /// a JSON array of `{energy, degeneracy}` objects. The format is sniffed
    /// from the first non-blank byte.
    pub fn parse(source: &[u8]) -> Result<Self> {
        let first = source.iter().find(|b| !b.is_ascii_whitespace());
        match first {
            Some(b'[') => parse_json(source),
            Some(_) => parse_csv(source),
            None => Err(Error::parse("input", "empty spectrum source")),
        }
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", l.energy, l.degeneracy)?;
        }
        write!(f, "]")
    }
}

fn parse_csv(source: &[u8]) -> Result<Spectrum> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse("line 1", e.to_string()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "energy" || &headers[1] != "degeneracy" {
        return Err(Error::parse(
            "line 1",
            format!("expected header `energy,degeneracy`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut levels = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::parse(format!("line {line}"), e.to_string())
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let loc = format!("line {line}");
        let field = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|e| Error::parse(loc.clone(), format!("field {}: {e}", i + 1)))
        };
        let (e, g) = (field(0)?, field(1)?);
        levels.push(EnergyLevel::new(e, g).map_err(|err| annotate(err, &loc))?);
    }
    Spectrum::new(levels)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLevel {
    energy: f64,
    degeneracy: f64,
}

fn parse_json(source: &[u8]) -> Result<Spectrum> {
    let raw: Vec<RawLevel> = serde_json::from_slice(source).map_err(|e| {
        Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    let levels = raw
        .iter()
        .enumerate()
        .map(|(i, r)| {
            EnergyLevel::new(r.energy, r.degeneracy).map_err(|err| annotate(err, &format!("element {i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Spectrum::new(levels)
}

fn annotate(err: Error, location: &str) -> Error {
    match err {
        Error::Domain { message, boundary } => Error::Domain {
            message: format!("{location}: {message}"),
            boundary,
        },
        other => other,
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("beta must be finite and positive, got {beta}")))
    }
}

/// Inverse temperature, fugacity and deformation parameter of a
/// grand-canonical state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoState {
    pub beta: f64,
    pub fugacity: f64,
    pub q: f64,
}

impl ThermoState {
    pub fn new(beta: f64, fugacity: f64, q: f64) -> Result<Self> {
        let st = ThermoState { beta, fugacity, q };
        match st.check_ranges() {
            None => Ok(st),
            Some(c) => Err(Error::domain(c.describe(&st))),
        }
    }

    fn check_ranges(&self) -> Option<Constraint> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            Some(Constraint::BetaPositive)
        } else if !(self.fugacity.is_finite() && self.fugacity > 0.0) {
            Some(Constraint::FugacityPositive)
        } else if !(-1.0..=1.0).contains(&self.q) {
            Some(Constraint::QRange)
        } else {
            None
        }
    }

    /// Chemical potential `ln(z) / beta`.
    pub fn chemical_potential(&self) -> f64 {
        self.fugacity.ln() / self.beta
    }

    /// Supremum `e^{beta min_energy} / q` of admissible fugacities for `q > 0`;
    /// infinite otherwise.
    pub fn fugacity_bound(&self, min_energy: f64) -> f64 {
        if self.q > 0.0 {
            (self.beta * min_energy).exp() / self.q
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    BetaPositive,
    FugacityPositive,
    QRange,
    /// `z q e^{-beta min_energy} < 1` for Bose-like states.
    FugacityBound,
}

impl Constraint {
    fn describe(self, st: &ThermoState) -> String {
        match self {
            Constraint::BetaPositive => format!("beta must be finite and positive, got {}", st.beta),
            Constraint::FugacityPositive => {
                format!("fugacity must be finite and positive, got {}", st.fugacity)
            }
            Constraint::QRange => format!("q must lie in [-1, 1], got {}", st.q),
            Constraint::FugacityBound => format!(
                "fugacity {} violates z q e^(-beta min_energy) < 1 for q = {}",
                st.fugacity, st.q
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rejection {
    pub constraint: Constraint,
    /// Largest admissible fugacity, reported for [`Constraint::FugacityBound`].
    pub boundary: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Admissible,
    Rejected(Rejection),
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Verdict::Admissible)
    }

    /// Converts a rejection into a domain error for `st`.
    pub fn into_result(self, st: &ThermoState) -> Result<()> {
        match self {
            Verdict::Admissible => Ok(()),
            Verdict::Rejected(r) => Err(Error::Domain {
                message: r.constraint.describe(st),
                boundary: r.boundary,
            }),
        }
    }
}

/// Range checks followed by the spectrum-dependent check.
pub fn validate(spectrum: &Spectrum, st: &ThermoState) -> Verdict {
    if let Some(c) = st.check_ranges() {
        return Verdict::Rejected(Rejection {
            constraint: c,
            boundary: None,
        });
    }
    spectrum.validate(st)
}

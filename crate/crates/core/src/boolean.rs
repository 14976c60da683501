//! Boolean statistics: at most one particle in the whole system, so the
//! grand partition function is `1 + z zeta`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{check_beta, Spectrum};

#[derive(Debug, Clone, PartialEq)]
pub struct BooleanState {
    spectrum: Spectrum,
    beta: f64,
    fugacity: f64,
    zeta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BooleanRow {
    pub energy: f64,
    pub degeneracy: f64,
    pub occupation: f64,
}

impl BooleanState {
    pub fn new(spectrum: Spectrum, beta: f64, fugacity: f64) -> Result<Self> {
        check_beta(beta)?;
        if !(fugacity.is_finite() && fugacity > 0.0) {
            return Err(Error::domain(format!("fugacity must be finite and positive, got {fugacity}")));
        }
        let zeta = spectrum.partition_function(beta)?;
        if !(fugacity * zeta).is_finite() {
            return Err(Error::domain(format!("z zeta overflows at z = {fugacity}, zeta = {zeta}")));
        }
        Ok(BooleanState { spectrum, beta, fugacity, zeta })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn fugacity(&self) -> f64 {
        self.fugacity
    }

    /// Canonical partition function of the spectrum at `beta`.
    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// Probability that the system is empty, `1 / (1 + z zeta)`.
    pub fn vacancy(&self) -> f64 {
        1.0 / (1.0 + self.fugacity * self.zeta)
    }

    pub fn occupancy_table(&self) -> Vec<BooleanRow> {
        let v = self.vacancy();
        self.spectrum
            .levels()
            .iter()
            .map(|l| BooleanRow {
                energy: l.energy,
                degeneracy: l.degeneracy,
                occupation: self.fugacity * l.weight(self.beta) * v,
            })
            .collect()
    }
}

/// `1 + z zeta(beta)`.
pub fn boolean_gpf(bs: &BooleanState) -> f64 {
    1.0 + bs.fugacity * bs.zeta
}

/// `g z e^{-beta e} / (1 + z zeta)` for a level of the state's spectrum.
pub fn boolean_occupation(energy: f64, degeneracy: f64, bs: &BooleanState) -> Result<f64> {
    match bs.spectrum.find_level(energy) {
        Some(l) if l.degeneracy == degeneracy => Ok(bs.fugacity * l.weight(bs.beta) * bs.vacancy()),
        Some(l) => Err(Error::domain(format!(
            "level at energy {energy} has degeneracy {}, not {degeneracy}",
            l.degeneracy
        ))),
        None => Err(Error::domain(format!("no level at energy {energy} in the spectrum"))),
    }
}

/// Mean particle number `z zeta / (1 + z zeta)`, always below one.
pub fn boolean_total(bs: &BooleanState) -> f64 {
    let x = bs.fugacity * bs.zeta;
    x / (1.0 + x)
}

//! Grand partition function of q-particles on a discrete spectrum.
//!
//! For `q != 0`
//!
//! ```text
//! ln Z_q = -(1/q) sum_i g_i ln(1 - z q e^{-beta e_i})
//! ```
//!
//! and `ln Z_0 = z zeta(beta)`. The two are joined only at `q == 0` exactly;
//! continuity across the origin is a checked property, not a blend.
//! Normalisation is fixed by `Z_q -> 1` as `z -> 0`.

pub mod pedagogical;

use crate::error::{Error, Result};
use crate::spectrum::{validate, EnergyLevel, Spectrum, ThermoState};

/// A spectrum paired with a state that is admissible for it.
#[derive(Debug, Clone, PartialEq)]
pub struct GrandState {
    spectrum: Spectrum,
    state: ThermoState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancyRow {
    pub energy: f64,
    pub degeneracy: f64,
    pub occupation: f64,
}

impl GrandState {
    pub fn new(spectrum: Spectrum, state: ThermoState) -> Result<Self> {
        validate(&spectrum, &state).into_result(&state)?;
        Ok(GrandState { spectrum, state })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn state(&self) -> &ThermoState {
        &self.state
    }

    pub fn beta(&self) -> f64 {
        self.state.beta
    }

    pub fn fugacity(&self) -> f64 {
        self.state.fugacity
    }

    pub fn q(&self) -> f64 {
        self.state.q
    }

    /// Same spectrum at another state.
    pub fn with_state(&self, state: ThermoState) -> Result<Self> {
        GrandState::new(self.spectrum.clone(), state)
    }

    pub fn partition_function(&self) -> Result<f64> {
        self.spectrum.partition_function(self.state.beta)
    }

    pub fn ln_grand_partition(&self) -> Result<f64> {
        let st = &self.state;
        ln_grand_partition_levels(self.spectrum.levels(), st.beta, st.fugacity, st.q)
    }

    /// Landau (grand) potential `-(1/beta) ln Z_q`.
    pub fn landau_potential(&self) -> Result<f64> {
        Ok(-self.ln_grand_partition()? / self.state.beta)
    }

    /// `PV = -Omega_q`, in units of energy.
    pub fn pv(&self) -> Result<f64> {
        Ok(self.ln_grand_partition()? / self.state.beta)
    }

    pub fn occupancy_table(&self) -> Result<Vec<OccupancyRow>> {
        self.spectrum
            .levels()
            .iter()
            .map(|l| {
                Ok(OccupancyRow {
                    energy: l.energy,
                    degeneracy: l.degeneracy,
                    occupation: occupation(l.energy, l.degeneracy, &self.state)?,
                })
            })
            .collect()
    }

    /// Mean particle number, the sum of level occupations.
    pub fn total_number(&self) -> Result<f64> {
        let mut n = 0.0;
        for l in self.spectrum.levels() {
            n += occupation(l.energy, l.degeneracy, &self.state)?;
        }
        Ok(n)
    }

    /// Upper bound on `ln Z_q`: `zeta z` for `q <= 0` and
    /// `zeta z / (1 - z q e^{-beta min_energy})` for `q > 0`.
    ///
    /// The `q > 0` form follows from the Bose bound applied to
    /// `ln Z_q(z) = (1/q) ln Z_1(zq)`. At `q = 0` it is attained.
    pub fn qgp_upper_bound(&self) -> Result<f64> {
        let st = &self.state;
        let zeta = self.partition_function()?;
        if st.q <= 0.0 {
            return Ok(zeta * st.fugacity);
        }
        let x0 = st.fugacity * st.q * (-st.beta * self.spectrum.min_energy()).exp();
        if x0 >= 1.0 {
            return Err(Error::domain_with_boundary(
                "bound undefined at or beyond the fugacity boundary",
                st.fugacity_bound(self.spectrum.min_energy()),
            ));
        }
        Ok(zeta * st.fugacity / (1.0 - x0))
    }

    /// Second-order estimate `(|q|/2) (z zeta)^2` of `|ln Z_q - ln Z_0|`.
    ///
    /// It drops the Taylor remainder, so for `q > 0` it only holds when the
    /// cross terms of `(z zeta)^2` dominate, e.g. integer degeneracies with
    /// a degenerate ground level and `z q <= 1/2`. See
    /// [`GrandState::mclaurin_remainder_bound`] for a form valid everywhere.
    pub fn mclaurin_estimate(&self) -> Result<f64> {
        let zz = self.state.fugacity * self.partition_function()?;
        Ok(0.5 * self.state.q.abs() * zz * zz)
    }

    /// `(|q|/2) z^2 sum_i g_i w_i^2 / (1 - max(0, x_0))` with
    /// `w_i = e^{-beta e_i}` and `x_0 = z q w_0`; a rigorous bound on
    /// `|ln Z_q - ln Z_0|` for every admissible state.
    pub fn mclaurin_remainder_bound(&self) -> Result<f64> {
        let st = &self.state;
        let mut s2 = 0.0;
        for l in self.spectrum.levels() {
            let w = (-st.beta * l.energy).exp();
            s2 += l.degeneracy * w * w;
        }
        let x0 = (st.fugacity * st.q * (-st.beta * self.spectrum.min_energy()).exp()).max(0.0);
        Ok(0.5 * st.q.abs() * st.fugacity * st.fugacity * s2 / (1.0 - x0))
    }
}

/// `ln Z_q` for an explicit level list.
///
/// Levels are not required to form a valid [`Spectrum`], which lets finite
/// difference checks move a single energy (even slightly below zero).
/// Admissibility is checked level by level.
pub fn ln_grand_partition_levels(levels: &[EnergyLevel], beta: f64, z: f64, q: f64) -> Result<f64> {
    ThermoState::new(beta, z, q)?;
    if q == 0.0 {
        let mut zeta = 0.0;
        for l in levels {
            zeta += l.weight(beta);
        }
        let v = z * zeta;
        return finite(v, "ln Z_0");
    }
    let zq = z * q;
    let mut acc = 0.0;
    for l in levels {
        let x = zq * (-beta * l.energy).exp();
        if x >= 1.0 {
            let min_e = levels.iter().map(|l| l.energy).fold(f64::INFINITY, f64::min);
            return Err(Error::domain_with_boundary(
                format!("fugacity {z} violates z q e^(-beta min_energy) < 1 for q = {q}"),
                (beta * min_e).exp() / q,
            ));
        }
        acc += l.degeneracy * (-x).ln_1p();
    }
    finite(-acc / q, "ln Z_q")
}

/// Occupation `g / (z^{-1} e^{beta e} - q)` of a level.
pub fn occupation(energy: f64, degeneracy: f64, st: &ThermoState) -> Result<f64> {
    let y = st.fugacity * (-st.beta * energy).exp();
    if st.q > 0.0 && st.q * y >= 1.0 {
        return Err(Error::domain_with_boundary(
            format!("occupation diverges: z q e^(-beta e) >= 1 at energy {energy}"),
            (st.beta * energy).exp() / st.q,
        ));
    }
    let n = if y > 1.0 {
        degeneracy / (1.0 / y - st.q)
    } else {
        degeneracy * y / (1.0 - st.q * y)
    };
    finite(n, "occupation")
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("{what} is not finite")))
    }
}

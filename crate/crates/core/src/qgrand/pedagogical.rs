//! Two textbook expressions kept for comparison with the correct `Z_0`.
//!
//! Second quantisation on the full Fock space gives the geometric series
//! `sum_n (zeta z)^n = 1 / (1 - zeta z)`, independent of `q` and defined only
//! for `zeta z < 1`. That is *not* the Boltzmann grand partition function,
//! which must exist for every fugacity. Weighting the `n`-particle term by
//! `1/n!` repairs it and sums to `e^{zeta z} = Z_0`.
//!
//! Nothing outside this module and its tests calls these functions.

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// `1 / (1 - zeta z)`, the uncorrected full-Fock-space value.
pub fn naive_full_fock_gpf(s: &Spectrum, beta: f64, z: f64) -> Result<f64> {
    check_fugacity(z)?;
    let zz = s.partition_function(beta)? * z;
    if zz >= 1.0 {
        return Err(Error::domain_with_boundary(
            format!("geometric series diverges: zeta z = {zz} >= 1"),
            z / zz,
        ));
    }
    Ok(1.0 / (1.0 - zz))
}

/// Partial sum `sum_{n=0}^{n_terms} (zeta z)^n / n!` of the Gibbs-corrected
/// series.
pub fn gibbs_series_partial(s: &Spectrum, beta: f64, z: f64, n_terms: usize) -> Result<f64> {
    check_fugacity(z)?;
    if n_terms == 0 {
        return Err(Error::domain("n_terms must be at least 1"));
    }
    let zz = s.partition_function(beta)? * z;
    Ok(exp_partial_sum(zz, n_terms))
}

/// Sum of the first `n + 1` Taylor terms of `e^x`, accumulated from the
/// smallest term upward.
fn exp_partial_sum(x: f64, n: usize) -> f64 {
    let mut terms = Vec::with_capacity(n + 1);
    let mut t = 1.0;
    terms.push(t);
    for k in 1..=n {
        t *= x / k as f64;
        terms.push(t);
    }
    terms.iter().rev().sum()
}

fn check_fugacity(z: f64) -> Result<()> {
    if z.is_finite() && z >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("fugacity must be finite and nonnegative, got {z}")))
    }
}

//! Seeded property checks over random admissible states.
//!
//! Samples are drawn sequentially from a ChaCha8 stream, so a seed fixes the
//! whole run; evaluation may be parallel, and the report is reduced in
//! sample order, so output is identical either way.
//!
//! Each check yields a margin, the observed quantity divided by what the
//! property allows. A check passes when its margin is at most 1.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boolean::{boolean_occupation, boolean_total, BooleanState};
use crate::error::Result;
use crate::freegas::{self, GasPoint};
use crate::par::{map_ordered, Execution};
use crate::polylog::{bose_g, fermi_f, quadrature_f, quadrature_g, PolylogResult};
use crate::qgrand::{ln_grand_partition_levels, occupation, GrandState};
use crate::report::format_g;
use crate::spectrum::{EnergyLevel, Spectrum, ThermoState};

const EPS: f64 = f64::EPSILON;

/// Deliberate defects for testing the verifier itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negates `ln Z_q` wherever the checks evaluate it.
    SignFlip,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub exec: Execution,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { samples: 1000, seed: 42, exec: Execution::default(), fault: None }
    }
}

/// One random draw. The grand-canonical fields are admissible for the
/// spectrum under test; the others feed the polylog and free-gas checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub index: usize,
    pub beta: f64,
    pub fugacity: f64,
    pub q: f64,
    /// Second deformation parameter, between `q` and the largest admissible one.
    pub q_upper: f64,
    pub level: usize,
    pub shift: f64,
    /// Polylog argument in `(0, 1)`.
    pub x: f64,
    /// Fermi argument in `(0, 50)`.
    pub y: f64,
    pub rho_lambda3: f64,
    pub q_gas: f64,
    pub z_gas: f64,
}

impl Sample {
    pub fn describe(&self) -> String {
        let f = |v: f64| format_g(v, 17);
        format!(
            "sample {}: beta={} z={} q={} q_upper={} level={} shift={} x={} y={} rho_lambda3={} q_gas={} z_gas={}",
            self.index,
            f(self.beta),
            f(self.fugacity),
            f(self.q),
            f(self.q_upper),
            self.level,
            f(self.shift),
            f(self.x),
            f(self.y),
            f(self.rho_lambda3),
            f(self.q_gas),
            f(self.z_gas)
        )
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// `q` in `[-1, 1]`, hitting `-1`, `0` and `1` exactly with probability 0.1 each.
fn draw_q(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen();
    if u < 0.1 {
        -1.0
    } else if u < 0.2 {
        0.0
    } else if u < 0.3 {
        1.0
    } else {
        rng.gen_range(-1.0..1.0)
    }
}

/// Draws `n` samples for `spectrum` from `seed`.
pub fn draw_samples(spectrum: &Spectrum, seed: u64, n: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e0 = spectrum.min_energy();
    (0..n)
        .map(|index| {
            let beta = log_uniform(&mut rng, 0.05, 20.0);
            let q = draw_q(&mut rng);
            let fugacity = if q > 0.0 {
                // a fraction of the fugacity boundary, kept away from it so
                // that finite differences stay inside the domain
                let bound = (beta * e0).exp() / q;
                bound * rng.gen_range(1e-3..0.99)
            } else {
                log_uniform(&mut rng, 1e-4, 10.0)
            };
            let q_max = (0.99 * (beta * e0).exp() / fugacity).min(1.0);
            let q_upper = if q_max > q { q + (q_max - q) * rng.gen::<f64>() } else { q };
            let level = rng.gen_range(0..spectrum.len());
            let shift = rng.gen_range(0.0..2.0);
            let x = log_uniform(&mut rng, 1e-6, 1.0).min(0.999_999);
            let y = log_uniform(&mut rng, 1e-4, 50.0);
            let rho_lambda3 = log_uniform(&mut rng, 1e-4, 1e2);
            let q_gas = draw_q(&mut rng);
            let z_gas = if q_gas > 0.0 { rng.gen_range(1e-4..0.99) / q_gas } else { log_uniform(&mut rng, 1e-4, 20.0) };
            Sample { index, beta, fugacity, q, q_upper, level, shift, x, y, rho_lambda3, q_gas, z_gas }
        })
        .collect()
}

/// Margin of one check; `Err` carries an unexpected evaluation error.
type Check = std::result::Result<f64, String>;

struct Ctx<'a> {
    spectrum: &'a Spectrum,
    fault: Option<Fault>,
}

impl Ctx<'_> {
    fn ln_z(&self, levels: &[EnergyLevel], beta: f64, z: f64, q: f64) -> Result<f64> {
        let v = ln_grand_partition_levels(levels, beta, z, q)?;
        Ok(match self.fault {
            Some(Fault::SignFlip) => -v,
            None => v,
        })
    }

    fn ln_z_spectrum(&self, beta: f64, z: f64, q: f64) -> Result<f64> {
        self.ln_z(self.spectrum.levels(), beta, z, q)
    }
}

fn ratio(observed: f64, allowed: f64) -> f64 {
    if observed == 0.0 {
        0.0
    } else {
        observed / allowed
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn check(f: impl FnOnce() -> Result<f64>) -> Option<Check> {
    Some(f().map_err(|e| e.to_string()))
}

type Property = fn(&Ctx, &Sample) -> Option<Check>;

/// Names and checks, in report order.
const PROPERTIES: &[(&str, Property)] = &[
    ("bose_fermi_reduction", bose_fermi_reduction),
    ("derivative_identity", derivative_identity),
    ("fugacity_identity", fugacity_identity),
    ("power_identity", power_identity),
    ("qgp_bound", qgp_bound),
    ("qgp_saturation", qgp_saturation),
    ("mclaurin_remainder", mclaurin_remainder),
    ("q_monotonicity", q_monotonicity),
    ("zeta_shift_scaling", zeta_shift_scaling),
    ("polylog_ordering", polylog_ordering),
    ("series_vs_quadrature", series_vs_quadrature),
    ("error_bound_overlap", error_bound_overlap),
    ("derivative_ladder", derivative_ladder),
    ("eos_round_trip", eos_round_trip),
    ("condensation_only_bose_like", condensation_only_bose_like),
    ("q_scaling_collapse", q_scaling_collapse),
    ("gas_monotonicity", gas_monotonicity),
    ("classical_limit", classical_limit),
    ("boolean_below_one", boolean_below_one),
    ("boolean_sum", boolean_sum),
    ("boolean_sharp", boolean_sharp),
];

pub fn property_names() -> Vec<&'static str> {
    PROPERTIES.iter().map(|(n, _)| *n).collect()
}

/// `q = +-1` against the direct sums `-+ sum g ln(1 -+ z w)`, relative `1e-13`.
fn bose_fermi_reduction(c: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let e0 = c.spectrum.min_energy();
        let z_bose = s.fugacity.min(0.99 * (s.beta * e0).exp());
        let mut worst: f64 = 0.0;
        for (q, z) in [(1.0, z_bose), (-1.0, s.fugacity)] {
            let got = c.ln_z_spectrum(s.beta, z, q)?;
            let direct: f64 = c
                .spectrum
                .levels()
                .iter()
                .map(|l| -q * l.degeneracy * (-q * z * (-s.beta * l.energy).exp()).ln_1p())
                .sum();
            worst = worst.max(rel_err(got, direct) / 1e-13);
        }
        Ok(worst)
    })
}

/// `-(1/beta) d ln Z / d e_i = n(e_i)` by central differences.
fn derivative_identity(c: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let levels = c.spectrum.levels();
        let l = levels[s.level];
        let h = 1e-6 * l.energy.max(1.0);
        let moved = |d: f64| {
            let mut v = levels.to_vec();
            v[s.level].energy = l.energy + d;
            v
        };
        let up = c.ln_z(&moved(h), s.beta, s.fugacity, s.q)?;
        let down = c.ln_z(&moved(-h), s.beta, s.fugacity, s.q)?;
        let fd = -(up - down) / (2.0 * h * s.beta);
        let st = ThermoState::new(s.beta, s.fugacity, s.q)?;
        let n = occupation(l.energy, l.degeneracy, &st)?;
        let floor = 16.0 * EPS * levels.len() as f64 * up.abs().max(down.abs()) / (2.0 * h * s.beta);
        Ok(ratio((fd - n).abs(), 1e-6 * n + floor))
    })
}

/// `z d ln Z / dz = N` by central differences.
fn fugacity_identity(c: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let h = 1e-6 * s.fugacity;
        let up = c.ln_z_spectrum(s.beta, s.fugacity + h, s.q)?;
        let down = c.ln_z_spectrum(s.beta, s.fugacity - h, s.q)?;
        let fd = s.fugacity * (up - down) / (2.0 * h);
        let gs = GrandState::new(c.spectrum.clone(), ThermoState::new(s.beta, s.fugacity, s.q)?)?;
        let n = gs.total_number()?;
        let floor = 16.0 * EPS * c.spectrum.len() as f64 * up.abs().max(down.abs()) / 2e-6;
        Ok(ratio((fd - n).abs(), 1e-6 * n + floor))
    })
}

/// `ln Z_q(z) = ln Z_{sign q}(z|q|) / |q|`, relative `1e-13`.
fn power_identity(c: &Ctx, s: &Sample) -> Option<Check> {
    if s.q == 0.0 {
        return None;
    }
    check(|| {
        let got = c.ln_z_spectrum(s.beta, s.fugacity, s.q)?;
        let unit = if s.q > 0.0 { 1.0 } else { -1.0 };
        let want = ln_grand_partition_levels(c.spectrum.levels(), s.beta, s.fugacity * s.q.abs(), unit)? / s.q.abs();
        Ok(rel_err(got, want) / 1e-13)
    })
}

fn grand(c: &Ctx, beta: f64, z: f64, q: f64) -> Result<GrandState> {
    GrandState::new(c.spectrum.clone(), ThermoState::new(beta, z, q)?)
}

/// `ln Z_q` below its upper bound, with `1e-12` relative slack.
fn qgp_bound(c: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let bound = grand(c, s.beta, s.fugacity, s.q)?.qgp_upper_bound()?;
        let v = c.ln_z_spectrum(s.beta, s.fugacity, s.q)?;
        Ok(ratio(v, bound * (1.0 + 1e-12)))
    })
}

/// At `q = 0` the bound is attained exactly.
fn qgp_saturation(c: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let bound = grand(c, s.beta, s.fugacity, 0.0)?.qgp_upper_bound()?;
        let v = c.ln_z_spectrum(s.beta, s.fugacity, 0.0)?;
        Ok(if v == bound { 0.0 } else { f64::INFINITY })
    })
}

/// `|ln Z_q - ln Z_0|` below the second-order remainder bound.
fn mclaurin_remainder(c: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let gs = grand(c, s.beta, s.fugacity, s.q)?;
        let bound = gs.mclaurin_remainder_bound()?;
        let lq = c.ln_z_spectrum(s.beta, s.fugacity, s.q)?;
        let l0 = c.ln_z_spectrum(s.beta, s.fugacity, 0.0)?;
        let slack = 4.0 * EPS * c.spectrum.len() as f64 * l0.abs().max(lq.abs());
        Ok(ratio((lq - l0).abs(), bound * (1.0 + 1e-12) + slack))
    })
}

/// `ln Z_q` nondecreasing in `q`.
fn q_monotonicity(c: &Ctx, s: &Sample) -> Option<Check> {
    if s.q_upper <= s.q {
        return None;
    }
    check(|| {
        let lo = c.ln_z_spectrum(s.beta, s.fugacity, s.q)?;
        let hi = c.ln_z_spectrum(s.beta, s.fugacity, s.q_upper)?;
        let slack = 4.0 * EPS * c.spectrum.len() as f64 * hi.abs().max(lo.abs());
        Ok(if lo <= hi + slack { 0.0 } else { (lo - hi) / slack })
    })
}

/// Shifting every energy by `c` multiplies `zeta` by `e^{-beta c}`.
fn zeta_shift_scaling(c: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let shifted = c.spectrum.shifted(s.shift)?.partition_function(s.beta)?;
        let want = (-s.beta * s.shift).exp() * c.spectrum.partition_function(s.beta)?;
        Ok(rel_err(shifted, want) / 1e-14)
    })
}

/// `f_nu(x) <= x <= g_nu(x)` on `[0, 1]`, up to the reported error bounds.
fn polylog_ordering(_: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let mut worst: f64 = 0.0;
        for nu in [1.5, 2.5] {
            let f = fermi_f(nu, s.x)?;
            let g = bose_g(nu, s.x)?;
            worst = worst.max(ratio(f.value, s.x + f.abs_error_bound));
            worst = worst.max(ratio(s.x, g.value + g.abs_error_bound));
        }
        Ok(worst)
    })
}

/// Series and momentum integrals agree to `1e-8` on `(0, 0.9]` and `(0, 1)`.
fn series_vs_quadrature(_: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let xf = s.x.min(0.9);
        let mut worst: f64 = 0.0;
        for nu in [1.5, 2.5] {
            worst = worst.max((fermi_f(nu, xf)?.value - quadrature_f(nu, xf)?.value).abs() / 1e-8);
            worst = worst.max((bose_g(nu, s.x)?.value - quadrature_g(nu, s.x)?.value).abs() / 1e-8);
        }
        Ok(worst)
    })
}

fn overlap(a: PolylogResult, b: PolylogResult) -> f64 {
    ratio((a.value - b.value).abs(), a.abs_error_bound + b.abs_error_bound)
}

/// Series and quadrature values are within the sum of their error bounds.
fn error_bound_overlap(_: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let xf = s.x.min(0.9);
        let mut worst: f64 = 0.0;
        for nu in [1.5, 2.5] {
            worst = worst.max(overlap(fermi_f(nu, xf)?, quadrature_f(nu, xf)?));
            worst = worst.max(overlap(bose_g(nu, s.x)?, quadrature_g(nu, s.x)?));
        }
        Ok(worst)
    })
}

/// `x d/dx f_{5/2} = f_{3/2}` and `x d/dx g_{5/2} = g_{3/2}`, relative `1e-6`.
fn derivative_ladder(_: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let h = 1e-4 * s.y;
        let fd = s.y * (fermi_f(2.5, s.y + h)?.value - fermi_f(2.5, s.y - h)?.value) / (2.0 * h);
        let f32 = fermi_f(1.5, s.y)?.value;
        let mut worst = rel_err(fd, f32) / 1e-6;

        let x = s.x.min(0.95);
        let h = 1e-4 * x.min(1.0 - x);
        let fd = x * (bose_g(2.5, x + h)?.value - bose_g(2.5, x - h)?.value) / (2.0 * h);
        worst = worst.max(rel_err(fd, bose_g(1.5, x)?.value) / 1e-6);
        Ok(worst)
    })
}

fn total_density(sol: &freegas::EosSolution, q: f64) -> Result<f64> {
    Ok(freegas::density(&sol.gas_point(q, 1.0)?)? / (1.0 - sol.condensate_fraction))
}

/// `density(solve_fugacity(r)) = r`, relative `1e-10`.
fn eos_round_trip(_: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let sol = freegas::solve_fugacity(s.rho_lambda3, s.q_gas)?;
        Ok(rel_err(total_density(&sol, s.q_gas)?, s.rho_lambda3) / 1e-10)
    })
}

fn condensation_only_bose_like(_: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let sol = freegas::solve_fugacity(s.rho_lambda3, s.q_gas)?;
        let consistent = if sol.condensed {
            s.q_gas > 0.0 && sol.condensate_fraction > 0.0
        } else {
            sol.condensate_fraction == 0.0
        };
        Ok(if consistent { 0.0 } else { f64::INFINITY })
    })
}

/// `|q| lambda^3 rho(q, z)` depends on `z|q|` only.
fn q_scaling_collapse(_: &Ctx, s: &Sample) -> Option<Check> {
    if s.q_gas == 0.0 {
        return None;
    }
    check(|| {
        let x = s.z_gas * s.q_gas.abs();
        let scaled = s.q_gas.abs() * freegas::density(&GasPoint::new(s.q_gas, s.z_gas, 1.0)?)?;
        let base = if s.q_gas > 0.0 { bose_g(1.5, x.min(1.0))?.value } else { fermi_f(1.5, x)?.value };
        Ok(rel_err(scaled, base) / (8.0 * EPS))
    })
}

/// Pressure and density strictly increase with `z`.
fn gas_monotonicity(_: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let z2 = s.z_gas * (1.0 + 1e-3);
        if s.q_gas > 0.0 && z2 * s.q_gas >= 1.0 {
            return Ok(0.0);
        }
        let a = GasPoint::new(s.q_gas, s.z_gas, 1.0)?;
        let b = GasPoint::new(s.q_gas, z2, 1.0)?;
        let ok = freegas::density(&a)? < freegas::density(&b)? && freegas::beta_pressure(&a)? < freegas::beta_pressure(&b)?;
        Ok(if ok { 0.0 } else { f64::INFINITY })
    })
}

/// `|PV/NkT - 1| <= 2z` for `z <= 1e-3`.
fn classical_limit(_: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let z = 1e-3 * s.x;
        Ok(ratio((freegas::eos_ratio(s.q_gas, z)? - 1.0).abs(), 2.0 * z))
    })
}

fn boolean_state(c: &Ctx, s: &Sample) -> Result<BooleanState> {
    BooleanState::new(c.spectrum.clone(), s.beta, s.fugacity)
}

fn boolean_below_one(c: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let n = boolean_total(&boolean_state(c, s)?);
        Ok(if n > 0.0 && n < 1.0 { n } else { f64::INFINITY })
    })
}

/// Level occupations add up to the total, to a few ulps.
fn boolean_sum(c: &Ctx, s: &Sample) -> Option<Check> {
    check(|| {
        let bs = boolean_state(c, s)?;
        let mut sum = 0.0;
        for l in c.spectrum.levels() {
            sum += boolean_occupation(l.energy, l.degeneracy, &bs)?;
        }
        let n = boolean_total(&bs);
        Ok(rel_err(sum, n) / (4.0 * EPS * c.spectrum.len() as f64))
    })
}

/// Every level occupation is strictly below the total once there are two levels.
fn boolean_sharp(c: &Ctx, s: &Sample) -> Option<Check> {
    if c.spectrum.len() < 2 {
        return None;
    }
    check(|| {
        let bs = boolean_state(c, s)?;
        let n = boolean_total(&bs);
        let l = c.spectrum.levels()[s.level];
        let occ = boolean_occupation(l.energy, l.degeneracy, &bs)?;
        Ok(if occ < n { occ / n } else { f64::INFINITY })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    /// Largest margin seen; a value at most 1 means every check passed.
    pub worst_margin: f64,
    pub worst_sample: Option<usize>,
    /// First failing sample, described in full for reproduction.
    pub first_failure: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub levels: usize,
    pub properties: Vec<PropertyOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyOutcome> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_text(&self, precision: usize) -> String {
        let mut out = format!(
            "verify: seed {}, {} samples, spectrum of {} levels\n",
            self.seed, self.samples, self.levels
        );
        let width = self.properties.iter().map(|p| p.name.len()).max().unwrap_or(0);
        for p in &self.properties {
            let _ = write!(
                out,
                "{} {:width$}  checks {}  failures {}  worst margin {}",
                if p.passed() { "PASS" } else { "FAIL" },
                p.name,
                p.checks,
                p.failures,
                format_g(p.worst_margin, precision),
            );
            if let Some(i) = p.worst_sample {
                let _ = write!(out, " (sample {i})");
            }
            out.push('\n');
            if let Some(f) = &p.first_failure {
                let _ = writeln!(out, "     first failure: {f}");
            }
        }
        let failed = self.properties.iter().filter(|p| !p.passed()).count();
        let _ = writeln!(
            out,
            "overall: {} ({} of {} properties passed)",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.properties.len() - failed,
            self.properties.len()
        );
        out
    }
}

/// Runs every property on `config.samples` samples drawn from `config.seed`.
pub fn run(spectrum: &Spectrum, config: &VerifyConfig) -> VerifyReport {
    let samples = draw_samples(spectrum, config.seed, config.samples);
    let ctx = Ctx { spectrum, fault: config.fault };
    let results: Vec<Vec<Option<Check>>> =
        map_ordered(&samples, config.exec, |s| PROPERTIES.iter().map(|(_, p)| p(&ctx, s)).collect());

    let properties = PROPERTIES
        .iter()
        .enumerate()
        .map(|(k, (name, _))| {
            let mut out = PropertyOutcome {
                name: name.to_string(),
                checks: 0,
                failures: 0,
                worst_margin: 0.0,
                worst_sample: None,
                first_failure: None,
            };
            for (s, row) in samples.iter().zip(&results) {
                let Some(c) = &row[k] else { continue };
                out.checks += 1;
                let (margin, detail) = match c {
                    Ok(m) if m.is_nan() => (f64::INFINITY, "margin is NaN".to_string()),
                    Ok(m) => (*m, format!("margin {}", format_g(*m, 17))),
                    Err(e) => (f64::INFINITY, e.clone()),
                };
                if margin > out.worst_margin || out.worst_sample.is_none() {
                    out.worst_margin = margin;
                    out.worst_sample = Some(s.index);
                }
                if margin.is_nan() || margin > 1.0 {
                    out.failures += 1;
                    if out.first_failure.is_none() {
                        out.first_failure = Some(format!("{}; {}", s.describe(), detail));
                    }
                }
            }
            out
        })
        .collect();
    VerifyReport { seed: config.seed, samples: config.samples, levels: spectrum.len(), properties }
}

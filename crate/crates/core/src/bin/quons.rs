//! `quons`: command-line front end for quon-thermo.
//!
//! Exit codes: 0 ok, 1 I/O or parse error, 2 domain error, 3 verification
//! failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quon_thermo::boolean::{boolean_gpf, boolean_total, BooleanState};
use quon_thermo::freegas::{self, thermal_wavelength};
use quon_thermo::par::Execution;
use quon_thermo::qgrand::GrandState;
use quon_thermo::report::{OutputFormat, Report, DEFAULT_PRECISION};
use quon_thermo::spectrum::{Spectrum, ThermoState};
use quon_thermo::sweep::{self, ContinuumBase, Quantity, Scale, SweepSpec, SweepVariable};
use quon_thermo::verify::{self, Fault, VerifyConfig};
use quon_thermo::Error;

#[derive(Parser)]
#[command(name = "quons", version, about = "Thermodynamics of q-particles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical partition function zeta(beta) of a spectrum.
    #[command(allow_negative_numbers = true)]
    Zeta {
        #[command(flatten)]
        spectrum: SpectrumArg,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// ln Z_q, Landau potential, PV, N and level occupations.
    #[command(allow_negative_numbers = true)]
    Grand {
        #[command(flatten)]
        spectrum: SpectrumArg,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Table of quantities along a one-dimensional grid.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Free-gas pressure, density and equation of state at one point.
    #[command(allow_negative_numbers = true)]
    Eos {
        #[command(flatten)]
        gas: GasArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Critical density of a Bose-like gas.
    #[command(allow_negative_numbers = true)]
    Critical {
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        wavelength: WavelengthArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Boolean statistics: Z = 1 + z zeta, occupations and N < 1.
    #[command(allow_negative_numbers = true)]
    Boolean {
        #[command(flatten)]
        spectrum: SpectrumArg,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        z: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the property suite on seeded random states.
    Verify {
        #[command(flatten)]
        spectrum: SpectrumArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Evaluate samples on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct SpectrumArg {
    /// Spectrum file (CSV `energy,degeneracy` or JSON array); defaults to the
    /// bundled eight-level reference spectrum.
    #[arg(long)]
    spectrum: Option<PathBuf>,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    z: f64,
    #[arg(long)]
    q: f64,
}

#[derive(Args, Clone)]
struct WavelengthArgs {
    /// Thermal wavelength (reduced units, or metres with `--units si`).
    #[arg(long, conflicts_with_all = ["mass", "temperature"])]
    lambda: Option<f64>,
    /// Particle mass in kg (SI units only).
    #[arg(long, requires = "temperature")]
    mass: Option<f64>,
    /// Temperature in K (SI units only).
    #[arg(long, requires = "mass")]
    temperature: Option<f64>,
}

#[derive(Args)]
struct GasArgs {
    #[arg(long)]
    q: f64,
    #[arg(long, conflicts_with = "density")]
    z: Option<f64>,
    /// Number density (per unit volume in the chosen units).
    #[arg(long)]
    density: Option<f64>,
    #[command(flatten)]
    wavelength: WavelengthArgs,
    /// Weight of the separated zero-momentum term.
    #[arg(long, default_value_t = 0.0)]
    condensate_a: f64,
    #[arg(long)]
    volume: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep the free gas in the continuum limit instead of a spectrum.
    #[arg(long)]
    continuum: bool,
    #[command(flatten)]
    spectrum: SpectrumArg,
    #[arg(long, value_enum)]
    vary: VaryArg,
    #[arg(long)]
    start: f64,
    #[arg(long)]
    stop: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
    scale: ScaleArg,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    z: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    density: Option<f64>,
    #[command(flatten)]
    wavelength: WavelengthArgs,
    #[arg(long, default_value_t = 0.0)]
    condensate_a: f64,
    #[arg(long)]
    volume: Option<f64>,
    /// Comma-separated output columns, among lnZ, Omega, PV, N (spectrum)
    /// or fugacity, betaP, rho, eos_ratio, condensate_fraction (continuum).
    #[arg(long, value_delimiter = ',')]
    columns: Vec<String>,
    /// Evaluate grid points on one thread.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Significant digits for printed numbers.
    #[arg(long, default_value_t = DEFAULT_PRECISION, value_parser = clap::value_parser!(usize))]
    precision: usize,
    #[arg(long, value_enum, default_value_t = UnitsArg::Reduced)]
    units: UnitsArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnitsArg {
    Reduced,
    Si,
}

impl UnitsArg {
    fn name(self) -> &'static str {
        match self {
            UnitsArg::Reduced => "reduced",
            UnitsArg::Si => "si",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VaryArg {
    Fugacity,
    Beta,
    Q,
    Density,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    SignFlip,
}

enum Failure {
    Io(String),
    Input(Error),
    Lib(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = match &f {
                Failure::Io(msg) => {
                    eprintln!("error: {msg}");
                    1
                }
                Failure::Input(e) => {
                    eprintln!("error: {e}");
                    1
                }
                Failure::Lib(e) => {
                    eprintln!("error: {e}");
                    if let Error::Domain { boundary: Some(b), .. } = e {
                        eprintln!("boundary: {}", quon_thermo::report::format_g(*b, DEFAULT_PRECISION));
                    }
                    match e {
                        Error::Parse { .. } => 1,
                        _ => 2,
                    }
                }
                Failure::Verification => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn load_spectrum(arg: &SpectrumArg) -> CliResult<(Spectrum, String)> {
    match &arg.spectrum {
        None => Ok((Spectrum::reference(), "reference".into())),
        Some(path) => {
            let bytes = fs::read(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
            let s = Spectrum::parse(&bytes).map_err(Failure::Input)?;
            Ok((s, path.display().to_string()))
        }
    }
}

fn emit(report: &Report, out: &OutputArgs) -> CliResult<()> {
    let format = match out.format {
        FormatArg::Text => OutputFormat::Text,
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    if out.precision == 0 {
        return Err(Failure::Input(Error::Parse { location: "--precision".into(), message: "must be at least 1".into() }));
    }
    let text = report.render(format, out.precision)?;
    write_out(&text, out)?;
    for s in &report.metadata.skipped {
        if !matches!(format, OutputFormat::Text) {
            eprintln!("skipped {}: {}", s.value, s.reason);
        }
    }
    Ok(())
}

fn write_out(text: &str, out: &OutputArgs) -> CliResult<()> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}")))
        }
    }
}

/// Thermal wavelength from the flags: `--lambda`, or `--mass` and
/// `--temperature` in SI units; 1 by default in reduced units.
fn wavelength(w: &WavelengthArgs, units: UnitsArg, report: &mut Report) -> CliResult<f64> {
    match (w.lambda, w.mass, w.temperature) {
        (Some(l), _, _) => {
            report.input_number("lambda", l);
            Ok(l)
        }
        (None, Some(m), Some(t)) => {
            if units != UnitsArg::Si {
                return Err(Error::Domain { message: "--mass and --temperature need --units si".into(), boundary: None }.into());
            }
            report.input_number("mass", m).input_number("temperature", t);
            let l = thermal_wavelength(m, t)?;
            report.result("lambda", l);
            Ok(l)
        }
        _ => {
            if units == UnitsArg::Si {
                return Err(Error::Domain {
                    message: "SI units need --lambda (m) or --mass (kg) with --temperature (K)".into(),
                    boundary: None,
                }
                .into());
            }
            Ok(1.0)
        }
    }
}

fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Zeta { spectrum, beta, out } => {
            let (s, name) = load_spectrum(&spectrum)?;
            let mut r = Report::new("zeta", out.units.name());
            r.input("spectrum", name).input_number("beta", beta);
            r.result("zeta", s.partition_function(beta)?);
            emit(&r, &out)
        }
        Command::Grand { spectrum, state, out } => {
            let (s, name) = load_spectrum(&spectrum)?;
            let mut r = Report::new("grand", out.units.name());
            r.input("spectrum", name)
                .input_number("beta", state.beta)
                .input_number("z", state.z)
                .input_number("q", state.q);
            let gs = GrandState::new(s, ThermoState::new(state.beta, state.z, state.q)?)?;
            let ln_z = gs.ln_grand_partition()?;
            r.result("lnZ", ln_z)
                .result("Omega", gs.landau_potential()?)
                .result("PV", gs.pv()?)
                .result("N", gs.total_number()?);
            let rows = gs.occupancy_table()?.iter().map(|o| vec![o.energy, o.degeneracy, o.occupation]).collect();
            r.table(vec!["energy".into(), "degeneracy".into(), "occupation".into()], rows);
            emit(&r, &out)
        }
        Command::Boolean { spectrum, beta, z, out } => {
            let (s, name) = load_spectrum(&spectrum)?;
            let mut r = Report::new("boolean", out.units.name());
            r.input("spectrum", name).input_number("beta", beta).input_number("z", z);
            let bs = BooleanState::new(s, beta, z)?;
            r.result("Z", boolean_gpf(&bs)).result("N", boolean_total(&bs)).result("vacancy", bs.vacancy());
            let rows = bs.occupancy_table().iter().map(|o| vec![o.energy, o.degeneracy, o.occupation]).collect();
            r.table(vec!["energy".into(), "degeneracy".into(), "occupation".into()], rows);
            emit(&r, &out)
        }
        Command::Critical { q, wavelength: w, out } => {
            let mut r = Report::new("critical", out.units.name());
            r.input_number("q", q);
            let l = wavelength(&w, out.units, &mut r)?;
            r.result("critical_density", freegas::critical_density(q, l)?);
            emit(&r, &out)
        }
        Command::Eos { gas, out } => {
            let mut r = Report::new("eos", out.units.name());
            r.input_number("q", gas.q);
            let l = wavelength(&gas.wavelength, out.units, &mut r)?;
            if let Some(z) = gas.z {
                r.input_number("z", z);
            }
            if let Some(d) = gas.density {
                r.input_number("density", d);
            }
            if gas.condensate_a > 0.0 {
                r.input_number("condensate_a", gas.condensate_a);
            }
            if let Some(v) = gas.volume {
                r.input_number("volume", v);
            }
            if gas.z.is_none() && gas.density.is_none() {
                return Err(Failure::Input(Error::Parse {
                    location: "arguments".into(),
                    message: "eos needs --z or --density".into(),
                }));
            }
            let base = ContinuumBase {
                q: gas.q,
                fugacity: gas.z,
                density: gas.density,
                lambda: l,
                condensate_a: gas.condensate_a,
                volume: gas.volume,
            };
            let p = sweep::continuum_point(&base)?;
            r.result("fugacity", p.fugacity)
                .result("betaP", p.beta_pressure)
                .result("rho", p.density)
                .result("eos_ratio", p.eos_ratio)
                .result("condensate_fraction", p.condensate_fraction);
            emit(&r, &out)
        }
        Command::Sweep(a) => run_sweep(a),
        Command::Verify { spectrum, samples, seed, sequential, inject_fault, out } => {
            let (s, _) = load_spectrum(&spectrum)?;
            let config = VerifyConfig {
                samples,
                seed,
                exec: if sequential { Execution::Sequential } else { Execution::Parallel },
                fault: inject_fault.map(|FaultArg::SignFlip| Fault::SignFlip),
            };
            let report = verify::run(&s, &config);
            let text = match out.format {
                FormatArg::Json => {
                    let mut t = serde_json::to_string_pretty(&report).map_err(|e| Failure::Io(e.to_string()))?;
                    t.push('\n');
                    t
                }
                _ => report.to_text(out.precision.max(1)),
            };
            write_out(&text, &out)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn run_sweep(a: SweepArgs) -> CliResult<()> {
    let variable = match a.vary {
        VaryArg::Fugacity => SweepVariable::Fugacity,
        VaryArg::Beta => SweepVariable::Beta,
        VaryArg::Q => SweepVariable::Q,
        VaryArg::Density => SweepVariable::Density,
    };
    let scale = match a.scale {
        ScaleArg::Linear => Scale::Linear,
        ScaleArg::Log => Scale::Log,
    };
    let exec = if a.sequential { Execution::Sequential } else { Execution::Parallel };
    let columns = if a.columns.is_empty() {
        if a.continuum {
            Quantity::default_continuum()
        } else {
            Quantity::default_discrete()
        }
    } else {
        a.columns.iter().map(|c| c.parse::<Quantity>()).collect::<Result<Vec<_>, _>>().map_err(Failure::Input)?
    };
    let spec = SweepSpec::new(variable, a.start, a.stop, a.steps, scale)?;

    let mut r = Report::new("sweep", a.out.units.name());
    r.input("variable", variable.name())
        .input_number("start", a.start)
        .input_number("stop", a.stop)
        .input("steps", a.steps.to_string())
        .input("scale", if scale == Scale::Log { "log" } else { "linear" });
    let fixed = |name: &str, v: Option<f64>, r: &mut Report| -> CliResult<f64> {
        let v = v.ok_or_else(|| {
            Failure::Input(Error::Parse { location: "arguments".into(), message: format!("this sweep needs --{name}") })
        })?;
        r.input_number(name, v);
        Ok(v)
    };

    let table = if a.continuum {
        r.input("model", "continuum");
        let lambda = wavelength(&a.wavelength, a.out.units, &mut r)?;
        let q = if variable == SweepVariable::Q { 0.0 } else { fixed("q", a.q, &mut r)? };
        let (fugacity, density) = match variable {
            SweepVariable::Fugacity | SweepVariable::Density => (None, None),
            _ => match (a.z, a.density) {
                (Some(z), None) => (Some(fixed("z", Some(z), &mut r)?), None),
                (None, Some(d)) => (None, Some(fixed("density", Some(d), &mut r)?)),
                _ => {
                    return Err(Failure::Input(Error::Parse {
                        location: "arguments".into(),
                        message: "a q sweep of the free gas needs exactly one of --z and --density".into(),
                    }))
                }
            },
        };
        if a.condensate_a > 0.0 {
            r.input_number("condensate_a", a.condensate_a);
        }
        if let Some(v) = a.volume {
            r.input_number("volume", v);
        }
        let base = ContinuumBase { q, fugacity, density, lambda, condensate_a: a.condensate_a, volume: a.volume };
        sweep::sweep_continuum(base, &spec, &columns, exec)?
    } else {
        let (s, name) = load_spectrum(&a.spectrum)?;
        r.input("spectrum", name);
        let beta = if variable == SweepVariable::Beta { 1.0 } else { fixed("beta", a.beta, &mut r)? };
        let z = if variable == SweepVariable::Fugacity { 1.0 } else { fixed("z", a.z, &mut r)? };
        let q = if variable == SweepVariable::Q { 0.0 } else { fixed("q", a.q, &mut r)? };
        sweep::sweep_discrete(&s, ThermoState { beta, fugacity: z, q }, &spec, &columns, exec)?
    };
    r.table(table.columns, table.rows);
    r.metadata.skipped = table.skipped;
    emit(&r, &a.out)
}

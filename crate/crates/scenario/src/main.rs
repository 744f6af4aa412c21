use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dst_core::UnitPreset;
use dst_scenario::config::{merge_entries, parse_units, read_entries};
use dst_scenario::{emit, run_scenario, Entry, Location, Result, ScenarioConfig, ScenarioError};

/// Planck-corrected matter-wave kinematics: scenarios, sweeps and tables.
///
/// Every numeric flag takes a value, a comma list or an inclusive range
/// `start:stop:step`; several swept flags run their cartesian product.
#[derive(Parser, Debug)]
#[command(name = "dst", version, propagate_version = true)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file; flags override its entries
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// BOTH, SPACE_ONLY, TIME_ONLY or CONTINUUM
    #[arg(long, global = true)]
    variant: Option<String>,
    /// LINEAR or EXPONENTIAL
    #[arg(long, global = true)]
    form: Option<String>,
    /// NATURAL, SI or PLANCK_GRAV (default from DST_UNITS, else NATURAL)
    #[arg(long, global = true)]
    units: Option<String>,
    /// Output file (default standard output)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    /// CSV or JSON
    #[arg(long, global = true)]
    format: Option<String>,
    /// Override Planck's constant
    #[arg(long = "scale.h", global = true, value_name = "VALUE")]
    scale_h: Option<String>,
    /// Override the speed of light
    #[arg(long = "scale.c", global = true, value_name = "VALUE")]
    scale_c: Option<String>,
    /// Override the gravitational constant
    #[arg(long = "scale.G", global = true, value_name = "VALUE")]
    scale_g: Option<String>,
    /// H_OVER_TP or HBAR_OVER_TP
    #[arg(long = "scale.energy_convention", global = true, value_name = "NAME")]
    energy_convention: Option<String>,
}

impl Common {
    fn entries(&self) -> Vec<Entry> {
        [
            ("variant", &self.variant),
            ("form", &self.form),
            ("units", &self.units),
            ("out", &self.out),
            ("format", &self.format),
            ("scale.h", &self.scale_h),
            ("scale.c", &self.scale_c),
            ("scale.G", &self.scale_g),
            ("scale.energy_convention", &self.energy_convention),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| Entry::flag(k, v.clone())))
        .collect()
    }
}

/// Subcommand flag structs: every field is an optional raw config value.
macro_rules! flags {
    ($name:ident { $($field:ident = $key:literal : $help:literal),* $(,)? }) => {
        #[derive(Args, Debug, Default)]
        struct $name {
            $(
                #[arg(long = $key, help = $help, allow_hyphen_values = true, value_name = "VALUE")]
                $field: Option<String>,
            )*
        }

        impl $name {
            fn entries(&self) -> Vec<Entry> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = &self.$field {
                        out.push(Entry::flag($key, v.clone()));
                    }
                )*
                out
            }
        }
    };
}

flags!(WavelengthArgs {
    mode = "mode": "FORWARD, INVERSE or EXTREMAL",
    p = "p": "Momentum",
    lambda = "lambda": "Wavelength to invert",
    branch = "branch": "LOW_P or HIGH_P root of the inversion",
});
flags!(PeriodArgs { e = "E": "Energy" });
flags!(TransformArgs {
    mode = "mode": "FORWARD or INVERSE",
    x = "x": "Momentum or energy to transform",
    y = "y": "Transformed value to invert",
    axis = "axis": "SPACE or TIME",
});
flags!(DispersionArgs {
    mode = "mode": "SOLVE or RESIDUAL",
    p = "p": "Momentum",
    m0 = "m0": "Rest mass",
    e = "E": "Energy at which to evaluate residuals",
});
flags!(MassArgs {
    v = "v": "Velocity",
    m0 = "m0": "Rest mass",
});
flags!(WellArgs {
    l = "L": "Well width",
    m = "m": "Particle mass",
    n_max = "n_max": "Highest level",
    model = "model": "PAPER_FORMULA, SPATIAL_QUANTIZATION or NUMERIC",
    n_grid = "n_grid": "Interior grid points for NUMERIC",
});
flags!(UncertaintyArgs {
    mode = "mode": "BOUND, MINIMUM, EFFECTIVE or PACKET",
    dp = "dp": "Momentum spread",
    p_bar = "p_bar": "Mean momentum",
    sigma = "sigma": "Gaussian position spread",
    k0 = "k0": "Carrier wavenumber",
    n = "n": "Grid points (power of two)",
    span = "span": "Grid length",
});
flags!(EvolveArgs {
    mode = "mode": "RUN or MULTIPLIER",
    k = "k": "Angular wavenumber for MULTIPLIER",
    m = "m": "Particle mass",
    sigma = "sigma": "Initial position spread",
    x_center = "x_center": "Initial centroid",
    k0 = "k0": "Carrier wavenumber",
    n = "n": "Grid points (power of two)",
    x_min = "x_min": "Left grid edge",
    x_max = "x_max": "Right grid edge",
    dt = "dt": "Time step",
    steps = "steps": "Number of steps",
    time_correction = "time_correction": "PER_MODE or NONE",
    potential = "potential": "FREE or HARMONIC",
    omega = "omega": "Oscillator frequency for HARMONIC",
    every = "every": "Observation stride in steps",
    dump = "dump": "Write |psi|^2 frames to this binary file",
});
flags!(TofArgs {
    p = "p": "Photon momentum",
    d = "D": "Propagation distance",
    formula = "formula": "FIRST_ORDER or EXACT",
});
flags!(BoundArgs {
    mode = "mode": "MEASURE or OPTIMAL",
    l = "L": "Length to measure",
    m = "m": "Clock mass",
});

#[derive(Subcommand, Debug)]
enum Command {
    /// Wavelength from momentum, its inverse, or the minimal length and period
    Wavelength(WavelengthArgs),
    /// Period from energy
    Period(PeriodArgs),
    /// Bounded momentum or energy transform and its inverse
    Transform(TransformArgs),
    /// Energy on the revised mass shell, residuals and group velocities
    Dispersion(DispersionArgs),
    /// Relativistic mass with the Planck correction
    Mass(MassArgs),
    /// Infinite square well levels
    Well(WellArgs),
    /// Generalized uncertainty bound, effective constant and packet moments
    Uncertainty(UncertaintyArgs),
    /// Split-step evolution of a Gaussian packet, or the kinetic multiplier
    Evolve(EvolveArgs),
    /// Photon time-of-flight delay
    Tof(TofArgs),
    /// Length measurement bound from clock mass
    Bound(BoundArgs),
}

impl Command {
    fn split(&self) -> (&'static str, Vec<Entry>) {
        match self {
            Command::Wavelength(a) => ("wavelength", a.entries()),
            Command::Period(a) => ("period", a.entries()),
            Command::Transform(a) => ("transform", a.entries()),
            Command::Dispersion(a) => ("dispersion", a.entries()),
            Command::Mass(a) => ("mass", a.entries()),
            Command::Well(a) => ("well", a.entries()),
            Command::Uncertainty(a) => ("uncertainty", a.entries()),
            Command::Evolve(a) => ("evolve", a.entries()),
            Command::Tof(a) => ("tof", a.entries()),
            Command::Bound(a) => ("bound", a.entries()),
        }
    }
}

fn build_config(cli: &Cli) -> Result<ScenarioConfig> {
    let mut entries = match &cli.common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
                path: path.clone(),
                source,
            })?;
            read_entries(&text)?
        }
        None => Vec::new(),
    };
    if let Some(command) = &cli.command {
        let (name, flags) = command.split();
        match entries.iter().find(|e| e.key == "operation") {
            Some(e) if e.value != name => {
                return Err(ScenarioError::at(
                    e.location,
                    format!("operation `{}` conflicts with subcommand `{name}`", e.value),
                ))
            }
            Some(_) => {}
            None => entries.insert(0, Entry::flag("operation", name)),
        }
        entries = merge_entries(entries, flags);
    } else if cli.common.config.is_none() {
        return Err(ScenarioError::config(
            None,
            "give a subcommand or --config (see --help)",
        ));
    }
    entries = merge_entries(entries, cli.common.entries());
    let default_units = match std::env::var("DST_UNITS") {
        Ok(v) => parse_units(Location::Flag, &v).map_err(|e| ScenarioError::config(None, format!("DST_UNITS: {e}")))?,
        Err(_) => UnitPreset::Natural,
    };
    ScenarioConfig::from_entries(entries, default_units)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = build_config(cli)?;
    let table = run_scenario(&cfg)?;
    match &cfg.out {
        Some(path) => {
            let io_err = |source| ScenarioError::Io {
                path: path.clone(),
                source,
            };
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            emit(&table, cfg.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            emit(&table, cfg.format, &mut w)
                .and_then(|_| w.flush())
                .map_err(|source| ScenarioError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dst: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

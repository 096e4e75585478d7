//! `spinboost` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime failure, 3 check failure.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinboost::check::check_suite;
use spinboost::output::{read_sweep, render, OutputFormat};
use spinboost::sweep::{parse_angle, run_sweep, ExtremaReport};
use spinboost::{
    delta_e, find_extrema, wigner_angle, BoostSpec, CanonicalPartition, GridSpec, MomentumParams, NamedState,
    SpinFamily, SpinInput, SpinParams, SweepConfig,
};

const EXIT_USAGE: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_CHECK: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "spinboost",
    version,
    about = "Boost-induced entanglement changes of two spin-1 particles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wigner angle for two perpendicular boosts with rapidities ξ and η.
    WignerAngle {
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        eta: f64,
    },
    /// Entanglement change of one state across one partition.
    DeltaE(DeltaEArgs),
    /// ΔE over a (θ, φ) grid, written as CSV or JSON.
    Sweep(SweepArgs),
    /// Maxima and minima of a sweep file.
    Extrema {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Cluster merge radius in radians; defaults to three grid steps.
        #[arg(long)]
        merge_radius: Option<f64>,
    },
    /// Run the invariant check suite.
    Check {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = true)]
struct BoostArgs {
    /// Wigner angle in radians, in [0, π/2].
    #[arg(long, value_parser = angle, conflicts_with_all = ["xi", "eta"])]
    omega: Option<f64>,
    #[arg(long, requires = "eta")]
    xi: Option<f64>,
    #[arg(long, requires = "xi")]
    eta: Option<f64>,
}

impl BoostArgs {
    fn spec(&self) -> spinboost::Result<BoostSpec> {
        match (self.omega, self.xi, self.eta) {
            (Some(w), _, _) => BoostSpec::angle(w),
            (None, Some(xi), Some(eta)) => BoostSpec::rapidities(xi, eta),
            _ => unreachable!("clap enforces the boost group"),
        }
    }
}

#[derive(Args, Debug)]
struct DeltaEArgs {
    #[arg(long, value_parser = family, required_unless_present = "state")]
    family: Option<SpinFamily>,
    #[arg(long, value_parser = angle, required_unless_present = "state")]
    theta: Option<f64>,
    #[arg(long, value_parser = angle, required_unless_present = "state")]
    phi: Option<f64>,
    /// Named spin state instead of family/θ/φ (inv3, bell-minus, s00, ...).
    #[arg(long, value_parser = named_state, conflicts_with_all = ["family", "theta", "phi"])]
    state: Option<NamedState>,
    #[arg(long, value_parser = angle)]
    alpha: f64,
    #[command(flatten)]
    boost: BoostArgs,
    #[arg(long, value_parser = partition)]
    partition: CanonicalPartition,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_parser = family)]
    family: SpinFamily,
    #[arg(long, value_parser = angle)]
    alpha: f64,
    #[command(flatten)]
    boost: BoostArgs,
    #[arg(long, value_parser = partition)]
    partition: CanonicalPartition,
    /// start:stop:count, default 0:pi:121.
    #[arg(long, value_parser = grid)]
    theta_grid: Option<GridSpec>,
    /// start:stop:count, default 0:2pi:241.
    #[arg(long, value_parser = grid)]
    phi_grid: Option<GridSpec>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = format, default_value = "csv")]
    format: OutputFormat,
    /// Print the extrema of the surface.
    #[arg(long)]
    summary: bool,
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn family(s: &str) -> Result<SpinFamily, String> {
    s.parse().map_err(|e: spinboost::Error| e.to_string())
}

fn named_state(s: &str) -> Result<NamedState, String> {
    s.parse().map_err(|e: spinboost::Error| e.to_string())
}

fn partition(s: &str) -> Result<CanonicalPartition, String> {
    s.parse().map_err(|e: spinboost::Error| e.to_string())
}

fn grid(s: &str) -> Result<GridSpec, String> {
    s.parse().map_err(|e: spinboost::Error| e.to_string())
}

fn format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: spinboost::Error| e.to_string())
}

enum Failure {
    Usage(String),
    Runtime(String),
    Check,
}

impl From<spinboost::Error> for Failure {
    fn from(e: spinboost::Error) -> Self {
        use spinboost::Error::*;
        match e {
            Io(_) | Json(_) | Parse(_) => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn print_omega_if_derived(spec: &BoostSpec, omega: f64, out: &mut impl Write) -> io::Result<()> {
    if let BoostSpec::Rapidities { xi, eta } = spec {
        writeln!(out, "# omega = {omega:.17} (xi = {xi}, eta = {eta})")?;
    }
    Ok(())
}

fn print_extrema(report: &ExtremaReport, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "merge radius: {:.6}", report.merge_radius)?;
    if report.flat {
        writeln!(
            out,
            "flat surface: every point is both maximum and minimum (value {:.6e})",
            report.global_max
        )?;
    }
    for (label, list, value) in [
        ("maxima", &report.maxima, report.global_max),
        ("minima", &report.minima, report.global_min),
    ] {
        writeln!(out, "{label}: {} cluster(s), delta_e = {value:.12}", list.len())?;
        for e in list {
            writeln!(
                out,
                "  theta = {:.6}  phi = {:.6}  delta_e = {:.12}  points = {}",
                e.theta, e.phi, e.delta_e, e.cluster_size
            )?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::WignerAngle { xi, eta } => {
            writeln!(out, "{:.17}", wigner_angle(xi, eta)?)?;
        }
        Command::DeltaE(args) => {
            let spec = args.boost.spec()?;
            let omega = spec.omega()?;
            let spin = match args.state {
                Some(n) => SpinInput::Named(n),
                None => SpinInput::Params(SpinParams::new(
                    args.family.expect("clap requires family"),
                    args.theta.expect("clap requires theta"),
                    args.phi.expect("clap requires phi"),
                )),
            };
            let r = delta_e(
                &spin,
                &MomentumParams { alpha: args.alpha },
                omega,
                &args.partition.partition(),
            )?;
            if args.json {
                let s = serde_json::to_string_pretty(&r).map_err(|e| Failure::Runtime(e.to_string()))?;
                writeln!(out, "{s}")?;
            } else {
                print_omega_if_derived(&spec, omega, &mut out)?;
                writeln!(out, "partition {}", args.partition.name())?;
                writeln!(out, "omega     {omega:.17}")?;
                writeln!(out, "e_before  {:.17}", r.e_before)?;
                writeln!(out, "e_after   {:.17}", r.e_after)?;
                writeln!(out, "delta_e   {:.17}", r.delta)?;
            }
        }
        Command::Sweep(args) => {
            let spec = args.boost.spec()?;
            let mut config = SweepConfig::new(args.family, args.alpha, spec, args.partition);
            if let Some(g) = args.theta_grid {
                config.theta_grid = g;
            }
            if let Some(g) = args.phi_grid {
                config.phi_grid = g;
            }
            let result = run_sweep(&config)?;
            let text = render(&result, args.format)?;
            match &args.out {
                Some(path) => {
                    std::fs::write(path, text)
                        .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
                    print_omega_if_derived(&spec, result.omega, &mut out)?;
                }
                None => out.write_all(text.as_bytes())?,
            }
            if args.summary {
                let report = find_extrema(&result.surface, result.surface.default_merge_radius());
                // keep stdout a clean data stream when the grid goes there
                if args.out.is_some() {
                    print_extrema(&report, &mut out)?;
                } else {
                    print_extrema(&report, &mut io::stderr().lock())?;
                }
            }
        }
        Command::Extrema { input, merge_radius } => {
            let loaded = read_sweep(&input).map_err(|e| Failure::Runtime(format!("{}: {e}", input.display())))?;
            let surface = loaded.surface();
            let radius = merge_radius.unwrap_or_else(|| surface.default_merge_radius());
            if radius.is_nan() || radius < 0.0 {
                return Err(Failure::Usage(format!(
                    "merge radius must be non-negative, got {radius}"
                )));
            }
            print_extrema(&find_extrema(surface, radius), &mut out)?;
        }
        Command::Check { json } => {
            let report = check_suite().map_err(|e| Failure::Runtime(e.to_string()))?;
            if json {
                let s = serde_json::to_string_pretty(&report).map_err(|e| Failure::Runtime(e.to_string()))?;
                writeln!(out, "{s}")?;
            } else {
                write!(out, "{}", report.to_text())?;
            }
            if !report.passed {
                return Err(Failure::Check);
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
        Err(Failure::Check) => ExitCode::from(EXIT_CHECK),
    }
}

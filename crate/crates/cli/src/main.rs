//! `mlsi`: criterion constants, classifiers, oracles and concentration
//! bounds for measures on the line, with JSON reports and CSV curves.

mod commands;
mod error;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "mlsi", version, about = "Modified log-Sobolev inequalities on the real line")]
struct Cli {
    /// Relative slack used when comparing oracle values with brackets.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Grid or node count for oracles and sampled curves (command-specific default).
    #[arg(long, global = true)]
    grid_size: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write the command's curve or table here as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Measure arguments accept inline JSON (`{"family":"gaussian"}`) or a path
/// to a JSON file.
#[derive(Args, Debug)]
struct MeasureArgs {
    /// The measure μ.
    #[arg(long)]
    measure: String,
    /// The measure ν on the energy side; defaults to μ.
    #[arg(long)]
    nu: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct TargetArgs {
    /// Power modification H_q.
    #[arg(long)]
    q: Option<f64>,
    /// Young function Φ, modified into H_Φ.
    #[arg(long)]
    phi: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Muckenhoupt constant of the weighted Hardy inequality on [0, ∞).
    Hardy {
        /// Measure on the left-hand side (uniform, exponential or any measure family).
        #[arg(long)]
        mu: String,
        /// Weight on the derivative side; defaults to mu.
        #[arg(long)]
        nu: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Two-sided Poincaré bracket.
    Poincare(MeasureArgs),
    /// Two-sided log-Sobolev bracket.
    Logsobolev(MeasureArgs),
    /// Modified log-Sobolev inequalities.
    #[command(subcommand)]
    Mlsi(MlsiCommand),
    /// Brute-force estimates of the same constants.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Concentration bounds and their Monte Carlo check.
    #[command(subcommand)]
    Concentration(ConcentrationCommand),
    /// Runs the acceptance matrix and writes a summary table.
    Bench {
        #[arg(long, default_value = "bench-out")]
        out_dir: PathBuf,
        /// Fewer Monte Carlo draws and random test functions.
        #[arg(long)]
        quick: bool,
        /// Run only these checks (1-10); repeatable.
        #[arg(long)]
        only: Vec<u8>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Critq,
    CritphiSufficient,
    CritphiNecessary,
}

#[derive(Subcommand, Debug)]
enum MlsiCommand {
    /// B_q or C(Φ) with the resulting bracket on the best constant.
    Bounds {
        #[command(flatten)]
        measures: MeasureArgs,
        #[command(flatten)]
        target: TargetArgs,
        /// Window length for the drift certificate; defaults to the 0.95 quantile distance.
        #[arg(long)]
        window: Option<f64>,
    },
    /// Decides whether the inequality holds from the tail of the potential.
    Classify {
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        target: TargetArgs,
        /// Defaults to critq for --q and critphi-sufficient for --phi.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Orlicz gauge of 1/n along tail quantiles, with its explicit bound.
    GaugeCurve {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        window: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Best Poincaré ratio over piecewise-linear functions.
    Poincare {
        #[command(flatten)]
        measures: MeasureArgs,
        #[arg(long, default_value_t = 20_000)]
        max_iter: usize,
    },
    /// Best Hardy ratio with f(0) = 0.
    Hardy {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 20_000)]
        max_iter: usize,
    },
    /// Best entropy/energy ratio over a test-function family.
    Mlsi {
        #[command(flatten)]
        measures: MeasureArgs,
        #[command(flatten)]
        target: TargetArgs,
        /// random_smooth, paper_test_functions, indicator_ramps or perturbative.
        #[arg(long, default_value = "random_smooth")]
        family: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Direct minimisation of ∫Φ(g) dν subject to ∫g = a between the median and x.
    Beta {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
}

#[derive(Subcommand, Debug)]
enum ConcentrationCommand {
    /// Tail bound exp(-K ω*(2r/K)) and the enlargement constant.
    Bound {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        kappa: f64,
        /// Gradient budget Σ H(∂_i F) <= a.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 5.0)]
        r_max: f64,
    },
    /// Monte Carlo tail of a statistic of n independent coordinates.
    Simulate {
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Defaults to the certified upper bound for the measure.
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 5.0)]
        r_max: f64,
        /// linear (Σx_i/√n) or softmax.
        #[arg(long, default_value = "linear")]
        statistic: String,
    },
}

/// Global flags shared by every command.
pub struct Globals {
    pub tol: f64,
    pub grid_size: Option<usize>,
    pub seed: u64,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("MLSI_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("MLSI_THREADS must be a positive integer, got `{raw}`")))?;
    if n == 0 {
        return Err(CliError::Usage("MLSI_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    configure_threads()?;
    let g = Globals {
        tol: cli.tol,
        grid_size: cli.grid_size,
        seed: cli.seed,
    };
    use commands as c;
    let outcome = match cli.command {
        Command::Hardy { mu, nu, p } => c::hardy(&mu, nu.as_deref(), p)?,
        Command::Poincare(m) => c::poincare(&m.measure, m.nu.as_deref())?,
        Command::Logsobolev(m) => c::logsobolev(&m.measure, m.nu.as_deref())?,
        Command::Mlsi(MlsiCommand::Bounds { measures, target, window }) => {
            c::mlsi_bounds(&measures.measure, measures.nu.as_deref(), &target.into(), window)?
        }
        Command::Mlsi(MlsiCommand::Classify { measure, target, mode }) => {
            c::classify(&measure, &target.into(), mode.map(Into::into))?
        }
        Command::Mlsi(MlsiCommand::GaugeCurve { measure, phi, window }) => c::gauge_curve(&g, &measure, &phi, window)?,
        Command::Oracle(OracleCommand::Poincare { measures, max_iter }) => {
            c::oracle_poincare(&g, &measures.measure, measures.nu.as_deref(), max_iter)?
        }
        Command::Oracle(OracleCommand::Hardy { mu, nu, p, max_iter }) => c::oracle_hardy(&g, &mu, nu.as_deref(), p, max_iter)?,
        Command::Oracle(OracleCommand::Mlsi {
            measures,
            target,
            family,
            samples,
        }) => c::oracle_mlsi(&g, &measures.measure, measures.nu.as_deref(), &target.into(), &family, samples)?,
        Command::Oracle(OracleCommand::Beta { measure, phi, x, a }) => c::oracle_beta(&g, &measure, &phi, x, a)?,
        Command::Concentration(ConcentrationCommand::Bound { target, kappa, a, r_max }) => {
            c::concentration_bound(&g, &target.into(), kappa, a, r_max)?
        }
        Command::Concentration(ConcentrationCommand::Simulate {
            measure,
            target,
            n,
            kappa,
            samples,
            r_max,
            statistic,
        }) => c::concentration_simulate(&g, &measure, &target.into(), n, kappa, samples, r_max, &statistic)?,
        Command::Bench { out_dir, quick, only } => return c::bench(&g, &out_dir, quick, &only),
    };
    output::emit(&outcome, cli.json.as_ref(), cli.csv.as_ref())?;
    Ok(outcome.exit_code())
}

impl From<TargetArgs> for commands::Target {
    fn from(t: TargetArgs) -> Self {
        match (t.q, t.phi) {
            (Some(q), _) => commands::Target::Q(q),
            (None, Some(phi)) => commands::Target::Phi(phi),
            (None, None) => unreachable!("clap requires one of --q and --phi"),
        }
    }
}

impl From<Mode> for mlsi_core::mlsi::ClassifyMode {
    fn from(m: Mode) -> Self {
        use mlsi_core::mlsi::ClassifyMode as M;
        match m {
            Mode::Critq => M::Critq,
            Mode::CritphiSufficient => M::CritphiSufficient,
            Mode::CritphiNecessary => M::CritphiNecessary,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

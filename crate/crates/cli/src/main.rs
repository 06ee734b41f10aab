//! Experiment runner: reproduces the channel sweeps as deterministic CSV.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 on numerical
//! failures (failed rows are kept in the output as '#'-flagged comments).

mod config;
mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_config_file, Experiment, Overrides, SweepConfig};
use sweep::RunError;

#[derive(Parser)]
#[command(
    name = "relchan",
    version,
    about = "Holevo-bound sweeps for spin signals read by a boosted receiver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rest-frame bounds against the signal angle.
    Fig1(SweepArgs),
    /// Two-symbol bound against rapidity, per second-packet momentum.
    Fig2(SweepArgs),
    /// Four-symbol bound against rapidity, per angle.
    Fig3(SweepArgs),
    /// Two-symbol bound against the second packet's width at fixed boost.
    Fig4(SweepArgs),
    /// Non-CP witnesses against the angle, with the crossing angle bisected.
    Fig5(SweepArgs),
    /// Rapidity sweep of both encodings at explicit parameters.
    Custom(SweepArgs),
}

impl Command {
    fn split(&self) -> (Experiment, &SweepArgs) {
        match self {
            Command::Fig1(a) => (Experiment::Fig1, a),
            Command::Fig2(a) => (Experiment::Fig2, a),
            Command::Fig3(a) => (Experiment::Fig3, a),
            Command::Fig4(a) => (Experiment::Fig4, a),
            Command::Fig5(a) => (Experiment::Fig5, a),
            Command::Custom(a) => (Experiment::Custom, a),
        }
    }
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// Optional key=value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Width of the first packet.
    #[arg(long)]
    w0: Option<f64>,
    /// Width of the second packet.
    #[arg(long)]
    w1: Option<f64>,
    /// Mean momentum of the first packet.
    #[arg(long)]
    k0: Option<f64>,
    /// Mean momentum of the second packet.
    #[arg(long)]
    k1: Option<f64>,
    /// Spin angle of the second signal, radians.
    #[arg(long)]
    theta: Option<f64>,
    /// Probability of the first symbol.
    #[arg(long)]
    lambda: Option<f64>,
    /// Four-symbol probabilities a,b,c,d.
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// Single finite rapidity instead of a sweep.
    #[arg(long)]
    alpha: Option<f64>,
    /// Lower end of the rapidity ramp.
    #[arg(long)]
    alpha_min: Option<f64>,
    /// Upper end of the rapidity ramp.
    #[arg(long)]
    alpha_max: Option<f64>,
    /// Number of ramp points.
    #[arg(long)]
    alpha_steps: Option<usize>,
    /// Include the infinite-rapidity endpoint (default true).
    #[arg(long)]
    alpha_infinite: Option<bool>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Output path (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            w0: self.w0,
            w1: self.w1,
            k0: self.k0,
            k1: self.k1,
            theta: self.theta,
            lambda: self.lambda,
            lambdas: self.lambdas.clone(),
            alpha: self.alpha,
            alpha_min: self.alpha_min,
            alpha_max: self.alpha_max,
            alpha_steps: self.alpha_steps,
            alpha_infinite: self.alpha_infinite,
            tol: self.tol,
            out: self.out.clone(),
            ..Default::default()
        }
    }
}

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = cli.command.split();

    let file_overrides = match &args.config {
        None => Overrides::default(),
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("relchan: cannot read {}: {e}", path.display());
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            match parse_config_file(&text) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("relchan: {}: {e}", path.display());
                    return ExitCode::from(EXIT_CONFIG);
                }
            }
        }
    };
    let overrides = args.overrides().merged_over(file_overrides);

    let cfg = match SweepConfig::resolve(experiment, &overrides) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("relchan: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let (csv, code) = match sweep::run(&cfg) {
        Ok(csv) => (csv, ExitCode::SUCCESS),
        Err(RunError::Invalid(msg)) => {
            eprintln!("relchan: {msg}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(err @ RunError::Numerical { .. }) => {
            eprintln!("relchan: {err}");
            match err {
                RunError::Numerical { csv, .. } => (csv, ExitCode::from(EXIT_NUMERICAL)),
                RunError::Invalid(_) => unreachable!(),
            }
        }
    };

    match &cfg.out {
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(csv.as_bytes()).is_err() {
                return ExitCode::from(EXIT_NUMERICAL);
            }
        }
        Some(path) => {
            if let Err(e) = std::fs::write(path, &csv) {
                eprintln!("relchan: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        }
    }
    code
}

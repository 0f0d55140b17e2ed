#![allow(clippy::neg_cmp_op_on_partial_ord)]
mod compare;
mod config;
mod error;
mod figures;
mod output;
mod selfcheck;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{
    resolve_mc, resolve_spec, resolve_workers, CommonFlags, CompareFlags, ConfigFile,
    ExperimentConfig,
};
use error::CliError;
use selfcheck::{Context, Level};

/// Shot-noise stationary laws: simulation, analytic comparison and checks.
#[derive(Debug, Parser)]
#[command(name = "shotnoise", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw stationary samples and write them one per line.
    Simulate(SimulateArgs),
    /// Tabulate analytic density/CDF against Monte Carlo on a grid.
    Compare(CompareArgs),
    /// Run the cross-validation suite.
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, Args)]
struct LawArgs {
    /// Flat key=value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// EXPONENT,AMPLITUDE shorthand, e.g. gamma:1,laplace:2.
    #[arg(long)]
    spec: Option<String>,
    /// fixed:A or gamma:ALPHA.
    #[arg(long)]
    exponent: Option<String>,
    /// det, gamma:BETA or laplace:BETA.
    #[arg(long)]
    amplitude: Option<String>,
    /// Number of independent chains.
    #[arg(long)]
    samples: Option<usize>,
    /// Recurrence steps per chain.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: SHOTNOISE_WORKERS, else all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl From<LawArgs> for CommonFlags {
    fn from(a: LawArgs) -> Self {
        Self {
            config: a.config,
            spec: a.spec,
            exponent: a.exponent,
            amplitude: a.amplitude,
            samples: a.samples,
            steps: a.steps,
            seed: a.seed,
            workers: a.workers,
            out: a.out,
        }
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    law: LawArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    law: LawArgs,
    /// Preset comparison 1 to 9 (Gamma(1)-mixed exponent).
    #[arg(long)]
    figure: Option<u8>,
    /// lo:hi:n evaluation grid.
    #[arg(long)]
    grid: Option<String>,
    /// Histogram bin width for the Monte Carlo density.
    #[arg(long)]
    bin_width: Option<f64>,
    /// density, cdf or both.
    #[arg(long)]
    quantity: Option<String>,
    /// Tail CDF attachment: increasing or as-printed.
    #[arg(long)]
    tail_patch: Option<String>,
    /// Read Monte Carlo samples from a `simulate` file instead of sampling.
    #[arg(long)]
    samples_in: Option<PathBuf>,
    /// Also write the drawn samples to this file.
    #[arg(long)]
    samples_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SelfcheckArgs {
    /// quick (under a second) or full (about 20 s).
    #[arg(long, default_value = "quick")]
    level: String,
    #[arg(long)]
    workers: Option<usize>,
    /// Shift Euler's constant in the series coefficients by this amount
    /// (sensitivity check; any nonzero shift should fail).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    tamper_gamma: f64,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let flags = CommonFlags::from(args.law);
            let file = match &flags.config {
                Some(p) => ConfigFile::load(p)?,
                None => ConfigFile::default(),
            };
            let spec = resolve_spec(
                flags.spec.clone(),
                flags.exponent.clone(),
                flags.amplitude.clone(),
                &file,
            )?
            .ok_or_else(|| {
                CliError::Usage("simulate needs --spec or --exponent/--amplitude".into())
            })?;
            let mc = resolve_mc(&flags, &file)?;
            let out = config::layered(flags.out.clone(), &file, "out")?;
            compare::run_simulate(&spec, &mc, out.as_deref())
        }
        Command::Compare(args) => {
            let cfg = ExperimentConfig::resolve(CompareFlags {
                common: args.law.into(),
                figure: args.figure,
                grid: args.grid,
                bin_width: args.bin_width,
                quantity: args.quantity,
                tail_patch: args.tail_patch,
                samples_in: args.samples_in,
                samples_out: args.samples_out,
            })?;
            let summary = compare::run_compare(&cfg)?;
            if cfg.out.is_some() {
                eprint!("{}", summary.render());
            }
            Ok(())
        }
        Command::Selfcheck(args) => {
            let level: Level = args.level.parse()?;
            let ctx = Context {
                gamma_shift: args.tamper_gamma,
                workers: resolve_workers(args.workers, &ConfigFile::default())?,
            };
            let failures = selfcheck::run_selfcheck(level, &ctx, &mut std::io::stdout().lock())?;
            if failures > 0 {
                return Err(CliError::ChecksFailed(failures));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

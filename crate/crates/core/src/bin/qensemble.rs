use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qensemble::ensemble::Registry;
use qensemble::experiments::{
    clone_report, discrimination_curve, filter_experiment, flash_report, moments_experiment,
    ExperimentReport,
};
use qensemble::Error;

#[derive(Parser)]
#[command(
    name = "qensemble",
    version,
    about = "Quantum ensemble discrimination and cloning experiments"
)]
struct Cli {
    /// Register an ensemble definition (JSON); may be repeated.
    #[arg(long = "ensemble-file", value_name = "PATH", global = true)]
    ensemble_files: Vec<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and sampled collective Σ_z moments for a pair of ensembles.
    Moments {
        /// Two ensemble names separated by a comma.
        #[arg(long, value_delimiter = ',', num_args = 1, default_value = "E3,E4")]
        pair: Vec<String>,
        #[arg(long, default_value_t = 6)]
        m_max: usize,
        #[arg(long, default_value_t = 100_000)]
        mc_samples: usize,
        /// Composition size for E5/E6; defaults to the smallest even N ≥ m-max.
        #[arg(long)]
        n_total: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Count photons passing a |0⟩⟨0| filter over many trials.
    Filter {
        #[arg(long)]
        ensemble: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Success probability of the count-based discrimination as a function of N.
    Discriminate {
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Signaling check: Bob's clone state for Alice measuring σ_φ versus σ_3.
    Flash {
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 1,
            allow_hyphen_values = true,
            default_value = "0.2,0.785,1.3"
        )]
        phis: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Cloner shrinking factors, with Monte Carlo average fidelities if requested.
    Clone {
        /// Estimate the average fidelity over Haar-random inputs.
        #[arg(long)]
        fidelity: bool,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn run(cli: Cli) -> qensemble::Result<()> {
    let mut registry = Registry::default();
    for path in &cli.ensemble_files {
        registry.register_file(path)?;
    }
    let (report, output) = match cli.command {
        Command::Moments {
            pair,
            m_max,
            mc_samples,
            n_total,
            seed,
            output,
        } => {
            let [a, b] = <[String; 2]>::try_from(pair).map_err(|p| {
                Error::InvalidArgument(format!("--pair needs exactly two names, got {}", p.len()))
            })?;
            let n_total = n_total.unwrap_or(m_max + m_max % 2);
            let (ea, eb) = (registry.get(&a, n_total)?, registry.get(&b, n_total)?);
            (
                moments_experiment([(&a, &ea), (&b, &eb)], m_max, mc_samples, seed)?,
                output,
            )
        }
        Command::Filter {
            ensemble,
            n,
            trials,
            seed,
            output,
        } => {
            let e = registry.get(&ensemble, n)?;
            (filter_experiment(&e, &ensemble, n, trials, seed)?, output)
        }
        Command::Discriminate { n_max, output } => (discrimination_curve(n_max)?, output),
        Command::Flash { phis, output } => (flash_report(&phis)?, output),
        Command::Clone {
            fidelity,
            samples,
            seed,
            output,
        } => (
            clone_report(if fidelity { samples } else { 0 }, seed)?,
            output,
        ),
    };
    emit(&report, &output)
}

fn emit(report: &ExperimentReport, output: &Output) -> qensemble::Result<()> {
    let text = match output.format {
        Format::Json => report.to_canonical_json(),
        Format::Csv => report.to_csv(),
    };
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// 2 for bad input, 3 when a numerical invariant broke during the computation.
fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

mod analyze;
mod failure;
mod hypervolume;
mod optimize;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quakeopt::engine::SelectionMode;
use quakeopt::problem::{generate_network, save_network_spec};

use failure::{CliResult, OrInput};

#[derive(Parser)]
#[command(name = "quakeopt", version, about = "Seismic multiobjective optimizer for entanglement throughput allocation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic network spec.
    Generate {
        #[arg(long, default_value_t = 4)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        types: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Destination spec file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimize a spec and write the archive, run summary and magnitude trace.
    Optimize {
        #[arg(long)]
        spec: PathBuf,
        /// Engine config JSON; missing fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        selection: Option<Selection>,
        /// Comma-separated flattened throughput indices to search.
        #[arg(long, value_delimiter = ',')]
        active_dims: Option<Vec<usize>>,
        /// Overrides the generation cap.
        #[arg(long)]
        generations: Option<usize>,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Histogram, Gutenberg-Richter fit and Poisson check of a run's magnitude trace.
    Analyze {
        /// Directory holding `magnitudes.csv`.
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        gr_fit: bool,
        #[arg(long)]
        poisson_check: bool,
        #[arg(long, default_value_t = 10)]
        bins: usize,
        /// Regress on log10 of the bin midpoints.
        #[arg(long)]
        log_midpoints: bool,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = 1)]
        samples_per_iteration: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory; defaults to the run directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact hypervolume and per-point contributions of a 2-column front CSV.
    Hypervolume {
        #[arg(long)]
        front: PathBuf,
        /// Reference point, e.g. `4,4`.
        #[arg(
            long = "ref",
            value_delimiter = ',',
            num_args = 1,
            required = true,
            allow_hyphen_values = true
        )]
        reference: Vec<f64>,
        /// JSON destination; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Selection {
    Inverted,
    Literal,
}

impl From<Selection> for SelectionMode {
    fn from(s: Selection) -> Self {
        match s {
            Selection::Inverted => SelectionMode::Inverted,
            Selection::Literal => SelectionMode::Literal,
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Generate {
            nodes,
            types,
            seed,
            out,
        } => {
            if nodes == 0 || types == 0 {
                return Err(failure::Failure::input(anyhow::anyhow!(
                    "--nodes and --types must be at least 1"
                )));
            }
            let spec = generate_network(nodes, types, seed);
            save_network_spec(&spec, &out).or_input()?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Optimize {
            spec,
            config,
            seed,
            selection,
            active_dims,
            generations,
            out,
        } => optimize::run(optimize::Args {
            spec,
            config,
            seed,
            selection: selection.map(Into::into),
            active_dims,
            generations,
            out,
        }),
        Command::Analyze {
            run,
            gr_fit,
            poisson_check,
            bins,
            log_midpoints,
            iterations,
            samples_per_iteration,
            seed,
            out,
        } => analyze::run(analyze::Args {
            out: out.unwrap_or_else(|| run.clone()),
            run,
            gr_fit,
            poisson_check,
            bins,
            log_midpoints,
            iterations,
            samples_per_iteration,
            seed,
        }),
        Command::Hypervolume {
            front,
            reference,
            out,
        } => hypervolume::run(&front, &reference, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

#[derive(Parser, Debug)]
#[command(name = "evograph", version, about = "Variogram distances and kernels on time-evolving graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a graph document for structural problems.
    Validate {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Distances between named points.
    Distance {
        #[arg(long)]
        graph: PathBuf,
        /// e.g. `lambda=0.6,alpha=1` or `rho=0.45,beta=1`
        #[arg(long)]
        params: String,
        #[arg(long)]
        points: PathBuf,
        /// Comma separated `name:name` pairs; all pairs when omitted.
        #[arg(long)]
        pairs: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kernel Gram matrix over the points, with a definiteness footer.
    Gram {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        params: String,
        /// e.g. `exponential:alpha=1,beta=1` or `dagum:alpha=1,beta=2,xi=0.5`
        #[arg(long)]
        family: String,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a temporal correlation model.
    Kt {
        #[arg(long, value_enum)]
        variant: KtVariant,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        /// Comma separated layers, e.g. `3,0,1`.
        #[arg(long)]
        lifespan: Option<String>,
        /// Largest lag listed for the AR(1) model.
        #[arg(long, default_value_t = 10)]
        max_lag: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw realisations of the field at the points.
    Sample {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        params: String,
        #[arg(long)]
        points: PathBuf,
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the tables of a worked example as CSV files.
    Figure {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: PathBuf,
        /// Also allow development-only tables.
        #[arg(long)]
        dev: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KtVariant {
    Ar1,
    Circulant,
    BlockAr1,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { graph } => commands::validate(&graph),
        Command::Distance {
            graph,
            params,
            points,
            pairs,
            out,
        } => commands::distance(&graph, &params, &points, pairs.as_deref(), out.as_deref()),
        Command::Gram {
            graph,
            params,
            family,
            points,
            out,
        } => commands::gram(&graph, &params, &family, &points, out.as_deref()),
        Command::Kt {
            variant,
            lambda,
            rho,
            m,
            lifespan,
            max_lag,
            out,
        } => commands::kt(
            match variant {
                KtVariant::Ar1 => commands::Kt::Ar1,
                KtVariant::Circulant => commands::Kt::Circulant,
                KtVariant::BlockAr1 => commands::Kt::BlockAr1,
            },
            lambda,
            rho,
            m,
            lifespan.as_deref(),
            max_lag,
            out.as_deref(),
        ),
        Command::Sample {
            graph,
            params,
            points,
            n,
            seed,
            out,
        } => commands::sample(&graph, &params, &points, n, seed, out.as_deref()),
        Command::Figure { name, out, dev } => commands::figure(&name, &out, dev),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

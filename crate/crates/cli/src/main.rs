use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Parser)]
#[command(
    name = "perigraph",
    version,
    about = "Minimal forms and band spectra of periodic graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Grid points per torus dimension (even)
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Write CSV or graph output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Bands narrower than this are reported flat
    #[arg(long, default_value_t = 1e-9)]
    pub flat_tol: f64,
    /// Seed for random directions in effective-form sweeps
    #[arg(long)]
    pub seed: Option<u64>,
    /// Maximum number of spanning trees to search
    #[arg(long, default_value_t = perigraph_core::DEFAULT_TREE_CAP)]
    pub cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Connectivity, Betti number and flux surjectivity
    Validate { file: PathBuf },
    /// Minimal form and the invariant I
    Invariant {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalues at every grid point as CSV
    Bands {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Band summary, measure and the 4I bound
    Spectrum {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Band localization through the minimal form, with estimates
    Localize {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Dirichlet bracketing of the Laplacian bands
    Dirichlet {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Effective mass tensor at the bottom of the spectrum
    Effmass {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Periodic graph from a finite graph whose edge values are a form
    Construct {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a standard graph
    Make {
        #[command(subcommand)]
        which: MakeCommand,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum MakeCommand {
    Lattice { d: usize },
    Triangular,
    Hexagonal,
    Kagome,
    Decorated { d: usize, g1: PathBuf, glue: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Invariant { file, common } => commands::invariant(&file, &common),
        Command::Bands { file, common } => commands::bands(&file, &common),
        Command::Spectrum { file, common } => commands::spectrum(&file, &common),
        Command::Localize { file, common } => commands::localize(&file, &common),
        Command::Dirichlet { file, common } => commands::dirichlet(&file, &common),
        Command::Effmass { file, common } => commands::effmass(&file, &common),
        Command::Construct { file, common } => commands::construct(&file, &common),
        Command::Make { which, out } => commands::make(&which, out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ample_core::Error;

#[derive(Parser, Debug)]
#[command(name = "ample", version, about = "Finite-scale certificates for ample groupoids")]
struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Groupoid spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Override the truncation depth of the spec.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Directory for report files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the groupoid, check its axioms and write the arrow table.
    Build(Common),
    /// Growth function table and order estimate.
    Growth {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// Orbital balls against Cayley balls.
    Orbital {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        /// Base point; all points when omitted.
        #[arg(long)]
        point: Option<String>,
    },
    /// Følner index for a rational threshold.
    Folner {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 16)]
        nmax: u32,
        /// Threshold ε in `sup |K·B(n)x|/|B(n)x| < 1 + ε`.
        #[arg(long, default_value = "1/5")]
        threshold: String,
    },
    /// Fiber-normalized ball densities as amenability certificates.
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        nmax: u32,
        /// Threshold ε for deficit and displacement.
        #[arg(long, default_value = "1")]
        threshold: String,
    },
    /// Invariant measures, invariance defects and Banach densities.
    MeasureCheck {
        #[command(flatten)]
        common: Common,
        /// Measure file to test for invariance.
        #[arg(long)]
        measure: Option<PathBuf>,
        /// Clopen set whose Banach densities are reported.
        #[arg(long)]
        set: Option<String>,
        #[arg(long, default_value_t = 4)]
        nmax: u32,
    },
    /// Produce and self-verify a subequivalence witness for A and B.
    Compare(commands::CompareArgs),
    /// Verify a witness file against a groupoid.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        witness: PathBuf,
    },
    /// I-norm and reduced norm of a groupoid function.
    Norms {
        #[command(flatten)]
        common: Common,
        /// Function file (arrow id -> [re, im]).
        #[arg(long)]
        function: Option<PathBuf>,
        /// Built-in function when no file is given: units, all or generators.
        #[arg(long, default_value = "all")]
        indicator: String,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Rejected(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Rejected(_) => 4,
            CliError::Core(e) => match e {
                Error::Spec(_) | Error::Usage(_) | Error::Validation(_) => 2,
                Error::Precondition(_)
                | Error::Generation(_)
                | Error::Domain(_)
                | Error::Estimation(_)
                | Error::SearchExhausted(_) => 3,
                Error::InvariantViolation(_) | Error::Numeric(_) => 4,
                Error::Resource(_) => 5,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Rejected(e) => write!(f, "witness rejected: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Build(common) => commands::build(&common),
        Command::Growth { common, nmax } => commands::growth(&common, nmax),
        Command::Orbital { common, nmax, point } => commands::orbital(&common, nmax, point.as_deref()),
        Command::Folner { common, nmax, threshold } => commands::folner(&common, nmax, &threshold),
        Command::Density { common, nmax, threshold } => commands::density(&common, nmax, &threshold),
        Command::MeasureCheck { common, measure, set, nmax } => {
            commands::measure_check(&common, measure.as_deref(), set.as_deref(), nmax)
        }
        Command::Compare(args) => commands::compare(&args),
        Command::Verify { common, witness } => commands::verify(&common, &witness),
        Command::Norms { common, function, indicator, tolerance } => {
            commands::norms(&common, function.as_deref(), &indicator, tolerance)
        }
    };
    match result {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

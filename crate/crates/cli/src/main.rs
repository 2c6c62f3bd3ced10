mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "cmap", version, about = "Consistent maps on places of Q and quadratic fields")]
pub struct Cli {
    /// Tolerance for float comparisons and rational detection.
    #[arg(long, global = true, env = "CMAP_TOL", default_value_t = 1e-9)]
    pub tol: f64,

    /// Largest denominator accepted by rational detection.
    #[arg(long = "max-den", global = true, env = "CMAP_MAX_DEN", default_value_t = 1_000_000)]
    pub max_den: u64,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Primes up to this bound are examined.
    #[arg(long, global = true, default_value_t = 100)]
    pub bound: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Discriminant, torsion, fundamental unit and regulator of Q(sqrt(d)).
    FieldInfo {
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// How the prime p splits in Q(sqrt(d)).
    Split {
        #[arg(allow_hyphen_values = true)]
        d: i64,
        p: u64,
    },
    /// Fundamental unit of a real quadratic field.
    Unit {
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// Generators of the prime ideals over p.
    Generator {
        #[arg(allow_hyphen_values = true)]
        d: i64,
        p: u64,
    },
    /// Evaluate Phi_c(alpha^pow) for a map given as JSON, a file, `-` for stdin, or a name.
    EvalPhi {
        /// `-`, a file, inline JSON, or one of lambda, omega, psi, log, sqrt2_example.
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long = "pow", default_value = "1", allow_hyphen_values = true)]
        pow: String,
        /// Field for a rational alpha.
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
    },
    /// Print the consistent map extending an additive function.
    Extend {
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Evaluate the extension of an additive function at alpha.
    ExtendEval {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long = "pow", default_value = "1", allow_hyphen_values = true)]
        pow: String,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
    },
    /// Run a check suite; exits 1 and names the first violation on failure.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        d: i64,
    },
    /// The rational-valued map on Q(sqrt(2)) tabulated at split primes.
    Sqrt2Table,
    /// Build the consistent map realizing a functional spec.
    BuildFunctional {
        /// Spec JSON file, or `-` for stdin.
        #[arg(long)]
        spec: PathBuf,
    },
    /// Write an S-unit as root of unity times unit and prime generator powers.
    Decompose {
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Bounded check that y gives a rational-valued functional.
    Krational {
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        d: i64,
        /// JSON file `{"arch": [..], "nonarch": {..}}`, or `-` for stdin.
        #[arg(long)]
        y: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Omega,
    Psi,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    ProductFormula,
    Consistency,
    Kernel,
    Extensions,
    LocalGlobal,
}

/// Failures that end the run with exit code 2.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(cmap_core::Error),
}

impl From<cmap_core::Error> for Failure {
    fn from(e: cmap_core::Error) -> Self {
        Failure::Domain(e)
    }
}

fn validate(cli: &Cli) -> Result<(), Failure> {
    if !(cli.tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    if cli.bound < 2 {
        return Err(Failure::Usage(format!("--bound must be at least 2, got {}", cli.bound)));
    }
    if cli.max_den < 2 {
        return Err(Failure::Usage(format!("--max-den must be at least 2, got {}", cli.max_den)));
    }
    Ok(())
}

/// Name of the subcommand in `args`, if any.
fn subcommand_in(args: &[String]) -> Option<String> {
    let cmd = Cli::command();
    args.iter()
        .skip(1)
        .find(|a| cmd.find_subcommand(a.as_str()).is_some())
        .cloned()
}

fn print_help_for(args: &[String]) {
    let mut cmd = Cli::command();
    cmd.build();
    let help = match subcommand_in(args) {
        Some(name) => cmd.find_subcommand_mut(&name).expect("found above").render_help(),
        None => cmd.render_help(),
    };
    eprintln!("\n{help}");
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            if e.kind() != ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                print_help_for(&args);
            }
            return ExitCode::from(2);
        }
    };
    match validate(&cli).and_then(|()| commands::run(&cli)) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            print_help_for(&args);
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

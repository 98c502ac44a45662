//! `gptc`: command-line front end for measurement compatibility in GPTs.
//!
//! Exit codes: 0 success, 1 mismatch in `reproduce`, 2 unusable input
//! (parse errors, invalid models or measurements, unsupported operations),
//! 3 numerical failure.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand};
use report::Format;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "gptc", version, about = "Measurement compatibility in general probabilistic theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Model: a JSON file, `-` for stdin, or a built-in `classical:d`,
    /// `hypercube:n`, `crosspolytope:n`, `ball:n`.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Measurement family JSON file (`-` for stdin).
    #[arg(long, global = true)]
    pub measurements: Option<String>,
    /// Feasibility tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Bisection resolution for compatibility degrees.
    #[arg(long = "bisect-tol", global = true, default_value_t = 1e-6)]
    pub bisect_tol: f64,
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Evaluation budget of randomized searches.
    #[arg(long, global = true, default_value_t = 2000)]
    pub budget: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Solve linear programs in exact rational arithmetic.
    #[arg(long, global = true)]
    pub exact: bool,
    /// Simplex pivot budget per linear program; exhausting it is a numerical failure.
    #[arg(long = "max-pivots", global = true, default_value_t = 200_000)]
    pub max_pivots: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a model and, optionally, a measurement family.
    Validate,
    /// Decide compatibility of a measurement family.
    Compat {
        /// Decision procedure.
        #[arg(long, value_enum, default_value_t = commands::Route::All)]
        route: commands::Route,
    },
    /// Compatibility degree of a family, or bounds for a model.
    Gamma {
        /// Outcome counts for a model-level degree, e.g. `2,2,2`.
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<usize>>,
    },
    /// Compatibility-region membership of noise points.
    Region {
        /// A noise point, e.g. `0.5,0.5`.
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<f64>>,
        /// Evaluate a uniform grid with this many steps per axis instead.
        #[arg(long)]
        grid: Option<usize>,
        /// Number of measurements for a model-level region.
        #[arg(long)]
        g: Option<usize>,
    },
    /// ρ-norm of a dichotomic family's effect tensor (both programs).
    Rho,
    /// Incompatibility witness for a family, or a sampled witness check.
    Witness {
        /// Witnesses to sample when the family is compatible.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Recompute the closed-form reference values and compare.
    Reproduce,
    /// Tabulate f(g) or h(n) for plotting.
    Curve {
        /// Which curve.
        #[arg(value_enum)]
        which: commands::Curve,
        /// Largest argument.
        #[arg(long, default_value_t = 20)]
        max: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let result = match &cli.command {
        Command::Validate => commands::validate(c),
        Command::Compat { route } => commands::compat(c, *route),
        Command::Gamma { k } => commands::gamma(c, k.as_deref()),
        Command::Region { s, grid, g } => commands::region(c, s.as_deref(), *grid, *g),
        Command::Rho => commands::rho(c),
        Command::Witness { samples } => commands::witness(c, *samples),
        Command::Reproduce => commands::reproduce(c),
        Command::Curve { which, max } => commands::curve(*which, *max),
    };
    match result {
        Ok(out) => {
            print!("{}", report::render(&out.report, c.format));
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("gptc: {e}");
            ExitCode::from(e.code())
        }
    }
}

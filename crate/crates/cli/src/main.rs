use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cnp_cli::commands::{self, BodyArgs, XChoice};
use cnp_cli::problem::parse_complex;
use cnp_cli::{CliError, Report, Status};
use cnp_core::feasibility::GridOptions;
use cnp_core::{Complex64, ToleranceConfig};

/// Constrained Nevanlinna-Pick interpolation toolkit.
///
/// Exit status: 0 feasible / pass, 1 infeasible / witness / failed check,
/// 2 undetermined, 64 bad input, 70 numeric failure.
#[derive(Parser, Debug)]
#[command(name = "cnp", version)]
struct Cli {
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// PSD tolerance; overrides CNP_TOL and the problem file.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide solvability by searching for a parameter X with P_X PSD.
    Check {
        input: PathBuf,
        /// Polar grid resolution for scalar searches.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Zoom refinement passes.
        #[arg(long, default_value_t = 2)]
        refine: usize,
    },
    /// Scan the kernel family for a certificate of infeasibility.
    Witness {
        input: PathBuf,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Interpolation body at z0 for one-point scalar data.
    Body {
        input: PathBuf,
        /// Evaluation point as re,im.
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        z0: Complex64,
        #[arg(long, default_value_t = 20)]
        xres: usize,
        #[arg(long, default_value_t = 41)]
        wres: usize,
        /// Directory for disks.csv and membership.csv.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Construct an interpolant and write it as a chain file.
    Solve {
        input: PathBuf,
        /// `auto` or a parameter value re,im.
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a chain file against a problem.
    Verify { chain: PathBuf, input: PathBuf },
    /// Jet matrices and Stein solutions for a Blaschke product file.
    Stein {
        blaschke: PathBuf,
        /// A node for the cross Stein equation as re,im; repeat for more.
        #[arg(long = "node", value_parser = complex_arg, allow_hyphen_values = true)]
        nodes: Vec<Complex64>,
        /// Block size.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

fn complex_arg(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let env = std::env::var("CNP_TOL").ok();
    let load = |p: &PathBuf| commands::load_problem(p, env.as_deref(), cli.tol);
    match &cli.command {
        Command::Check { input, grid, refine } => {
            let opts = GridOptions {
                resolution: *grid,
                refine: *refine,
                ..GridOptions::default()
            };
            commands::check(&load(input)?, &opts)
        }
        Command::Witness { input, samples, seed } => commands::witness(&load(input)?, *samples, *seed),
        Command::Body {
            input,
            z0,
            xres,
            wres,
            csv,
        } => commands::body(
            &load(input)?,
            &BodyArgs {
                z0: *z0,
                x_resolution: *xres,
                w_resolution: *wres,
                csv: csv.clone(),
            },
        ),
        Command::Solve { input, x, out } => {
            let choice = if x == "auto" {
                XChoice::Auto
            } else {
                XChoice::Fixed(parse_complex(x)?)
            };
            commands::solve(&load(input)?, choice, &GridOptions::default(), out.as_deref())
        }
        Command::Verify { chain, input } => commands::verify(&load(input)?, chain),
        Command::Stein { blaschke, nodes, k } => {
            let tol = cnp_cli::problem::resolve_tolerances(ToleranceConfig::default(), env.as_deref(), cli.tol)?;
            commands::stein(blaschke, nodes, *k, &tol)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage.code() as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("report serializes"));
            } else {
                println!("{}", r.text);
            }
            ExitCode::from(r.status.code() as u8)
        }
        Err(e) => {
            eprintln!("cnp: {e}");
            ExitCode::from(e.status().code() as u8)
        }
    }
}

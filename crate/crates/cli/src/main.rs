use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use pgsor_cli::commands::DEFAULT_GRID_CAP;
use pgsor_cli::{
    cmd_bench, cmd_gen, cmd_params, cmd_solve, cmd_verify, write_rows, BenchMethod, BenchRow, BenchSpec, SolveSpec,
    UsageError,
};
use pgsor_core::{ExampleId, ProblemConfig};

#[derive(Parser)]
#[command(name = "pgsor", version, about = "GSOR, PGSOR and MHSS for complex symmetric systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the spectrum and print optimal parameters.
    Params {
        #[arg(long)]
        example: ExampleId,
        #[arg(long)]
        m: usize,
        /// Also write the parameter rows as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one solver on one example.
    Solve {
        #[arg(long)]
        example: ExampleId,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        method: BenchMethod,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every combination of examples, grids and methods and write CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        example: Vec<ExampleId>,
        #[arg(long, value_delimiter = ',', default_value = "16,32")]
        m: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "gsor,pgsor,pgsor-approx,mhss")]
        method: Vec<BenchMethod>,
        /// MHSS alpha for grids without a built-in value.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_CAP)]
        max_m: usize,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the spectral and equivalence properties on random instances.
    Verify {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Export W, T, p and q as Matrix Market files.
    Gen {
        #[arg(long)]
        example: ExampleId,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn emit_rows(rows: &[BenchRow], out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_rows(rows, BufWriter::new(file))?;
        }
        None => write_rows(rows, io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Params { example, m, out } => {
            let report = cmd_params(&ProblemConfig::new(example, m))?;
            print!("{}", report.render());
            if let Some(path) = out {
                emit_rows(&report.rows(), Some(&path))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            example,
            m,
            method,
            alpha,
            omega,
            tol,
            max_iter,
            out,
        } => {
            let spec = SolveSpec {
                method,
                alpha,
                omega,
                tol,
                max_iter,
            };
            let row = cmd_solve(&ProblemConfig::new(example, m), &spec)?;
            emit_rows(std::slice::from_ref(&row), out.as_ref())?;
            if row.converged {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("not converged after {} iterations", row.iterations);
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Bench {
            example,
            m,
            method,
            alpha,
            tol,
            max_iter,
            max_m,
            out,
        } => {
            let spec = BenchSpec {
                tol,
                max_iter,
                mhss_alpha: alpha,
                grid_cap: max_m,
                ..BenchSpec::new(example, m, method)
            };
            let rows = cmd_bench(&spec)?;
            emit_rows(&rows, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { seed, trials } => {
            let report = cmd_verify(seed, trials)?;
            print!("{report}");
            io::stdout().flush()?;
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Gen { example, m, out } => {
            let prob = cmd_gen(&ProblemConfig::new(example, m), &out)?;
            println!("wrote n={} instance to {}", prob.dim(), out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

//! Front end for generating CT test problems and running the primal-dual
//! reconstructions on them.

pub mod bundle;
pub mod cli;
pub mod commands;
pub mod config;

use cli::{Cli, Command};

/// Exit status when a solve stops at `max_iter` without `--allow-max-iter`.
pub const EXIT_NOT_CONVERGED: i32 = 2;

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Phantom { n, out } => commands::phantom(n, &out).map(|_| 0),
        Command::Simulate { run } => {
            let config = run.resolve()?;
            commands::simulate(&config, &run.out).map(|_| 0)
        }
        Command::Solve {
            run,
            bundle,
            allow_max_iter,
        } => {
            let mut config = run.resolve()?;
            if bundle.is_some() {
                config.io.bundle = bundle;
            }
            let outcome = commands::solve_to(&config, &run.out)?;
            Ok(if outcome.result.converged || allow_max_iter {
                0
            } else {
                eprintln!(
                    "not converged after {} iterations; pass --allow-max-iter to accept",
                    outcome.result.iterations
                );
                EXIT_NOT_CONVERGED
            })
        }
        Command::Eval {
            truth,
            rec,
            snr_literal,
        } => commands::eval(&truth, &rec, snr_literal).map(|_| 0),
    }
}

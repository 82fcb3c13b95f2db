//! Command-line front end for the scale-function library.
//!
//! Data goes to the output stream as CSV or JSON; diagnostics go to the
//! error stream. Exit codes: 0 success, 1 bad input or library error, 2 a
//! verification check failed.

pub mod args;
mod commands;

use std::io::Write;

use thiserror::Error;

pub use args::{Format, Grid, Invocation, SEED_VAR, SUBCOMMANDS};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] levy_scale::Error),
}

/// What a successful command reports back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
}

pub const USAGE: &str = "\
usage: scalefn <subcommand> [key=value ...]

subcommands:
  list                      families and their parameter keys
  eval      family=... [grid=start:stop:points] [columns=W,Wprime,Wstar,Wstarprime,psi,phi]
  verify    family=... [x_grid=0.5,1,2] [theta_grid=0.5,1,2,5] [tol_laplace= tol_inversion= tol_convolution= tol_shape=]
  exit      family=... a=<level> [grid=...]
  ruin      family=... [grid=...]
  simulate  family=... x=<start> a=<level> [paths= seed= time_step= horizon= z_max=3]
  conjugate family=... [grid=...]
  tilt      family=... by=<beta> [grid=...]

common keys: format=csv|json, config=<file of key=value lines>
family modifiers: tilt=<beta> conjugate=true drift_negative=<beta>
environment: SCALEFN_SEED sets the default seed for simulate
";

/// Runs one command line. Output is buffered so that a failing command
/// writes nothing to `out`.
pub fn run(args: &[String], env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = Invocation::parse(args, |p| std::fs::read_to_string(p)).and_then(|inv| {
        let mut buf = String::new();
        let status = commands::dispatch(&inv, env_seed, &mut buf)?;
        Ok((buf, status))
    });
    match result {
        Ok((buf, status)) => {
            if out.write_all(buf.as_bytes()).and_then(|_| out.flush()).is_err() {
                return 1;
            }
            match status {
                Status::Ok => 0,
                Status::CheckFailed => {
                    let _ = writeln!(err, "verification failed");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, CliError::Usage(_)) {
                let _ = write!(err, "{USAGE}");
            }
            1
        }
    }
}

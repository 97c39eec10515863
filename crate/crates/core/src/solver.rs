//! Process-based bridge to an external SMT solver.
//!
//! The script is written to the solver's standard input, which is then
//! closed; the first non-empty line of standard output is the answer.

use std::fmt;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::smtlib::{print_script, Script};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverAnswer {
    Sat,
    Unsat,
    Unknown,
    Error,
}

impl fmt::Display for SolverAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverAnswer::Sat => "sat",
            SolverAnswer::Unsat => "unsat",
            SolverAnswer::Unknown => "unknown",
            SolverAnswer::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolverVerdict {
    pub answer: SolverAnswer,
    /// Standard output, followed by standard error when the answer is
    /// `error`.
    pub raw_output: String,
    pub elapsed: Duration,
    pub timed_out: bool,
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("empty solver command")]
    EmptyCommand,
    #[error("cannot start solver `{program}`: {source}")]
    Spawn {
        program: String,
        source: std::io::Error,
    },
    #[error("solver i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Program plus arguments, e.g. `z3 -in -smt2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverCommand {
    pub program: String,
    pub args: Vec<String>,
}

impl SolverCommand {
    /// Splits on whitespace; no shell quoting.
    pub fn parse(command: &str) -> Result<Self, SolverError> {
        let mut parts = command.split_whitespace().map(str::to_string);
        let program = parts.next().ok_or(SolverError::EmptyCommand)?;
        Ok(SolverCommand {
            program,
            args: parts.collect(),
        })
    }
}

/// Reads the answer from the first non-empty output line.
pub fn parse_answer(stdout: &str) -> SolverAnswer {
    match stdout.lines().map(str::trim).find(|l| !l.is_empty()) {
        Some("sat") => SolverAnswer::Sat,
        Some("unsat") => SolverAnswer::Unsat,
        Some("unknown") => SolverAnswer::Unknown,
        _ => SolverAnswer::Error,
    }
}

/// Sends `script` (with `(check-sat)` added if absent) to the solver.
pub fn solve(script: &Script, cmd: &SolverCommand, timeout: Duration) -> Result<SolverVerdict, SolverError> {
    let mut s = script.clone();
    s.check_sat = true;
    run_solver(&print_script(&s), cmd, timeout)
}

pub fn run_solver(input: &str, cmd: &SolverCommand, timeout: Duration) -> Result<SolverVerdict, SolverError> {
    let start = Instant::now();
    let mut child = Command::new(&cmd.program)
        .args(&cmd.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| SolverError::Spawn {
            program: cmd.program.clone(),
            source,
        })?;

    let mut stdin = child.stdin.take().expect("piped stdin");
    let input = input.to_string();
    // a solver may exit without draining its input; never joined
    thread::spawn(move || {
        let _ = stdin.write_all(input.as_bytes());
    });
    let out_reader = read_all(child.stdout.take().expect("piped stdout"));
    let err_reader = read_all(child.stderr.take().expect("piped stderr"));

    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if start.elapsed() >= timeout {
            let _ = child.kill();
            let _ = child.wait();
            // descendants may still hold the pipes open, so the readers
            // are left to finish on their own
            return Ok(SolverVerdict {
                answer: SolverAnswer::Unknown,
                raw_output: String::new(),
                elapsed: timeout,
                timed_out: true,
            });
        }
        thread::sleep(Duration::from_millis(2).min(timeout));
    };
    let elapsed = start.elapsed();
    let out = out_reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();

    let answer = parse_answer(&out);
    if !status.success() {
        log::debug!("solver exited with {status}");
    }
    let raw_output = if answer == SolverAnswer::Error {
        format!("{out}{err}")
    } else {
        out
    };
    Ok(SolverVerdict {
        answer,
        raw_output,
        elapsed,
        timed_out: false,
    })
}

fn read_all(mut r: impl Read + Send + 'static) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut s = String::new();
        let _ = r.read_to_string(&mut s);
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn answers() {
        assert_eq!(parse_answer("\nsat\n(model)"), SolverAnswer::Sat);
        assert_eq!(parse_answer("unsat"), SolverAnswer::Unsat);
        assert_eq!(parse_answer("  unknown  "), SolverAnswer::Unknown);
        assert_eq!(parse_answer("(error \"boom\")"), SolverAnswer::Error);
        assert_eq!(parse_answer(""), SolverAnswer::Error);
    }

    #[test]
    fn command_splitting() {
        let c = SolverCommand::parse(" z3  -in -smt2 ").unwrap();
        assert_eq!(c.program, "z3");
        assert_eq!(c.args, ["-in", "-smt2"]);
        assert!(matches!(SolverCommand::parse("  "), Err(SolverError::EmptyCommand)));
    }

    #[test]
    fn spawn_failure() {
        let c = SolverCommand::parse("/nonexistent/solver").unwrap();
        assert!(matches!(
            run_solver("(check-sat)", &c, DEFAULT_TIMEOUT),
            Err(SolverError::Spawn { .. })
        ));
    }
}

//! `nradiv` — classify, scan, transform and solve SMT-LIB2 scripts with
//! real division.
//!
//! Exit codes: `classify` returns 0/1/2 for PolynomialOnly /
//! ConstantDivisionOnly / NonConstantDivision; everything else returns 0 on
//! success. Errors: 64 usage, 65 bad input (parse, sort or pass
//! precondition), 66 unreadable input, 69 solver could not be started,
//! 70 internal error or unusable solver response.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use nradiv::analysis::{classify_script, VerdictLabel};
use nradiv::encoder::{encode, EncodingMode, IntFormula};
use nradiv::eval::{brute_force_int_sat, Assignment, DivInterpretation, DEFAULT_SEARCH_BUDGET};
use nradiv::passes::{lift_to_uf, totalize_with_warnings, TotalizeConfig, TotalizeStyle};
use nradiv::report::scan_directory;
use nradiv::solver::{solve, SolverAnswer, SolverCommand, SolverError, DEFAULT_TIMEOUT};
use nradiv::{parse_script, print_script, Rational, Script};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_NOINPUT: u8 = 66;
const EX_UNAVAILABLE: u8 = 69;
const EX_SOFTWARE: u8 = 70;

#[derive(Parser)]
#[command(name = "nradiv", version, about = "Division analysis and rewriting for SMT-LIB2 real arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every real division and the script's fragment.
    Classify {
        path: PathBuf,
        /// Print the verdict as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Classify every *.smt2 file under a directory into a JSON report.
    Scan {
        directory: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Apply a rewrite pass or the integer encoding.
    Transform {
        path: PathBuf,
        #[arg(long, value_enum)]
        pass: Pass,
        /// Value of `t/0` (totalize).
        #[arg(long, allow_hyphen_values = true)]
        div0_value: Option<Rational>,
        /// Guard style (totalize).
        #[arg(long, value_enum)]
        style: Option<Style>,
        /// Constant-fold the result (totalize).
        #[arg(long)]
        fold: bool,
        /// Search [-BOUND, BOUND]^n for an integer witness and check it
        /// against the encoding (encode-*).
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run an external solver on a script.
    Solve {
        path: PathBuf,
        /// Solver command line, e.g. "z3 -in".
        #[arg(long)]
        solver: String,
        /// Seconds (fractions allowed).
        #[arg(long)]
        timeout: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Pass {
    Totalize,
    UfLift,
    EncodeUf,
    EncodeDiv0,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Branch,
    Fresh,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EX_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Classify { path, json } => classify(&path, json),
        Command::Scan { directory, output } => scan(&directory, output.as_deref()),
        Command::Transform {
            path,
            pass,
            div0_value,
            style,
            fold,
            bound,
            output,
        } => transform(&path, pass, div0_value, style, fold, bound, output.as_deref()),
        Command::Solve {
            path,
            solver,
            timeout,
        } => solve_cmd(&path, &solver, timeout),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("nradiv: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_script(path: &Path) -> Result<Script, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EX_NOINPUT, format!("cannot read {}: {e}", path.display())))?;
    parse_script(&text).map_err(|e| Failure::new(EX_DATAERR, format!("{}:{e}", path.display())))
}

fn write_output(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::new(EX_SOFTWARE, format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(EX_SOFTWARE, format!("cannot write output: {e}"))),
    }
}

fn verdict_code(label: VerdictLabel) -> u8 {
    match label {
        VerdictLabel::PolynomialOnly => 0,
        VerdictLabel::ConstantDivisionOnly => 1,
        VerdictLabel::NonConstantDivision => 2,
    }
}

fn classify(path: &Path, json: bool) -> CmdResult {
    let script = read_script(path)?;
    let verdict = classify_script(&script);
    if json {
        let text = serde_json::to_string_pretty(&verdict)
            .map_err(|e| Failure::new(EX_SOFTWARE, e.to_string()))?;
        println!("{text}");
    } else {
        println!("{}", verdict.label);
        for o in &verdict.occurrences {
            let q = if o.under_quantifier { " (under quantifier)" } else { "" };
            println!("  {}: {}{q}", o.location, o.divisor_class);
        }
    }
    Ok(verdict_code(verdict.label))
}

fn scan(dir: &Path, output: Option<&Path>) -> CmdResult {
    let report = scan_directory(dir)
        .map_err(|e| Failure::new(EX_NOINPUT, format!("cannot scan {}: {e}", dir.display())))?;
    write_output(output, &report.to_json())?;
    let t = &report.totals;
    eprintln!(
        "scanned {} files: {} polynomial-only, {} constant-division, {} non-constant, {} failed",
        t.files,
        t.verdicts.polynomial_only,
        t.verdicts.constant_division_only,
        t.verdicts.non_constant_division,
        t.failed
    );
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn transform(
    path: &Path,
    pass: Pass,
    div0_value: Option<Rational>,
    style: Option<Style>,
    fold: bool,
    bound: Option<u64>,
    output: Option<&Path>,
) -> CmdResult {
    let is_totalize = matches!(pass, Pass::Totalize);
    let is_encode = matches!(pass, Pass::EncodeUf | Pass::EncodeDiv0);
    if !is_totalize && (div0_value.is_some() || style.is_some() || fold) {
        return Err(Failure::new(EX_USAGE, "--div0-value, --style and --fold apply to --pass totalize only"));
    }
    if !is_encode && bound.is_some() {
        return Err(Failure::new(EX_USAGE, "--bound applies to the encode passes only"));
    }

    let script = read_script(path)?;
    let before = script.node_count();
    let (name, out, note) = match pass {
        Pass::Totalize => {
            let cfg = TotalizeConfig {
                div0_value: div0_value.unwrap_or_default(),
                style: match style {
                    Some(Style::Fresh) => TotalizeStyle::FreshSymbol,
                    _ => TotalizeStyle::BranchInline,
                },
                fold,
            };
            let (out, warnings) = totalize_with_warnings(&script, &cfg);
            for w in &warnings {
                eprintln!("{}:{}: warning: {}", path.display(), w.loc, w.message);
            }
            ("totalize", out, String::new())
        }
        Pass::UfLift => {
            let r = lift_to_uf(&script);
            let note = match &r.div_symbol {
                Some(d) => format!(", division is `{d}`"),
                None => ", no division".to_string(),
            };
            ("uf-lift", r.script, note)
        }
        Pass::EncodeUf | Pass::EncodeDiv0 => {
            let (name, mode) = match pass {
                Pass::EncodeUf => ("encode-uf", EncodingMode::Uf),
                _ => ("encode-div0", EncodingMode::Div0),
            };
            let bad = |e: &dyn std::fmt::Display| Failure::new(EX_DATAERR, format!("{}: {e}", path.display()));
            let formula = IntFormula::from_script(&script).map_err(|e| bad(&e))?;
            let p = encode(&formula, mode).map_err(|e| bad(&e))?;
            let note = match bound {
                Some(b) => witness_note(&p, b)?,
                None => String::new(),
            };
            (name, p.script, note)
        }
    };

    let text = print_script(&out);
    match parse_script(&text) {
        Ok(back) if back == out => {}
        Ok(_) => return Err(Failure::new(EX_SOFTWARE, "output does not re-parse to the same script")),
        Err(e) => return Err(Failure::new(EX_SOFTWARE, format!("output does not re-parse: {e}"))),
    }
    write_output(output, &text)?;
    eprintln!("{name}: {before} nodes -> {} nodes{note}", out.node_count());
    Ok(0)
}

/// Brute-forces the source formula and checks any witness against the
/// encoding under the floor interpretation.
fn witness_note(p: &nradiv::encoder::EncodedProblem, bound: u64) -> Result<String, Failure> {
    let found = brute_force_int_sat(&p.source, bound, DEFAULT_SEARCH_BUDGET)
        .map_err(|e| Failure::new(EX_SOFTWARE, e.to_string()))?;
    let Some(w) = found else {
        return Ok(format!(", no integer witness in [-{bound}, {bound}]"));
    };
    let a: Assignment = p
        .source
        .variables
        .iter()
        .zip(&w)
        .map(|(v, x)| (v.as_str(), Rational::from(x.clone())))
        .collect();
    let ok = p
        .evaluator(&DivInterpretation::floor())
        .first_falsified(&p.script.assertions, &a)
        .map_err(|e| Failure::new(EX_SOFTWARE, e.to_string()))?;
    let shown: Vec<String> = p.source.variables.iter().zip(&w).map(|(v, x)| format!("{v}={x}")).collect();
    match ok {
        None => Ok(format!(", witness {} satisfies the encoding", shown.join(" "))),
        Some(i) => Err(Failure::new(
            EX_SOFTWARE,
            format!("witness {} falsifies encoded assertion {i}", shown.join(" ")),
        )),
    }
}

fn solve_cmd(path: &Path, solver: &str, timeout: Option<f64>) -> CmdResult {
    let timeout = match timeout {
        None => DEFAULT_TIMEOUT,
        Some(s) => Duration::try_from_secs_f64(s)
            .map_err(|_| Failure::new(EX_USAGE, format!("invalid --timeout {s}")))?,
    };
    let script = read_script(path)?;
    let cmd = SolverCommand::parse(solver).map_err(|e| Failure::new(EX_USAGE, e.to_string()))?;
    let verdict = solve(&script, &cmd, timeout).map_err(|e| match e {
        SolverError::Spawn { .. } => Failure::new(EX_UNAVAILABLE, e.to_string()),
        _ => Failure::new(EX_SOFTWARE, e.to_string()),
    })?;
    println!("{}", verdict.answer);
    let timed_out = if verdict.timed_out { " (timeout)" } else { "" };
    eprintln!("elapsed {:.3}s{timed_out}", verdict.elapsed.as_secs_f64());
    if verdict.answer == SolverAnswer::Error {
        eprint!("{}", verdict.raw_output);
        return Ok(EX_SOFTWARE);
    }
    Ok(0)
}

//! Command-line front end. The binary is a thin wrapper around [`main_with_args`].
//!
//! Reports are JSON objects with `"schema": 1`. Apart from the `timing`
//! block they are byte-identical for identical arguments.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bloch::verify::{cyclic_order, run_suite, Suite};
use crate::bloch::BlochField;
use crate::error::{Error, Result};
use crate::field::{FiniteField, PrimePower, DEFAULT_MAX_Q};
use crate::laurent;
use crate::tower::{eigenspace_ledger, predict, TowerBase, TowerSpec};

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_Q_ENV: &str = "BLOCH_MAX_Q";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "refbloch", version, about = "Refined pre-Bloch and Bloch groups of finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Invariants of P(F_q), B(F_q) and the eigenspaces of RB(F_q).
    Prebloch {
        /// Field size, e.g. 9 or 3^2.
        #[arg(long)]
        q: String,
    },
    /// Exhaustive identity sweeps over F_q.
    Verify {
        #[arg(long)]
        q: String,
        /// lambda, suslin, constants, df, pb, eigen or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Specialization of the refined five-term relation over F_q((t)).
    LaurentFuzz {
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 64)]
        precision: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = laurent::DEFAULT_SEED)]
        seed: u64,
    },
    /// Predicted H_3(SL_2(F), Z[1/2]) for a tower F_0, F_0((t_1)), ...
    Tower {
        /// A field size, real-closed, quadratically-closed or Q_p.
        #[arg(long)]
        base: String,
        #[arg(long)]
        levels: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub data: Value,
}

impl CheckResult {
    fn new(name: &str, passed: bool, data: Value) -> Self {
        CheckResult { name: name.into(), passed, data }
    }

    fn info(name: &str, data: Value) -> Self {
        Self::new(name, true, data)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Value,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub timing: Timing,
}

impl Report {
    /// The report without its timing block, for determinism comparisons.
    pub fn deterministic_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v.as_object_mut().expect("object").remove("timing");
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{mark}  {}  {}\n", c.name, summarize(&c.data)));
        }
        let verdict = if self.passed { "pass" } else { "fail" };
        s.push_str(&format!("{verdict} ({} checks, {} ms)\n", self.checks.len(), self.timing.elapsed_ms));
        s
    }
}

fn summarize(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .filter(|(_, x)| !matches!(x, Value::Array(a) if a.len() > 8))
            .map(|(k, x)| format!("{k}={}", summarize(x)))
            .collect::<Vec<_>>()
            .join(" "),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Field-size bound from `BLOCH_MAX_Q`, or the default.
pub fn max_q_from_env() -> Result<u64> {
    match std::env::var(MAX_Q_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Error::Config(format!("{MAX_Q_ENV}={s:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_MAX_Q),
    }
}

pub fn parse_field(q: &str, max_q: u64) -> Result<FiniteField> {
    let pp: PrimePower = q.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
    if pp.q() > max_q {
        return Err(Error::Config(format!("q = {} exceeds the bound {max_q} (set {MAX_Q_ENV} to raise it)", pp.q())));
    }
    FiniteField::with_max_q(pp.p, pp.m, max_q)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn expected_bloch_order(q: u64) -> u64 {
    if q % 2 == 1 {
        q.div_ceil(2)
    } else {
        q + 1
    }
}

fn cmd_prebloch(k: FiniteField) -> Result<Vec<CheckResult>> {
    let f = BlochField::new(k);
    let q = u64::from(f.q());
    let p = f.prebloch_presentation().invariants();
    let b = f.bloch_group()?.presentation.invariants();
    let rb = f.refined_bloch()?;
    let want = expected_bloch_order(q);
    let per_character: Vec<Value> =
        rb.per_character.iter().map(|(c, a)| json!({"character": c.to_string(), "odd_invariants": a})).collect();
    Ok(vec![
        CheckResult::info("prebloch", json!({"invariants": p, "odd_part": p.odd_part()})),
        CheckResult::new(
            "bloch",
            cyclic_order(&b) == Some(want),
            json!({"invariants": b, "expected_cyclic_order": want}),
        ),
        CheckResult::new(
            "refined_bloch",
            rb.rb0_is_trivial() && rb.trivial_part() == &b.odd_part(),
            json!({"integral": rb.integral, "per_character": per_character}),
        ),
    ])
}

fn cmd_verify(k: FiniteField, suite: &str) -> Result<Vec<CheckResult>> {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let f = BlochField::new(k);
    let mut out = Vec::new();
    for s in suites {
        let r = run_suite(&f, s)?;
        for c in r.checks {
            let passed = c.passed || !c.gating;
            out.push(CheckResult::new(&format!("{s}.{}", c.name), passed, to_value(&c)));
        }
    }
    Ok(out)
}

fn cmd_laurent_fuzz(k: FiniteField, precision: usize, samples: usize, seed: u64) -> Result<Vec<CheckResult>> {
    if !k.is_odd() {
        return Err(Error::Config(format!("q must be odd, got {}", k.q())));
    }
    let r = laurent::fuzz(&k, precision, samples, seed)?;
    let mut data = to_value(&r);
    data["inconclusive_rate"] = json!(r.inconclusive_rate());
    Ok(vec![CheckResult::new("relation_specialization", r.passed(), data)])
}

fn cmd_tower(base: &str, levels: usize, max_q: u64) -> Result<Vec<CheckResult>> {
    let spec = TowerSpec::new(TowerBase::parse(base, max_q)?, levels)?;
    let report = predict(&spec)?;
    let ledger = eigenspace_ledger(&spec);
    let census_ok = ledger.census == report.exponents;
    let mut data = to_value(&report);
    data["formula"] = json!(report.formula());
    Ok(vec![
        CheckResult::new("prediction", !report.surjection_only, data),
        CheckResult::new("eigenspace_ledger", census_ok, to_value(&ledger)),
    ])
}

/// Runs one command and assembles its report.
pub fn run(command: &Command, max_q: u64) -> Result<Report> {
    let start = Instant::now();
    let checks = match command {
        Command::Prebloch { q } => cmd_prebloch(parse_field(q, max_q)?)?,
        Command::Verify { q, suite } => cmd_verify(parse_field(q, max_q)?, suite)?,
        Command::LaurentFuzz { q, precision, samples, seed } => {
            cmd_laurent_fuzz(parse_field(q, max_q)?, *precision, *samples, *seed)?
        }
        Command::Tower { base, levels } => cmd_tower(base, *levels, max_q)?,
    };
    let mut config = to_value(command);
    config["max_q"] = json!(max_q);
    Ok(Report {
        schema: SCHEMA_VERSION,
        tool: "refbloch",
        version: env!("CARGO_PKG_VERSION"),
        config,
        passed: checks.iter().all(|c| c.passed),
        checks,
        timing: Timing { elapsed_ms: start.elapsed().as_millis() },
    })
}

/// Parses arguments (program name first) and runs with the bound from the
/// environment.
pub fn run_args<I, T>(args: I) -> Result<(Report, Format)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    Ok((run(&cli.command, max_q_from_env()?)?, cli.format))
}

/// Exit code for an engine error: 2 for bad input, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidField(_) | Error::Domain(_) => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Text => report.to_text(),
    }
}

/// Parses `args`, runs, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = max_q_from_env().and_then(|max_q| run(&cli.command, max_q));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let text = render(&report, cli.format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if report.passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Report> {
        let cli = Cli::try_parse_from(std::iter::once("refbloch").chain(args.iter().copied())).unwrap();
        run(&cli.command, DEFAULT_MAX_Q)
    }

    #[test]
    fn prebloch_f5() {
        let r = run_args(&["prebloch", "--q", "5"]).unwrap();
        assert!(r.passed);
        assert_eq!(r.checks[1].data["invariants"]["factors"], json!([3]));
        assert_eq!(r.schema, 1);
    }

    #[test]
    fn usage_errors() {
        let e = run_args(&["prebloch", "--q", "1"]).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_USAGE);
        let e = run_args(&["laurent-fuzz", "--q", "4"]).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_USAGE);
        assert_eq!(exit_code(&run(&Command::Prebloch { q: "7".into() }, 5).unwrap_err()), EXIT_USAGE);
    }

    #[test]
    fn vacuous_fuzz() {
        let r = run_args(&["laurent-fuzz", "--q", "5", "--samples", "0"]).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn tower_reports() {
        let r = run_args(&["tower", "--base", "5", "--levels", "2"]).unwrap();
        assert!(r.passed);
        assert_eq!(r.checks[0].data["exponents"], json!([2, 1]));
        let r = run_args(&["tower", "--base", "5", "--levels", "0"]).unwrap();
        assert_eq!(r.checks[0].data["summands"].as_array().unwrap().len(), 1);
    }
}

//! Command-line front end. Every command prints one JSON document on standard
//! output; the exit code carries the verdict (0 yes, 1 no, 2 error).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classify::StructureClass;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::families::{generate, Family};
use crate::norms::NormSpec;
use crate::numeric::{Field, Matrix, Scalar, Tolerance, Vector};
use crate::oracle::{empirical_check_with, EmpiricalOutcome, SampleConfig};
use crate::pairs::{is_pair, PairKind};
use crate::preserver::{decide_with, Decision, PreserverVerdict, WitnessSearch};

pub const SEED_ENV: &str = "NORMPAR_SEED";

#[derive(Debug, Parser)]
#[command(name = "normpar", version, about = "Parallel and triangle-equality pair preservers for lp norms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// l1, linf, or lp:<p> with 1 < p < inf.
    #[arg(long, value_parser = parse_norm)]
    pub norm: NormSpec,
    /// tea or parallel.
    #[arg(long, value_parser = parse_mode)]
    pub mode: PairKind,
    /// Uniform tolerance for equality, peak and rank decisions.
    #[arg(long, default_value_t = Tolerance::DEFAULT_EPS)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a matrix is a preserver.
    Check {
        /// Matrix document (JSON); `-` reads standard input.
        matrix: PathBuf,
        #[command(flatten)]
        norm: NormArgs,
        /// Seed for the fallback witness search.
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = WitnessSearch::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Test whether two vectors form a pair.
    Pair {
        x: PathBuf,
        y: PathBuf,
        #[command(flatten)]
        norm: NormArgs,
    },
    /// Search sampled pairs for a counterexample.
    Fuzz {
        matrix: PathBuf,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
    /// Print a seeded matrix from a generator family.
    Gen {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_field, default_value = "real")]
        field: Field,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
    /// Like `check`, but a preserver verdict is also validated by a sampled
    /// campaign.
    Witness {
        matrix: PathBuf,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = WitnessSearch::DEFAULT_BUDGET)]
        budget: usize,
        /// Samples in the validation campaign for preservers.
        #[arg(long, default_value_t = 10_000)]
        count: usize,
    },
}

fn parse_norm(s: &str) -> std::result::Result<NormSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<PairKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_field(s: &str) -> std::result::Result<Field, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "real" => Ok(Field::Real),
        "complex" => Ok(Field::Complex),
        other => Err(format!("unknown field {other:?}")),
    }
}

// ---- documents ----

/// Input entry: a number, or `[re, im]`.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(untagged)]
enum EntryIn {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub field: Field,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorDocument {
    field: Field,
    entries: Vec<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum VectorInput {
    Tagged(VectorDocument),
    Bare(Vec<Value>),
}

fn bad_input(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

fn parse_entries(field: Field, values: &[Value]) -> Result<Vec<Complex64>> {
    values
        .iter()
        .map(|v| {
            let entry: EntryIn = serde_json::from_value(v.clone()).map_err(|_| bad_input(format!("bad entry {v}")))?;
            match (field, entry) {
                (_, EntryIn::Real(re)) => Ok(Complex64::new(re, 0.0)),
                (Field::Complex, EntryIn::Complex([re, im])) => Ok(Complex64::new(re, im)),
                (Field::Real, EntryIn::Complex(_)) => Err(bad_input(format!("complex entry {v} in a real document"))),
            }
        })
        .collect()
}

fn entry_out(field: Field, z: Complex64) -> Value {
    match field {
        Field::Real => Value::from(z.re),
        Field::Complex => Value::from(vec![z.re, z.im]),
    }
}

fn vector_out(v: &Vector) -> Vec<Value> {
    v.entries().iter().map(|&z| entry_out(v.field(), z)).collect()
}

fn matrix_out(m: &Matrix) -> Vec<Vec<Value>> {
    m.rows().map(|row| row.iter().map(|&z| entry_out(m.field(), z)).collect()).collect()
}

fn scalar_out(s: Scalar) -> [f64; 2] {
    [s.re(), s.im()]
}

impl MatrixDocument {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixDocument { field: m.field(), rows: matrix_out(m) }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        let rows = self.rows.iter().map(|r| parse_entries(self.field, r)).collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(self.field, rows)
    }
}

fn read_text(path: &Path) -> Result<String> {
    let text =
        if path.as_os_str() == "-" { std::io::read_to_string(std::io::stdin()) } else { std::fs::read_to_string(path) };
    text.map_err(|e| bad_input(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let doc: MatrixDocument =
        serde_json::from_str(text).map_err(|e| bad_input(format!("malformed matrix document: {e}")))?;
    doc.to_matrix()
}

/// `{field, entries}`, or a bare array whose field is complex iff some entry
/// is a `[re, im]` pair.
pub fn parse_vector(text: &str) -> Result<Vector> {
    let input: VectorInput =
        serde_json::from_str(text).map_err(|e| bad_input(format!("malformed vector document: {e}")))?;
    let (field, values) = match input {
        VectorInput::Tagged(doc) => (doc.field, doc.entries),
        VectorInput::Bare(values) => {
            let field = if values.iter().any(Value::is_array) { Field::Complex } else { Field::Real };
            (field, values)
        }
    };
    Vector::new(field, parse_entries(field, &values)?)
}

#[derive(Debug, Serialize)]
struct ToleranceDocument {
    eps_eq: f64,
    eps_peak: f64,
    eps_rank: f64,
}

impl From<&Tolerance> for ToleranceDocument {
    fn from(t: &Tolerance) -> Self {
        ToleranceDocument { eps_eq: t.eps_eq, eps_peak: t.eps_peak, eps_rank: t.eps_rank }
    }
}

#[derive(Debug, Serialize)]
struct ClassDocument {
    name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    u: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<Vec<Vec<Value>>>,
}

impl From<&StructureClass> for ClassDocument {
    fn from(c: &StructureClass) -> Self {
        let mut doc = ClassDocument { name: c.name(), gamma: None, beta: None, u: None, v: None, q: None };
        match c {
            StructureClass::GeneralizedPermutation { gamma, q } => {
                doc.gamma = Some(*gamma);
                doc.q = Some(matrix_out(q));
            }
            StructureClass::RankOne { u, v } => {
                doc.u = Some(vector_out(u));
                doc.v = Some(vector_out(v));
            }
            StructureClass::TwoByTwoC { gamma, beta, q } => {
                doc.gamma = Some(*gamma);
                doc.beta = Some(scalar_out(*beta));
                doc.q = Some(matrix_out(q));
            }
            _ => {}
        }
        doc
    }
}

#[derive(Debug, Serialize)]
struct ValidationDocument {
    criterion: bool,
    definitional: bool,
}

#[derive(Debug, Serialize)]
struct WitnessDocument {
    x: Vec<Value>,
    y: Vec<Value>,
    mu: Option<[f64; 2]>,
    validation: ValidationDocument,
}

#[derive(Debug, Serialize)]
struct VerdictDocument {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<ClassDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessDocument>,
    validated: bool,
    norm: String,
    mode: &'static str,
    n: usize,
    field: Field,
    tolerances: ToleranceDocument,
}

#[derive(Debug, Serialize)]
struct PairDocument {
    holds: bool,
    mu: Option<[f64; 2]>,
    /// One-based common peak coordinate (sup norm only).
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    norm: String,
    mode: &'static str,
    n: usize,
    field: Field,
    tolerances: ToleranceDocument,
}

#[derive(Debug, Serialize)]
struct CounterexampleDocument {
    index: usize,
    x: Vec<Value>,
    y: Vec<Value>,
}

#[derive(Debug, Serialize)]
struct FuzzDocument {
    checked: usize,
    counterexample: Option<CounterexampleDocument>,
    seed: u64,
    norm: String,
    mode: &'static str,
    n: usize,
    field: Field,
    tolerances: ToleranceDocument,
}

#[derive(Debug, Serialize)]
struct ErrorDocument {
    error: String,
}

// ---- execution ----

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

fn render<T: Serialize>(doc: &T, code: u8) -> Outcome {
    let stdout = serde_json::to_string_pretty(doc).expect("documents serialize");
    Outcome { stdout, stderr: String::new(), code }
}

fn error_outcome(e: impl std::fmt::Display) -> Outcome {
    let message = e.to_string();
    Outcome {
        stdout: serde_json::to_string_pretty(&ErrorDocument { error: message.clone() }).expect("serializes"),
        stderr: message,
        code: 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command).unwrap_or_else(error_outcome),
        Err(e) if !e.use_stderr() => {
            Outcome { stdout: e.to_string().trim_end().to_string(), stderr: String::new(), code: 0 }
        }
        Err(e) => error_outcome(e.to_string().trim_end()),
    }
}

fn verdict_document(t: &Matrix, v: &PreserverVerdict, args: &NormArgs, tol: &Tolerance) -> VerdictDocument {
    let (verdict, class, witness) = match &v.result {
        Decision::Preserver(c) => ("preserver", Some(ClassDocument::from(c)), None),
        Decision::NotPreserver(w) => (
            "not_preserver",
            None,
            Some(WitnessDocument {
                x: vector_out(&w.x),
                y: vector_out(&w.y),
                mu: w.mu.map(scalar_out),
                validation: ValidationDocument { criterion: w.criterion, definitional: w.definitional },
            }),
        ),
    };
    VerdictDocument {
        verdict,
        class,
        witness,
        validated: v.validated,
        norm: args.norm.to_string(),
        mode: args.mode.as_str(),
        n: t.n(),
        field: t.field(),
        tolerances: tol.into(),
    }
}

pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Check { matrix, norm, seed, budget } => {
            let tol = Tolerance::uniform(norm.tol)?;
            let t = parse_matrix(&read_text(matrix)?)?;
            let search = WitnessSearch { seed: *seed, budget: *budget, exec: Execution::default() };
            let v = decide_with(&t, norm.norm, norm.mode, &tol, &search)?;
            let code = if v.is_preserver() { 0 } else { 1 };
            Ok(render(&verdict_document(&t, &v, norm, &tol), code))
        }
        Command::Witness { matrix, norm, seed, budget, count } => {
            let tol = Tolerance::uniform(norm.tol)?;
            let t = parse_matrix(&read_text(matrix)?)?;
            let search = WitnessSearch { seed: *seed, budget: *budget, exec: Execution::default() };
            let mut v = decide_with(&t, norm.norm, norm.mode, &tol, &search)?;
            let cfg = SampleConfig::new(*seed, *count, t.n(), t.field(), norm.norm, norm.mode)?;
            v.validate_empirically(&t, &cfg, &tol, Execution::default())?;
            let code = if v.is_preserver() { 0 } else { 1 };
            Ok(render(&verdict_document(&t, &v, norm, &tol), code))
        }
        Command::Pair { x, y, norm } => {
            let tol = Tolerance::uniform(norm.tol)?;
            let x = parse_vector(&read_text(x)?)?;
            let y = parse_vector(&read_text(y)?)?;
            let p = is_pair(&x, &y, norm.norm, norm.mode, &tol)?;
            let doc = PairDocument {
                holds: p.holds,
                mu: p.mu.map(scalar_out),
                k: p.peak.map(|k| k + 1),
                norm: norm.norm.to_string(),
                mode: norm.mode.as_str(),
                n: x.dim(),
                field: x.field(),
                tolerances: (&tol).into(),
            };
            Ok(render(&doc, if p.holds { 0 } else { 1 }))
        }
        Command::Fuzz { matrix, norm, count, seed } => {
            let tol = Tolerance::uniform(norm.tol)?;
            let t = parse_matrix(&read_text(matrix)?)?;
            let cfg = SampleConfig::new(*seed, *count, t.n(), t.field(), norm.norm, norm.mode)?;
            let outcome = empirical_check_with(&t, &cfg, &tol, Execution::default())?;
            let (checked, counterexample) = match outcome {
                EmpiricalOutcome::NoCounterexample { checked } => (checked, None),
                EmpiricalOutcome::Counterexample { index, x, y } => {
                    (index + 1, Some(CounterexampleDocument { index, x: vector_out(&x), y: vector_out(&y) }))
                }
            };
            let code = if counterexample.is_some() { 1 } else { 0 };
            let doc = FuzzDocument {
                checked,
                counterexample,
                seed: *seed,
                norm: norm.norm.to_string(),
                mode: norm.mode.as_str(),
                n: t.n(),
                field: t.field(),
                tolerances: (&tol).into(),
            };
            Ok(render(&doc, code))
        }
        Command::Gen { family, n, field, seed } => {
            let m = generate(*family, *n, *field, *seed)?;
            Ok(render(&MatrixDocument::from_matrix(&m), 0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
        let path = dir.path().join(name);
        std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn json(o: &Outcome) -> Value {
        serde_json::from_str(&o.stdout).unwrap()
    }

    #[test]
    fn check_identity_l1_tea() {
        let dir = tempfile::tempdir().unwrap();
        let m = write(&dir, "m.json", r#"{"field":"real","rows":[[1,0,0],[0,1,0],[0,0,1]]}"#);
        let o = run(["normpar", "check", &m, "--norm", "l1", "--mode", "tea"]);
        assert_eq!(o.code, 0);
        let v = json(&o);
        assert_eq!(v["verdict"], "preserver");
        assert_eq!(v["class"]["name"], "row_monomial");
        assert_eq!(v["tolerances"]["eps_eq"], 1e-9);
    }

    #[test]
    fn check_rank_one_parallel() {
        let dir = tempfile::tempdir().unwrap();
        let m = write(&dir, "m.json", r#"{"field":"real","rows":[[1,1],[1,1]]}"#);
        let o = run(["normpar", "check", &m, "--norm", "l1", "--mode", "parallel"]);
        assert_eq!(o.code, 0);
        assert_eq!(json(&o)["class"]["name"], "rank_one");
    }

    #[test]
    fn check_not_preserver_has_witness() {
        let dir = tempfile::tempdir().unwrap();
        let m = write(&dir, "m.json", r#"{"field":"real","rows":[[1,1,0],[0,0,1],[0,0,0]]}"#);
        let o = run(["normpar", "check", &m, "--norm", "l1", "--mode", "tea"]);
        assert_eq!(o.code, 1);
        let v = json(&o);
        assert_eq!(v["verdict"], "not_preserver");
        assert_eq!(v["witness"]["x"], serde_json::json!([2.0, -1.0, 0.0]));
        assert_eq!(v["witness"]["y"], serde_json::json!([1.0, -2.0, 0.0]));
        assert_eq!(v["witness"]["validation"]["criterion"], true);
        assert_eq!(v["witness"]["validation"]["definitional"], true);
        assert!(v.get("class").is_none());
    }

    #[test]
    fn pair_examples() {
        let dir = tempfile::tempdir().unwrap();
        let x = write(&dir, "x.json", "[1, 2]");
        let y = write(&dir, "y.json", "[-2, -4]");
        let o = run(["normpar", "pair", &x, &y, "--norm", "l1", "--mode", "parallel"]);
        assert_eq!(o.code, 0);
        assert_eq!(json(&o)["mu"], serde_json::json!([-1.0, 0.0]));

        let x = write(&dir, "x2.json", "[1, 0.5]");
        let y = write(&dir, "y2.json", "[0.3, 1]");
        let o = run(["normpar", "pair", &x, &y, "--norm", "linf", "--mode", "parallel"]);
        assert_eq!(o.code, 1);
        assert_eq!(json(&o)["holds"], false);

        let x = write(&dir, "x3.json", r#"{"field":"real","entries":[1, 1]}"#);
        let y = write(&dir, "y3.json", "[1, -1]");
        let o = run(["normpar", "pair", &x, &y, "--norm", "linf", "--mode", "tea"]);
        assert_eq!(o.code, 0);
        assert_eq!(json(&o)["k"], 1);
    }

    #[test]
    fn pair_mismatch_is_error() {
        let dir = tempfile::tempdir().unwrap();
        let x = write(&dir, "x.json", "[1, 2]");
        let y = write(&dir, "y.json", "[1, 2, 3]");
        let o = run(["normpar", "pair", &x, &y, "--norm", "l1", "--mode", "parallel"]);
        assert_eq!(o.code, 2);
        assert!(json(&o)["error"].is_string());
    }

    #[test]
    fn input_errors_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let m = write(&dir, "m.json", r#"{"field":"real","rows":[[1,0],[0,1]]}"#);
        for norm in ["lp:1", "lp:inf", "lp:0.5", "l2"] {
            let o = run(["normpar", "check", &m, "--norm", norm, "--mode", "tea"]);
            assert_eq!(o.code, 2, "{norm}");
        }
        let bad = write(&dir, "bad.json", r#"{"field":"real","rows":[[1,[0,1]],[0,1]]}"#);
        assert_eq!(run(["normpar", "check", &bad, "--norm", "l1", "--mode", "tea"]).code, 2);
        let ragged = write(&dir, "ragged.json", r#"{"field":"real","rows":[[1,0],[0]]}"#);
        assert_eq!(run(["normpar", "check", &ragged, "--norm", "l1", "--mode", "tea"]).code, 2);
        let garbage = write(&dir, "garbage.json", "not json");
        assert_eq!(run(["normpar", "check", &garbage, "--norm", "l1", "--mode", "tea"]).code, 2);
        assert_eq!(run(["normpar", "check", "/nonexistent.json", "--norm", "l1", "--mode", "tea"]).code, 2);
        assert_eq!(run(["normpar", "check", &m, "--norm", "l1", "--mode", "tea", "--tol", "0.5"]).code, 2);
        assert_eq!(run(["normpar", "gen", "--family", "c2", "--n", "3"]).code, 2);
    }

    #[test]
    fn complex_documents() {
        let m = parse_matrix(r#"{"field":"complex","rows":[[[1,0],[0,0.5]],[[0,-0.5],1]]}"#).unwrap();
        assert_eq!(m.at(0, 1), Complex64::new(0.0, 0.5));
        assert_eq!(m.at(1, 1), Complex64::new(1.0, 0.0));
        let v = parse_vector("[[1, 2], 3]").unwrap();
        assert_eq!(v.field(), Field::Complex);
    }

    #[test]
    fn gen_round_trips_through_check() {
        let dir = tempfile::tempdir().unwrap();
        let o = run(["normpar", "gen", "--family", "genperm", "--n", "3", "--seed", "7"]);
        assert_eq!(o.code, 0);
        let m = write(&dir, "g.json", &o.stdout);
        let o = run(["normpar", "check", &m, "--norm", "linf", "--mode", "tea"]);
        assert_eq!(json(&o)["class"]["name"], "generalized_permutation");

        let o = run(["normpar", "gen", "--family", "c2", "--n", "2", "--field", "complex", "--seed", "3"]);
        let m = write(&dir, "c.json", &o.stdout);
        let o = run(["normpar", "check", &m, "--norm", "linf", "--mode", "parallel"]);
        assert_eq!(json(&o)["class"]["name"], "two_by_two_c");
    }

    #[test]
    fn fuzz_reports() {
        let dir = tempfile::tempdir().unwrap();
        let m = write(&dir, "m.json", r#"{"field":"real","rows":[[1,0.5],[0.5,1]]}"#);
        let o = run(["normpar", "fuzz", &m, "--norm", "linf", "--mode", "tea", "--count", "10000", "--seed", "1"]);
        assert_eq!(o.code, 0);
        assert_eq!(json(&o)["checked"], 10000);
        assert!(json(&o)["counterexample"].is_null());

        let m = write(&dir, "c.json", r#"{"field":"complex","rows":[[1,[0,0.5]],[[0,-0.5],1]]}"#);
        let o = run(["normpar", "fuzz", &m, "--norm", "linf", "--mode", "tea", "--count", "10000", "--seed", "1"]);
        assert_eq!(o.code, 1);
        assert!(json(&o)["counterexample"]["x"].is_array());
    }

    #[test]
    fn witness_command_validates_preservers() {
        let dir = tempfile::tempdir().unwrap();
        let m = write(&dir, "m.json", r#"{"field":"real","rows":[[0,2],[-2,0]]}"#);
        let o = run(["normpar", "witness", &m, "--norm", "linf", "--mode", "parallel", "--count", "2000"]);
        assert_eq!(o.code, 0);
        assert_eq!(json(&o)["validated"], true);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(["normpar", "--help"]).code, 0);
        assert_eq!(run(["normpar"]).code, 2);
    }
}

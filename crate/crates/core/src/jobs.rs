//! Command execution behind the `koszul` binary.
//!
//! A job reads a model file plus command-specific inputs and produces a
//! report. JSON reports have sorted keys and no timestamps, so identical
//! inputs give byte-identical output; every report echoes the model hash
//! and the parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::constructors::{
    build_gl_class, build_gl_class_rational, build_voisin_class, check_ks_conditions, four_term_violation,
    has_generalized_zero, is_coboundary_from_w, ks_alpha, ks_matrix_from_class, mu_cokernel, plucker_check,
    plucker_check_numeric, split_detect, Construction, DeterminantDatum, GenZeroOptions, GenZeroResult, KSMatrix,
    PluckerReport,
};
use crate::error::{Error, Result};
use crate::io;
use crate::koszul::{
    class_rank, compute_k_p1, compute_k_p1_mixed, compute_k_p1_subspace, is_nonzero_class, ClassRank, KoszulGroupReport,
};
use crate::models::{CurveModel, MultTable};
use crate::multilinear::{apply_differential, pfaffian4, support};
use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Dims,
    BuildGl,
    BuildVoisin,
    ClassRank,
    SplitDetect,
    CheckKs,
    CheckFourTerm,
    GenZero,
    Plucker,
    MuCoker,
    Pfaffian,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Dims,
        Command::BuildGl,
        Command::BuildVoisin,
        Command::ClassRank,
        Command::SplitDetect,
        Command::CheckKs,
        Command::CheckFourTerm,
        Command::GenZero,
        Command::Plucker,
        Command::MuCoker,
        Command::Pfaffian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Dims => "dims",
            Command::BuildGl => "build-gl",
            Command::BuildVoisin => "build-voisin",
            Command::ClassRank => "class-rank",
            Command::SplitDetect => "split-detect",
            Command::CheckKs => "check-ks",
            Command::CheckFourTerm => "check-four-term",
            Command::GenZero => "gen-zero",
            Command::Plucker => "plucker",
            Command::MuCoker => "mu-coker",
            Command::Pfaffian => "pfaffian",
        }
    }

    /// Parameters the command understands.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Command::Dims => &["p", "subspace", "mixed"],
            Command::BuildGl => &["d1", "d2", "s1", "s2", "split"],
            Command::BuildVoisin | Command::SplitDetect | Command::CheckFourTerm | Command::GenZero => &["datum"],
            Command::ClassRank => &["class"],
            Command::CheckKs => &["ks", "class", "w", "datum"],
            Command::Plucker => &["ks", "class", "w", "datum", "matrix"],
            Command::MuCoker => &["p"],
            Command::Pfaffian => &["ks", "datum", "indices"],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown command '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub model_path: PathBuf,
    pub params: BTreeMap<String, String>,
    pub output: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobOutcome {
    pub exit_code: i32,
    /// The rendered report (or error report).
    pub report: String,
}

impl JobSpec {
    pub fn new(command: Command, model_path: impl Into<PathBuf>) -> Self {
        JobSpec { command, model_path: model_path.into(), params: BTreeMap::new(), output: OutputFormat::Json }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn validate(&self) -> Result<()> {
        let known = self.command.params();
        if let Some(bad) = self.params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::Malformed(format!("'{}' does not take --{bad}", self.command)));
        }
        Ok(())
    }

    fn usize_param(&self, key: &str) -> Result<Option<usize>> {
        self.params
            .get(key)
            .map(|v| {
                v.parse().map_err(|_| Error::Malformed(format!("--{key} expects a nonnegative integer, got '{v}'")))
            })
            .transpose()
    }

    fn required_usize(&self, key: &str) -> Result<usize> {
        self.usize_param(key)?.ok_or_else(|| Error::Malformed(format!("'{}' needs --{key}", self.command)))
    }

    fn path(&self, key: &str) -> Option<&Path> {
        self.params.get(key).map(Path::new)
    }

    fn required_file(&self, key: &str) -> Result<Vec<u8>> {
        let path = self.path(key).ok_or_else(|| Error::Malformed(format!("'{}' needs --{key}", self.command)))?;
        io::read_file(path)
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.params.get(key).map(String::as_str) {
            None | Some("false") => Ok(false),
            Some("true") | Some("") => Ok(true),
            Some(other) => Err(Error::Malformed(format!("--{key} expects true or false, got '{other}'"))),
        }
    }
}

/// Runs a job; never panics on bad input, errors become exit codes 2 or 3.
pub fn run(job: &JobSpec) -> JobOutcome {
    let result = io::read_file(&job.model_path).and_then(|bytes| {
        job.validate()?;
        let model = io::parse_model(&bytes)?;
        let mut report = Map::new();
        report.insert("command".into(), json!(job.command.name()));
        report.insert("model_sha256".into(), json!(io::sha256_hex(&bytes)));
        report.insert("params".into(), json!(job.params));
        execute(job, &model, &mut report)?;
        Ok(report)
    });
    match result {
        Ok(report) => JobOutcome { exit_code: 0, report: render(&report, job.output) },
        Err(e) => {
            let mut report = Map::new();
            report.insert("command".into(), json!(job.command.name()));
            report.insert("error".into(), json!(e.to_string()));
            report.insert("exit_code".into(), json!(e.exit_code()));
            JobOutcome { exit_code: e.exit_code(), report: render(&report, job.output) }
        }
    }
}

fn render(report: &Map<String, Value>, output: OutputFormat) -> String {
    match output {
        OutputFormat::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        OutputFormat::Text => report
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
    }
}

fn execute(job: &JobSpec, model: &CurveModel<Rat>, out: &mut Map<String, Value>) -> Result<()> {
    let mult = model.mult_table()?;
    match job.command {
        Command::Dims => dims(job, model, &mult, out),
        Command::BuildGl => build_gl(job, model, &mult, out),
        Command::BuildVoisin => {
            let (datum, t, u) = marked_datum(job, &mult)?;
            let built = build_voisin_class(&datum, &t, &u, &mult)?;
            construction_report(&built, &mult, out)
        }
        Command::ClassRank => {
            let c = io::parse_class(&job.required_file("class")?)?;
            match class_rank(&mult, &c)? {
                ClassRank::Exact(r) => {
                    out.insert("rank".into(), json!(r));
                    out.insert("exact".into(), json!(true));
                }
                ClassRank::UpperBound { bound, certified_rep } => {
                    out.insert("rank".into(), json!(bound));
                    out.insert("exact".into(), json!(false));
                    out.insert("certified_rep".into(), io::class_to_json(&certified_rep));
                }
            }
            Ok(())
        }
        Command::SplitDetect => {
            let (datum, t, u) = marked_datum(job, &mult)?;
            let built = build_voisin_class(&datum, &t, &u, &mult)?;
            let h = split_detect(&datum, &t, &u)?;
            out.insert("detected".into(), json!(h.is_some()));
            out.insert("h".into(), h.as_deref().map_or(Value::Null, io::vector_to_json));
            out.insert("coboundary_from_w".into(), json!(is_coboundary_from_w(&built)?));
            out.insert("nonzero".into(), json!(is_nonzero_class(&mult, &built.class)?));
            Ok(())
        }
        Command::CheckKs => {
            let a = ks_input(job, &mult)?;
            let report = check_ks_conditions(&a, &mult)?;
            let c = a.class()?;
            out.insert("condition_i".into(), json!(report.independent_first_row));
            out.insert("condition_ii".into(), json!(report.nonzero_pfaffian));
            out.insert("condition_iii".into(), json!(report.pfaffians_vanish_on_x));
            out.insert(
                "alpha_equals_differential".into(),
                json!(ks_alpha(&a, &mult)? == apply_differential(&mult, &c)?),
            );
            out.insert("ks_matrix".into(), io::ks_to_json(&a));
            Ok(())
        }
        Command::CheckFourTerm => {
            let f = io::parse_datum(&job.required_file("datum")?)?;
            let violation = four_term_violation(f.datum.d(), &mult)?;
            out.insert("holds".into(), json!(violation.is_none()));
            out.insert("violation".into(), json!(violation));
            Ok(())
        }
        Command::GenZero => gen_zero(job, &mult, out),
        Command::Plucker => {
            let report = match job.path("matrix") {
                Some(path) => plucker_check_numeric(&io::parse_numeric_matrix(&io::read_file(path)?)?)?,
                None => plucker_check(ks_input(job, &mult)?.matrix(), &mult)?,
            };
            plucker_report(&report, out);
            Ok(())
        }
        Command::MuCoker => {
            let mu = model
                .canonical_mult
                .as_ref()
                .ok_or_else(|| Error::Malformed("the model has no canonical_mult block".into()))?;
            let coker = mu_cokernel(mu);
            out.insert("coker_dim".into(), json!(coker));
            if let Some(dual) = &model.dual_complex {
                let p = job.usize_param("p")?.unwrap_or(1);
                let mixed = compute_k_p1_mixed(dual, p)?;
                out.insert("mixed_dim".into(), json!(mixed.dim));
                out.insert("equal".into(), json!(mixed.dim == coker));
            }
            Ok(())
        }
        Command::Pfaffian => {
            let a = ks_input(job, &mult)?;
            let text =
                job.params.get("indices").ok_or_else(|| Error::Malformed("'pfaffian' needs --indices".into()))?;
            let idx: Vec<usize> = text
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::Malformed(format!("bad index list '{text}'"))))
                .collect::<Result<_>>()?;
            let idx: [usize; 4] =
                idx.try_into().map_err(|_| Error::Malformed("--indices needs four indices".into()))?;
            let value = pfaffian4(a.matrix(), idx, &mult)?;
            out.insert("value".into(), io::sparse_to_json(&value));
            out.insert("zero".into(), json!(value.is_empty()));
            Ok(())
        }
    }
}

fn group_report(report: &KoszulGroupReport<Rat>, out: &mut Map<String, Value>) {
    out.insert("dim".into(), json!(report.dim));
    out.insert("kernel_dim".into(), json!(report.kernel_dim));
    out.insert("boundary_dim".into(), json!(report.boundary_dim));
    out.insert("cycle_basis".into(), Value::Array(report.cycle_basis.iter().map(io::class_to_json).collect()));
}

fn dims(job: &JobSpec, model: &CurveModel<Rat>, mult: &MultTable<Rat>, out: &mut Map<String, Value>) -> Result<()> {
    let p = job.required_usize("p")?;
    if job.flag("mixed")? {
        let dual = model
            .dual_complex
            .as_ref()
            .ok_or_else(|| Error::Malformed("the model has no dual_complex block".into()))?;
        group_report(&compute_k_p1_mixed(dual, p)?, out);
        return Ok(());
    }
    let report = match job.path("subspace") {
        Some(path) => compute_k_p1_subspace(mult, p, &io::parse_subspace(&io::read_file(path)?, mult.dim1())?)?,
        None => compute_k_p1(mult, p)?,
    };
    group_report(&report, out);
    Ok(())
}

fn build_gl(job: &JobSpec, model: &CurveModel<Rat>, mult: &MultTable<Rat>, out: &mut Map<String, Value>) -> Result<()> {
    let built = if let Some(path) = job.path("split") {
        let split = io::parse_split(&io::read_file(path)?)?;
        let s1 = job.usize_param("s1")?.unwrap_or(0);
        let s2 = job.usize_param("s2")?.unwrap_or(split.dim2() - 1);
        build_gl_class(&split, s1, s2, mult)?
    } else {
        let d = model
            .rational_degree()
            .ok_or_else(|| Error::Malformed("build-gl on a non-rational model needs --split".into()))?;
        let d1 = job.required_usize("d1")?;
        let d2 = job.usize_param("d2")?.unwrap_or(d.saturating_sub(d1));
        if d1 + d2 != d || d1 == 0 || d2 == 0 {
            return Err(Error::Precondition(format!("need d1 + d2 = {d} with d1, d2 >= 1, got {d1} + {d2}")));
        }
        let s1 = job.usize_param("s1")?.unwrap_or(0);
        let s2 = job.usize_param("s2")?.unwrap_or(d2);
        build_gl_class_rational(d1, d2, s1, s2)?
    };
    construction_report(&built, mult, out)
}

fn construction_report(built: &Construction<Rat>, mult: &MultTable<Rat>, out: &mut Map<String, Value>) -> Result<()> {
    let p = built.class.p();
    out.insert("p".into(), json!(p));
    out.insert("cycle".into(), json!(apply_differential(mult, &built.class)?.is_zero()));
    out.insert("nonzero".into(), json!(is_nonzero_class(mult, &built.class)?));
    let support_rank = if built.class.is_zero() { 0 } else { support(&built.class)?.len() };
    out.insert("support_rank".into(), json!(support_rank));
    out.insert("class".into(), io::class_to_json(&built.class));
    out.insert("w".into(), io::vectors_to_json(&built.w));
    out.insert("ks_matrix".into(), io::ks_to_json(&built.ks_matrix));
    Ok(())
}

fn checked_datum(job: &JobSpec, mult: &MultTable<Rat>) -> Result<io::DatumFile> {
    let mut f = io::parse_datum(&job.required_file("datum")?)?;
    f.datum = DeterminantDatum::new(f.datum.d().clone(), mult)?;
    Ok(f)
}

/// A datum with its marked section `t` and subspace `U`.
type Marked = (DeterminantDatum<Rat>, Vec<Rat>, Vec<Vec<Rat>>);

fn marked_datum(job: &JobSpec, mult: &MultTable<Rat>) -> Result<Marked> {
    let f = checked_datum(job, mult)?;
    let (t, u) = f.marked()?;
    Ok((f.datum.clone(), t.to_vec(), u.to_vec()))
}

/// A Koh–Stillman matrix from `--ks`, `--class` (with optional `--w`), or
/// a marked `--datum`.
fn ks_input(job: &JobSpec, mult: &MultTable<Rat>) -> Result<KSMatrix<Rat>> {
    if let Some(path) = job.path("ks") {
        return io::parse_ks(&io::read_file(path)?);
    }
    if let Some(path) = job.path("class") {
        let c = io::parse_class(&io::read_file(path)?)?;
        let w = job.path("w").map(|p| io::read_file(p).and_then(|b| io::parse_vectors(&b))).transpose()?;
        return ks_matrix_from_class(&c, w.as_deref());
    }
    if job.path("datum").is_some() {
        let (datum, t, u) = marked_datum(job, mult)?;
        return Ok(build_voisin_class(&datum, &t, &u, mult)?.ks_matrix);
    }
    Err(Error::Malformed(format!("'{}' needs --ks, --class or --datum", job.command)))
}

fn plucker_report(report: &PluckerReport, out: &mut Map<String, Value>) {
    out.insert("on_grassmannian".into(), json!(report.on_grassmannian));
    out.insert("on_linear_space".into(), json!(report.on_linear_space));
    out.insert("witness".into(), json!(report.witness));
}

fn gen_zero(job: &JobSpec, mult: &MultTable<Rat>, out: &mut Map<String, Value>) -> Result<()> {
    let f = checked_datum(job, mult)?;
    let options = GenZeroOptions::from_env()?;
    out.insert("primes".into(), json!(options.primes));
    match has_generalized_zero(&f.datum, &options)? {
        GenZeroResult::Witness { u, v } => {
            out.insert("result".into(), json!("witness"));
            out.insert("u".into(), io::vector_to_json(&u));
            out.insert("v".into(), io::vector_to_json(&v));
        }
        GenZeroResult::NoneFound { certificate } => {
            out.insert("result".into(), json!("none_found"));
            let records: Vec<Value> = certificate
                .iter()
                .map(|r| {
                    json!({
                        "prime": r.prime,
                        "skipped": r.skipped,
                        "points_checked": r.points_checked,
                        "candidates": r.candidates,
                        "truncated": r.truncated,
                    })
                })
                .collect();
            out.insert("certificate".into(), Value::Array(records));
        }
    }
    if let (Some(t), Some(u)) = (&f.t, &f.u) {
        let built = build_voisin_class(&f.datum, t, u, mult)?;
        out.insert("class_nonzero".into(), json!(is_nonzero_class(mult, &built.class)?));
    }
    Ok(())
}

//! JSON file formats. Rationals are always strings `"p/q"`.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::constructors::{DeterminantDatum, KSMatrix, SplitDatum};
use crate::error::{Error, Result};
use crate::koszul::{MixedComplex, SubspaceSpec};
use crate::linalg::{to_dense, SparseVec};
use crate::models::{BilinearTable, CurveModel, ModelKind, SymMatrix};
use crate::multilinear::{KoszulClass, SkewMap};
use crate::Rat;

/// `"p/q"`, with `q = 1` written out.
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"p/q"` and bare integers `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim().parse::<num_bigint::BigInt>().map_err(|_| Error::Malformed(format!("'{s}' is not a rational")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Malformed(format!("'{s}' has a zero denominator")));
            }
            Ok(Rat::new(parse_int(n)?, d))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

fn parse_vec(v: &[String]) -> Result<Vec<Rat>> {
    v.iter().map(|s| parse_rat(s)).collect()
}

fn format_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|e| Error::Malformed(e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    i: usize,
    j: usize,
    k: usize,
    c: String,
}

/// `{"left_dim", "right_dim", "target_dim", "entries": [{"i","j","k","c"}]}`.
#[derive(Serialize, Deserialize)]
struct TableJson {
    left_dim: usize,
    right_dim: usize,
    target_dim: usize,
    entries: Vec<TableEntry>,
}

impl TableJson {
    fn into_table(self) -> Result<BilinearTable<Rat>> {
        let mut products = vec![SparseVec::new(); self.left_dim * self.right_dim];
        for e in self.entries {
            if e.i >= self.left_dim || e.j >= self.right_dim || e.k >= self.target_dim {
                return Err(Error::IndexOutOfRange(format!("table entry ({}, {}, {})", e.i, e.j, e.k)));
            }
            crate::linalg::add_entry(&mut products[e.i * self.right_dim + e.j], e.k, parse_rat(&e.c)?);
        }
        BilinearTable::new(self.left_dim, self.right_dim, self.target_dim, products)
    }

    fn from_table(t: &BilinearTable<Rat>) -> Self {
        let mut entries = Vec::new();
        for i in 0..t.left_dim() {
            for j in 0..t.right_dim() {
                for (&k, c) in t.product(i, j) {
                    entries.push(TableEntry { i, j, k, c: format_rat(c) });
                }
            }
        }
        TableJson { left_dim: t.left_dim(), right_dim: t.right_dim(), target_dim: t.target_dim(), entries }
    }
}

#[derive(Serialize, Deserialize)]
struct DualJson {
    low: TableJson,
    high: TableJson,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ModelJson {
    Rational {
        degree: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        canonical_mult: Option<TableJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dual_complex: Option<DualJson>,
    },
    QuadricPresented {
        n_vars: usize,
        #[serde(rename = "I2")]
        i2: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        canonical_mult: Option<TableJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dual_complex: Option<DualJson>,
    },
}

pub fn parse_model(bytes: &[u8]) -> Result<CurveModel<Rat>> {
    let (kind, canonical, dual) = match parse::<ModelJson>(bytes)? {
        ModelJson::Rational { degree, canonical_mult, dual_complex } => {
            if degree == 0 {
                return Err(Error::Malformed("a rational model needs degree >= 1".into()));
            }
            (ModelKind::Rational { degree }, canonical_mult, dual_complex)
        }
        ModelJson::QuadricPresented { n_vars, i2, canonical_mult, dual_complex } => {
            let i2 = i2.iter().map(|q| SymMatrix::from_upper(n_vars, parse_vec(q)?)).collect::<Result<Vec<_>>>()?;
            (ModelKind::QuadricPresented { n_vars, i2 }, canonical_mult, dual_complex)
        }
    };
    let canonical_mult = canonical.map(TableJson::into_table).transpose()?;
    let dual_complex = match dual {
        Some(d) => Some(MixedComplex::new(d.low.into_table()?, d.high.into_table()?)?),
        None => None,
    };
    Ok(CurveModel { kind, canonical_mult, dual_complex })
}

pub fn model_to_json(m: &CurveModel<Rat>) -> Value {
    let canonical_mult = m.canonical_mult.as_ref().map(TableJson::from_table);
    let dual_complex = m
        .dual_complex
        .as_ref()
        .map(|d| DualJson { low: TableJson::from_table(&d.low), high: TableJson::from_table(&d.high) });
    let model = match &m.kind {
        ModelKind::Rational { degree } => ModelJson::Rational { degree: *degree, canonical_mult, dual_complex },
        ModelKind::QuadricPresented { n_vars, i2 } => ModelJson::QuadricPresented {
            n_vars: *n_vars,
            i2: i2.iter().map(|q| format_vec(q.upper())).collect(),
            canonical_mult,
            dual_complex,
        },
    };
    serde_json::to_value(model).expect("serializable")
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    wedge: Vec<usize>,
    v: usize,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    p: usize,
    ambient_dim: usize,
    second_dim: usize,
    terms: Vec<TermJson>,
}

pub fn parse_class(bytes: &[u8]) -> Result<KoszulClass<Rat>> {
    let c: ClassJson = parse(bytes)?;
    let mut out = KoszulClass::zero(c.p, c.ambient_dim, c.second_dim);
    for t in c.terms {
        out.add_term(&t.wedge, t.v, parse_rat(&t.c)?)?;
    }
    Ok(out)
}

pub fn class_to_json(c: &KoszulClass<Rat>) -> Value {
    let terms = c.terms().map(|(w, v, x)| TermJson { wedge: w.to_vec(), v, c: format_rat(x) }).collect();
    serde_json::to_value(ClassJson { p: c.p(), ambient_dim: c.ambient_dim(), second_dim: c.second_dim(), terms })
        .expect("serializable")
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    pair: [usize; 2],
    value: Vec<String>,
}

fn skew_from_pairs(h: usize, target_dim: usize, pairs: &[PairJson]) -> Result<SkewMap<Rat>> {
    let mut d = SkewMap::zero(h, target_dim);
    let mut seen = std::collections::BTreeSet::new();
    for e in pairs {
        let [i, j] = e.pair;
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(Error::Malformed(format!("pair ({i},{j}) given twice")));
        }
        d.set_dense(i, j, &parse_vec(&e.value)?)?;
    }
    Ok(d)
}

fn pairs_of(d: &SkewMap<Rat>) -> Vec<PairJson> {
    d.entries().map(|((i, j), v)| PairJson { pair: [i, j], value: format_vec(&to_dense(v, d.target_dim())) }).collect()
}

#[derive(Serialize, Deserialize)]
struct DatumJson {
    h: usize,
    target_dim: usize,
    d: Vec<PairJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<Vec<String>>,
    #[serde(default, rename = "U", skip_serializing_if = "Option::is_none")]
    u: Option<Vec<Vec<String>>>,
}

/// A determinant datum file, optionally with a marked section and subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct DatumFile {
    pub datum: DeterminantDatum<Rat>,
    pub t: Option<Vec<Rat>>,
    pub u: Option<Vec<Vec<Rat>>>,
}

impl DatumFile {
    pub fn marked(&self) -> Result<(&[Rat], &[Vec<Rat>])> {
        match (&self.t, &self.u) {
            (Some(t), Some(u)) => Ok((t, u)),
            _ => Err(Error::Malformed("the datum file has no \"t\" and \"U\"".into())),
        }
    }
}

/// The four-term relation is not checked here; callers decide.
pub fn parse_datum(bytes: &[u8]) -> Result<DatumFile> {
    let j: DatumJson = parse(bytes)?;
    let d = skew_from_pairs(j.h, j.target_dim, &j.d)?;
    let t = j.t.as_deref().map(parse_vec).transpose()?;
    let u = j.u.as_ref().map(|u| u.iter().map(|v| parse_vec(v)).collect::<Result<Vec<_>>>()).transpose()?;
    if t.as_ref().is_some_and(|t| t.len() != j.h) || u.as_ref().is_some_and(|u| u.iter().any(|v| v.len() != j.h)) {
        return Err(Error::DimensionMismatch(format!("vectors of H must have length {}", j.h)));
    }
    Ok(DatumFile { datum: DeterminantDatum::new_unchecked(d), t, u })
}

pub fn datum_to_json(f: &DatumFile) -> Value {
    let d = f.datum.d();
    serde_json::to_value(DatumJson {
        h: d.h(),
        target_dim: d.target_dim(),
        d: pairs_of(d),
        t: f.t.as_deref().map(format_vec),
        u: f.u.as_ref().map(|u| u.iter().map(|v| format_vec(v)).collect()),
    })
    .expect("serializable")
}

#[derive(Serialize, Deserialize)]
struct KsJson {
    p: usize,
    target_dim: usize,
    entries: Vec<PairJson>,
}

pub fn parse_ks(bytes: &[u8]) -> Result<KSMatrix<Rat>> {
    let j: KsJson = parse(bytes)?;
    KSMatrix::new(skew_from_pairs(j.p + 3, j.target_dim, &j.entries)?)
}

pub fn ks_to_json(a: &KSMatrix<Rat>) -> Value {
    serde_json::to_value(KsJson { p: a.p(), target_dim: a.matrix().target_dim(), entries: pairs_of(a.matrix()) })
        .expect("serializable")
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    matrix: Vec<Vec<String>>,
}

/// `{"matrix": [[...]]}`, a numeric skew-symmetric matrix.
pub fn parse_numeric_matrix(bytes: &[u8]) -> Result<Vec<Vec<Rat>>> {
    let j: MatrixJson = parse(bytes)?;
    j.matrix.iter().map(|row| parse_vec(row)).collect()
}

#[derive(Serialize, Deserialize)]
struct VectorsJson {
    vectors: Vec<Vec<String>>,
}

/// `{"vectors": [[...]]}`.
pub fn parse_vectors(bytes: &[u8]) -> Result<Vec<Vec<Rat>>> {
    let j: VectorsJson = parse(bytes)?;
    j.vectors.iter().map(|v| parse_vec(v)).collect()
}

pub fn parse_subspace(bytes: &[u8], ambient_dim: usize) -> Result<SubspaceSpec<Rat>> {
    SubspaceSpec::new(&parse_vectors(bytes)?, ambient_dim)
}

/// A split datum is stored as its product table `H⁰(L₁) × H⁰(L₂) → V₁`.
pub fn parse_split(bytes: &[u8]) -> Result<SplitDatum<Rat>> {
    SplitDatum::new(parse::<TableJson>(bytes)?.into_table()?)
}

pub fn table_to_json(t: &BilinearTable<Rat>) -> Value {
    serde_json::to_value(TableJson::from_table(t)).expect("serializable")
}

pub fn vector_to_json(v: &[Rat]) -> Value {
    Value::from(format_vec(v))
}

pub fn vectors_to_json(vs: &[Vec<Rat>]) -> Value {
    Value::Array(vs.iter().map(|v| vector_to_json(v)).collect())
}

pub fn sparse_to_json(v: &SparseVec<Rat>) -> Value {
    let map: BTreeMap<String, String> = v.iter().map(|(k, x)| (k.to_string(), format_rat(x))).collect();
    serde_json::to_value(map).expect("serializable")
}

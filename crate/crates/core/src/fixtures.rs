//! Bundled tables and classification results, with a harness that recomputes
//! every quantity through the pipeline and compares exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::matrix::{tensor3_from_fn, zero_vec, PolyVec, Tensor3};
use crate::algebra::{parse_poly, Monomial, Param, Poly, PolyMatrix, Scope};
use crate::connections::{connection, levi_civita, nabla_j, ConnectionKind};
use crate::curvature::{curvature, Engine};
use crate::model::{build_group, Family, LieGroupModel};
use crate::soliton::{
    build_soliton_system_with, falsify_by_sampling, verify_family, FamilyJson, Grid, SolitonKind,
    SolitonSpec, SolitonSystem, SolutionFamily, Status,
};

/// Directory override for the fixture files.
pub const ENV_VAR: &str = "LIESOLITON_FIXTURES";

const BUNDLED: [(&str, &str); 7] = [
    ("g1.json", include_str!("../fixtures/g1.json")),
    ("g2.json", include_str!("../fixtures/g2.json")),
    ("g3.json", include_str!("../fixtures/g3.json")),
    ("g4.json", include_str!("../fixtures/g4.json")),
    ("g5.json", include_str!("../fixtures/g5.json")),
    ("g6.json", include_str!("../fixtures/g6.json")),
    ("g7.json", include_str!("../fixtures/g7.json")),
];

/// Every id the fixture suite must cover, once each.
pub const IN_SCOPE: &[&str] = &[
    // Levi-Civita
    "Lemma2.2", "Lemma2.12", "Lemma2.22", "Lemma2.30", "Lemma3.1", "Lemma3.9", "Lemma3.18",
    // ∇J
    "Lemma2.3", "Lemma2.13", "Lemma2.23", "Lemma2.31", "Lemma3.2", "Lemma3.10", "Lemma3.19",
    // ∇⁰ and ∇¹
    "Lemma2.4", "Lemma2.8", "Lemma2.14", "Lemma2.18", "Lemma2.24", "Lemma2.27", "Lemma2.32",
    "Lemma2.36", "Lemma3.3", "Lemma3.6", "Lemma3.11", "Lemma3.15", "Lemma3.20", "Lemma3.24",
    // curvature
    "Lemma2.5", "Lemma2.9", "Lemma2.15", "Lemma2.19", "Lemma2.25", "Lemma2.28", "Lemma2.33",
    "Lemma2.37", "Lemma3.4", "Lemma3.7", "Lemma3.12", "Lemma3.16", "Lemma3.21", "Lemma3.25",
    // Ricci operators
    "Eq2.22", "Eq2.25", "Eq2.30", "Eq2.33", "Eq2.41", "Eq2.44", "Eq2.50", "Eq2.54", "Eq2.64",
    "Eq2.69", "Eq2.78", "Eq2.81", "Eq2.86", "Eq2.89", "Eq3.5", "Eq3.15", "Eq3.18", "Eq3.23",
    "Eq3.31", "Eq3.34", "Eq3.39", "Eq3.42",
    // D = Ric - c Id
    "Eq2.23", "Eq2.26", "Eq2.31", "Eq2.34", "Eq2.42", "Eq2.45", "Eq2.51", "Eq2.55", "Eq2.65",
    "Eq2.70", "Eq2.79", "Eq2.82", "Eq2.87", "Eq2.90", "Eq3.6", "Eq3.16", "Eq3.19", "Eq3.24",
    "Eq3.32", "Eq3.35", "Eq3.40", "Eq3.43",
    // reduced systems
    "Eq2.46", "Eq2.52", "Eq2.56", "Eq2.66", "Eq2.71", "Eq2.80", "Eq2.83", "Eq2.88", "Eq2.91",
    "Eq3.17", "Eq3.20", "Eq3.25", "Eq3.33", "Eq3.36", "Eq3.41", "Eq3.44",
    // theorems
    "Thm2.6", "Thm2.7", "Thm2.10", "Thm2.11", "Thm2.16", "Thm2.17", "Thm2.20", "Thm2.21",
    "Thm2.26", "Thm2.29", "Thm2.34", "Thm2.35", "Thm2.38", "Thm2.39", "Thm3.5", "Thm3.8",
    "Thm3.13", "Thm3.14", "Thm3.17", "Thm3.22", "Thm3.23", "Thm3.26", "Thm3.27",
];

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{file}: {source}")]
    Json {
        file: String,
        source: serde_json::Error,
    },
    #[error("{file}: {id}: {message}")]
    Invalid {
        file: String,
        id: String,
        message: String,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileJson {
    family: String,
    #[serde(default)]
    abbreviations: Option<AbbreviationsJson>,
    fixtures: BTreeMap<String, FixtureJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AbbreviationsJson {
    #[allow(dead_code)]
    id: String,
    definitions: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureJson {
    family: String,
    quantity: String,
    #[serde(default)]
    connection: Option<String>,
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    kinds: Vec<String>,
    #[serde(default)]
    symmetrized: bool,
    #[serde(default)]
    entries: BTreeMap<String, [String; 3]>,
    #[serde(default)]
    matrix: Option<[[String; 3]; 3]>,
    #[serde(default)]
    equations: Vec<String>,
    #[serde(default)]
    cases: Vec<FamilyJson>,
    #[serde(default)]
    notes: Option<String>,
}

/// The printed value a fixture records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Connection {
        kind: ConnectionKind,
        gamma: Tensor3,
    },
    NablaJ {
        nj: Tensor3,
    },
    /// `R(e_i, e_j) e_k` for `i < j`; unlisted entries are zero.
    Curvature {
        kind: ConnectionKind,
        r: BTreeMap<(usize, usize, usize), PolyVec>,
    },
    Ricci {
        kind: ConnectionKind,
        symmetrized: bool,
        matrix: PolyMatrix,
    },
    Derivation {
        kind: ConnectionKind,
        soliton: SolitonKind,
        matrix: PolyMatrix,
    },
    /// Equations each of which must follow linearly from the derivation
    /// conditions.
    ReducedSystem {
        kind: ConnectionKind,
        soliton: SolitonKind,
        equations: Vec<Poly>,
    },
    Theorem {
        kind: ConnectionKind,
        kinds: Vec<SolitonKind>,
        cases: Vec<SolutionFamily>,
    },
    Nonexistence {
        kind: ConnectionKind,
        kinds: Vec<SolitonKind>,
    },
}

impl Expected {
    pub fn quantity(&self) -> &'static str {
        match self {
            Expected::Connection { .. } => "connection",
            Expected::NablaJ { .. } => "nabla_j",
            Expected::Curvature { .. } => "curvature",
            Expected::Ricci { .. } => "ricci",
            Expected::Derivation { .. } => "soliton_derivation",
            Expected::ReducedSystem { .. } => "reduced_system",
            Expected::Theorem { .. } => "theorem",
            Expected::Nonexistence { .. } => "nonexistence",
        }
    }

    pub fn connection(&self) -> Option<ConnectionKind> {
        match self {
            Expected::Connection { kind, .. }
            | Expected::Curvature { kind, .. }
            | Expected::Ricci { kind, .. }
            | Expected::Derivation { kind, .. }
            | Expected::ReducedSystem { kind, .. }
            | Expected::Theorem { kind, .. }
            | Expected::Nonexistence { kind, .. } => Some(*kind),
            Expected::NablaJ { .. } => Some(ConnectionKind::LeviCivita),
        }
    }

    /// Soliton kinds a theorem-like fixture speaks about.
    pub fn kinds(&self) -> Vec<SolitonKind> {
        match self {
            Expected::Derivation { soliton, .. } | Expected::ReducedSystem { soliton, .. } => vec![*soliton],
            Expected::Theorem { kinds, .. } | Expected::Nonexistence { kinds, .. } => kinds.clone(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub id: String,
    pub file: String,
    pub family: Family,
    pub expected: Expected,
    pub notes: Option<String>,
}

impl Fixture {
    /// Every polynomial the fixture records, in file order.
    pub fn polys(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        let tensor = |t: &Tensor3, out: &mut Vec<Poly>| out.extend(t.iter().flatten().flatten().cloned());
        let matrix = |m: &PolyMatrix, out: &mut Vec<Poly>| out.extend(m.rows().iter().flatten().cloned());
        match &self.expected {
            Expected::Connection { gamma, .. } => tensor(gamma, &mut out),
            Expected::NablaJ { nj } => tensor(nj, &mut out),
            Expected::Curvature { r, .. } => out.extend(r.values().flatten().cloned()),
            Expected::Ricci { matrix: m, .. } | Expected::Derivation { matrix: m, .. } => matrix(m, &mut out),
            Expected::ReducedSystem { equations, .. } => out.extend(equations.iter().cloned()),
            Expected::Theorem { cases, .. } => {
                for f in cases {
                    out.extend(f.substitution.values().cloned());
                    out.extend(f.relations.iter().cloned());
                    out.extend(f.inequations.iter().cloned());
                    for m in f.claimed_d.iter().chain(&f.claimed_ric) {
                        matrix(m, &mut out);
                    }
                }
            }
            Expected::Nonexistence { .. } => {}
        }
        out
    }
}

/// Sort key placing ids in document order: `Lemma2.22` and `Eq2.22` share a
/// number, lemmas first.
fn id_key(id: &str) -> (u32, u32, u8, String) {
    let digits = id.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    let prefix = &id[..id.len() - digits.len()];
    let mut nums = digits.split('.').map(|n| n.parse::<u32>().unwrap_or(u32::MAX));
    let rank = match prefix {
        "Lemma" => 0,
        "Eq" => 1,
        _ => 2,
    };
    (
        nums.next().unwrap_or(u32::MAX),
        nums.next().unwrap_or(u32::MAX),
        rank,
        id.to_string(),
    )
}

struct Resolver<'a> {
    file: &'a str,
    id: &'a str,
    model: &'a LieGroupModel,
    scope: BTreeSet<Param>,
    abbreviations: &'a BTreeMap<Param, Poly>,
}

impl Resolver<'_> {
    fn err(&self, message: impl Into<String>) -> FixtureError {
        FixtureError::Invalid {
            file: self.file.to_string(),
            id: self.id.to_string(),
            message: message.into(),
        }
    }

    fn poly(&self, text: &str) -> Result<Poly, FixtureError> {
        let p = parse_poly(text, Scope::Declared(&self.scope)).map_err(|e| self.err(format!("{text:?}: {e}")))?;
        Ok(self.model.normalize(&p.substitute(self.abbreviations)))
    }

    fn vector(&self, v: &[String; 3]) -> Result<PolyVec, FixtureError> {
        let [a, b, c] = v;
        Ok([self.poly(a)?, self.poly(b)?, self.poly(c)?])
    }

    fn matrix(&self, m: &Option<[[String; 3]; 3]>) -> Result<PolyMatrix, FixtureError> {
        let rows = m.as_ref().ok_or_else(|| self.err("missing matrix"))?;
        let mut out = PolyMatrix::zero();
        for (i, row) in rows.iter().enumerate() {
            for (j, t) in row.iter().enumerate() {
                out[(i, j)] = self.poly(t)?;
            }
        }
        Ok(out)
    }

    fn index(&self, key: &str, len: usize) -> Result<Vec<usize>, FixtureError> {
        let idx: Vec<usize> = key
            .chars()
            .map(|ch| match ch {
                '1'..='3' => Ok(ch as usize - '1' as usize),
                _ => Err(self.err(format!("bad entry key {key:?}"))),
            })
            .collect::<Result<_, _>>()?;
        if idx.len() != len {
            return Err(self.err(format!("entry key {key:?} should have {len} digits")));
        }
        Ok(idx)
    }

    fn table(&self, entries: &BTreeMap<String, [String; 3]>) -> Result<Tensor3, FixtureError> {
        let mut rows: BTreeMap<(usize, usize), PolyVec> = BTreeMap::new();
        for (key, v) in entries {
            let idx = self.index(key, 2)?;
            rows.insert((idx[0], idx[1]), self.vector(v)?);
        }
        Ok(tensor3_from_fn(|i, j, k| {
            rows.get(&(i, j)).map(|v| v[k].clone()).unwrap_or_else(Poly::zero)
        }))
    }

    fn connection(&self, name: &Option<String>) -> Result<ConnectionKind, FixtureError> {
        let name = name.as_deref().ok_or_else(|| self.err("missing connection"))?;
        name.parse().map_err(|e| self.err(format!("{e}")))
    }

    fn soliton_kind(&self, name: &str) -> Result<SolitonKind, FixtureError> {
        name.parse().map_err(|e| self.err(format!("{e}")))
    }

    fn kinds(&self, names: &[String]) -> Result<Vec<SolitonKind>, FixtureError> {
        if names.is_empty() {
            return Err(self.err("missing kinds"));
        }
        names.iter().map(|k| self.soliton_kind(k)).collect()
    }
}

/// Parses one fixture file.
pub fn parse_file(file: &str, text: &str) -> Result<Vec<Fixture>, FixtureError> {
    let doc: FileJson = serde_json::from_str(text).map_err(|source| FixtureError::Json {
        file: file.to_string(),
        source,
    })?;
    let invalid = |id: &str, message: String| FixtureError::Invalid {
        file: file.to_string(),
        id: id.to_string(),
        message,
    };
    let family: Family = doc.family.parse().map_err(|e| invalid("", format!("{e}")))?;
    let model = build_group(family);
    let base_scope = model.params_with_c();
    let mut abbreviations = BTreeMap::new();
    if let Some(a) = &doc.abbreviations {
        for (name, def) in &a.definitions {
            let p = Param::new(name).ok_or_else(|| invalid("", format!("bad abbreviation name {name:?}")))?;
            let value =
                parse_poly(def, Scope::Declared(&base_scope)).map_err(|e| invalid("", format!("{name}: {e}")))?;
            abbreviations.insert(p, value);
        }
    }
    let mut scope = base_scope.clone();
    scope.extend(abbreviations.keys().cloned());

    let mut out = Vec::new();
    for (id, f) in &doc.fixtures {
        let r = Resolver {
            file,
            id,
            model: &model,
            scope: scope.clone(),
            abbreviations: &abbreviations,
        };
        let fam: Family = f.family.parse().map_err(|e| r.err(format!("{e}")))?;
        if fam != family {
            return Err(r.err(format!("family {fam} inside the {family} file")));
        }
        let expected = match f.quantity.as_str() {
            "connection" => Expected::Connection {
                kind: r.connection(&f.connection)?,
                gamma: r.table(&f.entries)?,
            },
            "nabla_j" => Expected::NablaJ {
                nj: r.table(&f.entries)?,
            },
            "curvature" => {
                let mut map: BTreeMap<(usize, usize, usize), PolyVec> = BTreeMap::new();
                for i in 0..3 {
                    for j in i + 1..3 {
                        for k in 0..3 {
                            map.insert((i, j, k), zero_vec());
                        }
                    }
                }
                for (key, v) in &f.entries {
                    let idx = r.index(key, 3)?;
                    if idx[0] >= idx[1] {
                        return Err(r.err(format!("curvature key {key:?} needs i < j")));
                    }
                    map.insert((idx[0], idx[1], idx[2]), r.vector(v)?);
                }
                Expected::Curvature {
                    kind: r.connection(&f.connection)?,
                    r: map,
                }
            }
            "ricci" => Expected::Ricci {
                kind: r.connection(&f.connection)?,
                symmetrized: f.symmetrized,
                matrix: r.matrix(&f.matrix)?,
            },
            "soliton_derivation" | "reduced_system" => {
                let kind = r.connection(&f.connection)?;
                let soliton = r.soliton_kind(f.kind.as_deref().ok_or_else(|| r.err("missing kind"))?)?;
                if f.quantity == "soliton_derivation" {
                    Expected::Derivation {
                        kind,
                        soliton,
                        matrix: r.matrix(&f.matrix)?,
                    }
                } else {
                    if f.equations.is_empty() {
                        return Err(r.err("missing equations"));
                    }
                    Expected::ReducedSystem {
                        kind,
                        soliton,
                        equations: f.equations.iter().map(|e| r.poly(e)).collect::<Result<_, _>>()?,
                    }
                }
            }
            "theorem" => {
                if f.cases.is_empty() {
                    return Err(r.err("theorem without cases"));
                }
                let cases = f
                    .cases
                    .iter()
                    .map(|c| c.resolve(&model).map_err(|e| r.err(format!("{e}"))))
                    .collect::<Result<_, _>>()?;
                Expected::Theorem {
                    kind: r.connection(&f.connection)?,
                    kinds: r.kinds(&f.kinds)?,
                    cases,
                }
            }
            "nonexistence" => Expected::Nonexistence {
                kind: r.connection(&f.connection)?,
                kinds: r.kinds(&f.kinds)?,
            },
            other => return Err(r.err(format!("unknown quantity {other:?}"))),
        };
        out.push(Fixture {
            id: id.clone(),
            file: file.to_string(),
            family,
            expected,
            notes: f.notes.clone(),
        });
    }
    Ok(out)
}

fn sorted(mut v: Vec<Fixture>) -> Vec<Fixture> {
    v.sort_by_key(|f| id_key(&f.id));
    v
}

pub fn load_bundled() -> Result<Vec<Fixture>, FixtureError> {
    let mut all = Vec::new();
    for (name, text) in BUNDLED {
        all.extend(parse_file(name, text)?);
    }
    Ok(sorted(all))
}

/// Loads every `*.json` file in `dir`.
pub fn load_dir(dir: &Path) -> Result<Vec<Fixture>, FixtureError> {
    let io = |path: &Path, source| FixtureError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut all = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(|e| io(&p, e))?;
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        all.extend(parse_file(&name, &text)?);
    }
    Ok(sorted(all))
}

/// Bundled fixtures, or the directory named by [`ENV_VAR`] when set.
pub fn load() -> Result<Vec<Fixture>, FixtureError> {
    match std::env::var_os(ENV_VAR) {
        Some(dir) if !dir.is_empty() => load_dir(Path::new(&dir)),
        _ => load_bundled(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coverage {
    pub missing: Vec<String>,
    pub unexpected: Vec<String>,
    pub duplicated: Vec<String>,
}

impl Coverage {
    pub fn is_complete(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty() && self.duplicated.is_empty()
    }
}

pub fn coverage(fixtures: &[Fixture]) -> Coverage {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for f in fixtures {
        *seen.entry(f.id.as_str()).or_default() += 1;
    }
    let wanted: BTreeSet<&str> = IN_SCOPE.iter().copied().collect();
    Coverage {
        missing: wanted.iter().filter(|id| !seen.contains_key(*id)).map(|s| s.to_string()).collect(),
        unexpected: seen.keys().filter(|id| !wanted.contains(*id)).map(|s| s.to_string()).collect(),
        duplicated: seen.iter().filter(|(_, n)| **n > 1).map(|(id, _)| id.to_string()).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Match,
    Mismatch,
    Pass,
    Fail,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Match | Verdict::Pass)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One entry where the printed and recomputed values differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub location: String,
    pub expected: Poly,
    pub actual: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub id: String,
    pub family: String,
    pub quantity: &'static str,
    pub verdict: Verdict,
    pub discrepancies: Vec<Discrepancy>,
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl FixtureReport {
    /// A failure without a recorded reinterpretation.
    pub fn is_unexplained(&self) -> bool {
        !self.verdict.is_ok() && self.notes.is_none()
    }
}

fn compare_vec(out: &mut Vec<Discrepancy>, label: &str, expected: &PolyVec, actual: &PolyVec) {
    for k in 0..3 {
        if expected[k] != actual[k] {
            out.push(Discrepancy {
                location: format!("{label} : e{}", k + 1),
                expected: expected[k].clone(),
                actual: actual[k].clone(),
            });
        }
    }
}

fn compare_tensor(out: &mut Vec<Discrepancy>, label: impl Fn(usize, usize) -> String, expected: &Tensor3, actual: &Tensor3) {
    for i in 0..3 {
        for j in 0..3 {
            compare_vec(out, &label(i, j), &expected[i][j], &actual[i][j]);
        }
    }
}

fn compare_matrix(out: &mut Vec<Discrepancy>, name: &str, expected: &PolyMatrix, actual: &PolyMatrix) {
    for (i, j) in expected.diff_positions(actual) {
        out.push(Discrepancy {
            location: format!("{name}[{},{}]", i + 1, j + 1),
            expected: expected[(i, j)].clone(),
            actual: actual[(i, j)].clone(),
        });
    }
}

/// Row-echelon basis of a set of polynomials over the rationals, keyed by
/// leading monomial.
struct Echelon {
    rows: BTreeMap<Monomial, Poly>,
}

impl Echelon {
    fn new(polys: &[Poly]) -> Echelon {
        let mut e = Echelon { rows: BTreeMap::new() };
        for p in polys {
            let r = e.reduce(p);
            if let Some((m, _)) = r.leading_term() {
                let m = m.clone();
                e.rows.insert(m, r.monic());
            }
        }
        e
    }

    /// Remainder after eliminating every pivot monomial.
    fn reduce(&self, p: &Poly) -> Poly {
        let mut r = p.clone();
        loop {
            let hit = r
                .terms()
                .find(|(m, _)| self.rows.contains_key(*m))
                .map(|(m, c)| (m.clone(), c.clone()));
            match hit {
                Some((m, c)) => r = &r - &self.rows[&m].scale(&c),
                None => return r,
            }
        }
    }
}

fn multipliers(m: &LieGroupModel) -> Vec<Poly> {
    let ineq: Vec<&Poly> = m.inequations.iter().filter(|q| !q.is_constant()).collect();
    let mut out = vec![Poly::one()];
    out.extend(ineq.iter().map(|q| (*q).clone()));
    for (n, a) in ineq.iter().enumerate() {
        for b in &ineq[n..] {
            out.push(*a * *b);
        }
    }
    out
}

fn systems(engine: &Engine, m: &LieGroupModel, kind: ConnectionKind, soliton: SolitonKind) -> Vec<SolitonSystem> {
    SolitonSpec::enumerate(m, kind, soliton)
        .expect("bundled families admit soliton specs")
        .iter()
        .map(|s| build_soliton_system_with(engine, s))
        .collect()
}

fn eta_label(sys: &SolitonSystem) -> String {
    match sys.eta() {
        Some(v) => format!(" eta = {v}"),
        None => String::new(),
    }
}

/// Recomputes a fixture's quantity and compares it with the printed value.
pub fn check_fixture(engine: &Engine, f: &Fixture) -> FixtureReport {
    let m = build_group(f.family);
    let mut discrepancies = Vec::new();
    let mut details = Vec::new();
    let mut failed = false;
    let theorem_like = matches!(f.expected, Expected::Theorem { .. } | Expected::Nonexistence { .. });
    match &f.expected {
        Expected::Connection { kind, gamma } => {
            let actual = connection(&m, *kind);
            let sym = kind.symbol();
            compare_tensor(&mut discrepancies, |i, j| format!("{sym}_e{} e{}", i + 1, j + 1), gamma, &actual.gamma);
        }
        Expected::NablaJ { nj } => {
            let actual = nabla_j(&m, &levi_civita(&m));
            compare_tensor(&mut discrepancies, |i, j| format!("(nabla_e{} J) e{}", i + 1, j + 1), nj, &actual.nj);
        }
        Expected::Curvature { kind, r } => {
            let actual = curvature(&m, &connection(&m, *kind));
            for (&(i, j, k), v) in r {
                let label = format!("R(e{},e{})e{}", i + 1, j + 1, k + 1);
                compare_vec(&mut discrepancies, &label, v, &actual.r[i][j][k]);
            }
        }
        Expected::Ricci { kind, symmetrized, matrix } => {
            let actual = engine.ricci(&m, *kind, *symmetrized);
            compare_matrix(&mut discrepancies, "Ric", matrix, &actual.ric);
        }
        Expected::Derivation { kind, soliton, matrix } => {
            for sys in systems(engine, &m, *kind, *soliton) {
                let expected = match sys.eta() {
                    Some(v) => {
                        let fix = BTreeMap::from([(Param::eta(), Poly::int(v))]);
                        matrix.map(|p| sys.model.normalize(&p.substitute(&fix)))
                    }
                    None => matrix.clone(),
                };
                compare_matrix(&mut discrepancies, &format!("D{}", eta_label(&sys)), &expected, &sys.derivation);
            }
        }
        Expected::ReducedSystem { kind, soliton, equations } => {
            for sys in systems(engine, &m, *kind, *soliton) {
                let fix: BTreeMap<Param, Poly> =
                    sys.eta().map(|v| (Param::eta(), Poly::int(v))).into_iter().collect();
                let basis: Vec<Poly> = sys.equations.iter().map(|e| sys.model.reduce(e)).collect();
                let echelon = Echelon::new(&basis);
                let mults = multipliers(&sys.model);
                for (n, eq) in equations.iter().enumerate() {
                    let eq = sys.model.normalize(&eq.substitute(&fix));
                    let hit = mults
                        .iter()
                        .find(|mu| echelon.reduce(&sys.model.reduce(&(*mu * &eq))).is_zero());
                    match hit {
                        Some(mu) if !mu.is_constant() => {
                            details.push(format!("equation {}{} follows after multiplying by {mu}", n + 1, eta_label(&sys)))
                        }
                        Some(_) => {}
                        None => discrepancies.push(Discrepancy {
                            location: format!("equation {}{}", n + 1, eta_label(&sys)),
                            expected: eq.clone(),
                            actual: echelon.reduce(&sys.model.reduce(&eq)),
                        }),
                    }
                }
            }
        }
        Expected::Theorem { kind, kinds, cases } => {
            let grid = Grid::default();
            for soliton in kinds {
                let mut used = vec![false; cases.len()];
                for sys in systems(engine, &m, *kind, *soliton) {
                    let tag = format!("{soliton}{}", eta_label(&sys));
                    for (n, case) in cases.iter().enumerate() {
                        let rep = verify_family(&sys, case);
                        if rep.status == Status::NotApplicable {
                            continue;
                        }
                        used[n] = true;
                        details.push(format!("{tag} {}: {}", case.label, rep.status.name()));
                        if let Some((eq, rest)) = &rep.failing_equation {
                            details.push(format!("{tag} {}: equation {eq} leaves {rest}", case.label));
                        }
                        details.extend(rep.problems.iter().map(|p| format!("{tag} {}: {p}", case.label)));
                        for (name, diffs) in [("D", &rep.d_diffs), ("Ric", &rep.ric_diffs)] {
                            for d in diffs {
                                discrepancies.push(Discrepancy {
                                    location: format!("{tag} {} {name}[{},{}]", case.label, d.row + 1, d.col + 1),
                                    expected: d.expected.clone(),
                                    actual: d.actual.clone(),
                                });
                            }
                        }
                        failed |= rep.status == Status::Fail;
                    }
                    let found = falsify_by_sampling(&sys, &grid, cases);
                    details.push(format!("{tag}: {} grid solutions outside the stated cases", found.len()));
                    for c in &found {
                        details.push(format!("{tag}: uncovered solution {c}"));
                    }
                    failed |= !found.is_empty();
                }
                for (n, u) in used.iter().enumerate() {
                    if !u {
                        details.push(format!("{soliton} {}: applies to no eta value", cases[n].label));
                        failed = true;
                    }
                }
            }
        }
        Expected::Nonexistence { kind, kinds } => {
            let grid = Grid::default();
            for soliton in kinds {
                for sys in systems(engine, &m, *kind, *soliton) {
                    let tag = format!("{soliton}{}", eta_label(&sys));
                    let found = falsify_by_sampling(&sys, &grid, &[]);
                    details.push(format!("{tag}: {} grid solutions", found.len()));
                    for c in &found {
                        details.push(format!("{tag}: solution {c}"));
                    }
                    failed |= !found.is_empty();
                }
            }
        }
    }
    let verdict = match (theorem_like, failed || !discrepancies.is_empty()) {
        (false, false) => Verdict::Match,
        (false, true) => Verdict::Mismatch,
        (true, false) => Verdict::Pass,
        (true, true) => Verdict::Fail,
    };
    FixtureReport {
        id: f.id.clone(),
        family: f.family.name().to_string(),
        quantity: f.expected.quantity(),
        verdict,
        discrepancies,
        details,
        notes: f.notes.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub counts: BTreeMap<Verdict, usize>,
    pub unexplained: usize,
    pub reports: Vec<FixtureReport>,
}

impl Summary {
    pub fn count(&self, v: Verdict) -> usize {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    pub fn is_clean(&self) -> bool {
        self.unexplained == 0
    }
}

/// Checks fixtures in parallel; reports keep the input order.
pub fn run_all(engine: &Engine, fixtures: &[Fixture]) -> Summary {
    let reports: Vec<FixtureReport> = fixtures.par_iter().map(|f| check_fixture(engine, f)).collect();
    let mut counts = BTreeMap::new();
    for r in &reports {
        *counts.entry(r.verdict).or_insert(0) += 1;
    }
    Summary {
        counts,
        unexplained: reports.iter().filter(|r| r.is_unexplained()).count(),
        reports,
    }
}

/// Number of table fixtures that stop matching when the engine raises
/// indices without the timelike sign. A working harness reports many.
pub fn mutation_self_test(fixtures: &[Fixture]) -> usize {
    let tables: Vec<Fixture> = fixtures
        .iter()
        .filter(|f| !matches!(f.expected, Expected::Theorem { .. } | Expected::Nonexistence { .. }))
        .cloned()
        .collect();
    run_all(&Engine::with_dropped_timelike_sign(), &tables).count(Verdict::Mismatch)
}

/// Prints a polynomial and parses it back.
pub fn reparse(p: &Poly) -> Option<Poly> {
    parse_poly(&p.to_string(), Scope::Any).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundled() -> Vec<Fixture> {
        load_bundled().unwrap()
    }

    fn find<'a>(all: &'a [Fixture], id: &str) -> &'a Fixture {
        all.iter().find(|f| f.id == id).unwrap()
    }

    #[test]
    fn coverage_is_exact() {
        let c = coverage(&bundled());
        assert!(c.is_complete(), "{c:?}");
        assert_eq!(IN_SCOPE.len(), 125);
    }

    #[test]
    fn ricci_fixture_matches() {
        let all = bundled();
        let r = check_fixture(&Engine::default(), find(&all, "Eq2.22"));
        assert_eq!(r.verdict, Verdict::Match, "{r:?}");
    }

    #[test]
    fn flat_lemma_matches_zero_tensor() {
        let all = bundled();
        let f = find(&all, "Lemma3.7");
        assert!(f.polys().iter().all(Poly::is_zero));
        assert_eq!(check_fixture(&Engine::default(), f).verdict, Verdict::Match);
    }

    #[test]
    fn one_flipped_sign_is_one_mismatch() {
        let all = bundled();
        let mut f = find(&all, "Eq2.22").clone();
        if let Expected::Ricci { matrix, .. } = &mut f.expected {
            matrix[(2, 1)] = -&matrix[(2, 1)];
        }
        let r = check_fixture(&Engine::default(), &f);
        assert_eq!(r.verdict, Verdict::Mismatch);
        assert_eq!(r.discrepancies.len(), 1);
        assert_eq!(r.discrepancies[0].location, "Ric[3,2]");
    }

    #[test]
    fn label_typo_is_annotated() {
        let all = bundled();
        let f = find(&all, "Lemma2.8");
        assert!(f.notes.as_deref().unwrap().contains("nabla^0"));
        let r = check_fixture(&Engine::default(), f);
        assert_eq!(r.verdict, Verdict::Match);
        assert!(!r.is_unexplained());
    }

    #[test]
    fn ids_sort_in_document_order() {
        let mut ids = vec!["Thm2.6", "Eq2.22", "Lemma2.22", "Lemma2.4", "Thm3.5"];
        ids.sort_by_key(|i| id_key(i));
        assert_eq!(ids, ["Lemma2.4", "Thm2.6", "Lemma2.22", "Eq2.22", "Thm3.5"]);
    }

    #[test]
    fn echelon_membership() {
        let p = |s: &str| parse_poly(s, Scope::Any).unwrap();
        let e = Echelon::new(&[p("alpha + beta"), p("alpha - beta")]);
        assert!(e.reduce(&p("3*alpha")).is_zero());
        assert!(!e.reduce(&p("alpha*beta")).is_zero());
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(parse_file("x.json", "{").is_err());
        let bad = r#"{"family": "G1", "fixtures": {"Eq2.22": {"family": "G1", "quantity": "ricci",
            "connection": "canonical", "matrix": [["zeta","0","0"],["0","0","0"],["0","0","0"]]}}}"#;
        assert!(matches!(parse_file("x.json", bad), Err(FixtureError::Invalid { .. })));
        let wrong = r#"{"family": "G1", "fixtures": {"X": {"family": "G1", "quantity": "volume"}}}"#;
        assert!(parse_file("x.json", wrong).is_err());
    }
}

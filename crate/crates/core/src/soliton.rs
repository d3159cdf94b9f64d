//! Algebraic Ricci soliton systems, verification of claimed solution
//! families, and exact grid falsification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::algebra::{
    basis, parse_poly, parse_rational, rational, CompiledPoly, Param, ParseError, Poly,
    PolyMatrix, Rational, Scope,
};
use crate::connections::ConnectionKind;
use crate::curvature::Engine;
use crate::model::LieGroupModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolitonKind {
    First,
    Second,
}

impl SolitonKind {
    pub const ALL: [SolitonKind; 2] = [SolitonKind::First, SolitonKind::Second];

    pub fn name(&self) -> &'static str {
        match self {
            SolitonKind::First => "first",
            SolitonKind::Second => "second",
        }
    }

    pub fn symmetrized(&self) -> bool {
        *self == SolitonKind::Second
    }
}

impl fmt::Display for SolitonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown soliton kind {0:?}; expected first or second")]
pub struct UnknownKind(pub String);

impl FromStr for SolitonKind {
    type Err = UnknownKind;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(SolitonKind::First),
            "second" => Ok(SolitonKind::Second),
            _ => Err(UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("soliton systems use the canonical or Kobayashi-Nomizu connection")]
    LeviCivita,
    #[error("model {0} has an involutive eta; choose eta = 1 or eta = -1")]
    MissingEta(String),
    #[error("model {0} declares no involutive eta")]
    UnexpectedEta(String),
    #[error("eta must be 1 or -1, got {0}")]
    BadEta(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolitonSpec {
    pub model: LieGroupModel,
    pub connection: ConnectionKind,
    pub kind: SolitonKind,
    pub eta_value: Option<i64>,
}

impl SolitonSpec {
    pub fn new(
        model: LieGroupModel,
        connection: ConnectionKind,
        kind: SolitonKind,
        eta_value: Option<i64>,
    ) -> Result<SolitonSpec, SpecError> {
        if connection == ConnectionKind::LeviCivita {
            return Err(SpecError::LeviCivita);
        }
        match (model.has_symbolic_eta(), eta_value) {
            (true, None) => return Err(SpecError::MissingEta(model.name.clone())),
            (false, Some(_)) => return Err(SpecError::UnexpectedEta(model.name.clone())),
            (_, Some(v)) if v != 1 && v != -1 => return Err(SpecError::BadEta(v)),
            _ => {}
        }
        Ok(SolitonSpec {
            model,
            connection,
            kind,
            eta_value,
        })
    }

    /// One spec per admissible eta value of the model.
    pub fn enumerate(
        model: &LieGroupModel,
        connection: ConnectionKind,
        kind: SolitonKind,
    ) -> Result<Vec<SolitonSpec>, SpecError> {
        model
            .eta_values()
            .into_iter()
            .map(|eta| SolitonSpec::new(model.clone(), connection, kind, eta))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolitonSystem {
    pub spec: SolitonSpec,
    /// The model with `eta` fixed to the spec's value.
    pub model: LieGroupModel,
    /// Ricci operator, symmetrized for the second kind.
    pub ricci: PolyMatrix,
    /// `D = Ric - c Id`.
    pub derivation: PolyMatrix,
    /// The nine derivation residual components, in pair order 12, 13, 23.
    pub residual: Vec<Poly>,
    /// Nonzero residual components with duplicates removed.
    pub equations: Vec<Poly>,
    /// Equations reduced by the constraints, with inequation factors divided
    /// out, made monic, deduplicated and sorted.
    pub reduced_equations: Vec<Poly>,
    pub inequations: Vec<Poly>,
    pub constraints: Vec<Poly>,
}

/// `D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]` for the pairs 12, 13, 23.
pub fn derivation_residual(m: &LieGroupModel, d: &PolyMatrix) -> Vec<Poly> {
    let mut out = Vec::with_capacity(9);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (ei, ej) = (basis(i), basis(j));
        let lhs = d.apply(&m.bracket(&ei, &ej));
        let a = m.bracket(&d.apply(&ei), &ej);
        let b = m.bracket(&ei, &d.apply(&ej));
        for k in 0..3 {
            out.push(m.normalize(&(&(&lhs[k] - &a[k]) - &b[k])));
        }
    }
    out
}

fn c_poly() -> Poly {
    Poly::var(Param::c())
}

pub fn build_soliton_system(spec: &SolitonSpec) -> SolitonSystem {
    build_soliton_system_with(&Engine::default(), spec)
}

pub fn build_soliton_system_with(engine: &Engine, spec: &SolitonSpec) -> SolitonSystem {
    let model = spec.model.with_eta(spec.eta_value);
    let ricci = engine.ricci(&model, spec.connection, spec.kind.symmetrized()).ric;
    let derivation = &ricci - &PolyMatrix::identity().map(|p| p * &c_poly());
    let residual = derivation_residual(&model, &derivation);
    let mut equations: Vec<Poly> = Vec::new();
    for r in &residual {
        if !r.is_zero() && !equations.contains(r) {
            equations.push(r.clone());
        }
    }
    let reduced_equations = reduce_equations(&model, &equations);
    SolitonSystem {
        spec: spec.clone(),
        inequations: model.inequations.clone(),
        constraints: model.constraints.clone(),
        model,
        ricci,
        derivation,
        residual,
        equations,
        reduced_equations,
    }
}

/// Divides out every factor that is a declared inequation, then makes monic.
fn strip_inequations(p: &Poly, inequations: &[Poly]) -> Poly {
    let mut p = p.clone();
    loop {
        let mut changed = false;
        for q in inequations.iter().filter(|q| !q.is_constant()) {
            if let Some(quot) = p.exact_div(q) {
                p = quot;
                changed = true;
            }
        }
        if !changed {
            return p.monic();
        }
    }
}

fn reduce_equations(m: &LieGroupModel, equations: &[Poly]) -> Vec<Poly> {
    let set: BTreeSet<Poly> = equations
        .iter()
        .map(|e| m.reduce(e))
        .filter(|e| !e.is_zero())
        .map(|e| strip_inequations(&e, &m.inequations))
        .collect();
    set.into_iter().collect()
}

impl SolitonSystem {
    /// The value of `eta` the system was built for.
    pub fn eta(&self) -> Option<i64> {
        self.spec.eta_value
    }

    /// Free parameters of the system: model parameters and `c`.
    pub fn unknowns(&self) -> Vec<Param> {
        self.model.params_with_c().into_iter().collect()
    }
}

/// A claimed solution set: parameters fixed by the substitution, remaining
/// parameters free subject to `relations` (identically zero) and
/// `inequations` (nonzero).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolutionFamily {
    pub label: String,
    pub eta: Option<i64>,
    pub substitution: BTreeMap<Param, Poly>,
    pub relations: Vec<Poly>,
    pub inequations: Vec<Poly>,
    pub claimed_d: Option<PolyMatrix>,
    pub claimed_ric: Option<PolyMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotApplicable => "N/A",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDiff {
    pub row: usize,
    pub col: usize,
    pub expected: Poly,
    pub actual: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub label: String,
    pub status: Status,
    /// First equation that does not vanish, and what it reduces to.
    pub failing_equation: Option<(Poly, Poly)>,
    pub problems: Vec<String>,
    pub d_diffs: Vec<EntryDiff>,
    pub ric_diffs: Vec<EntryDiff>,
}

fn matrix_diffs(expected: &PolyMatrix, actual: &PolyMatrix) -> Vec<EntryDiff> {
    expected
        .diff_positions(actual)
        .into_iter()
        .map(|(row, col)| EntryDiff {
            row,
            col,
            expected: expected[(row, col)].clone(),
            actual: actual[(row, col)].clone(),
        })
        .collect()
}

impl SolutionFamily {
    pub fn applies_to(&self, eta: Option<i64>) -> bool {
        match self.eta {
            None => true,
            Some(v) => eta == Some(v),
        }
    }

    /// Substitutes, fixes `eta` when the system has a value for it, then
    /// reduces modulo `eta^2 - 1`, the substituted model constraints and the
    /// family relations.
    fn reducer<'a>(&'a self, m: &'a LieGroupModel, eta: Option<i64>) -> impl Fn(&Poly) -> Poly + 'a {
        let fix: BTreeMap<Param, Poly> = eta.map(|v| (Param::eta(), Poly::int(v))).into_iter().collect();
        let subst = move |p: &Poly| m.normalize(&p.substitute(&self.substitution).substitute(&fix));
        let mut rels: Vec<Poly> = m
            .constraints
            .iter()
            .chain(&self.relations)
            .map(&subst)
            .filter(|c| !c.is_zero())
            .collect();
        rels.dedup();
        move |p: &Poly| m.normalize(&subst(p).reduce_modulo(&rels))
    }
}

pub fn verify_family(sys: &SolitonSystem, fam: &SolutionFamily) -> FamilyReport {
    let mut report = FamilyReport {
        label: fam.label.clone(),
        status: Status::Pass,
        failing_equation: None,
        problems: Vec::new(),
        d_diffs: Vec::new(),
        ric_diffs: Vec::new(),
    };
    if !fam.applies_to(sys.eta()) {
        report.status = Status::NotApplicable;
        return report;
    }
    let m = &sys.model;
    let unknowns: BTreeSet<Param> = m.params_with_c();
    for (p, rhs) in &fam.substitution {
        if !unknowns.contains(p) {
            report.problems.push(format!("substitution target {p} is not a parameter"));
        }
        for q in rhs.params() {
            if fam.substitution.contains_key(&q) {
                report
                    .problems
                    .push(format!("right-hand side for {p} mentions substituted {q}"));
            }
        }
    }
    let reduce = fam.reducer(m, sys.eta());
    for (n, rel) in fam.relations.iter().enumerate() {
        if fam.relations[..n].contains(rel) || rel.is_zero() {
            continue;
        }
        if rel.params().iter().any(|q| fam.substitution.contains_key(q)) {
            report.problems.push(format!("relation {rel} mentions a substituted parameter"));
        }
    }
    for q in m.inequations.iter().chain(&fam.inequations) {
        if reduce(q).is_zero() {
            report.problems.push(format!("inequation {q} vanishes identically"));
        }
    }
    for eq in &sys.equations {
        let r = reduce(eq);
        if !r.is_zero() {
            report.failing_equation = Some((eq.clone(), r));
            break;
        }
    }
    if let Some(claimed) = &fam.claimed_d {
        report.d_diffs = matrix_diffs(&claimed.map(&reduce), &sys.derivation.map(&reduce));
    }
    if let Some(claimed) = &fam.claimed_ric {
        report.ric_diffs = matrix_diffs(&claimed.map(&reduce), &sys.ricci.map(&reduce));
    }
    if report.failing_equation.is_some()
        || !report.problems.is_empty()
        || !report.d_diffs.is_empty()
        || !report.ric_diffs.is_empty()
    {
        report.status = Status::Fail;
    }
    report
}

/// Finite value sets for grid falsification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub values: Vec<Rational>,
    pub eta: Vec<i64>,
}

impl Default for Grid {
    /// `{-2, -3/2, ..., 2}` and `eta` in `{1, -1}`.
    fn default() -> Self {
        Grid {
            values: (-4..=4).map(|n| rational(n, 2)).collect(),
            eta: vec![1, -1],
        }
    }
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Poly {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    values: Vec<Scalar>,
    #[serde(default = "default_etas")]
    eta: Vec<i64>,
}

fn default_etas() -> Vec<i64> {
    vec![1, -1]
}

impl Grid {
    pub fn from_json(text: &str) -> Result<Grid, InputError> {
        let file: GridFile = serde_json::from_str(text)?;
        let mut values = Vec::new();
        for (n, v) in file.values.into_iter().enumerate() {
            values.push(match v {
                Scalar::Int(i) => rational(i, 1),
                Scalar::Text(t) => parse_rational(&t).map_err(|source| InputError::Poly {
                    field: format!("values[{n}]"),
                    source,
                })?,
            });
        }
        if values.is_empty() {
            return Err(InputError::Invalid("grid has no values".into()));
        }
        if let Some(bad) = file.eta.iter().find(|e| e.abs() != 1) {
            return Err(InputError::Invalid(format!("eta value {bad} is not 1 or -1")));
        }
        values.sort();
        values.dedup();
        Ok(Grid {
            values,
            eta: file.eta,
        })
    }
}

/// Serialized form of a solution family, shared by family files and theorem
/// fixtures. Matrices are given row by row.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub eta: Option<i64>,
    #[serde(default)]
    pub substitution: BTreeMap<String, String>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub inequations: Vec<String>,
    #[serde(default, rename = "D")]
    pub d: Option<[[String; 3]; 3]>,
    #[serde(default)]
    pub ric: Option<[[String; 3]; 3]>,
}

pub fn parse_matrix(
    rows: &[[String; 3]; 3],
    scope: Scope<'_>,
    field: &str,
) -> Result<PolyMatrix, InputError> {
    let mut m = PolyMatrix::zero();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = parse_poly(&rows[i][j], scope).map_err(|source| InputError::Poly {
                field: format!("{field}[{i}][{j}]"),
                source,
            })?;
        }
    }
    Ok(m)
}

impl FamilyJson {
    /// Resolves against the parameters of `model` plus `c`.
    pub fn resolve(&self, model: &LieGroupModel) -> Result<SolutionFamily, InputError> {
        let scope_set = model.params_with_c();
        let scope = Scope::Declared(&scope_set);
        let parse = |field: String, text: &str| {
            parse_poly(text, scope).map_err(|source| InputError::Poly { field, source })
        };
        let mut substitution = BTreeMap::new();
        for (k, v) in &self.substitution {
            let p = Param::new(k)
                .filter(|p| scope_set.contains(p))
                .ok_or_else(|| InputError::Invalid(format!("unknown parameter {k:?}")))?;
            substitution.insert(p, parse(format!("substitution.{k}"), v)?);
        }
        let list = |name: &str, items: &[String]| {
            items
                .iter()
                .enumerate()
                .map(|(n, t)| parse(format!("{name}[{n}]"), t))
                .collect::<Result<Vec<_>, _>>()
        };
        if let Some(e) = self.eta {
            if e.abs() != 1 {
                return Err(InputError::Invalid(format!("eta value {e} is not 1 or -1")));
            }
        }
        Ok(SolutionFamily {
            label: self.label.clone(),
            eta: self.eta,
            substitution,
            relations: list("relations", &self.relations)?,
            inequations: list("inequations", &self.inequations)?,
            claimed_d: self.d.as_ref().map(|d| parse_matrix(d, scope, "D")).transpose()?,
            claimed_ric: self
                .ric
                .as_ref()
                .map(|d| parse_matrix(d, scope, "ric"))
                .transpose()?,
        })
    }
}

/// Reads one family object or an array of them.
pub fn families_from_json(text: &str, model: &LieGroupModel) -> Result<Vec<SolutionFamily>, InputError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        Many(Vec<FamilyJson>),
        One(Box<FamilyJson>),
    }
    let parsed: OneOrMany = serde_json::from_str(text)?;
    let items = match parsed {
        OneOrMany::Many(v) => v,
        OneOrMany::One(f) => vec![*f],
    };
    items.iter().map(|f| f.resolve(model)).collect()
}

/// A grid point satisfying every equation and inequation of a system.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Counterexample {
    pub eta: Option<i64>,
    pub point: Vec<(Param, Rational)>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(e) = self.eta {
            write!(f, "eta = {e}, ")?;
        }
        for (n, (p, v)) in self.point.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p} = {v}")?;
        }
        Ok(())
    }
}

/// A constraint `a*p + b` solved for `p` where `a != 0`.
struct SolvedConstraint {
    target: usize,
    coeff: CompiledPoly,
    rest: CompiledPoly,
}

fn solve_for_last_linear(constraint: &Poly, order: &[Param]) -> Option<SolvedConstraint> {
    for (idx, p) in order.iter().enumerate().rev() {
        if constraint.degree_in(p) != 1 {
            continue;
        }
        let mut coeff = Poly::zero();
        let mut rest = Poly::zero();
        for (m, c) in constraint.terms() {
            if m.exponent(p) == 1 {
                let reduced = crate::algebra::Monomial::from_factors(
                    m.factors().iter().filter(|(q, _)| q != p).cloned(),
                );
                coeff += Poly::term(c.clone(), reduced);
            } else {
                rest += Poly::term(c.clone(), m.clone());
            }
        }
        return Some(SolvedConstraint {
            target: idx,
            coeff: coeff.compile(order)?,
            rest: rest.compile(order)?,
        });
    }
    None
}

struct CompiledFamily {
    subst: Vec<(usize, CompiledPoly)>,
    relations: Vec<CompiledPoly>,
    inequations: Vec<CompiledPoly>,
}

impl CompiledFamily {
    /// Compiles over `order` with `eta` fixed to the system's value.
    fn new(fam: &SolutionFamily, order: &[Param], eta: Option<i64>) -> Option<CompiledFamily> {
        let fix: BTreeMap<Param, Poly> = eta.map(|v| (Param::eta(), Poly::int(v))).into_iter().collect();
        let compile = |p: &Poly| p.substitute(&fix).compile(order);
        let subst = fam
            .substitution
            .iter()
            .map(|(p, rhs)| Some((order.iter().position(|q| q == p)?, compile(rhs)?)))
            .collect::<Option<Vec<_>>>()?;
        let compile_all = |v: &[Poly]| v.iter().map(compile).collect::<Option<Vec<_>>>();
        Some(CompiledFamily {
            subst,
            relations: compile_all(&fam.relations)?,
            inequations: compile_all(&fam.inequations)?,
        })
    }

    fn covers(&self, point: &[Rational]) -> bool {
        self.subst.iter().all(|(idx, rhs)| rhs.eval(point) == point[*idx])
            && self.relations.iter().all(|r| r.is_zero_at(point))
            && self.inequations.iter().all(|q| !q.is_zero_at(point))
    }
}

/// Every grid point that solves the system exactly, satisfies the model's
/// inequations strictly and its constraints, and lies in none of `known`.
///
/// A linear constraint is solved for its last linear parameter when the
/// coefficient is nonzero at the point; otherwise the grid value of that
/// parameter is kept if the constraint holds. Further constraints filter.
pub fn falsify_by_sampling(
    sys: &SolitonSystem,
    grid: &Grid,
    known: &[SolutionFamily],
) -> Vec<Counterexample> {
    let order = sys.unknowns();
    let compile = |p: &Poly| p.compile(&order).expect("system polynomial in unknowns");
    let equations: Vec<CompiledPoly> = sys.equations.iter().map(compile).collect();
    let inequations: Vec<CompiledPoly> = sys.inequations.iter().map(compile).collect();
    let (solved, filters) = match sys.constraints.split_first() {
        Some((first, rest)) => match solve_for_last_linear(first, &order) {
            Some(s) => (Some(s), rest.iter().map(compile).collect::<Vec<_>>()),
            None => (None, sys.constraints.iter().map(compile).collect()),
        },
        None => (None, Vec::new()),
    };
    let families: Vec<CompiledFamily> = known
        .iter()
        .filter(|f| f.applies_to(sys.eta()))
        .filter_map(|f| CompiledFamily::new(f, &order, sys.eta()))
        .collect();

    let n = order.len();
    let base = grid.values.len();
    let total = base.checked_pow(n as u32).expect("grid too large");
    let mut found: Vec<Counterexample> = (0..total)
        .into_par_iter()
        .filter_map(|index| {
            let mut point: Vec<Rational> = Vec::with_capacity(n);
            let mut rem = index;
            for _ in 0..n {
                point.push(grid.values[rem % base].clone());
                rem /= base;
            }
            if let Some(s) = &solved {
                let a = s.coeff.eval(&point);
                if a != Rational::from_integer(0.into()) {
                    // the target's grid coordinate is ignored; keep one copy
                    if point[s.target] != grid.values[0] {
                        return None;
                    }
                    point[s.target] = -(s.rest.eval(&point) / a);
                } else if !s.rest.is_zero_at(&point) {
                    return None;
                }
            }
            if filters.iter().any(|f| !f.is_zero_at(&point)) {
                return None;
            }
            if inequations.iter().any(|q| q.is_zero_at(&point)) {
                return None;
            }
            if !equations.iter().all(|e| e.is_zero_at(&point)) {
                return None;
            }
            if families.iter().any(|f| f.covers(&point)) {
                return None;
            }
            Some(Counterexample {
                eta: sys.eta(),
                point: order.iter().cloned().zip(point).collect(),
            })
        })
        .collect();
    found.sort();
    found.dedup();
    found
}

//! Lie algebra models: bracket tables, the Lorentzian metric, the product
//! structure and the seven families G1–G7.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::algebra::matrix::{tensor3_from_fn, zero_tensor3, zero_vec, PolyVec, Tensor3};
use crate::algebra::{parse_poly, ParseError, Param, Poly, Scope};

/// Signs of `g(e_i, e_i)` in a pseudo-orthonormal basis with `e3` timelike.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricSignature {
    pub diag: [i64; 3],
}

impl MetricSignature {
    pub const LORENTZIAN: MetricSignature = MetricSignature { diag: [1, 1, -1] };

    pub fn eps(&self, i: usize) -> i64 {
        self.diag[i]
    }
}

impl Default for MetricSignature {
    fn default() -> Self {
        MetricSignature::LORENTZIAN
    }
}

/// The product structure `J = diag(1, 1, -1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductStructure {
    pub diag: [i64; 3],
}

impl ProductStructure {
    pub const STANDARD: ProductStructure = ProductStructure { diag: [1, 1, -1] };

    pub fn j(&self, i: usize) -> i64 {
        self.diag[i]
    }
}

impl Default for ProductStructure {
    fn default() -> Self {
        ProductStructure::STANDARD
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
    G7,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::G1,
        Family::G2,
        Family::G3,
        Family::G4,
        Family::G5,
        Family::G6,
        Family::G7,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::G1 => "G1",
            Family::G2 => "G2",
            Family::G3 => "G3",
            Family::G4 => "G4",
            Family::G5 => "G5",
            Family::G6 => "G6",
            Family::G7 => "G7",
        }
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self, Family::G1 | Family::G2 | Family::G3 | Family::G4)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown family {0:?}; expected one of G1..G7")]
pub struct UnknownFamily(pub String);

impl FromStr for Family {
    type Err = UnknownFamily;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownFamily(s.to_string()))
    }
}

/// `C[i][j][k]` with `[e_i, e_j] = Σ_k C[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    c: Tensor3,
}

impl StructureConstants {
    /// Builds the antisymmetric table from `[e1,e2]`, `[e1,e3]`, `[e2,e3]`.
    pub fn from_brackets(b12: PolyVec, b13: PolyVec, b23: PolyVec) -> StructureConstants {
        let mut c = zero_tensor3();
        for (i, j, v) in [(0, 1, b12), (0, 2, b13), (1, 2, b23)] {
            for k in 0..3 {
                c[j][i][k] = -&v[k];
                c[i][j][k] = v[k].clone();
            }
        }
        StructureConstants { c }
    }

    pub fn abelian() -> StructureConstants {
        StructureConstants { c: zero_tensor3() }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.c[i][j][k]
    }

    pub fn tensor(&self) -> &Tensor3 {
        &self.c
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &PolyVec {
        &self.c[i][j]
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| (0..3).all(|k| (&self.c[i][j][k] + &self.c[j][i][k]).is_zero()))
        })
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> StructureConstants {
        StructureConstants {
            c: tensor3_from_fn(|i, j, k| f(&self.c[i][j][k])),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieGroupModel {
    pub name: String,
    pub params: BTreeSet<Param>,
    pub structure: StructureConstants,
    pub signature: MetricSignature,
    pub product: ProductStructure,
    /// Polynomials required to vanish identically.
    pub constraints: Vec<Poly>,
    /// Polynomials required to be nonzero.
    pub inequations: Vec<Poly>,
    /// When set, `eta` satisfies `eta^2 = 1`.
    pub eta_involutive: bool,
}

fn p(name: &str) -> Poly {
    Poly::var(Param::new(name).expect("builtin parameter"))
}

fn v3(a: Poly, b: Poly, c: Poly) -> PolyVec {
    [a, b, c]
}

/// The model of one of the seven families with its side conditions.
pub fn build_group(family: Family) -> LieGroupModel {
    let (a, b, g, d, eta) = (p("alpha"), p("beta"), p("gamma"), p("delta"), p("eta"));
    let z = Poly::zero;
    let one = Poly::one;
    let (brackets, params, constraints, inequations): (_, &[&str], Vec<Poly>, Vec<Poly>) =
        match family {
            Family::G1 => (
                (
                    v3(a.clone(), z(), -&b),
                    v3(-&a, -&b, z()),
                    v3(b.clone(), a.clone(), a.clone()),
                ),
                &["alpha", "beta"],
                vec![],
                vec![a.clone()],
            ),
            Family::G2 => (
                (
                    v3(z(), g.clone(), -&b),
                    v3(z(), -&b, -&g),
                    v3(a.clone(), z(), z()),
                ),
                &["alpha", "beta", "gamma"],
                vec![],
                vec![g.clone()],
            ),
            Family::G3 => (
                (
                    v3(z(), z(), -&g),
                    v3(z(), -&b, z()),
                    v3(a.clone(), z(), z()),
                ),
                &["alpha", "beta", "gamma"],
                vec![],
                vec![],
            ),
            Family::G4 => (
                (
                    v3(z(), -one(), &eta.scale(&crate::algebra::integer(2)) - &b),
                    v3(z(), -&b, one()),
                    v3(a.clone(), z(), z()),
                ),
                &["alpha", "beta", "eta"],
                vec![],
                vec![],
            ),
            Family::G5 => (
                (
                    zero_vec(),
                    v3(a.clone(), b.clone(), z()),
                    v3(g.clone(), d.clone(), z()),
                ),
                &["alpha", "beta", "gamma", "delta"],
                vec![&(&a * &g) + &(&b * &d)],
                vec![&a + &d],
            ),
            Family::G6 => (
                (
                    v3(z(), a.clone(), b.clone()),
                    v3(z(), g.clone(), d.clone()),
                    zero_vec(),
                ),
                &["alpha", "beta", "gamma", "delta"],
                vec![&(&a * &g) - &(&b * &d)],
                vec![&a + &d],
            ),
            Family::G7 => (
                (
                    v3(-&a, -&b, -&b),
                    v3(a.clone(), b.clone(), b.clone()),
                    v3(g.clone(), d.clone(), d.clone()),
                ),
                &["alpha", "beta", "gamma", "delta"],
                vec![&a * &g],
                vec![&a + &d],
            ),
        };
    LieGroupModel {
        name: family.name().to_string(),
        params: params.iter().map(|n| Param::new(n).unwrap()).collect(),
        structure: StructureConstants::from_brackets(brackets.0, brackets.1, brackets.2),
        signature: MetricSignature::LORENTZIAN,
        product: ProductStructure::STANDARD,
        constraints,
        inequations,
        eta_involutive: family == Family::G4,
    }
}

impl LieGroupModel {
    /// A model with all brackets zero and no parameters.
    pub fn abelian() -> LieGroupModel {
        LieGroupModel::custom("abelian", BTreeSet::new(), StructureConstants::abelian())
    }

    pub fn custom(name: &str, params: BTreeSet<Param>, structure: StructureConstants) -> LieGroupModel {
        LieGroupModel {
            name: name.to_string(),
            params,
            structure,
            signature: MetricSignature::LORENTZIAN,
            product: ProductStructure::STANDARD,
            constraints: vec![],
            inequations: vec![],
            eta_involutive: false,
        }
    }

    pub fn eps(&self, i: usize) -> i64 {
        self.signature.eps(i)
    }

    pub fn j(&self, i: usize) -> i64 {
        self.product.j(i)
    }

    /// True when the model carries an `eta` that still needs a value.
    pub fn has_symbolic_eta(&self) -> bool {
        self.eta_involutive && self.params.contains(&Param::eta())
    }

    /// Canonical form of a table entry: `eta` exponents reduced modulo
    /// `eta^2 - 1` when declared.
    pub fn normalize(&self, p: &Poly) -> Poly {
        if self.eta_involutive {
            p.reduce_involution(&Param::eta())
        } else {
            p.clone()
        }
    }

    /// Normal form modulo the declared constraints (and `eta^2 - 1`).
    pub fn reduce(&self, p: &Poly) -> Poly {
        self.normalize(&p.reduce_modulo(&self.constraints))
    }

    pub fn is_zero_mod_constraints(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Bilinear extension of the bracket table.
    pub fn bracket(&self, x: &PolyVec, y: &PolyVec) -> PolyVec {
        let mut out = zero_vec();
        for i in 0..3 {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if i == j || y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.structure.get(i, j, k);
                    if !c.is_zero() {
                        *slot += &xy * c;
                    }
                }
            }
        }
        out.map(|p| self.normalize(&p))
    }

    /// `[e1,[e2,e3]] + [e2,[e3,e1]] + [e3,[e1,e2]]`, the only independent
    /// cyclic sum in dimension three. Not reduced by the constraints.
    pub fn jacobi_residual(&self) -> PolyVec {
        let e = |i| crate::algebra::basis(i);
        let mut out = zero_vec();
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let inner = self.bracket(&e(j), &e(k));
            let term = self.bracket(&e(i), &inner);
            for (o, t) in out.iter_mut().zip(term) {
                *o += t;
            }
        }
        out.map(|p| self.normalize(&p))
    }

    pub fn satisfies_jacobi(&self) -> bool {
        self.jacobi_residual()
            .iter()
            .all(|p| self.is_zero_mod_constraints(p))
    }

    /// Fixes `eta` to `value` and drops it from the parameters.
    pub fn specialize_eta(&self, value: i64) -> LieGroupModel {
        let mut s = BTreeMap::new();
        s.insert(Param::eta(), Poly::int(value));
        let mut params = self.params.clone();
        params.remove(&Param::eta());
        LieGroupModel {
            name: format!("{} (eta = {value})", self.name),
            params,
            structure: self.structure.map(|p| p.substitute(&s)),
            signature: self.signature,
            product: self.product,
            constraints: self
                .constraints
                .iter()
                .map(|p| p.substitute(&s))
                .filter(|p| !p.is_zero())
                .collect(),
            inequations: self.inequations.iter().map(|p| p.substitute(&s)).collect(),
            eta_involutive: false,
        }
    }

    /// Values of `eta` to enumerate: `[1, -1]` for an involutive `eta`,
    /// otherwise a single `None`.
    pub fn eta_values(&self) -> Vec<Option<i64>> {
        if self.has_symbolic_eta() {
            vec![Some(1), Some(-1)]
        } else {
            vec![None]
        }
    }

    pub fn with_eta(&self, eta: Option<i64>) -> LieGroupModel {
        match eta {
            Some(v) => self.specialize_eta(v),
            None => self.clone(),
        }
    }

    /// Declared parameters plus the soliton constant `c`.
    pub fn params_with_c(&self) -> BTreeSet<Param> {
        let mut s = self.params.clone();
        s.insert(Param::c());
        s
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read model file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed model JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid parameter name {0:?}")]
    BadParameter(String),
    #[error("parameter {0:?} declared twice")]
    DuplicateParameter(String),
    #[error("`c` is reserved for the soliton constant")]
    ReservedParameter,
    #[error("bracket key {0:?} must be one of \"12\", \"13\", \"23\"")]
    BadBracketKey(String),
    #[error("{field}: {source}")]
    Poly {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("Jacobi identity fails: residual ({0}, {1}, {2})")]
    Jacobi(Poly, Poly, Poly),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: String,
    #[serde(default)]
    parameters: Vec<String>,
    #[serde(default)]
    eta_involutive: bool,
    brackets: BTreeMap<String, [String; 3]>,
    #[serde(default)]
    constraints: Vec<String>,
    #[serde(default)]
    inequations: Vec<String>,
}

impl LieGroupModel {
    pub fn from_json(text: &str) -> Result<LieGroupModel, ModelError> {
        let file: ModelFile = serde_json::from_str(text)?;
        let mut params = BTreeSet::new();
        for name in &file.parameters {
            let param = Param::new(name).ok_or_else(|| ModelError::BadParameter(name.clone()))?;
            if param == Param::c() {
                return Err(ModelError::ReservedParameter);
            }
            if !params.insert(param) {
                return Err(ModelError::DuplicateParameter(name.clone()));
            }
        }
        let parse = |field: String, text: &str| {
            parse_poly(text, Scope::Declared(&params))
                .map_err(|source| ModelError::Poly { field, source })
        };
        let mut b = [zero_vec(), zero_vec(), zero_vec()];
        for (key, entries) in &file.brackets {
            let slot = match key.as_str() {
                "12" => 0,
                "13" => 1,
                "23" => 2,
                _ => return Err(ModelError::BadBracketKey(key.clone())),
            };
            for (k, text) in entries.iter().enumerate() {
                b[slot][k] = parse(format!("brackets.{key}[{k}]"), text)?;
            }
        }
        let [b12, b13, b23] = b;
        let constraints = file
            .constraints
            .iter()
            .enumerate()
            .map(|(n, t)| parse(format!("constraints[{n}]"), t))
            .collect::<Result<Vec<_>, _>>()?;
        let inequations = file
            .inequations
            .iter()
            .enumerate()
            .map(|(n, t)| parse(format!("inequations[{n}]"), t))
            .collect::<Result<Vec<_>, _>>()?;
        let model = LieGroupModel {
            name: file.name,
            eta_involutive: file.eta_involutive && params.contains(&Param::eta()),
            params,
            structure: StructureConstants::from_brackets(b12, b13, b23),
            signature: MetricSignature::LORENTZIAN,
            product: ProductStructure::STANDARD,
            constraints,
            inequations,
        };
        let [r1, r2, r3] = model.jacobi_residual().map(|p| model.reduce(&p));
        if !(r1.is_zero() && r2.is_zero() && r3.is_zero()) {
            return Err(ModelError::Jacobi(r1, r2, r3));
        }
        Ok(model)
    }

    pub fn from_file(path: &Path) -> Result<LieGroupModel, ModelError> {
        LieGroupModel::from_json(&std::fs::read_to_string(path)?)
    }
}

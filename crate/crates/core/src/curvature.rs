//! Curvature, Ricci forms and Ricci operators.

use crate::algebra::{rational, Poly, PolyMatrix};
use crate::connections::{connection, ConnectionCoeffs, ConnectionKind};
use crate::model::{LieGroupModel, MetricSignature};

pub type Tensor4 = [[[[Poly; 3]; 3]; 3]; 3];

/// `R(e_i, e_j) e_k = Σ_l r[i][j][k][l] e_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureTensor {
    pub kind: ConnectionKind,
    pub r: Tensor4,
}

impl CurvatureTensor {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Poly {
        &self.r[i][j][k][l]
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().flatten().flatten().flatten().all(Poly::is_zero)
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                (0..3).all(|k| (0..3).all(|l| (&self.r[i][j][k][l] + &self.r[j][i][k][l]).is_zero()))
            })
        })
    }
}

/// `rho[i][j] = ρ(e_i, e_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RicciForm {
    pub kind: ConnectionKind,
    pub symmetrized: bool,
    pub rho: PolyMatrix,
}

/// `Ric(e_i) = Σ_j ric[i][j] e_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RicciOperator {
    pub kind: ConnectionKind,
    pub symmetrized: bool,
    pub ric: PolyMatrix,
}

/// `R(X,Y)Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z - ∇_{[X,Y]} Z` on basis vectors.
pub fn curvature(m: &LieGroupModel, conn: &ConnectionCoeffs) -> CurvatureTensor {
    let g = &conn.gamma;
    let c = &m.structure;
    let r = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                std::array::from_fn(|l| {
                    if i == j {
                        return Poly::zero();
                    }
                    let mut acc = Poly::zero();
                    for n in 0..3 {
                        if !g[j][k][n].is_zero() && !g[i][n][l].is_zero() {
                            acc += &g[j][k][n] * &g[i][n][l];
                        }
                        if !g[i][k][n].is_zero() && !g[j][n][l].is_zero() {
                            acc -= &g[i][k][n] * &g[j][n][l];
                        }
                        let cn = c.get(i, j, n);
                        if !cn.is_zero() && !g[n][k][l].is_zero() {
                            acc -= cn * &g[n][k][l];
                        }
                    }
                    m.normalize(&acc)
                })
            })
        })
    });
    CurvatureTensor { kind: conn.kind, r }
}

/// Trace signs of the Ricci form: `ρ(X,Y) = -g(R(X,e1)Y,e1) - g(R(X,e2)Y,e2)
/// + g(R(X,e3)Y,e3)`.
const TRACE_SIGNS: [i64; 3] = [-1, -1, 1];

pub fn ricci_form(m: &LieGroupModel, r: &CurvatureTensor) -> RicciForm {
    let rho = PolyMatrix::from_fn(|i, j| {
        let mut acc = Poly::zero();
        for (k, sign) in TRACE_SIGNS.iter().enumerate() {
            let w = sign * m.eps(k);
            acc += r.r[i][k][j][k].scale(&rational(w, 1));
        }
        acc
    });
    RicciForm {
        kind: r.kind,
        symmetrized: false,
        rho,
    }
}

/// Computes operators from forms. The raising signature is a field so the
/// fixture harness can inject a sign error and confirm it is detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engine {
    pub raising: MetricSignature,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            raising: MetricSignature::LORENTZIAN,
        }
    }
}

impl Engine {
    /// An engine that raises indices with `(+,+,+)`, dropping the timelike
    /// sign. Used only for mutation testing.
    pub fn with_dropped_timelike_sign() -> Engine {
        Engine {
            raising: MetricSignature { diag: [1, 1, 1] },
        }
    }

    /// `ρ(X,Y) = g(Ric X, Y)`, so `ric[i][j] = eps_j rho[i][j]`.
    pub fn ricci_operator(&self, rho: &RicciForm) -> RicciOperator {
        let ric = PolyMatrix::from_fn(|i, j| rho.rho[(i, j)].scale(&rational(self.raising.eps(j), 1)));
        RicciOperator {
            kind: rho.kind,
            symmetrized: rho.symmetrized,
            ric,
        }
    }

    /// Inverse of [`Engine::ricci_operator`].
    pub fn lower(&self, ric: &RicciOperator) -> RicciForm {
        let rho = PolyMatrix::from_fn(|i, j| ric.ric[(i, j)].scale(&rational(self.raising.eps(j), 1)));
        RicciForm {
            kind: ric.kind,
            symmetrized: ric.symmetrized,
            rho,
        }
    }

    pub fn symmetrize(&self, rho: &RicciForm) -> (RicciForm, RicciOperator) {
        let half = rational(1, 2);
        let sym = RicciForm {
            kind: rho.kind,
            symmetrized: true,
            rho: (&rho.rho + &rho.rho.transpose()).scale(&half),
        };
        let op = self.ricci_operator(&sym);
        (sym, op)
    }

    /// Ricci operator of the given connection, symmetrized on request.
    pub fn ricci(&self, m: &LieGroupModel, kind: ConnectionKind, symmetrized: bool) -> RicciOperator {
        let conn = connection(m, kind);
        let rho = ricci_form(m, &curvature(m, &conn));
        if symmetrized {
            self.symmetrize(&rho).1
        } else {
            self.ricci_operator(&rho)
        }
    }
}

pub fn ricci_operator(rho: &RicciForm) -> RicciOperator {
    Engine::default().ricci_operator(rho)
}

pub fn symmetrize(rho: &RicciForm) -> (RicciForm, RicciOperator) {
    Engine::default().symmetrize(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, Scope};
    use crate::model::{build_group, Family};

    fn p(s: &str) -> Poly {
        parse_poly(s, Scope::Any).unwrap()
    }

    fn form(f: Family, kind: ConnectionKind) -> RicciForm {
        let m = build_group(f);
        ricci_form(&m, &curvature(&m, &connection(&m, kind)))
    }

    #[test]
    fn g1_canonical_curvature_entry() {
        let m = build_group(Family::G1);
        let r = curvature(&m, &connection(&m, ConnectionKind::Canonical));
        assert_eq!(r.r[0][1][0][1], p("alpha^2 + 1/2*beta^2"));
    }

    #[test]
    fn g1_canonical_ricci() {
        let rho = form(Family::G1, ConnectionKind::Canonical);
        assert_eq!(rho.rho[(0, 0)], p("-alpha^2 - 1/2*beta^2"));
        assert_eq!(rho.rho[(2, 0)], p("1/2*alpha*beta"));
        let ric = ricci_operator(&rho);
        assert_eq!(ric.ric.row(2), &[p("1/2*alpha*beta"), p("alpha^2"), Poly::zero()]);
        let (_, sym) = symmetrize(&rho);
        assert_eq!(
            sym.ric.row(0),
            &[p("-alpha^2 - 1/2*beta^2"), Poly::zero(), p("-1/4*alpha*beta")]
        );
    }

    #[test]
    fn g6_kn_ricci_operator() {
        let ric = ricci_operator(&form(Family::G6, ConnectionKind::KobayashiNomizu));
        assert_eq!(
            ric.ric,
            PolyMatrix::diagonal([p("-alpha^2 - beta*gamma"), p("-alpha^2"), Poly::zero()])
        );
    }

    #[test]
    fn g7_kn_symmetrized_entry() {
        let (_, sym) = symmetrize(&form(Family::G7, ConnectionKind::KobayashiNomizu));
        assert_eq!(sym.ric[(0, 1)], p("-1/2*alpha*beta + 1/2*beta*delta"));
    }

    #[test]
    fn g5_is_flat() {
        let m = build_group(Family::G5);
        for kind in [ConnectionKind::Canonical, ConnectionKind::KobayashiNomizu] {
            assert!(curvature(&m, &connection(&m, kind)).is_zero());
        }
    }

    #[test]
    fn abelian_flat() {
        let m = LieGroupModel::abelian();
        let r = curvature(&m, &connection(&m, ConnectionKind::LeviCivita));
        assert!(r.is_zero());
        assert!(ricci_form(&m, &r).rho.is_zero());
    }

    #[test]
    fn structural_properties() {
        let e = Engine::default();
        for f in Family::ALL {
            let m = build_group(f);
            for kind in ConnectionKind::ALL {
                let r = curvature(&m, &connection(&m, kind));
                assert!(r.is_antisymmetric(), "{f} {kind}");
                let rho = ricci_form(&m, &r);
                assert_eq!(e.lower(&e.ricci_operator(&rho)), rho);
                let (sym, _) = e.symmetrize(&rho);
                assert_eq!(e.symmetrize(&sym).0, sym);
            }
        }
        for kind in [ConnectionKind::Canonical, ConnectionKind::KobayashiNomizu] {
            assert!(form(Family::G3, kind).rho.is_symmetric());
        }
    }
}

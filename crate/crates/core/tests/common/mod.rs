#![allow(dead_code)]

use std::collections::BTreeMap;

use liesoliton::algebra::{rational, Monomial, Param, Poly, Rational};
use proptest::prelude::*;

pub const PARAMS: [&str; 4] = ["alpha", "beta", "gamma", "eta"];

pub fn param(i: usize) -> Param {
    Param::new(PARAMS[i]).unwrap()
}

fn coefficient() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rational(n, d))
}

/// Monomials in up to four parameters with total degree at most 4.
fn monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((0usize..4, 1u32..=2), 0..=2).prop_map(|fs| {
        let mut exps = [0u32; 4];
        let mut budget = 4u32;
        for (i, e) in fs {
            let e = e.min(budget);
            exps[i] += e;
            budget -= e;
        }
        Monomial::from_factors((0..4).filter(|i| exps[*i] > 0).map(|i| (param(i), exps[i])))
    })
}

pub fn poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec((coefficient(), monomial()), 0..6).prop_map(|ts| {
        let mut p = Poly::zero();
        for (c, m) in ts {
            p += Poly::term(c, m);
        }
        p
    })
}

pub fn point() -> impl Strategy<Value = BTreeMap<Param, Rational>> {
    proptest::collection::vec((-6i64..=6, 1i64..=3), 4).prop_map(|vs| {
        vs.into_iter()
            .enumerate()
            .map(|(i, (n, d))| (param(i), rational(n, d)))
            .collect()
    })
}

pub fn at(p: &Poly, pt: &BTreeMap<Param, Rational>) -> Rational {
    p.eval_rational(pt).expect("point binds every parameter")
}

pub mod structure {
    use liesoliton::algebra::rational;
    use liesoliton::connections::{connection, covariant_derivative_of_j, ConnectionCoeffs, ConnectionKind};
    use liesoliton::curvature::{curvature, ricci_form, Engine};
    use liesoliton::model::{build_group, Family, LieGroupModel};

    fn torsion_free(m: &LieGroupModel, g: &ConnectionCoeffs) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                (0..3).all(|k| {
                    let t = &(&g.gamma[i][j][k] - &g.gamma[j][i][k]) - m.structure.get(i, j, k);
                    m.is_zero_mod_constraints(&t)
                })
            })
        })
    }

    /// `X g(Y,Z) = 0` for left-invariant fields, so metric means
    /// `g(∇_X Y, Z) + g(Y, ∇_X Z) = 0`.
    fn metric(m: &LieGroupModel, g: &ConnectionCoeffs) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                (0..3).all(|k| {
                    let s = &g.gamma[i][j][k].scale(&rational(m.eps(k), 1))
                        + &g.gamma[i][k][j].scale(&rational(m.eps(j), 1));
                    m.is_zero_mod_constraints(&s)
                })
            })
        })
    }

    fn parallel_j(m: &LieGroupModel, g: &ConnectionCoeffs) -> bool {
        let nj = covariant_derivative_of_j(m, g);
        nj.nj.iter().flatten().flatten().all(|p| m.is_zero_mod_constraints(p))
    }

    /// Returns one line per violated property; empty means the suite passed.
    pub fn failures() -> Vec<String> {
        let engine = Engine::default();
        let mut bad = Vec::new();
        for f in Family::ALL {
            let m = build_group(f);
            let mut check = |ok: bool, what: &str| {
                if !ok {
                    bad.push(format!("{f}: {what}"));
                }
            };
            check(m.satisfies_jacobi(), "Jacobi residual");
            let lc = connection(&m, ConnectionKind::LeviCivita);
            check(torsion_free(&m, &lc), "nabla torsion");
            check(metric(&m, &lc), "nabla metricity");
            let can = connection(&m, ConnectionKind::Canonical);
            check(metric(&m, &can), "nabla0 metricity");
            check(parallel_j(&m, &can), "nabla0 J");
            let kn = connection(&m, ConnectionKind::KobayashiNomizu);
            check(parallel_j(&m, &kn), "nabla1 J");
            for g in [&lc, &can, &kn] {
                let r = curvature(&m, g);
                let anti = (0..3).all(|i| {
                    (0..3).all(|j| {
                        (0..3).all(|k| (0..3).all(|l| (&r.r[i][j][k][l] + &r.r[j][i][k][l]).is_zero()))
                    })
                });
                check(anti, &format!("{} curvature antisymmetry", g.kind));
                let rho = ricci_form(&m, &r);
                let (sym, _) = engine.symmetrize(&rho);
                check(engine.symmetrize(&sym).0.rho == sym.rho, &format!("{} symmetrize idempotent", g.kind));
                let ric = engine.ricci_operator(&rho);
                let back = engine.lower(&ric);
                check(back.rho == rho.rho, &format!("{} raising round trip", g.kind));
                let direct = (0..3).all(|i| {
                    (0..3).all(|j| ric.ric[(i, j)] == rho.rho[(i, j)].scale(&rational(m.eps(j), 1)))
                });
                check(direct, &format!("{} raising by eps", g.kind));
            }
        }
        bad
    }
}

use std::collections::BTreeMap;

use liesoliton::algebra::{parse_poly, Param, Poly, PolyMatrix, Rational, Scope};
use liesoliton::connections::ConnectionKind;
use liesoliton::model::{build_group, Family};
use liesoliton::soliton::{
    build_soliton_system, falsify_by_sampling, verify_family, Grid, SolitonKind, SolitonSpec, SolitonSystem,
    SolutionFamily, Status,
};

fn p(s: &str) -> Poly {
    parse_poly(s, Scope::Any).unwrap()
}

fn system(f: Family, conn: ConnectionKind, kind: SolitonKind, eta: Option<i64>) -> SolitonSystem {
    build_soliton_system(&SolitonSpec::new(build_group(f), conn, kind, eta).unwrap())
}

fn family(pairs: &[(&str, &str)]) -> SolutionFamily {
    SolutionFamily {
        substitution: pairs.iter().map(|(k, v)| (Param::new(k).unwrap(), p(v))).collect(),
        ..SolutionFamily::default()
    }
}

#[test]
fn g1_kn_second_kind_family() {
    let sys = system(Family::G1, ConnectionKind::KobayashiNomizu, SolitonKind::Second, None);
    let r = verify_family(&sys, &family(&[("beta", "0"), ("c", "-1/2*alpha^2")]));
    assert_eq!(r.status, Status::Pass, "{r:?}");
    let wrong = verify_family(&sys, &family(&[("beta", "0"), ("c", "-alpha^2")]));
    assert_eq!(wrong.status, Status::Fail);
    assert!(wrong.failing_equation.is_some());
}

#[test]
fn g4_kn_has_no_solitons_on_the_grid() {
    for kind in SolitonKind::ALL {
        for eta in [1, -1] {
            let sys = system(Family::G4, ConnectionKind::KobayashiNomizu, kind, Some(eta));
            assert!(falsify_by_sampling(&sys, &Grid::default(), &[]).is_empty(), "{kind:?} eta={eta}");
        }
    }
}

#[test]
fn g3_kinds_coincide() {
    for conn in [ConnectionKind::Canonical, ConnectionKind::KobayashiNomizu] {
        let first = system(Family::G3, conn, SolitonKind::First, None);
        let second = system(Family::G3, conn, SolitonKind::Second, None);
        assert_eq!(first.derivation, second.derivation);
        assert_eq!(first.equations, second.equations);
    }
}

#[test]
fn g5_derivation_is_minus_c() {
    let minus_c = PolyMatrix::identity().map(|e| -&(e * &Poly::var(Param::c())));
    for conn in [ConnectionKind::Canonical, ConnectionKind::KobayashiNomizu] {
        for kind in SolitonKind::ALL {
            assert_eq!(system(Family::G5, conn, kind, None).derivation, minus_c, "{conn} {kind:?}");
        }
    }
}

#[test]
fn g5_forces_c_zero() {
    let sys = system(Family::G5, ConnectionKind::Canonical, SolitonKind::First, None);
    assert_eq!(verify_family(&sys, &family(&[("c", "0")])).status, Status::Pass);
    let grid = Grid::default();
    let found = falsify_by_sampling(&sys, &grid, &[family(&[("c", "0")])]);
    assert!(found.is_empty(), "{}", found[0]);
}

#[test]
fn rebuilding_is_deterministic() {
    for f in Family::ALL {
        let m = build_group(f);
        for conn in [ConnectionKind::Canonical, ConnectionKind::KobayashiNomizu] {
            for kind in SolitonKind::ALL {
                for spec in SolitonSpec::enumerate(&m, conn, kind).unwrap() {
                    let a = build_soliton_system(&spec);
                    let b = build_soliton_system(&spec);
                    assert_eq!(a.equations, b.equations);
                    assert_eq!(a.derivation, b.derivation);
                }
            }
        }
    }
}

#[test]
fn eta_fixes_apply_only_to_matching_systems() {
    let fam = SolutionFamily {
        eta: Some(1),
        ..family(&[("alpha", "0"), ("beta", "1"), ("c", "0")])
    };
    let plus = system(Family::G4, ConnectionKind::Canonical, SolitonKind::First, Some(1));
    let minus = system(Family::G4, ConnectionKind::Canonical, SolitonKind::First, Some(-1));
    assert_eq!(verify_family(&plus, &fam).status, Status::Pass);
    assert_eq!(verify_family(&minus, &fam).status, Status::NotApplicable);
}

#[test]
fn g4_canonical_first_has_a_solution_beyond_the_listed_ones() {
    let sys = system(Family::G4, ConnectionKind::Canonical, SolitonKind::First, Some(-1));
    let fam = family(&[("alpha", "0"), ("beta", "-1"), ("c", "0")]);
    assert_eq!(verify_family(&sys, &fam).status, Status::Pass);
    let point: BTreeMap<Param, _> = fam
        .substitution
        .iter()
        .map(|(k, v)| (k.clone(), v.as_constant().unwrap()))
        .collect();
    for e in &sys.equations {
        assert_eq!(e.eval_rational(&point), Some(Rational::from_integer(0.into())), "{e}");
    }
}

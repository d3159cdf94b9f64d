mod common;

use std::collections::BTreeMap;

use common::{at, point, poly};
use liesoliton::algebra::{parse_poly, rational, Param, Poly, Scope};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_is_associative(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
    }

    #[test]
    fn multiplication_distributes(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn multiplication_commutes(p in poly(), q in poly()) {
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn negation_cancels(p in poly()) {
        prop_assert!((&p + &(-&p)).is_zero());
        prop_assert_eq!(&p - &p, Poly::zero());
    }

    #[test]
    fn eval_is_a_ring_homomorphism(p in poly(), q in poly(), pt in point()) {
        prop_assert_eq!(at(&(&p * &q), &pt), at(&p, &pt) * at(&q, &pt));
        prop_assert_eq!(at(&(&p + &q), &pt), at(&p, &pt) + at(&q, &pt));
    }

    #[test]
    fn printed_form_parses_back(p in poly()) {
        let text = p.to_string();
        prop_assert_eq!(parse_poly(&text, Scope::Any).unwrap(), p);
    }

    #[test]
    fn averaging_over_eta_keeps_the_eta_free_part(p in poly()) {
        let eta = Param::eta();
        let r = p.reduce_involution(&eta);
        prop_assert!(r.degree_in(&eta) <= 1);
        let sub = |v: i64| r.substitute(&BTreeMap::from([(eta.clone(), Poly::int(v))]));
        let avg = (&sub(1) + &sub(-1)).scale(&rational(1, 2));
        let mut free = Poly::zero();
        for (m, c) in r.terms() {
            if m.exponent(&eta) == 0 {
                free += Poly::term(c.clone(), m.clone());
            }
        }
        prop_assert_eq!(avg, free);
    }

    #[test]
    fn involution_reduction_agrees_at_unit_points(p in poly(), pt in point()) {
        let eta = Param::eta();
        let r = p.reduce_involution(&eta);
        for v in [1, -1] {
            let mut pt = pt.clone();
            pt.insert(eta.clone(), rational(v, 1));
            prop_assert_eq!(at(&r, &pt), at(&p, &pt));
        }
    }
}

mod common;

use liesoliton::model::{build_group, Family};

#[test]
fn structural_suite_holds_for_every_family() {
    let bad = common::structure::failures();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn jacobi_vanishes_identically_without_constraints() {
    for f in Family::ALL {
        let m = build_group(f);
        assert!(m.jacobi_residual().iter().all(|p| p.is_zero()), "{f}");
    }
}

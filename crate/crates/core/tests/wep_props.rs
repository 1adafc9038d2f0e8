mod common;

use proptest::prelude::*;

use common::*;
use distill_core::codes::Catalogue;
use distill_core::states::{BlochVector, Family};
use distill_core::wep::{build_term_table, distill_project, evaluate_w};

fn arb_ball() -> impl Strategy<Value = BlochVector> {
    (-1.0..=1.0f64, -1.0..=1.0f64, -1.0..=1.0f64).prop_map(|(x, y, z)| BlochVector::new(x, y, z)).prop_filter("in ball", |r| r.norm() <= 1.0)
}

proptest! {
    #[test]
    fn outputs_stay_physical(r in arb_ball()) {
        let cat = Catalogue::builtin();
        for name in ["five_qubit", "steane"] {
            let table = build_term_table(&cat.code(name).unwrap()).unwrap();
            if let Ok((out, _)) = distill_project(&table, r) {
                prop_assert!(out.norm() <= 1.0 + 1e-9, "{name}: {out}");
            }
        }
    }
}

#[test]
fn origin_is_fixed() {
    let cat = Catalogue::builtin();
    for name in ["five_qubit", "steane"] {
        let table = build_term_table(&cat.code(name).unwrap()).unwrap();
        let (out, _) = distill_project(&table, BlochVector::ORIGIN).unwrap();
        assert_eq!(out, BlochVector::ORIGIN, "{name}");
        assert_eq!(evaluate_w(&table, BlochVector::ORIGIN)[0], 1.0, "{name}");
    }
}

#[test]
fn t_orbit_is_closed() {
    let table = build_term_table(&Catalogue::builtin().code("five_qubit").unwrap()).unwrap();
    let mut r = Family::T.axis();
    for _ in 0..20 {
        r = distill_project(&table, r).unwrap().0;
        let d = Family::T.axes().iter().map(|a| a.max_abs_diff(r)).fold(f64::INFINITY, f64::min);
        assert!(d < 1e-9, "{r}");
    }
}

#[test]
fn weights_match_projection_oracle() {
    let cat = Catalogue::builtin();
    let mut rng = rng(7);
    for name in ["five_qubit", "steane"] {
        let code = cat.code(name).unwrap();
        let table = build_term_table(&code).unwrap();
        let oracle = ProjectionOracle::new(&code);
        for _ in 0..20 {
            let r = ball_point(&mut rng, 1.0);
            let (out, p) = distill_project(&table, r).unwrap();
            let (want, w) = oracle.apply(r);
            assert!(out.max_abs_diff(want) < 1e-10, "{name} {r}");
            assert!(p > 0.0 && w > 0.0);
        }
    }
}

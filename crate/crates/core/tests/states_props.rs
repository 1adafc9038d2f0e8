use proptest::prelude::*;

use distill_core::states::{
    axis_fidelity, axis_twirl, clifford_apply, color_of, h_twirl, polytope_contains, t_twirl, BlochVector, CliffordRotation, Family,
    ReferenceStateSet,
};

fn arb_ball() -> impl Strategy<Value = BlochVector> {
    (-1.0..=1.0f64, -1.0..=1.0f64, -1.0..=1.0f64).prop_map(|(x, y, z)| BlochVector::new(x, y, z)).prop_filter("in ball", |r| r.norm() <= 1.0)
}

fn arb_vec() -> impl Strategy<Value = BlochVector> {
    (-2.0..=2.0f64, -2.0..=2.0f64, -2.0..=2.0f64).prop_map(|(x, y, z)| BlochVector::new(x, y, z))
}

proptest! {
    #[test]
    fn twirls_are_idempotent(r in arb_ball()) {
        prop_assert!(h_twirl(h_twirl(r)).max_abs_diff(h_twirl(r)) < 1e-12);
        prop_assert!(t_twirl(t_twirl(r)).max_abs_diff(t_twirl(r)) < 1e-12);
        for f in [Family::T, Family::H] {
            let once = axis_twirl(r, f);
            prop_assert!(axis_twirl(once, f).max_abs_diff(once) < 1e-12);
        }
    }

    #[test]
    fn cliffords_preserve_norm_exactly(r in arb_vec()) {
        let sorted = |v: BlochVector| {
            let mut a = v.to_array().map(f64::abs);
            a.sort_by(f64::total_cmp);
            a
        };
        for c in CliffordRotation::all() {
            let out = clifford_apply(&c, r);
            prop_assert_eq!(sorted(out), sorted(r));
            prop_assert!((out.norm() - r.norm()).abs() <= f64::EPSILON * r.norm());
        }
    }

    #[test]
    fn axis_fidelity_is_clifford_invariant(r in arb_ball()) {
        for f in [Family::T, Family::H] {
            let (base, _) = axis_fidelity(r, f);
            for c in CliffordRotation::all() {
                let (g, _) = axis_fidelity(clifford_apply(&c, r), f);
                prop_assert!((g - base).abs() < 1e-12, "{f:?} {c:?}: {g} vs {base}");
            }
        }
    }

    #[test]
    fn twirl_keeps_stabilizer_polytope(r in arb_ball()) {
        if polytope_contains(r) {
            prop_assert!(polytope_contains(h_twirl(r)));
            prop_assert!(polytope_contains(t_twirl(r)));
        }
    }

    #[test]
    fn colour_bytes_are_monotone(a in -1.0..=1.0f64, b in -1.0..=1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let cl = color_of(BlochVector::new(lo, 0.0, 0.0)).unwrap();
        let ch = color_of(BlochVector::new(hi, 0.0, 0.0)).unwrap();
        prop_assert!(cl[0] <= ch[0]);
    }
}

#[test]
fn rotations_form_a_group() {
    let all = CliffordRotation::all();
    assert_eq!(all.len(), 24);
    for a in &all {
        assert!(all.contains(&a.inverse()));
        assert_eq!(a.compose(&a.inverse()).matrix(), [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        for b in &all {
            assert!(all.contains(&a.compose(b)));
        }
    }
}

#[test]
fn reference_swatches_are_byte_rounded_vectors() {
    for e in ReferenceStateSet::standard().entries() {
        let rgb = color_of(e.vector).unwrap();
        for (byte, c) in rgb.iter().zip(e.vector.to_array()) {
            assert_eq!(*byte as f64, (255.0 * (c + 1.0) / 2.0 + 0.5).floor(), "{}", e.label);
        }
    }
}

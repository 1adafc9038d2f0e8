mod common;

use common::*;
use distill_core::codes::Catalogue;
use distill_core::protocols::{BravyiHaah, JonesCircuit, JonesTransfer, Protocol};
use distill_core::states::{family_state, BlochVector, Family};

const FAST: [&str; 3] = ["bravyi_haah_14", "jones_622", "jones_steane_15"];

#[test]
fn two_output_protocols_are_symmetric() {
    let cat = Catalogue::builtin();
    let bh = BravyiHaah::new(cat.matrix("bravyi_haah_14").unwrap()).unwrap();
    let jones = JonesCircuit::new(&cat.code("jones_622").unwrap()).unwrap();
    let mut rng = rng(31);
    for _ in 0..50 {
        let r = ball_point(&mut rng, 1.0);
        for (name, outs) in [("bravyi_haah_14", bh.outputs(r)), ("jones_622", jones.outputs(r))] {
            let (outs, _) = outs.unwrap();
            assert_eq!(outs.len(), 2, "{name}");
            assert!(outs[0].max_abs_diff(outs[1]) < 1e-9, "{name} at {r}: {} vs {}", outs[0], outs[1]);
        }
    }
}

#[test]
fn h_axes_are_preserved() {
    for name in FAST {
        let p = Protocol::builtin(name).unwrap();
        let axis = Family::H.axis();
        for f in [-0.9, -0.5, 0.3, 0.7, 0.9, 0.99] {
            let r = axis * f;
            let (out, _) = p.raw_apply(r).unwrap();
            let along = out.dot(axis);
            assert!(out.max_abs_diff(axis * along) < 1e-9, "{name}: {r} -> {out}");
        }
    }
}

#[test]
fn origin_probabilities() {
    let (_, p5) = Protocol::builtin("five_qubit").unwrap().raw_apply(BlochVector::ORIGIN).unwrap();
    let (_, p7) = Protocol::builtin("steane").unwrap().raw_apply(BlochVector::ORIGIN).unwrap();
    assert!((p5 - 1.0 / 16.0).abs() < 1e-15, "{p5}");
    assert!((p7 - 1.0 / 64.0).abs() < 1e-15, "{p7}");
}

#[test]
fn probabilities_lie_in_unit_interval() {
    let mut rng = rng(32);
    for name in ["five_qubit", "steane", "bravyi_haah_14", "jones_622", "jones_steane_15"] {
        let p = Protocol::builtin(name).unwrap();
        for _ in 0..30 {
            let r = ball_point(&mut rng, 1.0);
            if let Ok((out, prob)) = p.raw_apply(r) {
                assert!(prob > 0.0 && prob <= 1.0 + 1e-12, "{name} {r}: {prob}");
                assert!(out.norm() <= 1.0 + 1e-9, "{name} {r}: {out}");
            }
        }
    }
}

#[test]
fn transfer_expansion_matches_gatewise_circuit() {
    let cat = Catalogue::builtin();
    let code = cat.code("jones_622").unwrap();
    let jt = JonesTransfer::new(&code).unwrap();
    let jc = JonesCircuit::new(&code).unwrap();
    let mut rng = rng(33);
    for _ in 0..5 {
        let r = ball_point(&mut rng, 1.0);
        let (fast, p) = jt.output(r).unwrap();
        let (outs, q) = jc.outputs(r).unwrap();
        let s = jc.run_gatewise(r).unwrap();
        assert!((s.weight() - q).abs() < 1e-12);
        assert!(fast.max_abs_diff(outs[0]) < 1e-10, "{r}: {fast} vs {}", outs[0]);
        assert!((p - q).abs() < 1e-12);
    }
}

#[test]
fn pure_magic_inputs_are_fixed() {
    for name in FAST {
        let p = Protocol::builtin(name).unwrap();
        let h = family_state(Family::H, 1.0).unwrap();
        let (out, _) = p.raw_apply(h).unwrap();
        assert!(out.max_abs_diff(h) < 1e-9, "{name}: {out}");
    }
}

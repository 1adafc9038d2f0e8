mod common;

use common::*;
use distill_core::circuit::{DenseState, Gate, OneQubitGate};
use distill_core::pauli::PauliString;

const CONJUGATIONS: [&[OneQubitGate]; 4] = [&[], &[OneQubitGate::H], &[OneQubitGate::S, OneQubitGate::H], &[OneQubitGate::H, OneQubitGate::Sdg]];

#[test]
fn gadget_realizations_agree() {
    let mut rng = rng(11);
    for i in 0..100 {
        let n = 1 + i % 3;
        let s = to_dense(&random_density(&mut rng, n));
        let resource = ball_point(&mut rng, 1.0);
        let q = i % n;
        let conj = CONJUGATIONS[i % 4];
        let mut fast = s.clone();
        fast.t_gadget(q, resource, conj).unwrap();
        let literal = s.t_gadget_with_ancilla(q, resource, conj).unwrap();
        assert!(fast.max_abs_diff(&literal) < 1e-12, "state {i}");
    }
}

#[test]
fn operations_keep_hermiticity_and_never_gain_weight() {
    let mut rng = rng(12);
    let gates = [Gate::h(0), Gate::s(1), Gate::sdg(2), Gate::Cnot { control: 0, target: 2 }, Gate::Cz(1, 2), Gate::x(1), Gate::z(0)];
    for _ in 0..20 {
        let mut s: DenseState = to_dense(&random_density(&mut rng, 3));
        for g in gates {
            let w = s.weight();
            s.apply_gate(g).unwrap();
            assert!(s.is_hermitian(1e-12));
            assert!((s.weight() - w).abs() < 1e-12);
        }
        let w = s.weight();
        s.t_gadget(1, ball_point(&mut rng, 1.0), &[OneQubitGate::H]).unwrap();
        assert!(s.is_hermitian(1e-12));
        assert!(s.weight() <= w + 1e-12);
        let w = s.weight();
        let p: PauliString = "XZ".parse().unwrap();
        let s = s.postselect_pauli(&[0, 2], &p, -1, &[]).unwrap();
        assert!(s.is_hermitian(1e-12));
        assert!(s.weight() <= w + 1e-12);
        let s = s.partial_trace(&[1]).unwrap();
        assert!(s.is_hermitian(1e-12));
    }
}

#[test]
fn gates_match_dense_unitaries() {
    let mut rng = rng(13);
    let m = random_density(&mut rng, 2);
    let mut s = to_dense(&m);
    s.apply_gate(Gate::h(1)).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let hm = CMat::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]);
    let u = CMat::identity(2, 2).kronecker(&hm);
    assert!(max_diff(&s, &(&u * &m * u.adjoint())) < 1e-14);
    let mut s = to_dense(&m);
    s.apply_gate(Gate::Cnot { control: 0, target: 1 }).unwrap();
    let mut cx = CMat::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        cx[(i, j)] = c(1.0, 0.0);
    }
    assert!(max_diff(&s, &(&cx * &m * cx.adjoint())) < 1e-14);
}

#[test]
fn ideal_resource_t_gadget_is_t() {
    let mut rng = rng(14);
    let t = t_gate();
    for _ in 0..20 {
        let m = random_density(&mut rng, 1);
        let mut s = to_dense(&m);
        let a = distill_core::states::BlochVector::new(1.0, 1.0, 0.0) * std::f64::consts::FRAC_1_SQRT_2;
        s.t_gadget(0, a, &[]).unwrap();
        let want = &t * &m * t.adjoint() * c(0.5, 0.0);
        assert!(max_diff(&s, &want) < 1e-12);
    }
}

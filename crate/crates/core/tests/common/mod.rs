//! Independent oracles shared by the integration tests: plain Kronecker-product
//! linear algebra on full matrices, plus seeded random inputs.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use distill_core::circuit::{DenseCode, DenseState, Gate, InitState};
use distill_core::codes::{enumerate_group, StabilizerCode, TriorthogonalMatrix};
use distill_core::gf2;
use distill_core::pauli::{Letter, PauliString};
use distill_core::states::BlochVector;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the ball of radius `r_max`.
pub fn ball_point(rng: &mut impl Rng, r_max: f64) -> BlochVector {
    loop {
        let v = BlochVector::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if v.norm() <= 1.0 {
            return v * r_max;
        }
    }
}

pub fn letter_matrix(l: Letter) -> CMat {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let v = match l {
        Letter::I => [o, z, z, o],
        Letter::X => [z, o, o, z],
        Letter::Y => [z, -i, i, z],
        Letter::Z => [o, z, z, -o],
    };
    CMat::from_row_slice(2, 2, &v)
}

/// Full matrix of a Pauli string, qubit 0 as the most significant factor.
pub fn pauli_matrix(p: &PauliString) -> CMat {
    let mut m = CMat::from_element(1, 1, p.phase().to_complex());
    for l in p.letters() {
        m = m.kronecker(&letter_matrix(l));
    }
    m
}

pub fn bloch_rho(r: BlochVector) -> CMat {
    CMat::from_row_slice(2, 2, &[c((1.0 + r.z) / 2.0, 0.0), c(r.x / 2.0, -r.y / 2.0), c(r.x / 2.0, r.y / 2.0), c((1.0 - r.z) / 2.0, 0.0)])
}

pub fn tensor_power(m: &CMat, n: usize) -> CMat {
    let mut out = CMat::from_element(1, 1, c(1.0, 0.0));
    for _ in 0..n {
        out = out.kronecker(m);
    }
    out
}

/// Codespace projector and logical X, Y, Z of a `k = 1` code.
pub struct ProjectionOracle {
    n: usize,
    projector: CMat,
    logicals: [CMat; 3],
}

impl ProjectionOracle {
    pub fn new(code: &StabilizerCode) -> Self {
        assert_eq!(code.k, 1);
        let group = enumerate_group(code).unwrap();
        let dim = 1 << code.n;
        let mut projector = CMat::zeros(dim, dim);
        for g in &group {
            projector += pauli_matrix(g);
        }
        projector /= c(group.len() as f64, 0.0);
        let logicals = [code.logical_word(1).unwrap(), code.logical_word(2).unwrap(), code.logical_word(3).unwrap()].map(|p| pauli_matrix(&p));
        Self { n: code.n, projector, logicals }
    }

    /// Normalized logical Bloch vector of `Π ρ(r)^⊗n Π` and its trace.
    pub fn apply(&self, r: BlochVector) -> (BlochVector, f64) {
        let rho = tensor_power(&bloch_rho(r), self.n);
        let out = &self.projector * rho * &self.projector;
        let w = out.trace().re;
        let e = |l: &CMat| (&out * l).trace().re / w;
        (BlochVector::new(e(&self.logicals[0]), e(&self.logicals[1]), e(&self.logicals[2])), w)
    }
}

/// Random `n`-qubit density matrix `G G† / tr`.
pub fn random_density(rng: &mut impl Rng, n: usize) -> CMat {
    let d = 1 << n;
    let g = CMat::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    let t = m.trace();
    m / t
}

pub fn to_dense(m: &CMat) -> DenseState {
    let d = m.nrows();
    let n = d.trailing_zeros() as usize;
    let data = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect();
    DenseState::from_matrix(n, data).unwrap()
}

pub fn max_diff(s: &DenseState, m: &CMat) -> f64 {
    let d = m.nrows();
    assert_eq!(s.dim(), d);
    (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| (s.entry(i, j) - m[(i, j)]).norm()).fold(0.0, f64::max)
}

/// The Bravyi-Haah circuit gate by gate on `2n` qubits: prepare the encoded
/// `|+⟩^k` with Hadamards and CNOTs, attach `ρ(r)^⊗n`, CNOT every data qubit
/// onto its resource, postselect every resource on `|0⟩`, trace them out and
/// decode with the matrix's CSS code.
pub fn literal_bravyi_haah(g: &TriorthogonalMatrix, r: BlochVector) -> DenseState {
    let n = g.num_columns();
    let (rows, pivots) = gf2::row_reduce(g.rows(), n);
    let mut s = DenseState::init(&vec![InitState::Zero; n]).unwrap();
    for (&row, &p) in rows.iter().zip(&pivots) {
        s.apply_gate(Gate::h(p)).unwrap();
        for j in (0..n).filter(|&j| j != p && row >> j & 1 == 1) {
            s.apply_gate(Gate::Cnot { control: p, target: j }).unwrap();
        }
    }
    let mut s = s.tensor(&DenseState::init(&vec![InitState::Bloch(r); n]).unwrap()).unwrap();
    for j in 0..n {
        s.apply_gate(Gate::Cnot { control: j, target: n + j }).unwrap();
    }
    let z: PauliString = "Z".parse().unwrap();
    for j in 0..n {
        s = s.postselect_pauli(&[n + j], &z, 1, &[]).unwrap();
    }
    let resources: Vec<usize> = (n..2 * n).collect();
    let s = s.partial_trace(&resources).unwrap();
    let code = g.to_stabilizer_code("toy").unwrap();
    DenseCode::new(&code).unwrap().decode(&s).unwrap()
}

/// Exact controlled-Hadamard with control qubit 0.
pub fn controlled_h() -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = CMat::zeros(4, 4);
    u[(0, 0)] = c(1.0, 0.0);
    u[(1, 1)] = c(1.0, 0.0);
    u[(2, 2)] = c(h, 0.0);
    u[(2, 3)] = c(h, 0.0);
    u[(3, 2)] = c(h, 0.0);
    u[(3, 3)] = c(-h, 0.0);
    u
}

pub fn t_gate() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, s)])
}

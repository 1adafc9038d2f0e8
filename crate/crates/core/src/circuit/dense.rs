//! Dense density-matrix engine.
//!
//! Basis index convention: qubit 0 is the most significant bit. Matrices are
//! row-major and unnormalized; the trace is the accumulated success weight.

use num_complex::Complex64;

use super::{bloch_matrix, CircuitError, Gate, OneQubitGate, MAX_DENSE_QUBITS, ZERO_WEIGHT};
use crate::codes::{enumerate_group, StabilizerCode};
use crate::pauli::{Phase, PauliString};
use crate::states::BlochVector;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitState {
    Zero,
    Plus,
    Bloch(BlochVector),
}

impl InitState {
    fn matrix(self) -> [[Complex64; 2]; 2] {
        match self {
            InitState::Zero => bloch_matrix(BlochVector::new(0.0, 0.0, 1.0)),
            InitState::Plus => bloch_matrix(BlochVector::new(1.0, 0.0, 0.0)),
            InitState::Bloch(r) => bloch_matrix(r),
        }
    }
}

/// `coeff · X^x Z^z` with masks over dense basis-index bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensePauli {
    x: usize,
    z: usize,
    coeff: Complex64,
}

fn parity_sign(v: usize) -> f64 {
    if v.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl DensePauli {
    /// Places qubit `j` of `p` on register qubit `qubits[j]` of an `n`-qubit register.
    pub fn new(p: &PauliString, qubits: &[usize], n: usize) -> Self {
        debug_assert_eq!(p.num_qubits(), qubits.len());
        let mut x = 0;
        let mut z = 0;
        for (j, &q) in qubits.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            if p.x_bits() >> j & 1 == 1 {
                x |= bit;
            }
            if p.z_bits() >> j & 1 == 1 {
                z |= bit;
            }
        }
        let ys = (p.x_bits() & p.z_bits()).count_ones() as i64;
        let coeff = (p.phase() * Phase::from_exponent(ys)).to_complex();
        Self { x, z, coeff }
    }

    /// Matrix element `⟨k ⊕ x| P |k⟩`.
    fn column_value(&self, k: usize) -> Complex64 {
        self.coeff * parity_sign(self.z & k)
    }
}

/// Linear map on one qubit's 2×2 blocks, acting on `(X00, X01, X10, X11)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superop(pub [[Complex64; 4]; 4]);

impl Superop {
    pub fn identity() -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = Complex64::new(1.0, 0.0);
        }
        Superop(m)
    }

    /// `X ↦ U X U†`.
    pub fn conjugation(u: [[Complex64; 2]; 2]) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m[2 * i + j][2 * k + l] = u[i][k] * u[j][l].conj();
                    }
                }
            }
        }
        Superop(m)
    }

    /// Entrywise product with `m`.
    pub fn schur(m: [[Complex64; 2]; 2]) -> Self {
        let mut out = [[ZERO; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                out[2 * i + j][2 * i + j] = m[i][j];
            }
        }
        Superop(out)
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &Superop) -> Superop {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = (0..4).map(|k| self.0[i][k] * first.0[k][j]).sum();
            }
        }
        Superop(m)
    }

    /// The map of [`DenseState::t_gadget`] as a single block operation.
    pub fn t_gadget(resource: BlochVector, conj: &[OneQubitGate]) -> Self {
        let mut s = Superop::identity();
        for g in conj.iter().rev() {
            s = Superop::conjugation(g.inverse().matrix()).after(&s);
        }
        s = Superop::schur(bloch_matrix(resource)).after(&s);
        for g in conj {
            s = Superop::conjugation(g.matrix()).after(&s);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    data: Vec<Complex64>,
}

pub fn dense_init(spec: &[InitState]) -> Result<DenseState, CircuitError> {
    DenseState::init(spec)
}

impl DenseState {
    pub fn init(spec: &[InitState]) -> Result<Self, CircuitError> {
        if spec.len() > MAX_DENSE_QUBITS {
            return Err(CircuitError::TooManyQubits(spec.len()));
        }
        let mut state = DenseState { n: 0, data: vec![Complex64::new(1.0, 0.0)] };
        for s in spec {
            let m = s.matrix();
            state = state.tensor(&DenseState {
                n: 1,
                data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
            })?;
        }
        Ok(state)
    }

    pub fn from_matrix(n: usize, data: Vec<Complex64>) -> Result<Self, CircuitError> {
        if n > MAX_DENSE_QUBITS {
            return Err(CircuitError::TooManyQubits(n));
        }
        let dim = 1usize << n;
        if data.len() != dim * dim {
            return Err(CircuitError::BadShape { expected: dim * dim, got: data.len() });
        }
        Ok(Self { n, data })
    }

    /// `2^-n Σ_w c_w P_w`, words indexed base 4 (digit `j`: I, X, Y, Z on qubit `j`).
    pub fn from_pauli_coefficients(n: usize, coeffs: &[Complex64]) -> Result<Self, CircuitError> {
        if coeffs.len() != 1 << (2 * n) {
            return Err(CircuitError::BadShape { expected: 1 << (2 * n), got: coeffs.len() });
        }
        let mut s = Self::from_matrix(n, vec![ZERO; 1 << (2 * n)])?;
        let scale = 1.0 / (1u64 << n) as f64;
        let all: Vec<usize> = (0..n).collect();
        for (w, &c) in coeffs.iter().enumerate() {
            if c != ZERO {
                s.add_pauli(&DensePauli::new(&bare_word(n, w), &all, n), c * scale);
            }
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim() + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// Accumulated success probability.
    pub fn weight(&self) -> f64 {
        self.trace().re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| (self.entry(i, j) - self.entry(j, i).conj()).norm() <= tol))
    }

    pub fn max_abs_diff(&self, other: &DenseState) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> DenseState {
        DenseState { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// Copy normalized to unit trace.
    pub fn normalized(&self) -> Result<DenseState, CircuitError> {
        let w = self.weight();
        if !(w > ZERO_WEIGHT) {
            return Err(CircuitError::ZeroProbability(w));
        }
        Ok(self.scaled(1.0 / w))
    }

    /// `self ⊗ other`, with `other` occupying the trailing qubits.
    pub fn tensor(&self, other: &DenseState) -> Result<DenseState, CircuitError> {
        let n = self.n + other.n;
        if n > MAX_DENSE_QUBITS {
            return Err(CircuitError::TooManyQubits(n));
        }
        let (da, db) = (self.dim(), other.dim());
        let d = da * db;
        let mut data = vec![ZERO; d * d];
        for i1 in 0..da {
            for j1 in 0..da {
                let a = self.entry(i1, j1);
                if a == ZERO {
                    continue;
                }
                for i2 in 0..db {
                    let row = (i1 * db + i2) * d + j1 * db;
                    for j2 in 0..db {
                        data[row + j2] = a * other.entry(i2, j2);
                    }
                }
            }
        }
        Ok(DenseState { n, data })
    }

    fn bit(&self, q: usize) -> Result<usize, CircuitError> {
        if q >= self.n {
            return Err(CircuitError::BadQubit { index: q, n: self.n });
        }
        Ok(1 << (self.n - 1 - q))
    }

    /// `ρ ← U ρ U†` on qubit `q`.
    fn apply_unitary_1q(&mut self, u: [[Complex64; 2]; 2], q: usize) -> Result<(), CircuitError> {
        let b = self.bit(q)?;
        let d = self.dim();
        for i in (0..d).filter(|i| i & b == 0) {
            let i1 = i | b;
            for j in 0..d {
                let a0 = self.data[i * d + j];
                let a1 = self.data[i1 * d + j];
                self.data[i * d + j] = u[0][0] * a0 + u[0][1] * a1;
                self.data[i1 * d + j] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        let uc = [[u[0][0].conj(), u[0][1].conj()], [u[1][0].conj(), u[1][1].conj()]];
        for i in 0..d {
            let row = &mut self.data[i * d..(i + 1) * d];
            for j in (0..d).filter(|j| j & b == 0) {
                let j1 = j | b;
                let c0 = row[j];
                let c1 = row[j1];
                row[j] = c0 * uc[0][0] + c1 * uc[0][1];
                row[j1] = c0 * uc[1][0] + c1 * uc[1][1];
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: Gate) -> Result<(), CircuitError> {
        match gate {
            Gate::One(g, q) => self.apply_unitary_1q(g.matrix(), q),
            Gate::Cz(a, b) => {
                let (ba, bb) = (self.bit(a)?, self.bit(b)?);
                if a == b {
                    return Err(CircuitError::RepeatedQubit(a));
                }
                let both = ba | bb;
                let d = self.dim();
                let sign = |i: usize| if i & both == both { -1.0 } else { 1.0 };
                for i in 0..d {
                    let si = sign(i);
                    for j in 0..d {
                        self.data[i * d + j] *= si * sign(j);
                    }
                }
                Ok(())
            }
            Gate::Cnot { control, target } => {
                let (bc, bt) = (self.bit(control)?, self.bit(target)?);
                if control == target {
                    return Err(CircuitError::RepeatedQubit(control));
                }
                let perm = |i: usize| if i & bc != 0 { i ^ bt } else { i };
                let d = self.dim();
                let old = self.data.clone();
                for i in 0..d {
                    let pi = perm(i);
                    for j in 0..d {
                        self.data[i * d + j] = old[pi * d + perm(j)];
                    }
                }
                Ok(())
            }
        }
    }

    pub fn apply_gates(&mut self, gates: &[Gate]) -> Result<(), CircuitError> {
        gates.iter().try_for_each(|&g| self.apply_gate(g))
    }

    /// Entrywise product of qubit `q`'s coherences with `m`.
    fn schur(&mut self, q: usize, m: [[Complex64; 2]; 2]) -> Result<(), CircuitError> {
        let b = self.bit(q)?;
        let d = self.dim();
        for i in 0..d {
            let mi = &m[(i & b != 0) as usize];
            for j in 0..d {
                self.data[i * d + j] *= mi[(j & b != 0) as usize];
            }
        }
        Ok(())
    }

    /// Applies a block map to qubit `q`. With a `control` qubit, the map is
    /// `ops[2a + c]` where `a` and `c` are the control's row and column bits;
    /// without one, `ops[0]` is used everywhere.
    pub fn apply_superop(&mut self, q: usize, control: Option<usize>, ops: &[Superop; 4]) -> Result<(), CircuitError> {
        let b = self.bit(q)?;
        let cb = match control {
            Some(c) if c == q => return Err(CircuitError::RepeatedQubit(c)),
            Some(c) => self.bit(c)?,
            None => 0,
        };
        let d = self.dim();
        for i in (0..d).filter(|i| i & b == 0) {
            let a = (i & cb != 0) as usize;
            let (r0, r1) = (i * d, (i | b) * d);
            for j in (0..d).filter(|j| j & b == 0) {
                let op = &ops[2 * a + (j & cb != 0) as usize].0;
                let v = [self.data[r0 + j], self.data[r0 + (j | b)], self.data[r1 + j], self.data[r1 + (j | b)]];
                let out = |k: usize| op[k][0] * v[0] + op[k][1] * v[1] + op[k][2] * v[2] + op[k][3] * v[3];
                self.data[r0 + j] = out(0);
                self.data[r0 + (j | b)] = out(1);
                self.data[r1 + j] = out(2);
                self.data[r1 + (j | b)] = out(3);
            }
        }
        Ok(())
    }

    /// Consumes one resource state `ρ(resource)` to apply `V · G · V†` on
    /// `data_qubit`, where `G` is the CNOT-and-postselect gadget and `V` is
    /// the Clifford sequence `conj` (first element applied first).
    pub fn t_gadget(&mut self, data_qubit: usize, resource: BlochVector, conj: &[OneQubitGate]) -> Result<(), CircuitError> {
        self.bit(data_qubit)?;
        for g in conj.iter().rev() {
            self.apply_unitary_1q(g.inverse().matrix(), data_qubit)?;
        }
        self.schur(data_qubit, bloch_matrix(resource))?;
        for g in conj {
            self.apply_unitary_1q(g.matrix(), data_qubit)?;
        }
        Ok(())
    }

    /// The same gadget realized literally: attach the resource, CNOT from the
    /// data qubit onto it, postselect it on `|0⟩` and discard it.
    pub fn t_gadget_with_ancilla(
        &self,
        data_qubit: usize,
        resource: BlochVector,
        conj: &[OneQubitGate],
    ) -> Result<DenseState, CircuitError> {
        let mut s = self.tensor(&DenseState::init(&[InitState::Bloch(resource)])?)?;
        let anc = self.n;
        for g in conj.iter().rev() {
            s.apply_gate(Gate::One(g.inverse(), data_qubit))?;
        }
        s.apply_gate(Gate::Cnot { control: data_qubit, target: anc })?;
        let z: PauliString = "Z".parse().expect("literal Pauli");
        let mut s = s.postselect_pauli(&[anc], &z, 1, &[anc])?;
        for g in conj {
            s.apply_gate(Gate::One(*g, data_qubit))?;
        }
        Ok(s)
    }

    pub(crate) fn add_pauli(&mut self, p: &DensePauli, c: Complex64) {
        let d = self.dim();
        for k in 0..d {
            self.data[(k ^ p.x) * d + k] += c * p.column_value(k);
        }
    }

    /// `tr(ρ P)` for a dense-mask Pauli.
    pub(crate) fn expectation_dense(&self, p: &DensePauli) -> Complex64 {
        let d = self.dim();
        (0..d).map(|j| self.data[j * d + (j ^ p.x)] * p.column_value(j)).sum()
    }

    /// Unnormalized `tr(ρ P)` with qubit `j` of `p` on register qubit `qubits[j]`.
    pub fn expectation(&self, p: &PauliString, qubits: &[usize]) -> Result<Complex64, CircuitError> {
        if p.num_qubits() != qubits.len() {
            return Err(CircuitError::LengthMismatch { expected: qubits.len(), got: p.num_qubits() });
        }
        for &q in qubits {
            self.bit(q)?;
        }
        Ok(self.expectation_dense(&DensePauli::new(p, qubits, self.n)))
    }

    /// Normalized Bloch vector of qubit `q`'s reduced state.
    pub fn bloch(&self, q: usize) -> Result<BlochVector, CircuitError> {
        let w = self.weight();
        if !(w > ZERO_WEIGHT) {
            return Err(CircuitError::ZeroProbability(w));
        }
        let mut v = [0.0; 3];
        for (slot, letter) in v.iter_mut().zip(["X", "Y", "Z"]) {
            let p: PauliString = letter.parse().expect("literal Pauli");
            *slot = self.expectation(&p, &[q])?.re / w;
        }
        Ok(BlochVector::from_array(v))
    }

    /// Applies `(I ± P)/2` on `support`, then traces out `discard`.
    pub fn postselect_pauli(
        &self,
        support: &[usize],
        pauli: &PauliString,
        eigenvalue: i8,
        discard: &[usize],
    ) -> Result<DenseState, CircuitError> {
        if pauli.num_qubits() != support.len() {
            return Err(CircuitError::LengthMismatch { expected: support.len(), got: pauli.num_qubits() });
        }
        for &q in support.iter().chain(discard) {
            self.bit(q)?;
        }
        let p = DensePauli::new(pauli, support, self.n);
        let e = if eigenvalue >= 0 { 1.0 } else { -1.0 };
        let d = self.dim();
        let mut out = vec![ZERO; d * d];
        let pp = p.coeff * p.coeff;
        for i in 0..d {
            let li = p.column_value(i ^ p.x);
            for j in 0..d {
                let rj = p.column_value(j);
                let rho = self.data[i * d + j];
                let left = li * self.data[(i ^ p.x) * d + j];
                let right = self.data[i * d + (j ^ p.x)] * rj;
                let both = pp * parity_sign(p.z & (i ^ p.x)) * parity_sign(p.z & j) * self.data[(i ^ p.x) * d + (j ^ p.x)];
                out[i * d + j] = (rho + e * left + e * right + both) * 0.25;
            }
        }
        let s = DenseState { n: self.n, data: out };
        let w = s.weight();
        if !(w > ZERO_WEIGHT) {
            return Err(CircuitError::ZeroProbability(w));
        }
        if discard.is_empty() {
            return Ok(s);
        }
        let keep: Vec<usize> = (0..self.n).filter(|q| !discard.contains(q)).collect();
        s.reduce_to(&keep)
    }

    /// Traces out every qubit not in `keep`; the result orders qubits as listed.
    pub fn reduce_to(&self, keep: &[usize]) -> Result<DenseState, CircuitError> {
        for (i, &q) in keep.iter().enumerate() {
            self.bit(q)?;
            if keep[..i].contains(&q) {
                return Err(CircuitError::RepeatedQubit(q));
            }
        }
        let env: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let scatter = |mask: usize, qubits: &[usize]| -> usize {
            let m = qubits.len();
            qubits
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> (m - 1 - j) & 1 == 1)
                .map(|(_, &q)| 1usize << (self.n - 1 - q))
                .sum()
        };
        let ka: Vec<usize> = (0..1usize << keep.len()).map(|a| scatter(a, keep)).collect();
        let ea: Vec<usize> = (0..1usize << env.len()).map(|e| scatter(e, &env)).collect();
        let d = self.dim();
        let dk = ka.len();
        let mut data = vec![ZERO; dk * dk];
        for (a, &ia) in ka.iter().enumerate() {
            for (b, &ib) in ka.iter().enumerate() {
                data[a * dk + b] = ea.iter().map(|&e| self.data[(ia | e) * d + (ib | e)]).sum();
            }
        }
        Ok(DenseState { n: keep.len(), data })
    }

    pub fn partial_trace(&self, discard: &[usize]) -> Result<DenseState, CircuitError> {
        let keep: Vec<usize> = (0..self.n).filter(|q| !discard.contains(q)).collect();
        self.reduce_to(&keep)
    }
}

/// Letter-form Pauli on `n` qubits from a base-4 word.
fn bare_word(n: usize, mut w: usize) -> PauliString {
    let (mut x, mut z) = (0u64, 0u64);
    for j in 0..n {
        match w % 4 {
            1 => x |= 1 << j,
            2 => {
                x |= 1 << j;
                z |= 1 << j
            }
            3 => z |= 1 << j,
            _ => {}
        }
        w /= 4;
    }
    PauliString::from_bits(n, x, z, Phase::ONE)
}

/// A stabilizer code prepared for dense encoding and decoding: every
/// `L̄·g` product is precomputed as a dense-mask Pauli.
#[derive(Debug, Clone)]
pub struct DenseCode {
    pub n: usize,
    pub k: usize,
    group_size: usize,
    /// `products[w][s] = L̄_w · g_s`.
    products: Vec<Vec<DensePauli>>,
    bare: Vec<DensePauli>,
}

impl DenseCode {
    pub fn new(code: &StabilizerCode) -> Result<Self, CircuitError> {
        if code.n > MAX_DENSE_QUBITS {
            return Err(CircuitError::TooManyQubits(code.n));
        }
        let group = enumerate_group(code)?;
        let all: Vec<usize> = (0..code.n).collect();
        let kq: Vec<usize> = (0..code.k).collect();
        let words = 1usize << (2 * code.k);
        let mut products = Vec::with_capacity(words);
        for w in 0..words {
            let l = code.logical_word(w).map_err(crate::codes::CodeError::from)?;
            let row = group
                .iter()
                .map(|g| l.mul(g).map(|p| DensePauli::new(&p, &all, code.n)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(crate::codes::CodeError::from)?;
            products.push(row);
        }
        let bare = (0..words).map(|w| DensePauli::new(&bare_word(code.k, w), &kq, code.k)).collect();
        Ok(Self { n: code.n, k: code.k, group_size: group.len(), products, bare })
    }

    /// `Enc(σ) = 2^-k Σ_L tr(σL) L̄ Π` on an `n`-qubit register.
    pub fn encode(&self, sigma: &DenseState) -> Result<DenseState, CircuitError> {
        if sigma.n != self.k {
            return Err(CircuitError::LengthMismatch { expected: self.k, got: sigma.n });
        }
        let mut out = DenseState::from_matrix(self.n, vec![ZERO; 1 << (2 * self.n)])?;
        let scale = 1.0 / ((1u64 << self.k) as f64 * self.group_size as f64);
        for (w, row) in self.products.iter().enumerate() {
            let c = sigma.expectation_dense(&self.bare[w]) * scale;
            if c == ZERO {
                continue;
            }
            for p in row {
                out.add_pauli(p, c);
            }
        }
        Ok(out)
    }

    /// Projects onto the codespace and returns the unnormalized `k`-qubit
    /// logical state, whose trace is `tr(Π s)`.
    pub fn decode(&self, s: &DenseState) -> Result<DenseState, CircuitError> {
        if s.n != self.n {
            return Err(CircuitError::LengthMismatch { expected: self.n, got: s.n });
        }
        let inv = 1.0 / self.group_size as f64;
        let coeffs: Vec<Complex64> = self
            .products
            .iter()
            .map(|row| row.iter().map(|p| s.expectation_dense(p)).sum::<Complex64>() * inv)
            .collect();
        let w = coeffs[0].re;
        if !(w > ZERO_WEIGHT) {
            return Err(CircuitError::ZeroProbability(w));
        }
        DenseState::from_pauli_coefficients(self.k, &coeffs)
    }
}

pub fn encode_logical(code: &StabilizerCode, sigma: &DenseState) -> Result<DenseState, CircuitError> {
    DenseCode::new(code)?.encode(sigma)
}

/// Decodes the code block sitting on register qubits `block` (other qubits are traced out).
pub fn decode_logical(s: &DenseState, code: &StabilizerCode, block: &[usize]) -> Result<DenseState, CircuitError> {
    if block.len() != code.n {
        return Err(CircuitError::LengthMismatch { expected: code.n, got: block.len() });
    }
    let reduced = if block.iter().copied().eq(0..s.n) { s.clone() } else { s.reduce_to(block)? };
    DenseCode::new(code)?.decode(&reduced)
}

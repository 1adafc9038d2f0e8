//! The named distillation maps, each presented as `BlochVector → (BlochVector, probability)`.
//!
//! The three fast protocols are reported in the `|H⟩` frame: an input
//! `f·(1,0,1)/√2` is an H-type state, and a perfect run returns `(1,0,1)/√2`.
//! Their T gadgets consume the same input rotated by [`gadget_frame`], which
//! takes `|H⟩` to `|A⟩ = T|+⟩`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{cw_prepare, cw_project_decode, cw_schur, CircuitError, DenseCode, DenseState, Gate, InitState, OneQubitGate, Superop};
use crate::codes::{Catalogue, CodeError, TriorthogonalMatrix};
use crate::states::{axis_twirl, BlochVector, CliffordRotation, Family};
use crate::wep::{build_term_table, distill_project, TermTable, WepError};

pub const PROTOCOL_NAMES: [&str; 5] = ["five_qubit", "steane", "bravyi_haah_14", "jones_622", "jones_steane_15"];

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("unknown protocol '{0}' (expected one of five_qubit, steane, bravyi_haah_14, jones_622, jones_steane_15)")]
    Unknown(String),
    #[error("zero success probability")]
    ZeroProbability,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("circuit: {0}")]
    Circuit(CircuitError),
    #[error("weight enumerator: {0}")]
    Wep(WepError),
    #[error("unknown twirl mode '{0}' (expected none, every_step or final_only)")]
    BadTwirlMode(String),
}

impl From<CircuitError> for ProtocolError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::ZeroProbability(_) => ProtocolError::ZeroProbability,
            e => ProtocolError::Circuit(e),
        }
    }
}

impl From<WepError> for ProtocolError {
    fn from(e: WepError) -> Self {
        match e {
            WepError::ZeroProbability(_) => ProtocolError::ZeroProbability,
            e => ProtocolError::Wep(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwirlMode {
    #[default]
    None,
    EveryStep,
    FinalOnly,
}

impl TwirlMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TwirlMode::None => "none",
            TwirlMode::EveryStep => "every_step",
            TwirlMode::FinalOnly => "final_only",
        }
    }
}

impl fmt::Display for TwirlMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TwirlMode {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(TwirlMode::None),
            "every_step" => Ok(TwirlMode::EveryStep),
            "final_only" => Ok(TwirlMode::FinalOnly),
            other => Err(ProtocolError::BadTwirlMode(other.to_string())),
        }
    }
}

pub type StepResult = Result<(BlochVector, f64), ProtocolError>;
type MapFn = dyn Fn(BlochVector) -> StepResult + Send + Sync;

/// A single-qubit distillation map plus its twirl configuration.
#[derive(Clone)]
pub struct Protocol {
    name: String,
    n_inputs: u32,
    family: Family,
    twirl: TwirlMode,
    map: Arc<MapFn>,
}

impl fmt::Debug for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Protocol")
            .field("name", &self.name)
            .field("n_inputs", &self.n_inputs)
            .field("family", &self.family)
            .field("twirl", &self.twirl)
            .finish()
    }
}

/// Frame change `(x, y, z) → (x, z, −y)`, taking `|H⟩` to `|A⟩` and the
/// conjugate `|A*⟩ = (1,−1,0)/√2` back to `|H⟩`.
pub fn gadget_frame() -> CliffordRotation {
    CliffordRotation::from_matrix([[1, 0, 0], [0, 0, 1], [0, -1, 0]]).expect("proper rotation")
}

impl Protocol {
    pub fn from_fn<F>(name: impl Into<String>, n_inputs: u32, family: Family, f: F) -> Self
    where
        F: Fn(BlochVector) -> StepResult + Send + Sync + 'static,
    {
        Self { name: name.into(), n_inputs, family, twirl: TwirlMode::None, map: Arc::new(f) }
    }

    /// Builds a named protocol from the codes in `cat`.
    pub fn catalogue(name: &str, cat: &Catalogue) -> Result<Self, ProtocolError> {
        match name {
            "five_qubit" | "steane" => {
                let table = build_term_table(&cat.code(name)?)?;
                let family = if name == "five_qubit" { Family::T } else { Family::H };
                let n = table.n as u32;
                Ok(Self::from_fn(name, n, family, move |r| projection_step(&table, r)))
            }
            "bravyi_haah_14" => {
                let bh = BravyiHaah::new(cat.matrix("bravyi_haah_14")?)?;
                let n = bh.matrix.num_columns() as u32;
                Ok(Self::from_fn(name, n, Family::H, move |r| {
                    let (outs, p) = bh.outputs(r)?;
                    Ok((outs[0], p))
                }))
            }
            "jones_622" | "jones_steane_15" => {
                let code_name = if name == "jones_622" { "jones_622" } else { "steane" };
                let code = cat.code(code_name)?;
                let n = JonesCircuit::new(&code)?.n_inputs();
                let jt = JonesTransfer::new(&code)?;
                Ok(Self::from_fn(name, n, Family::H, move |r| jt.output(r)))
            }
            other => Err(ProtocolError::Unknown(other.to_string())),
        }
    }

    pub fn builtin(name: &str) -> Result<Self, ProtocolError> {
        Self::catalogue(name, &Catalogue::builtin())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_inputs(&self) -> u32 {
        self.n_inputs
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn twirl_mode(&self) -> TwirlMode {
        self.twirl
    }

    pub fn with_twirl(&self, mode: TwirlMode, family: Family) -> Self {
        Self { twirl: mode, family, ..self.clone() }
    }

    /// The bare map, ignoring the twirl setting.
    pub fn raw_apply(&self, r: BlochVector) -> StepResult {
        (self.map)(r)
    }

    /// One step; in `every_step` mode the input is first projected onto the
    /// best axis of the twirl family.
    pub fn apply(&self, r: BlochVector) -> StepResult {
        let r = match self.twirl {
            TwirlMode::EveryStep => axis_twirl(r, self.family),
            _ => r,
        };
        let (out, p) = (self.map)(r)?;
        if !(p > 0.0) || !out.is_finite() {
            return Err(ProtocolError::ZeroProbability);
        }
        Ok((out, p))
    }

    /// The state reported after the last step (twirled in `final_only` mode).
    pub fn readout(&self, r: BlochVector) -> BlochVector {
        match self.twirl {
            TwirlMode::FinalOnly => axis_twirl(r, self.family),
            _ => r,
        }
    }
}

fn projection_step(table: &TermTable, r: BlochVector) -> StepResult {
    Ok(distill_project(table, r)?)
}

/// Transversal-T distillation with a triorthogonal code, on the codeword engine.
#[derive(Debug, Clone)]
pub struct BravyiHaah {
    pub matrix: TriorthogonalMatrix,
}

impl BravyiHaah {
    pub fn new(matrix: TriorthogonalMatrix) -> Result<Self, ProtocolError> {
        let rep = matrix.validate();
        if !rep.passed() {
            return Err(CodeError::Invalid { name: "bravyi_haah_14".into(), reason: rep.to_string() }.into());
        }
        Ok(Self { matrix })
    }

    /// Unnormalized decoded state in the code frame (trace = success probability).
    pub fn run(&self, r: BlochVector) -> Result<DenseState, ProtocolError> {
        let mut s = cw_prepare(&self.matrix)?;
        cw_schur(&mut s, gadget_frame().apply(r));
        Ok(cw_project_decode(&s, &self.matrix)?)
    }

    /// Per-qubit outputs in the `|H⟩` frame and the success probability.
    pub fn outputs(&self, r: BlochVector) -> Result<(Vec<BlochVector>, f64), ProtocolError> {
        let out = self.run(r)?;
        let frame = gadget_frame();
        let blochs = (0..out.num_qubits())
            .map(|q| out.bloch(q).map(|b| frame.apply(b)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((blochs, out.weight()))
    }
}

/// Controlled-Hadamard check of an encoded block: an ancilla `|+⟩` controls
/// `H` on every code qubit, each controlled-H built as `R · CZ · R†` with
/// `R = R_y(π/4)` and both `R` and `R†` realized by one T gadget.
#[derive(Debug, Clone)]
pub struct JonesCircuit {
    code: DenseCode,
}

/// Clifford frames around the two gadgets of one controlled-H.
pub const R_DAG_FRAME: [OneQubitGate; 2] = [OneQubitGate::H, OneQubitGate::Sdg];
pub const R_FRAME: [OneQubitGate; 2] = [OneQubitGate::H, OneQubitGate::S];

impl JonesCircuit {
    pub fn new(code: &crate::codes::StabilizerCode) -> Result<Self, ProtocolError> {
        if code.n + 1 > crate::circuit::MAX_DENSE_QUBITS {
            return Err(CircuitError::TooManyQubits(code.n + 1).into());
        }
        Ok(Self { code: DenseCode::new(code)? })
    }

    /// Distilled inputs plus two gadget resources per code qubit.
    pub fn n_inputs(&self) -> u32 {
        (self.code.k + 2 * self.code.n) as u32
    }

    /// Runs the circuit with each qubit's `gadget, CZ, gadget` sequence fused
    /// into one block map selected by the ancilla bits.
    pub fn run(&self, r: BlochVector) -> Result<DenseState, ProtocolError> {
        let ops = jones_branch_ops(r);
        let mut s = self.prepare(r)?;
        for q in 1..=self.code.n {
            s.apply_superop(q, Some(0), &ops)?;
        }
        self.finish(&s)
    }

    /// The same circuit applied gate by gate.
    pub fn run_gatewise(&self, r: BlochVector) -> Result<DenseState, ProtocolError> {
        let resource = gadget_frame().apply(r);
        let mut s = self.prepare(r)?;
        for q in 1..=self.code.n {
            s.t_gadget(q, resource, &R_DAG_FRAME)?;
            s.apply_gate(Gate::Cz(0, q))?;
            s.t_gadget(q, resource, &R_FRAME)?;
        }
        self.finish(&s)
    }

    /// `|+⟩ ⊗ Enc(ρ(r)^⊗k)`.
    fn prepare(&self, r: BlochVector) -> Result<DenseState, ProtocolError> {
        let sigma = DenseState::init(&vec![InitState::Bloch(r); self.code.k])?;
        let block = self.code.encode(&sigma)?;
        Ok(DenseState::init(&[InitState::Plus])?.tensor(&block)?)
    }

    /// Postselects the ancilla on `|+⟩` and decodes the block.
    fn finish(&self, s: &DenseState) -> Result<DenseState, ProtocolError> {
        let x: crate::pauli::PauliString = "X".parse().expect("literal Pauli");
        let s = s.postselect_pauli(&[0], &x, 1, &[0])?;
        Ok(self.code.decode(&s)?)
    }

    pub fn outputs(&self, r: BlochVector) -> Result<(Vec<BlochVector>, f64), ProtocolError> {
        let out = self.run(r)?;
        let blochs = (0..out.num_qubits()).map(|q| out.bloch(q)).collect::<Result<Vec<_>, _>>()?;
        Ok((blochs, out.weight()))
    }
}

/// The qubit-0 marginal of [`JonesCircuit`] compiled into a sum over
/// per-qubit Pauli transfer products.
///
/// Every block qubit sees the same one-qubit map for each ancilla branch, so
/// a decoded coefficient is a sum of products of entries
/// `tr(σ_Q Φ(σ_P))` raised to letter-pair counts. Terms with equal counts are
/// merged once at construction.
#[derive(Debug, Clone)]
pub struct JonesTransfer {
    n: usize,
    k: usize,
    scale: f64,
    terms: Vec<TransferTerm>,
    factors: Vec<(u8, u8)>,
}

#[derive(Debug, Clone, Copy)]
struct TransferTerm {
    out: u8,
    word: u32,
    coeff: Complex64,
    start: u32,
    len: u8,
}

fn letter_index(p: &crate::pauli::PauliString, q: usize) -> usize {
    let x = p.x_bits() >> q & 1 == 1;
    let z = p.z_bits() >> q & 1 == 1;
    match (x, z) {
        (false, false) => 0,
        (true, false) => 1,
        (true, true) => 2,
        (false, true) => 3,
    }
}

fn pauli_matrix(letter: usize) -> [[Complex64; 2]; 2] {
    let (o, z, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
    match letter {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        _ => [[o, z], [z, -o]],
    }
}

/// `T[Q][P] = tr(σ_Q Φ(σ_P))`.
fn transfer_matrix(op: &Superop) -> [[Complex64; 4]; 4] {
    let mut t = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (p, col) in (0..4).map(|p| (p, pauli_matrix(p))) {
        let v = [col[0][0], col[0][1], col[1][0], col[1][1]];
        let img: Vec<Complex64> = (0..4).map(|i| (0..4).map(|j| op.0[i][j] * v[j]).sum()).collect();
        for (q, row) in t.iter_mut().enumerate() {
            let s = pauli_matrix(q);
            row[p] = s[0][0] * img[0] + s[0][1] * img[2] + s[1][0] * img[1] + s[1][1] * img[3];
        }
    }
    t
}

/// The four ancilla-branch block maps of one controlled-H.
fn jones_branch_ops(r: BlochVector) -> [Superop; 4] {
    let resource = gadget_frame().apply(r);
    let before = Superop::t_gadget(resource, &R_DAG_FRAME);
    let after = Superop::t_gadget(resource, &R_FRAME);
    let one = Complex64::new(1.0, 0.0);
    [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(a, c)| {
        let sign = |bit: i32| if bit == 1 { -one } else { one };
        let cz = Superop::schur([[one, sign(c)], [sign(a), sign(a) * sign(c)]]);
        after.after(&cz.after(&before))
    })
}

impl JonesTransfer {
    pub fn new(code: &crate::codes::StabilizerCode) -> Result<Self, ProtocolError> {
        if code.k == 0 || 2 * code.k > 32 {
            return Err(CodeError::Invalid { name: "jones".into(), reason: format!("k = {} unsupported", code.k) }.into());
        }
        let group = crate::codes::enumerate_group(code)?;
        let words = 1usize << (2 * code.k);
        let mut terms = Vec::new();
        let mut factors = Vec::new();
        for out in 0..4usize {
            let lo = code.logical_word(out).map_err(CodeError::from)?;
            let left = group.iter().map(|g| lo.mul(g)).collect::<Result<Vec<_>, _>>().map_err(CodeError::from)?;
            for word in 0..words {
                let li = code.logical_word(word).map_err(CodeError::from)?;
                let right = group.iter().map(|h| li.mul(h)).collect::<Result<Vec<_>, _>>().map_err(CodeError::from)?;
                let mut hist: std::collections::BTreeMap<[u8; 16], Complex64> = std::collections::BTreeMap::new();
                for a in &left {
                    for b in &right {
                        let mut counts = [0u8; 16];
                        for q in 0..code.n {
                            counts[4 * letter_index(a, q) + letter_index(b, q)] += 1;
                        }
                        *hist.entry(counts).or_default() += a.phase().to_complex() * b.phase().to_complex();
                    }
                }
                for (counts, coeff) in hist {
                    if coeff.norm() < 0.5 {
                        continue;
                    }
                    let start = factors.len() as u32;
                    factors.extend(counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(pair, &c)| (pair as u8, c)));
                    let len = (factors.len() as u32 - start) as u8;
                    terms.push(TransferTerm { out: out as u8, word: word as u32, coeff, start, len });
                }
            }
        }
        let g = group.len() as f64;
        let scale = 0.25 / ((1u64 << code.k) as f64 * g * g);
        Ok(Self { n: code.n, k: code.k, scale, terms, factors })
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Unnormalized Pauli coefficients `(c_I, c_X, c_Y, c_Z)` of logical qubit 0.
    pub fn coefficients(&self, r: BlochVector) -> [Complex64; 4] {
        let ops = jones_branch_ops(r);
        let n = self.n;
        let mut pw = vec![Complex64::new(0.0, 0.0); 4 * 16 * (n + 1)];
        for (b, op) in ops.iter().enumerate() {
            let t = transfer_matrix(op);
            for pair in 0..16 {
                let base = (b * 16 + pair) * (n + 1);
                let v = t[pair / 4][pair % 4];
                pw[base] = Complex64::new(1.0, 0.0);
                for e in 1..=n {
                    pw[base + e] = pw[base + e - 1] * v;
                }
            }
        }
        let comps = [1.0, r.x, r.y, r.z];
        let sigma = |mut w: u32| {
            let mut s = 1.0;
            for _ in 0..self.k {
                s *= comps[(w % 4) as usize];
                w /= 4;
            }
            s
        };
        let mut c = [Complex64::new(0.0, 0.0); 4];
        let mut cached = (u32::MAX, 0.0);
        for t in &self.terms {
            if cached.0 != t.word {
                cached = (t.word, sigma(t.word));
            }
            if cached.1 == 0.0 {
                continue;
            }
            let fs = &self.factors[t.start as usize..t.start as usize + t.len as usize];
            let mut v = Complex64::new(0.0, 0.0);
            for b in 0..4 {
                let mut prod = Complex64::new(1.0, 0.0);
                for &(pair, e) in fs {
                    prod *= pw[(b * 16 + pair as usize) * (n + 1) + e as usize];
                }
                v += prod;
            }
            c[t.out as usize] += t.coeff * v * cached.1;
        }
        c.map(|x| x * self.scale)
    }

    /// Logical qubit 0 of the decoded output and the success probability.
    pub fn output(&self, r: BlochVector) -> StepResult {
        let c = self.coefficients(r);
        let w = c[0].re;
        if !(w > crate::circuit::ZERO_WEIGHT) {
            return Err(ProtocolError::ZeroProbability);
        }
        Ok((BlochVector::new(c[1].re / w, c[2].re / w, c[3].re / w), w))
    }
}

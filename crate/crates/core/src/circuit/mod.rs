//! Exact postselected circuit simulation.
//!
//! [`dense`] keeps a full density matrix of up to twelve qubits. [`codeword`]
//! keeps only the block of a density matrix supported on the codewords of a
//! classical code, which is all a transversal-T distillation circuit ever
//! populates.

pub mod codeword;
pub mod dense;

use num_complex::Complex64;
use thiserror::Error;

use crate::codes::CodeError;
use crate::states::BlochVector;

pub use codeword::{cw_prepare, cw_project_decode, cw_schur, CodewordState};
pub use dense::{decode_logical, dense_init, encode_logical, DenseCode, DenseState, InitState, Superop};

/// Largest register the dense engine will allocate.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Smallest trace accepted after a projection.
pub const ZERO_WEIGHT: f64 = 1e-300;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("{0} qubits exceeds the dense-engine cap of {MAX_DENSE_QUBITS}")]
    TooManyQubits(usize),
    #[error("qubit index {index} out of range for {n} qubits")]
    BadQubit { index: usize, n: usize },
    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    RepeatedQubit(usize),
    #[error("matrix has {got} entries, expected {expected}")]
    BadShape { expected: usize, got: usize },
    #[error("operator acts on {got} qubits, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("postselection has zero probability (weight {0:e})")]
    ZeroProbability(f64),
    #[error("codeword support too large: {0} rows")]
    TooManyRows(usize),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Single-qubit Cliffords available to the engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OneQubitGate {
    H,
    S,
    Sdg,
    X,
    Z,
}

impl OneQubitGate {
    pub fn inverse(self) -> Self {
        match self {
            OneQubitGate::S => OneQubitGate::Sdg,
            OneQubitGate::Sdg => OneQubitGate::S,
            g => g,
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            OneQubitGate::H => [[h, h], [h, -h]],
            OneQubitGate::S => [[l, o], [o, i]],
            OneQubitGate::Sdg => [[l, o], [o, -i]],
            OneQubitGate::X => [[o, l], [l, o]],
            OneQubitGate::Z => [[l, o], [o, -l]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    One(OneQubitGate, usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
}

impl Gate {
    pub fn h(q: usize) -> Self {
        Gate::One(OneQubitGate::H, q)
    }

    pub fn s(q: usize) -> Self {
        Gate::One(OneQubitGate::S, q)
    }

    pub fn sdg(q: usize) -> Self {
        Gate::One(OneQubitGate::Sdg, q)
    }

    pub fn x(q: usize) -> Self {
        Gate::One(OneQubitGate::X, q)
    }

    pub fn z(q: usize) -> Self {
        Gate::One(OneQubitGate::Z, q)
    }
}

/// Single-qubit density matrix entries of `ρ(r) = (I + xX + yY + zZ)/2`.
pub fn bloch_matrix(r: BlochVector) -> [[Complex64; 2]; 2] {
    [
        [Complex64::new((1.0 + r.z) / 2.0, 0.0), Complex64::new(r.x / 2.0, -r.y / 2.0)],
        [Complex64::new(r.x / 2.0, r.y / 2.0), Complex64::new((1.0 - r.z) / 2.0, 0.0)],
    ]
}

//! Signed Pauli strings in symplectic form.
//!
//! A string is `phase * L_0 ⊗ L_1 ⊗ ... ⊗ L_{n-1}` where each letter `L_q` is
//! one of the Hermitian matrices I, X, Y, Z. Bit `q` of `x_bits` / `z_bits`
//! records the X / Z part of letter `q` (Y sets both, with `Y = iXZ`), so a
//! string is Hermitian exactly when its phase is `±1`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("qubit count mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid Pauli letter '{0}'")]
    BadLetter(char),
    #[error("Pauli strings are limited to {MAX_QUBITS} qubits, got {0}")]
    TooLong(usize),
    #[error("empty Pauli string")]
    Empty,
}

/// Power of `i`: 0 → +1, 1 → +i, 2 → −1, 3 → −i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    /// `+1.0` or `-1.0`; `None` for `±i`.
    pub fn sign(self) -> Option<f64> {
        match self.0 {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        match self.0 {
            0 => num_complex::Complex64::new(1.0, 0.0),
            1 => num_complex::Complex64::new(0.0, 1.0),
            2 => num_complex::Complex64::new(-1.0, 0.0),
            _ => num_complex::Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x_bits: u64,
    z_bits: u64,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "too many qubits");
        Self { n, x_bits: 0, z_bits: 0, phase: Phase::ONE }
    }

    pub fn from_bits(n: usize, x_bits: u64, z_bits: u64, phase: Phase) -> Self {
        assert!(n <= MAX_QUBITS, "too many qubits");
        let mask = mask(n);
        Self { n, x_bits: x_bits & mask, z_bits: z_bits & mask, phase }
    }

    /// X on every qubit set in `support` (a `0/1` slice).
    pub fn x_on(support: &[u8]) -> Self {
        Self::from_bits(support.len(), bits_from_slice(support), 0, Phase::ONE)
    }

    pub fn z_on(support: &[u8]) -> Self {
        Self::from_bits(support.len(), 0, bits_from_slice(support), Phase::ONE)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u64 {
        self.z_bits
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x_bits >> q & 1 == 1, self.z_bits >> q & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    pub fn weight(&self) -> u32 {
        (self.x_bits | self.z_bits).count_ones()
    }

    pub fn is_identity_letters(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Product `self · other` with the phase tracked exactly.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString, PauliError> {
        if self.n != other.n {
            return Err(PauliError::LengthMismatch(self.n, other.n));
        }
        let x = self.x_bits ^ other.x_bits;
        let z = self.z_bits ^ other.z_bits;
        // Y = iXZ on each site, and Z^a X^b = (-1)^{ab} X^b Z^a when moving
        // other's X part left past self's Z part.
        let k = (self.x_bits & self.z_bits).count_ones() as i64
            + (other.x_bits & other.z_bits).count_ones() as i64
            - (x & z).count_ones() as i64
            + 2 * (self.z_bits & other.x_bits).count_ones() as i64;
        let phase = self.phase * other.phase * Phase::from_exponent(k);
        Ok(PauliString { n: self.n, x_bits: x, z_bits: z, phase })
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool, PauliError> {
        if self.n != other.n {
            return Err(PauliError::LengthMismatch(self.n, other.n));
        }
        let overlap = (self.x_bits & other.z_bits).count_ones() + (self.z_bits & other.x_bits).count_ones();
        Ok(overlap % 2 == 0)
    }
}

pub fn pauli_mul(a: &PauliString, b: &PauliString) -> Result<PauliString, PauliError> {
    a.mul(b)
}

pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool, PauliError> {
    a.commutes(b)
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits_from_slice(support: &[u8]) -> u64 {
    assert!(support.len() <= MAX_QUBITS, "too many qubits");
    support
        .iter()
        .enumerate()
        .filter(|(_, &b)| b & 1 == 1)
        .fold(0u64, |acc, (q, _)| acc | 1 << q)
}

impl FromStr for PauliString {
    type Err = PauliError;

    /// Parses letters `IXYZ`, optionally prefixed by `+`, `-`, `i`, `+i` or `-i`.
    fn from_str(s: &str) -> Result<Self, PauliError> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (Phase::I, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (Phase::ONE, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (Phase::I, rest)
        } else {
            (Phase::ONE, s)
        };
        if body.is_empty() {
            return Err(PauliError::Empty);
        }
        let n = body.chars().count();
        if n > MAX_QUBITS {
            return Err(PauliError::TooLong(n));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (q, c) in body.chars().enumerate() {
            let (bx, bz) = match c {
                'I' | '_' => (0, 0),
                'X' => (1, 0),
                'Y' => (1, 1),
                'Z' => (0, 1),
                other => return Err(PauliError::BadLetter(other)),
            };
            x |= bx << q;
            z |= bz << q;
        }
        Ok(PauliString { n, x_bits: x, z_bits: z, phase })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.exponent() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    type M2 = [[Complex64; 2]; 2];

    fn letter_matrix(l: Letter) -> M2 {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match l {
            Letter::I => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]],
            Letter::X => [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
            Letter::Y => [[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
            Letter::Z => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
        }
    }

    /// Dense matrix of a Pauli string via explicit tensor products.
    fn dense(ps: &PauliString) -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![ps.phase().to_complex()]];
        for l in ps.letters() {
            let a = letter_matrix(l);
            let d = m.len();
            let mut next = vec![vec![Complex64::new(0.0, 0.0); 2 * d]; 2 * d];
            for i in 0..d {
                for j in 0..d {
                    for (r, row) in a.iter().enumerate() {
                        for (c, v) in row.iter().enumerate() {
                            next[2 * i + r][2 * j + c] = m[i][j] * v;
                        }
                    }
                }
            }
            m = next;
        }
        m
    }

    fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let d = a.len();
        (0..d)
            .map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    }

    fn max_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn single_qubit_products() {
        let xz = p("X").mul(&p("Z")).unwrap();
        assert_eq!(xz, p("-iY"));
        for s in ["X", "Y", "Z", "XZZXI", "-YIZ"] {
            let sq = p(s).mul(&p(s)).unwrap();
            assert!(sq.is_identity_letters());
            assert_eq!(sq.phase(), Phase::ONE);
        }
    }

    #[test]
    fn five_qubit_generator_product_matches_dense() {
        let a = p("XZZXI");
        let b = p("IXZZX");
        let ab = a.mul(&b).unwrap();
        assert!(ab.is_hermitian());
        assert!(max_diff(&dense(&ab), &matmul(&dense(&a), &dense(&b))) < 1e-14);
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("XZZXI").commutes(&p("IXZZX")).unwrap());
        assert!(p("X").commutes(&p("XX")).is_err());
        assert!(p("X").mul(&p("XX")).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("-XYZ").to_string(), "-XYZ");
        assert_eq!(p("XIZ").to_string(), "+XIZ");
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
        assert_eq!(p("XYZI").weight(), 3);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        (0u64..(1 << n), 0u64..(1 << n), 0u8..4)
            .prop_map(move |(x, z, k)| PauliString::from_bits(n, x, z, Phase::from_exponent(k as i64)))
    }

    proptest! {
        #[test]
        fn product_matches_dense_matrices(a in arb_pauli(3), b in arb_pauli(3)) {
            let ab = a.mul(&b).unwrap();
            prop_assert!(max_diff(&dense(&ab), &matmul(&dense(&a), &dense(&b))) < 1e-12);
            prop_assert_eq!(a.commutes(&b).unwrap(), a.mul(&b).unwrap() == b.mul(&a).unwrap());
        }

        #[test]
        fn product_is_associative(a in arb_pauli(4), b in arb_pauli(4), c in arb_pauli(4)) {
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}

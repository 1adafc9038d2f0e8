//! Codeword-support engine for transversal-T distillation.
//!
//! The encoded `|+̄⟩^k` state of a triorthogonal code is the uniform
//! superposition over the row span `C`, and the CNOT-and-postselect gadget
//! only rescales matrix entries, so the state never leaves `span{|u⟩⟨v| : u, v ∈ C}`.
//! Codewords are indexed by their coefficient mask over the matrix rows.

use num_complex::Complex64;

use super::{bloch_matrix, CircuitError, DenseState, ZERO_WEIGHT};
use crate::codes::{CodeError, TriorthogonalMatrix};
use crate::gf2;
use crate::states::BlochVector;

/// Largest number of matrix rows (so `|C| ≤ 4096`).
pub const MAX_ROWS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CodewordState {
    n: usize,
    codewords: Vec<u64>,
    m: Vec<Complex64>,
}

impl CodewordState {
    pub fn num_codewords(&self) -> usize {
        self.codewords.len()
    }

    pub fn codewords(&self) -> &[u64] {
        &self.codewords
    }

    pub fn entry(&self, u: usize, v: usize) -> Complex64 {
        self.m[u * self.codewords.len() + v]
    }

    pub fn weight(&self) -> f64 {
        let c = self.codewords.len();
        (0..c).map(|u| self.m[u * c + u].re).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let c = self.codewords.len();
        (0..c).all(|u| (0..c).all(|v| (self.entry(u, v) - self.entry(v, u).conj()).norm() <= tol))
    }
}

/// Uniform state over the row span of `g`.
pub fn cw_prepare(g: &TriorthogonalMatrix) -> Result<CodewordState, CircuitError> {
    let rows = g.rows().len();
    if rows > MAX_ROWS {
        return Err(CircuitError::TooManyRows(rows));
    }
    let codewords = gf2::span(g.rows());
    let c = codewords.len();
    Ok(CodewordState {
        n: g.num_columns(),
        codewords,
        m: vec![Complex64::new(1.0 / c as f64, 0.0); c * c],
    })
}

/// Transversal gadget on every column: entry `(u, v)` gains `Π_i ρ(r)_{u_i v_i}`.
pub fn cw_schur(s: &mut CodewordState, r: BlochVector) {
    let rho = bloch_matrix(r);
    let c = s.codewords.len();
    let n = s.n as i32;
    for (a, &u) in s.codewords.iter().enumerate() {
        for (b, &v) in s.codewords.iter().enumerate() {
            let c11 = (u & v).count_ones() as i32;
            let c10 = (u & !v).count_ones() as i32;
            let c01 = (!u & v).count_ones() as i32;
            let c00 = n - c11 - c10 - c01;
            let f = rho[0][0].powi(c00) * rho[1][1].powi(c11) * rho[0][1].powi(c01) * rho[1][0].powi(c10);
            s.m[a * c + b] *= f;
        }
    }
}

/// Projects onto the codespace of `g`'s CSS code and decodes its `k` logical
/// qubits. The returned matrix is unnormalized with trace equal to the total weight.
pub fn cw_project_decode(s: &CodewordState, g: &TriorthogonalMatrix) -> Result<DenseState, CircuitError> {
    let c = s.codewords.len();
    if c != 1 << g.rows().len() {
        return Err(CircuitError::BadShape { expected: 1 << g.rows().len(), got: c });
    }
    let odd_idx: Vec<usize> = (0..g.rows().len()).filter(|&i| g.is_odd(i)).collect();
    let even_masks: Vec<u64> = (0..g.rows().len()).filter(|&i| !g.is_odd(i)).map(|i| 1u64 << i).collect();
    let translations = gf2::span(&even_masks);
    let inv = 1.0 / translations.len() as f64;

    // X checks: average over translations by the even-row span, on both sides.
    let mut half = vec![Complex64::new(0.0, 0.0); c * c];
    for a in 0..c {
        for b in 0..c {
            half[a * c + b] = translations.iter().map(|&e| s.m[(a ^ e as usize) * c + b]).sum::<Complex64>() * inv;
        }
    }
    let mut m = vec![Complex64::new(0.0, 0.0); c * c];
    for a in 0..c {
        for b in 0..c {
            m[a * c + b] = translations.iter().map(|&e| half[a * c + (b ^ e as usize)]).sum::<Complex64>() * inv;
        }
    }
    // Z checks come from the orthogonal complement of the rows and act as +1 on every codeword.

    let k = odd_idx.len();
    let duals: Vec<u64> = (0..k)
        .map(|a| {
            g.dual_representative(a).ok_or_else(|| {
                CircuitError::Code(CodeError::Invalid {
                    name: "triorthogonal".into(),
                    reason: format!("odd row {a} has no dual representative"),
                })
            })
        })
        .collect::<Result<_, _>>()?;
    let i = Complex64::new(0.0, 1.0);
    let mut coeffs = Vec::with_capacity(1 << (2 * k));
    for mut w in 0..1usize << (2 * k) {
        let (mut alpha, mut beta, mut ys) = (0usize, 0u64, 0u32);
        for (a, &row) in odd_idx.iter().enumerate() {
            let digit = w % 4;
            w /= 4;
            if digit == 1 || digit == 2 {
                alpha ^= 1 << row;
            }
            if digit == 2 || digit == 3 {
                beta ^= duals[a];
            }
            if digit == 2 {
                ys += 1;
            }
        }
        let t: Complex64 = s
            .codewords
            .iter()
            .enumerate()
            .map(|(u, &cw)| {
                let sign = if (beta & cw).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                m[u * c + (u ^ alpha)] * sign
            })
            .sum();
        coeffs.push(t * i.powu(ys));
    }
    let w = coeffs[0].re;
    if !(w > ZERO_WEIGHT) {
        return Err(CircuitError::ZeroProbability(w));
    }
    DenseState::from_pauli_coefficients(k, &coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::Catalogue;
    use crate::states::BlochVector as B;

    #[test]
    fn prepare_examples() {
        let g = TriorthogonalMatrix::from_bit_strings(&["11"]).unwrap();
        let s = cw_prepare(&g).unwrap();
        assert_eq!(s.codewords(), &[0b00, 0b11]);
        assert!((0..2).all(|u| (0..2).all(|v| s.entry(u, v) == Complex64::new(0.5, 0.0))));
        let g = TriorthogonalMatrix::from_bit_strings(&["1"]).unwrap();
        assert_eq!(cw_prepare(&g).unwrap().codewords(), &[0, 1]);
        let bh = Catalogue::builtin().matrix("bravyi_haah_14").unwrap();
        let s = cw_prepare(&bh).unwrap();
        assert_eq!(s.num_codewords(), 32);
        assert!((s.entry(3, 17).re - 1.0 / 32.0).abs() < 1e-18);
    }

    #[test]
    fn schur_examples() {
        let g = TriorthogonalMatrix::from_bit_strings(&["11"]).unwrap();
        let mut s = cw_prepare(&g).unwrap();
        cw_schur(&mut s, B::ORIGIN);
        assert!((s.entry(0, 0).re - 0.125).abs() < 1e-15);
        assert!((s.entry(1, 1).re - 0.125).abs() < 1e-15);
        assert_eq!(s.entry(0, 1).norm(), 0.0);

        let mut s = cw_prepare(&g).unwrap();
        cw_schur(&mut s, B::new(1.0, 1.0, 0.0).normalized());
        let rho01 = Complex64::from_polar(0.5, -std::f64::consts::FRAC_PI_4);
        assert!((s.entry(0, 1) - 0.5 * rho01 * rho01).norm() < 1e-15);
        assert!(s.is_hermitian(1e-15));
    }

    #[test]
    fn ideal_bravyi_haah_output() {
        let bh = Catalogue::builtin().matrix("bravyi_haah_14").unwrap();
        let mut s = cw_prepare(&bh).unwrap();
        cw_schur(&mut s, B::new(1.0, 1.0, 0.0).normalized());
        let out = cw_project_decode(&s, &bh).unwrap();
        assert!((out.weight() - 2f64.powi(-14)).abs() < 1e-18);
        // Codeword weights are -(x1 + x2) mod 8, so the ideal output is the conjugate of |A⟩ on each qubit.
        let conj_a = B::new(1.0, -1.0, 0.0).normalized();
        let ideal = crate::circuit::dense_init(&[
            crate::circuit::InitState::Bloch(conj_a),
            crate::circuit::InitState::Bloch(conj_a),
        ])
        .unwrap();
        assert!(out.normalized().unwrap().max_abs_diff(&ideal) < 1e-9);
    }

    #[test]
    fn mixed_resources_give_mixed_output() {
        let bh = Catalogue::builtin().matrix("bravyi_haah_14").unwrap();
        let mut s = cw_prepare(&bh).unwrap();
        cw_schur(&mut s, B::ORIGIN);
        let out = cw_project_decode(&s, &bh).unwrap().normalized().unwrap();
        for q in 0..2 {
            assert!(out.bloch(q).unwrap().norm() < 1e-12);
        }
        let quarter = Complex64::new(0.25, 0.0);
        for i in 0..4 {
            assert!((out.entry(i, i) - quarter).norm() < 1e-12);
        }
    }
}

//! Weight-enumerator evaluation of projection protocols.
//!
//! Projecting `ρ(r)^⊗n` onto the codespace of a `[[n,1]]` code and reading
//! the logical Pauli expectations gives a rational map `r' = (W_X, W_Y, W_Z)/W_I`,
//! where each `W` sums signed products of single-qubit traces over one
//! logical coset of the stabilizer group.

use thiserror::Error;

use crate::codes::{enumerate_group, CodeError, StabilizerCode};
use crate::pauli::{Letter, PauliString};
use crate::states::BlochVector;

/// Smallest `W_I` accepted as a nonzero success probability.
pub const W_EPSILON: f64 = 1e-300;

#[derive(Debug, Error)]
pub enum WepError {
    #[error("weight-enumerator tables need k = 1, code '{name}' has k = {k}")]
    Unsupported { name: String, k: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("projection has zero success probability (W_I = {0:e})")]
    ZeroProbability(f64),
}

/// Logical coset index into a [`TermTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coset {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub sign: f64,
    pub letters: Vec<Letter>,
    /// Number of X, Y and Z letters; with i.i.d. inputs the product depends only on these.
    pub counts: [i32; 3],
}

impl Term {
    fn from_pauli(p: &PauliString) -> Self {
        let sign = p.phase().sign().expect("coset elements are Hermitian");
        let letters = p.letters();
        let mut counts = [0; 3];
        for l in &letters {
            match l {
                Letter::X => counts[0] += 1,
                Letter::Y => counts[1] += 1,
                Letter::Z => counts[2] += 1,
                Letter::I => {}
            }
        }
        Self { sign, letters, counts }
    }

    /// Signed product of per-qubit factors `tr(Pρ) ∈ {1, x, y, z}`.
    ///
    /// The three powers are multiplied in sorted order, so permuting equal
    /// coordinates permutes term values without changing their bits.
    pub fn evaluate(&self, r: BlochVector) -> f64 {
        let mut v = [r.x.powi(self.counts[0]), r.y.powi(self.counts[1]), r.z.powi(self.counts[2])];
        v.sort_by(f64::total_cmp);
        self.sign * (v[0] * v[1] * v[2])
    }
}

/// Precomputed coset expansions `{L·S : S ∈ group}` for `L ∈ {I, X̄, Ȳ, Z̄}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TermTable {
    pub name: String,
    pub n: usize,
    pub cosets: [Vec<Term>; 4],
}

pub fn build_term_table(code: &StabilizerCode) -> Result<TermTable, WepError> {
    if code.k != 1 {
        return Err(WepError::Unsupported { name: code.name.clone(), k: code.k });
    }
    let group = enumerate_group(code)?;
    let logicals = [
        PauliString::identity(code.n),
        code.logical_x[0],
        code.logical_y(0).map_err(CodeError::from)?,
        code.logical_z[0],
    ];
    let cosets = logicals.map(|l| {
        group
            .iter()
            .map(|s| l.mul(s).map(|p| Term::from_pauli(&p)))
            .collect::<Result<Vec<_>, _>>()
    });
    let [i, x, y, z] = cosets;
    Ok(TermTable {
        name: code.name.clone(),
        n: code.n,
        cosets: [
            i.map_err(CodeError::from)?,
            x.map_err(CodeError::from)?,
            y.map_err(CodeError::from)?,
            z.map_err(CodeError::from)?,
        ],
    })
}

/// The four sums `(W_I, W_X, W_Y, W_Z)` at `r`.
///
/// Terms are added in ascending order of value, which makes each sum a
/// function of the multiset of term values. A code symmetry that swaps two
/// cosets then maps the sums onto each other bit for bit, so iterates that
/// start on a symmetry axis stay exactly on it.
pub fn evaluate_w(table: &TermTable, r: BlochVector) -> [f64; 4] {
    let mut buf = Vec::with_capacity(table.cosets[0].len());
    table.cosets.each_ref().map(|terms| {
        buf.clear();
        buf.extend(terms.iter().map(|t| t.evaluate(r)));
        buf.sort_unstable_by(f64::total_cmp);
        buf.iter().sum()
    })
}

/// One application of the projection protocol: output Bloch vector and
/// success probability `W_I / 2^(n-1)`.
pub fn distill_project(table: &TermTable, r: BlochVector) -> Result<(BlochVector, f64), WepError> {
    let [wi, wx, wy, wz] = evaluate_w(table, r);
    if !(wi > W_EPSILON) {
        return Err(WepError::ZeroProbability(wi));
    }
    let p = wi / (1u64 << (table.n - 1)) as f64;
    Ok((BlochVector::new(wx / wi, wy / wi, wz / wi), p))
}

impl TermTable {
    pub fn coset(&self, c: Coset) -> &[Term] {
        &self.cosets[c as usize]
    }
}

//! Bloch-vector arithmetic, reference magic and stabilizer states, the
//! octahedral (single-qubit Clifford) rotation group, twirls, and the
//! position-to-colour map used by the Fatou renders.
//!
//! Phase conventions: `H` acts as `(x, y, z) -> (z, -y, x)` and `S` as
//! `(x, y, z) -> (-y, x, z)`. The magic states sit at
//! `|T> = (1,1,1)/sqrt3`, `|H> = (1,0,1)/sqrt2` and `|A> = T|+> = (1,1,0)/sqrt2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed on `|r| <= 1` before a vector is called unphysical.
pub const PHYSICAL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("fidelity {0} outside [0, 1]")]
    FidelityOutOfRange(f64),
    #[error("classification tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("ambiguous classification: {first} and {second} both lie within tolerance {tol}")]
    AmbiguousMatch {
        first: String,
        second: String,
        tol: f64,
    },
}

/// A point `(x, y, z)` of the 2x2x2 cube; physical states lie in the unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }

    pub fn is_physical(self) -> bool {
        self.norm_squared() <= 1.0 + PHYSICAL_SLACK
    }

    /// Every coordinate lies in `[-1, 1]`, so the colour map is defined.
    pub fn is_renderable(self) -> bool {
        self.to_array().iter().all(|c| (-1.0..=1.0).contains(c))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector in the same direction; the origin maps to itself.
    pub fn normalized(self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self * (1.0 / n)
        }
    }
}

impl Add for BlochVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for BlochVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for BlochVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.x, self.y, self.z)
    }
}

/// The two one-parameter families used throughout: T-type and H-type magic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    T,
    H,
}

impl Family {
    /// Canonical axis of the family: `|T>` or `|H>`.
    pub fn axis(self) -> BlochVector {
        match self {
            Family::T => {
                let c = 1.0 / 3f64.sqrt();
                BlochVector::new(c, c, c)
            }
            Family::H => {
                let c = std::f64::consts::FRAC_1_SQRT_2;
                BlochVector::new(c, 0.0, c)
            }
        }
    }

    /// All signed unit axes of the family, in ascending lexicographic order.
    pub fn axes(self) -> &'static [BlochVector] {
        match self {
            Family::T => &T_AXES,
            Family::H => &H_AXES,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::T => "T",
            Family::H => "H",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "T" | "t" => Ok(Family::T),
            "H" | "h" => Ok(Family::H),
            other => Err(format!("unknown family '{other}' (expected T or H)")),
        }
    }
}

const R3: f64 = 0.577_350_269_189_625_8;
const R2: f64 = std::f64::consts::FRAC_1_SQRT_2;

static T_AXES: [BlochVector; 8] = [
    BlochVector::new(-R3, -R3, -R3),
    BlochVector::new(-R3, -R3, R3),
    BlochVector::new(-R3, R3, -R3),
    BlochVector::new(-R3, R3, R3),
    BlochVector::new(R3, -R3, -R3),
    BlochVector::new(R3, -R3, R3),
    BlochVector::new(R3, R3, -R3),
    BlochVector::new(R3, R3, R3),
];

static H_AXES: [BlochVector; 12] = [
    BlochVector::new(-R2, -R2, 0.0),
    BlochVector::new(-R2, 0.0, -R2),
    BlochVector::new(-R2, 0.0, R2),
    BlochVector::new(-R2, R2, 0.0),
    BlochVector::new(0.0, -R2, -R2),
    BlochVector::new(0.0, -R2, R2),
    BlochVector::new(0.0, R2, -R2),
    BlochVector::new(0.0, R2, R2),
    BlochVector::new(R2, -R2, 0.0),
    BlochVector::new(R2, 0.0, -R2),
    BlochVector::new(R2, 0.0, R2),
    BlochVector::new(R2, R2, 0.0),
];

/// `rho_T(f)` or `rho_H(f)`: the family axis shrunk towards `I/2`.
pub fn family_state(family: Family, f: f64) -> Result<BlochVector, StateError> {
    if !(0.0..=1.0).contains(&f) {
        return Err(StateError::FidelityOutOfRange(f));
    }
    Ok(family.axis() * f)
}

/// One of the 24 proper rotations of the octahedral group, stored as a
/// signed permutation matrix acting on Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliffordRotation {
    m: [[i8; 3]; 3],
}

impl CliffordRotation {
    pub const IDENTITY: CliffordRotation = CliffordRotation {
        m: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    };

    /// Builds a rotation from a matrix; `None` unless it is a signed
    /// permutation with determinant +1.
    pub fn from_matrix(m: [[i8; 3]; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for row in &m {
            let nz: Vec<usize> = (0..3).filter(|&j| row[j] != 0).collect();
            if nz.len() != 1 || row[nz[0]].abs() != 1 || seen[nz[0]] {
                return None;
            }
            seen[nz[0]] = true;
        }
        let det = m[0][0] as i32 * (m[1][1] as i32 * m[2][2] as i32 - m[1][2] as i32 * m[2][1] as i32)
            - m[0][1] as i32 * (m[1][0] as i32 * m[2][2] as i32 - m[1][2] as i32 * m[2][0] as i32)
            + m[0][2] as i32 * (m[1][0] as i32 * m[2][1] as i32 - m[1][1] as i32 * m[2][0] as i32);
        (det == 1).then_some(Self { m })
    }

    pub fn matrix(&self) -> [[i8; 3]; 3] {
        self.m
    }

    /// Hadamard: `(x, y, z) -> (z, -y, x)`.
    pub fn h() -> Self {
        Self { m: [[0, 0, 1], [0, -1, 0], [1, 0, 0]] }
    }

    /// Phase gate: `(x, y, z) -> (-y, x, z)`.
    pub fn s() -> Self {
        Self { m: [[0, -1, 0], [1, 0, 0], [0, 0, 1]] }
    }

    pub fn s_dag() -> Self {
        Self::s().inverse()
    }

    /// The order-3 rotation `(x, y, z) -> (z, x, y)` that fixes `|T>`.
    /// In the phase convention above this is `H S^dagger`.
    pub fn hs() -> Self {
        Self { m: [[0, 0, 1], [1, 0, 0], [0, 1, 0]] }
    }

    pub fn pauli_x() -> Self {
        Self { m: [[1, 0, 0], [0, -1, 0], [0, 0, -1]] }
    }

    pub fn pauli_y() -> Self {
        Self { m: [[-1, 0, 0], [0, 1, 0], [0, 0, -1]] }
    }

    pub fn pauli_z() -> Self {
        Self { m: [[-1, 0, 0], [0, -1, 0], [0, 0, 1]] }
    }

    /// All 24 elements, in a fixed order starting with the identity.
    pub fn all() -> Vec<CliffordRotation> {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = Vec::with_capacity(24);
        for p in PERMS {
            for signs in 0..8u8 {
                let mut m = [[0i8; 3]; 3];
                for (row, &col) in p.iter().enumerate() {
                    m[row][col] = if signs >> row & 1 == 1 { -1 } else { 1 };
                }
                if let Some(c) = Self::from_matrix(m) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut m = [[0i8; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Self { m }
    }

    pub fn inverse(&self) -> Self {
        let mut m = [[0i8; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.m[j][i];
            }
        }
        Self { m }
    }

    pub fn apply(&self, r: BlochVector) -> BlochVector {
        let v = r.to_array();
        let row = |i: usize| -> f64 {
            (0..3).map(|k| self.m[i][k] as f64 * v[k]).sum()
        };
        BlochVector::new(row(0), row(1), row(2))
    }
}

pub fn clifford_apply(c: &CliffordRotation, r: BlochVector) -> BlochVector {
    c.apply(r)
}

/// Average of `r` and `H r`: projection onto the `|H>` axis.
pub fn h_twirl(r: BlochVector) -> BlochVector {
    let a = 0.5 * (r.x + r.z);
    BlochVector::new(a, 0.0, a)
}

/// Average over the order-3 orbit fixing `|T>`: projection onto the `|T>` axis.
pub fn t_twirl(r: BlochVector) -> BlochVector {
    let a = (r.x + r.y + r.z) / 3.0;
    BlochVector::new(a, a, a)
}

/// Largest projection of `r` onto a signed axis of `family`, with the
/// maximizing axis. Ties go to the lexicographically smallest axis.
pub fn axis_fidelity(r: BlochVector, family: Family) -> (f64, BlochVector) {
    let axes = family.axes();
    let mut best = (r.dot(axes[0]), axes[0]);
    for &a in &axes[1..] {
        let d = r.dot(a);
        if d > best.0 {
            best = (d, a);
        }
    }
    best
}

/// Best-axis twirl: projects `r` onto its closest family axis.
pub fn axis_twirl(r: BlochVector, family: Family) -> BlochVector {
    let (f, axis) = axis_fidelity(r, family);
    axis * f
}

/// Membership in the stabilizer octahedron `|x| + |y| + |z| <= 1`.
pub fn polytope_contains(r: BlochVector) -> bool {
    r.x.abs() + r.y.abs() + r.z.abs() <= 1.0 + 1e-12
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    Mixed,
    Stabilizer,
    MagicT,
    MagicH,
}

impl StateKind {
    pub fn is_magic(self) -> bool {
        matches!(self, StateKind::MagicT | StateKind::MagicH)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub label: String,
    pub vector: BlochVector,
    pub kind: StateKind,
}

/// Named list of reference states used to label converged iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceStateSet {
    entries: Vec<Reference>,
}

impl ReferenceStateSet {
    pub fn new(entries: Vec<Reference>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[Reference] {
        &self.entries
    }

    pub fn get(&self, label: &str) -> Option<&Reference> {
        self.entries.iter().find(|e| e.label == label)
    }

    /// `I/2` and the eight Clifford rotations of `|T>`.
    pub fn table1() -> Self {
        let t = |label: &str, s: [f64; 3]| Reference {
            label: label.to_string(),
            vector: BlochVector::from_array(s) * R3,
            kind: StateKind::MagicT,
        };
        Self::new(vec![
            mixed(),
            t("|T⟩", [1.0, 1.0, 1.0]),
            t("S|T⟩", [-1.0, 1.0, 1.0]),
            t("Z|T⟩", [-1.0, -1.0, 1.0]),
            t("S†|T⟩", [1.0, -1.0, 1.0]),
            t("S†X|T⟩", [-1.0, -1.0, -1.0]),
            t("X|T⟩", [1.0, -1.0, -1.0]),
            t("SX|T⟩", [1.0, 1.0, -1.0]),
            t("ZX|T⟩", [-1.0, 1.0, -1.0]),
        ])
    }

    /// The six stabilizer states and the four phase rotations of `|A>`.
    pub fn table2() -> Self {
        let mut entries = stabilizers();
        entries.extend(a_rotations());
        Self::new(entries)
    }

    /// Everything: `I/2`, stabilizer states, the T orbit and all twelve H-type axes.
    pub fn standard() -> Self {
        let mut entries = Self::table1().entries;
        entries.extend(stabilizers());
        for &axis in Family::H.axes() {
            entries.push(h_type_reference(axis));
        }
        Self::new(entries)
    }
}

fn mixed() -> Reference {
    Reference {
        label: "I/2".to_string(),
        vector: BlochVector::ORIGIN,
        kind: StateKind::Mixed,
    }
}

fn stabilizers() -> Vec<Reference> {
    let s = |label: &str, v: [f64; 3]| Reference {
        label: label.to_string(),
        vector: BlochVector::from_array(v),
        kind: StateKind::Stabilizer,
    };
    vec![
        s("|0⟩", [0.0, 0.0, 1.0]),
        s("|1⟩", [0.0, 0.0, -1.0]),
        s("|+⟩", [1.0, 0.0, 0.0]),
        s("|−⟩", [-1.0, 0.0, 0.0]),
        s("|i⟩", [0.0, 1.0, 0.0]),
        s("|−i⟩", [0.0, -1.0, 0.0]),
    ]
}

fn a_rotations() -> Vec<Reference> {
    [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]
        .iter()
        .map(|&[x, y]| h_type_reference(BlochVector::new(x * R2, y * R2, 0.0)))
        .collect()
}

fn h_type_reference(axis: BlochVector) -> Reference {
    let sign = |c: f64| if c > 0.0 { 1 } else if c < 0.0 { -1 } else { 0 };
    let label = match (sign(axis.x), sign(axis.y), sign(axis.z)) {
        (1, 1, 0) => "|A⟩".to_string(),
        (-1, 1, 0) => "S|A⟩".to_string(),
        (-1, -1, 0) => "Z|A⟩".to_string(),
        (1, -1, 0) => "S†|A⟩".to_string(),
        (1, 0, 1) => "|H⟩".to_string(),
        (sx, sy, sz) => {
            let mut s = String::from("H[");
            for (c, name) in [(sx, 'x'), (sy, 'y'), (sz, 'z')] {
                match c {
                    1 => {
                        s.push('+');
                        s.push(name)
                    }
                    -1 => {
                        s.push('-');
                        s.push(name)
                    }
                    _ => {}
                }
            }
            s.push(']');
            s
        }
    };
    Reference {
        label,
        vector: axis,
        kind: StateKind::MagicH,
    }
}

/// Result of matching an iterate against a [`ReferenceStateSet`].
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Converged { label: String, kind: StateKind },
    Unconverged,
}

impl Classification {
    pub fn label(&self) -> &str {
        match self {
            Classification::Converged { label, .. } => label,
            Classification::Unconverged => "unconverged",
        }
    }

    pub fn kind(&self) -> Option<StateKind> {
        match self {
            Classification::Converged { kind, .. } => Some(*kind),
            Classification::Unconverged => None,
        }
    }

    pub fn is_magic(&self) -> bool {
        self.kind().is_some_and(StateKind::is_magic)
    }
}

pub fn classify_state(
    r: BlochVector,
    refs: &ReferenceStateSet,
    tol: f64,
) -> Result<Classification, StateError> {
    if !(tol > 0.0) {
        return Err(StateError::BadTolerance(tol));
    }
    let mut hit: Option<&Reference> = None;
    for e in refs.entries() {
        if r.distance(e.vector) < tol {
            if let Some(first) = hit {
                return Err(StateError::AmbiguousMatch {
                    first: first.label.clone(),
                    second: e.label.clone(),
                    tol,
                });
            }
            hit = Some(e);
        }
    }
    Ok(match hit {
        Some(e) => Classification::Converged {
            label: e.label.clone(),
            kind: e.kind,
        },
        None => Classification::Unconverged,
    })
}

/// `(x, y, z) -> rgb` with each channel `floor(255 (c + 1) / 2 + 0.5)`.
/// `None` when a coordinate leaves `[-1, 1]`; callers paint those black.
pub fn color_of(r: BlochVector) -> Option<[u8; 3]> {
    if !r.is_renderable() {
        return None;
    }
    let ch = |c: f64| (255.0 * (c + 1.0) / 2.0 + 0.5).floor() as u8;
    Some([ch(r.x), ch(r.y), ch(r.z)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: BlochVector, b: BlochVector, tol: f64) -> bool {
        a.max_abs_diff(b) < tol
    }

    #[test]
    fn family_states() {
        assert_eq!(family_state(Family::T, 0.0).unwrap(), BlochVector::ORIGIN);
        let t = family_state(Family::T, 1.0).unwrap();
        assert!(close(t, BlochVector::new(0.5774, 0.5774, 0.5774), 1e-4));
        let h = family_state(Family::H, 1.0).unwrap();
        assert!(close(h, BlochVector::new(0.7071, 0.0, 0.7071), 1e-4));
        assert!(family_state(Family::H, 1.2).is_err());
        assert!(family_state(Family::T, -0.1).is_err());
    }

    #[test]
    fn group_has_24_distinct_elements_and_is_closed() {
        let all = CliffordRotation::all();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], CliffordRotation::IDENTITY);
        for a in &all {
            assert!(all.contains(&a.inverse()));
            assert_eq!(a.compose(&a.inverse()), CliffordRotation::IDENTITY);
            for b in &all {
                assert!(all.contains(&a.compose(b)));
            }
        }
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 24);
    }

    #[test]
    fn named_rotations() {
        let h = Family::H.axis();
        assert!(close(CliffordRotation::h().apply(h), h, 1e-15));
        let x = BlochVector::new(1.0, 0.0, 0.0);
        assert_eq!(CliffordRotation::hs().apply(x), BlochVector::new(0.0, 1.0, 0.0));
        assert_eq!(CliffordRotation::s().apply(x), BlochVector::new(0.0, 1.0, 0.0));
        let t = Family::T.axis();
        assert_eq!(CliffordRotation::hs().apply(t), t);
        assert_eq!(
            CliffordRotation::h().compose(&CliffordRotation::s_dag()),
            CliffordRotation::hs()
        );
        let r = BlochVector::new(0.1, -0.2, 0.3);
        assert_eq!(clifford_apply(&CliffordRotation::IDENTITY, r), r);
    }

    #[test]
    fn twirl_examples() {
        let r = h_twirl(BlochVector::new(0.6, 0.4, 0.2));
        assert!(close(r, BlochVector::new(0.4, 0.0, 0.4), 1e-15));
        let h = Family::H.axis();
        assert!(close(h_twirl(h), h, 1e-15));
        assert!(close(h_twirl(BlochVector::new(R2, 0.0, -R2)), BlochVector::ORIGIN, 1e-15));

        let third = 1.0 / 3.0;
        assert!(close(t_twirl(BlochVector::new(1.0, 0.0, 0.0)), BlochVector::new(third, third, third), 1e-15));
        let t = Family::T.axis();
        assert!(close(t_twirl(t), t, 1e-15));
        assert!(close(t_twirl(BlochVector::new(1.0, -1.0, 0.0)), BlochVector::ORIGIN, 1e-15));
    }

    #[test]
    fn axis_fidelity_examples() {
        let (f, a) = axis_fidelity(Family::H.axis(), Family::H);
        assert!((f - 1.0).abs() < 1e-15);
        assert_eq!(a, Family::H.axis());
        let (f, a) = axis_fidelity(BlochVector::ORIGIN, Family::T);
        assert_eq!(f, 0.0);
        assert_eq!(a, BlochVector::new(-R3, -R3, -R3));
        let (f, _) = axis_fidelity(BlochVector::new(0.0, 0.0, 1.0), Family::H);
        assert!((f - R2).abs() < 1e-15);
    }

    #[test]
    fn axes_sorted_lexicographically() {
        for fam in [Family::T, Family::H] {
            let axes = fam.axes();
            for w in axes.windows(2) {
                let (a, b) = (w[0].to_array(), w[1].to_array());
                assert!(a.partial_cmp(&b) == Some(std::cmp::Ordering::Less));
            }
            for a in axes {
                assert!((a.norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn polytope_examples() {
        assert!(!polytope_contains(BlochVector::new(0.4, 0.4, 0.4)));
        assert!(polytope_contains(BlochVector::new(1.0, 0.0, 0.0)));
        assert!(polytope_contains(BlochVector::ORIGIN));
    }

    #[test]
    fn classify_examples() {
        let t1 = ReferenceStateSet::table1();
        let t2 = ReferenceStateSet::table2();
        assert_eq!(classify_state(Family::T.axis(), &t1, 1e-3).unwrap().label(), "|T⟩");
        assert_eq!(
            classify_state(BlochVector::new(0.0, 0.0, 0.9995), &t2, 1e-2).unwrap().label(),
            "|0⟩"
        );
        assert_eq!(
            classify_state(BlochVector::new(0.3, 0.3, 0.3), &t1, 1e-3).unwrap(),
            Classification::Unconverged
        );
        assert!(matches!(
            classify_state(BlochVector::ORIGIN, &t1, 2.0),
            Err(StateError::AmbiguousMatch { .. })
        ));
        assert!(classify_state(BlochVector::ORIGIN, &t1, 0.0).is_err());
    }

    #[test]
    fn reference_sets_are_well_formed() {
        for set in [ReferenceStateSet::table1(), ReferenceStateSet::table2(), ReferenceStateSet::standard()] {
            let mut labels: Vec<&str> = set.entries().iter().map(|e| e.label.as_str()).collect();
            let n = labels.len();
            labels.sort();
            labels.dedup();
            assert_eq!(labels.len(), n);
            for e in set.entries() {
                let norm = e.vector.norm();
                assert!(norm.abs() < 1e-15 || (norm - 1.0).abs() < 1e-15, "{}", e.label);
            }
        }
        assert_eq!(ReferenceStateSet::standard().entries().len(), 1 + 8 + 6 + 12);
    }

    #[test]
    fn color_examples() {
        assert_eq!(color_of(BlochVector::ORIGIN), Some([128, 128, 128]));
        // (1 + 1/sqrt3)/2 = 0.7887 of full scale
        assert_eq!(color_of(Family::T.axis()), Some([201, 201, 201]));
        assert_eq!(color_of(BlochVector::new(0.0, 0.0, 1.0)), Some([128, 128, 255]));
        assert_eq!(color_of(BlochVector::new(1.2, 0.0, 0.0)), None);
    }
}

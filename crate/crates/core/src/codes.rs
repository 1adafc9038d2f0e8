//! Stabilizer codes, triorthogonal matrices, their validation, and the
//! text catalogue the built-in codes ship in.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::gf2;
use crate::pauli::{PauliError, PauliString};

/// The catalogue compiled into the library.
pub const BUILTIN_CATALOGUE: &str = include_str!("../data/catalogue.txt");

#[derive(Debug, Error)]
pub enum CodeError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("invalid code {name}: {reason}")]
    Invalid { name: String, reason: String },
    #[error("catalogue line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("catalogue has no entry named '{0}'")]
    Missing(String),
    #[error("cannot read catalogue {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// An `[[n, k]]` stabilizer code with explicit logical representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerCode {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub generators: Vec<PauliString>,
    pub logical_x: Vec<PauliString>,
    pub logical_z: Vec<PauliString>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CodeViolation {
    Length { what: String, expected: usize, got: usize },
    GeneratorCount { expected: usize, got: usize },
    LogicalCount { expected: usize, got_x: usize, got_z: usize },
    NonHermitian(String),
    GeneratorsAnticommute(usize, usize),
    DependentGenerators { rank: usize, count: usize },
    LogicalAnticommutesWithGenerator { logical: String, generator: usize },
    LogicalPairing { a: String, b: String, expected_anticommute: bool },
    TooLarge(usize),
}

impl fmt::Display for CodeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeViolation::Length { what, expected, got } => {
                write!(f, "{what} acts on {got} qubits, expected {expected}")
            }
            CodeViolation::GeneratorCount { expected, got } => {
                write!(f, "{got} generators, expected n-k = {expected}")
            }
            CodeViolation::LogicalCount { expected, got_x, got_z } => {
                write!(f, "{got_x} logical X and {got_z} logical Z operators, expected {expected} each")
            }
            CodeViolation::NonHermitian(what) => write!(f, "{what} is not Hermitian"),
            CodeViolation::GeneratorsAnticommute(i, j) => {
                write!(f, "generators g{i} and g{j} anticommute")
            }
            CodeViolation::DependentGenerators { rank, count } => {
                write!(f, "generators are dependent (rank {rank} of {count})")
            }
            CodeViolation::LogicalAnticommutesWithGenerator { logical, generator } => {
                write!(f, "{logical} anticommutes with generator g{generator}")
            }
            CodeViolation::LogicalPairing { a, b, expected_anticommute } => {
                if *expected_anticommute {
                    write!(f, "{a} and {b} commute but should anticommute")
                } else {
                    write!(f, "{a} and {b} anticommute but should commute")
                }
            }
            CodeViolation::TooLarge(n) => write!(f, "{n} qubits exceeds the 32-qubit rank check"),
        }
    }
}

/// Outcome of a validation pass; empty means the object is valid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report<V> {
    pub subject: String,
    pub violations: Vec<V>,
}

impl<V: fmt::Display> Report<V> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<V: fmt::Display> fmt::Display for Report<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "{}: ok", self.subject);
        }
        writeln!(f, "{}: FAILED ({} violations)", self.subject, self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

pub type CodeReport = Report<CodeViolation>;
pub type TriorthogonalReport = Report<TriorthogonalViolation>;

impl StabilizerCode {
    pub fn new(
        name: impl Into<String>,
        generators: &[&str],
        logical_x: &[&str],
        logical_z: &[&str],
    ) -> Result<Self, CodeError> {
        let parse = |v: &[&str]| -> Result<Vec<PauliString>, CodeError> {
            v.iter().map(|s| s.parse().map_err(CodeError::from)).collect()
        };
        let generators = parse(generators)?;
        let logical_x = parse(logical_x)?;
        let logical_z = parse(logical_z)?;
        let n = generators
            .first()
            .or(logical_x.first())
            .map(|p| p.num_qubits())
            .unwrap_or(0);
        Ok(Self {
            name: name.into(),
            n,
            k: logical_x.len(),
            generators,
            logical_x,
            logical_z,
        })
    }

    /// `Ȳ_j = i X̄_j Z̄_j`, Hermitian whenever the pair anticommutes.
    pub fn logical_y(&self, j: usize) -> Result<PauliString, PauliError> {
        let xz = self.logical_x[j].mul(&self.logical_z[j])?;
        Ok(xz.with_phase(xz.phase() * crate::pauli::Phase::I))
    }

    pub fn validate(&self) -> CodeReport {
        let mut v = Vec::new();
        let check_len = |what: String, p: &PauliString, v: &mut Vec<CodeViolation>| {
            if p.num_qubits() != self.n {
                v.push(CodeViolation::Length { what, expected: self.n, got: p.num_qubits() });
                false
            } else {
                true
            }
        };
        let mut lengths_ok = true;
        for (i, g) in self.generators.iter().enumerate() {
            lengths_ok &= check_len(format!("generator g{i}"), g, &mut v);
            if !g.is_hermitian() {
                v.push(CodeViolation::NonHermitian(format!("generator g{i}")));
            }
        }
        for (name, ops) in [("X", &self.logical_x), ("Z", &self.logical_z)] {
            for (j, l) in ops.iter().enumerate() {
                lengths_ok &= check_len(format!("logical {name}{j}"), l, &mut v);
                if !l.is_hermitian() {
                    v.push(CodeViolation::NonHermitian(format!("logical {name}{j}")));
                }
            }
        }
        if self.k > self.n || self.generators.len() != self.n - self.k {
            v.push(CodeViolation::GeneratorCount {
                expected: self.n.saturating_sub(self.k),
                got: self.generators.len(),
            });
        }
        if self.logical_x.len() != self.k || self.logical_z.len() != self.k {
            v.push(CodeViolation::LogicalCount {
                expected: self.k,
                got_x: self.logical_x.len(),
                got_z: self.logical_z.len(),
            });
        }
        if !lengths_ok {
            return Report { subject: self.name.clone(), violations: v };
        }

        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                if !self.generators[i].commutes(&self.generators[j]).unwrap_or(false) {
                    v.push(CodeViolation::GeneratorsAnticommute(i, j));
                }
            }
        }
        if self.n > 32 {
            v.push(CodeViolation::TooLarge(self.n));
        } else {
            let rows: Vec<u64> = self
                .generators
                .iter()
                .map(|g| g.x_bits() | g.z_bits() << self.n)
                .collect();
            let rank = gf2::rank(&rows, 2 * self.n);
            if rank < rows.len() {
                v.push(CodeViolation::DependentGenerators { rank, count: rows.len() });
            }
        }

        let logicals: Vec<(String, &PauliString)> = self
            .logical_x
            .iter()
            .enumerate()
            .map(|(j, l)| (format!("X{j}"), l))
            .chain(self.logical_z.iter().enumerate().map(|(j, l)| (format!("Z{j}"), l)))
            .collect();
        for (name, l) in &logicals {
            for (i, g) in self.generators.iter().enumerate() {
                if !l.commutes(g).unwrap_or(false) {
                    v.push(CodeViolation::LogicalAnticommutesWithGenerator {
                        logical: name.clone(),
                        generator: i,
                    });
                }
            }
        }
        let kx = self.logical_x.len();
        for a in 0..logicals.len() {
            for b in a + 1..logicals.len() {
                // X_i vs Z_j sits at a < kx <= b with index b - kx
                let expected_anticommute = a < kx && b >= kx && b - kx == a;
                let anticommutes = !logicals[a].1.commutes(logicals[b].1).unwrap_or(true);
                if anticommutes != expected_anticommute {
                    v.push(CodeViolation::LogicalPairing {
                        a: logicals[a].0.clone(),
                        b: logicals[b].0.clone(),
                        expected_anticommute,
                    });
                }
            }
        }
        Report { subject: self.name.clone(), violations: v }
    }

    /// Smallest weight of a nontrivial logical operator (over all logical
    /// Pauli words times the stabilizer group).
    pub fn distance(&self) -> Result<u32, CodeError> {
        let group = enumerate_group(self)?;
        let mut best = u32::MAX;
        for word in 1..4usize.pow(self.k as u32) {
            let l = self.logical_word(word)?;
            for s in &group {
                best = best.min(l.mul(s)?.weight());
            }
        }
        Ok(best)
    }

    /// Logical Pauli word indexed base 4 (digit `j` picks I/X/Y/Z on logical qubit `j`).
    pub fn logical_word(&self, mut word: usize) -> Result<PauliString, PauliError> {
        let mut p = PauliString::identity(self.n);
        for j in 0..self.k {
            let op = match word % 4 {
                0 => None,
                1 => Some(self.logical_x[j]),
                2 => Some(self.logical_y(j)?),
                _ => Some(self.logical_z[j]),
            };
            if let Some(op) = op {
                p = p.mul(&op)?;
            }
            word /= 4;
        }
        Ok(p)
    }
}

/// All `2^(n-k)` products of generator subsets, indexed by subset mask.
pub fn enumerate_group(code: &StabilizerCode) -> Result<Vec<PauliString>, CodeError> {
    let mut group = vec![PauliString::identity(code.n)];
    for g in &code.generators {
        let next: Vec<PauliString> = group.iter().map(|s| s.mul(g)).collect::<Result<_, _>>()?;
        group.extend(next);
    }
    let mut seen = HashSet::with_capacity(group.len());
    for s in &group {
        if !s.is_hermitian() {
            return Err(CodeError::Invalid {
                name: code.name.clone(),
                reason: format!("group element {s} is not Hermitian"),
            });
        }
        if !seen.insert((s.x_bits(), s.z_bits())) {
            return Err(CodeError::Invalid {
                name: code.name.clone(),
                reason: "dependent generators: group element repeats".into(),
            });
        }
    }
    Ok(group)
}

pub fn validate_code(code: &StabilizerCode) -> CodeReport {
    code.validate()
}

/// Binary matrix whose rows generate the classical code behind a
/// Bravyi-Haah style distillation circuit. Rows are packed into `u64`
/// with bit `j` holding column `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriorthogonalMatrix {
    n: usize,
    rows: Vec<u64>,
    odd: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TriorthogonalViolation {
    PairOverlap { a: usize, b: usize, overlap: u32 },
    TripleOverlap { a: usize, b: usize, c: usize, overlap: u32 },
    RowWeight { row: usize, weight: u32, designated_odd: bool },
    DependentRows { rank: usize, rows: usize },
}

impl fmt::Display for TriorthogonalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriorthogonalViolation::PairOverlap { a, b, overlap } => {
                write!(f, "rows {a} and {b} overlap in {overlap} columns (must be even)")
            }
            TriorthogonalViolation::TripleOverlap { a, b, c, overlap } => {
                write!(f, "rows {a}, {b}, {c} overlap in {overlap} columns (must be even)")
            }
            TriorthogonalViolation::RowWeight { row, weight, designated_odd } => {
                let want = if *designated_odd { "odd" } else { "even" };
                write!(f, "row {row} has weight {weight}, designated {want}")
            }
            TriorthogonalViolation::DependentRows { rank, rows } => {
                write!(f, "rows are linearly dependent (rank {rank} of {rows})")
            }
        }
    }
}

impl TriorthogonalMatrix {
    /// Rows given as `0/1` strings; odd rows are those of odd weight.
    pub fn from_bit_strings(rows: &[&str]) -> Result<Self, CodeError> {
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut packed = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            packed.push(parse_bits(r, n).map_err(|msg| CodeError::Parse { line: i + 1, msg })?);
        }
        Ok(Self::from_rows(n, packed))
    }

    pub fn from_rows(n: usize, rows: Vec<u64>) -> Self {
        assert!(n <= 64, "at most 64 columns");
        let odd = rows.iter().map(|r| gf2::parity(*r)).collect();
        Self { n, rows, odd }
    }

    /// Explicit odd-row designation, which validation checks against the weights.
    pub fn with_designation(n: usize, rows: Vec<u64>, odd: Vec<bool>) -> Self {
        assert_eq!(rows.len(), odd.len());
        Self { n, rows, odd }
    }

    pub fn num_columns(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn is_odd(&self, row: usize) -> bool {
        self.odd[row]
    }

    pub fn odd_rows(&self) -> Vec<u64> {
        self.rows.iter().zip(&self.odd).filter(|(_, &o)| o).map(|(r, _)| *r).collect()
    }

    pub fn even_rows(&self) -> Vec<u64> {
        self.rows.iter().zip(&self.odd).filter(|(_, &o)| !o).map(|(r, _)| *r).collect()
    }

    /// Number of encoded qubits: one per odd row.
    pub fn k(&self) -> usize {
        self.odd.iter().filter(|&&o| o).count()
    }

    pub fn validate(&self) -> TriorthogonalReport {
        let mut v = Vec::new();
        let m = self.rows.len();
        for (i, &r) in self.rows.iter().enumerate() {
            let w = r.count_ones();
            if (w % 2 == 1) != self.odd[i] {
                v.push(TriorthogonalViolation::RowWeight { row: i, weight: w, designated_odd: self.odd[i] });
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                let o = (self.rows[a] & self.rows[b]).count_ones();
                if o % 2 == 1 {
                    v.push(TriorthogonalViolation::PairOverlap { a, b, overlap: o });
                }
                for c in b + 1..m {
                    let o = (self.rows[a] & self.rows[b] & self.rows[c]).count_ones();
                    if o % 2 == 1 {
                        v.push(TriorthogonalViolation::TripleOverlap { a, b, c, overlap: o });
                    }
                }
            }
        }
        let rank = gf2::rank(&self.rows, self.n);
        if rank < m {
            v.push(TriorthogonalViolation::DependentRows { rank, rows: m });
        }
        Report { subject: format!("triorthogonal {}x{}", m, self.n), violations: v }
    }

    /// Logical-Z support for odd row `a`: `d·g_b = [b == a]` for every row `g_b`.
    pub fn dual_representative(&self, odd_index: usize) -> Option<u64> {
        let target = self
            .rows
            .iter()
            .zip(&self.odd)
            .enumerate()
            .filter(|(_, (_, &o))| o)
            .nth(odd_index)?
            .0;
        let rhs: Vec<bool> = (0..self.rows.len()).map(|b| b == target).collect();
        gf2::solve(&self.rows, &rhs, self.n)
    }

    /// The CSS code of the matrix: X checks from even rows, Z checks from the
    /// orthogonal complement of all rows, logical X from odd rows.
    pub fn to_stabilizer_code(&self, name: &str) -> Result<StabilizerCode, CodeError> {
        let n = self.n;
        let bits = |v: u64| -> Vec<u8> { (0..n).map(|j| (v >> j & 1) as u8).collect() };
        let mut generators: Vec<PauliString> = self.even_rows().iter().map(|&r| PauliString::x_on(&bits(r))).collect();
        generators.extend(gf2::null_space(&self.rows, n).iter().map(|&r| PauliString::z_on(&bits(r))));
        let logical_x = self.odd_rows().iter().map(|&r| PauliString::x_on(&bits(r))).collect();
        let logical_z = (0..self.k())
            .map(|a| {
                self.dual_representative(a)
                    .map(|d| PauliString::z_on(&bits(d)))
                    .ok_or_else(|| CodeError::Invalid {
                        name: name.to_string(),
                        reason: format!("odd row {a} has no dual representative"),
                    })
            })
            .collect::<Result<_, _>>()?;
        Ok(StabilizerCode {
            name: name.to_string(),
            n,
            k: self.k(),
            generators,
            logical_x,
            logical_z,
        })
    }
}

pub fn validate_triorthogonal(g: &TriorthogonalMatrix) -> TriorthogonalReport {
    g.validate()
}

/// Every triorthogonal matrix with `1..=max_cols` columns and at least one odd
/// row, one per row space, taking the reduced row echelon basis.
pub fn enumerate_triorthogonal(max_cols: usize) -> Vec<TriorthogonalMatrix> {
    let mut out = Vec::new();
    for n in 1..=max_cols.min(16) {
        for pivots in 1u64..1 << n {
            let piv: Vec<usize> = (0..n).filter(|&j| pivots >> j & 1 == 1).collect();
            // Row i may use non-pivot columns to the right of its pivot.
            let free: Vec<Vec<usize>> = piv
                .iter()
                .map(|&p| (p + 1..n).filter(|&j| pivots >> j & 1 == 0).collect())
                .collect();
            let total: usize = free.iter().map(Vec::len).sum();
            for mut choice in 0u64..1 << total {
                let rows: Vec<u64> = piv
                    .iter()
                    .zip(&free)
                    .map(|(&p, cols)| {
                        let mut r = 1u64 << p;
                        for &j in cols {
                            r |= (choice & 1) << j;
                            choice >>= 1;
                        }
                        r
                    })
                    .collect();
                let g = TriorthogonalMatrix::from_rows(n, rows);
                if g.k() > 0 && g.validate().passed() {
                    out.push(g);
                }
            }
        }
    }
    out
}

fn parse_bits(s: &str, n: usize) -> Result<u64, String> {
    if s.len() != n {
        return Err(format!("row '{s}' has {} columns, expected {n}", s.len()));
    }
    if n > 64 {
        return Err("more than 64 columns".into());
    }
    let mut v = 0u64;
    for (j, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => v |= 1 << j,
            other => return Err(format!("invalid bit '{other}'")),
        }
    }
    Ok(v)
}

/// One catalogue block.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogueEntry {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub code: Option<StabilizerCode>,
    pub matrix: Option<TriorthogonalMatrix>,
}

impl CatalogueEntry {
    /// The stabilizer code, derived from the matrix when no generators were listed.
    pub fn stabilizer_code(&self) -> Result<StabilizerCode, CodeError> {
        match (&self.code, &self.matrix) {
            (Some(c), _) => Ok(c.clone()),
            (None, Some(m)) => m.to_stabilizer_code(&self.name),
            (None, None) => Err(CodeError::Invalid {
                name: self.name.clone(),
                reason: "block lists neither generators nor triorthogonal rows".into(),
            }),
        }
    }

    /// Full validation of the block: declared sizes, the code, and the matrix.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if let Some(m) = &self.matrix {
            let rep = m.validate();
            problems.extend(rep.violations.iter().map(|v| v.to_string()));
            if m.num_columns() != self.n {
                problems.push(format!("matrix has {} columns, declared n = {}", m.num_columns(), self.n));
            }
            if m.k() != self.k {
                problems.push(format!("matrix encodes k = {} (odd rows), declared k = {}", m.k(), self.k));
            }
        }
        match self.stabilizer_code() {
            Ok(code) => {
                if code.n != self.n {
                    problems.push(format!("code acts on {} qubits, declared n = {}", code.n, self.n));
                }
                problems.extend(code.validate().violations.iter().map(|v| v.to_string()));
            }
            Err(e) => problems.push(e.to_string()),
        }
        problems
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Catalogue {
    pub entries: Vec<CatalogueEntry>,
}

impl Catalogue {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CATALOGUE).expect("built-in catalogue parses")
    }

    pub fn load(path: &Path) -> Result<Self, CodeError> {
        let text = std::fs::read_to_string(path).map_err(|source| CodeError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn get(&self, name: &str) -> Result<&CatalogueEntry, CodeError> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| CodeError::Missing(name.to_string()))
    }

    pub fn code(&self, name: &str) -> Result<StabilizerCode, CodeError> {
        self.get(name)?.stabilizer_code()
    }

    pub fn matrix(&self, name: &str) -> Result<TriorthogonalMatrix, CodeError> {
        self.get(name)?.matrix.clone().ok_or_else(|| CodeError::Invalid {
            name: name.to_string(),
            reason: "entry has no triorthogonal rows".into(),
        })
    }

    pub fn parse(text: &str) -> Result<Self, CodeError> {
        struct Block {
            name: String,
            line: usize,
            n: Option<usize>,
            k: Option<usize>,
            generators: Vec<PauliString>,
            lx: Vec<PauliString>,
            lz: Vec<PauliString>,
            rows: Vec<u64>,
        }
        fn finish(b: Block) -> Result<CatalogueEntry, CodeError> {
            let err = |msg: &str| CodeError::Parse { line: b.line, msg: format!("block '{}': {msg}", b.name) };
            let n = b.n.ok_or_else(|| err("missing 'n'"))?;
            let k = b.k.ok_or_else(|| err("missing 'k'"))?;
            let code = if b.generators.is_empty() && b.lx.is_empty() && b.lz.is_empty() {
                None
            } else {
                Some(StabilizerCode {
                    name: b.name.clone(),
                    n,
                    k,
                    generators: b.generators,
                    logical_x: b.lx,
                    logical_z: b.lz,
                })
            };
            let matrix = (!b.rows.is_empty()).then(|| TriorthogonalMatrix::from_rows(n, b.rows));
            if code.is_none() && matrix.is_none() {
                return Err(err("no generators or triorthogonal rows"));
            }
            Ok(CatalogueEntry { name: b.name, n, k, code, matrix })
        }

        let mut entries = Vec::new();
        let mut cur: Option<Block> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut parts = content.split_whitespace();
            let key = parts.next().unwrap_or_default();
            let value = parts.next();
            if parts.next().is_some() {
                return Err(CodeError::Parse { line, msg: format!("trailing tokens after '{key}'") });
            }
            let value = value.ok_or_else(|| CodeError::Parse { line, msg: format!("'{key}' needs a value") })?;
            if key == "name" {
                if let Some(b) = cur.take() {
                    entries.push(finish(b)?);
                }
                cur = Some(Block {
                    name: value.to_string(),
                    line,
                    n: None,
                    k: None,
                    generators: Vec::new(),
                    lx: Vec::new(),
                    lz: Vec::new(),
                    rows: Vec::new(),
                });
                continue;
            }
            let b = cur
                .as_mut()
                .ok_or_else(|| CodeError::Parse { line, msg: format!("'{key}' before any 'name'") })?;
            let int = |v: &str| -> Result<usize, CodeError> {
                v.parse().map_err(|_| CodeError::Parse { line, msg: format!("bad integer '{v}'") })
            };
            let pauli = |v: &str| -> Result<PauliString, CodeError> {
                let p: PauliString = v
                    .parse()
                    .map_err(|e: PauliError| CodeError::Parse { line, msg: e.to_string() })?;
                if let Some(n) = b.n {
                    if p.num_qubits() != n {
                        return Err(CodeError::Parse {
                            line,
                            msg: format!("'{v}' has length {}, expected n = {n}", p.num_qubits()),
                        });
                    }
                }
                Ok(p)
            };
            match key {
                "n" => b.n = Some(int(value)?),
                "k" => b.k = Some(int(value)?),
                "generator" => {
                    let p = pauli(value)?;
                    b.generators.push(p)
                }
                "logical_x" => {
                    let p = pauli(value)?;
                    b.lx.push(p)
                }
                "logical_z" => {
                    let p = pauli(value)?;
                    b.lz.push(p)
                }
                "triorthogonal_row" => {
                    let n = b.n.ok_or_else(|| CodeError::Parse { line, msg: "'n' must precede rows".into() })?;
                    let row = parse_bits(value, n).map_err(|msg| CodeError::Parse { line, msg })?;
                    b.rows.push(row);
                }
                other => return Err(CodeError::Parse { line, msg: format!("unknown key '{other}'") }),
            }
        }
        if let Some(b) = cur.take() {
            entries.push(finish(b)?);
        }
        Ok(Self { entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn five_qubit() -> StabilizerCode {
        StabilizerCode::new("five_qubit", &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], &["XXXXX"], &["ZZZZZ"]).unwrap()
    }

    fn steane() -> StabilizerCode {
        StabilizerCode::new(
            "steane",
            &["XXXXIII", "XXIIXXI", "XIXIXIX", "ZZZZIII", "ZZIIZZI", "ZIZIZIZ"],
            &["XXXXXXX"],
            &["ZZZZZZZ"],
        )
        .unwrap()
    }

    #[test]
    fn builtin_codes_validate() {
        assert!(five_qubit().validate().passed());
        assert!(steane().validate().passed());
        let cat = Catalogue::builtin();
        for e in &cat.entries {
            assert!(e.validate().is_empty(), "{}: {:?}", e.name, e.validate());
        }
        assert_eq!(cat.code("five_qubit").unwrap(), five_qubit());
        assert_eq!(cat.code("steane").unwrap(), steane());
    }

    #[test]
    fn bad_logical_is_reported() {
        let mut c = five_qubit();
        c.logical_x[0] = "XIIII".parse().unwrap();
        let rep = c.validate();
        assert!(!rep.passed());
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, CodeViolation::LogicalAnticommutesWithGenerator { .. })));
    }

    #[test]
    fn corrupted_generator_names_the_pair() {
        let mut c = five_qubit();
        c.generators[0] = "XZZYI".parse().unwrap();
        let rep = c.validate();
        assert!(rep.violations.contains(&CodeViolation::GeneratorsAnticommute(0, 3)), "{rep}");
    }

    #[test]
    fn group_sizes_and_phases() {
        let g5 = enumerate_group(&five_qubit()).unwrap();
        assert_eq!(g5.len(), 16);
        let g7 = enumerate_group(&steane()).unwrap();
        assert_eq!(g7.len(), 64);
        for s in g5.iter().chain(&g7) {
            assert!(s.is_hermitian());
        }
        assert!(g5[0].is_identity_letters());
    }

    #[test]
    fn group_is_closed() {
        for code in [five_qubit(), steane()] {
            let g = enumerate_group(&code).unwrap();
            let set: HashSet<PauliString> = g.iter().copied().collect();
            for a in &g {
                for b in &g {
                    assert!(set.contains(&a.mul(b).unwrap()));
                }
            }
        }
    }

    #[test]
    fn dependent_generators_are_rejected() {
        let c = StabilizerCode::new("dup", &["ZZI", "ZZI"], &["XXX"], &["ZZZ"]).unwrap();
        assert!(enumerate_group(&c).is_err());
        assert!(c
            .validate()
            .violations
            .iter()
            .any(|v| matches!(v, CodeViolation::DependentGenerators { .. })));
    }

    #[test]
    fn distances() {
        assert_eq!(five_qubit().distance().unwrap(), 3);
        assert_eq!(steane().distance().unwrap(), 3);
        let cat = Catalogue::builtin();
        assert_eq!(cat.code("jones_622").unwrap().distance().unwrap(), 2);
        assert_eq!(cat.code("bravyi_haah_14").unwrap().distance().unwrap(), 2);
    }

    #[test]
    fn triorthogonal_examples() {
        let bh = Catalogue::builtin().matrix("bravyi_haah_14").unwrap();
        assert!(bh.validate().passed(), "{}", bh.validate());
        assert_eq!(bh.num_columns(), 14);
        assert_eq!(bh.k(), 2);

        let single = TriorthogonalMatrix::with_designation(2, vec![0b11], vec![false]);
        assert!(single.validate().passed());

        let bad = TriorthogonalMatrix::from_bit_strings(&["110", "101"]).unwrap();
        let rep = bad.validate();
        assert!(rep
            .violations
            .contains(&TriorthogonalViolation::PairOverlap { a: 0, b: 1, overlap: 1 }));

        let mislabeled = TriorthogonalMatrix::with_designation(2, vec![0b11], vec![true]);
        assert!(!mislabeled.validate().passed());

        let triple = TriorthogonalMatrix::from_bit_strings(&["1110", "1101", "1011"]).unwrap();
        assert!(triple
            .validate()
            .violations
            .iter()
            .any(|v| matches!(v, TriorthogonalViolation::TripleOverlap { .. })));
    }

    #[test]
    fn derived_code_from_matrix_is_valid() {
        let bh = Catalogue::builtin().matrix("bravyi_haah_14").unwrap();
        let code = bh.to_stabilizer_code("bh").unwrap();
        assert_eq!(code.generators.len(), 12);
        assert!(code.validate().passed(), "{}", code.validate());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "name a\nn 2\nk 1\ngenerator ZQ\n";
        match Catalogue::parse(text) {
            Err(CodeError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Catalogue::parse("n 3\n").is_err());
        assert!(Catalogue::parse("name a\nk 1\ngenerator ZZ\n").is_err());
        assert!(Catalogue::parse("name a\nn 3\nk 1\ngenerator ZZ\n").is_err());
        assert!(Catalogue::builtin().get("nope").is_err());
    }

    #[test]
    fn toy_triorthogonal_enumeration() {
        let small = enumerate_triorthogonal(2);
        assert_eq!(small.len(), 4);
        let toys = enumerate_triorthogonal(5);
        assert!(toys.iter().all(|g| g.num_columns() <= 5 && g.k() > 0));
        for g in &toys {
            let code = g.to_stabilizer_code("toy").unwrap();
            assert!(code.validate().passed(), "{:?}: {}", g.rows(), code.validate());
        }
        let mut spaces: Vec<(usize, Vec<u64>)> = toys.iter().map(|g| (g.num_columns(), gf2::span(g.rows()))).collect();
        for s in &mut spaces {
            s.1.sort_unstable();
        }
        spaces.sort();
        spaces.dedup();
        assert_eq!(spaces.len(), toys.len());
    }
}

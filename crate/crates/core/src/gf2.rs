//! Small dense linear algebra over GF(2), rows packed into `u64` (bit `j` = column `j`).

/// Reduced row echelon form; returns the reduced rows (nonzero only) and pivot columns.
pub fn row_reduce(rows: &[u64], ncols: usize) -> (Vec<u64>, Vec<usize>) {
    let mut m: Vec<u64> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let bit = 1u64 << col;
        let Some(p) = (r..m.len()).find(|&i| m[i] & bit != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i] & bit != 0 {
                m[i] ^= m[r];
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[u64], ncols: usize) -> usize {
    row_reduce(rows, ncols).0.len()
}

/// Basis of `{v : v·row = 0 for every row}`.
pub fn null_space(rows: &[u64], ncols: usize) -> Vec<u64> {
    let (red, pivots) = row_reduce(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = 1u64 << f;
            for (row, &p) in red.iter().zip(&pivots) {
                if row >> f & 1 == 1 {
                    v |= 1u64 << p;
                }
            }
            v
        })
        .collect()
}

/// Some `v` with `v·rows[i] = rhs[i]` for all `i`, if one exists.
pub fn solve(rows: &[u64], rhs: &[bool], ncols: usize) -> Option<u64> {
    assert_eq!(rows.len(), rhs.len());
    assert!(ncols < 64, "augmented column does not fit");
    let aug: Vec<u64> = rows
        .iter()
        .zip(rhs)
        .map(|(&r, &b)| r | (b as u64) << ncols)
        .collect();
    let (red, pivots) = row_reduce(&aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut v = 0u64;
    for (row, &p) in red.iter().zip(&pivots) {
        if row >> ncols & 1 == 1 {
            v |= 1u64 << p;
        }
    }
    Some(v)
}

pub fn parity(v: u64) -> bool {
    v.count_ones() % 2 == 1
}

/// All `2^len` combinations of `basis`, indexed by the coefficient bitmask.
pub fn span(basis: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64];
    for &b in basis {
        let doubled: Vec<u64> = out.iter().map(|&v| v ^ b).collect();
        out.extend(doubled);
    }
    out
}

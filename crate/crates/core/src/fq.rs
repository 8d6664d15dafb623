//! Dense linear algebra over the prime field F_p, plus exhaustive
//! enumeration of affine solution sets and of subspaces in reduced row
//! echelon form. Everything is deterministic; enumeration order is fixed by
//! construction so repeated runs are bit-identical.
//!
//! Matrices act on column vectors: an r x c matrix is a map F_p^c -> F_p^r.

use crate::error::{Error, Result};

/// a^e mod p.
pub fn pow_mod(a: u64, mut e: u64, p: u64) -> u64 {
    let mut base = a % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse mod prime p. Panics on zero.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inv_mod of zero");
    pow_mod(a, p - 2, p)
}

/// Number of k-dimensional subspaces of F_p^n, saturating at u128::MAX.
/// Cheap; safe to call before committing to any enumeration.
pub fn gaussian_binomial(p: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    // row[j] holds the count for ambient dimension m; grow m to n by
    // count(m, j) = count(m-1, j-1) + p^j * count(m-1, j).
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            let scaled = (p as u128)
                .checked_pow(j as u32)
                .and_then(|pj| pj.checked_mul(row[j]))
                .unwrap_or(u128::MAX);
            row[j] = scaled.saturating_add(row[j - 1]);
        }
    }
    row[k]
}

/// Dense matrix over F_p, row-major, entries reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = FpMatrix::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = FpMatrix::zero(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_fn(p: u64, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u64) -> Self {
        let mut m = FpMatrix::zero(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> FpMatrix {
        FpMatrix::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FpMatrix::from_fn(self.p, self.rows, self.cols, |i, j| {
            (self.get(i, j) + other.get(i, j)) % self.p
        })
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FpMatrix::from_fn(self.p, self.rows, self.cols, |i, j| {
            (self.p + self.get(i, j) - other.get(i, j)) % self.p
        })
    }

    pub fn neg(&self) -> FpMatrix {
        FpMatrix::from_fn(self.p, self.rows, self.cols, |i, j| {
            (self.p - self.get(i, j)) % self.p
        })
    }

    pub fn scale(&self, s: u64) -> FpMatrix {
        let s = s % self.p;
        FpMatrix::from_fn(self.p, self.rows, self.cols, |i, j| self.get(i, j) * s % self.p)
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut m = FpMatrix::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (m.get(i, j) + a * other.get(k, j)) % self.p;
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = (acc + self.get(i, j) * v[j]) % self.p;
                }
                acc
            })
            .collect()
    }

    /// Stack horizontally: [self | other].
    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        FpMatrix::from_fn(self.p, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    /// Stack vertically: [self; other].
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        FpMatrix::from_fn(self.p, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j)
            } else {
                other.get(i - self.rows, j)
            }
        })
    }

    /// Assemble from a grid of blocks; None means a zero block. Row heights
    /// and column widths are inferred and must be consistent.
    pub fn from_blocks(p: u64, grid: &[Vec<Option<&FpMatrix>>]) -> FpMatrix {
        let nrows = grid.len();
        let ncols = grid.first().map_or(0, |r| r.len());
        let mut heights = vec![None; nrows];
        let mut widths = vec![None; ncols];
        for (bi, brow) in grid.iter().enumerate() {
            assert_eq!(brow.len(), ncols, "ragged block grid");
            for (bj, blk) in brow.iter().enumerate() {
                if let Some(m) = blk {
                    assert_eq!(m.p, p);
                    match heights[bi] {
                        None => heights[bi] = Some(m.rows),
                        Some(h) => assert_eq!(h, m.rows, "inconsistent block heights"),
                    }
                    match widths[bj] {
                        None => widths[bj] = Some(m.cols),
                        Some(w) => assert_eq!(w, m.cols, "inconsistent block widths"),
                    }
                }
            }
        }
        let heights: Vec<usize> =
            heights.into_iter().map(|h| h.expect("block row with no known height")).collect();
        let widths: Vec<usize> =
            widths.into_iter().map(|w| w.expect("block column with no known width")).collect();
        let mut m = FpMatrix::zero(p, heights.iter().sum(), widths.iter().sum());
        let mut roff = 0;
        for (bi, brow) in grid.iter().enumerate() {
            let mut coff = 0;
            for (bj, blk) in brow.iter().enumerate() {
                if let Some(b) = blk {
                    for i in 0..b.rows {
                        for j in 0..b.cols {
                            m.set(roff + i, coff + j, b.get(i, j));
                        }
                    }
                }
                coff += widths[bj];
            }
            roff += heights[bi];
        }
        m
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let p = m.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(r, j), m.get(pr, j));
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in 0..m.cols {
                m.set(r, j, m.get(r, j) * inv % p);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = (m.get(i, j) + (p - f) * m.get(r, j)) % p;
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { mat: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel {x : Ax = 0}, one vector per free column,
    /// in ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let Rref { mat, pivots } = self.rref();
        let p = self.p;
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for fc in 0..self.cols {
            if pivot_set.contains(&fc) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - mat.get(r, fc)) % p;
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of Ax = b, or None if inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let bm = FpMatrix::from_rows(self.p, b.iter().map(|&v| vec![v]).collect());
        let aug = self.hstack(&bm);
        let Rref { mat, pivots } = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = mat.get(r, self.cols);
        }
        Some(x)
    }

    /// All solutions of Ax = b as an affine space.
    pub fn solve_all(&self, b: &[u64]) -> Option<AffineSpace> {
        let particular = self.solve(b)?;
        Some(AffineSpace { p: self.p, particular, basis: self.kernel_basis() })
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let aug = self.hstack(&FpMatrix::identity(self.p, self.rows));
        let Rref { mat, pivots } = aug.rref();
        if pivots.len() != self.rows || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        Some(FpMatrix::from_fn(self.p, self.rows, self.cols, |i, j| mat.get(i, j + self.cols)))
    }

    /// Row echelon form with zero rows dropped.
    pub fn rref_trimmed(&self) -> FpMatrix {
        let Rref { mat, pivots } = self.rref();
        FpMatrix::from_fn(self.p, pivots.len(), self.cols, |i, j| mat.get(i, j))
    }

    /// Echelonized basis of the column space, as columns of the result.
    pub fn column_space_basis(&self) -> FpMatrix {
        let rt = self.transpose().rref();
        let rank = rt.pivots.len();
        FpMatrix::from_fn(self.p, self.rows, rank, |i, j| rt.mat.get(j, i))
    }
}

impl std::fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Rref {
    pub mat: FpMatrix,
    pub pivots: Vec<usize>,
}

/// Affine subspace {particular + span(basis)} of F_p^n, enumerable.
#[derive(Debug, Clone)]
pub struct AffineSpace {
    pub p: u64,
    pub particular: Vec<u64>,
    pub basis: Vec<Vec<u64>>,
}

impl AffineSpace {
    pub fn size(&self) -> u128 {
        (0..self.basis.len()).fold(1u128, |a, _| a.saturating_mul(self.p as u128))
    }

    /// Error if the point count exceeds cap; enumeration callers check this
    /// before iterating.
    pub fn check_cap(&self, cap: u64, what: &str) -> Result<()> {
        if self.size() > cap as u128 {
            return Err(Error::CapExceeded {
                needed: self.size(),
                cap,
                what: what.to_string(),
            });
        }
        Ok(())
    }

    /// All points, in lexicographic order of the coefficient tuple.
    pub fn points(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let k = self.basis.len();
        let p = self.p;
        let mut counter = vec![0u64; k];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let mut pt = self.particular.clone();
            for (c, b) in counter.iter().zip(&self.basis) {
                if *c == 0 {
                    continue;
                }
                for (x, y) in pt.iter_mut().zip(b) {
                    *x = (*x + c * y) % p;
                }
            }
            // Increment the base-p counter; finish after wrapping around.
            let mut i = 0;
            loop {
                if i == k {
                    done = true;
                    break;
                }
                counter[i] += 1;
                if counter[i] < p {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
            Some(pt)
        })
    }
}

/// All vectors of F_p^n in lexicographic order.
pub fn enumerate_vectors(p: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    AffineSpaceOwned {
        inner: AffineSpace {
            p,
            particular: vec![0; n],
            basis: (0..n)
                .map(|i| {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v
                })
                .collect(),
        },
    }
    .into_iter()
}

struct AffineSpaceOwned {
    inner: AffineSpace,
}

impl IntoIterator for AffineSpaceOwned {
    type Item = Vec<u64>;
    type IntoIter = std::vec::IntoIter<Vec<u64>>;
    fn into_iter(self) -> Self::IntoIter {
        self.inner.points().collect::<Vec<_>>().into_iter()
    }
}

/// All k-dimensional subspaces of F_p^n. Each subspace is returned once, as
/// the unique matrix whose rows are its reduced-echelon basis. Materializes
/// the full list; use `for_each_subspace` when the count is large.
pub fn subspaces(p: u64, n: usize, k: usize) -> Vec<FpMatrix> {
    let mut out = Vec::new();
    for_each_subspace(p, n, k, &mut |m| out.push(m.clone()));
    out
}

/// Visit every k-dimensional subspace of F_p^n exactly once, as its
/// reduced-echelon basis matrix. Streams with flat memory; the matrix
/// buffer is reused between calls.
pub fn for_each_subspace(p: u64, n: usize, k: usize, f: &mut dyn FnMut(&FpMatrix)) {
    if k > n {
        return;
    }
    let mut pivots = Vec::new();
    visit_pivot_sets(p, n, k, 0, &mut pivots, f);
}

fn visit_pivot_sets(
    p: u64,
    n: usize,
    k: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    f: &mut dyn FnMut(&FpMatrix),
) {
    if pivots.len() == k {
        visit_free_entries(p, n, pivots, f);
        return;
    }
    let remaining = k - pivots.len();
    for c in start..=(n - remaining) {
        pivots.push(c);
        visit_pivot_sets(p, n, k, c + 1, pivots, f);
        pivots.pop();
    }
}

fn visit_free_entries(p: u64, n: usize, pivots: &[usize], f: &mut dyn FnMut(&FpMatrix)) {
    // Free entries of the echelon form: row i, column j with j > pivots[i]
    // and j not itself a pivot column.
    let k = pivots.len();
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut free = Vec::new();
    for (i, &pc) in pivots.iter().enumerate() {
        for j in (pc + 1)..n {
            if !pivot_set.contains(&j) {
                free.push((i, j));
            }
        }
    }
    let mut m = FpMatrix::zero(p, k, n);
    for (i, &pc) in pivots.iter().enumerate() {
        m.set(i, pc, 1);
    }
    let mut vals = vec![0u64; free.len()];
    loop {
        for (&(i, j), &v) in free.iter().zip(&vals) {
            m.set(i, j, v);
        }
        f(&m);
        let mut d = 0;
        loop {
            if d == vals.len() {
                return;
            }
            vals[d] += 1;
            if vals[d] < p {
                break;
            }
            vals[d] = 0;
            d += 1;
        }
    }
}

/// Does v lie in the row span of the echelon basis?
pub fn in_row_span(echelon: &FpMatrix, v: &[u64]) -> bool {
    let p = echelon.p;
    let mut v = v.to_vec();
    for i in 0..echelon.rows {
        let Some(pc) = (0..echelon.cols).find(|&j| echelon.get(i, j) != 0) else {
            continue;
        };
        // Echelon rows have unit pivots.
        let f = v[pc];
        if f != 0 {
            for j in 0..echelon.cols {
                v[j] = (v[j] + (p - f) * echelon.get(i, j)) % p;
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_known_matrix() {
        let m = FpMatrix::from_rows(5, vec![vec![1, 2, 0], vec![0, 0, 1], vec![2, 4, 1]]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![0, 2]);
        assert_eq!(m.rank(), 2);
        assert_eq!(r.mat.row(0), &[1, 2, 0]);
        assert_eq!(r.mat.row(1), &[0, 0, 1]);
        assert_eq!(r.mat.row(2), &[0, 0, 0]);
    }

    #[test]
    fn kernel_and_solve() {
        let m = FpMatrix::from_rows(3, vec![vec![1, 1, 0], vec![0, 0, 1]]);
        let ker = m.kernel_basis();
        assert_eq!(ker, vec![vec![2, 1, 0]]);
        let x = m.solve(&[1, 2]).unwrap();
        assert_eq!(m.apply(&x), vec![1, 2]);
        let all = m.solve_all(&[1, 2]).unwrap();
        assert_eq!(all.size(), 3);
        let pts: Vec<_> = all.points().collect();
        assert_eq!(pts.len(), 3);
        for pt in &pts {
            assert_eq!(m.apply(pt), vec![1, 2]);
        }
        // Inconsistent system.
        let sing = FpMatrix::from_rows(3, vec![vec![1, 1], vec![2, 2]]);
        assert!(sing.solve(&[1, 0]).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = FpMatrix::from_rows(7, vec![vec![1, 2], vec![3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FpMatrix::identity(7, 2));
        assert_eq!(inv.mul(&m), FpMatrix::identity(7, 2));
        let sing = FpMatrix::from_rows(7, vec![vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(!sing.is_invertible());
    }

    #[test]
    fn from_blocks_assembles_consistently() {
        let a = FpMatrix::identity(3, 2);
        let b = FpMatrix::from_rows(3, vec![vec![1], vec![2]]);
        let m = FpMatrix::from_blocks(3, &[vec![Some(&a), Some(&b)], vec![None, Some(&FpMatrix::from_rows(3, vec![vec![2]]))]]);
        assert_eq!(m.rows, 3);
        assert_eq!(m.cols, 3);
        assert_eq!(m.row(0), &[1, 0, 1]);
        assert_eq!(m.row(1), &[0, 1, 2]);
        assert_eq!(m.row(2), &[0, 0, 2]);
    }

    #[test]
    fn affine_space_cap() {
        let sp = AffineSpace { p: 3, particular: vec![0, 0, 0], basis: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]] };
        assert_eq!(sp.size(), 27);
        assert!(sp.check_cap(27, "test").is_ok());
        let err = sp.check_cap(26, "test").unwrap_err();
        assert!(matches!(err, Error::CapExceeded { needed: 27, cap: 26, .. }));
        let pts: std::collections::BTreeSet<_> = sp.points().collect();
        assert_eq!(pts.len(), 27);
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for &(p, n, k) in &[(2u64, 4usize, 2usize), (2, 3, 1), (3, 3, 1), (3, 3, 2), (5, 2, 1), (2, 4, 0), (2, 4, 4)] {
            let subs = subspaces(p, n, k);
            assert_eq!(subs.len() as u128, gaussian_binomial(p, n, k), "p={p} n={n} k={k}");
            let uniq: std::collections::BTreeSet<_> = subs.iter().map(|m| format!("{m}")).collect();
            assert_eq!(uniq.len(), subs.len());
            for s in &subs {
                assert_eq!(s.rank(), k);
            }
        }
        assert_eq!(gaussian_binomial(2, 4, 2), 35);
        assert_eq!(gaussian_binomial(3, 3, 1), 13);
    }

    #[test]
    fn gaussian_binomial_against_product_formula() {
        // Independent oracle: quotient of the product forms, exact in this
        // range.
        let oracle = |p: u64, n: usize, k: usize| -> u128 {
            let pw = |e: usize| (0..e).fold(1u128, |a, _| a * p as u128);
            let mut num = 1u128;
            let mut den = 1u128;
            for i in 0..k {
                num *= pw(n - i) - 1;
                den *= pw(i + 1) - 1;
            }
            num / den
        };
        for p in [2u64, 3, 5] {
            for n in 0..=8 {
                for k in 0..=n {
                    assert_eq!(gaussian_binomial(p, n, k), oracle(p, n, k), "p={p} n={n} k={k}");
                }
            }
        }
        assert_eq!(gaussian_binomial(2, 8, 4), 200_787);
        assert_eq!(gaussian_binomial(2, 9, 6), 788_035);
        assert_eq!(gaussian_binomial(2, 12, 8), 13_910_980_083);
        assert_eq!(gaussian_binomial(3, 6, 3), 33_880);
        // Saturation instead of overflow on absurd inputs.
        assert_eq!(gaussian_binomial(2, 4000, 2000), u128::MAX);
    }

    #[test]
    fn streaming_subspaces_match_count_without_materializing() {
        for &(p, n, k) in &[(2u64, 6usize, 3usize), (3, 4, 2), (2, 5, 0), (2, 5, 5)] {
            let mut seen = 0u128;
            for_each_subspace(p, n, k, &mut |m| {
                assert_eq!(m.rank(), k);
                seen += 1;
            });
            assert_eq!(seen, gaussian_binomial(p, n, k), "p={p} n={n} k={k}");
        }
    }

    #[test]
    fn row_span_membership() {
        let s = FpMatrix::from_rows(2, vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert!(in_row_span(&s, &[1, 1, 0]));
        assert!(in_row_span(&s, &[0, 0, 0]));
        assert!(!in_row_span(&s, &[0, 0, 1]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix(p: u64) -> impl Strategy<Value = FpMatrix> {
            (1usize..5, 1usize..5).prop_flat_map(move |(r, c)| {
                proptest::collection::vec(0u64..p, r * c).prop_map(move |data| {
                    let mut m = FpMatrix::zero(p, r, c);
                    for i in 0..r {
                        for j in 0..c {
                            m.set(i, j, data[i * c + j]);
                        }
                    }
                    m
                })
            })
        }

        proptest! {
            #[test]
            fn rank_nullity(m in arb_matrix(3)) {
                prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols);
            }

            #[test]
            fn kernel_vectors_are_killed(m in arb_matrix(5)) {
                for v in m.kernel_basis() {
                    prop_assert!(m.apply(&v).iter().all(|&x| x == 0));
                }
            }

            #[test]
            fn solve_of_image_succeeds(m in arb_matrix(3), x in proptest::collection::vec(0u64..3, 1..5)) {
                prop_assume!(x.len() == m.cols);
                let b = m.apply(&x);
                let got = m.solve(&b).expect("image point must be solvable");
                prop_assert_eq!(m.apply(&got), b);
            }

            #[test]
            fn rref_is_idempotent(m in arb_matrix(2)) {
                let r = m.rref();
                let r2 = r.mat.rref();
                prop_assert_eq!(&r.mat, &r2.mat);
                prop_assert_eq!(r.pivots, r2.pivots);
            }

            #[test]
            fn column_space_dim_is_rank(m in arb_matrix(5)) {
                prop_assert_eq!(m.column_space_basis().cols, m.rank());
            }
        }
    }
}

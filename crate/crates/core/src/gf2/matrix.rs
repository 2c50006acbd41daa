use std::collections::HashMap;

use super::BitVec;
use crate::error::{Error, Result};

/// Below this many columns rank is computed by dense packed elimination.
const DENSE_RANK_COLS: usize = 10_000;

/// Sparse matrix over GF(2), stored as the sorted support of each row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBinMatrix {
    rows: usize,
    cols: usize,
    row_support: Vec<Vec<usize>>,
}

impl SparseBinMatrix {
    /// All-zero `rows x cols` matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseBinMatrix {
            rows,
            cols,
            row_support: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseBinMatrix {
            rows: n,
            cols: n,
            row_support: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Builds a matrix from per-row column lists. Lists are sorted here;
    /// duplicates and out-of-range indices are rejected.
    pub fn from_row_support(cols: usize, mut row_support: Vec<Vec<usize>>) -> Result<Self> {
        for (r, row) in row_support.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "row {r} lists column {} twice",
                    w[0]
                )));
            }
            if let Some(&last) = row.last() {
                if last >= cols {
                    return Err(Error::Dimension(format!(
                        "row {r} has column index {last} but matrix has {cols} columns"
                    )));
                }
            }
        }
        Ok(SparseBinMatrix {
            rows: row_support.len(),
            cols,
            row_support,
        })
    }

    /// Trusted constructor for internal builders that already emit sorted rows.
    pub(crate) fn from_sorted_unchecked(cols: usize, row_support: Vec<Vec<usize>>) -> Self {
        debug_assert!(row_support
            .iter()
            .all(|r| r.windows(2).all(|w| w[0] < w[1]) && r.last().is_none_or(|&c| c < cols)));
        SparseBinMatrix {
            rows: row_support.len(),
            cols,
            row_support,
        }
    }

    pub fn from_dense(dense: &[Vec<u8>], cols: usize) -> Result<Self> {
        let mut support = Vec::with_capacity(dense.len());
        for (r, row) in dense.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "dense row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            support.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b != 0)
                    .map(|(c, _)| c)
                    .collect(),
            );
        }
        Ok(Self::from_sorted_unchecked(cols, support))
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.row_support
            .iter()
            .map(|row| {
                let mut d = vec![0u8; self.cols];
                for &c in row {
                    d[c] = 1;
                }
                d
            })
            .collect()
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_support[r]
    }

    pub fn row_supports(&self) -> &[Vec<usize>] {
        &self.row_support
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_support[r].binary_search(&c).is_ok()
    }

    /// Number of ones.
    pub fn nnz(&self) -> usize {
        self.row_support.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// Per-column sorted row lists.
    pub fn col_supports(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, row) in self.row_support.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        cols
    }

    pub fn transpose(&self) -> SparseBinMatrix {
        Self::from_sorted_unchecked(self.rows, self.col_supports())
    }

    /// Keeps rows `0..count`.
    pub fn top_rows(&self, count: usize) -> SparseBinMatrix {
        let count = count.min(self.rows);
        Self::from_sorted_unchecked(self.cols, self.row_support[..count].to_vec())
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &SparseBinMatrix) -> Result<SparseBinMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "vstack of {}x{} over {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut support = self.row_support.clone();
        support.extend(other.row_support.iter().cloned());
        Ok(Self::from_sorted_unchecked(self.cols, support))
    }

    /// Row permutation: row `i` of the result is row `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Result<SparseBinMatrix> {
        if order.len() != self.rows {
            return Err(Error::Dimension(format!(
                "row order has {} entries for {} rows",
                order.len(),
                self.rows
            )));
        }
        let mut seen = vec![false; self.rows];
        for &o in order {
            if o >= self.rows || std::mem::replace(&mut seen[o], true) {
                return Err(Error::InvalidParameter(
                    "row order is not a permutation".into(),
                ));
            }
        }
        Ok(Self::from_sorted_unchecked(
            self.cols,
            order.iter().map(|&o| self.row_support[o].clone()).collect(),
        ))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &SparseBinMatrix) -> SparseBinMatrix {
        let mut support = Vec::with_capacity(self.rows * other.rows);
        for a_row in &self.row_support {
            for b_row in &other.row_support {
                let mut row = Vec::with_capacity(a_row.len() * b_row.len());
                for &j in a_row {
                    row.extend(b_row.iter().map(|&v| j * other.cols + v));
                }
                support.push(row);
            }
        }
        Self::from_sorted_unchecked(self.cols * other.cols, support)
    }

    /// Column-wise Kronecker product. `blocks` is a `v x (width * self.cols)`
    /// matrix split into `self.cols` groups of `width` columns; group `i` of
    /// the result is column `i` of `self` times group `i` of `blocks`.
    pub fn vec_kron(&self, blocks: &SparseBinMatrix, width: usize) -> Result<SparseBinMatrix> {
        if blocks.cols != width * self.cols {
            return Err(Error::Dimension(format!(
                "vec_kron needs a right operand with {} x {} = {} columns, got a {}x{} matrix",
                width,
                self.cols,
                width * self.cols,
                blocks.rows,
                blocks.cols
            )));
        }
        let mut support = Vec::with_capacity(self.rows * blocks.rows);
        for a_row in &self.row_support {
            for b_row in &blocks.row_support {
                // b_row is sorted, so picking the entries that fall inside each
                // selected group keeps the result sorted.
                let mut row = Vec::new();
                let mut it = b_row.iter().peekable();
                for &j in a_row {
                    let lo = j * width;
                    let hi = lo + width;
                    while let Some(&&c) = it.peek() {
                        if c < lo {
                            it.next();
                        } else {
                            break;
                        }
                    }
                    while let Some(&&c) = it.peek() {
                        if c < hi {
                            row.push(c);
                            it.next();
                        } else {
                            break;
                        }
                    }
                }
                support.push(row);
            }
        }
        Ok(Self::from_sorted_unchecked(width * self.cols, support))
    }

    /// Fraction of entries equal to one.
    pub fn density(&self) -> Result<f64> {
        let (ones, total) = self.density_ratio()?;
        Ok(ones as f64 / total as f64)
    }

    /// Density as an exact `(ones, rows * cols)` pair.
    pub fn density_ratio(&self) -> Result<(u64, u64)> {
        if self.is_empty() {
            return Err(Error::InvalidParameter(
                "density of an empty matrix is undefined".into(),
            ));
        }
        Ok((self.nnz() as u64, self.rows as u64 * self.cols as u64))
    }

    /// GF(2) row rank.
    pub fn rank_gf2(&self) -> usize {
        if self.cols < DENSE_RANK_COLS {
            self.rank_dense()
        } else {
            self.rank_sparse()
        }
    }

    fn rank_dense(&self) -> usize {
        let words = self.cols.div_ceil(64);
        let mut m: Vec<Vec<u64>> = self
            .row_support
            .iter()
            .map(|row| {
                let mut w = vec![0u64; words];
                for &c in row {
                    w[c >> 6] |= 1 << (c & 63);
                }
                w
            })
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let (wi, bit) = (col >> 6, 1u64 << (col & 63));
            let Some(p) = (rank..m.len()).find(|&r| m[r][wi] & bit != 0) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[wi] & bit != 0 {
                    for (a, b) in row[wi..].iter_mut().zip(&pivot[wi..]) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// Echelon reduction keyed on each row's largest column. Parity-check
    /// matrices built from systematic components have distinct row maxima, so
    /// this stays sparse in practice.
    fn rank_sparse(&self) -> usize {
        let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
        for row in &self.row_support {
            let mut cur = row.clone();
            while let Some(&lead) = cur.last() {
                match pivots.get(&lead) {
                    Some(p) => cur = xor_sorted(&cur, p),
                    None => {
                        pivots.insert(lead, cur);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }

    /// `self * x` over GF(2).
    pub fn syndrome(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "syndrome of a vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut s = BitVec::zeros(self.rows);
        for (r, row) in self.row_support.iter().enumerate() {
            let parity = row.iter().fold(false, |acc, &c| acc ^ x.get(c));
            if parity {
                s.set(r, true);
            }
        }
        Ok(s)
    }

    /// True when every check is satisfied; stops at the first violated row.
    pub fn is_codeword(&self, x: &BitVec) -> Result<bool> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(self
            .row_support
            .iter()
            .all(|row| !row.iter().fold(false, |acc, &c| acc ^ x.get(c))))
    }
}

fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

use serde::{Deserialize, Serialize};

use super::SparseBinMatrix;
use crate::error::{Error, Result};

/// Array of `n_b` permutations of size `n_a`. Entry `perms[j][i]` is the
/// (0-based) column holding the one in row `i` of the `j`-th permutation
/// matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationArray {
    n_a: usize,
    perms: Vec<Vec<usize>>,
}

impl PermutationArray {
    pub fn new(n_a: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        for (j, p) in perms.iter().enumerate() {
            if p.len() != n_a {
                return Err(Error::InvalidPermutation(format!(
                    "permutation {j} has {} entries, block size is {n_a}",
                    p.len()
                )));
            }
            let mut seen = vec![false; n_a];
            for &c in p {
                if c >= n_a {
                    return Err(Error::InvalidPermutation(format!(
                        "permutation {j} has entry {} outside [1, {n_a}]",
                        c + 1
                    )));
                }
                if std::mem::replace(&mut seen[c], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "permutation {j} repeats entry {}",
                        c + 1
                    )));
                }
            }
        }
        Ok(PermutationArray { n_a, perms })
    }

    /// Builds from the 1-based notation `{pi_1, ..., pi_na}`.
    pub fn from_one_based(n_a: usize, perms: &[Vec<usize>]) -> Result<Self> {
        let zero = perms
            .iter()
            .enumerate()
            .map(|(j, p)| {
                p.iter()
                    .map(|&v| {
                        v.checked_sub(1).ok_or_else(|| {
                            Error::InvalidPermutation(format!("permutation {j} contains 0"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_a, zero)
    }

    pub fn identity(n_a: usize, n_b: usize) -> Self {
        PermutationArray {
            n_a,
            perms: vec![(0..n_a).collect(); n_b],
        }
    }

    /// Cyclic shifts: `pi_i^j = (i + shifts[j]) mod n_a`.
    pub fn circulant(n_a: usize, shifts: &[usize]) -> Self {
        PermutationArray {
            n_a,
            perms: shifts
                .iter()
                .map(|&s| (0..n_a).map(|i| (i + s) % n_a).collect())
                .collect(),
        }
    }

    pub fn block_size(&self) -> usize {
        self.n_a
    }

    pub fn count(&self) -> usize {
        self.perms.len()
    }

    pub fn perm(&self, j: usize) -> &[usize] {
        &self.perms[j]
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn inverse(&self, j: usize) -> Vec<usize> {
        let mut inv = vec![0; self.n_a];
        for (i, &c) in self.perms[j].iter().enumerate() {
            inv[c] = i;
        }
        inv
    }

    pub fn is_identity(&self) -> bool {
        self.perms
            .iter()
            .all(|p| p.iter().enumerate().all(|(i, &c)| i == c))
    }

    /// Shift of block `j` if it is circulant.
    pub fn circulant_shift(&self, j: usize) -> Option<usize> {
        let p = &self.perms[j];
        let s = *p.first()?;
        p.iter()
            .enumerate()
            .all(|(i, &c)| c == (i + s) % self.n_a)
            .then_some(s)
    }

    /// The `n_a x (n_a * n_b)` matrix `[P_1 | ... | P_nb]`.
    pub fn to_block_row(&self) -> SparseBinMatrix {
        let n_a = self.n_a;
        let rows = (0..n_a)
            .map(|i| {
                self.perms
                    .iter()
                    .enumerate()
                    .map(|(j, p)| j * n_a + p[i])
                    .collect()
            })
            .collect();
        SparseBinMatrix::from_sorted_unchecked(n_a * self.perms.len(), rows)
    }

    pub fn to_json(&self, meta: Option<serde_json::Value>) -> Result<String> {
        let file = PermutationFile {
            n_a: self.n_a,
            perms: self
                .perms
                .iter()
                .map(|p| p.iter().map(|c| c + 1).collect())
                .collect(),
            meta,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PermutationFile = serde_json::from_str(text)?;
        Self::from_one_based(file.n_a, &file.perms)
    }
}

#[derive(Serialize, Deserialize)]
struct PermutationFile {
    n_a: usize,
    perms: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<serde_json::Value>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_range() {
        assert!(PermutationArray::from_one_based(3, &[vec![1, 1, 2]]).is_err());
        assert!(PermutationArray::from_one_based(3, &[vec![1, 2, 4]]).is_err());
        assert!(PermutationArray::from_one_based(3, &[vec![0, 1, 2]]).is_err());
        assert!(PermutationArray::from_one_based(3, &[vec![1, 2]]).is_err());
    }

    #[test]
    fn json_is_one_based() {
        let p = PermutationArray::from_one_based(4, &[vec![1, 2, 3, 4], vec![2, 1, 3, 4]]).unwrap();
        assert_eq!(p.perm(1), &[1, 0, 2, 3]);
        let text = p.to_json(None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["n_a"], 4);
        assert_eq!(v["perms"][1], serde_json::json!([2, 1, 3, 4]));
        assert_eq!(PermutationArray::from_json(&text).unwrap(), p);
    }

    #[test]
    fn circulant_shift_detection() {
        let p = PermutationArray::circulant(5, &[0, 3]);
        assert_eq!(p.perm(1), &[3, 4, 0, 1, 2]);
        assert_eq!(p.circulant_shift(1), Some(3));
        let q = PermutationArray::from_one_based(3, &[vec![2, 1, 3]]).unwrap();
        assert_eq!(q.circulant_shift(0), None);
    }

    #[test]
    fn block_row_layout() {
        let p = PermutationArray::from_one_based(2, &[vec![2, 1], vec![1, 2]]).unwrap();
        let m = p.to_block_row();
        assert_eq!(m.to_dense(), vec![vec![0, 1, 1, 0], vec![1, 0, 0, 1]]);
    }
}

//! Direct and column-interleaved product codes.
//!
//! The codeword is the `n_b x n_a` encoding matrix read row by row. Row `m`
//! holds a row-code word in its original (pre-interleaving) column order;
//! column code `q` protects the bits at columns `pi_q^m` of every row `m`.

use crate::code::BlockCode;
use crate::component::ComponentCode;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, PermutationArray, SparseBinMatrix};

#[derive(Clone, Debug)]
pub struct ProductCode {
    comp_a: ComponentCode,
    comp_b: ComponentCode,
    interleaver: Option<PermutationArray>,
    h: SparseBinMatrix,
}

/// Direct product code with the full-rank parity-check matrix
/// `[I_kb ⊗ H_a ; H_b ⊗ I_na]`.
pub fn build_hp(a: &ComponentCode, b: &ComponentCode) -> ProductCode {
    let hp1 = reduced_row_part(a, b);
    let hp2 = b.parity_check().kron(&SparseBinMatrix::identity(a.n()));
    ProductCode {
        comp_a: a.clone(),
        comp_b: b.clone(),
        interleaver: None,
        h: hp1.vstack(&hp2).expect("both parts have n_a * n_b columns"),
    }
}

/// Column-interleaved product code: the column part becomes `H_b ⊗̄ P̄`.
pub fn build_hp_interleaved(
    a: &ComponentCode,
    b: &ComponentCode,
    perms: &PermutationArray,
) -> Result<ProductCode> {
    check_interleaver(a, b, perms)?;
    let hp1 = reduced_row_part(a, b);
    let hp2 = column_part(b, perms)?;
    Ok(ProductCode {
        comp_a: a.clone(),
        comp_b: b.clone(),
        interleaver: Some(perms.clone()),
        h: hp1.vstack(&hp2)?,
    })
}

/// `[I_nb ⊗ H_a ; H_b ⊗̄ P̄]` before dropping the last `r_a * r_b` rows.
pub fn unreduced_hp(
    a: &ComponentCode,
    b: &ComponentCode,
    perms: Option<&PermutationArray>,
) -> Result<SparseBinMatrix> {
    let hp1 = SparseBinMatrix::identity(b.n()).kron(a.parity_check());
    let hp2 = match perms {
        Some(p) => {
            check_interleaver(a, b, p)?;
            column_part(b, p)?
        }
        None => b.parity_check().kron(&SparseBinMatrix::identity(a.n())),
    };
    hp1.vstack(&hp2)
}

/// `H_b ⊗̄ P̄`.
pub(crate) fn column_part(b: &ComponentCode, perms: &PermutationArray) -> Result<SparseBinMatrix> {
    b.parity_check()
        .vec_kron(&perms.to_block_row(), perms.block_size())
}

/// `I_kb ⊗ H_a`: the row part with its last `r_a * r_b` rows removed.
pub(crate) fn reduced_row_part(a: &ComponentCode, b: &ComponentCode) -> SparseBinMatrix {
    let full = SparseBinMatrix::identity(b.k()).kron(a.parity_check());
    SparseBinMatrix::from_sorted_unchecked(a.n() * b.n(), full.row_supports().to_vec())
}

fn check_interleaver(a: &ComponentCode, b: &ComponentCode, p: &PermutationArray) -> Result<()> {
    if p.block_size() != a.n() || p.count() != b.n() {
        return Err(Error::Dimension(format!(
            "interleaver has {} permutations of size {}, product needs {} of size {}",
            p.count(),
            p.block_size(),
            b.n(),
            a.n()
        )));
    }
    Ok(())
}

impl ProductCode {
    pub fn comp_a(&self) -> &ComponentCode {
        &self.comp_a
    }

    pub fn comp_b(&self) -> &ComponentCode {
        &self.comp_b
    }

    pub fn interleaver(&self) -> Option<&PermutationArray> {
        self.interleaver.as_ref()
    }

    pub fn h(&self) -> &SparseBinMatrix {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.comp_a.n() * self.comp_b.n()
    }

    pub fn k(&self) -> usize {
        self.comp_a.k() * self.comp_b.k()
    }

    /// Product of the component distances, given those distances.
    pub fn designed_distance(d_a: usize, d_b: usize) -> usize {
        d_a * d_b
    }

    /// Encodes a `k_b x k_a` information block given row by row: row
    /// encoding, interleaving of each row, column encoding over all `n_a`
    /// columns.
    pub fn encode(&self, info: &BitVec) -> Result<BitVec> {
        let (n_a, k_a, k_b, n_b) = (
            self.comp_a.n(),
            self.comp_a.k(),
            self.comp_b.k(),
            self.comp_b.n(),
        );
        if info.len() != k_a * k_b {
            return Err(Error::Dimension(format!(
                "product code expects a {k_b}x{k_a} information block ({} bits), got {}",
                k_a * k_b,
                info.len()
            )));
        }
        let mut cw = BitVec::zeros(n_a * n_b);
        for i in info.ones() {
            let (m, c) = (i / k_a, i % k_a);
            cw.set(m * n_a + c, true);
        }
        let mut row = BitVec::zeros(n_a);
        for m in 0..k_b {
            let base = m * n_a;
            for c in 0..n_a {
                row.set(c, c < k_a && cw.get(base + c));
            }
            self.comp_a.fill_parity(&mut row);
            for c in k_a..n_a {
                cw.set(base + c, row.get(c));
            }
        }
        let perms = self.interleaver.as_ref();
        let mut col = BitVec::zeros(n_b);
        for q in 0..n_a {
            // Position of column q's bit within codeword row m.
            let pos = |m: usize| m * n_a + perms.map_or(q, |p| p.perm(m)[q]);
            for m in 0..n_b {
                col.set(m, m < k_b && cw.get(pos(m)));
            }
            self.comp_b.fill_parity(&mut col);
            for m in k_b..n_b {
                cw.set(pos(m), col.get(m));
            }
        }
        Ok(cw)
    }

    pub fn info_positions(&self) -> Vec<usize> {
        let (n_a, k_a) = (self.comp_a.n(), self.comp_a.k());
        (0..self.comp_b.k())
            .flat_map(|m| (0..k_a).map(move |c| m * n_a + c))
            .collect()
    }
}

impl BlockCode for ProductCode {
    fn n(&self) -> usize {
        ProductCode::n(self)
    }

    fn k(&self) -> usize {
        ProductCode::k(self)
    }

    fn parity_check(&self) -> &SparseBinMatrix {
        &self.h
    }

    fn encode(&self, info: &BitVec) -> Result<BitVec> {
        ProductCode::encode(self, info)
    }

    fn info_positions(&self) -> Vec<usize> {
        ProductCode::info_positions(self)
    }
}

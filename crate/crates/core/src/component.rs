//! Systematic component codes with lower-triangular parity-check matrices:
//! single parity-check (SPC) codes and serially concatenated multiple
//! parity-check (M-SC-MPC) codes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{BitVec, SparseBinMatrix};

/// An `(n, k)` systematic code whose parity-check row `i` ends at column
/// `k + i`, so parity bits follow by back-substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCode {
    n: usize,
    k: usize,
    h: SparseBinMatrix,
    label: String,
}

impl ComponentCode {
    /// Wraps an arbitrary lower-triangular systematic parity-check matrix.
    pub fn from_parity_check(
        k: usize,
        h: SparseBinMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        let n = h.cols();
        if k + h.rows() != n {
            return Err(Error::Dimension(format!(
                "{}x{} parity-check matrix cannot describe a code of dimension {k}",
                h.rows(),
                n
            )));
        }
        for i in 0..h.rows() {
            if h.row(i).last() != Some(&(k + i)) {
                return Err(Error::InvalidParameter(format!(
                    "row {i} must end at column {} for systematic back-substitution",
                    k + i
                )));
            }
        }
        Ok(ComponentCode {
            n,
            k,
            h,
            label: label.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.n - self.k
    }

    pub fn parity_check(&self) -> &SparseBinMatrix {
        &self.h
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn encode_systematic(&self, info: &BitVec) -> Result<BitVec> {
        if info.len() != self.k {
            return Err(Error::Dimension(format!(
                "{} expects {} information bits, got {}",
                self.label,
                self.k,
                info.len()
            )));
        }
        let mut out = BitVec::zeros(self.n);
        for i in info.ones() {
            out.set(i, true);
        }
        self.fill_parity(&mut out);
        Ok(out)
    }

    /// Back-substitutes parity bits into `word`, whose first `k` entries hold
    /// the information and whose parity positions are zero.
    pub(crate) fn fill_parity(&self, word: &mut BitVec) {
        for i in 0..self.h.rows() {
            let row = self.h.row(i);
            let p = row[..row.len() - 1]
                .iter()
                .fold(false, |acc, &c| acc ^ word.get(c));
            word.set(self.k + i, p);
        }
    }
}

/// `(k + 1, k)` single parity-check code.
pub fn build_spc(k: usize) -> Result<ComponentCode> {
    if k == 0 {
        return Err(Error::InvalidParameter("SPC code needs k >= 1".into()));
    }
    let h = SparseBinMatrix::from_sorted_unchecked(k + 1, vec![(0..=k).collect()]);
    ComponentCode::from_parity_check(k, h, format!("spc:{k}"))
}

/// M-SC-MPC code: stage `j` reads the `L_j` bits produced so far and appends
/// `r_j` parity bits, parity `p` covering the input positions `t` with
/// `t mod r_j == p`; it sits at column `L_j + p`.
pub fn build_mscmpc(k: usize, r_list: &[usize]) -> Result<ComponentCode> {
    if k == 0 {
        return Err(Error::InvalidParameter("M-SC-MPC code needs k >= 1".into()));
    }
    if r_list.is_empty() {
        return Err(Error::InvalidParameter(
            "M-SC-MPC code needs at least one stage".into(),
        ));
    }
    if let Some(&r) = r_list.iter().find(|&&r| r < 2) {
        return Err(Error::InvalidParameter(format!(
            "stage redundancy {r} is below 2"
        )));
    }
    for (i, &a) in r_list.iter().enumerate() {
        if r_list[i + 1..].contains(&a) {
            return Err(Error::InvalidParameter(format!(
                "duplicate stage redundancy {a}: repeated moduli create length-4 cycles"
            )));
        }
    }

    let n = k + r_list.iter().sum::<usize>();
    let mut rows = Vec::with_capacity(n - k);
    let mut len = k;
    for &r in r_list {
        for p in 0..r {
            let mut row: Vec<usize> = (p..len).step_by(r).collect();
            row.push(len + p);
            rows.push(row);
        }
        len += r;
    }
    let h = SparseBinMatrix::from_sorted_unchecked(n, rows);
    let stages = r_list
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",");
    ComponentCode::from_parity_check(k, h, format!("mscmpc:{k}:{stages}"))
}

/// Textual component description: `spc:k` or `mscmpc:k:r1,r2,...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentSpec {
    Spc { k: usize },
    MscMpc { k: usize, r: Vec<usize> },
}

impl ComponentSpec {
    pub fn build(&self) -> Result<ComponentCode> {
        match self {
            ComponentSpec::Spc { k } => build_spc(*k),
            ComponentSpec::MscMpc { k, r } => build_mscmpc(*k, r),
        }
    }
}

impl FromStr for ComponentSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Parse(format!(
                "component '{s}' must be 'spc:k' or 'mscmpc:k:r1,r2,...'"
            ))
        };
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["spc", k] => Ok(ComponentSpec::Spc { k: num(k)? }),
            ["mscmpc", k, r] => Ok(ComponentSpec::MscMpc {
                k: num(k)?,
                r: r.split(',').map(num).collect::<Result<_>>()?,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ComponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentSpec::Spc { k } => write!(f, "spc:{k}"),
            ComponentSpec::MscMpc { k, r } => {
                let r: Vec<String> = r.iter().map(ToString::to_string).collect();
                write!(f, "mscmpc:{k}:{}", r.join(","))
            }
        }
    }
}

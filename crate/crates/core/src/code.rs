//! The view of a linear block code shared by the analysis and simulation
//! layers.

use crate::component::ComponentCode;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, SparseBinMatrix};

pub trait BlockCode: Send + Sync {
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    fn parity_check(&self) -> &SparseBinMatrix;
    fn encode(&self, info: &BitVec) -> Result<BitVec>;
    /// Codeword positions carrying the information bits, in input order.
    fn info_positions(&self) -> Vec<usize>;

    fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }
}

impl BlockCode for ComponentCode {
    fn n(&self) -> usize {
        ComponentCode::n(self)
    }

    fn k(&self) -> usize {
        ComponentCode::k(self)
    }

    fn parity_check(&self) -> &SparseBinMatrix {
        ComponentCode::parity_check(self)
    }

    fn encode(&self, info: &BitVec) -> Result<BitVec> {
        self.encode_systematic(info)
    }

    fn info_positions(&self) -> Vec<usize> {
        (0..ComponentCode::k(self)).collect()
    }
}

/// Rate-1 pass-through with an empty parity-check matrix, for uncoded
/// reference runs.
#[derive(Clone, Debug)]
pub struct Uncoded {
    h: SparseBinMatrix,
}

impl Uncoded {
    pub fn new(n: usize) -> Self {
        Uncoded {
            h: SparseBinMatrix::zeros(0, n),
        }
    }
}

impl BlockCode for Uncoded {
    fn n(&self) -> usize {
        self.h.cols()
    }

    fn k(&self) -> usize {
        self.h.cols()
    }

    fn parity_check(&self) -> &SparseBinMatrix {
        &self.h
    }

    fn encode(&self, info: &BitVec) -> Result<BitVec> {
        if info.len() != self.h.cols() {
            return Err(Error::Dimension(format!(
                "uncoded frame of {} bits given {}",
                self.h.cols(),
                info.len()
            )));
        }
        Ok(info.clone())
    }

    fn info_positions(&self) -> Vec<usize> {
        (0..self.h.cols()).collect()
    }
}

//! Flooding sum-product decoding in the log-likelihood domain.
//!
//! LLR convention: positive values favour bit 0.

use crate::error::{Error, Result};
use crate::gf2::{BitVec, SparseBinMatrix};

/// Magnitude cap applied to variable-to-check messages before `tanh`.
pub const LLR_CLAMP: f64 = 30.0;

/// Iteration cap used when none is given.
pub const DEFAULT_MAX_ITER: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub hard_bits: BitVec,
    pub iterations_used: usize,
    /// Zero syndrome reached.
    pub converged: bool,
}

/// Edge layout of a parity-check matrix, prepared once and shared by any
/// number of concurrent decodes.
#[derive(Clone, Debug)]
pub struct SpaDecoder {
    n: usize,
    /// Edges of check `c` are `check_start[c]..check_start[c + 1]`.
    check_start: Vec<usize>,
    edge_var: Vec<u32>,
    var_start: Vec<usize>,
    /// Edge ids of variable `v` are `var_edges[var_start[v]..var_start[v + 1]]`.
    var_edges: Vec<u32>,
}

/// Per-thread message buffers.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    tanh: Vec<f64>,
    hard: Vec<bool>,
}

impl SpaDecoder {
    pub fn new(h: &SparseBinMatrix) -> Self {
        let n = h.cols();
        let mut check_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        check_start.push(0);
        for row in h.row_supports() {
            edge_var.extend(row.iter().map(|&v| v as u32));
            check_start.push(edge_var.len());
        }
        let mut degree = vec![0usize; n + 1];
        for &v in &edge_var {
            degree[v as usize + 1] += 1;
        }
        let mut var_start = degree;
        for v in 0..n {
            var_start[v + 1] += var_start[v];
        }
        let mut fill = var_start.clone();
        let mut var_edges = vec![0u32; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v as usize]] = e as u32;
            fill[v as usize] += 1;
        }
        SpaDecoder {
            n,
            check_start,
            edge_var,
            var_start,
            var_edges,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn checks(&self) -> usize {
        self.check_start.len() - 1
    }

    pub fn decode(&self, llr: &[f64], max_iter: usize) -> Result<DecodeResult> {
        self.decode_with(llr, max_iter, &mut Workspace::default())
    }

    pub fn decode_with(
        &self,
        llr: &[f64],
        max_iter: usize,
        ws: &mut Workspace,
    ) -> Result<DecodeResult> {
        if llr.len() != self.n {
            return Err(Error::Dimension(format!(
                "decoder expects {} LLRs, got {}",
                self.n,
                llr.len()
            )));
        }
        if max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        if let Some(i) = llr.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "channel LLR {i} is not finite ({})",
                llr[i]
            )));
        }

        let edges = self.edge_var.len();
        ws.v2c.clear();
        ws.v2c
            .extend(self.edge_var.iter().map(|&v| llr[v as usize]));
        ws.c2v.clear();
        ws.c2v.resize(edges, 0.0);
        ws.hard.clear();
        ws.hard.extend(llr.iter().map(|&x| x < 0.0));

        if self.checks() == 0 {
            return Ok(DecodeResult {
                hard_bits: BitVec::from_bools(&ws.hard),
                iterations_used: 0,
                converged: true,
            });
        }

        let mut converged = false;
        let mut iterations = 0;
        for _ in 0..max_iter {
            iterations += 1;
            self.check_update(ws);
            self.variable_update(llr, ws);
            if self.syndrome_is_zero(&ws.hard) {
                converged = true;
                break;
            }
        }
        Ok(DecodeResult {
            hard_bits: BitVec::from_bools(&ws.hard),
            iterations_used: iterations,
            converged,
        })
    }

    /// Tanh rule with leave-one-out products from prefix and suffix passes.
    fn check_update(&self, ws: &mut Workspace) {
        for c in 0..self.checks() {
            let (lo, hi) = (self.check_start[c], self.check_start[c + 1]);
            let deg = hi - lo;
            if deg == 0 {
                continue;
            }
            if deg == 1 {
                ws.c2v[lo] = 0.0;
                continue;
            }
            ws.tanh.clear();
            ws.tanh.extend(
                ws.v2c[lo..hi]
                    .iter()
                    .map(|&m| (0.5 * m.clamp(-LLR_CLAMP, LLR_CLAMP)).tanh()),
            );
            // Forward prefix products go straight into c2v, then a backward
            // sweep multiplies in the suffix.
            let mut acc = 1.0;
            for k in 0..deg {
                ws.c2v[lo + k] = acc;
                acc *= ws.tanh[k];
            }
            let mut acc = 1.0;
            for k in (0..deg).rev() {
                let p = ws.c2v[lo + k] * acc;
                ws.c2v[lo + k] = 2.0 * p.atanh();
                acc *= ws.tanh[k];
            }
        }
    }

    fn variable_update(&self, llr: &[f64], ws: &mut Workspace) {
        for (v, &l) in llr.iter().enumerate().take(self.n) {
            let ids = &self.var_edges[self.var_start[v]..self.var_start[v + 1]];
            let total = l + ids.iter().map(|&e| ws.c2v[e as usize]).sum::<f64>();
            for &e in ids {
                ws.v2c[e as usize] = total - ws.c2v[e as usize];
            }
            ws.hard[v] = total < 0.0;
        }
    }

    fn syndrome_is_zero(&self, hard: &[bool]) -> bool {
        (0..self.checks()).all(|c| {
            !self.edge_var[self.check_start[c]..self.check_start[c + 1]]
                .iter()
                .fold(false, |acc, &v| acc ^ hard[v as usize])
        })
    }
}

/// One-shot decode against `h`.
pub fn spa_decode(
    h: &SparseBinMatrix,
    channel_llr: &[f64],
    max_iter: usize,
) -> Result<DecodeResult> {
    SpaDecoder::new(h).decode(channel_llr, max_iter)
}

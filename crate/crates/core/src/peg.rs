//! Tanner-graph girth measurement and the two progressive-edge-growth
//! designers for the column interleaver (circulant and generic blocks).

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::component::ComponentCode;
use crate::gf2::{PermutationArray, SparseBinMatrix};
use crate::product::reduced_row_part;

const UNSEEN: u32 = u32::MAX;

/// Shortest-cycle statistics of a Tanner graph. `None` means no cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthReport {
    pub global_girth: Option<usize>,
    pub per_variable: Vec<Option<usize>>,
    /// Number of variable nodes per local girth; acyclic variables are not
    /// counted.
    pub histogram: BTreeMap<usize, usize>,
}

impl GirthReport {
    /// Number of variable nodes lying on no cycle.
    pub fn acyclic_variables(&self) -> usize {
        self.per_variable.iter().filter(|g| g.is_none()).count()
    }

    /// `true` when the girth is at least `bound` (an acyclic graph passes).
    pub fn at_least(&self, bound: Option<usize>) -> bool {
        match (self.global_girth, bound) {
            (_, None) => self.global_girth.is_none(),
            (None, Some(_)) => true,
            (Some(g), Some(b)) => g >= b,
        }
    }
}

/// `min{g_a, g_b, 8}`, with `None` standing for an infinite girth.
pub fn product_girth_bound(g_a: Option<usize>, g_b: Option<usize>) -> usize {
    [g_a, g_b, Some(8)].into_iter().flatten().min().unwrap_or(8)
}

/// Bipartite graph with variables `0..n` followed by checks.
#[derive(Clone, Debug)]
pub(crate) struct TannerGraph {
    vars: usize,
    adj: Vec<Vec<u32>>,
    scratch: BfsScratch,
}

#[derive(Clone, Debug, Default)]
struct BfsScratch {
    stamp: Vec<u32>,
    epoch: u32,
    dist: Vec<u32>,
    branch: Vec<u32>,
    parent: Vec<u32>,
    mark: Vec<u32>,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl BfsScratch {
    fn reset(&mut self, nodes: usize) {
        if self.stamp.len() != nodes {
            self.stamp = vec![0; nodes];
            self.dist = vec![0; nodes];
            self.branch = vec![0; nodes];
            self.parent = vec![0; nodes];
            self.mark = vec![0; nodes];
            self.epoch = 0;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.mark.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.frontier.clear();
        self.next.clear();
    }

    #[inline]
    fn seen(&self, x: u32) -> bool {
        self.stamp[x as usize] == self.epoch
    }

    #[inline]
    fn visit(&mut self, x: u32, dist: u32, branch: u32, parent: u32) {
        let i = x as usize;
        self.stamp[i] = self.epoch;
        self.dist[i] = dist;
        self.branch[i] = branch;
        self.parent[i] = parent;
    }
}

impl TannerGraph {
    pub(crate) fn from_matrix(h: &SparseBinMatrix) -> Self {
        let vars = h.cols();
        let mut adj = vec![Vec::new(); vars + h.rows()];
        for (r, row) in h.row_supports().iter().enumerate() {
            let c = (vars + r) as u32;
            for &v in row {
                adj[v].push(c);
                adj[c as usize].push(v as u32);
            }
        }
        TannerGraph {
            vars,
            adj,
            scratch: BfsScratch::default(),
        }
    }

    fn with_extra_checks(h: &SparseBinMatrix, extra: usize) -> Self {
        let mut g = Self::from_matrix(h);
        g.adj.resize(g.adj.len() + extra, Vec::new());
        g
    }

    fn add_edge(&mut self, var: usize, check: usize) {
        self.adj[var].push(check as u32);
        self.adj[check].push(var as u32);
    }

    /// Removes the most recently added edge between `var` and `check`.
    fn pop_edge(&mut self, var: usize, check: usize) {
        let a = self.adj[var].pop();
        let b = self.adj[check].pop();
        debug_assert_eq!((a, b), (Some(check as u32), Some(var as u32)));
    }

    /// Length of the shortest cycle through `start`, or `None`. Search stops
    /// once cycles would exceed `max_len`.
    pub(crate) fn shortest_cycle_through(&mut self, start: usize, max_len: usize) -> Option<usize> {
        self.shortest_cycle_filtered(start, max_len, |_| true)
    }

    /// Shortest cycle through `start` whose two arms leave `start` along
    /// edges to neighbours not both rejected by `counts`.
    fn shortest_cycle_filtered<F: Fn(u32) -> bool>(
        &mut self,
        start: usize,
        max_len: usize,
        counts: F,
    ) -> Option<usize> {
        let s = &mut self.scratch;
        s.reset(self.adj.len());
        let start = start as u32;
        s.visit(start, 0, UNSEEN, UNSEEN);
        s.frontier.push(start);
        let mut level = 0u32;
        while !s.frontier.is_empty() {
            // Every cycle closed while expanding this level has length 2 * level + 2.
            if 2 * level as usize + 2 > max_len {
                return None;
            }
            let frontier = std::mem::take(&mut s.frontier);
            for &x in &frontier {
                let bx = s.branch[x as usize];
                let px = s.parent[x as usize];
                for &y in &self.adj[x as usize] {
                    if y == px {
                        continue;
                    }
                    if !s.seen(y) {
                        let by = if x == start { y } else { bx };
                        s.visit(y, level + 1, by, x);
                        s.next.push(y);
                    } else {
                        let by = s.branch[y as usize];
                        if by != bx && by != UNSEEN && (counts(bx) || counts(by)) {
                            let len = (s.dist[x as usize] + s.dist[y as usize] + 1) as usize;
                            s.frontier = frontier;
                            return Some(len);
                        }
                    }
                }
            }
            s.frontier = frontier;
            s.frontier.clear();
            std::mem::swap(&mut s.frontier, &mut s.next);
            level += 1;
        }
        None
    }

    /// Multi-source BFS from `sources`; returns the distance to each of
    /// `targets` (`None` if unreachable). Stops once all targets are reached.
    fn distances_to(&mut self, sources: &[usize], targets: &[usize], out: &mut Vec<Option<u32>>) {
        let s = &mut self.scratch;
        s.reset(self.adj.len());
        for &src in sources {
            if !s.seen(src as u32) {
                s.visit(src as u32, 0, 0, UNSEEN);
                s.frontier.push(src as u32);
            }
        }
        let mut remaining = targets.len();
        for &t in targets {
            s.mark[t] = s.epoch;
            if s.seen(t as u32) {
                remaining -= 1;
            }
        }
        let mut level = 0u32;
        while !s.frontier.is_empty() && remaining > 0 {
            for fi in 0..s.frontier.len() {
                let x = s.frontier[fi];
                for &y in &self.adj[x as usize] {
                    if !s.seen(y) {
                        s.visit_dist(y, level + 1);
                        s.next.push(y);
                        if s.mark[y as usize] == s.epoch {
                            remaining -= 1;
                        }
                    }
                }
            }
            s.frontier.clear();
            std::mem::swap(&mut s.frontier, &mut s.next);
            level += 1;
        }
        out.clear();
        out.extend(targets.iter().map(|&t| s.seen(t as u32).then(|| s.dist[t])));
    }
}

impl BfsScratch {
    #[inline]
    fn visit_dist(&mut self, x: u32, dist: u32) {
        let i = x as usize;
        self.stamp[i] = self.epoch;
        self.dist[i] = dist;
    }
}

/// Per-variable shortest cycle lengths of the Tanner graph of `h`.
pub fn local_girth(h: &SparseBinMatrix) -> GirthReport {
    let mut g = TannerGraph::from_matrix(h);
    let per_variable: Vec<Option<usize>> = (0..g.vars)
        .map(|v| g.shortest_cycle_through(v, usize::MAX))
        .collect();
    let mut histogram = BTreeMap::new();
    for l in per_variable.iter().flatten() {
        *histogram.entry(*l).or_insert(0) += 1;
    }
    GirthReport {
        global_girth: per_variable.iter().flatten().min().copied(),
        per_variable,
        histogram,
    }
}

/// Girth of a component code's parity-check matrix (`None` if acyclic).
pub fn component_girth(code: &ComponentCode) -> Option<usize> {
    local_girth(code.parity_check()).global_girth
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PegVariant {
    Circulant,
    Generic,
}

impl std::str::FromStr for PegVariant {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "circulant" => Ok(PegVariant::Circulant),
            "generic" => Ok(PegVariant::Generic),
            _ => Err(crate::Error::Parse(format!(
                "PEG variant '{s}' must be 'circulant' or 'generic'"
            ))),
        }
    }
}

impl std::fmt::Display for PegVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PegVariant::Circulant => "circulant",
            PegVariant::Generic => "generic",
        })
    }
}

pub fn design(
    variant: PegVariant,
    a: &ComponentCode,
    b: &ComponentCode,
    seed: u64,
) -> PermutationArray {
    match variant {
        PegVariant::Circulant => design_circulant(a, b, seed),
        PegVariant::Generic => design_generic(a, b, seed),
    }
}

/// Partially built interleaved product graph: the row part is fixed, the
/// column part `H_b ⊗̄ P̄` is grown one block column at a time.
struct Builder {
    graph: TannerGraph,
    n_a: usize,
    /// Index of the first column-part check node.
    p2_base: usize,
    /// Rows of `H_b` holding a one in each column.
    hb_cols: Vec<Vec<usize>>,
}

impl Builder {
    fn new(a: &ComponentCode, b: &ComponentCode) -> Self {
        let hp1 = reduced_row_part(a, b);
        let r_b = b.r();
        let n_a = a.n();
        let graph = TannerGraph::with_extra_checks(&hp1, r_b * n_a);
        Builder {
            p2_base: hp1.cols() + hp1.rows(),
            graph,
            n_a,
            hb_cols: b.parity_check().col_supports(),
        }
    }

    #[inline]
    fn var(&self, block: usize, col: usize) -> usize {
        block * self.n_a + col
    }

    /// Check node of row `u` in copy `copy` of `H_b`.
    #[inline]
    fn check(&self, u: usize, copy: usize) -> usize {
        self.p2_base + u * self.n_a + copy
    }

    /// Connect copy `copy` of `H_b` to column `col` of block `block`.
    fn connect(&mut self, block: usize, copy: usize, col: usize) {
        let v = self.var(block, col);
        for ui in 0..self.hb_cols[block].len() {
            let c = self.check(self.hb_cols[block][ui], copy);
            self.graph.add_edge(v, c);
        }
    }

    fn disconnect(&mut self, block: usize, copy: usize, col: usize) {
        let v = self.var(block, col);
        for ui in (0..self.hb_cols[block].len()).rev() {
            let c = self.check(self.hb_cols[block][ui], copy);
            self.graph.pop_edge(v, c);
        }
    }
}

/// Picks uniformly among the entries of `items` whose key is maximal.
fn pick_best<K: Ord + Copy, T: Copy>(items: &[(K, T)], rng: &mut impl Rng) -> T {
    let best = items
        .iter()
        .map(|(k, _)| *k)
        .max()
        .expect("nonempty candidate set");
    let ties: Vec<T> = items
        .iter()
        .filter(|(k, _)| *k == best)
        .map(|(_, t)| *t)
        .collect();
    ties[rng.random_range(0..ties.len())]
}

/// Generic-permutation PEG: every entry `pi_i^j` is chosen separately, taking
/// the unused column whose variable node lies farthest from the checks of
/// copy `i`.
pub fn design_generic(a: &ComponentCode, b: &ComponentCode, seed: u64) -> PermutationArray {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bld = Builder::new(a, b);
    let (n_a, n_b) = (a.n(), b.n());
    let mut perms = Vec::with_capacity(n_b);
    let mut dist = Vec::new();
    for j in 0..n_b {
        let mut perm = vec![0usize; n_a];
        if bld.hb_cols[j].is_empty() {
            perm = (0..n_a).collect();
            perm.shuffle(&mut rng);
            perms.push(perm);
            continue;
        }
        let mut free: Vec<usize> = (0..n_a).collect();
        for (i, slot) in perm.iter_mut().enumerate() {
            let sources: Vec<usize> = bld.hb_cols[j].iter().map(|&u| bld.check(u, i)).collect();
            let targets: Vec<usize> = free.iter().map(|&c| bld.var(j, c)).collect();
            bld.graph.distances_to(&sources, &targets, &mut dist);
            // Unreachable ranks above any finite distance.
            let scored: Vec<(u32, usize)> = dist
                .iter()
                .zip(0..free.len())
                .map(|(d, idx)| (d.unwrap_or(UNSEEN), idx))
                .collect();
            let idx = pick_best(&scored, &mut rng);
            let col = free.swap_remove(idx);
            *slot = col;
            bld.connect(j, i, col);
        }
        perms.push(perm);
    }
    PermutationArray::new(n_a, perms).expect("designer emits bijections")
}

/// Circulant PEG: block `j` is a cyclic shift chosen among all `n_a` shifts,
/// maximizing the shortest cycle through the block's new edges and, among
/// equals, minimizing how many of the block's variables sit on such a cycle.
pub fn design_circulant(a: &ComponentCode, b: &ComponentCode, seed: u64) -> PermutationArray {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bld = Builder::new(a, b);
    let (n_a, n_b) = (a.n(), b.n());
    let mut shifts = Vec::with_capacity(n_b);
    for j in 0..n_b {
        if bld.hb_cols[j].is_empty() {
            shifts.push(rng.random_range(0..n_a));
            continue;
        }
        // Score: (shortest cycle, -count at that length); larger is better.
        let mut best: Option<(usize, i64)> = None;
        let mut scored: Vec<((usize, i64), usize)> = Vec::with_capacity(n_a);
        let mut order: Vec<usize> = (0..n_a).collect();
        order.shuffle(&mut rng);
        for &s in &order {
            for i in 0..n_a {
                bld.connect(j, i, (i + s) % n_a);
            }
            let score = score_block(&mut bld, j, best);
            for i in (0..n_a).rev() {
                bld.disconnect(j, i, (i + s) % n_a);
            }
            if let Some(sc) = score {
                if best.is_none_or(|b| sc > b) {
                    best = Some(sc);
                }
                scored.push((sc, s));
            }
        }
        let s = pick_best(&scored, &mut rng);
        for i in 0..n_a {
            bld.connect(j, i, (i + s) % n_a);
        }
        shifts.push(s);
    }
    PermutationArray::circulant(n_a, &shifts)
}

/// Evaluates the block just connected. Returns `None` as soon as the block
/// is known to score below `floor`.
fn score_block(bld: &mut Builder, j: usize, floor: Option<(usize, i64)>) -> Option<(usize, i64)> {
    let mut min_len = usize::MAX;
    let mut count = 0i64;
    for c in 0..bld.n_a {
        let v = bld.var(j, c);
        let p2_base = bld.p2_base as u32;
        let Some(len) = bld
            .graph
            .shortest_cycle_filtered(v, min_len, |root| root >= p2_base)
        else {
            continue;
        };
        if len < min_len {
            min_len = len;
            count = 1;
        } else {
            count += 1;
        }
        if let Some((f_len, f_neg)) = floor {
            if min_len < f_len || (min_len == f_len && -count < f_neg) {
                return None;
            }
        }
    }
    Some((min_len, -count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::component::{build_mscmpc, build_spc};
    use crate::product::{build_hp, build_hp_interleaved};

    #[test]
    fn identity_has_no_cycles() {
        let r = local_girth(&SparseBinMatrix::identity(6));
        assert_eq!(r.global_girth, None);
        assert_eq!(r.acyclic_variables(), 6);
        assert!(r.histogram.is_empty());
    }

    #[test]
    fn four_cycle_detected() {
        let h = SparseBinMatrix::from_row_support(3, vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        let r = local_girth(&h);
        assert_eq!(r.global_girth, Some(4));
        assert_eq!(r.per_variable, vec![Some(4), Some(4), None]);
    }

    #[test]
    fn six_cycle_ring() {
        // Checks {0,1}, {1,2}, {2,0}: one cycle of length 6.
        let h = SparseBinMatrix::from_row_support(4, vec![vec![0, 1], vec![1, 2], vec![0, 2, 3]])
            .unwrap();
        let r = local_girth(&h);
        assert_eq!(r.per_variable, vec![Some(6), Some(6), Some(6), None]);
    }

    #[test]
    fn spc_square_girth_is_eight() {
        let spc = build_spc(3).unwrap();
        assert_eq!(component_girth(&spc), None);
        let pc = build_hp(&spc, &spc);
        let r = local_girth(pc.h());
        assert_eq!(r.global_girth, Some(8));
        assert_eq!(product_girth_bound(None, None), 8);
    }

    #[test]
    fn mscmpc_girth_at_least_six() {
        let c = build_mscmpc(81, &[9, 10]).unwrap();
        assert!(component_girth(&c).unwrap() >= 6);
    }

    #[test]
    fn circulant_is_deterministic_and_valid() {
        let c = build_mscmpc(5, &[3, 4]).unwrap();
        let p = design_circulant(&c, &c, 9);
        assert_eq!(p, design_circulant(&c, &c, 9));
        assert_eq!((p.block_size(), p.count()), (12, 12));
        for j in 0..12 {
            assert!(p.circulant_shift(j).is_some());
        }
        let pc = build_hp_interleaved(&c, &c, &p).unwrap();
        assert!(local_girth(pc.h()).global_girth.unwrap() >= 6);
    }

    #[test]
    fn generic_is_deterministic_and_valid() {
        let c = build_mscmpc(5, &[3, 4]).unwrap();
        let p = design_generic(&c, &c, 4);
        assert_eq!(p, design_generic(&c, &c, 4));
        let pc = build_hp_interleaved(&c, &c, &p).unwrap();
        let bound = product_girth_bound(component_girth(&c), component_girth(&c));
        assert!(local_girth(pc.h()).global_girth.unwrap() >= bound);
    }

    #[test]
    fn degenerate_block_size_one() {
        let rep = build_spc(1).unwrap();
        let one =
            ComponentCode::from_parity_check(1, SparseBinMatrix::zeros(0, 1), "trivial").unwrap();
        let p = design_generic(&one, &rep, 3);
        assert_eq!(p, PermutationArray::identity(1, 2));
        assert_eq!(
            design_circulant(&one, &rep, 3),
            PermutationArray::identity(1, 2)
        );
    }

    #[test]
    fn identity_shifts_give_direct_code() {
        let c = build_mscmpc(5, &[3, 4]).unwrap();
        let p = PermutationArray::circulant(12, &[0; 12]);
        let pc = build_hp_interleaved(&c, &c, &p).unwrap();
        assert_eq!(pc.h(), build_hp(&c, &c).h());
    }
}

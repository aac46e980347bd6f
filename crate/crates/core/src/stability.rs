//! Stability diagnostics: ladder index with certificates, and splitting rank.
//!
//! A *ladder* of length `k` is a pair of sequences `a_1..a_k ∈ V`,
//! `b_1..b_k ∈ W` with `R(a_i, b_j)` iff `i <= j`. The ladder index of a
//! graph is the largest `k` for which one exists.
//!
//! The splitting rank of a set `A` is the depth of the deepest complete
//! binary tree rooted at `A` in which every internal node's set is cut into
//! two nonempty halves `A ∩ N(p)` and `A \ N(p)` by some opposite-side
//! vertex `p`. It is the finite, two-branching counterpart of local rank.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderCertificate {
    a_seq: Vec<usize>,
    b_seq: Vec<usize>,
}

impl LadderCertificate {
    /// Checks the half-graph pattern against `g`.
    pub fn new(g: &BipartiteGraph, a_seq: Vec<usize>, b_seq: Vec<usize>) -> Result<Self> {
        let cert = LadderCertificate { a_seq, b_seq };
        if !cert.verify(g) {
            return Err(Error::ShapeMismatch("sequences do not form a ladder in this graph".into()));
        }
        Ok(cert)
    }

    pub fn verify(&self, g: &BipartiteGraph) -> bool {
        let k = self.a_seq.len();
        if self.b_seq.len() != k {
            return false;
        }
        if self.a_seq.iter().any(|&a| a >= g.n_left()) || self.b_seq.iter().any(|&b| b >= g.n_right()) {
            return false;
        }
        let distinct = |s: &[usize]| s.iter().collect::<HashSet<_>>().len() == s.len();
        if !distinct(&self.a_seq) || !distinct(&self.b_seq) {
            return false;
        }
        (0..k).all(|i| (0..k).all(|j| g.has_edge(self.a_seq[i], self.b_seq[j]) == (i <= j)))
    }

    pub fn k(&self) -> usize {
        self.a_seq.len()
    }

    pub fn a_seq(&self) -> &[usize] {
        &self.a_seq
    }

    pub fn b_seq(&self) -> &[usize] {
        &self.b_seq
    }
}

/// Graph with twin vertices collapsed. Ladder vertices have pairwise
/// distinct neighbourhoods on both sides, so ladders survive the quotient.
struct TwinQuotient {
    graph: BipartiteGraph,
    left_rep: Vec<usize>,
    right_rep: Vec<usize>,
}

fn twin_quotient(g: &BipartiteGraph) -> TwinQuotient {
    let mut seen = HashSet::new();
    let right_rep: Vec<usize> = (0..g.n_right()).filter(|&b| seen.insert(g.cols()[b].clone())).collect();
    let mut seen = HashSet::new();
    let left_rep: Vec<usize> = (0..g.n_left()).filter(|&a| seen.insert(g.rows()[a].clone())).collect();
    let graph = BipartiteGraph::from_fn(left_rep.len(), right_rep.len(), |i, j| g.has_edge(left_rep[i], right_rep[j]))
        .expect("quotient of a nonempty graph is nonempty");
    TwinQuotient { graph, left_rep, right_rep }
}

struct LadderSearch<'g> {
    g: &'g BipartiteGraph,
    k: usize,
}

impl LadderSearch<'_> {
    /// `cand_a`: V-vertices non-adjacent to every chosen b.
    /// `cand_b`: W-vertices adjacent to every chosen a.
    fn extend(&self, a_seq: &mut Vec<usize>, b_seq: &mut Vec<usize>, cand_a: &BitSet, cand_b: &BitSet) -> bool {
        let i = a_seq.len();
        if i == self.k {
            return true;
        }
        for a in cand_a.iter() {
            if self.try_a(a, a_seq, b_seq, cand_a, cand_b) {
                return true;
            }
        }
        false
    }

    fn try_a(
        &self,
        a: usize,
        a_seq: &mut Vec<usize>,
        b_seq: &mut Vec<usize>,
        cand_a: &BitSet,
        cand_b: &BitSet,
    ) -> bool {
        let i = a_seq.len();
        let next_b = cand_b.intersection(self.g.neighbors(Side::Left, a));
        // b_i..b_k all lie in N(a_i)
        if next_b.count() < self.k - i {
            return false;
        }
        a_seq.push(a);
        for b in next_b.iter() {
            let next_a = cand_a.difference(self.g.neighbors(Side::Right, b));
            if next_a.count() < self.k - i - 1 {
                continue;
            }
            b_seq.push(b);
            if self.extend(a_seq, b_seq, &next_a, &next_b) {
                return true;
            }
            b_seq.pop();
        }
        a_seq.pop();
        false
    }

    fn run(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let cand_a = BitSet::full(self.g.n_left());
        let cand_b = BitSet::full(self.g.n_right());
        (0..self.g.n_left()).into_par_iter().find_map_first(|a| {
            let (mut a_seq, mut b_seq) = (Vec::with_capacity(self.k), Vec::with_capacity(self.k));
            self.try_a(a, &mut a_seq, &mut b_seq, &cand_a, &cand_b).then_some((a_seq, b_seq))
        })
    }
}

/// Exhaustive search for a ladder of length exactly `k`.
pub fn has_ladder(g: &BipartiteGraph, k: usize) -> Option<LadderCertificate> {
    assert!(k >= 1, "ladder length must be positive");
    let q = twin_quotient(g);
    if q.left_rep.len() < k || q.right_rep.len() < k {
        return None;
    }
    let (a_seq, b_seq) = LadderSearch { g: &q.graph, k }.run()?;
    let a_seq = a_seq.into_iter().map(|i| q.left_rep[i]).collect();
    let b_seq = b_seq.into_iter().map(|j| q.right_rep[j]).collect();
    Some(LadderCertificate::new(g, a_seq, b_seq).expect("search produced an invalid ladder"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderIndex {
    pub k: usize,
    pub certificate: Option<LadderCertificate>,
    /// The search stopped at `max_k` without refuting `max_k + 1`.
    pub capped: bool,
}

pub fn ladder_index(g: &BipartiteGraph, max_k: usize) -> LadderIndex {
    let mut certificate = None;
    for k in 1..=max_k {
        match has_ladder(g, k) {
            Some(c) => certificate = Some(c),
            None => return LadderIndex { k: k - 1, certificate, capped: false },
        }
    }
    LadderIndex { k: max_k, certificate, capped: true }
}

/// One internal node of a splitting tree; `None` children are leaves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTree {
    pub param: usize,
    pub inside: Option<Box<SplitTree>>,
    pub outside: Option<Box<SplitTree>>,
}

impl SplitTree {
    /// Replays the splits from `set`, requiring both halves nonempty at
    /// every node and all leaves at the same depth. Returns that depth.
    pub fn replay(tree: Option<&SplitTree>, g: &BipartiteGraph, set: &VertexSet) -> Option<usize> {
        let Some(node) = tree else { return Some(0) };
        let splitter_side = set.side().opposite();
        if node.param >= g.size(splitter_side) {
            return None;
        }
        let nb = VertexSet::new(set.side(), g.neighbors(splitter_side, node.param).clone());
        let inside = set.intersection(&nb);
        let outside = set.difference(&nb);
        if inside.is_empty() || outside.is_empty() {
            return None;
        }
        let d1 = Self::replay(node.inside.as_deref(), g, &inside)?;
        let d2 = Self::replay(node.outside.as_deref(), g, &outside)?;
        (d1 == d2).then_some(d1 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub value: usize,
    /// A complete splitting tree of depth `value`; absent when `value == 0`.
    pub witness_tree: Option<SplitTree>,
}

pub const DEFAULT_RANK_MEMO_CAP: usize = 1 << 20;

struct RankSolver<'g> {
    g: &'g BipartiteGraph,
    splitter_side: Side,
    memo: HashMap<BitSet, (usize, u64)>,
    cap: usize,
    tick: u64,
}

fn floor_log2(n: usize) -> usize {
    (usize::BITS - 1 - n.leading_zeros()) as usize
}

impl RankSolver<'_> {
    fn remember(&mut self, set: BitSet, value: usize) {
        if self.memo.len() >= self.cap {
            // evict the least recently used half
            let mut ticks: Vec<u64> = self.memo.values().map(|&(_, t)| t).collect();
            let mid = ticks.len() / 2;
            let (_, &mut cutoff, _) = ticks.select_nth_unstable(mid);
            self.memo.retain(|_, &mut (_, t)| t > cutoff);
        }
        self.memo.insert(set, (value, self.tick));
    }

    fn split(&self, set: &BitSet, p: usize) -> (BitSet, BitSet) {
        let nb = self.g.neighbors(self.splitter_side, p);
        (set.intersection(nb), set.difference(nb))
    }

    fn rank(&mut self, set: &BitSet) -> usize {
        let n = set.count();
        if n < 2 {
            return 0;
        }
        self.tick += 1;
        if let Some(entry) = self.memo.get_mut(set) {
            entry.1 = self.tick;
            return entry.0;
        }
        let ceiling = floor_log2(n);
        let mut best = 0;
        let mut seen_splits = HashSet::new();
        for p in 0..self.g.size(self.splitter_side) {
            let (inside, outside) = self.split(set, p);
            let c = inside.count();
            if c == 0 || c == n {
                continue;
            }
            let (small, large) = if c <= n - c { (inside, outside) } else { (outside, inside) };
            if floor_log2(small.count()) < best || !seen_splits.insert(small.clone()) {
                continue;
            }
            let r_small = self.rank(&small);
            if r_small < best {
                continue;
            }
            let r_large = self.rank(&large);
            best = best.max(1 + r_small.min(r_large));
            if best == ceiling {
                break;
            }
        }
        self.remember(set.clone(), best);
        best
    }

    fn tree(&mut self, set: &BitSet, depth: usize) -> Option<SplitTree> {
        if depth == 0 {
            return None;
        }
        for p in 0..self.g.size(self.splitter_side) {
            let (inside, outside) = self.split(set, p);
            if inside.is_empty() || outside.is_empty() {
                continue;
            }
            if self.rank(&inside) >= depth - 1 && self.rank(&outside) >= depth - 1 {
                return Some(SplitTree {
                    param: p,
                    inside: self.tree(&inside, depth - 1).map(Box::new),
                    outside: self.tree(&outside, depth - 1).map(Box::new),
                });
            }
        }
        unreachable!("rank {depth} set has no realising splitter")
    }
}

pub fn splitting_rank(g: &BipartiteGraph, start: &VertexSet) -> Result<RankResult> {
    splitting_rank_with_cap(g, start, DEFAULT_RANK_MEMO_CAP)
}

/// `memo_cap` bounds the number of memoised sets.
pub fn splitting_rank_with_cap(g: &BipartiteGraph, start: &VertexSet, memo_cap: usize) -> Result<RankResult> {
    if start.universe() != g.size(start.side()) {
        return Err(Error::ShapeMismatch("start set does not match the graph".into()));
    }
    if start.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut solver =
        RankSolver { g, splitter_side: start.side().opposite(), memo: HashMap::new(), cap: memo_cap.max(1), tick: 0 };
    let value = solver.rank(start.bits());
    let witness_tree = solver.tree(start.bits(), value);
    Ok(RankResult { value, witness_tree })
}

//! Bipartite graphs `(V, W, R)` with bitset adjacency on both sides.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// `Left` is `V`, `Right` is `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A subset of one side of a graph.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexSet {
    side: Side,
    bits: BitSet,
}

impl VertexSet {
    pub fn new(side: Side, bits: BitSet) -> Self {
        VertexSet { side, bits }
    }

    pub fn empty(side: Side, size: usize) -> Self {
        VertexSet { side, bits: BitSet::new(size) }
    }

    pub fn full(side: Side, size: usize) -> Self {
        VertexSet { side, bits: BitSet::full(size) }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(side: Side, size: usize, indices: I) -> Result<Self> {
        let mut bits = BitSet::new(size);
        for i in indices {
            if i >= size {
                return Err(Error::IndexOutOfRange { side, index: i, size });
            }
            bits.insert(i);
        }
        Ok(VertexSet { side, bits })
    }

    #[inline]
    pub fn side(&self) -> Side {
        self.side
    }

    #[inline]
    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn into_bits(self) -> BitSet {
        self.bits
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.bits.universe()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.bits.iter().collect()
    }

    pub fn insert(&mut self, v: usize) {
        self.bits.insert(v)
    }

    fn same_side(&self, other: &VertexSet) {
        assert_eq!(self.side, other.side, "set operation across sides");
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.same_side(other);
        VertexSet { side: self.side, bits: self.bits.union(&other.bits) }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.same_side(other);
        VertexSet { side: self.side, bits: self.bits.intersection(&other.bits) }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.same_side(other);
        VertexSet { side: self.side, bits: self.bits.difference(&other.bits) }
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet { side: self.side, bits: self.bits.complement() }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.side == other.side && self.bits.is_subset(&other.bits)
    }
}

/// Finite bipartite graph. `rows[a]` is `N(a) ⊆ W` and `cols[b]` is
/// `N(b) ⊆ V`; both views always encode the same relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
}

impl BipartiteGraph {
    pub fn from_edges<I>(n_left: usize, n_right: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n_left == 0 {
            return Err(Error::EmptySide(Side::Left));
        }
        if n_right == 0 {
            return Err(Error::EmptySide(Side::Right));
        }
        let mut rows = vec![BitSet::new(n_right); n_left];
        let mut cols = vec![BitSet::new(n_left); n_right];
        for (a, b) in edges {
            if a >= n_left {
                return Err(Error::IndexOutOfRange { side: Side::Left, index: a, size: n_left });
            }
            if b >= n_right {
                return Err(Error::IndexOutOfRange { side: Side::Right, index: b, size: n_right });
            }
            rows[a].insert(b);
            cols[b].insert(a);
        }
        Ok(BipartiteGraph { n_left, n_right, rows, cols })
    }

    /// Builds the graph whose edges are the pairs where `adj(a, b)` holds.
    pub fn from_fn(n_left: usize, n_right: usize, mut adj: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let edges: Vec<_> =
            (0..n_left).flat_map(|a| (0..n_right).map(move |b| (a, b))).filter(|&(a, b)| adj(a, b)).collect();
        Self::from_edges(n_left, n_right, edges)
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn size(&self, side: Side) -> usize {
        match side {
            Side::Left => self.n_left,
            Side::Right => self.n_right,
        }
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    /// `N(v)` as a bitset over the opposite side.
    #[inline]
    pub fn neighbors(&self, side: Side, v: usize) -> &BitSet {
        match side {
            Side::Left => &self.rows[v],
            Side::Right => &self.cols[v],
        }
    }

    pub fn neighborhood(&self, side: Side, v: usize) -> Result<VertexSet> {
        self.check_index(side, v)?;
        Ok(VertexSet::new(side.opposite(), self.neighbors(side, v).clone()))
    }

    pub fn check_index(&self, side: Side, v: usize) -> Result<()> {
        let size = self.size(side);
        if v >= size {
            return Err(Error::IndexOutOfRange { side, index: v, size });
        }
        Ok(())
    }

    pub fn full_set(&self, side: Side) -> VertexSet {
        VertexSet::full(side, self.size(side))
    }

    pub fn empty_set(&self, side: Side) -> VertexSet {
        VertexSet::empty(side, self.size(side))
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(a, row)| row.iter().map(move |b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum()
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn cols(&self) -> &[BitSet] {
        &self.cols
    }

    /// Same vertex sets with the sides swapped.
    pub fn transpose(&self) -> BipartiteGraph {
        BipartiteGraph { n_left: self.n_right, n_right: self.n_left, rows: self.cols.clone(), cols: self.rows.clone() }
    }

    /// Same vertex sets, edge relation negated.
    pub fn complement(&self) -> BipartiteGraph {
        BipartiteGraph {
            n_left: self.n_left,
            n_right: self.n_right,
            rows: self.rows.iter().map(BitSet::complement).collect(),
            cols: self.cols.iter().map(BitSet::complement).collect(),
        }
    }
}

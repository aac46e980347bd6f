//! Boolean combinations of neighbourhood and equality atoms, and the
//! partition of a side into complete types over a finite parameter set.
//!
//! A formula has a *subject side*: on `Left` it defines a subset of `V`, its
//! `Edge` atoms take `W`-vertices as parameters and its `Equals` atoms take
//! `V`-vertices. On `Right` the roles swap.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DeltaFormula {
    /// `R(x, param)`, i.e. membership in `N(param)`.
    Edge {
        param: usize,
    },
    /// `x = param`.
    Equals {
        param: usize,
    },
    Not {
        child: Box<DeltaFormula>,
    },
    And {
        children: Vec<DeltaFormula>,
    },
    Or {
        children: Vec<DeltaFormula>,
    },
    True,
}

impl DeltaFormula {
    pub fn edge(param: usize) -> Self {
        DeltaFormula::Edge { param }
    }

    pub fn equals(param: usize) -> Self {
        DeltaFormula::Equals { param }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(child: DeltaFormula) -> Self {
        DeltaFormula::Not { child: Box::new(child) }
    }

    pub fn and(children: Vec<DeltaFormula>) -> Self {
        DeltaFormula::And { children }
    }

    pub fn or(children: Vec<DeltaFormula>) -> Self {
        DeltaFormula::Or { children }
    }

    fn literal(atom: DeltaFormula, positive: bool) -> Self {
        if positive {
            atom
        } else {
            DeltaFormula::not(atom)
        }
    }

    /// The set of subject-side vertices satisfying the formula.
    pub fn evaluate(&self, g: &BipartiteGraph, subject: Side) -> Result<VertexSet> {
        Ok(VertexSet::new(subject, self.eval_bits(g, subject)?))
    }

    fn eval_bits(&self, g: &BipartiteGraph, subject: Side) -> Result<BitSet> {
        let n = g.size(subject);
        Ok(match self {
            DeltaFormula::Edge { param } => {
                g.check_index(subject.opposite(), *param)?;
                g.neighbors(subject.opposite(), *param).clone()
            }
            DeltaFormula::Equals { param } => {
                g.check_index(subject, *param)?;
                BitSet::from_indices(n, [*param])
            }
            DeltaFormula::Not { child } => child.eval_bits(g, subject)?.complement(),
            DeltaFormula::And { children } => {
                let mut acc = BitSet::full(n);
                for c in children {
                    acc.intersect_with(&c.eval_bits(g, subject)?);
                }
                acc
            }
            DeltaFormula::Or { children } => {
                let mut acc = BitSet::new(n);
                for c in children {
                    acc.union_with(&c.eval_bits(g, subject)?);
                }
                acc
            }
            DeltaFormula::True => BitSet::full(n),
        })
    }

    /// Number of atoms.
    pub fn atom_count(&self) -> usize {
        match self {
            DeltaFormula::Edge { .. } | DeltaFormula::Equals { .. } => 1,
            DeltaFormula::Not { child } => child.atom_count(),
            DeltaFormula::And { children } | DeltaFormula::Or { children } => {
                children.iter().map(DeltaFormula::atom_count).sum()
            }
            DeltaFormula::True => 0,
        }
    }
}

/// Finite parameter set `M = (M ∩ V, M ∩ W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterSet {
    pub left: VertexSet,
    pub right: VertexSet,
}

impl ParameterSet {
    pub fn empty(g: &BipartiteGraph) -> Self {
        ParameterSet { left: g.empty_set(Side::Left), right: g.empty_set(Side::Right) }
    }

    pub fn new(left: VertexSet, right: VertexSet) -> Result<Self> {
        if left.side() != Side::Left {
            return Err(Error::SideMismatch { expected: Side::Left, found: left.side() });
        }
        if right.side() != Side::Right {
            return Err(Error::SideMismatch { expected: Side::Right, found: right.side() });
        }
        Ok(ParameterSet { left, right })
    }

    pub fn on(&self, side: Side) -> &VertexSet {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn insert(&mut self, side: Side, v: usize) {
        match side {
            Side::Left => self.left.insert(v),
            Side::Right => self.right.insert(v),
        }
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    fn check(&self, g: &BipartiteGraph) -> Result<()> {
        for side in [Side::Left, Side::Right] {
            let set = self.on(side);
            if set.side() != side || set.universe() != g.size(side) {
                return Err(Error::ShapeMismatch(format!("{side} parameters do not live on the graph's {side} side")));
            }
        }
        Ok(())
    }
}

/// Signs of all atoms over the parameters, in ascending parameter order:
/// `edges[i]` for the i-th opposite-side parameter, `equals[i]` for the
/// i-th same-side parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace {
    pub edges: Vec<bool>,
    pub equals: Vec<bool>,
}

/// A complete type over the parameters, realised by a nonempty vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeClass {
    pub side: Side,
    pub members: VertexSet,
    pub trace: Trace,
    pub formula: DeltaFormula,
}

fn trace_formula(opp: &[usize], same: &[usize], trace: &Trace) -> DeltaFormula {
    let mut lits: Vec<DeltaFormula> =
        opp.iter().zip(&trace.edges).map(|(&p, &s)| DeltaFormula::literal(DeltaFormula::edge(p), s)).collect();
    lits.extend(same.iter().zip(&trace.equals).map(|(&p, &s)| DeltaFormula::literal(DeltaFormula::equals(p), s)));
    if lits.is_empty() {
        DeltaFormula::True
    } else {
        DeltaFormula::and(lits)
    }
}

fn trace_of(g: &BipartiteGraph, side: Side, v: usize, opp: &[usize], same: &[usize]) -> Trace {
    let row = g.neighbors(side, v);
    Trace { edges: opp.iter().map(|&p| row.contains(p)).collect(), equals: same.iter().map(|&p| p == v).collect() }
}

/// Partitions `side` by trace over `m`. Classes come in ascending trace
/// order; each carries a signed conjunction that evaluates to it exactly.
pub fn type_partition(g: &BipartiteGraph, m: &ParameterSet, side: Side) -> Result<Vec<TypeClass>> {
    m.check(g)?;
    let opp = m.on(side.opposite()).to_vec();
    let same = m.on(side).to_vec();
    let n = g.size(side);
    let mut buckets: BTreeMap<Trace, BitSet> = BTreeMap::new();
    for v in 0..n {
        buckets.entry(trace_of(g, side, v, &opp, &same)).or_insert_with(|| BitSet::new(n)).insert(v);
    }
    buckets
        .into_iter()
        .map(|(trace, bits)| {
            let formula = trace_formula(&opp, &same, &trace);
            let members = VertexSet::new(side, bits);
            let evaluated = formula.evaluate(g, side)?;
            assert_eq!(evaluated, members, "type formula disagrees with its trace bucket");
            Ok(TypeClass { side, members, trace, formula })
        })
        .collect()
}

/// The class of `type_partition(g, m, side)` containing `vertex`.
pub fn type_of(g: &BipartiteGraph, m: &ParameterSet, vertex: usize, side: Side) -> Result<TypeClass> {
    g.check_index(side, vertex)?;
    let classes = type_partition(g, m, side)?;
    Ok(classes.into_iter().find(|c| c.members.contains(vertex)).expect("classes cover the side"))
}

//! The decomposition engine.
//!
//! Parts are complete types over a growing parameter set `M`: `V` is
//! partitioned by trace over `M ∩ W` and `W` by trace over `M ∩ V`. Types of
//! measure zero are folded into the heaviest type on their side. Every pair
//! of parts is then classified as `Dense` or `Sparse`; when some pair is
//! neither, a vertex whose neighbourhood cuts one of its two parts in the
//! most balanced way is added to `M`, and the loop repeats.
//!
//! Each added vertex splits at least one positive-measure type into two
//! positive-measure types, so the number of parts grows strictly and the
//! loop stops after fewer than `|V| + |W|` rounds.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::definability::{type_partition, DeltaFormula, ParameterSet};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side, VertexSet};
use crate::measure::{MassInt, MassTable, Measure};
use crate::rational::ratio;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairCase {
    Dense,
    Sparse,
}

/// Outcome for one pair `(V_i, W_j)`.
///
/// For `Dense`, `exc_left` holds the `a ∈ V_i` missing more than an `eps`
/// fraction of `W_j` (by `ν`), and `exc_right` the `b ∈ W_j` missing more
/// than an `eps` fraction of `V_i` (by `μ`). For `Sparse` the same with
/// "hitting" in place of "missing". The masses are relative to the part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVerdict {
    pub case: PairCase,
    pub exc_left_mass: BigRational,
    pub exc_right_mass: BigRational,
    pub exc_left: VertexSet,
    pub exc_right: VertexSet,
    /// Both clauses held; `Dense` was reported.
    pub both_hold: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub members: VertexSet,
    pub formula: DeltaFormula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityPartition {
    pub epsilon: BigRational,
    pub parts_left: Vec<Part>,
    pub parts_right: Vec<Part>,
    pub parameters: ParameterSet,
    /// `verdicts[i][j]` is the verdict for `(parts_left[i], parts_right[j])`.
    pub verdicts: Vec<Vec<PairVerdict>>,
    pub iterations: usize,
    /// Zero-measure types folded into a sibling, summed over all rounds.
    pub zero_mass_merges: usize,
}

impl RegularityPartition {
    pub fn parts(&self, side: Side) -> &[Part] {
        match side {
            Side::Left => &self.parts_left,
            Side::Right => &self.parts_right,
        }
    }

    pub fn part_count(&self) -> usize {
        self.parts_left.len() + self.parts_right.len()
    }

    pub fn verdict(&self, i: usize, j: usize) -> &PairVerdict {
        &self.verdicts[i][j]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsPolicy {
    /// `0 < eps <= 29/100`; the two clauses can never hold together.
    #[default]
    Strict,
    /// `0 < eps < 1/2`; `Dense` wins when both clauses hold.
    Permissive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecomposeConfig {
    /// Defaults to `|V| + |W|`, which is never reached.
    pub max_iterations: Option<usize>,
    pub eps_policy: EpsPolicy,
    /// Give every vertex of measure above `eps` its own part via an
    /// equality atom.
    pub peel_singletons: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub side: Side,
    pub vertex: usize,
}

struct Engine<'a, N> {
    g: &'a BipartiteGraph,
    mu: &'a MassTable<N>,
    nu: &'a MassTable<N>,
    eps_num: N,
    eps_den: N,
}

fn eps_parts_u64(eps: &BigRational) -> Option<(u64, u64)> {
    Some((eps.numer().to_u64()?, eps.denom().to_u64()?))
}

fn eps_parts_big(eps: &BigRational) -> (BigUint, BigUint) {
    (eps.numer().magnitude().clone(), eps.denom().magnitude().clone())
}

/// Runs `$body` with `$e` bound to a `u128` engine when every quantity
/// fits, else to a `BigUint` engine.
macro_rules! with_engine {
    ($g:expr, $mu:expr, $nu:expr, $eps:expr, |$e:ident| $body:expr) => {{
        match ($mu.small_table(), $nu.small_table(), eps_parts_u64($eps)) {
            (Some(mt), Some(nt), Some((p, q))) => {
                let $e = Engine { g: $g, mu: mt, nu: nt, eps_num: p as u128, eps_den: q as u128 };
                $body
            }
            _ => {
                let (p, q) = eps_parts_big($eps);
                let $e = Engine { g: $g, mu: $mu.big_table(), nu: $nu.big_table(), eps_num: p, eps_den: q };
                $body
            }
        }
    }};
}

fn rel(num: &impl MassInt, den: &impl MassInt) -> BigRational {
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, num.to_biguint()),
        BigInt::from_biguint(Sign::Plus, den.to_biguint()),
    )
}

struct Clause<N> {
    exc_left: BitSet,
    exc_left_mass: N,
    exc_right: BitSet,
    exc_right_mass: N,
}

impl<N: MassInt> Engine<'_, N> {
    fn table(&self, side: Side) -> &MassTable<N> {
        match side {
            Side::Left => self.mu,
            Side::Right => self.nu,
        }
    }

    /// `mass > eps * whole`
    #[inline]
    fn exceeds(&self, mass: N, whole: &N) -> bool {
        mass * self.eps_den.clone() > self.eps_num.clone() * whole.clone()
    }

    /// Members `x` of `subject` whose bad portion of `other` (non-neighbours
    /// for `dense`, neighbours otherwise) exceeds `eps` of `other`'s mass.
    fn exceptional(&self, side: Side, subject: &BitSet, other: &BitSet, other_mass: &N, dense: bool) -> BitSet {
        let t = self.table(side.opposite());
        let mut exc = BitSet::new(subject.universe());
        for x in subject.iter() {
            let nb = self.g.neighbors(side, x);
            let bad = if dense { t.of_andnot(other, nb) } else { t.of_and(other, nb) };
            if self.exceeds(bad, other_mass) {
                exc.insert(x);
            }
        }
        exc
    }

    fn clause(&self, vi: &BitSet, wj: &BitSet, mv: &N, mw: &N, dense: bool) -> Option<Clause<N>> {
        let exc_left = self.exceptional(Side::Left, vi, wj, mw, dense);
        let exc_left_mass = self.mu.of(&exc_left);
        if self.exceeds(exc_left_mass.clone(), mv) {
            return None;
        }
        let exc_right = self.exceptional(Side::Right, wj, vi, mv, dense);
        let exc_right_mass = self.nu.of(&exc_right);
        if self.exceeds(exc_right_mass.clone(), mw) {
            return None;
        }
        Some(Clause { exc_left, exc_left_mass, exc_right, exc_right_mass })
    }

    fn classify(&self, vi: &BitSet, wj: &BitSet) -> Result<Option<PairVerdict>> {
        let mv = self.mu.of(vi);
        let mw = self.nu.of(wj);
        if mv.is_zero() || mw.is_zero() {
            return Err(Error::ZeroMeasurePart);
        }
        let dense = self.clause(vi, wj, &mv, &mw, true);
        let (case, c, both_hold) = match dense {
            Some(c) => {
                let both = self.clause(vi, wj, &mv, &mw, false).is_some();
                (PairCase::Dense, c, both)
            }
            None => match self.clause(vi, wj, &mv, &mw, false) {
                Some(c) => (PairCase::Sparse, c, false),
                None => return Ok(None),
            },
        };
        Ok(Some(PairVerdict {
            case,
            exc_left_mass: rel(&c.exc_left_mass, &mv),
            exc_right_mass: rel(&c.exc_right_mass, &mw),
            exc_left: VertexSet::new(Side::Left, c.exc_left),
            exc_right: VertexSet::new(Side::Right, c.exc_right),
            both_hold,
        }))
    }

    /// Most balanced splitter of `vi` (by some `b ∈ W`) or `wj` (by some
    /// `a ∈ V`). Score is the lighter piece's share of its part; ties go to
    /// the smaller absolute mass gap between the pieces, then to `Left`
    /// candidates, then to the lowest index.
    fn witness(&self, vi: &BitSet, wj: &BitSet) -> Result<Witness> {
        struct Best<N> {
            lighter: N,
            part: N,
            gap: N,
            side_total: N,
            w: Witness,
        }
        let mut best: Option<Best<N>> = None;
        for (side, part) in [(Side::Left, wj), (Side::Right, vi)] {
            // candidates on `side` split `part`, which lives on the other side
            let t = self.table(side.opposite());
            let part_mass = t.of(part);
            for v in 0..self.g.size(side) {
                let inside = t.of_and(part, self.g.neighbors(side, v));
                if inside.is_zero() || inside == part_mass {
                    continue;
                }
                let outside = part_mass.clone() - inside.clone();
                let (lighter, gap) = if inside <= outside {
                    (inside.clone(), outside - inside)
                } else {
                    (outside.clone(), inside - outside)
                };
                let better = match &best {
                    None => true,
                    Some(b) => {
                        let lhs = lighter.clone() * b.part.clone();
                        let rhs = b.lighter.clone() * part_mass.clone();
                        lhs > rhs
                            || (lhs == rhs && gap.clone() * b.side_total.clone() < b.gap.clone() * t.total().clone())
                    }
                };
                if better {
                    best = Some(Best {
                        lighter,
                        part: part_mass.clone(),
                        gap,
                        side_total: t.total().clone(),
                        w: Witness { side, vertex: v },
                    });
                }
            }
        }
        best.map(|b| b.w).ok_or(Error::NoSplitter)
    }
}

fn check_pair_sets(g: &BipartiteGraph, vi: &VertexSet, wj: &VertexSet) -> Result<()> {
    if vi.side() != Side::Left {
        return Err(Error::SideMismatch { expected: Side::Left, found: vi.side() });
    }
    if wj.side() != Side::Right {
        return Err(Error::SideMismatch { expected: Side::Right, found: wj.side() });
    }
    if vi.universe() != g.n_left() || wj.universe() != g.n_right() {
        return Err(Error::ShapeMismatch("part does not match the graph".into()));
    }
    Ok(())
}

/// Returns the verdict for `(vi, wj)`, or `None` if neither clause holds.
pub fn classify_pair(
    g: &BipartiteGraph,
    mu: &Measure,
    nu: &Measure,
    vi: &VertexSet,
    wj: &VertexSet,
    eps: &BigRational,
) -> Result<Option<PairVerdict>> {
    if !eps.is_positive() {
        return Err(Error::InvalidEpsilon(eps.to_string()));
    }
    check_pair_sets(g, vi, wj)?;
    mu.check_graph(g, Side::Left)?;
    nu.check_graph(g, Side::Right)?;
    with_engine!(g, mu, nu, eps, |e| e.classify(vi.bits(), wj.bits()))
}

/// A vertex whose neighbourhood cuts `vi` or `wj` into two pieces of
/// positive measure, chosen as the most balanced such cut.
pub fn find_witness(g: &BipartiteGraph, mu: &Measure, nu: &Measure, vi: &VertexSet, wj: &VertexSet) -> Result<Witness> {
    check_pair_sets(g, vi, wj)?;
    mu.check_graph(g, Side::Left)?;
    nu.check_graph(g, Side::Right)?;
    let unit = ratio(1, 1);
    with_engine!(g, mu, nu, &unit, |e| e.witness(vi.bits(), wj.bits()))
}

pub fn check_epsilon(eps: &BigRational, policy: EpsPolicy) -> Result<()> {
    let ok = eps.is_positive()
        && match policy {
            EpsPolicy::Strict => *eps <= ratio(29, 100),
            EpsPolicy::Permissive => *eps < ratio(1, 2),
        };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(format!("{eps} (policy {policy:?})")))
    }
}

pub fn decompose(
    g: &BipartiteGraph,
    mu: &Measure,
    nu: &Measure,
    eps: &BigRational,
    config: &DecomposeConfig,
) -> Result<RegularityPartition> {
    check_epsilon(eps, config.eps_policy)?;
    mu.check_graph(g, Side::Left)?;
    nu.check_graph(g, Side::Right)?;
    with_engine!(g, mu, nu, eps, |e| e.decompose(eps, config))
}

impl<N: MassInt> Engine<'_, N> {
    /// Types over `m` on `side`, with zero-measure types merged into the
    /// heaviest type (lowest index on ties).
    fn parts(&self, m: &ParameterSet, side: Side) -> Result<(Vec<Part>, usize)> {
        let t = self.table(side);
        let classes = type_partition(self.g, m, side)?;
        let masses: Vec<N> = classes.iter().map(|c| t.of(c.members.bits())).collect();
        let mut target = 0;
        for (i, m) in masses.iter().enumerate() {
            if *m > masses[target] {
                target = i;
            }
        }
        assert!(!masses[target].is_zero(), "a probability measure has a positive type");
        let mut parts = Vec::new();
        let mut target_pos = 0;
        let mut absorbed = Vec::new();
        for (i, c) in classes.into_iter().enumerate() {
            if masses[i].is_zero() {
                absorbed.push(c);
                continue;
            }
            if i == target {
                target_pos = parts.len();
            }
            parts.push(Part { members: c.members, formula: c.formula });
        }
        let merged = absorbed.len();
        if merged > 0 {
            let host = &mut parts[target_pos];
            let mut disjuncts = vec![host.formula.clone()];
            for c in absorbed {
                host.members = host.members.union(&c.members);
                disjuncts.push(c.formula);
            }
            host.formula = DeltaFormula::or(disjuncts);
        }
        Ok((parts, merged))
    }

    fn peeled(&self, side: Side) -> VertexSet {
        let t = self.table(side);
        let n = self.g.size(side);
        let heavy = (0..n).filter(|&v| self.exceeds(t.weight(v).clone(), t.total()));
        VertexSet::from_indices(side, n, heavy).expect("indices in range")
    }

    fn decompose(&self, eps: &BigRational, config: &DecomposeConfig) -> Result<RegularityPartition> {
        let g = self.g;
        let bound = g.n_left() + g.n_right();
        let cap = config.max_iterations.unwrap_or(bound);
        let (peel_left, peel_right) = if config.peel_singletons {
            (self.peeled(Side::Left), self.peeled(Side::Right))
        } else {
            (g.empty_set(Side::Left), g.empty_set(Side::Right))
        };
        let mut params = ParameterSet::empty(g);
        let mut iterations = 0;
        let mut merges = 0;
        let mut last_part_count = 0;
        loop {
            let left_view = ParameterSet { left: peel_left.clone(), right: params.right.clone() };
            let right_view = ParameterSet { left: params.left.clone(), right: peel_right.clone() };
            let (parts_left, ml) = self.parts(&left_view, Side::Left)?;
            let (parts_right, mr) = self.parts(&right_view, Side::Right)?;
            merges += ml + mr;
            let part_count = parts_left.len() + parts_right.len();
            assert!(part_count > last_part_count, "refinement round did not add a part");
            last_part_count = part_count;

            let cols = parts_right.len();
            let flat: Vec<Option<PairVerdict>> = (0..parts_left.len() * cols)
                .into_par_iter()
                .map(|k| self.classify(parts_left[k / cols].members.bits(), parts_right[k % cols].members.bits()))
                .collect::<Result<_>>()?;

            // heaviest unclassified pair, first in row-major order on ties
            let mut worst: Option<(usize, N)> = None;
            for (k, v) in flat.iter().enumerate() {
                if v.is_some() {
                    continue;
                }
                let w =
                    self.mu.of(parts_left[k / cols].members.bits()) * self.nu.of(parts_right[k % cols].members.bits());
                if worst.as_ref().is_none_or(|(_, best)| w > *best) {
                    worst = Some((k, w));
                }
            }

            let Some((k, _)) = worst else {
                let mut verdicts = Vec::with_capacity(parts_left.len());
                let mut it = flat.into_iter();
                for _ in 0..parts_left.len() {
                    verdicts.push(it.by_ref().take(cols).map(|v| v.expect("all pairs classified")).collect());
                }
                return Ok(RegularityPartition {
                    epsilon: eps.clone(),
                    parts_left,
                    parts_right,
                    parameters: params,
                    verdicts,
                    iterations,
                    zero_mass_merges: merges,
                });
            };

            if iterations >= cap {
                return Err(Error::IterationCapExceeded(cap));
            }
            let vi = parts_left[k / cols].members.bits();
            let wj = parts_right[k % cols].members.bits();
            let w = self.witness(vi, wj).expect("an unclassifiable pair always has a positive-mass splitter");
            assert!(!params.on(w.side).contains(w.vertex), "witness is already a parameter");
            params.insert(w.side, w.vertex);
            iterations += 1;
            assert!(iterations < bound, "refinement exceeded |V| + |W| - 1 rounds");
        }
    }
}

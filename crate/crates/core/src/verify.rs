//! From-scratch checkers for regularity partitions.
//!
//! Nothing here calls into the classification code of
//! [`crate::regularity`]: exceptional sets are recomputed vertex by vertex
//! from the raw adjacency, with integer weights derived locally from the
//! measures, and formulas are checked with a pointwise evaluator that does
//! not share code with the set-valued one.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bitset::BitSet;
use crate::definability::DeltaFormula;
use crate::error::{Error, Result};
use crate::generators::Prng;
use crate::graph::{BipartiteGraph, Side, VertexSet};
use crate::measure::{MassInt, MassTable, Measure};
use crate::rational::{ratio, sqrt_upper};
use crate::regularity::{PairCase, PairVerdict, RegularityPartition};

/// Subsets per part are enumerated exhaustively only up to this size.
pub const EXHAUSTIVE_PART_LIMIT: usize = 12;

/// `δ` is rounded up to a multiple of `1 / DELTA_SCALE`.
pub const DELTA_SCALE: u64 = 1_000_000_000;

/// Integer numerators over the lcm of the weight denominators.
struct Weights {
    nums: Vec<BigInt>,
}

impl Weights {
    fn new(m: &Measure) -> Self {
        let den = m.weights().iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let nums = m.weights().iter().map(|w| w.numer() * (&den / w.denom())).collect();
        Weights { nums }
    }

    fn sum<I: IntoIterator<Item = usize>>(&self, it: I) -> BigInt {
        let mut acc = BigInt::zero();
        for v in it {
            acc += &self.nums[v];
        }
        acc
    }
}

/// Exceptional vertices of one clause, computed by definition.
struct Unfolded {
    exc_left: Vec<usize>,
    exc_right: Vec<usize>,
    left_rel: BigRational,
    right_rel: BigRational,
    holds: bool,
}

struct Oracle<'a> {
    g: &'a BipartiteGraph,
    mu: Weights,
    nu: Weights,
}

impl Oracle<'_> {
    /// `x` is exceptional when the mass of `y ∈ other` with
    /// `R(x, y) != want_edge` exceeds `eps` times the mass of `other`.
    fn exceptional(
        &self,
        subject: Side,
        members: &[usize],
        other: &[usize],
        eps: &BigRational,
        want_edge: bool,
    ) -> Vec<usize> {
        let w_other = match subject {
            Side::Left => &self.nu,
            Side::Right => &self.mu,
        };
        let edge = |x: usize, y: usize| match subject {
            Side::Left => self.g.has_edge(x, y),
            Side::Right => self.g.has_edge(y, x),
        };
        let total = w_other.sum(other.iter().copied());
        members
            .iter()
            .copied()
            .filter(|&x| {
                let bad = w_other.sum(other.iter().copied().filter(|&y| edge(x, y) != want_edge));
                // bad / total > eps
                BigRational::from(bad) > eps * BigRational::from(total.clone())
            })
            .collect()
    }

    fn unfold(&self, vi: &[usize], wj: &[usize], eps: &BigRational, want_edge: bool) -> Unfolded {
        let exc_left = self.exceptional(Side::Left, vi, wj, eps, want_edge);
        let exc_right = self.exceptional(Side::Right, wj, vi, eps, want_edge);
        let left_rel = BigRational::new(self.mu.sum(exc_left.iter().copied()), self.mu.sum(vi.iter().copied()));
        let right_rel = BigRational::new(self.nu.sum(exc_right.iter().copied()), self.nu.sum(wj.iter().copied()));
        let holds = &left_rel <= eps && &right_rel <= eps;
        Unfolded { exc_left, exc_right, left_rel, right_rel, holds }
    }

    fn check_positive(&self, vi: &[usize], wj: &[usize]) -> Result<()> {
        if self.mu.sum(vi.iter().copied()).is_zero() || self.nu.sum(wj.iter().copied()).is_zero() {
            return Err(Error::ZeroMeasurePart);
        }
        Ok(())
    }
}

fn verdict_from(case: PairCase, u: Unfolded, n_left: usize, n_right: usize, both_hold: bool) -> PairVerdict {
    PairVerdict {
        case,
        exc_left_mass: u.left_rel,
        exc_right_mass: u.right_rel,
        exc_left: VertexSet::from_indices(Side::Left, n_left, u.exc_left).expect("in range"),
        exc_right: VertexSet::from_indices(Side::Right, n_right, u.exc_right).expect("in range"),
        both_hold,
    }
}

/// Classification by direct unfolding of the two clauses. Used to
/// cross-check [`crate::regularity::classify_pair`].
pub fn oracle_goodness(
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
    if mu.len() != g.n_left() || nu.len() != g.n_right() || vi.universe() != g.n_left() || wj.universe() != g.n_right()
    {
        return Err(Error::ShapeMismatch("measures or parts do not match the graph".into()));
    }
    let oracle = Oracle { g, mu: Weights::new(mu), nu: Weights::new(nu) };
    let (a, b) = (vi.to_vec(), wj.to_vec());
    oracle.check_positive(&a, &b)?;
    let dense = oracle.unfold(&a, &b, eps, true);
    let sparse = oracle.unfold(&a, &b, eps, false);
    Ok(match (dense.holds, sparse.holds) {
        (true, both) => Some(verdict_from(PairCase::Dense, dense, g.n_left(), g.n_right(), both)),
        (false, true) => Some(verdict_from(PairCase::Sparse, sparse, g.n_left(), g.n_right(), false)),
        (false, false) => None,
    })
}

/// Recomputed status of one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub left: usize,
    pub right: usize,
    pub stored_case: PairCase,
    pub dense_holds: bool,
    pub sparse_holds: bool,
    /// Recomputed relative exceptional masses for the stored case.
    pub exc_left_mass: BigRational,
    pub exc_right_mass: BigRational,
    pub pass: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub pairs: Vec<PairCheck>,
    pub partition_laws: bool,
    pub formula_faithful: bool,
    pub all_pass: bool,
    pub failures: Vec<String>,
}

/// Whether `x` satisfies `f`; `None` if a parameter is out of range.
fn satisfies(f: &DeltaFormula, g: &BipartiteGraph, subject: Side, x: usize) -> Option<bool> {
    match f {
        DeltaFormula::Edge { param } => {
            let p = *param;
            match subject {
                Side::Left => (p < g.n_right()).then(|| g.has_edge(x, p)),
                Side::Right => (p < g.n_left()).then(|| g.has_edge(p, x)),
            }
        }
        DeltaFormula::Equals { param } => (*param < g.size(subject)).then_some(*param == x),
        DeltaFormula::Not { child } => satisfies(child, g, subject, x).map(|b| !b),
        DeltaFormula::And { children } => {
            let mut all = true;
            for c in children {
                all &= satisfies(c, g, subject, x)?;
            }
            Some(all)
        }
        DeltaFormula::Or { children } => {
            let mut any = false;
            for c in children {
                any |= satisfies(c, g, subject, x)?;
            }
            Some(any)
        }
        DeltaFormula::True => Some(true),
    }
}

fn check_shape(g: &BipartiteGraph, mu: &Measure, nu: &Measure, p: &RegularityPartition) -> Result<()> {
    if mu.len() != g.n_left() || nu.len() != g.n_right() {
        return Err(Error::ShapeMismatch("measure length differs from side size".into()));
    }
    for side in [Side::Left, Side::Right] {
        for (i, part) in p.parts(side).iter().enumerate() {
            if part.members.side() != side || part.members.universe() != g.size(side) {
                return Err(Error::ShapeMismatch(format!("{side} part {i} does not live on the {side} side")));
            }
        }
    }
    if p.verdicts.len() != p.parts_left.len() || p.verdicts.iter().any(|row| row.len() != p.parts_right.len()) {
        return Err(Error::ShapeMismatch("verdict matrix does not match part counts".into()));
    }
    if !p.epsilon.is_positive() {
        return Err(Error::InvalidEpsilon(p.epsilon.to_string()));
    }
    Ok(())
}

pub fn check_theorem(
    g: &BipartiteGraph,
    mu: &Measure,
    nu: &Measure,
    partition: &RegularityPartition,
) -> Result<VerificationReport> {
    check_shape(g, mu, nu, partition)?;
    let oracle = Oracle { g, mu: Weights::new(mu), nu: Weights::new(nu) };
    let mut failures = Vec::new();

    let mut partition_laws = true;
    for side in [Side::Left, Side::Right] {
        let weights = match side {
            Side::Left => &oracle.mu,
            Side::Right => &oracle.nu,
        };
        let mut owner: Vec<Option<usize>> = vec![None; g.size(side)];
        for (i, part) in partition.parts(side).iter().enumerate() {
            if part.members.is_empty() {
                partition_laws = false;
                failures.push(format!("{side} part {i} is empty"));
            } else if weights.sum(part.members.iter()).is_zero() {
                partition_laws = false;
                failures.push(format!("{side} part {i} has zero measure"));
            }
            for v in part.members.iter() {
                if let Some(prev) = owner[v].replace(i) {
                    partition_laws = false;
                    failures.push(format!("{side} vertex {v} lies in parts {prev} and {i}"));
                }
            }
        }
        for (v, o) in owner.iter().enumerate() {
            if o.is_none() {
                partition_laws = false;
                failures.push(format!("{side} vertex {v} lies in no part"));
            }
        }
    }

    let mut formula_faithful = true;
    for side in [Side::Left, Side::Right] {
        for (i, part) in partition.parts(side).iter().enumerate() {
            let ok = (0..g.size(side)).all(|x| satisfies(&part.formula, g, side, x) == Some(part.members.contains(x)));
            if !ok {
                formula_faithful = false;
                failures.push(format!("{side} part {i}: formula does not define its members"));
            }
        }
    }

    let eps = &partition.epsilon;
    let mut pairs = Vec::new();
    for (i, vp) in partition.parts_left.iter().enumerate() {
        let a = vp.members.to_vec();
        for (j, wp) in partition.parts_right.iter().enumerate() {
            let b = wp.members.to_vec();
            let stored = &partition.verdicts[i][j];
            if a.is_empty() || b.is_empty() || oracle.check_positive(&a, &b).is_err() {
                failures.push(format!("pair ({i}, {j}): part of zero measure"));
                pairs.push(PairCheck {
                    left: i,
                    right: j,
                    stored_case: stored.case,
                    dense_holds: false,
                    sparse_holds: false,
                    exc_left_mass: BigRational::zero(),
                    exc_right_mass: BigRational::zero(),
                    pass: false,
                    failure: Some("zero-measure part".into()),
                });
                continue;
            }
            let dense = oracle.unfold(&a, &b, eps, true);
            let sparse = oracle.unfold(&a, &b, eps, false);
            let (dense_holds, sparse_holds) = (dense.holds, sparse.holds);
            let mine = match stored.case {
                PairCase::Dense => dense,
                PairCase::Sparse => sparse,
            };
            let failure = if !mine.holds {
                Some(format!("{:?} clause does not hold", stored.case))
            } else if stored.exc_left.to_vec() != mine.exc_left || stored.exc_right.to_vec() != mine.exc_right {
                Some("stored exceptional sets differ from recomputation".to_string())
            } else if stored.exc_left_mass != mine.left_rel || stored.exc_right_mass != mine.right_rel {
                Some("stored exceptional masses differ from recomputation".to_string())
            } else if stored.both_hold != (dense_holds && sparse_holds) {
                Some("both_hold flag differs from recomputation".to_string())
            } else if stored.case == PairCase::Sparse && dense_holds {
                Some("Dense clause holds and takes precedence".to_string())
            } else {
                None
            };
            if let Some(f) = &failure {
                failures.push(format!("pair ({i}, {j}): {f}"));
            }
            pairs.push(PairCheck {
                left: i,
                right: j,
                stored_case: stored.case,
                dense_holds,
                sparse_holds,
                exc_left_mass: mine.left_rel,
                exc_right_mass: mine.right_rel,
                pass: failure.is_none(),
                failure,
            });
        }
    }
    let all_pass = partition_laws && formula_faithful && pairs.iter().all(|p| p.pass);
    Ok(VerificationReport { pairs, partition_laws, formula_faithful, all_pass, failures })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    Exhaustive,
    /// `budget` subset pairs in total, spread round-robin over the pairs.
    Sampled {
        budget: u64,
        seed: u64,
    },
}

/// Which quantifier order failed: `Left` means too much of `A` sees too
/// little of `B`; `Right` is the dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaViolation {
    pub left_part: usize,
    pub right_part: usize,
    pub a_set: Vec<usize>,
    pub b_set: Vec<usize>,
    pub direction: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaRegularityReport {
    pub delta: BigRational,
    pub mode: DeltaMode,
    pub pairs_checked: usize,
    pub subset_pairs_tested: u64,
    pub violation_count: u64,
    /// At most [`MAX_RECORDED_VIOLATIONS`] examples.
    pub violations: Vec<DeltaViolation>,
}

pub const MAX_RECORDED_VIOLATIONS: usize = 100;

/// `δ`: the rational upper bound of `sqrt(2 eps)` at `1e-9` resolution.
pub fn delta_for(eps: &BigRational) -> BigRational {
    sqrt_upper(&(eps * ratio(2, 1)), DELTA_SCALE)
}

struct DeltaCtx<'a, N> {
    g: &'a BipartiteGraph,
    mu: &'a MassTable<N>,
    nu: &'a MassTable<N>,
    d_num: N,
    d_den: N,
}

struct SampledPair {
    i: usize,
    j: usize,
    want_edge: bool,
    vi: BitSet,
    wj: BitSet,
    cand_v: BitSet,
    cand_w: BitSet,
}

struct Tally {
    tested: u64,
    count: u64,
    recorded: Vec<DeltaViolation>,
}

impl Tally {
    fn record(&mut self, v: impl FnOnce() -> DeltaViolation) {
        self.count += 1;
        if self.recorded.len() < MAX_RECORDED_VIOLATIONS {
            self.recorded.push(v());
        }
    }
}

impl<N: MassInt> DeltaCtx<'_, N> {
    fn at_least_delta(&self, part: &N, whole: &N) -> bool {
        part.clone() * self.d_den.clone() >= self.d_num.clone() * whole.clone()
    }

    fn above_delta(&self, part: &N, whole: &N) -> bool {
        part.clone() * self.d_den.clone() > self.d_num.clone() * whole.clone()
    }

    /// `bad_rows[x]` is the set of local opposite indices `y` with
    /// `R(x, y) != want_edge`.
    fn local_bad_rows(&self, side: Side, members: &[usize], other: &[usize], want_edge: bool) -> Vec<usize> {
        members
            .iter()
            .map(|&x| {
                let nb = self.g.neighbors(side, x);
                other.iter().enumerate().filter(|&(_, &y)| nb.contains(y) != want_edge).fold(0, |m, (k, _)| m | 1 << k)
            })
            .collect()
    }

    fn subset_masses(t: &MassTable<N>, members: &[usize]) -> Vec<N> {
        let mut out = vec![N::zero(); 1 << members.len()];
        for mask in 1usize..out.len() {
            let low = mask.trailing_zeros() as usize;
            out[mask] = out[mask & (mask - 1)].clone() + t.weight(members[low]).clone();
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn exhaustive_pair(&self, i: usize, j: usize, vi: &[usize], wj: &[usize], want_edge: bool, tally: &mut Tally) {
        let mass_v = Self::subset_masses(self.mu, vi);
        let mass_w = Self::subset_masses(self.nu, wj);
        let (full_v, full_w) = ((1usize << vi.len()) - 1, (1usize << wj.len()) - 1);
        let qa: Vec<usize> = (1..=full_v).filter(|&m| self.at_least_delta(&mass_v[m], &mass_v[full_v])).collect();
        let qb: Vec<usize> = (1..=full_w).filter(|&m| self.at_least_delta(&mass_w[m], &mass_w[full_w])).collect();
        let bad_row_v = self.local_bad_rows(Side::Left, vi, wj, want_edge);
        let bad_row_w = self.local_bad_rows(Side::Right, wj, vi, want_edge);
        // a vertex's failure depends only on the opposite subset
        let bad_a_for = |b: usize| -> usize {
            (0..vi.len())
                .filter(|&k| self.above_delta(&mass_w[b & bad_row_v[k]], &mass_w[b]))
                .fold(0, |m, k| m | 1 << k)
        };
        let bad_b_for = |a: usize| -> usize {
            (0..wj.len())
                .filter(|&k| self.above_delta(&mass_v[a & bad_row_w[k]], &mass_v[a]))
                .fold(0, |m, k| m | 1 << k)
        };
        let bad_a: Vec<usize> = qb.iter().map(|&b| bad_a_for(b)).collect();
        let bad_b: Vec<usize> = qa.iter().map(|&a| bad_b_for(a)).collect();
        let expand = |mask: usize, members: &[usize]| -> Vec<usize> {
            members.iter().enumerate().filter(|&(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v).collect()
        };
        for (ia, &a) in qa.iter().enumerate() {
            for (ib, &b) in qb.iter().enumerate() {
                tally.tested += 1;
                if self.above_delta(&mass_v[a & bad_a[ib]], &mass_v[a]) {
                    tally.record(|| DeltaViolation {
                        left_part: i,
                        right_part: j,
                        a_set: expand(a, vi),
                        b_set: expand(b, wj),
                        direction: Side::Left,
                    });
                }
                if self.above_delta(&mass_w[b & bad_b[ia]], &mass_w[b]) {
                    tally.record(|| DeltaViolation {
                        left_part: i,
                        right_part: j,
                        a_set: expand(a, vi),
                        b_set: expand(b, wj),
                        direction: Side::Right,
                    });
                }
            }
        }
    }

    /// Uniform random subset, topped up with uniformly chosen missing
    /// members until it reaches `δ` of the part's mass.
    fn draw(&self, t: &MassTable<N>, part: &BitSet, rng: &mut Prng) -> BitSet {
        let words = part.words().iter().map(|&w| w & rng.next_u64()).collect();
        let mut s = BitSet::from_words(part.universe(), words);
        let whole = t.of(part);
        let mut mass = t.of(&s);
        let mut missing: Vec<usize> = part.difference(&s).iter().collect();
        while !self.at_least_delta(&mass, &whole) {
            assert!(!missing.is_empty(), "the whole part reaches any delta <= 1");
            let v = missing.swap_remove(rng.below(missing.len() as u64) as usize);
            s.insert(v);
            mass = mass + t.weight(v).clone();
        }
        s
    }

    /// Members of `part` with at least one bad entry against `other`;
    /// only these can fail the per-vertex test.
    fn candidates(&self, side: Side, part: &BitSet, other: &BitSet, want_edge: bool) -> BitSet {
        BitSet::from_indices(
            part.universe(),
            part.iter().filter(|&x| {
                let nb = self.g.neighbors(side, x);
                if want_edge {
                    !other.is_subset(nb)
                } else {
                    !other.is_disjoint(nb)
                }
            }),
        )
    }

    /// Members of `a` whose bad share of `b` exceeds `δ`, as a mass.
    fn bad_mass(&self, side: Side, a: &BitSet, cand: &BitSet, b: &BitSet, want_edge: bool) -> N {
        let (ta, tb) = match side {
            Side::Left => (self.mu, self.nu),
            Side::Right => (self.nu, self.mu),
        };
        let mb = tb.of(b);
        a.intersection(cand)
            .iter()
            .filter(|&x| {
                let nb = self.g.neighbors(side, x);
                let bad = if want_edge { tb.of_andnot(b, nb) } else { tb.of_and(b, nb) };
                self.above_delta(&bad, &mb)
            })
            .fold(N::zero(), |acc, x| acc + ta.weight(x).clone())
    }

    #[allow(clippy::too_many_arguments)]
    fn sampled_pair(&self, pair: &SampledPair, rng: &mut Prng, tally: &mut Tally) {
        let (i, j, want_edge) = (pair.i, pair.j, pair.want_edge);
        let a = self.draw(self.mu, &pair.vi, rng);
        let b = self.draw(self.nu, &pair.wj, rng);
        tally.tested += 1;
        if self.above_delta(&self.bad_mass(Side::Left, &a, &pair.cand_v, &b, want_edge), &self.mu.of(&a)) {
            tally.record(|| DeltaViolation {
                left_part: i,
                right_part: j,
                a_set: a.iter().collect(),
                b_set: b.iter().collect(),
                direction: Side::Left,
            });
        }
        if self.above_delta(&self.bad_mass(Side::Right, &b, &pair.cand_w, &a, want_edge), &self.nu.of(&b)) {
            tally.record(|| DeltaViolation {
                left_part: i,
                right_part: j,
                a_set: a.iter().collect(),
                b_set: b.iter().collect(),
                direction: Side::Right,
            });
        }
    }

    fn run(&self, p: &RegularityPartition, mode: DeltaMode) -> Result<Tally> {
        let mut tally = Tally { tested: 0, count: 0, recorded: Vec::new() };
        let pairs: Vec<(usize, usize, bool)> = (0..p.parts_left.len())
            .flat_map(|i| (0..p.parts_right.len()).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, p.verdicts[i][j].case == PairCase::Dense))
            .collect();
        match mode {
            DeltaMode::Exhaustive => {
                for part in p.parts_left.iter().chain(&p.parts_right) {
                    if part.members.len() > EXHAUSTIVE_PART_LIMIT {
                        return Err(Error::PartTooLarge { size: part.members.len(), limit: EXHAUSTIVE_PART_LIMIT });
                    }
                }
                for &(i, j, dense) in &pairs {
                    let vi = p.parts_left[i].members.to_vec();
                    let wj = p.parts_right[j].members.to_vec();
                    self.exhaustive_pair(i, j, &vi, &wj, dense, &mut tally);
                }
            }
            DeltaMode::Sampled { budget, seed } => {
                let prepared: Vec<SampledPair> = pairs
                    .iter()
                    .map(|&(i, j, want_edge)| {
                        let vi = p.parts_left[i].members.bits().clone();
                        let wj = p.parts_right[j].members.bits().clone();
                        SampledPair {
                            i,
                            j,
                            want_edge,
                            cand_v: self.candidates(Side::Left, &vi, &wj, want_edge),
                            cand_w: self.candidates(Side::Right, &wj, &vi, want_edge),
                            vi,
                            wj,
                        }
                    })
                    .collect();
                let mut rng = Prng::new(seed);
                for s in 0..budget {
                    self.sampled_pair(&prepared[(s % prepared.len() as u64) as usize], &mut rng, &mut tally);
                }
            }
        }
        Ok(tally)
    }
}

/// Checks that every pair inherits its verdict on all subsets of at least
/// `δ` relative mass, at tolerance `δ`, in both quantifier orders.
pub fn check_delta_regularity(
    g: &BipartiteGraph,
    mu: &Measure,
    nu: &Measure,
    partition: &RegularityPartition,
    mode: DeltaMode,
) -> Result<DeltaRegularityReport> {
    check_shape(g, mu, nu, partition)?;
    let delta = delta_for(&partition.epsilon);
    let tally = match (mu.small_table(), nu.small_table(), delta.numer().to_u64(), delta.denom().to_u64()) {
        (Some(mt), Some(nt), Some(p), Some(q)) => {
            DeltaCtx { g, mu: mt, nu: nt, d_num: p as u128, d_den: q as u128 }.run(partition, mode)?
        }
        _ => {
            let big = |x: &BigInt| -> BigUint { x.to_biguint().expect("delta is positive") };
            DeltaCtx { g, mu: mu.big_table(), nu: nu.big_table(), d_num: big(delta.numer()), d_den: big(delta.denom()) }
                .run(partition, mode)?
        }
    };
    debug_assert!(delta.numer().sign() == Sign::Plus);
    Ok(DeltaRegularityReport {
        delta,
        mode,
        pairs_checked: partition.parts_left.len() * partition.parts_right.len(),
        subset_pairs_tested: tally.tested,
        violation_count: tally.count,
        violations: tally.recorded,
    })
}

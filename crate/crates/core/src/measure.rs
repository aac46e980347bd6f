//! Finitely additive probability measures on one side of a graph.
//!
//! A [`Measure`] is a vector of nonnegative rational vertex weights summing
//! to exactly 1. Internally the weights are also kept as integer numerators
//! over their least common denominator, so that set masses can be summed
//! without any rational normalisation; when that denominator fits in a
//! `u64`, a `u128` copy is kept for the hot paths.

use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bitset::{combined_bits, BitSet};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side, VertexSet};

/// Unsigned integer type used for exact mass sums.
pub trait MassInt:
    Clone
    + Ord
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + From<u64>
    + Send
    + Sync
    + std::fmt::Debug
{
    fn to_biguint(&self) -> BigUint;
}

impl MassInt for u128 {
    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl MassInt for BigUint {
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}

/// Vertex weights as integer numerators over a shared denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassTable<N> {
    nums: Vec<N>,
    /// Set when every numerator is equal; masses reduce to popcounts.
    uniform: Option<N>,
    den: N,
}

impl<N: MassInt> MassTable<N> {
    /// Numerator of the whole side, i.e. the shared denominator.
    #[inline]
    pub fn total(&self) -> &N {
        &self.den
    }

    #[inline]
    pub fn weight(&self, v: usize) -> &N {
        &self.nums[v]
    }

    fn scaled(&self, count: usize, it: impl Iterator<Item = usize>) -> N {
        match &self.uniform {
            Some(w) => w.clone() * N::from(count as u64),
            None => it.fold(N::zero(), |acc, v| acc + self.nums[v].clone()),
        }
    }

    pub fn of(&self, set: &BitSet) -> N {
        match &self.uniform {
            Some(w) => w.clone() * N::from(set.count() as u64),
            None => set.iter().fold(N::zero(), |acc, v| acc + self.nums[v].clone()),
        }
    }

    /// Mass of `x ∩ y`.
    pub fn of_and(&self, x: &BitSet, y: &BitSet) -> N {
        if self.uniform.is_some() {
            return self.scaled(x.intersection_count(y), std::iter::empty());
        }
        self.scaled(0, combined_bits(x.words(), y.words(), |a, b| a & b))
    }

    /// Mass of `x \ y`.
    pub fn of_andnot(&self, x: &BitSet, y: &BitSet) -> N {
        if self.uniform.is_some() {
            return self.scaled(x.difference_count(y), std::iter::empty());
        }
        self.scaled(0, combined_bits(x.words(), y.words(), |a, b| a & !b))
    }

    pub fn to_rational(&self, mass: &N) -> BigRational {
        BigRational::new(
            BigInt::from_biguint(Sign::Plus, mass.to_biguint()),
            BigInt::from_biguint(Sign::Plus, self.den.to_biguint()),
        )
    }
}

#[derive(Clone, Debug)]
pub struct Measure {
    side: Side,
    weights: Vec<BigRational>,
    big: MassTable<BigUint>,
    small: Option<MassTable<u128>>,
}

impl PartialEq for Measure {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.weights == other.weights
    }
}

impl Eq for Measure {}

impl Measure {
    /// Validates nonnegativity and exact normalisation.
    pub fn from_weights(side: Side, weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMeasure("no weights".into()));
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure(format!("weight {i} is negative")));
        }
        let sum: BigRational = weights.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidMeasure(format!("weights sum to {sum}, not 1")));
        }
        let den = weights.iter().fold(BigUint::one(), |acc, w| acc.lcm(w.denom().magnitude()));
        let nums: Vec<BigUint> =
            weights.iter().map(|w| w.numer().magnitude() * (&den / w.denom().magnitude())).collect();
        let uniform = nums.iter().all(|x| x == &nums[0]).then(|| nums[0].clone());
        let small = den.to_u64().map(|d| MassTable {
            nums: nums.iter().map(|x| x.to_u128().expect("numerator below denominator")).collect(),
            uniform: uniform.as_ref().map(|u| u.to_u128().expect("numerator below denominator")),
            den: d as u128,
        });
        Ok(Measure { side, weights, big: MassTable { nums, uniform, den }, small })
    }

    /// Like [`Measure::from_weights`], additionally checking the weight
    /// count against the graph.
    pub fn for_graph(g: &BipartiteGraph, side: Side, weights: Vec<BigRational>) -> Result<Self> {
        if weights.len() != g.size(side) {
            return Err(Error::InvalidMeasure(format!(
                "{} weights for a {side} side of {} vertices",
                weights.len(),
                g.size(side)
            )));
        }
        Self::from_weights(side, weights)
    }

    pub fn uniform(side: Side, n: usize) -> Self {
        assert!(n > 0, "uniform measure on an empty side");
        let w = BigRational::new(BigInt::one(), BigInt::from(n));
        Self::from_weights(side, vec![w; n]).expect("uniform weights are a probability measure")
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> &BigRational {
        &self.weights[v]
    }

    pub fn is_uniform(&self) -> bool {
        self.big.uniform.is_some()
    }

    pub(crate) fn big_table(&self) -> &MassTable<BigUint> {
        &self.big
    }

    pub(crate) fn small_table(&self) -> Option<&MassTable<u128>> {
        self.small.as_ref()
    }

    pub fn mass(&self, s: &VertexSet) -> Result<BigRational> {
        measure_of(self, s)
    }

    pub(crate) fn check_graph(&self, g: &BipartiteGraph, side: Side) -> Result<()> {
        if self.side != side {
            return Err(Error::SideMismatch { expected: side, found: self.side });
        }
        if self.len() != g.size(side) {
            return Err(Error::InvalidMeasure(format!(
                "measure has {} weights, {side} side has {} vertices",
                self.len(),
                g.size(side)
            )));
        }
        Ok(())
    }
}

/// Uniform weight `1/n` on the chosen side.
pub fn counting_measure(g: &BipartiteGraph, side: Side) -> Measure {
    Measure::uniform(side, g.size(side))
}

pub fn measure_of(m: &Measure, s: &VertexSet) -> Result<BigRational> {
    if m.side != s.side() {
        return Err(Error::SideMismatch { expected: m.side, found: s.side() });
    }
    if m.len() != s.universe() {
        return Err(Error::InvalidMeasure(format!(
            "measure has {} weights, set universe is {}",
            m.len(),
            s.universe()
        )));
    }
    Ok(m.big.to_rational(&m.big.of(s.bits())))
}

/// `Σ μ(a)ν(b)` over `a ∈ A`, `b ∈ B` with `R(a, b) == edges`.
pub fn pair_mass(
    mu: &Measure,
    nu: &Measure,
    a_set: &VertexSet,
    b_set: &VertexSet,
    g: &BipartiteGraph,
    edges: bool,
) -> Result<BigRational> {
    if a_set.side() != Side::Left {
        return Err(Error::SideMismatch { expected: Side::Left, found: a_set.side() });
    }
    if b_set.side() != Side::Right {
        return Err(Error::SideMismatch { expected: Side::Right, found: b_set.side() });
    }
    mu.check_graph(g, Side::Left)?;
    nu.check_graph(g, Side::Right)?;
    let (mt, nt) = (&mu.big, &nu.big);
    let total = a_set.iter().fold(BigUint::zero(), |acc, a| {
        let row = g.neighbors(Side::Left, a);
        let inner = if edges { nt.of_and(b_set.bits(), row) } else { nt.of_andnot(b_set.bits(), row) };
        acc + mt.weight(a) * inner
    });
    Ok(BigRational::new(
        BigInt::from_biguint(Sign::Plus, total),
        BigInt::from_biguint(Sign::Plus, mt.total() * nt.total()),
    ))
}

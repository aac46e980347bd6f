//! Seeded instance families.
//!
//! All randomness comes from SplitMix64 through the draw routines on
//! [`Prng`], so a spec produces the same graph on every platform.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// Identifier of the generator recorded alongside seeded outputs.
pub const PRNG_ALGORITHM: &str = "splitmix64";

pub struct Prng(SplitMix64);

impl Prng {
    pub fn new(seed: u64) -> Self {
        Prng(SplitMix64::from_seed(seed.to_le_bytes()))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `0..n` by rejection; `n > 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % n;
            }
        }
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Fisher-Yates, drawing from the back.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }
}

/// Re-draws the adjacency of `left` random V-vertices and then `right`
/// random W-vertices at density 1/2. Touching `s` vertices raises the
/// ladder index by at most `s`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// `R(a_i, b_j)` iff `i <= j`.
    HalfGraph {
        k: usize,
    },
    /// Disjoint complete blocks `V_t × W_t`; block membership is a seeded
    /// shuffle of the vertex labels.
    RectangleUnion {
        left_sizes: Vec<usize>,
        right_sizes: Vec<usize>,
        seed: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        perturbation: Option<Perturbation>,
    },
    CompleteBipartite {
        n_left: usize,
        n_right: usize,
    },
    EmptyBipartite {
        n_left: usize,
        n_right: usize,
    },
    RandomBipartite {
        n_left: usize,
        n_right: usize,
        #[serde(with = "crate::rational::serde_ratio")]
        density: BigRational,
        seed: u64,
    },
}

fn balanced(r: usize, n: usize) -> Vec<usize> {
    (0..r).map(|t| n / r + usize::from(t < n % r)).collect()
}

impl GeneratorSpec {
    /// `r` blocks of near-equal size on each side.
    pub fn rectangle_union(r: usize, n_left: usize, n_right: usize, seed: u64) -> Self {
        GeneratorSpec::RectangleUnion {
            left_sizes: balanced(r, n_left),
            right_sizes: balanced(r, n_right),
            seed,
            perturbation: None,
        }
    }

    pub fn random(n_left: usize, n_right: usize, density: BigRational, seed: u64) -> Self {
        GeneratorSpec::RandomBipartite { n_left, n_right, density, seed }
    }
}

/// A generated graph plus the vertices a perturbation re-drew.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: BipartiteGraph,
    pub perturbed_left: Vec<usize>,
    pub perturbed_right: Vec<usize>,
}

pub fn generate(spec: &GeneratorSpec) -> Result<BipartiteGraph> {
    generate_detailed(spec).map(|g| g.graph)
}

fn positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSpec(format!("{what} must be at least 1")));
    }
    Ok(())
}

pub fn generate_detailed(spec: &GeneratorSpec) -> Result<Generated> {
    let plain = |graph| Generated { graph, perturbed_left: vec![], perturbed_right: vec![] };
    match spec {
        GeneratorSpec::HalfGraph { k } => {
            positive(*k, "k")?;
            Ok(plain(BipartiteGraph::from_fn(*k, *k, |i, j| i <= j)?))
        }
        GeneratorSpec::CompleteBipartite { n_left, n_right } => {
            positive(*n_left, "n_left")?;
            positive(*n_right, "n_right")?;
            Ok(plain(BipartiteGraph::from_fn(*n_left, *n_right, |_, _| true)?))
        }
        GeneratorSpec::EmptyBipartite { n_left, n_right } => {
            positive(*n_left, "n_left")?;
            positive(*n_right, "n_right")?;
            Ok(plain(BipartiteGraph::from_edges(*n_left, *n_right, [])?))
        }
        GeneratorSpec::RandomBipartite { n_left, n_right, density, seed } => {
            positive(*n_left, "n_left")?;
            positive(*n_right, "n_right")?;
            if density.is_negative() || *density > BigRational::one() {
                return Err(Error::InvalidSpec(format!("density {density} outside [0, 1]")));
            }
            let (p, q) = match (density.numer().to_u64(), density.denom().to_u64()) {
                (Some(p), Some(q)) => (p, q),
                _ => return Err(Error::InvalidSpec("density must have 64-bit numerator and denominator".into())),
            };
            let mut rng = Prng::new(*seed);
            let mut edges = Vec::new();
            for a in 0..*n_left {
                for b in 0..*n_right {
                    if rng.below(q) < p {
                        edges.push((a, b));
                    }
                }
            }
            Ok(plain(BipartiteGraph::from_edges(*n_left, *n_right, edges)?))
        }
        GeneratorSpec::RectangleUnion { left_sizes, right_sizes, seed, perturbation } => {
            rectangle_union(left_sizes, right_sizes, *seed, perturbation.unwrap_or_default())
        }
    }
}

fn rectangle_union(left_sizes: &[usize], right_sizes: &[usize], seed: u64, pert: Perturbation) -> Result<Generated> {
    if left_sizes.is_empty() || left_sizes.len() != right_sizes.len() {
        return Err(Error::InvalidSpec("need the same positive number of blocks on both sides".into()));
    }
    if left_sizes.iter().chain(right_sizes).any(|&s| s == 0) {
        return Err(Error::InvalidSpec("blocks must be nonempty".into()));
    }
    let (n, m) = (left_sizes.iter().sum::<usize>(), right_sizes.iter().sum::<usize>());
    if pert.left > n || pert.right > m {
        return Err(Error::InvalidSpec("perturbation touches more vertices than exist".into()));
    }
    let mut rng = Prng::new(seed);
    let block_of = |sizes: &[usize], rng: &mut Prng| -> Vec<usize> {
        let mut labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(t, &s)| std::iter::repeat_n(t, s)).collect();
        rng.shuffle(&mut labels);
        labels
    };
    let left_block = block_of(left_sizes, &mut rng);
    let right_block = block_of(right_sizes, &mut rng);
    let mut adj: Vec<Vec<bool>> = (0..n).map(|a| (0..m).map(|b| left_block[a] == right_block[b]).collect()).collect();

    let pick = |count: usize, size: usize, rng: &mut Prng| -> Vec<usize> {
        let mut all: Vec<usize> = (0..size).collect();
        rng.shuffle(&mut all);
        let mut chosen = all[..count].to_vec();
        chosen.sort_unstable();
        chosen
    };
    let perturbed_left = pick(pert.left, n, &mut rng);
    for &a in &perturbed_left {
        for cell in adj[a].iter_mut() {
            *cell = rng.coin();
        }
    }
    let perturbed_right = pick(pert.right, m, &mut rng);
    for &b in &perturbed_right {
        for row in adj.iter_mut() {
            row[b] = rng.coin();
        }
    }
    let graph = BipartiteGraph::from_fn(n, m, |a, b| adj[a][b])?;
    Ok(Generated { graph, perturbed_left, perturbed_right })
}

/// Seeded nonnegative rational weights on `n` vertices summing to 1, with
/// numerators drawn from `1..=max_numerator` and the listed vertices set to 0.
pub fn seeded_weights(n: usize, zeros: &[usize], max_numerator: u64, seed: u64) -> Vec<BigRational> {
    let mut rng = Prng::new(seed);
    let raw: Vec<u64> = (0..n).map(|v| if zeros.contains(&v) { 0 } else { 1 + rng.below(max_numerator) }).collect();
    let total: u64 = raw.iter().sum();
    assert!(total > 0, "all weights zero");
    raw.into_iter().map(|x| BigRational::new(BigInt::from(x), BigInt::from(total))).collect()
}

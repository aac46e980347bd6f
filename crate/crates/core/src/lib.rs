//! Stable regularity partitions for finite bipartite graphs.
//!
//! A graph `(V, W, R)` is partitioned into parts `V_1..V_m` and `W_1..W_n`,
//! each cut out by a Boolean combination of neighbourhood atoms, such that
//! every pair `(V_i, W_j)` is either almost complete (`Dense`) or almost
//! empty (`Sparse`) up to an `eps` fraction of exceptional mass on each
//! side. Masses are taken with respect to arbitrary rational vertex
//! weightings, the uniform counting measure being the default.
//!
//! The crate also computes the stability diagnostics that govern how well
//! such partitions behave: the ladder index (longest half-graph pattern)
//! and the splitting rank of a vertex set.

pub mod bitset;
pub mod definability;
pub mod error;
pub mod generators;
pub mod graph;
pub mod measure;
pub mod rational;
pub mod regularity;
pub mod stability;
pub mod verify;

pub use bitset::BitSet;
pub use definability::{type_of, type_partition, DeltaFormula, ParameterSet, Trace, TypeClass};
pub use error::{Error, Result};
pub use generators::{generate, GeneratorSpec, Perturbation, PRNG_ALGORITHM};
pub use graph::{BipartiteGraph, Side, VertexSet};
pub use measure::{counting_measure, measure_of, pair_mass, Measure};
pub use regularity::{
    classify_pair, decompose, find_witness, DecomposeConfig, EpsPolicy, PairCase, PairVerdict, Part,
    RegularityPartition, Witness,
};
pub use stability::{has_ladder, ladder_index, splitting_rank, LadderCertificate, LadderIndex, RankResult, SplitTree};
pub use verify::{
    check_delta_regularity, check_theorem, oracle_goodness, DeltaMode, DeltaRegularityReport, VerificationReport,
};

//! Exact simulation and verification toolkit for ball-permuting models.
//!
//! The computational basis is the set of permutations of `n` labelled balls,
//! so states live in the `n!`-dimensional Hilbert space ℂS_n. The crate
//! provides:
//!
//! - [`perm`]: permutation arithmetic and the mixed-radix (factorial number
//!   system) codec that ranks permutations lexicographically and supports
//!   adjacent content swaps by rewriting only two digits.
//! - [`state`]: a sparse state engine over ℂS_n with partial-swap,
//!   label-dependent swap, rapidity and demolition-measurement gates, exact
//!   amplitudes, traces, Born distributions, sampling, and a Monte-Carlo
//!   normalized-trace estimator.
//! - [`scatter`]: compilation of straight-line particle collision geometries
//!   into rapidity-gate circuits, Yang-Baxter residual checks, and the
//!   postselected gadget compiler that reproduces arbitrary partial-swap
//!   circuits inside the velocity-constrained model.
//! - [`irreps`]: symmetric-group representation machinery — partitions,
//!   standard Young tableaux, Young-Yamanouchi matrices, branching,
//!   characters and projectors, numeric Lie-closure ranks, and compressed
//!   two-row tableau encodings.
//! - [`encoded`]: encoded-qubit constructions — the exchange-interaction
//!   simulator, the Hamming-weight embedding into ℂS_n, the two-label
//!   logical qubit with its compiled CNOT, and a maximally-entangled
//!   trace-sampling toy model.
//! - [`classical`]: deterministic/randomized/nondeterministic classical
//!   ball-permuting oracles, reachability decision procedures, the planar
//!   edge-disjoint-paths instance builder, and the classical Yang-Baxter
//!   identity.
//!
//! Everything is exact at desk scale (`n ≤ 8` for exhaustive sweeps) and
//! deterministic: randomness always enters through a caller-supplied RNG and
//! parallel evaluation is bit-identical to sequential evaluation.

// Sweeps of the form `for n in 2..=8 { … FACTORIALS[n] … }` are the natural
// idiom here; the suggested iterator rewrite obscures them.
#![allow(clippy::needless_range_loop)]

pub mod classical;
pub mod encoded;
pub mod irreps;
pub mod mat;
pub mod par;
pub mod perm;
pub mod scatter;
pub mod state;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("invalid permutation word: {0}")]
    InvalidPermutation(String),
    #[error("digit {digit} out of bounds at index {index} (max {max})")]
    DigitOutOfBounds { digit: u8, index: usize, max: u8 },
    #[error("rank {rank} out of range for n = {n}")]
    RankOutOfRange { rank: u64, n: usize },
    #[error("position {pos} out of range for register of size {n}")]
    PositionOutOfRange { pos: usize, n: usize },
    #[error("label {label} out of range for register of size {n}")]
    LabelOutOfRange { label: u8, n: usize },
    #[error("operation requires a demolition-free circuit")]
    DemolitionPresent,
    #[error("postselected outcome {label} at position {pos} has zero probability")]
    ZeroProbabilityPostselect { label: u8, pos: usize },
    #[error("state specification is empty or has zero norm")]
    ZeroStateVector,
    #[error("unsupported gate for this operation: {0}")]
    UnsupportedGate(&'static str),
    #[error("collision times closer than tolerance near t = {t}")]
    SimultaneousCollisions { t: f64 },
    #[error("scattering configuration is invalid: {0}")]
    BadScatterConfig(&'static str),
    #[error("configurations have different velocity assignments")]
    UnequalVelocities,
    #[error("compiled permutation signatures differ")]
    SignatureMismatch,
    #[error("gadget boundary angle of exactly pi is not compilable")]
    ThetaPiBoundary,
    #[error("probability {0} outside [0, 1]")]
    ProbOutOfRange(f64),
    #[error("swap program carries probabilities; deterministic run expects none")]
    ProbsPresent,
    #[error("swap program carries no probabilities")]
    ProbsMissing,
    #[error("swap ({i},{j}) is not adjacent")]
    NonAdjacentSwap { i: usize, j: usize },
    #[error("{what} = {n} exceeds supported bound {max}")]
    SizeBound {
        what: &'static str,
        n: usize,
        max: usize,
    },
    #[error("basis states have mixed Hamming weights")]
    MixedHammingWeight,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("invalid encoding string: {0}")]
    InvalidBitstring(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

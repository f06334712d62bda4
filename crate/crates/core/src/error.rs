use thiserror::Error;

use crate::multiset::Multiset;

/// Subsets of the ground set are stored as bitmasks; bit `i` is element `i + 1`.
pub type Mask = u32;

/// Formats a mask as a 1-based element list, `{}` for the empty set.
pub fn fmt_mask(mask: Mask) -> String {
    let items: Vec<String> = (0..Mask::BITS)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank table has {got} entries, expected 2^{ground_size} = {expected}")]
    TableSize {
        ground_size: usize,
        got: usize,
        expected: usize,
    },
    #[error("ground set of size {0} exceeds the limit of {max}", max = crate::polymatroid::MAX_GROUND_SIZE)]
    GroundTooLarge(usize),
    #[error("NotNormalized: rank of the empty set is {0}")]
    NotNormalized(u32),
    #[error("NotIncreasing: rk{} = {rank_a} > rk{} = {rank_b}", fmt_mask(*.a), fmt_mask(*.b))]
    NotIncreasing {
        a: Mask,
        b: Mask,
        rank_a: u32,
        rank_b: u32,
    },
    #[error("NotSubmodular: A = {}, B = {}", fmt_mask(*.a), fmt_mask(*.b))]
    NotSubmodular { a: Mask, b: Mask },
    #[error("cage has length {got}, expected {expected}")]
    CageLength { got: usize, expected: usize },
    #[error("cage entry n_{} = {cage} is below rk({{{}}}) = {rank}", .element + 1, .element + 1)]
    CageTooSmall {
        element: usize,
        cage: u32,
        rank: u32,
    },
    #[error("CageExceeded: multiset {multiset} is not contained in the cage {cage}")]
    CageExceeded { multiset: Multiset, cage: Multiset },
    #[error("multiset has {got} entries, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("TooLarge: {what} has size {size}, bound is {bound}")]
    TooLarge {
        what: &'static str,
        size: u128,
        bound: u128,
    },
    #[error("NotAFlat: {0} is not a combinatorial flat")]
    NotAFlat(Multiset),
    #[error("NotGraded: cover {lower} < {upper} does not raise the rank by one")]
    NotGraded { lower: String, upper: String },
    #[error("NoMinimum: the poset has {0} minimal elements")]
    NoMinimum(usize),
    #[error("malformed poset: {0}")]
    MalformedPoset(String),
    #[error("AxiomsFailed: {0}")]
    AxiomsFailed(String),
    #[error("RankZero: operation requires a polymatroid of positive rank")]
    RankZero,
    #[error("truncation set {} has rank zero", fmt_mask(*.0))]
    ZeroRankSet(Mask),
    #[error("element index {index} out of range for ground set of size {size}")]
    ElementOutOfRange { index: usize, size: usize },
    #[error("LoopReduction: element {} is a loop", .0 + 1)]
    LoopReduction(usize),
    #[error("NoAdditiveBasisPair: no bases b of {s}, b' of {t} with b + b' a basis of {product}")]
    NoAdditiveBasisPair {
        s: Multiset,
        t: Multiset,
        product: Multiset,
    },
    #[error("inconsistent structure constant for y_{s} * y_{t}: {first} vs {second}")]
    InconsistentScalar {
        s: Multiset,
        t: Multiset,
        first: String,
        second: String,
    },
    #[error("RetryLimit: no suitable random draw after {0} attempts")]
    RetryLimit(usize),
    #[error("NotPG: subspace is not polymatroid general at {witness}")]
    NotPG { witness: Multiset },
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("ZeroScalar: torus parameter must be nonzero")]
    ZeroScalar,
    #[error("invalid projective point: factor {0} is the zero vector")]
    ZeroFactor(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

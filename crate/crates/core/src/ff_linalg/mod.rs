//! Prime-field arithmetic, seeded sampling and dense rank.

mod field;
mod matrix;
mod sample;

pub use field::{
    is_prime, FieldElement, ModulusError, PrimeModulus, DEFAULT_PRIME, MAX_PRIME, MIN_PRIME,
};
pub use matrix::{rank, rank_bounded, DenseMatrix, MatrixError, RowEchelon};
pub use sample::{
    derive_seed, sample_uniform, splitmix64, trial_seed, UniformStream, DEFAULT_SEED,
};

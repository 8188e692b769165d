//! Dimensions of secant varieties of Chow varieties, computed exactly.

pub mod cli;
pub mod conjecture;
pub mod ff_linalg;
pub mod inductor;
pub mod monomials;
mod serde_dec;
pub mod terracini;

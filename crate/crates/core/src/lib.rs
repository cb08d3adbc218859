//! Exact lattice computations for affine toric varieties that are not
//! necessarily normal.
//!
//! A variety is presented by an integer matrix `A` whose rows span the
//! defining lattice of relations. From that single input the crate derives
//! the binomial equations, the Hilbert basis `B` of the nonnegative kernel
//! (the monomial parametrization), the kernel basis `E` of `B`, and the
//! classification flags that determine which maps into the variety admit
//! extensions from a closed subvariety of their source. The `divisor`
//! module carries out the extension decision itself from divisor and class
//! data, and `cli` exposes everything as a batch command interface.

pub mod cli;
pub mod cones;
pub mod divisor;
mod error;
pub mod hilbert;
pub mod intlin;
pub mod toric;

pub use error::Error;
pub use num_bigint::BigInt;

/// Convenient result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

//! Finite noncommutative covering projections at desk scale.
//!
//! The crate builds concrete covering data for circles, matrix algebras and
//! their fiber products, and audits it against the two defining conditions of a finite covering: a free
//! involutive group action whose invariants are the base algebra, and a frame
//! `{a_i}` with `sum_i a_i g(a_i*) = δ_g`.
//!
//! Everything is finite-dimensional or truncated. Infinite sums become finite
//! sums with an explicit residual. Multiplier algebras collapse to the unital
//! carriers themselves.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line live in the companion `nccover-cli` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod calculus;
pub mod circle;
mod error;
pub mod fiber;
pub mod groups;
pub mod hilbert;
pub mod sampled;
pub mod torus;
mod util;
pub mod verifier;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use algebra::{BlockAlgebra, BlockMatrix, CMatrix, MatrixAlgebra, StarAlgebra};
pub use calculus::{BorelRootMap, UnitaryMatrix};
pub use circle::{CircleAlgebra, CirclePoly, PartitionFrame};
pub use groups::{CyclicGroup, GroupAction, GroupElement};
pub use sampled::{SampledAlgebra, SampledCover, SampledFunction, SampledSpace};
pub use verifier::{CoverStructure, CoveringData, VerificationReport};

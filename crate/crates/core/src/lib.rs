//! Exact-arithmetic computer algebra for the equivariant cohomology rings of
//! Hilbert schemes of points on the affine plane and on the line-bundle
//! surfaces over the projective line.
//!
//! The library realizes the middle-degree equivariant cohomology of the
//! Hilbert scheme of points as symmetric functions: torus-fixed-point classes
//! correspond to Jack polynomials, and the Heisenberg operator calculus on the
//! direct sum over all point counts becomes multiplication by power sums and
//! its adjoint. On the line-bundle surfaces this yields an algorithm for the
//! ordinary cup product via two exact basis transitions and a diagonal
//! (idempotent) multiplication at the fixed points.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere.
//!
//! Module map:
//! - [`partition`]: partitions, Young-diagram combinatorics, hook-style weight
//!   products;
//! - [`symfunc`]: the ring of symmetric functions with monomial, power-sum and
//!   Jack bases, the deformed inner product, and all transition matrices;
//! - [`fock`]: creation/annihilation operators on the Fock space realization;
//! - [`hilb`]: fixed-point classes, pairings, the middle-degree star product,
//!   the basis-transition pipeline and the ordinary cup product;
//! - [`io`]: canonical JSON/CSV serialization shared with the CLI.

pub mod error;
pub mod fock;
pub mod hilb;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod rational;
pub mod symfunc;

pub use error::{Error, Result};
pub use rational::Rat;

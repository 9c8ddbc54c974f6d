//! Exact combinatorics of tropical polyhedral cones.
//!
//! The crate is organized around the polar of a *signed cyclic polyhedral
//! cone*: a system of `p` max-plus inequalities over `d` coordinates whose
//! coefficients are tropical powers of an increasing integer sequence,
//! split into a left- and right-hand side by a sign pattern. Its extreme
//! rays correspond to a family of monotone lattice paths over the sign
//! pattern, which can be enumerated directly or counted by a linear-time
//! automaton DP. The crate provides:
//!
//! * exact max-plus and signed (symmetrized) max-plus scalar arithmetic
//!   ([`semiring`]),
//! * signed determinants, tropical permanents and the Cramer-style closed
//!   forms used to solve the saturation systems ([`linalg`]),
//! * membership, saturation, tangent cones and the extremality test for
//!   generic `Ax <= Bx` systems ([`cone`]),
//! * lattice-path predicates, enumeration, counting automata and the
//!   Gale-evenness bijection ([`paths`]),
//! * construction of signed cyclic cones, their polars, and extreme-ray
//!   enumeration with an independent brute-force oracle ([`cyclic`]),
//! * closed-form upper/lower bounds and the named extremal sign patterns
//!   ([`bounds`]),
//! * exhaustive/randomized maximization of the path count over all sign
//!   patterns ([`search`]),
//! * floating-point checks of the exponential deformation bridge
//!   ([`deform`]),
//! * self-contained verification suites used by the CLI ([`verify`]).
//!
//! All core arithmetic is exact 64-bit integer arithmetic with a
//! distinguished bottom element; overflow is reported, never wrapped.

pub mod bounds;
pub mod cone;
pub mod cyclic;
pub mod deform;
pub mod linalg;
pub mod paths;
pub mod search;
pub mod semiring;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Integer overflow in exact arithmetic or counting.
    #[error("arithmetic overflow")]
    Overflow,
    /// Shape mismatch between a system and a vector, or between matrices.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A square matrix was required.
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    /// A resource guard (size limit) was exceeded.
    #[error("{what} guard exceeded: {got} > {limit}")]
    GuardExceeded {
        what: &'static str,
        got: u64,
        limit: u64,
    },
    /// Malformed row/column index pair.
    #[error("invalid index pair: {0}")]
    InvalidIndexPair(String),
    /// Malformed lattice path.
    #[error("invalid lattice path: {0}")]
    InvalidPath(String),
    /// An operation required a tropically allowed path.
    #[error("path is not tropically allowed for this pattern")]
    PathNotAllowed,
    /// A vector was required to satisfy the system.
    #[error("vector does not belong to the cone")]
    NotMember,
    /// Bad argument outside the other categories.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Positioned parse error for text inputs.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    /// No explicit extremal pattern is known for this size.
    #[error("no attained pattern is covered for p={p}, d={d}")]
    NotCovered { p: usize, d: usize },
    /// An internal consistency check failed; indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use cone::{TangentCone, TropicalIneqSystem, TropicalVector};
pub use cyclic::{ExtremeRay, SignedCyclicSpec};
pub use linalg::{IndexPair, MaxPlusMatrix, SignedMatrix};
pub use paths::{GaleSubset, LatticePath, SignPattern};
pub use semiring::{MaxPlus, Sign, SignedScalar};

//! Exact-arithmetic workbench for tensor border rank.
//!
//! The crate verifies, with no floating point on the critical path, that
//! certain direct sums of graph tensors admit border-rank decompositions
//! strictly smaller than the sum of the summands' border ranks. Witnesses
//! are families of rank-one tensors with ε-polynomial entries; the
//! verification engine computes the limit of their span in the Grassmannian
//! as ε → 0 and checks that the flattening image of the target is contained
//! in that limit. A separate floating-point module evaluates the exponent
//! upper bounds these constructions imply for extended matrix-multiplication
//! tensors, and generates the parameter grids behind the density figures.
//!
//! Modules:
//! - [`scalar`]: arbitrary-precision rationals and ε-polynomials.
//! - [`tensor`]: sparse exact tensors, named families, flattenings, exact rank.
//! - [`limits`]: Grassmannian span limits and witness verification.
//! - [`constructions`]: the four subadditivity constructions and their verifiers.
//! - [`exponent`]: entropy-based exponent bounds, optimizer, figure grids.

pub mod constructions;
pub mod exponent;
pub mod limits;
pub mod par;
pub mod scalar;
pub mod tensor;

use thiserror::Error;

/// Errors shared across the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot divide by eps^{requested}: valuation is {valuation}")]
    ShiftBelowValuation { valuation: usize, requested: usize },
    #[error("tensor order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index {index:?} out of bounds for dims {dims:?}")]
    IndexOutOfBounds { index: Vec<usize>, dims: Vec<usize> },
    #[error("family is dependent over Q(eps): generic rank {rank} < size {size}")]
    DependentFamily { rank: usize, size: usize },
    #[error("span-limit elimination exceeded {limit} replacements")]
    IterationGuard { limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("search guard exceeded: grid has {cells} cells, limit {limit}")]
    SearchGuard { cells: usize, limit: usize },
    #[error("construction identity fails at degree {degree}, index {index:?}")]
    ConstructionIdentity { degree: usize, index: Vec<usize> },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Exact-arithmetic toolkit for lattice 3-polytopes.
//!
//! Everything here is computed over arbitrary-precision integers: convex
//! hulls with exact orientation predicates, lattice-point enumeration,
//! sublattice index, certified lattice width, h*-vectors with an Ehrhart
//! cross-check, unimodular canonical forms, and the complete catalog and
//! decision procedure for non-spanning lattice 3-polytopes (polytopes whose
//! lattice points generate a proper affine sublattice of Z^3).

use num_bigint::BigInt;

pub mod catalog;
pub mod classify;
pub mod equiv;
pub mod geom;
pub mod intlin;
pub mod invariants;

/// Errors shared across all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, need square")]
    NonSquareMatrix { rows: usize, cols: usize },
    #[error("matrix is not unimodular (det {det})")]
    NonUnimodular { det: BigInt },
    #[error("empty input")]
    EmptyInput,
    #[error("input spans an affine space of dimension {dim}, need 3")]
    DimensionDeficient { dim: usize },
    #[error("{point} is not a lattice point of the polytope")]
    NotALatticePoint { point: String },
    #[error("direction {dir} is not primitive nonzero")]
    NonPrimitiveDirection { dir: String },
    #[error("parameters out of domain: {0}")]
    ParamDomain(String),
    #[error("input is lattice-spanning (index 1), width-one extraction needs index > 1")]
    SpanningInput,
    #[error("input has width {width}, width-one extraction needs width 1")]
    NotWidthOne { width: BigInt },
    #[error("a lattice-plane layer contains 3 non-collinear points")]
    NotTwoSegments,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("enumeration region too large: {0}")]
    ResourceLimit(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

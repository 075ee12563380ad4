use thiserror::Error;

use crate::classify::Certificate;
use crate::exact::QVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("malformed document: {0}")]
    Document(String),

    #[error("facet {index}: {source}")]
    Facet {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("facet {index} has a zero normal")]
    ZeroNormal { index: usize },

    #[error("facets {first} and {second} have normals pointing in the same direction")]
    DuplicateDirection { first: usize, second: usize },

    #[error("need at least one normal in a positive dimension")]
    EmptyNormalSet,

    #[error("the constraint system is unbounded along {direction}")]
    Unbounded { direction: QVector },

    #[error("the constraint system is infeasible (Farkas multipliers {multipliers})")]
    Infeasible { multipliers: QVector },

    #[error("facet {index} with normal {normal} is redundant")]
    RedundantFacet { index: usize, normal: QVector },

    #[error("the polytope is not full-dimensional")]
    NotFullDimensional,

    #[error("the given vectors are linearly dependent")]
    Singular,

    #[error("point {point} lies outside the polytope")]
    OutsidePolytope { point: QVector },

    #[error("vertex {point} is not simple: {} tight normals", tight.len())]
    NonSimpleVertex { point: QVector, tight: Vec<QVector> },

    #[error("the normal set is not strongly monotypic ({certificate})")]
    NotStronglyMonotypic { certificate: Box<Certificate> },

    #[error("the normal set is not monotypic ({certificate})")]
    NotMonotypic { certificate: Box<Certificate> },

    #[error("{what}: {count} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no cone of the construction contains the tight normals of vertex {vertex}")]
    AssignmentFailure { vertex: QVector },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for this error: 1 when a checked property fails,
    /// 2 for bad input, 3 for a violated internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotStronglyMonotypic { .. } => 1,
            Error::AssignmentFailure { .. } | Error::Internal(_) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ParseRational(_) => "parse_rational",
            Error::Document(_) => "document",
            Error::Facet { .. } => "facet",
            Error::ZeroNormal { .. } => "zero_normal",
            Error::DuplicateDirection { .. } => "duplicate_direction",
            Error::EmptyNormalSet => "empty_normal_set",
            Error::Unbounded { .. } => "unbounded",
            Error::Infeasible { .. } => "empty",
            Error::RedundantFacet { .. } => "redundant_facet",
            Error::NotFullDimensional => "not_full_dimensional",
            Error::Singular => "singular",
            Error::OutsidePolytope { .. } => "outside_polytope",
            Error::NonSimpleVertex { .. } => "non_simple_vertex",
            Error::NotStronglyMonotypic { .. } => "not_strongly_monotypic",
            Error::NotMonotypic { .. } => "not_monotypic",
            Error::TooLarge { .. } => "too_large",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::AssignmentFailure { .. } => "assignment_failure",
            Error::Internal(_) => "internal",
        }
    }
}

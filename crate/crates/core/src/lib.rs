//! Exact tools for strongly monotypic polytopes and their illumination.
//!
//! A polytope is given by facet normals and offsets. The crate decides
//! whether its normal set is monotypic or strongly monotypic (with
//! re-checkable certificates), extracts the skeleton decomposition of a
//! strongly monotypic normal set, and builds an explicit set of at most `2ⁿ`
//! illuminating directions. A brute-force oracle computes the true minimum
//! illumination number for comparison. All arithmetic is exact.

pub mod classify;
pub mod cli;
pub mod error;
pub mod exact;
pub mod fan;
pub mod generators;
pub mod illuminate;
pub mod io;
pub mod oracle;
pub mod polytope;
pub mod position;
pub mod skeleton;

pub use classify::{Certificate, ClassificationVerdict, Method, Verdict};
pub use error::{Error, Result};
pub use exact::{QMatrix, QVector, Rational};
pub use illuminate::IlluminationSet;
pub use polytope::{HPolytope, Location, NormalSet, Vertex};
pub use skeleton::Skeleton;

//! Simplicial fans spanned by facet normals.
//!
//! For a monotypic normal set there is exactly one simplicial fan with rays
//! among the normals, and it is the normal fan of every polytope with those
//! normals. Uniqueness is checked by comparing the fan of all full-rank
//! primitive subsets against the vertex normal fan of a concrete polytope and
//! confirming that no two primitive cones overlap in their interiors.

use itertools::Itertools;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify;
use crate::error::{Error, Result};
use crate::exact::{self, QVector, Rational};
use crate::polytope::{HPolytope, NormalSet, Vertex};
use crate::position;

/// A full-dimensional simplicial cone; `generators` index the normal set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanCone {
    pub generators: Vec<usize>,
    pub associated_vertex: Option<Vertex>,
}

/// All `n`-subsets that are primitive and separated from the origin.
pub fn enumerate_primitive_bases(normals: &NormalSet) -> Result<Vec<FanCone>> {
    let candidates: Vec<Vec<usize>> = (0..normals.len()).combinations(normals.dim()).collect();
    let keep: Vec<Result<bool>> = candidates
        .par_iter()
        .map(|c| {
            let gens = normals.select(c);
            Ok(position::is_primitive(&gens, normals.normals())?
                && position::separating_functional(&gens)?.is_some())
        })
        .collect();
    let mut cones = Vec::new();
    for (generators, keep) in candidates.into_iter().zip(keep) {
        if keep? {
            cones.push(FanCone {
                generators,
                associated_vertex: None,
            });
        }
    }
    Ok(cones)
}

/// One cone per vertex, spanned by its tight normals. Requires a simple
/// polytope.
pub fn normal_fan(polytope: &HPolytope) -> Result<Vec<FanCone>> {
    if let Some(bad) = polytope.non_simple_vertices().next() {
        return Err(Error::NonSimpleVertex {
            point: bad.point.clone(),
            tight: polytope.normal_set().select(&bad.tight),
        });
    }
    let mut cones: Vec<FanCone> = polytope
        .vertices()
        .iter()
        .map(|v| FanCone {
            generators: v.tight.clone(),
            associated_vertex: Some(v.clone()),
        })
        .collect();
    cones.sort_by(|a, b| a.generators.cmp(&b.generators));
    Ok(cones)
}

/// A point in the interiors of both `pos first` and `pos second`, if any.
pub fn interior_intersection(first: &[QVector], second: &[QVector]) -> Option<QVector> {
    // λ = 1 + α, θ = 1 + β with α, β ≥ 0 and ∑ λ x = ∑ θ y.
    let dim = first.first()?.dim();
    let width = first.len() + second.len();
    let rows: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            first
                .iter()
                .map(|x| x[r].clone())
                .chain(second.iter().map(|y| -y[r].clone()))
                .collect()
        })
        .collect();
    let sum = |set: &[QVector]| set.iter().fold(QVector::zeros(dim), |acc, v| acc.add(v));
    let rhs = sum(second).sub(&sum(first));
    let alpha = exact::nonnegative_solution(&rows, rhs.entries(), width)?;
    let lambda: Vec<Rational> = alpha[..first.len()]
        .iter()
        .map(|a| a + Rational::one())
        .collect();
    Some(exact::combine(&lambda, first))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub first: Vec<QVector>,
    pub second: Vec<QVector>,
    pub point: QVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanUniquenessReport {
    pub unique: bool,
    pub cone_count: usize,
    pub vertex_count: usize,
    /// Primitive bases that are not the tight set of any vertex.
    pub only_primitive: Vec<Vec<QVector>>,
    /// Vertex tight sets that are not primitive bases.
    pub only_normal_fan: Vec<Vec<QVector>>,
    pub overlap: Option<Overlap>,
}

/// Checks that the primitive-basis fan of `N(P)` equals the normal fan of
/// `P` and that its cones have pairwise disjoint interiors.
pub fn verify_fan_uniqueness(polytope: &HPolytope) -> Result<FanUniquenessReport> {
    let normals = polytope.normal_set();
    let mono = classify::check_monotypy(normals)?;
    if let Some(certificate) = mono.certificate {
        return Err(Error::NotMonotypic {
            certificate: Box::new(certificate),
        });
    }
    let bases: Vec<Vec<usize>> = enumerate_primitive_bases(normals)?
        .into_iter()
        .map(|c| c.generators)
        .collect();
    let fan: Vec<Vec<usize>> = normal_fan(polytope)?
        .into_iter()
        .map(|c| c.generators)
        .collect();
    let only_primitive: Vec<Vec<QVector>> = bases
        .iter()
        .filter(|b| !fan.contains(b))
        .map(|b| normals.select(b))
        .collect();
    let only_normal_fan: Vec<Vec<QVector>> = fan
        .iter()
        .filter(|c| !bases.contains(c))
        .map(|c| normals.select(c))
        .collect();
    let pairs = (0..bases.len()).flat_map(|i| (i + 1..bases.len()).map(move |j| (i, j)));
    let overlap = classify::first_in_order(pairs, |&(i, j)| {
        let first = normals.select(&bases[i]);
        let second = normals.select(&bases[j]);
        Ok(interior_intersection(&first, &second).map(|point| Overlap {
            first,
            second,
            point,
        }))
    })?;
    Ok(FanUniquenessReport {
        unique: only_primitive.is_empty() && only_normal_fan.is_empty() && overlap.is_none(),
        cone_count: bases.len(),
        vertex_count: polytope.vertices().len(),
        only_primitive,
        only_normal_fan,
        overlap,
    })
}

//! Explicit illumination of strongly monotypic polytopes by `∏ |X_l|`
//! directions.
//!
//! Every choice of one element `x_l` from each skeleton part gives the
//! simplicial cone `C = pos ⋃ (X_l ∖ {x_l})`. These cones tile the space and
//! the normal fan refines them. The direction of a cone is the unique `v`
//! with `⟨g, v⟩ = 1` on its generators, so `⟨y, v⟩ > 0` on the cone minus the
//! origin. A vertex is illuminated by the direction of any cone containing
//! its tight normals.
//!
//! A direction `v` illuminates a boundary point `x` iff `⟨n, v⟩ > 0` for every
//! normal tight at `x`. Every boundary point's tight set is contained in the
//! tight set of some vertex, so checking vertices covers the boundary.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::classify;
use crate::error::{Error, Result};
use crate::exact::{self, QMatrix, QVector, Rational};
use crate::polytope::{HPolytope, Location};
use crate::position;
use crate::skeleton::{self, Skeleton};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub vertex: QVector,
    pub direction: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IlluminationSet {
    /// Unscaled cone directions.
    pub directions: Vec<QVector>,
    /// Generators of the cone behind each direction.
    pub cones: Vec<Vec<QVector>>,
    #[serde(with = "exact::rational_str")]
    pub delta: Rational,
    #[serde(with = "exact::rational_str")]
    pub epsilon: Rational,
    /// `epsilon · directions[j]`.
    pub scaled: Vec<QVector>,
    pub assignment: Vec<Assignment>,
}

impl IlluminationSet {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn direction_for(&self, vertex: &QVector) -> Option<usize> {
        self.assignment
            .iter()
            .find(|a| &a.vertex == vertex)
            .map(|a| a.direction)
    }
}

/// Generator sets `⋃ (X_l ∖ {x_l})` for all choices `(x₁, …, x_k)`, with the
/// choice in the first part varying slowest.
pub fn cone_selections(skeleton: &Skeleton) -> Result<Vec<Vec<QVector>>> {
    let n = skeleton.dim();
    let mut out = Vec::new();
    for choice in skeleton
        .parts
        .iter()
        .map(|p| 0..p.len())
        .multi_cartesian_product()
    {
        let generators: Vec<QVector> = skeleton
            .parts
            .iter()
            .zip(&choice)
            .flat_map(|(part, &dropped)| {
                part.iter()
                    .enumerate()
                    .filter(move |&(i, _)| i != dropped)
                    .map(|(_, g)| g.clone())
            })
            .collect();
        if generators.len() != n || exact::rank(&generators) != n {
            return Err(Error::Internal(format!(
                "cone selection {choice:?} does not give {n} independent generators"
            )));
        }
        out.push(generators);
    }
    Ok(out)
}

/// The unique `v` with `⟨g, v⟩ = 1` for every generator.
pub fn cone_direction(generators: &[QVector]) -> Result<QVector> {
    let Some(dim) = generators.first().map(QVector::dim) else {
        return Err(Error::Singular);
    };
    if generators.len() != dim {
        return Err(Error::Singular);
    }
    let ones = QVector::new(vec![Rational::one(); dim]);
    QMatrix::from_rows(generators.to_vec())?
        .solve(&ones)?
        .ok_or(Error::Singular)
}

/// Half the smallest positive slack `h(n) − ⟨n, x⟩` over vertices `x` and
/// normals `n`. With this δ, the normals within δ of a vertex are exactly
/// its tight normals.
pub fn compute_delta(polytope: &HPolytope) -> Result<Rational> {
    let mut smallest: Option<Rational> = None;
    for vertex in polytope.vertices() {
        for facet in 0..polytope.facet_count() {
            let s = polytope.slack(facet, &vertex.point);
            if s.is_positive() && smallest.as_ref().is_none_or(|m| s < *m) {
                smallest = Some(s);
            }
        }
    }
    let delta = smallest
        .map(|s| s / exact::int(2))
        .ok_or_else(|| Error::Internal("no vertex has positive slack to any facet".into()))?;
    for vertex in polytope.vertices() {
        let near = crate::polytope::tight_normals(polytope, &vertex.point, &delta)?;
        if near != vertex.tight {
            return Err(Error::Internal(format!(
                "normals within {delta} of vertex {} differ from its tight set",
                vertex.point
            )));
        }
    }
    Ok(delta)
}

/// `δ / max |⟨n, v_j⟩|` over pairs with `⟨n, v_j⟩ < 0`, or `δ` when no inner
/// product is negative. Then `ε |⟨m, v_j⟩| ≤ δ` for every such pair.
pub fn compute_epsilon(
    polytope: &HPolytope,
    directions: &[QVector],
    delta: &Rational,
) -> Result<Rational> {
    if !delta.is_positive() {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let worst = directions
        .iter()
        .flat_map(|v| polytope.normals().iter().map(move |n| n.dot(v)))
        .filter(Signed::is_negative)
        .map(|p| p.abs())
        .max();
    Ok(match worst {
        Some(m) => delta / m,
        None => delta.clone(),
    })
}

pub fn build_illumination_set(polytope: &HPolytope) -> Result<IlluminationSet> {
    let normals = polytope.normal_set();
    let strong = classify::check_strong_monotypy(normals)?;
    if let Some(certificate) = strong.certificate {
        return Err(Error::NotStronglyMonotypic {
            certificate: Box::new(certificate),
        });
    }
    let skeleton = skeleton::extract_skeleton(normals)?;
    let cones = cone_selections(&skeleton)?;
    let directions = cones
        .iter()
        .map(|c| cone_direction(c))
        .collect::<Result<Vec<_>>>()?;
    let delta = compute_delta(polytope)?;
    let epsilon = compute_epsilon(polytope, &directions, &delta)?;
    let mut assignment = Vec::with_capacity(polytope.vertices().len());
    for vertex in polytope.vertices() {
        let tight = normals.select(&vertex.tight);
        let mut found = None;
        for (j, cone) in cones.iter().enumerate() {
            let mut contains = true;
            for n in &tight {
                if position::cone_membership(n, cone)?.is_none() {
                    contains = false;
                    break;
                }
            }
            if contains {
                found = Some(j);
                break;
            }
        }
        let direction = found.ok_or_else(|| Error::AssignmentFailure {
            vertex: vertex.point.clone(),
        })?;
        assignment.push(Assignment {
            vertex: vertex.point.clone(),
            direction,
        });
    }
    let scaled = directions.iter().map(|v| v.scale(&epsilon)).collect();
    Ok(IlluminationSet {
        directions,
        cones,
        delta,
        epsilon,
        scaled,
        assignment,
    })
}

/// `⟨n, v⟩ > 0` for every normal tight at `x`.
pub fn illuminates(polytope: &HPolytope, x: &QVector, direction: &QVector) -> bool {
    (0..polytope.facet_count())
        .filter(|&f| polytope.slack(f, x).is_zero())
        .all(|f| polytope.normals()[f].dot(direction).is_positive())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCheck {
    pub vertex: QVector,
    pub direction: Option<usize>,
    /// `⟨n, v⟩ > 0` for all tight normals.
    pub directional: bool,
    /// `x − ε v` is interior.
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IlluminationReport {
    pub passed: bool,
    pub direction_count: usize,
    #[serde(with = "exact::rational_str")]
    pub epsilon: Rational,
    pub vertices: Vec<VertexCheck>,
}

impl IlluminationReport {
    pub fn failures(&self) -> impl Iterator<Item = &VertexCheck> {
        self.vertices
            .iter()
            .filter(|c| !(c.directional && c.interior))
    }
}

fn check_vertex(
    polytope: &HPolytope,
    vertex: &QVector,
    directions: &[QVector],
    epsilon: &Rational,
    j: usize,
) -> VertexCheck {
    let v = &directions[j];
    let moved = vertex.sub(&v.scale(epsilon));
    VertexCheck {
        vertex: vertex.clone(),
        direction: Some(j),
        directional: illuminates(polytope, vertex, v),
        interior: polytope.point_location(&moved) == Location::Interior,
    }
}

fn unassigned(vertex: &QVector) -> VertexCheck {
    VertexCheck {
        vertex: vertex.clone(),
        direction: None,
        directional: false,
        interior: false,
    }
}

fn report(checks: Vec<VertexCheck>, count: usize, epsilon: &Rational) -> IlluminationReport {
    IlluminationReport {
        passed: checks.iter().all(|c| c.directional && c.interior),
        direction_count: count,
        epsilon: epsilon.clone(),
        vertices: checks,
    }
}

fn check_dims(polytope: &HPolytope, directions: &[QVector]) -> Result<()> {
    if let Some(bad) = directions.iter().find(|d| d.dim() != polytope.dim()) {
        return Err(Error::DimensionMismatch {
            expected: polytope.dim(),
            found: bad.dim(),
        });
    }
    Ok(())
}

/// Checks the assignment of `set` at every vertex of `polytope`: the
/// assigned direction must be positive on all tight normals, and moving the
/// vertex by `ε v` must land strictly inside.
pub fn verify_illumination(
    polytope: &HPolytope,
    set: &IlluminationSet,
) -> Result<IlluminationReport> {
    check_dims(polytope, &set.directions)?;
    let checks = polytope
        .vertices()
        .iter()
        .map(|vertex| match set.direction_for(&vertex.point) {
            Some(j) if j < set.directions.len() => {
                check_vertex(polytope, &vertex.point, &set.directions, &set.epsilon, j)
            }
            _ => unassigned(&vertex.point),
        })
        .collect();
    Ok(report(checks, set.directions.len(), &set.epsilon))
}

/// Like [`verify_illumination`] for a bare list of directions: each vertex
/// takes the first direction passing both checks.
pub fn verify_directions(
    polytope: &HPolytope,
    directions: &[QVector],
    epsilon: &Rational,
) -> Result<IlluminationReport> {
    check_dims(polytope, directions)?;
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let checks = polytope
        .vertices()
        .iter()
        .map(|vertex| {
            (0..directions.len())
                .map(|j| check_vertex(polytope, &vertex.point, directions, epsilon, j))
                .find(|c| c.directional && c.interior)
                .unwrap_or_else(|| unassigned(&vertex.point))
        })
        .collect();
    Ok(report(checks, directions.len(), epsilon))
}

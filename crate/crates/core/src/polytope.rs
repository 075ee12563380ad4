//! H-polytopes: facet normals with offsets, their vertices, and point
//! location.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Constraint, QMatrix, QVector, Rational};

/// The outer facet normals of a polytope, in canonical order.
///
/// Canonical order is decreasing lexicographic order of the coordinate
/// vectors, so `e₁` precedes `e₂` precedes `-e₂` precedes `-e₁`. Every
/// tie-break in the crate refers to this order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalSet {
    dim: usize,
    normals: Vec<QVector>,
}

impl NormalSet {
    pub fn new(dim: usize, normals: Vec<QVector>) -> Result<Self> {
        Self::canonical(dim, normals).map(|(set, _)| set)
    }

    /// Builds the canonical set and returns, for each canonical position, the
    /// position of that normal in the input.
    fn canonical(dim: usize, normals: Vec<QVector>) -> Result<(Self, Vec<usize>)> {
        if dim == 0 || normals.is_empty() {
            return Err(Error::EmptyNormalSet);
        }
        let mut seen: BTreeMap<QVector, usize> = BTreeMap::new();
        for (index, n) in normals.iter().enumerate() {
            if n.dim() != dim {
                return Err(Error::Facet {
                    index,
                    source: Box::new(Error::DimensionMismatch {
                        expected: dim,
                        found: n.dim(),
                    }),
                });
            }
            if n.is_zero() {
                return Err(Error::ZeroNormal { index });
            }
            if let Some(&first) = seen.get(&n.direction()) {
                return Err(Error::DuplicateDirection {
                    first,
                    second: index,
                });
            }
            seen.insert(n.direction(), index);
        }
        let mut order: Vec<usize> = (0..normals.len()).collect();
        order.sort_by(|&a, &b| normals[b].cmp(&normals[a]));
        let sorted = order.iter().map(|&i| normals[i].clone()).collect();
        Ok((
            NormalSet {
                dim,
                normals: sorted,
            },
            order,
        ))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn normals(&self) -> &[QVector] {
        &self.normals
    }

    pub fn get(&self, index: usize) -> &QVector {
        &self.normals[index]
    }

    pub fn index_of(&self, normal: &QVector) -> Option<usize> {
        self.normals.iter().position(|n| n == normal)
    }

    pub fn select(&self, indices: &[usize]) -> Vec<QVector> {
        indices.iter().map(|&i| self.normals[i].clone()).collect()
    }

    /// Checks that the normals span the space and that the origin lies in
    /// the interior of their convex hull, i.e. that every polyhedron with
    /// these normals is bounded. On failure returns a nonzero direction `v`
    /// with `⟨n, v⟩ ≤ 0` for every normal.
    pub fn check_polytopal(&self) -> Result<()> {
        if let Some(direction) = self.unbounded_direction() {
            return Err(Error::Unbounded { direction });
        }
        Ok(())
    }

    pub fn unbounded_direction(&self) -> Option<QVector> {
        if exact::rank(&self.normals) < self.dim {
            return exact::kernel_vector(&self.normals, self.dim);
        }
        // 0 = ∑ λᵢ nᵢ with every λᵢ ≥ 1, written as λ = 1 + μ with μ ≥ 0.
        let total = self
            .normals
            .iter()
            .fold(QVector::zeros(self.dim), |acc, n| acc.add(n));
        if exact::nonnegative_combination(&self.normals, &total.neg()).is_some() {
            return None;
        }
        let mut constraints: Vec<Constraint> = self
            .normals
            .iter()
            .map(|n| Constraint::ge(n.neg(), Rational::zero()))
            .collect();
        constraints.push(Constraint::ge(total.neg(), Rational::one()));
        exact::feasible(self.dim, &constraints).ok().flatten()
    }
}

/// A vertex together with the indices of all normals tight at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: QVector,
    pub tight: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

/// The bounded, full-dimensional body `{x : ⟨n, x⟩ ≤ h(n) for all n}` with
/// every constraint facet-defining.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    normals: NormalSet,
    offsets: Vec<Rational>,
    vertices: Vec<Vertex>,
}

impl HPolytope {
    /// Validates and canonicalizes. Facet indices in errors refer to the
    /// input order.
    pub fn new(dim: usize, normals: Vec<QVector>, offsets: Vec<Rational>) -> Result<Self> {
        if normals.len() != offsets.len() {
            return Err(Error::DimensionMismatch {
                expected: normals.len(),
                found: offsets.len(),
            });
        }
        let (normals, order) = NormalSet::canonical(dim, normals)?;
        let offsets: Vec<Rational> = order.iter().map(|&i| offsets[i].clone()).collect();
        normals.check_polytopal()?;

        let vertices = enumerate_vertices_raw(&normals, &offsets);
        if vertices.is_empty() {
            let multipliers = infeasibility_certificate(&normals, &offsets).ok_or_else(|| {
                Error::Internal("empty polytope without a Farkas certificate".into())
            })?;
            let mut by_input = vec![Rational::zero(); multipliers.len()];
            for (canonical, &input) in order.iter().enumerate() {
                by_input[input] = multipliers[canonical].clone();
            }
            return Err(Error::Infeasible {
                multipliers: QVector::new(by_input),
            });
        }
        let polytope = HPolytope {
            normals,
            offsets,
            vertices,
        };
        if polytope.point_location(&polytope.vertex_centroid()) != Location::Interior {
            return Err(Error::NotFullDimensional);
        }
        for (facet, &index) in order.iter().enumerate() {
            if !polytope.is_facet_defining(facet) {
                return Err(Error::RedundantFacet {
                    index,
                    normal: polytope.normals.get(facet).clone(),
                });
            }
        }
        Ok(polytope)
    }

    /// The same normals with new offsets (canonical order).
    pub fn with_offsets(&self, offsets: Vec<Rational>) -> Result<Self> {
        HPolytope::new(self.dim(), self.normals.normals().to_vec(), offsets)
    }

    pub fn dim(&self) -> usize {
        self.normals.dim()
    }

    pub fn normal_set(&self) -> &NormalSet {
        &self.normals
    }

    pub fn normals(&self) -> &[QVector] {
        self.normals.normals()
    }

    pub fn facet_count(&self) -> usize {
        self.normals.len()
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn offset(&self, facet: usize) -> &Rational {
        &self.offsets[facet]
    }

    pub fn offset_of(&self, normal: &QVector) -> Option<&Rational> {
        self.normals.index_of(normal).map(|i| &self.offsets[i])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// `h(n) − ⟨n, x⟩` for facet `n`.
    pub fn slack(&self, facet: usize, x: &QVector) -> Rational {
        &self.offsets[facet] - self.normals.get(facet).dot(x)
    }

    pub fn is_simple(&self) -> bool {
        self.non_simple_vertices().next().is_none()
    }

    pub fn non_simple_vertices(&self) -> impl Iterator<Item = &Vertex> {
        let dim = self.dim();
        self.vertices.iter().filter(move |v| v.tight.len() != dim)
    }

    pub fn point_location(&self, x: &QVector) -> Location {
        let mut tight = false;
        for facet in 0..self.facet_count() {
            let s = self.slack(facet, x);
            if s.is_negative() {
                return Location::Outside;
            }
            tight |= s.is_zero();
        }
        if tight {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    fn vertex_centroid(&self) -> QVector {
        let sum = self
            .vertices
            .iter()
            .fold(QVector::zeros(self.dim()), |acc, v| acc.add(&v.point));
        sum.scale(&exact::int(self.vertices.len() as i64).recip())
    }

    /// A facet is facet-defining iff its tight vertices affinely span a
    /// hyperplane.
    fn is_facet_defining(&self, facet: usize) -> bool {
        let on_facet: Vec<&QVector> = self
            .vertices
            .iter()
            .filter(|v| v.tight.contains(&facet))
            .map(|v| &v.point)
            .collect();
        let Some((first, rest)) = on_facet.split_first() else {
            return false;
        };
        let differences: Vec<QVector> = rest.iter().map(|p| p.sub(first)).collect();
        exact::rank(&differences) + 1 == self.dim()
    }
}

fn enumerate_vertices_raw(normals: &NormalSet, offsets: &[Rational]) -> Vec<Vertex> {
    let dim = normals.dim();
    let mut found: BTreeMap<QVector, Vec<usize>> = BTreeMap::new();
    for subset in (0..normals.len()).combinations(dim) {
        let rows = normals.select(&subset);
        let rhs = QVector::new(subset.iter().map(|&i| offsets[i].clone()).collect());
        let Ok(Some(point)) = QMatrix::from_rows(rows).and_then(|m| m.solve(&rhs)) else {
            continue;
        };
        if found.contains_key(&point) {
            continue;
        }
        let mut tight = Vec::new();
        let mut inside = true;
        for (i, n) in normals.normals().iter().enumerate() {
            let s = &offsets[i] - n.dot(&point);
            if s.is_negative() {
                inside = false;
                break;
            }
            if s.is_zero() {
                tight.push(i);
            }
        }
        if inside {
            found.insert(point, tight);
        }
    }
    // Decreasing lexicographic order of the points.
    found
        .into_iter()
        .rev()
        .map(|(point, tight)| Vertex { point, tight })
        .collect()
}

/// `y ≥ 0` with `∑ yᵢ nᵢ = 0` and `∑ yᵢ h(nᵢ) = −1`.
fn infeasibility_certificate(normals: &NormalSet, offsets: &[Rational]) -> Option<Vec<Rational>> {
    let dim = normals.dim();
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|r| normals.normals().iter().map(|n| n[r].clone()).collect())
        .collect();
    rows.push(offsets.to_vec());
    let mut rhs = vec![Rational::zero(); dim];
    rhs.push(-Rational::one());
    exact::nonnegative_solution(&rows, &rhs, normals.len())
}

/// All vertices, each once with its full tight set, in decreasing
/// lexicographic order.
pub fn enumerate_vertices(polytope: &HPolytope) -> &[Vertex] {
    polytope.vertices()
}

/// `max ⟨n, p⟩` over the polytope.
pub fn support_value(polytope: &HPolytope, direction: &QVector) -> Result<Rational> {
    check_dim(polytope, direction)?;
    if direction.is_zero() {
        return Err(Error::InvalidArgument(
            "support direction must be nonzero".into(),
        ));
    }
    polytope
        .vertices()
        .iter()
        .map(|v| direction.dot(&v.point))
        .max()
        .ok_or_else(|| Error::Internal("polytope without vertices".into()))
}

/// Indices of the normals `n` with `h(n) − ⟨n, x⟩ ≤ slack`.
pub fn tight_normals(polytope: &HPolytope, x: &QVector, slack: &Rational) -> Result<Vec<usize>> {
    check_dim(polytope, x)?;
    if slack.is_negative() {
        return Err(Error::InvalidArgument("slack must be nonnegative".into()));
    }
    if point_location(polytope, x) == Location::Outside {
        return Err(Error::OutsidePolytope { point: x.clone() });
    }
    Ok((0..polytope.facet_count())
        .filter(|&f| polytope.slack(f, x) <= *slack)
        .collect())
}

pub fn point_location(polytope: &HPolytope, x: &QVector) -> Location {
    polytope.point_location(x)
}

fn check_dim(polytope: &HPolytope, x: &QVector) -> Result<()> {
    if x.dim() != polytope.dim() {
        return Err(Error::DimensionMismatch {
            expected: polytope.dim(),
            found: x.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn v(entries: &[i64]) -> QVector {
        QVector::from_ints(entries)
    }

    fn ones(k: usize) -> Vec<Rational> {
        vec![int(1); k]
    }

    fn square() -> HPolytope {
        let normals = vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])];
        HPolytope::new(2, normals, ones(4)).unwrap()
    }

    fn triangle() -> HPolytope {
        let normals = vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])];
        HPolytope::new(2, normals, ones(3)).unwrap()
    }

    fn cube() -> HPolytope {
        let mut normals = Vec::new();
        for i in 0..3 {
            normals.push(QVector::unit(3, i));
            normals.push(QVector::unit(3, i).neg());
        }
        HPolytope::new(3, normals, ones(6)).unwrap()
    }

    fn pyramid() -> HPolytope {
        let normals = vec![
            v(&[0, 0, -1]),
            v(&[1, 0, 1]),
            v(&[-1, 0, 1]),
            v(&[0, 1, 1]),
            v(&[0, -1, 1]),
        ];
        HPolytope::new(3, normals, ones(5)).unwrap()
    }

    fn points(p: &HPolytope) -> Vec<QVector> {
        p.vertices().iter().map(|v| v.point.clone()).collect()
    }

    #[test]
    fn canonical_order_is_decreasing() {
        let p = square();
        assert_eq!(
            p.normals(),
            &[v(&[1, 0]), v(&[0, 1]), v(&[0, -1]), v(&[-1, 0])]
        );
    }

    #[test]
    fn square_vertices() {
        assert_eq!(
            points(&square()),
            vec![v(&[1, 1]), v(&[1, -1]), v(&[-1, 1]), v(&[-1, -1])]
        );
    }

    #[test]
    fn triangle_vertices() {
        let mut pts = points(&triangle());
        pts.sort();
        assert_eq!(pts, vec![v(&[-2, 1]), v(&[1, -2]), v(&[1, 1])]);
    }

    #[test]
    fn cube_vertices() {
        let p = cube();
        assert_eq!(p.vertices().len(), 8);
        for vert in p.vertices() {
            assert!(vert.point.entries().iter().all(|c| c.abs() == int(1)));
            assert_eq!(vert.tight.len(), 3);
            assert_eq!(p.point_location(&vert.point), Location::Boundary);
        }
    }

    #[test]
    fn support_values() {
        assert_eq!(
            support_value(&cube(), &QVector::unit(3, 0)).unwrap(),
            int(1)
        );
        assert_eq!(support_value(&square(), &v(&[1, 1])).unwrap(), int(2));
        assert_eq!(support_value(&triangle(), &v(&[1, 1])).unwrap(), int(2));
        assert!(support_value(&square(), &v(&[0, 0])).is_err());
        let p = triangle();
        for (i, n) in p.normals().iter().enumerate() {
            assert_eq!(&support_value(&p, n).unwrap(), p.offset(i));
        }
    }

    #[test]
    fn tight_sets() {
        let sq = square();
        let tight = tight_normals(&sq, &v(&[1, 1]), &int(0)).unwrap();
        assert_eq!(sq.normal_set().select(&tight), vec![v(&[1, 0]), v(&[0, 1])]);

        let tri = triangle();
        let tight = tight_normals(&tri, &v(&[1, -2]), &int(0)).unwrap();
        assert_eq!(
            tri.normal_set().select(&tight),
            vec![v(&[1, 0]), v(&[-1, -1])]
        );

        let py = pyramid();
        let tight = tight_normals(&py, &v(&[0, 0, 1]), &int(0)).unwrap();
        let mut got = py.normal_set().select(&tight);
        got.sort();
        let mut want = vec![v(&[1, 0, 1]), v(&[-1, 0, 1]), v(&[0, 1, 1]), v(&[0, -1, 1])];
        want.sort();
        assert_eq!(got, want);
        assert!(!py.is_simple());
        assert_eq!(py.non_simple_vertices().count(), 1);

        assert!(matches!(
            tight_normals(&sq, &v(&[2, 0]), &int(0)),
            Err(Error::OutsidePolytope { .. })
        ));
    }

    #[test]
    fn locations() {
        let c = cube();
        assert_eq!(point_location(&c, &QVector::zeros(3)), Location::Interior);
        assert_eq!(point_location(&c, &v(&[1, 0, 0])), Location::Boundary);
        assert_eq!(point_location(&c, &v(&[2, 0, 0])), Location::Outside);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(matches!(
            HPolytope::new(2, vec![v(&[1, 0]), v(&[2, 0]), v(&[-1, -1])], ones(3)),
            Err(Error::DuplicateDirection {
                first: 0,
                second: 1
            })
        ));
        assert!(matches!(
            HPolytope::new(2, vec![v(&[1, 0])], ones(1)),
            Err(Error::Unbounded { .. })
        ));
        assert!(matches!(
            HPolytope::new(2, vec![v(&[1, 0]), v(&[0, 0])], ones(2)),
            Err(Error::ZeroNormal { index: 1 })
        ));
        // x ≤ -1 and -x ≤ -1 inside the square strip.
        let empty = HPolytope::new(
            2,
            vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])],
            vec![int(-1), int(-1), int(1), int(1)],
        );
        match empty {
            Err(Error::Infeasible { multipliers }) => {
                assert!(multipliers.entries().iter().all(|m| !m.is_negative()));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
        // The diagonal cut x + y ≤ 3 never touches the unit square.
        let redundant = HPolytope::new(
            2,
            vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1]), v(&[1, 1])],
            vec![int(1), int(1), int(1), int(1), int(3)],
        );
        assert!(matches!(
            redundant,
            Err(Error::RedundantFacet { index: 4, .. })
        ));
        // Touching only at a corner is still redundant.
        let corner = HPolytope::new(
            2,
            vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1]), v(&[1, 1])],
            vec![int(1), int(1), int(1), int(1), int(2)],
        );
        assert!(matches!(
            corner,
            Err(Error::RedundantFacet { index: 4, .. })
        ));
        let flat = HPolytope::new(
            2,
            vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])],
            vec![int(0), int(0), int(1), int(1)],
        );
        assert!(flat.is_err());
    }

    #[test]
    fn unbounded_direction_is_a_recession_direction() {
        let set = NormalSet::new(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, 1])]).unwrap();
        let d = set.unbounded_direction().unwrap();
        assert!(!d.is_zero());
        assert!(set.normals().iter().all(|n| !n.dot(&d).is_positive()));
        assert!(set.check_polytopal().is_err());
    }
}

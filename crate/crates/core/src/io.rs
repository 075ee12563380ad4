//! JSON documents. Rationals are always strings (`"p"` or `"p/q"`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, QVector, Rational};
use crate::polytope::HPolytope;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetDocument {
    pub normal: Vec<String>,
    pub offset: String,
}

/// `{"dim": n, "facets": [{"normal": [...], "offset": "..."}, ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDocument {
    pub dim: usize,
    pub facets: Vec<FacetDocument>,
}

/// `{"epsilon": "p/q", "directions": [[...], ...]}`; other keys are ignored
/// so that `illuminate` output can be fed back in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionsDocument {
    pub epsilon: String,
    pub directions: Vec<Vec<String>>,
}

impl PolytopeDocument {
    pub fn from_polytope(polytope: &HPolytope) -> Self {
        PolytopeDocument {
            dim: polytope.dim(),
            facets: polytope
                .normals()
                .iter()
                .zip(polytope.offsets())
                .map(|(n, h)| FacetDocument {
                    normal: n.to_strings(),
                    offset: exact::format_rational(h),
                })
                .collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<HPolytope> {
        let mut normals = Vec::with_capacity(self.facets.len());
        let mut offsets = Vec::with_capacity(self.facets.len());
        for (index, facet) in self.facets.iter().enumerate() {
            let in_facet = |e: Error| Error::Facet {
                index,
                source: Box::new(e),
            };
            if facet.normal.len() != self.dim {
                return Err(in_facet(Error::DimensionMismatch {
                    expected: self.dim,
                    found: facet.normal.len(),
                }));
            }
            let entries = facet
                .normal
                .iter()
                .map(|t| exact::parse_rational(t))
                .collect::<Result<Vec<Rational>>>()
                .map_err(in_facet)?;
            normals.push(QVector::new(entries));
            offsets.push(exact::parse_rational(&facet.offset).map_err(in_facet)?);
        }
        HPolytope::new(self.dim, normals, offsets)
    }
}

pub fn parse_polytope(text: &str) -> Result<HPolytope> {
    let doc: PolytopeDocument =
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    doc.to_polytope()
}

pub fn serialize_polytope(polytope: &HPolytope) -> String {
    serde_json::to_string(&PolytopeDocument::from_polytope(polytope))
        .expect("polytope documents always serialize")
}

pub fn parse_directions(text: &str) -> Result<(Vec<QVector>, Rational)> {
    let doc: DirectionsDocument =
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    let epsilon = exact::parse_rational(&doc.epsilon)?;
    let directions = doc
        .directions
        .iter()
        .map(|d| {
            d.iter()
                .map(|t| exact::parse_rational(t))
                .collect::<Result<Vec<_>>>()
                .map(QVector::new)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((directions, epsilon))
}

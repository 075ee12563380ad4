//! Brute-force illumination number.
//!
//! Whether a direction illuminates a vertex depends only on the signs of its
//! inner products with the tight normals, so it suffices to consider one
//! direction per full-dimensional cell of the central arrangement
//! `{⟨n, ·⟩ = 0 : n ∈ N(P)}`. The minimum illumination number is then an
//! exact set cover of the vertices by cells.

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Constraint, QVector, Rational};
use crate::polytope::HPolytope;

pub const CELL_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionClass {
    pub representative: QVector,
    /// `+1` or `-1` per normal, in canonical normal order.
    pub signs: Vec<i8>,
    /// Indices of the vertices this cell illuminates.
    pub illuminated: Vec<usize>,
}

fn cell_constraints(polytope: &HPolytope, signs: &[i8]) -> Vec<Constraint> {
    signs
        .iter()
        .zip(polytope.normals())
        .map(|(&s, n)| {
            let coeffs = if s > 0 { n.clone() } else { n.neg() };
            Constraint::ge(coeffs, Rational::one())
        })
        .collect()
}

/// One representative per open cell, cells ordered by sign vector with `+`
/// before `-`.
pub fn enumerate_direction_classes(polytope: &HPolytope) -> Result<Vec<DirectionClass>> {
    let dim = polytope.dim();
    let m = polytope.facet_count();
    let mut cells: Vec<(Vec<i8>, QVector)> = Vec::new();
    // Depth-first over sign prefixes; an infeasible prefix prunes its subtree.
    let mut stack: Vec<Vec<i8>> = vec![vec![-1], vec![1]];
    while let Some(prefix) = stack.pop() {
        let Some(witness) = exact::feasible(dim, &cell_constraints(polytope, &prefix))? else {
            continue;
        };
        if prefix.len() == m {
            cells.push((prefix, witness));
            if cells.len() > CELL_LIMIT {
                return Err(Error::TooLarge {
                    what: "number of arrangement cells",
                    count: cells.len() as u128,
                    limit: CELL_LIMIT as u128,
                });
            }
            continue;
        }
        for s in [-1, 1] {
            let mut next = prefix.clone();
            next.push(s);
            stack.push(next);
        }
    }
    Ok(cells
        .into_iter()
        .map(|(signs, representative)| {
            let illuminated = polytope
                .vertices()
                .iter()
                .enumerate()
                .filter(|(_, v)| v.tight.iter().all(|&f| signs[f] > 0))
                .map(|(i, _)| i)
                .collect();
            DirectionClass {
                representative,
                signs,
                illuminated,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub minimum: usize,
    pub cell_count: usize,
    pub vertex_count: usize,
    pub directions: Vec<QVector>,
    /// Indices into the cell list of the chosen cells.
    pub cells: Vec<usize>,
}

/// Minimum number of directions illuminating every vertex, with one optimal
/// choice of directions.
pub fn min_illumination_number(polytope: &HPolytope) -> Result<OracleResult> {
    let classes = enumerate_direction_classes(polytope)?;
    let vertex_count = polytope.vertices().len();
    if vertex_count > 128 {
        return Err(Error::TooLarge {
            what: "number of vertices for the set cover",
            count: vertex_count as u128,
            limit: 128,
        });
    }
    let masks: Vec<u128> = classes
        .iter()
        .map(|c| c.illuminated.iter().fold(0u128, |m, &i| m | 1 << i))
        .collect();
    // Drop cells dominated by another cell (keeping the first of equals).
    let useful: Vec<usize> = (0..masks.len())
        .filter(|&i| masks[i] != 0)
        .filter(|&i| {
            !(0..masks.len()).any(|j| {
                j != i && masks[i] & masks[j] == masks[i] && (masks[i] != masks[j] || j < i)
            })
        })
        .collect();
    let all = if vertex_count == 128 {
        u128::MAX
    } else {
        (1u128 << vertex_count) - 1
    };
    let union = useful.iter().fold(0u128, |acc, &i| acc | masks[i]);
    if union != all {
        return Err(Error::Internal(
            "some vertex is illuminated by no cell".into(),
        ));
    }
    for size in 1..=vertex_count {
        let mut chosen = Vec::with_capacity(size);
        if cover(&masks, &useful, all, 0, size, &mut chosen) {
            return Ok(OracleResult {
                minimum: size,
                cell_count: classes.len(),
                vertex_count,
                directions: chosen
                    .iter()
                    .map(|&c| classes[c].representative.clone())
                    .collect(),
                cells: chosen,
            });
        }
    }
    Err(Error::Internal("set cover search exhausted".into()))
}

/// Branches on the cells covering the lowest uncovered vertex.
fn cover(
    masks: &[u128],
    useful: &[usize],
    all: u128,
    covered: u128,
    budget: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if covered == all {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let open = all & !covered;
    let target = 1u128 << open.trailing_zeros();
    for &c in useful {
        if masks[c] & target != 0 {
            chosen.push(c);
            if cover(masks, useful, all, covered | masks[c], budget - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

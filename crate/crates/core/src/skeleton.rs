//! Skeleton decomposition of a strongly monotypic normal set.
//!
//! The normals contain disjoint parts `X₁, …, X_k` such that each `X_l` is
//! the vertex set of a simplex with the origin in its relative interior, and
//! the linear spans of the parts form a direct sum equal to the whole space.
//!
//! Construction: find a basis `B ⊆ N` such that every other normal has
//! coefficients in `B` that are all nonpositive or all nonnegative. The
//! Cartesian supports of the nonpositive ("negative side") normals form a
//! laminar family; its maximal members partition the basis, and each part
//! is a maximal support together with one normal having that support.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::classify::Certificate;
use crate::error::{Error, Result};
use crate::exact::{self, QVector, Rational};
use crate::polytope::NormalSet;
use crate::position::{self, SignTag};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    pub basis: Vec<QVector>,
    pub parts: Vec<Vec<QVector>>,
    /// For each part, the basis indices it contains.
    pub part_supports: Vec<Vec<usize>>,
    /// For each part, strictly positive weights summing to one whose
    /// combination of the part (in listed order) is the origin.
    #[serde(serialize_with = "serialize_weights")]
    pub zero_combinations: Vec<Vec<Rational>>,
}

fn serialize_weights<S: serde::Serializer>(
    weights: &[Vec<Rational>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(
        weights
            .iter()
            .map(|w| w.iter().map(exact::format_rational).collect::<Vec<_>>()),
    )
}

impl Skeleton {
    /// `∏ |X_l|`, the number of cones in the illumination construction.
    pub fn product(&self) -> u128 {
        self.parts.iter().map(|p| p.len() as u128).product()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Independent re-check of the structural properties against `normals`.
    pub fn verify(&self, normals: &NormalSet) -> std::result::Result<(), String> {
        let n = normals.dim();
        if self.basis.len() != n || exact::rank(&self.basis) != n {
            return Err("basis is not a basis".into());
        }
        if self.parts.len() != self.zero_combinations.len()
            || self.parts.len() != self.part_supports.len()
        {
            return Err("part data has inconsistent lengths".into());
        }
        let mut union: Vec<QVector> = Vec::new();
        let mut rank_sum = 0;
        for (l, (part, weights)) in self.parts.iter().zip(&self.zero_combinations).enumerate() {
            if let Some(x) = part.iter().find(|x| normals.index_of(x).is_none()) {
                return Err(format!("part {l} contains {x}, which is not a normal"));
            }
            if part.iter().any(|x| union.contains(x)) {
                return Err(format!("part {l} is not disjoint from earlier parts"));
            }
            union.extend(part.iter().cloned());
            if weights.len() != part.len() || weights.iter().any(|w| !w.is_positive()) {
                return Err(format!("part {l} lacks strictly positive weights"));
            }
            if weights.iter().sum::<Rational>() != exact::int(1) {
                return Err(format!("weights of part {l} do not sum to one"));
            }
            if !exact::combine(weights, part).is_zero() {
                return Err(format!("weights of part {l} do not combine to the origin"));
            }
            let r = exact::rank(part);
            if part.len() != r + 1 {
                return Err(format!("part {l} is not affinely independent"));
            }
            rank_sum += r;
        }
        if rank_sum != n || exact::rank(&union) != n {
            return Err(format!(
                "spans of the parts do not form a direct sum of dimension {n}"
            ));
        }
        if self.product() > 1u128 << n {
            return Err("product of part sizes exceeds 2^n".into());
        }
        Ok(())
    }
}

fn conical_certificate(set: Vec<QVector>) -> Result<Error> {
    let separator = position::separating_functional(&set)?
        .ok_or_else(|| Error::Internal("mixed sign pattern without a separator".into()))?;
    Ok(Error::NotStronglyMonotypic {
        certificate: Box::new(Certificate::ConicalSubset {
            normals: set,
            separator,
        }),
    })
}

fn captured(normals: &NormalSet, basis: &[QVector]) -> Result<usize> {
    let mut count = 0;
    for n in normals.normals() {
        if position::cone_membership(n, basis)?.is_some() {
            count += 1;
        }
    }
    Ok(count)
}

/// Swap-stable basis starting from the lexicographically first independent
/// `n`-subset. Indices are returned in canonical order.
pub fn refine_basis(normals: &NormalSet) -> Result<Vec<usize>> {
    normals.check_polytopal()?;
    let start = first_independent_subset(normals)
        .ok_or_else(|| Error::Internal("spanning normal set without a basis".into()))?;
    refine_basis_from(normals, start)
}

fn first_independent_subset(normals: &NormalSet) -> Option<Vec<usize>> {
    // Greedy selection yields the lexicographically first independent subset.
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..normals.len() {
        let mut trial = normals.select(&chosen);
        trial.push(normals.get(i).clone());
        if exact::rank(&trial) == trial.len() {
            chosen.push(i);
            if chosen.len() == normals.dim() {
                return Some(chosen);
            }
        }
    }
    None
}

/// Swap refinement from a given independent start.
///
/// While some normal `x` outside `B` has exactly one positive coefficient
/// (at `bᵢ`), replace `bᵢ` by `x`; this strictly enlarges `pos B`. A normal
/// with a mixed sign pattern proves the set is not strongly monotypic.
pub fn refine_basis_from(normals: &NormalSet, start: Vec<usize>) -> Result<Vec<usize>> {
    if start.len() != normals.dim()
        || start.iter().any(|&i| i >= normals.len())
        || exact::rank(&normals.select(&start)) != normals.dim()
    {
        return Err(Error::InvalidArgument(
            "starting basis must be n independent normals".into(),
        ));
    }
    let mut basis = start;
    let mut inside = captured(normals, &normals.select(&basis))?;
    let mut swaps = 0;
    loop {
        let vectors = normals.select(&basis);
        let mut swap = None;
        for (i, x) in normals.normals().iter().enumerate() {
            if basis.contains(&i) {
                continue;
            }
            let class = position::classify_signs(&vectors, x)?;
            match class.tag {
                SignTag::Mixed => {
                    let mut set = vec![x.clone()];
                    set.extend(vectors);
                    return Err(conical_certificate(set)?);
                }
                SignTag::SinglePositive(slot) => {
                    swap = Some((slot, i));
                    break;
                }
                SignTag::AllNonpositive | SignTag::AllNonnegative => {}
            }
        }
        let Some((slot, entering)) = swap else {
            basis.sort_unstable();
            return Ok(basis);
        };
        basis[slot] = entering;
        swaps += 1;
        let now = captured(normals, &normals.select(&basis))?;
        if now <= inside || swaps > normals.len() {
            return Err(Error::Internal(format!(
                "basis swap did not enlarge the positive hull ({inside} -> {now} normals)"
            )));
        }
        inside = now;
    }
}

/// Indices of the nonzero coefficients of `x` in `basis`.
pub fn cartesian_support(basis: &[QVector], x: &QVector) -> Result<Vec<usize>> {
    let coefficients = exact::solve_linear(basis, x)?.ok_or(Error::Singular)?;
    Ok((0..coefficients.dim())
        .filter(|&i| !coefficients[i].is_zero())
        .collect())
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

pub fn extract_skeleton(normals: &NormalSet) -> Result<Skeleton> {
    let basis_idx = refine_basis(normals)?;
    let basis = normals.select(&basis_idx);
    let n = normals.dim();

    // (normal index, coefficients, support) for the negative side.
    let mut negative: Vec<(usize, QVector, Vec<usize>)> = Vec::new();
    for (i, x) in normals.normals().iter().enumerate() {
        if basis_idx.contains(&i) {
            continue;
        }
        let class = position::classify_signs(&basis, x)?;
        match class.tag {
            SignTag::AllNonpositive => {
                let support = (0..n)
                    .filter(|&j| !class.coefficients[j].is_zero())
                    .collect();
                negative.push((i, class.coefficients, support));
            }
            SignTag::AllNonnegative => {}
            tag => {
                return Err(Error::Internal(format!(
                    "refined basis is not swap-stable ({tag:?} at {x})"
                )))
            }
        }
    }

    for (a, (xi, _, xs)) in negative.iter().enumerate() {
        for (yi, ycoef, ys) in &negative[a + 1..] {
            let Some(&pivot) = xs.iter().find(|k| ys.contains(k)) else {
                continue;
            };
            if is_subset(xs, ys) || is_subset(ys, xs) {
                continue;
            }
            // Exchange the shared basis element for y; x then has at least two
            // positive and one negative coefficient in the new basis.
            debug_assert!(!ycoef[pivot].is_zero());
            let mut exchanged = basis.clone();
            exchanged[pivot] = normals.get(*yi).clone();
            let x = normals.get(*xi);
            if position::classify_signs(&exchanged, x)?.tag != SignTag::Mixed {
                return Err(Error::Internal(
                    "overlapping supports without a mixed sign pattern".into(),
                ));
            }
            let mut set = vec![x.clone()];
            set.extend(exchanged);
            return Err(conical_certificate(set)?);
        }
    }

    let mut maximal: Vec<Vec<usize>> = Vec::new();
    for (_, _, s) in &negative {
        let dominated = negative
            .iter()
            .any(|(_, _, t)| t.len() > s.len() && is_subset(s, t));
        if !dominated && !maximal.contains(s) {
            maximal.push(s.clone());
        }
    }
    maximal.sort();
    let covered: usize = maximal.iter().map(Vec::len).sum();
    if covered != n {
        normals.check_polytopal()?;
        return Err(Error::Internal(
            "maximal negative supports do not cover the basis".into(),
        ));
    }

    let mut parts = Vec::with_capacity(maximal.len());
    let mut zero_combinations = Vec::with_capacity(maximal.len());
    for support in &maximal {
        // `negative` is in canonical order, so this is the first such normal.
        let (xi, coefficients, _) = negative
            .iter()
            .find(|(_, _, s)| s == support)
            .expect("maximal support comes from a normal");
        // x − ∑ λᵢ bᵢ = 0 with every −λᵢ > 0.
        let mut members: Vec<(usize, Rational)> = support
            .iter()
            .map(|&j| (basis_idx[j], -coefficients[j].clone()))
            .collect();
        members.push((*xi, exact::int(1)));
        members.sort_by_key(|(idx, _)| *idx);
        let total: Rational = members.iter().map(|(_, w)| w.clone()).sum();
        parts.push(
            members
                .iter()
                .map(|(idx, _)| normals.get(*idx).clone())
                .collect(),
        );
        zero_combinations.push(members.iter().map(|(_, w)| w / &total).collect());
    }

    let skeleton = Skeleton {
        basis,
        parts,
        part_supports: maximal,
        zero_combinations,
    };
    skeleton.verify(normals).map_err(Error::Internal)?;
    Ok(skeleton)
}

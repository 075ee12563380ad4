//! Pointwise predicates on finite sets of directions.

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Constraint, QVector, Rational};

/// Sign pattern of the coefficients of a point in a basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", content = "index")]
pub enum SignTag {
    AllNonpositive,
    AllNonnegative,
    /// Exactly one coefficient is positive (at this basis index), the rest
    /// are nonpositive and at least one is negative.
    SinglePositive(usize),
    /// At least two positive and at least one negative coefficient.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignClass {
    pub tag: SignTag,
    pub coefficients: QVector,
}

/// Expands `x` in `basis` and classifies the signs of the coefficients.
///
/// With `S = {x} ∪ basis`: `AllNonpositive` iff `S` is not separated from
/// the origin, `AllNonnegative` or `SinglePositive` iff one point of `S` is
/// in the positive hull of the others, `Mixed` iff `S` is in conical
/// position.
pub fn classify_signs(basis: &[QVector], x: &QVector) -> Result<SignClass> {
    let coefficients = exact::solve_linear(basis, x)?.ok_or(Error::Singular)?;
    let tag = sign_tag(&coefficients);
    Ok(SignClass { tag, coefficients })
}

pub(crate) fn sign_tag(coefficients: &QVector) -> SignTag {
    let positive: Vec<usize> = (0..coefficients.dim())
        .filter(|&i| coefficients[i].is_positive())
        .collect();
    let negative = coefficients.entries().iter().any(Signed::is_negative);
    match (positive.as_slice(), negative) {
        ([], _) => SignTag::AllNonpositive,
        (_, false) => SignTag::AllNonnegative,
        ([i], true) => SignTag::SinglePositive(*i),
        _ => SignTag::Mixed,
    }
}

/// Outcome of a conical position test, with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConicalPosition {
    /// `⟨s, separator⟩ ≥ 1` for every point and no point lies in the
    /// positive hull of the others.
    Conical { separator: QVector },
    /// No hyperplane strictly separates the set from the origin.
    NotSeparated,
    /// `points[index] = ∑ coefficients[j] · (other points in order)`.
    InHullOfOthers {
        index: usize,
        #[serde(with = "crate::exact::rational_vec_str")]
        coefficients: Vec<Rational>,
    },
}

impl ConicalPosition {
    pub fn is_conical(&self) -> bool {
        matches!(self, ConicalPosition::Conical { .. })
    }
}

/// Strict separation from the origin: some `v` with `⟨s, v⟩ ≥ 1` for all `s`.
pub fn separating_functional(points: &[QVector]) -> Result<Option<QVector>> {
    let Some(dim) = points.first().map(QVector::dim) else {
        return Ok(None);
    };
    let constraints: Vec<Constraint> = points
        .iter()
        .map(|s| Constraint::ge(s.clone(), Rational::one()))
        .collect();
    exact::feasible(dim, &constraints)
}

pub fn is_conical_position(points: &[QVector]) -> Result<ConicalPosition> {
    let Some(separator) = separating_functional(points)? else {
        return Ok(ConicalPosition::NotSeparated);
    };
    for index in 0..points.len() {
        let others: Vec<QVector> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != index)
            .map(|(_, p)| p.clone())
            .collect();
        if let Some(mu) = cone_membership(&points[index], &others)? {
            return Ok(ConicalPosition::InHullOfOthers {
                index,
                coefficients: mu,
            });
        }
    }
    Ok(ConicalPosition::Conical { separator })
}

/// Nonnegative coefficients μ with `x = ∑ μᵢ gᵢ`, or `None` if `x` is not
/// in the positive hull of the generators.
pub fn cone_membership(x: &QVector, generators: &[QVector]) -> Result<Option<Vec<Rational>>> {
    if let Some(bad) = generators.iter().find(|g| g.dim() != x.dim()) {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: bad.dim(),
        });
    }
    if generators.is_empty() {
        return Ok(x.is_zero().then(Vec::new));
    }
    Ok(exact::nonnegative_combination(generators, x))
}

/// `subset` is linearly independent and its positive hull contains no other
/// member of `normals`.
pub fn is_primitive(subset: &[QVector], normals: &[QVector]) -> Result<bool> {
    if subset.is_empty() {
        return Ok(true);
    }
    if exact::rank(subset) < subset.len() {
        return Ok(false);
    }
    for n in normals.iter().filter(|n| !subset.contains(n)) {
        if cone_membership(n, subset)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

//! Monotypy and strong monotypy of normal sets, with certificates.
//!
//! Three characterizations are implemented independently:
//!
//! * strong monotypy: no `n + 1` normals are in conical position;
//! * monotypy: every `n + 1` normals in conical position have another normal
//!   in their positive hull;
//! * monotypy (McMullen–Schneider–Shephard): the positive hulls of any two
//!   disjoint primitive subsets meet only at the origin.
//!
//! Subsets are searched in lexicographic order of canonical normal indices
//! and the first failing subset is reported, so certificates do not depend
//! on the thread count.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, QVector, Rational};
use crate::polytope::NormalSet;
use crate::position::{self, ConicalPosition};

/// Upper bound on the number of subsets an exhaustive check may visit.
pub const SUBSET_LIMIT: u128 = 10_000_000;

const BLOCK: usize = 2048;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `n + 1` normals in conical position; `⟨s, separator⟩ ≥ 1` for each.
    ConicalSubset {
        normals: Vec<QVector>,
        separator: QVector,
    },
    /// `n + 1` normals in conical position whose positive hull contains no
    /// other normal.
    EmptyConicalSubset {
        normals: Vec<QVector>,
        separator: QVector,
    },
    /// Disjoint primitive subsets whose positive hulls share `point ≠ 0`.
    PrimitiveIntersection {
        first: Vec<QVector>,
        second: Vec<QVector>,
        point: QVector,
    },
}

impl Certificate {
    /// Re-checks the certificate against `normals` using the position
    /// predicates only.
    pub fn recheck(&self, normals: &NormalSet) -> Result<bool> {
        let all = normals.normals();
        let members = |set: &[QVector]| set.iter().all(|s| all.contains(s));
        Ok(match self {
            Certificate::ConicalSubset {
                normals: set,
                separator,
            } => {
                members(set)
                    && set.len() == normals.dim() + 1
                    && set.iter().all(|s| s.dot(separator) >= Rational::one())
                    && position::is_conical_position(set)?.is_conical()
            }
            Certificate::EmptyConicalSubset {
                normals: set,
                separator,
            } => {
                let mut empty = true;
                for other in all.iter().filter(|n| !set.contains(n)) {
                    if position::cone_membership(other, set)?.is_some() {
                        empty = false;
                        break;
                    }
                }
                members(set)
                    && set.len() == normals.dim() + 1
                    && set.iter().all(|s| s.dot(separator) >= Rational::one())
                    && position::is_conical_position(set)?.is_conical()
                    && empty
            }
            Certificate::PrimitiveIntersection {
                first,
                second,
                point,
            } => {
                members(first)
                    && members(second)
                    && first.iter().all(|x| !second.contains(x))
                    && !point.is_zero()
                    && position::is_primitive(first, all)?
                    && position::is_primitive(second, all)?
                    && position::cone_membership(point, first)?.is_some()
                    && position::cone_membership(point, second)?.is_some()
            }
        })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |set: &[QVector]| set.iter().map(ToString::to_string).join(", ");
        match self {
            Certificate::ConicalSubset { normals, .. } => {
                write!(f, "normals in conical position: {}", list(normals))
            }
            Certificate::EmptyConicalSubset { normals, .. } => write!(
                f,
                "normals in conical position with no other normal in their positive hull: {}",
                list(normals)
            ),
            Certificate::PrimitiveIntersection {
                first,
                second,
                point,
            } => write!(
                f,
                "primitive subsets {{{}}} and {{{}}} share the point {}",
                list(first),
                list(second),
                point
            ),
        }
    }
}

/// Outcome of one characterization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    fn holds() -> Self {
        Verdict {
            holds: true,
            certificate: None,
        }
    }

    fn fails(certificate: Certificate) -> Self {
        Verdict {
            holds: false,
            certificate: Some(certificate),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Conical,
    Mss,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationVerdict {
    pub strongly_monotypic: bool,
    pub monotypic: bool,
    pub method: Method,
    /// Witness that the set is not strongly monotypic.
    pub certificate: Option<Certificate>,
    /// Witness that the set is not monotypic.
    pub monotypy_certificate: Option<Certificate>,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

fn guard(normals: &NormalSet) -> Result<()> {
    let count = binomial(normals.len(), normals.dim() + 1);
    if count > SUBSET_LIMIT {
        return Err(Error::TooLarge {
            what: "number of (n+1)-subsets",
            count,
            limit: SUBSET_LIMIT,
        });
    }
    Ok(())
}

/// Polytopality and size checks shared by every characterization.
pub fn validate(normals: &NormalSet) -> Result<()> {
    normals.check_polytopal()?;
    guard(normals)
}

/// Applies `test` to items in order, in parallel blocks, and returns the
/// first `Some` (or the first error) in iteration order.
pub(crate) fn first_in_order<I, T, F>(items: I, test: F) -> Result<Option<T>>
where
    I: Iterator,
    I::Item: Send + Sync,
    T: Send,
    F: Fn(&I::Item) -> Result<Option<T>> + Sync,
{
    for block in &items.chunks(BLOCK) {
        let block: Vec<I::Item> = block.collect();
        let hit = block.par_iter().find_map_first(|item| match test(item) {
            Ok(None) => None,
            Ok(Some(t)) => Some(Ok(t)),
            Err(e) => Some(Err(e)),
        });
        if let Some(hit) = hit {
            return hit.map(Some);
        }
    }
    Ok(None)
}

fn conical_subsets(normals: &NormalSet) -> impl Iterator<Item = Vec<usize>> {
    (0..normals.len()).combinations(normals.dim() + 1)
}

/// True iff no `n + 1` normals are in conical position.
pub fn check_strong_monotypy(normals: &NormalSet) -> Result<Verdict> {
    validate(normals)?;
    let hit = first_in_order(conical_subsets(normals), |subset| {
        let set = normals.select(subset);
        Ok(match position::is_conical_position(&set)? {
            ConicalPosition::Conical { separator } => Some(Certificate::ConicalSubset {
                normals: set,
                separator,
            }),
            _ => None,
        })
    })?;
    Ok(hit.map_or_else(Verdict::holds, Verdict::fails))
}

/// True iff every `n + 1` normals in conical position have another normal
/// in their positive hull.
pub fn check_monotypy(normals: &NormalSet) -> Result<Verdict> {
    validate(normals)?;
    let hit = first_in_order(conical_subsets(normals), |subset| {
        let set = normals.select(subset);
        let ConicalPosition::Conical { separator } = position::is_conical_position(&set)? else {
            return Ok(None);
        };
        for (i, other) in normals.normals().iter().enumerate() {
            if !subset.contains(&i) && position::cone_membership(other, &set)?.is_some() {
                return Ok(None);
            }
        }
        Ok(Some(Certificate::EmptyConicalSubset {
            normals: set,
            separator,
        }))
    })?;
    Ok(hit.map_or_else(Verdict::holds, Verdict::fails))
}

/// All primitive subsets of sizes `1..=n`, by size and then
/// lexicographically.
pub fn primitive_subsets(normals: &NormalSet) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for size in 1..=normals.dim() {
        let candidates: Vec<Vec<usize>> = (0..normals.len()).combinations(size).collect();
        let flags: Vec<Result<bool>> = candidates
            .par_iter()
            .map(|c| position::is_primitive(&normals.select(c), normals.normals()))
            .collect();
        for (c, flag) in candidates.into_iter().zip(flags) {
            if flag? {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// A nonzero common point of `pos first` and `pos second`, normalized so
/// that its coefficients over `first` sum to one.
pub fn positive_hull_intersection(first: &[QVector], second: &[QVector]) -> Option<QVector> {
    let dim = first.first()?.dim();
    let width = first.len() + second.len();
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            first
                .iter()
                .map(|x| x[r].clone())
                .chain(second.iter().map(|y| -y[r].clone()))
                .collect()
        })
        .collect();
    rows.push(
        (0..width)
            .map(|j| {
                if j < first.len() {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    );
    let mut rhs = vec![Rational::zero(); dim];
    rhs.push(Rational::one());
    let lambda = exact::nonnegative_solution(&rows, &rhs, width)?;
    Some(exact::combine(&lambda[..first.len()], first))
}

/// True iff the positive hulls of every two disjoint primitive subsets meet
/// only at the origin.
///
/// Only pairs with `|V₁| + |V₂| ≤ n + 1` are tested: a common nonzero point
/// of two such hulls yields one supported on a circuit of `V₁ ∪ V₂`, whose
/// parts are again disjoint primitive subsets.
pub fn check_monotypy_mss(normals: &NormalSet) -> Result<Verdict> {
    validate(normals)?;
    let primitive = primitive_subsets(normals)?;
    let limit = normals.dim() + 1;
    let pairs = (0..primitive.len())
        .flat_map(|i| (i + 1..primitive.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let (a, b) = (&primitive[i], &primitive[j]);
            a.len() + b.len() <= limit && a.iter().all(|x| !b.contains(x))
        });
    let hit = first_in_order(pairs, |&(i, j)| {
        let first = normals.select(&primitive[i]);
        let second = normals.select(&primitive[j]);
        Ok(positive_hull_intersection(&first, &second).map(|point| {
            Certificate::PrimitiveIntersection {
                first,
                second,
                point,
            }
        }))
    })?;
    Ok(hit.map_or_else(Verdict::holds, Verdict::fails))
}

/// Full classification with the chosen monotypy characterization.
pub fn classify(normals: &NormalSet, method: Method) -> Result<ClassificationVerdict> {
    let strong = check_strong_monotypy(normals)?;
    let mono = match method {
        Method::Conical => check_monotypy(normals)?,
        Method::Mss => check_monotypy_mss(normals)?,
        Method::Both => {
            let conical = check_monotypy(normals)?;
            let mss = check_monotypy_mss(normals)?;
            if conical.holds != mss.holds {
                return Err(Error::Internal(format!(
                    "monotypy characterizations disagree (conical: {}, mss: {})",
                    conical.holds, mss.holds
                )));
            }
            conical
        }
    };
    if strong.holds && !mono.holds {
        return Err(Error::Internal(
            "strongly monotypic normal set classified as not monotypic".into(),
        ));
    }
    Ok(ClassificationVerdict {
        strongly_monotypic: strong.holds,
        monotypic: mono.holds,
        method,
        certificate: strong.certificate,
        monotypy_certificate: mono.certificate,
    })
}

//! Exact rational linear algebra and feasibility.
//!
//! Everything here works over arbitrary-precision rationals; no decision in
//! the crate ever goes through floating point.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p"` or `"p/q"` with an optional leading minus sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (text, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let unsigned = numer.strip_prefix('-').unwrap_or(numer);
    if !digits(unsigned) {
        return Err(bad());
    }
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = match denom {
        Some(q) if digits(q) => q.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub(crate) mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &Rational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }
}

pub(crate) mod rational_vec_str {
    use super::*;

    pub fn serialize<S: Serializer>(
        values: &[Rational],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A point or direction in ℚⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        QVector(entries.iter().map(|&e| int(e)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, factor: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }

    /// Representative of the open ray through `self`: scaled so that the
    /// first nonzero entry has absolute value one. Two nonzero vectors are
    /// positive multiples of each other iff their directions are equal.
    pub fn direction(&self) -> QVector {
        match self.0.iter().find(|a| !a.is_zero()) {
            Some(lead) => self.scale(&lead.abs().recip()),
            None => self.clone(),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl Index<usize> for QVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational_vec_str::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        rational_vec_str::deserialize(d).map(QVector)
    }
}

/// Sum of `coefficients[i] * vectors[i]`.
pub fn combine(coefficients: &[Rational], vectors: &[QVector]) -> QVector {
    let dim = vectors.first().map_or(0, QVector::dim);
    vectors
        .iter()
        .zip(coefficients)
        .fold(QVector::zeros(dim), |acc, (v, c)| acc.add(&v.scale(c)))
}

/// Dense rational matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: Vec<QVector>,
    cols: usize,
}

impl QMatrix {
    pub fn from_rows(rows: Vec<QVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, QVector::dim);
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.dim(),
            });
        }
        Ok(QMatrix { rows, cols })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[QVector]) -> Result<Self> {
        let dim = columns.first().map_or(0, QVector::dim);
        if let Some(bad) = columns.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let rows = (0..dim)
            .map(|r| QVector(columns.iter().map(|c| c[r].clone()).collect()))
            .collect();
        Ok(QMatrix {
            rows,
            cols: columns.len(),
        })
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rational>> = self.rows.iter().map(|r| r.0.clone()).collect();
        row_reduce(&mut m, self.cols).len()
    }

    /// Solves the square system `self · x = rhs`; `None` when singular.
    pub fn solve(&self, rhs: &QVector) -> Result<Option<QVector>> {
        let n = self.rows.len();
        if self.cols != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.cols,
            });
        }
        if rhs.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.dim(),
            });
        }
        let mut m: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .zip(&rhs.0)
            .map(|(row, b)| {
                let mut r = row.0.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let pivots = row_reduce(&mut m, n);
        if pivots.len() < n {
            return Ok(None);
        }
        Ok(Some(QVector(m.iter().map(|r| r[n].clone()).collect())))
    }
}

/// Gauss-Jordan elimination on the first `cols` columns of `m` (extra
/// columns are carried along). Returns pivot columns; rows are reordered so
/// that row `i` holds the pivot of `pivots[i]` with a unit leading entry.
fn row_reduce(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let (src, dst) = if r < row {
                    let (a, b) = m.split_at_mut(row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[row], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d = &*d - &factor * s;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(vectors: &[QVector]) -> usize {
    match QMatrix::from_rows(vectors.to_vec()) {
        Ok(m) => m.rank(),
        Err(_) => 0,
    }
}

/// A nonzero vector `v` with `⟨r, v⟩ = 0` for every row, if the rows do not
/// span the whole space.
pub fn kernel_vector(rows: &[QVector], dim: usize) -> Option<QVector> {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    let pivots = row_reduce(&mut m, dim);
    let free = (0..dim).find(|c| !pivots.contains(c))?;
    let mut v = QVector::zeros(dim);
    v.0[free] = Rational::one();
    for (i, &p) in pivots.iter().enumerate() {
        v.0[p] = -m[i][free].clone();
    }
    Some(v)
}

/// Coefficients λ with `∑ λᵢ · basis[i] = target`, or `None` if the basis is
/// singular.
pub fn solve_linear(basis: &[QVector], target: &QVector) -> Result<Option<QVector>> {
    let n = target.dim();
    if basis.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: basis.len(),
        });
    }
    if let Some(bad) = basis.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }
    QMatrix::from_columns(basis)?.solve(target)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

/// `⟨coeffs, v⟩ rel rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: QVector,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn ge(coeffs: QVector, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation: Relation::Ge,
            rhs,
        }
    }

    pub fn eq(coeffs: QVector, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation: Relation::Eq,
            rhs,
        }
    }

    pub fn holds_at(&self, point: &QVector) -> bool {
        let lhs = self.coeffs.dot(point);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Finds `v ∈ ℚ^dim` satisfying every constraint, or `None` if the system is
/// infeasible. The decision is exact.
pub fn feasible(dim: usize, constraints: &[Constraint]) -> Result<Option<QVector>> {
    if let Some(bad) = constraints.iter().find(|c| c.coeffs.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.coeffs.dim(),
        });
    }
    if constraints.is_empty() {
        return Ok(Some(QVector::zeros(dim)));
    }
    // v = p - q with p, q ≥ 0; one surplus column per inequality.
    let surplus = constraints
        .iter()
        .filter(|c| c.relation == Relation::Ge)
        .count();
    let width = 2 * dim + surplus;
    let mut next_surplus = 2 * dim;
    let mut rows = Vec::with_capacity(constraints.len());
    let mut rhs = Vec::with_capacity(constraints.len());
    for c in constraints {
        let mut row = vec![Rational::zero(); width];
        for (j, a) in c.coeffs.entries().iter().enumerate() {
            row[j] = a.clone();
            row[dim + j] = -a.clone();
        }
        if c.relation == Relation::Ge {
            row[next_surplus] = -Rational::one();
            next_surplus += 1;
        }
        rows.push(row);
        rhs.push(c.rhs.clone());
    }
    Ok(nonnegative_solution(&rows, &rhs, width)
        .map(|y| QVector((0..dim).map(|j| &y[j] - &y[dim + j]).collect())))
}

/// Nonnegative μ with `∑ μᵢ · generators[i] = target`, if one exists.
pub fn nonnegative_combination(generators: &[QVector], target: &QVector) -> Option<Vec<Rational>> {
    let rows: Vec<Vec<Rational>> = (0..target.dim())
        .map(|r| generators.iter().map(|g| g[r].clone()).collect())
        .collect();
    nonnegative_solution(&rows, target.entries(), generators.len())
}

/// Phase-one simplex with Bland's rule: finds `y ≥ 0` with `A y = b`.
///
/// `rows` holds the rows of `A`, each of length `width`.
pub fn nonnegative_solution(
    rows: &[Vec<Rational>],
    b: &[Rational],
    width: usize,
) -> Option<Vec<Rational>> {
    let m = rows.len();
    if m == 0 {
        return Some(vec![Rational::zero(); width]);
    }
    // Tableau columns: [A | I (artificials) | b], every row with b ≥ 0.
    let cols = width + m;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (row, bi)) in rows.iter().zip(b).enumerate() {
        debug_assert_eq!(row.len(), width);
        let flip = bi.is_negative();
        let mut r = Vec::with_capacity(cols + 1);
        r.extend(row.iter().map(|a| if flip { -a } else { a.clone() }));
        r.extend((0..m).map(|k| {
            if k == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        r.push(if flip { -bi } else { bi.clone() });
        t.push(r);
    }
    let mut basis: Vec<usize> = (width..cols).collect();
    // Reduced costs of the auxiliary objective (sum of artificials).
    let mut cost = vec![Rational::zero(); cols + 1];
    for r in &t {
        for j in 0..width {
            cost[j] -= &r[j];
        }
        cost[cols] -= &r[cols];
    }
    while let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][cols] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // The auxiliary problem is bounded below by zero.
        let (pivot_row, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut t, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }
    if !cost[cols].is_zero() {
        return None;
    }
    let mut y = vec![Rational::zero(); width];
    for (i, &var) in basis.iter().enumerate() {
        if var < width {
            y[var] = t[i][cols].clone();
        }
    }
    Some(y)
}

fn pivot(t: &mut [Vec<Rational>], cost: &mut [Rational], row: usize, col: usize) {
    let inv = t[row][col].recip();
    for x in t[row].iter_mut() {
        *x = &*x * &inv;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i != row && !r[col].is_zero() {
            let factor = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &factor * p;
                }
            }
        }
    }
    if !cost[col].is_zero() {
        let factor = cost[col].clone();
        for (x, p) in cost.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x = &*x - &factor * p;
            }
        }
    }
}

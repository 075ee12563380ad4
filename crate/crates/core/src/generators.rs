//! Built-in polytope families.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, rat, QVector, Rational};
use crate::polytope::HPolytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `[-1, 1]ⁿ`: normals `±eᵢ`.
    Box,
    /// Normals `e₁, …, eₙ, (−1, …, −1)`.
    Simplex,
    /// Product of simplices: block-diagonal union of simplex normal sets.
    SimplexProduct,
    /// Normals `(0,0,−1), (±1,0,1), (0,±1,1)`; not monotypic.
    SquarePyramid,
    /// Normals `±(1,0), ±(0,1), ±(1,1)`.
    Hexagon,
    /// The square pyramid with its apex cut off by `z ≤ 1/2`; monotypic but
    /// not strongly monotypic.
    Frustum,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Box,
        Family::Simplex,
        Family::SimplexProduct,
        Family::SquarePyramid,
        Family::Hexagon,
        Family::Frustum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Box => "box",
            Family::Simplex => "simplex",
            Family::SimplexProduct => "simplex_product",
            Family::SquarePyramid => "square_pyramid",
            Family::Hexagon => "hexagon",
            Family::Frustum => "frustum",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    /// `[n]` for box and simplex, the factor dimensions for a simplex
    /// product, empty for the fixed families.
    pub dims: Vec<usize>,
    /// Replaces the default offsets (canonical normal order).
    pub offsets: Option<Vec<Rational>>,
    /// Randomizes offsets with [`randomize_offsets`].
    pub seed: Option<u64>,
}

impl FamilySpec {
    pub fn new(family: Family, dims: Vec<usize>) -> Self {
        FamilySpec {
            family,
            dims,
            offsets: None,
            seed: None,
        }
    }
}

pub fn generate(spec: &FamilySpec) -> Result<HPolytope> {
    let base = match spec.family {
        Family::Box => box_polytope(single_dim(spec)?),
        Family::Simplex => simplex(single_dim(spec)?),
        Family::SimplexProduct => simplex_product(&spec.dims),
        Family::SquarePyramid => fixed(spec, square_pyramid),
        Family::Hexagon => fixed(spec, hexagon),
        Family::Frustum => fixed(spec, frustum),
    }?;
    let base = match &spec.offsets {
        Some(offsets) => base.with_offsets(offsets.clone())?,
        None => base,
    };
    match spec.seed {
        Some(seed) => randomize_offsets(&base, seed),
        None => Ok(base),
    }
}

fn single_dim(spec: &FamilySpec) -> Result<usize> {
    match spec.dims.as_slice() {
        [n] if *n > 0 => Ok(*n),
        _ => Err(Error::InvalidArgument(format!(
            "{} takes exactly one positive dimension",
            spec.family
        ))),
    }
}

fn fixed(spec: &FamilySpec, build: fn() -> Result<HPolytope>) -> Result<HPolytope> {
    if !spec.dims.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "{} takes no dimensions",
            spec.family
        )));
    }
    build()
}

fn unit_offsets(normals: Vec<QVector>, dim: usize) -> Result<HPolytope> {
    let k = normals.len();
    HPolytope::new(dim, normals, vec![int(1); k])
}

pub fn box_polytope(n: usize) -> Result<HPolytope> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let normals = (0..n)
        .flat_map(|i| [QVector::unit(n, i), QVector::unit(n, i).neg()])
        .collect();
    unit_offsets(normals, n)
}

fn simplex_normals(n: usize) -> Vec<QVector> {
    let mut normals: Vec<QVector> = (0..n).map(|i| QVector::unit(n, i)).collect();
    normals.push(QVector::new(vec![int(-1); n]));
    normals
}

pub fn simplex(n: usize) -> Result<HPolytope> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    unit_offsets(simplex_normals(n), n)
}

pub fn simplex_product(dims: &[usize]) -> Result<HPolytope> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidArgument(
            "simplex product needs positive factor dimensions".into(),
        ));
    }
    let total: usize = dims.iter().sum();
    let mut normals = Vec::new();
    let mut shift = 0;
    for &d in dims {
        for n in simplex_normals(d) {
            let mut entries = vec![int(0); total];
            entries[shift..shift + d].clone_from_slice(n.entries());
            normals.push(QVector::new(entries));
        }
        shift += d;
    }
    unit_offsets(normals, total)
}

pub fn square_pyramid() -> Result<HPolytope> {
    let normals = [[0, 0, -1], [1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]]
        .iter()
        .map(|n| QVector::from_ints(n))
        .collect();
    unit_offsets(normals, 3)
}

pub fn hexagon() -> Result<HPolytope> {
    let normals = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]]
        .iter()
        .map(|n| QVector::from_ints(n))
        .collect();
    unit_offsets(normals, 2)
}

pub fn frustum() -> Result<HPolytope> {
    let normals = [
        [0, 0, -1],
        [0, 0, 1],
        [1, 0, 1],
        [-1, 0, 1],
        [0, 1, 1],
        [0, -1, 1],
    ]
    .iter()
    .map(|n| QVector::from_ints(n))
    .collect();
    let offsets = vec![int(1), rat(1, 2), int(1), int(1), int(1), int(1)];
    HPolytope::new(3, normals, offsets)
}

/// SplitMix64 (Steele, Lea and Flood), the offset randomization stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish in `0..bound` by reduction modulo `bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// `p/q ∈ [1, 2]` with `q = 1 + below(16)` and `p = q + below(q + 1)`.
    pub fn offset(&mut self) -> Rational {
        let q = 1 + self.below(16);
        let p = q + self.below(q + 1);
        rat(p as i64, q as i64)
    }
}

pub const RANDOMIZE_ATTEMPTS: usize = 100;

/// Same normals, offsets drawn in canonical normal order from
/// `SplitMix64::new(seed)`. Draws that make a facet redundant are discarded
/// and the stream continues, up to [`RANDOMIZE_ATTEMPTS`] times.
pub fn randomize_offsets(polytope: &HPolytope, seed: u64) -> Result<HPolytope> {
    let mut rng = SplitMix64::new(seed);
    let mut last = None;
    for _ in 0..RANDOMIZE_ATTEMPTS {
        let offsets = (0..polytope.facet_count()).map(|_| rng.offset()).collect();
        match polytope.with_offsets(offsets) {
            Ok(p) => return Ok(p),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::InvalidArgument(format!(
        "no valid offsets for normals [{}] after {RANDOMIZE_ATTEMPTS} attempts (last error: {})",
        polytope
            .normals()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", "),
        last.map_or_else(String::new, |e| e.to_string())
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify;
    use crate::skeleton;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0 as published with the reference code.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn box_counts() {
        let b = box_polytope(3).unwrap();
        assert_eq!(b.facet_count(), 6);
        assert_eq!(b.vertices().len(), 8);
    }

    #[test]
    fn prism_normals() {
        let p = simplex_product(&[2, 1]).unwrap();
        let mut got = p.normals().to_vec();
        got.sort();
        let mut want: Vec<QVector> = [[1, 0, 0], [0, 1, 0], [-1, -1, 0], [0, 0, 1], [0, 0, -1]]
            .iter()
            .map(|n| QVector::from_ints(n))
            .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn pyramid_is_not_monotypic() {
        let p = square_pyramid().unwrap();
        assert!(!classify::check_monotypy(p.normal_set()).unwrap().holds);
    }

    #[test]
    fn bad_parameters() {
        assert!(generate(&FamilySpec::new(Family::Box, vec![0])).is_err());
        assert!(generate(&FamilySpec::new(Family::Simplex, vec![])).is_err());
        assert!(generate(&FamilySpec::new(Family::SimplexProduct, vec![2, 0])).is_err());
        assert!(generate(&FamilySpec::new(Family::Hexagon, vec![2])).is_err());
        assert!("dodecahedron".parse::<Family>().is_err());
        assert_eq!(
            "simplex_product".parse::<Family>().unwrap(),
            Family::SimplexProduct
        );
    }

    #[test]
    fn randomized_offsets_are_deterministic_and_in_range() {
        let b = box_polytope(3).unwrap();
        let r1 = randomize_offsets(&b, 1).unwrap();
        let r2 = randomize_offsets(&b, 1).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.normals(), b.normals());
        for h in r1.offsets() {
            assert!(*h >= int(1) && *h <= int(2));
            assert!(*h.denom() <= 16.into());
        }
        let verdict = classify::classify(r1.normal_set(), classify::Method::Conical).unwrap();
        assert!(verdict.strongly_monotypic && verdict.monotypic);
    }

    #[test]
    fn randomized_triangle_keeps_its_skeleton() {
        let t = randomize_offsets(&simplex(2).unwrap(), 7).unwrap();
        assert_eq!(t.vertices().len(), 3);
        assert_eq!(
            skeleton::extract_skeleton(t.normal_set())
                .unwrap()
                .parts
                .len(),
            1
        );
    }

    #[test]
    fn fixed_families_validate() {
        for f in [Family::SquarePyramid, Family::Hexagon, Family::Frustum] {
            generate(&FamilySpec::new(f, vec![])).unwrap();
        }
        assert_eq!(frustum().unwrap().vertices().len(), 8);
    }
}

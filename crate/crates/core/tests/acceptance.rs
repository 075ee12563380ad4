//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;

use num_traits::{One, Signed, Zero};

use hadwiger::classify::{self, Certificate};
use hadwiger::exact::{int, rat, QVector, Rational};
use hadwiger::fan;
use hadwiger::generators::{self, Family, FamilySpec, SplitMix64};
use hadwiger::illuminate;
use hadwiger::oracle;
use hadwiger::polytope::{self, HPolytope, Location};
use hadwiger::position::{self, ConicalPosition, SignTag};
use hadwiger::skeleton;
use hadwiger::Error;

const SEEDS: u64 = 20;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{context}: {e}")
}

fn instance(family: Family, dims: &[usize]) -> HPolytope {
    generators::generate(&FamilySpec::new(family, dims.to_vec()))
        .unwrap_or_else(|e| panic!("{family} {dims:?}: {e}"))
}

struct Named {
    name: String,
    polytope: HPolytope,
}

fn named(family: Family, dims: &[usize]) -> Named {
    let name = if dims.is_empty() {
        family.to_string()
    } else {
        format!("{family}{dims:?}")
    };
    Named {
        name,
        polytope: instance(family, dims),
    }
}

fn all_instances() -> Vec<Named> {
    let mut out = Vec::new();
    for n in 2..=4 {
        out.push(named(Family::Box, &[n]));
    }
    for n in 2..=4 {
        out.push(named(Family::Simplex, &[n]));
    }
    out.push(named(Family::SimplexProduct, &[2, 1]));
    out.push(named(Family::SimplexProduct, &[1, 1]));
    out.push(named(Family::Hexagon, &[]));
    out.push(named(Family::SquarePyramid, &[]));
    out.push(named(Family::Frustum, &[]));
    out
}

fn randomizations(p: &HPolytope) -> Result<Vec<HPolytope>, String> {
    (0..SEEDS)
        .map(|seed| generators::randomize_offsets(p, seed).map_err(err("randomize")))
        .collect()
}

/// Builds and fully checks the illumination set; returns `q`.
fn build_and_verify(p: &HPolytope) -> Result<usize, String> {
    let set = illuminate::build_illumination_set(p).map_err(err("build"))?;
    let report = illuminate::verify_illumination(p, &set).map_err(err("verify"))?;
    ensure!(
        report.passed,
        "verification failed at {:?}",
        report
            .failures()
            .map(|c| c.vertex.to_string())
            .collect::<Vec<_>>()
    );
    Ok(set.len())
}

fn oracle_min(p: &HPolytope) -> Result<usize, String> {
    let result = oracle::min_illumination_number(p).map_err(err("oracle"))?;
    // The oracle's own choice must pass the independent verifier.
    let eps = witness_epsilon(p, &result.directions)?;
    let report =
        illuminate::verify_directions(p, &result.directions, &eps).map_err(err("verify oracle"))?;
    ensure!(report.passed, "oracle directions do not verify");
    Ok(result.minimum)
}

/// A step size that works for the given directions at every vertex.
fn witness_epsilon(p: &HPolytope, directions: &[QVector]) -> Result<Rational, String> {
    let delta = illuminate::compute_delta(p).map_err(err("delta"))?;
    illuminate::compute_epsilon(p, directions, &delta).map_err(err("epsilon"))
}

fn criterion_1() -> Outcome {
    for n in 2..=4 {
        let p = instance(Family::Box, &[n]);
        let verdict = classify::check_strong_monotypy(p.normal_set()).map_err(err("classify"))?;
        ensure!(verdict.holds, "box({n}) not strongly monotypic");
        let sk = skeleton::extract_skeleton(p.normal_set()).map_err(err("skeleton"))?;
        ensure!(sk.parts.len() == n, "box({n}): k = {}", sk.parts.len());
        ensure!(
            sk.parts.iter().all(|x| x.len() == 2),
            "box({n}): part sizes"
        );
        let q = build_and_verify(&p)?;
        ensure!(q == 1 << n, "box({n}): q = {q}");
        let min = oracle_min(&p)?;
        ensure!(min == q, "box({n}): oracle {min} != q {q}");
    }
    Ok("box(2..4): k = n, q = oracle = 2^n".into())
}

fn criterion_2() -> Outcome {
    for n in 2..=4 {
        let p = instance(Family::Simplex, &[n]);
        let sk = skeleton::extract_skeleton(p.normal_set()).map_err(err("skeleton"))?;
        ensure!(sk.parts.len() == 1, "simplex({n}): k = {}", sk.parts.len());
        let q = build_and_verify(&p)?;
        ensure!(q == n + 1 && q <= 1 << n, "simplex({n}): q = {q}");
        if n <= 3 {
            let min = oracle_min(&p)?;
            ensure!(min == n + 1, "simplex({n}): oracle {min}");
        }
    }
    Ok("simplex(2..4): k = 1, q = n+1, oracle = n+1 for n <= 3".into())
}

fn criterion_3() -> Outcome {
    let cases = [
        (
            instance(Family::SimplexProduct, &[2, 1]),
            6,
            "simplex_product[2,1]",
        ),
        (
            instance(Family::SimplexProduct, &[1, 1]),
            4,
            "simplex_product[1,1]",
        ),
        (instance(Family::Hexagon, &[]), 3, "hexagon"),
    ];
    for (p, expected, name) in &cases {
        let q = build_and_verify(p)?;
        ensure!(q == *expected, "{name}: q = {q}");
        ensure!(q <= 1 << p.dim(), "{name}: q above 2^n");
        let min = oracle_min(p)?;
        ensure!(min == *expected, "{name}: oracle {min}");
    }
    Ok("q = oracle: 6, 4, 3".into())
}

fn criterion_4() -> Outcome {
    let p = instance(Family::SquarePyramid, &[]);
    let normals = p.normal_set();
    let strong = classify::check_strong_monotypy(normals).map_err(err("strong"))?;
    let mono = classify::check_monotypy(normals).map_err(err("mono"))?;
    let mss = classify::check_monotypy_mss(normals).map_err(err("mss"))?;
    ensure!(
        !strong.holds && !mono.holds && !mss.holds,
        "pyramid accepted"
    );
    let expected: BTreeSet<QVector> = [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]]
        .iter()
        .map(|v| QVector::from_ints(v))
        .collect();
    for verdict in [&strong, &mono] {
        let (Some(Certificate::ConicalSubset { normals: cert, .. })
        | Some(Certificate::EmptyConicalSubset { normals: cert, .. })) = &verdict.certificate
        else {
            return Err(format!("unexpected certificate {:?}", verdict.certificate));
        };
        let got: BTreeSet<QVector> = cert.iter().cloned().collect();
        ensure!(got == expected, "certificate {got:?}");
        ensure!(
            position::is_conical_position(cert)
                .map_err(err("conical"))?
                .is_conical(),
            "certificate not in conical position"
        );
    }
    for verdict in [&strong, &mono, &mss] {
        let cert = verdict.certificate.as_ref().ok_or("missing certificate")?;
        ensure!(
            cert.recheck(normals).map_err(err("recheck"))?,
            "certificate fails recheck"
        );
    }
    ensure!(
        matches!(
            skeleton::extract_skeleton(normals),
            Err(Error::NotStronglyMonotypic { .. })
        ),
        "skeleton did not refuse"
    );
    ensure!(
        matches!(
            illuminate::build_illumination_set(&p),
            Err(Error::NotStronglyMonotypic { .. })
        ),
        "illumination did not refuse"
    );
    Ok("square pyramid rejected by all three tests with re-verified certificate".into())
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for inst in all_instances() {
        let mut polytopes = vec![inst.polytope.clone()];
        polytopes.extend(randomizations(&inst.polytope)?);
        for p in &polytopes {
            let normals = p.normal_set();
            let strong = classify::check_strong_monotypy(normals).map_err(err("strong"))?;
            let mono = classify::check_monotypy(normals).map_err(err("mono"))?;
            let mss = classify::check_monotypy_mss(normals).map_err(err("mss"))?;
            ensure!(
                mono.holds == mss.holds,
                "{}: conical and MSS disagree",
                inst.name
            );
            ensure!(
                !strong.holds || mono.holds,
                "{}: strong but not monotypic",
                inst.name
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} instances, zero disagreements"))
}

fn fan_signature(p: &HPolytope) -> Result<Vec<Vec<QVector>>, String> {
    Ok(fan::normal_fan(p)
        .map_err(err("normal fan"))?
        .iter()
        .map(|c| p.normal_set().select(&c.generators))
        .collect())
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for inst in all_instances() {
        let mono = classify::check_monotypy(inst.polytope.normal_set()).map_err(err("mono"))?;
        if !mono.holds {
            continue;
        }
        let reference = fan_signature(&inst.polytope)?;
        let mut polytopes = vec![inst.polytope.clone()];
        polytopes.extend(randomizations(&inst.polytope)?);
        for p in &polytopes {
            let report = fan::verify_fan_uniqueness(p).map_err(err("uniqueness"))?;
            ensure!(report.unique, "{}: fan not unique: {report:?}", inst.name);
            ensure!(
                fan_signature(p)? == reference,
                "{}: normal fan depends on offsets",
                inst.name
            );
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} monotypic instances, one fan per normal set"
    ))
}

fn criterion_7() -> Outcome {
    let mut builds = 0;
    for inst in all_instances() {
        let strong =
            classify::check_strong_monotypy(inst.polytope.normal_set()).map_err(err("strong"))?;
        if !strong.holds {
            continue;
        }
        let mut polytopes = vec![inst.polytope.clone()];
        polytopes.extend(randomizations(&inst.polytope)?);
        for p in &polytopes {
            let set = illuminate::build_illumination_set(p).map_err(err("build"))?;
            ensure!(
                set.epsilon.is_positive(),
                "{}: epsilon not positive",
                inst.name
            );
            for v in &set.directions {
                for n in p.normals() {
                    let d = n.dot(v);
                    ensure!(
                        !d.is_negative() || &set.epsilon * d.abs() <= set.delta,
                        "{}: epsilon too large for {n} and {v}",
                        inst.name
                    );
                }
            }
            for (cone, v) in set.cones.iter().zip(&set.directions) {
                ensure!(
                    cone.iter().all(|g| g.dot(v).is_one()),
                    "{}: generator products not 1",
                    inst.name
                );
            }
            for vertex in p.vertices() {
                let near =
                    polytope::tight_normals(p, &vertex.point, &set.delta).map_err(err("tight"))?;
                ensure!(near == vertex.tight, "{}: delta postcondition", inst.name);
                let j = set
                    .direction_for(&vertex.point)
                    .ok_or("unassigned vertex")?;
                let moved = vertex.point.sub(&set.scaled[j]);
                ensure!(
                    p.point_location(&moved) == Location::Interior,
                    "{}: {} - eps v not interior",
                    inst.name,
                    vertex.point
                );
            }
            builds += 1;
        }
    }
    Ok(format!("{builds} builds exact"))
}

fn random_entry(rng: &mut SplitMix64) -> Rational {
    let numer = rng.below(9) as i64 - 4;
    let denom = 1 + rng.below(3) as i64;
    rat(numer, denom)
}

fn random_vector(rng: &mut SplitMix64, n: usize) -> QVector {
    QVector::new((0..n).map(|_| random_entry(rng)).collect())
}

fn sign_class_case(basis: &[QVector], x: &QVector) -> Result<(), String> {
    let class = position::classify_signs(basis, x).map_err(err("classify_signs"))?;
    let mut points = vec![x.clone()];
    points.extend(basis.iter().cloned());
    let separated = position::separating_functional(&points)
        .map_err(err("separation"))?
        .is_some();
    let mut in_hull = false;
    for i in 0..points.len() {
        let others: Vec<QVector> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone())
            .collect();
        if position::cone_membership(&points[i], &others)
            .map_err(err("membership"))?
            .is_some()
        {
            in_hull = true;
        }
    }
    let conical = position::is_conical_position(&points).map_err(err("conical"))?;
    let ok = match class.tag {
        SignTag::AllNonpositive => !separated,
        SignTag::AllNonnegative | SignTag::SinglePositive(_) => separated && in_hull,
        SignTag::Mixed => separated && !in_hull && conical.is_conical(),
    };
    let consistent = conical.is_conical() == (class.tag == SignTag::Mixed)
        && matches!(conical, ConicalPosition::NotSeparated) == !separated;
    ensure!(ok && consistent, "x = {x}, tag {:?}", class.tag);
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut rng = SplitMix64::new(0x0b5e_7a71_0000_0003);
    let mut tags = BTreeSet::new();
    let mut cases = 0;
    for n in 2..=4 {
        let mut done = 0;
        while done < 100 {
            let basis: Vec<QVector> = (0..n).map(|_| random_vector(&mut rng, n)).collect();
            if hadwiger::exact::rank(&basis) != n {
                continue;
            }
            let x = random_vector(&mut rng, n);
            if x.is_zero() {
                continue;
            }
            sign_class_case(&basis, &x)?;
            let tag = position::classify_signs(&basis, &x)
                .map_err(err("signs"))?
                .tag;
            tags.insert(match tag {
                SignTag::SinglePositive(_) => "single_positive",
                SignTag::AllNonpositive => "all_nonpositive",
                SignTag::AllNonnegative => "all_nonnegative",
                SignTag::Mixed => "mixed",
            });
            done += 1;
            cases += 1;
        }
    }
    ensure!(
        tags.len() == 4,
        "not every sign class was exercised: {tags:?}"
    );
    Ok(format!("{cases} instances, all four sign classes agree"))
}

fn criterion_9() -> Outcome {
    let hex = instance(Family::Hexagon, &[]);
    let set = illuminate::build_illumination_set(&hex).map_err(err("hexagon"))?;
    ensure!(set.delta == rat(1, 2), "hexagon delta {}", set.delta);
    ensure!(set.epsilon == rat(1, 4), "hexagon epsilon {}", set.epsilon);
    let got: BTreeSet<QVector> = set.directions.iter().cloned().collect();
    let want: BTreeSet<QVector> = [[1, 1], [-2, 1], [1, -2]]
        .iter()
        .map(|v| QVector::from_ints(v))
        .collect();
    ensure!(got == want && set.len() == 3, "hexagon directions {got:?}");

    let cube = instance(Family::Box, &[3]);
    let set = illuminate::build_illumination_set(&cube).map_err(err("cube"))?;
    ensure!(set.delta == int(1), "cube delta {}", set.delta);
    ensure!(set.epsilon == int(1), "cube epsilon {}", set.epsilon);

    let triangle = instance(Family::Simplex, &[2]);
    let delta = illuminate::compute_delta(&triangle).map_err(err("triangle"))?;
    ensure!(delta == rat(3, 2), "triangle delta {delta}");
    ensure!(
        !delta.is_zero() && delta.is_positive(),
        "triangle delta sign"
    );
    Ok("hexagon 1/2, 1/4, {(1,1),(-2,1),(1,-2)}; cube 1, 1; triangle 3/2".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "cube family", criterion_1),
        (2, "simplex family", criterion_2),
        (3, "simplex products and hexagon", criterion_3),
        (4, "negative control", criterion_4),
        (5, "characterization agreement", criterion_5),
        (6, "fan uniqueness", criterion_6),
        (7, "construction exactness", criterion_7),
        (8, "sign classes", criterion_8),
        (9, "worked numbers", criterion_9),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id}: {name}: {detail} ({secs:.2}s)"),
            Err(reason) => {
                failed += 1;
                println!("FAIL criterion {id}: {name}: {reason} ({secs:.2}s)");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Self-contained verification suites.
//!
//! Each suite replays a family of cross-checks between independent
//! routes through the crate (closed forms against brute-force
//! expansions, the counting DP against enumeration, the path route
//! against the index-pair oracle) and reports one pass/fail line per
//! check. The CLI `verify` command drives these; the test suite covers
//! the same ground with tighter assertions.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::cone::TropicalVector;
use crate::cyclic::SignedCyclicSpec;
use crate::linalg::{self, IndexPair};
use crate::paths::{self, SignPattern};
use crate::semiring::SignedScalar;
use crate::{bounds, deform, Error};

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Semiring,
    Cramer,
    Oracle,
    Gale,
    Bounds,
    Deform,
    All,
}

impl Suite {
    pub const NAMES: &'static [&'static str] = &[
        "semiring", "cramer", "oracle", "gale", "bounds", "deform", "all",
    ];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "semiring" => Ok(Suite::Semiring),
            "cramer" => Ok(Suite::Cramer),
            "oracle" => Ok(Suite::Oracle),
            "gale" => Ok(Suite::Gale),
            "bounds" => Ok(Suite::Bounds),
            "deform" => Ok(Suite::Deform),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidArgument(format!(
                "unknown suite {other:?}; expected one of {:?}",
                Suite::NAMES
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Semiring => "semiring",
            Suite::Cramer => "cramer",
            Suite::Oracle => "oracle",
            Suite::Gale => "gale",
            Suite::Bounds => "bounds",
            Suite::Deform => "deform",
            Suite::All => "all",
        };
        f.write_str(name)
    }
}

type CheckFn = fn() -> Result<String, String>;

fn run_checks(checks: &[(&str, CheckFn)]) -> Vec<CheckReport> {
    checks
        .iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let outcome = f();
            CheckReport {
                name: name.to_string(),
                passed: outcome.is_ok(),
                detail: match outcome {
                    Ok(d) | Err(d) => d,
                },
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

/// Runs one suite (or all of them) and returns the per-check reports.
pub fn run_suite(suite: Suite) -> Vec<CheckReport> {
    match suite {
        Suite::Semiring => run_checks(SEMIRING_CHECKS),
        Suite::Cramer => run_checks(CRAMER_CHECKS),
        Suite::Oracle => run_checks(ORACLE_CHECKS),
        Suite::Gale => run_checks(GALE_CHECKS),
        Suite::Bounds => run_checks(BOUNDS_CHECKS),
        Suite::Deform => run_checks(DEFORM_CHECKS),
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Semiring,
                Suite::Cramer,
                Suite::Oracle,
                Suite::Gale,
                Suite::Bounds,
                Suite::Deform,
            ] {
                all.extend(run_suite(s));
            }
            all
        }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn random_code(rng: &mut ChaCha8Rng, cells: usize) -> u64 {
    let mask = if cells >= 64 {
        u64::MAX
    } else {
        (1u64 << cells) - 1
    };
    rng.random::<u64>() & mask
}

fn random_signed(rng: &mut ChaCha8Rng) -> SignedScalar {
    let v = rng.random_range(-40i64..40);
    match rng.random_range(0..4) {
        0 => SignedScalar::Zero,
        1 => SignedScalar::Pos(v),
        2 => SignedScalar::Neg(v),
        _ => SignedScalar::Bal(v),
    }
}

/// The secondary t-vector used across suites: 0, 3, 7, 12, 18, ...
fn irregular_t(p: usize) -> Vec<i64> {
    let mut t = Vec::with_capacity(p);
    let mut cur = 0i64;
    for i in 0..p as i64 {
        t.push(cur);
        cur += i + 3;
    }
    t
}

fn canonical_ray_set(spec: &SignedCyclicSpec) -> Result<Vec<TropicalVector>, String> {
    let mut by_paths: Vec<TropicalVector> = spec
        .enumerate_extreme_rays()
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|er| er.ray.canonicalized())
        .collect();
    by_paths.sort();
    Ok(by_paths)
}

fn oracle_matches(spec: &SignedCyclicSpec) -> Result<(), String> {
    let by_paths = canonical_ray_set(spec)?;
    let by_oracle = spec.oracle_extreme_rays().map_err(|e| e.to_string())?;
    if by_paths != by_oracle {
        return Err(format!(
            "mismatch on pattern\n{}t={:?}\npaths: {:?}\noracle: {:?}",
            spec.pattern().to_text(),
            spec.t(),
            by_paths,
            by_oracle
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Semiring
// ---------------------------------------------------------------------------

const SEMIRING_CHECKS: &[(&str, CheckFn)] = &[
    ("semiring laws on sampled triples", semiring_laws),
    ("embedding agrees with max-plus", semiring_embedding),
    ("balance is equality on signed elements", semiring_balance),
];

fn semiring_laws() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let n = 30_000;
    for _ in 0..n {
        let (x, y, z) = (
            random_signed(&mut rng),
            random_signed(&mut rng),
            random_signed(&mut rng),
        );
        let times = |a: SignedScalar, b: SignedScalar| a.times(b).unwrap();
        if x.plus(y) != y.plus(x) || times(x, y) != times(y, x) {
            return Err(format!("commutativity fails on {x}, {y}"));
        }
        if x.plus(y).plus(z) != x.plus(y.plus(z)) {
            return Err(format!("plus associativity fails on {x}, {y}, {z}"));
        }
        if times(times(x, y), z) != times(x, times(y, z)) {
            return Err(format!("times associativity fails on {x}, {y}, {z}"));
        }
        if times(x, y.plus(z)) != times(x, y).plus(times(x, z)) {
            return Err(format!("distributivity fails on {x}, {y}, {z}"));
        }
        if x.plus(x).modulus() != x.modulus() {
            return Err(format!("modulus idempotence fails on {x}"));
        }
        if x.negated().negated() != x {
            return Err(format!("involution fails on {x}"));
        }
    }
    Ok(format!("{n} sampled triples"))
}

fn semiring_embedding() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let n = 10_000;
    for _ in 0..n {
        let a = rng.random_range(-50i64..50);
        let b = rng.random_range(-50i64..50);
        let (sa, sb) = (SignedScalar::Pos(a), SignedScalar::Pos(b));
        if sa.plus(sb) != SignedScalar::Pos(a.max(b))
            || sa.times(sb).unwrap() != SignedScalar::Pos(a + b)
        {
            return Err(format!("embedding fails on {a}, {b}"));
        }
    }
    Ok(format!("{n} sampled pairs"))
}

fn semiring_balance() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let n = 20_000;
    for _ in 0..n {
        let (x, y) = (random_signed(&mut rng), random_signed(&mut rng));
        if x == y && !x.balances(y) {
            return Err(format!("equal elements must balance: {x}"));
        }
        if x.is_signed() && y.is_signed() && x.balances(y) != (x == y) {
            return Err(format!("signed balance mismatch on {x}, {y}"));
        }
    }
    Ok(format!("{n} sampled pairs"))
}

// ---------------------------------------------------------------------------
// Cramer
// ---------------------------------------------------------------------------

const CRAMER_CHECKS: &[(&str, CheckFn)] = &[
    (
        "closed forms match determinant expansion (exhaustive, p*d <= 12)",
        cramer_exhaustive,
    ),
    (
        "closed forms match determinant expansion (random 5x5)",
        cramer_random,
    ),
    (
        "cramer solutions solve the split system",
        cramer_split_system,
    ),
];

fn cramer_against_sdet(spec: &SignedCyclicSpec) -> Result<u64, String> {
    let pattern = spec.pattern();
    let (p, d) = (pattern.p(), pattern.d());
    let c = spec.matrix().map_err(|e| e.to_string())?;
    let mut checked = 0;
    for k in 1..=p.min(d - 1) {
        for cols in (0..d).combinations(k + 1) {
            for rows in (0..p).combinations(k) {
                let ij = IndexPair::new(rows.clone(), cols.clone()).map_err(|e| e.to_string())?;
                let ds = linalg::cramer_determinants(pattern, spec.t(), &ij)
                    .map_err(|e| e.to_string())?;
                for (r, &expected) in ds.iter().enumerate() {
                    let kept: Vec<usize> = cols
                        .iter()
                        .copied()
                        .enumerate()
                        .filter(|&(idx, _)| idx != r)
                        .map(|(_, j)| j)
                        .collect();
                    let by_det =
                        linalg::sdet(&c.submatrix(&rows, &kept)).map_err(|e| e.to_string())?;
                    if !by_det.is_signed() {
                        return Err(format!("balanced determinant on\n{}", pattern.to_text()));
                    }
                    if by_det != expected {
                        return Err(format!(
                            "D_{} mismatch on\n{}t={:?}: {by_det} vs {}",
                            r + 1,
                            pattern.to_text(),
                            spec.t(),
                            ds[r]
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn cramer_exhaustive() -> Result<String, String> {
    let mut checked = 0;
    for p in 1..=6usize {
        for d in 2..=6usize {
            if p * d > 12 {
                continue;
            }
            for code in 0u64..1 << (p * d) {
                let pattern = SignPattern::from_code(p, d, code).map_err(|e| e.to_string())?;
                let spec = SignedCyclicSpec::with_default_t(pattern);
                checked += cramer_against_sdet(&spec)?;
            }
        }
    }
    Ok(format!("{checked} determinants"))
}

fn cramer_random() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    let mut checked = 0;
    for _ in 0..200 {
        let p = rng.random_range(1..=5);
        let d = rng.random_range(2..=5);
        let pattern = SignPattern::from_code(p, d, random_code(&mut rng, p * d))
            .map_err(|e| e.to_string())?;
        for t in [(0..p as i64).collect::<Vec<_>>(), irregular_t(p)] {
            let spec = SignedCyclicSpec::new(pattern.clone(), t).map_err(|e| e.to_string())?;
            checked += cramer_against_sdet(&spec)?;
        }
    }
    Ok(format!("{checked} determinants"))
}

fn cramer_split_system() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut feasible = 0;
    for _ in 0..4000 {
        let p = rng.random_range(1..=5);
        let d = rng.random_range(2..=5);
        let pattern = SignPattern::from_code(p, d, random_code(&mut rng, p * d))
            .map_err(|e| e.to_string())?;
        let t = irregular_t(p);
        let k = rng.random_range(1..=p.min(d - 1));
        let mut rows = rand::seq::index::sample(&mut rng, p, k).into_vec();
        let mut cols = rand::seq::index::sample(&mut rng, d, k + 1).into_vec();
        rows.sort_unstable();
        cols.sort_unstable();
        let ij = IndexPair::new(rows.clone(), cols.clone()).map_err(|e| e.to_string())?;
        let Some(z) = linalg::cramer_solution(&pattern, &t, &ij).map_err(|e| e.to_string())? else {
            continue;
        };
        // Rowwise over C(I, J): the positive and negative sides of each
        // selected row must agree on z.
        for (s, &i) in rows.iter().enumerate() {
            let mut pos = None;
            let mut neg = None;
            for (r, &j) in cols.iter().enumerate() {
                let val = j as i64 * t[i] + z[r];
                let side = if pattern.is_negative(i, j) {
                    &mut neg
                } else {
                    &mut pos
                };
                *side = Some((*side).map_or(val, |b: i64| b.max(val)));
            }
            if pos != neg {
                return Err(format!(
                    "row {s} of split system differs: {pos:?} vs {neg:?} on\n{}",
                    pattern.to_text()
                ));
            }
        }
        feasible += 1;
    }
    Ok(format!("{feasible} feasible systems"))
}

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

const ORACLE_CHECKS: &[(&str, CheckFn)] = &[
    (
        "path enumeration equals oracle (exhaustive, p <= 3, d <= 4)",
        oracle_exhaustive,
    ),
    (
        "path enumeration equals oracle (200 random, p, d <= 5)",
        oracle_random,
    ),
    (
        "DP count equals enumeration (exhaustive, p*d <= 12)",
        dp_exhaustive,
    ),
    ("DP count equals enumeration (random, p*d <= 30)", dp_random),
];

fn oracle_exhaustive() -> Result<String, String> {
    let mut checked = 0;
    for p in 1..=3usize {
        for d in 1..=4usize {
            for code in 0u64..1 << (p * d) {
                let pattern = SignPattern::from_code(p, d, code).map_err(|e| e.to_string())?;
                for t in [(0..p as i64).collect::<Vec<_>>(), irregular_t(p)] {
                    let spec =
                        SignedCyclicSpec::new(pattern.clone(), t).map_err(|e| e.to_string())?;
                    oracle_matches(&spec)?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} spec instances"))
}

fn oracle_random() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let mut checked = 0;
    while checked < 200 {
        let p = rng.random_range(1..=5);
        let d = rng.random_range(1..=5);
        if p * d > crate::cyclic::ORACLE_GUARD {
            continue;
        }
        let pattern = SignPattern::from_code(p, d, random_code(&mut rng, p * d))
            .map_err(|e| e.to_string())?;
        for t in [(0..p as i64).collect::<Vec<_>>(), irregular_t(p)] {
            let spec = SignedCyclicSpec::new(pattern.clone(), t).map_err(|e| e.to_string())?;
            oracle_matches(&spec)?;
        }
        checked += 1;
    }
    Ok(format!("{checked} random patterns, two t vectors each"))
}

fn dp_exhaustive() -> Result<String, String> {
    let mut counter = paths::PathCounter::new();
    let mut checked = 0u64;
    for p in 1..=12usize {
        for d in 1..=12usize {
            if p * d > 12 {
                continue;
            }
            for code in 0u64..1 << (p * d) {
                let pattern = SignPattern::from_code(p, d, code).map_err(|e| e.to_string())?;
                let by_dp = counter
                    .count_tropical(&pattern)
                    .map_err(|e| e.to_string())?;
                let by_enum = paths::enumerate_tropical_paths(&pattern)
                    .map_err(|e| e.to_string())?
                    .len() as u64;
                if by_dp != by_enum {
                    return Err(format!(
                        "DP {by_dp} vs enumeration {by_enum} on\n{}",
                        pattern.to_text()
                    ));
                }
                let by_dp = counter.count_allowed(&pattern).map_err(|e| e.to_string())?;
                let by_enum = paths::enumerate_allowed_paths(&pattern)
                    .map_err(|e| e.to_string())?
                    .len() as u64;
                if by_dp != by_enum {
                    return Err(format!(
                        "allowed DP {by_dp} vs enumeration {by_enum} on\n{}",
                        pattern.to_text()
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} patterns, both path classes"))
}

fn dp_random() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    let mut counter = paths::PathCounter::new();
    let mut checked = 0;
    while checked < 1000 {
        let p = rng.random_range(1..=10);
        let d = rng.random_range(1..=10);
        if p * d > 30 {
            continue;
        }
        let pattern = SignPattern::from_code(p, d, random_code(&mut rng, p * d))
            .map_err(|e| e.to_string())?;
        let by_dp = counter
            .count_tropical(&pattern)
            .map_err(|e| e.to_string())?;
        let by_enum = paths::enumerate_tropical_paths(&pattern)
            .map_err(|e| e.to_string())?
            .len() as u64;
        if by_dp != by_enum {
            return Err(format!(
                "DP {by_dp} vs enumeration {by_enum} on\n{}",
                pattern.to_text()
            ));
        }
        checked += 1;
    }
    Ok(format!("{checked} random patterns"))
}

// ---------------------------------------------------------------------------
// Gale
// ---------------------------------------------------------------------------

const GALE_CHECKS: &[(&str, CheckFn)] = &[
    ("evenness counts match U(n, k) for n <= 14", gale_counts),
    (
        "allowed counts on alternating patterns equal U(p+d, d-1) for p+d <= 14",
        gale_alternating_counts,
    ),
    (
        "path <-> subset round-trips on alternating patterns, p+d <= 12",
        gale_round_trips,
    ),
    (
        "reference subset example reproduced",
        gale_reference_example,
    ),
];

fn gale_counts() -> Result<String, String> {
    let mut checked = 0;
    for n in 2..=14usize {
        for k in 0..n {
            let enumerated = paths::enumerate_gale_subsets(n, k)
                .map_err(|e| e.to_string())?
                .len() as u128;
            let formula = bounds::mcmullen_u(n as u64, k as u64).map_err(|e| e.to_string())?;
            if enumerated != formula {
                return Err(format!("U({n},{k}): enumerated {enumerated} vs {formula}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (n, k) pairs"))
}

fn gale_alternating_counts() -> Result<String, String> {
    let mut checked = 0;
    for p in 1..=13usize {
        for d in 1..=13usize {
            if p + d > 14 {
                continue;
            }
            let count = paths::count_allowed_paths(&SignPattern::alternating(p, d))
                .map_err(|e| e.to_string())? as u128;
            let formula =
                bounds::mcmullen_u((p + d) as u64, (d - 1) as u64).map_err(|e| e.to_string())?;
            if count != formula {
                return Err(format!("alternating ({p},{d}): {count} vs U = {formula}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} shapes"))
}

fn gale_round_trips() -> Result<String, String> {
    let mut checked = 0;
    for p in 1..=11usize {
        for d in 2..=11usize {
            if p + d > 12 {
                continue;
            }
            let pattern = SignPattern::alternating(p, d);
            // Subset direction: every evenness subset maps to an allowed
            // path and back to itself. Together with the count equality
            // below this makes both composites identities.
            let subsets = paths::enumerate_gale_subsets(p + d, d - 1).map_err(|e| e.to_string())?;
            for q in &subsets {
                let path = paths::gale_to_path(q, p, d).map_err(|e| e.to_string())?;
                if !paths::is_allowed(&path, &pattern).map_err(|e| e.to_string())? {
                    return Err(format!("subset {q:?} maps to disallowed path on ({p},{d})"));
                }
                if &paths::path_to_gale(&path, p, d).map_err(|e| e.to_string())? != q {
                    return Err(format!("round trip failed for {q:?} on ({p},{d})"));
                }
                checked += 1;
            }
            let allowed_count = paths::count_allowed_paths(&pattern).map_err(|e| e.to_string())?;
            if subsets.len() as u64 != allowed_count {
                return Err(format!(
                    "({p},{d}): {} subsets vs {} allowed paths",
                    subsets.len(),
                    allowed_count
                ));
            }
            // Path direction, where enumeration is within its guard.
            if p * d <= 30 {
                for path in paths::enumerate_allowed_paths(&pattern).map_err(|e| e.to_string())? {
                    let q = paths::path_to_gale(&path, p, d).map_err(|e| e.to_string())?;
                    let back = paths::gale_to_path(&q, p, d).map_err(|e| e.to_string())?;
                    if back != path {
                        return Err(format!("round trip failed for {path:?} on ({p},{d})"));
                    }
                }
            }
        }
    }
    Ok(format!("{checked} subsets"))
}

fn gale_reference_example() -> Result<String, String> {
    let path = paths::LatticePath::new(vec![0, 1, 3, 4], vec![0, 3, 4, 5, 8])
        .map_err(|e| e.to_string())?;
    let q = paths::path_to_gale(&path, 7, 9).map_err(|e| e.to_string())?;
    let expected = [2, 3, 7, 8, 10, 11, 13, 14];
    if q.elements() != expected {
        return Err(format!("expected {expected:?}, got {:?}", q.elements()));
    }
    if paths::gale_to_path(&q, 7, 9).map_err(|e| e.to_string())? != path {
        return Err("inverse image differs".into());
    }
    Ok("Q = {2,3,7,8,10,11,13,14}".into())
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

const BOUNDS_CHECKS: &[(&str, CheckFn)] = &[
    (
        "count sandwich on random patterns up to 8x8",
        bounds_sandwich,
    ),
    ("natural pattern at (14,7) has >= 210 paths", bounds_natural),
    ("checkerboard counts meet U(d, d-p-1)", bounds_checkerboard),
    (
        "attained pattern counts equal U(p+d, d-1), p+d <= 12",
        bounds_attained,
    ),
    (
        "decomposition bound holds on small patterns",
        bounds_decomposition,
    ),
    ("pure-type path counts stay below 2^d - 1", bounds_pure_type),
];

fn bounds_sandwich() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let mut counter = paths::PathCounter::new();
    let mut checked = 0u64;
    for p in 1..=8usize {
        for d in 1..=8usize {
            let upper_trop =
                bounds::trop_upper_bound(p as u64, d as u64).map_err(|e| e.to_string())?;
            let upper_u =
                bounds::mcmullen_u((p + d) as u64, (d - 1) as u64).map_err(|e| e.to_string())?;
            for _ in 0..1000 {
                let pattern = SignPattern::from_code(p, d, random_code(&mut rng, p * d))
                    .map_err(|e| e.to_string())?;
                let ntrop = counter
                    .count_tropical(&pattern)
                    .map_err(|e| e.to_string())? as u128;
                let nclass = counter.count_allowed(&pattern).map_err(|e| e.to_string())? as u128;
                if ntrop > upper_trop {
                    return Err(format!(
                        "ntrop {ntrop} > (p(d-1)+1)2^(d-1) = {upper_trop} on\n{}",
                        pattern.to_text()
                    ));
                }
                if ntrop > nclass || nclass > upper_u {
                    return Err(format!(
                        "sandwich {ntrop} <= {nclass} <= {upper_u} fails on\n{}",
                        pattern.to_text()
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} patterns"))
}

fn bounds_natural() -> Result<String, String> {
    let pattern = bounds::natural_pattern(14, 7).map_err(|e| e.to_string())?;
    let count = paths::count_tropical_paths(&pattern).map_err(|e| e.to_string())?;
    if count < 210 {
        return Err(format!("count {count} < 210"));
    }
    Ok(format!("count {count}"))
}

fn bounds_checkerboard() -> Result<String, String> {
    for (p, d) in [(1usize, 3usize), (1, 5), (2, 5), (2, 7), (3, 7)] {
        let count = paths::count_tropical_paths(&bounds::checkerboard_pattern(p, d))
            .map_err(|e| e.to_string())? as u128;
        let u = bounds::mcmullen_u(d as u64, (d - p - 1) as u64).map_err(|e| e.to_string())?;
        if count < u {
            return Err(format!("({p},{d}): count {count} < U = {u}"));
        }
    }
    Ok("5 shapes".into())
}

fn bounds_attained() -> Result<String, String> {
    let mut checked = 0;
    for p in 1..=11usize {
        for d in 1..=11usize {
            if p + d > 12 {
                continue;
            }
            let Ok(pattern) = bounds::attained_pattern(p, d) else {
                continue;
            };
            let count = paths::count_tropical_paths(&pattern).map_err(|e| e.to_string())? as u128;
            let u =
                bounds::mcmullen_u((p + d) as u64, (d - 1) as u64).map_err(|e| e.to_string())?;
            if count != u {
                return Err(format!("({p},{d}): count {count} != U = {u}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} covered shapes"))
}

fn bounds_decomposition() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(402);
    for _ in 0..100 {
        let p = rng.random_range(1..=4);
        let d = rng.random_range(2..=4);
        let pattern = SignPattern::from_code(p, d, random_code(&mut rng, p * d))
            .map_err(|e| e.to_string())?;
        let count = paths::count_tropical_paths(&pattern).map_err(|e| e.to_string())? as u128;
        let bound = bounds::decomposition_bound(&pattern).map_err(|e| e.to_string())?;
        if count > bound {
            return Err(format!(
                "count {count} > decomposition bound {bound} on\n{}",
                pattern.to_text()
            ));
        }
    }
    Ok("100 patterns".into())
}

fn bounds_pure_type() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(403);
    for _ in 0..200 {
        let p = rng.random_range(1..=6);
        let d = rng.random_range(1..=5);
        let pattern = SignPattern::from_code(p, d, random_code(&mut rng, p * d))
            .map_err(|e| e.to_string())?;
        let (n_pm, n_mp) = paths::reverse_path_type_counts(&pattern).map_err(|e| e.to_string())?;
        let limit = (1u64 << d) - 1;
        if n_pm > limit || n_mp > limit {
            return Err(format!(
                "pure-type counts ({n_pm}, {n_mp}) exceed {limit} on\n{}",
                pattern.to_text()
            ));
        }
    }
    Ok("200 patterns".into())
}

// ---------------------------------------------------------------------------
// Deform
// ---------------------------------------------------------------------------

const DEFORM_CHECKS: &[(&str, CheckFn)] = &[
    (
        "log-sum-exp sandwich on 10^4 random vectors",
        deform_sandwich,
    ),
    (
        "reference rays satisfy the deformed systems at beta in {1, 4, 16}",
        deform_membership,
    ),
    ("l_beta inverts e_beta", deform_round_trip),
];

fn deform_sandwich() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    for _ in 0..10_000 {
        let d = rng.random_range(1..=10);
        let vals: Vec<f64> = (0..d).map(|_| rng.random_range(-25.0..25.0)).collect();
        for beta in [0.5, 1.0, 10.0] {
            if !deform::lse_sandwich_check(&vals, beta) {
                return Err(format!("sandwich fails on {vals:?} at beta = {beta}"));
            }
        }
    }
    Ok("10000 vectors, three betas".into())
}

fn deform_membership() -> Result<String, String> {
    let mut checked = 0;
    for p in [2usize, 5usize] {
        let pattern = SignPattern::from_fn(p, 3, |_, j| j == 1);
        let spec = SignedCyclicSpec::with_default_t(pattern);
        let polar = spec.build_polar().map_err(|e| e.to_string())?;
        for er in spec.enumerate_extreme_rays().map_err(|e| e.to_string())? {
            for beta in [1.0, 4.0, 16.0] {
                if !deform::deformed_member(&polar, &er.ray, beta).map_err(|e| e.to_string())? {
                    return Err(format!("{} fails at beta = {beta}", er.ray));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} ray/beta pairs"))
}

fn deform_round_trip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(502);
    for _ in 0..2000 {
        let d = rng.random_range(1..=8);
        let coords: Vec<Option<i64>> = (0..d)
            .map(|_| {
                if rng.random_bool(0.2) {
                    None
                } else {
                    Some(rng.random_range(-20..20))
                }
            })
            .collect();
        let x = TropicalVector::from_options(&coords);
        for beta in [0.5, 1.0, 4.0] {
            let back =
                deform::l_beta(&deform::e_beta(&x, beta), beta).map_err(|e| e.to_string())?;
            for (orig, round) in x.to_f64().iter().zip(&back) {
                let ok = if orig.is_finite() {
                    (orig - round).abs() < 1e-12
                } else {
                    *round == f64::NEG_INFINITY
                };
                if !ok {
                    return Err(format!("round trip {orig} -> {round} at beta = {beta}"));
                }
            }
        }
    }
    Ok("2000 vectors, three betas".into())
}

//! Maximization of the tropically allowed path count over sign patterns.
//!
//! Patterns of a `p x d` shape are encoded as `p*d`-bit integers (bit
//! `i*d + j` set means entry `(i, j)` is negative), and the per-pattern
//! cost is one run of the counting DP with preallocated buffers. The
//! space is mapped in parallel with a deterministic reduction: the
//! maximum is associative, ties keep the smallest witness codes, so the
//! result does not depend on thread count or partitioning.
//!
//! The only symmetry used for pruning is the 180-degree pattern reversal,
//! which reads every path backwards and therefore preserves the count;
//! it is optional and correctness never depends on it. Column reflection
//! alone does not preserve counts and is not used.

use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::bounds;
use crate::paths::{PathCounter, SignPattern};
use crate::{Error, Result};

/// Default cell-count bound for exhaustive scans.
pub const DEFAULT_EXHAUSTIVE_CELLS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Scan all `2^{p d}` patterns.
    Exhaustive,
    /// Sample `samples` codes uniformly from a seeded generator; the
    /// result is a lower bound only.
    Random { samples: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Keep at most this many (smallest) argmax pattern codes.
    pub witness_cap: usize,
    /// Skip codes whose 180-degree reversal is strictly smaller.
    pub use_symmetry: bool,
    /// Exhaustive scans refuse shapes with more cells than this.
    pub max_exhaustive_cells: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: SearchMode::Exhaustive,
            witness_cap: 4,
            use_symmetry: true,
            max_exhaustive_cells: DEFAULT_EXHAUSTIVE_CELLS,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub p: usize,
    pub d: usize,
    /// Maximal count seen; the true maximum iff `exhaustive`.
    pub max_count: u64,
    /// Smallest argmax pattern codes, ascending, capped.
    pub witnesses: Vec<u64>,
    pub patterns_scanned: u64,
    pub exhaustive: bool,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn witness_patterns(&self) -> Result<Vec<SignPattern>> {
        self.witnesses
            .iter()
            .map(|&code| SignPattern::from_code(self.p, self.d, code))
            .collect()
    }
}

/// Bit-reversal of the low `bits` bits: the code of the 180-degree
/// reversed pattern.
fn reversed_code(code: u64, bits: usize) -> u64 {
    code.reverse_bits() >> (64 - bits)
}

struct Best {
    max: u64,
    witnesses: Vec<u64>,
    scanned: u64,
    counter: PathCounter,
}

impl Best {
    fn new() -> Self {
        Best {
            max: 0,
            witnesses: Vec::new(),
            scanned: 0,
            counter: PathCounter::new(),
        }
    }

    fn offer(&mut self, count: u64, code: u64, cap: usize) {
        self.scanned += 1;
        if count > self.max {
            self.max = count;
            self.witnesses.clear();
            self.witnesses.push(code);
        } else if count == self.max {
            self.offer_witness(code, cap);
        }
    }

    fn offer_witness(&mut self, code: u64, cap: usize) {
        if self.witnesses.contains(&code) {
            return;
        }
        if self.witnesses.len() < cap {
            self.witnesses.push(code);
            self.witnesses.sort_unstable();
        } else if let Some(last) = self.witnesses.last_mut() {
            if code < *last {
                *last = code;
                self.witnesses.sort_unstable();
            }
        }
    }

    fn merge(mut self, other: Best, cap: usize) -> Best {
        use std::cmp::Ordering::*;
        match self.max.cmp(&other.max) {
            Less => {
                let mut other = other;
                other.scanned += self.scanned;
                other
            }
            Greater => {
                self.scanned += other.scanned;
                self
            }
            Equal => {
                self.scanned += other.scanned;
                self.witnesses.extend(other.witnesses);
                self.witnesses.sort_unstable();
                self.witnesses.dedup();
                self.witnesses.truncate(cap);
                self
            }
        }
    }
}

/// Maximizes the tropically allowed path count over all (or a sample of)
/// `p x d` sign patterns.
pub fn max_ntrop(p: usize, d: usize, opts: &SearchOptions) -> Result<SearchResult> {
    if p == 0 || d == 0 {
        return Err(Error::InvalidArgument("need p, d >= 1".into()));
    }
    let cells = p * d;
    if cells > 63 {
        return Err(Error::GuardExceeded {
            what: "pattern code bits",
            got: cells as u64,
            limit: 63,
        });
    }
    let start = Instant::now();
    let run = || -> Result<SearchResult> {
        match opts.mode {
            SearchMode::Exhaustive => {
                if cells > opts.max_exhaustive_cells {
                    return Err(Error::GuardExceeded {
                        what: "exhaustive search cells",
                        got: cells as u64,
                        limit: opts.max_exhaustive_cells as u64,
                    });
                }
                let total: usize = 1 << cells;
                let cap = opts.witness_cap.max(1);
                let use_symmetry = opts.use_symmetry;
                let best = (0..total)
                    .into_par_iter()
                    .with_min_len(1 << 12)
                    .try_fold(Best::new, |mut acc, code| -> Result<Best> {
                        let code = code as u64;
                        let reversed = reversed_code(code, cells);
                        if use_symmetry && reversed < code {
                            return Ok(acc);
                        }
                        let n = acc.counter.count_tropical_code(p, d, code)?;
                        acc.offer(n, code, cap);
                        // The skipped reversal has the same count; keep the
                        // witness list identical to an unpruned scan.
                        if use_symmetry && reversed != code && n == acc.max {
                            acc.offer_witness(reversed, cap);
                        }
                        Ok(acc)
                    })
                    .try_reduce(Best::new, |a, b| Ok(a.merge(b, cap)))?;
                Ok(SearchResult {
                    p,
                    d,
                    max_count: best.max,
                    witnesses: best.witnesses,
                    patterns_scanned: best.scanned,
                    exhaustive: true,
                    elapsed: start.elapsed(),
                })
            }
            SearchMode::Random { samples, seed } => {
                let total: u64 = 1 << cells;
                let cap = opts.witness_cap.max(1);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut best = Best::new();
                for _ in 0..samples {
                    let code = rng.random_range(0..total);
                    let n = best.counter.count_tropical_code(p, d, code)?;
                    best.offer(n, code, cap);
                }
                Ok(SearchResult {
                    p,
                    d,
                    max_count: best.max,
                    witnesses: best.witnesses,
                    patterns_scanned: best.scanned,
                    exhaustive: false,
                    elapsed: start.elapsed(),
                })
            }
        }
    };
    match opts.threads {
        None => run(),
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run),
    }
}

// ---------------------------------------------------------------------------
// Bound tables
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMode {
    /// Exhaustive search per cell (cells beyond the guard are left
    /// without a lower bound and flagged inexact).
    Exhaustive,
    /// Upper bounds only.
    FormulaOnly,
    /// Seeded random lower bounds per cell.
    Random { samples: u64, seed: u64 },
}

/// One `(p, d)` cell of the bound table: the searched lower bound (when
/// computed), the closed-form upper bound `U(p+d, d-1)`, and whether the
/// interval collapses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableCell {
    pub p: usize,
    pub d: usize,
    pub lower: Option<u64>,
    pub upper: u128,
    pub exact: bool,
    pub witness: Option<u64>,
}

/// Computes the bound table over the given ranges, rows ordered by `d`
/// then `p`.
pub fn emit_table(
    p_range: RangeInclusive<usize>,
    d_range: RangeInclusive<usize>,
    mode: TableMode,
    opts: &SearchOptions,
) -> Result<Vec<TableCell>> {
    if *p_range.start() == 0 || *d_range.start() == 0 {
        return Err(Error::InvalidArgument("need p, d >= 1".into()));
    }
    let mut cells = Vec::new();
    for d in d_range {
        for p in p_range.clone() {
            let upper = bounds::mcmullen_u((p + d) as u64, (d - 1) as u64)?;
            let searched = match mode {
                TableMode::FormulaOnly => None,
                TableMode::Exhaustive => {
                    if p * d <= opts.max_exhaustive_cells {
                        let cell_opts = SearchOptions {
                            mode: SearchMode::Exhaustive,
                            ..opts.clone()
                        };
                        Some(max_ntrop(p, d, &cell_opts)?)
                    } else {
                        None
                    }
                }
                TableMode::Random { samples, seed } => {
                    let cell_opts = SearchOptions {
                        mode: SearchMode::Random { samples, seed },
                        ..opts.clone()
                    };
                    Some(max_ntrop(p, d, &cell_opts)?)
                }
            };
            let lower = searched.as_ref().map(|r| r.max_count);
            let witness = searched.as_ref().and_then(|r| r.witnesses.first().copied());
            let exact = lower.is_some_and(|l| l as u128 == upper);
            cells.push(TableCell {
                p,
                d,
                lower,
                upper,
                exact,
                witness,
            });
        }
    }
    Ok(cells)
}

fn witness_bits(code: u64, p: usize, d: usize) -> String {
    (0..p * d)
        .map(|b| if code >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// TSV rendering: `p d lower upper exact witness`, one line per cell,
/// header included. Missing values print as `-`.
pub fn table_to_tsv(cells: &[TableCell]) -> String {
    let mut out = String::from("p\td\tlower\tupper\texact\twitness\n");
    for c in cells {
        let lower = c.lower.map_or("-".to_string(), |l| l.to_string());
        let witness = c
            .witness
            .map_or("-".to_string(), |w| witness_bits(w, c.p, c.d));
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            c.p, c.d, lower, c.upper, c.exact, witness
        ));
    }
    out
}

/// JSON rendering; upper bounds that exceed `u64` are emitted as decimal
/// strings.
pub fn table_to_json(cells: &[TableCell]) -> serde_json::Value {
    serde_json::Value::Array(
        cells
            .iter()
            .map(|c| {
                let upper = match u64::try_from(c.upper) {
                    Ok(v) => json!(v),
                    Err(_) => json!(c.upper.to_string()),
                };
                json!({
                    "p": c.p,
                    "d": c.d,
                    "lower": c.lower,
                    "upper": upper,
                    "exact": c.exact,
                    "witness": c.witness.map(|w| witness_bits(w, c.p, c.d)),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths;

    #[test]
    fn small_maxima_match_reference_values() {
        let r = max_ntrop(2, 3, &SearchOptions::default()).unwrap();
        assert_eq!(r.max_count, 5);
        assert!(r.exhaustive);
        let r = max_ntrop(1, 5, &SearchOptions::default()).unwrap();
        assert_eq!(r.max_count, 9);
    }

    #[test]
    fn witnesses_recount_to_max() {
        let r = max_ntrop(3, 3, &SearchOptions::default()).unwrap();
        assert!(!r.witnesses.is_empty());
        for pattern in r.witness_patterns().unwrap() {
            assert_eq!(paths::count_tropical_paths(&pattern).unwrap(), r.max_count);
        }
    }

    #[test]
    fn deterministic_across_threads_and_symmetry() {
        // A generous witness cap stresses the pruned scan: reversals of
        // skipped achievers must still be reported.
        let wide = |threads, use_symmetry| SearchOptions {
            threads,
            use_symmetry,
            witness_cap: 16,
            ..SearchOptions::default()
        };
        for (pp, dd) in [(3usize, 4usize), (2, 5)] {
            let reference = max_ntrop(pp, dd, &wide(Some(1), false)).unwrap();
            for (threads, symmetry) in [(Some(1), true), (Some(2), false), (Some(3), true)] {
                let r = max_ntrop(pp, dd, &wide(threads, symmetry)).unwrap();
                assert_eq!(r.max_count, reference.max_count);
                assert_eq!(r.witnesses, reference.witnesses);
            }
        }
    }

    #[test]
    fn symmetry_preserves_counts() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let mut counter = paths::PathCounter::new();
        for _ in 0..1000 {
            let p = rng.random_range(1..=4);
            let d = rng.random_range(1..=5);
            let cells = p * d;
            let code = rng.random::<u64>() & ((1u64 << cells) - 1);
            let n = counter.count_tropical_code(p, d, code).unwrap();
            let m = counter
                .count_tropical_code(p, d, reversed_code(code, cells))
                .unwrap();
            assert_eq!(n, m, "p={p} d={d} code={code:b}");
        }
    }

    #[test]
    fn monotone_in_p() {
        let mut prev = 0;
        for p in 1..=5 {
            let r = max_ntrop(p, 3, &SearchOptions::default()).unwrap();
            assert!(r.max_count >= prev);
            prev = r.max_count;
        }
    }

    #[test]
    fn random_mode_is_seeded_lower_bound() {
        let opts = SearchOptions {
            mode: SearchMode::Random {
                samples: 200,
                seed: 9,
            },
            ..SearchOptions::default()
        };
        let a = max_ntrop(3, 4, &opts).unwrap();
        let b = max_ntrop(3, 4, &opts).unwrap();
        assert_eq!(a.max_count, b.max_count);
        assert_eq!(a.witnesses, b.witnesses);
        assert!(!a.exhaustive);
        assert_eq!(a.patterns_scanned, 200);
        let exact = max_ntrop(3, 4, &SearchOptions::default()).unwrap();
        assert!(a.max_count <= exact.max_count);
    }

    #[test]
    fn exhaustive_guard() {
        let opts = SearchOptions {
            max_exhaustive_cells: 12,
            ..SearchOptions::default()
        };
        assert!(matches!(
            max_ntrop(4, 4, &opts),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn table_first_row_is_exact() {
        let cells = emit_table(
            1..=4,
            3..=3,
            TableMode::Exhaustive,
            &SearchOptions::default(),
        )
        .unwrap();
        let lowers: Vec<u64> = cells.iter().map(|c| c.lower.unwrap()).collect();
        assert_eq!(lowers, vec![4, 5, 6, 7]);
        assert!(cells.iter().all(|c| c.exact));
        assert!(cells.iter().all(|c| c.lower.unwrap() as u128 == c.upper));
    }

    #[test]
    fn table_flags_cells_beyond_the_guard() {
        let opts = SearchOptions {
            max_exhaustive_cells: 12,
            ..SearchOptions::default()
        };
        let cells = emit_table(4..=5, 3..=3, TableMode::Exhaustive, &opts).unwrap();
        // 4 x 3 fits the relaxed guard, 5 x 3 does not.
        assert_eq!(cells[0].lower, Some(7));
        assert!(cells[0].exact);
        assert_eq!(cells[1].lower, None);
        assert!(!cells[1].exact);
        assert_eq!(cells[1].upper, 8);
        let tsv = table_to_tsv(&cells);
        assert!(tsv.contains("5\t3\t-\t8\tfalse\t-"));
    }

    #[test]
    fn random_table_lower_bounds_stay_below_upper() {
        let cells = emit_table(
            1..=3,
            3..=4,
            TableMode::Random {
                samples: 64,
                seed: 5,
            },
            &SearchOptions::default(),
        )
        .unwrap();
        for c in &cells {
            let lower = c.lower.unwrap();
            assert!(lower as u128 <= c.upper, "({}, {})", c.p, c.d);
            assert!(c.witness.is_some());
        }
    }

    #[test]
    fn table_renderings() {
        let cells = emit_table(
            1..=2,
            3..=3,
            TableMode::FormulaOnly,
            &SearchOptions::default(),
        )
        .unwrap();
        let tsv = table_to_tsv(&cells);
        assert!(tsv.starts_with("p\td\tlower\tupper\texact\twitness\n"));
        assert!(tsv.contains("1\t3\t-\t4\tfalse\t-"));
        let json = table_to_json(&cells);
        assert_eq!(json[0]["upper"], 4);
        assert_eq!(json[0]["lower"], serde_json::Value::Null);
    }
}

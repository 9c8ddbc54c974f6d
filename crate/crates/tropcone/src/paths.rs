//! Sign patterns, lattice paths and their counting machinery.
//!
//! A [`SignPattern`] is a `p x d` matrix over `{+1, -1}`. A
//! [`LatticePath`] is a monotone staircase from the top row to the bottom
//! row, stored as the ordinates `I` of its horizontal segments and the
//! abscissae `J` of its vertical segments (`|J| = |I| + 1`). The
//! *tropically allowed* paths of a pattern are the ones accepted by a
//! five-state automaton read along the path; they are in bijection with
//! the extreme rays of the polar cone built in [`crate::cyclic`]. Dropping
//! the automaton's ordering restriction on horizontal segments yields the
//! larger class of *allowed* paths, which matches the classical polar and
//! specializes to Gale's evenness condition on the alternating pattern.
//!
//! Counting is done by a linear-time DP over the automaton states; the
//! enumeration routine is the independent reference for the DP and is
//! guarded to small patterns.
//!
//! ```
//! use tropcone::paths::{count_tropical_paths, count_allowed_paths, SignPattern};
//!
//! let pattern = SignPattern::parse("+-+\n+-+\n")?;
//! assert_eq!(count_tropical_paths(&pattern)?, 5);
//! assert_eq!(count_allowed_paths(&pattern)?, 5);
//! # Ok::<(), tropcone::Error>(())
//! ```
//!
//! Indices are 0-based throughout the API; textual and JSON output uses
//! the conventional 1-based form.

use std::fmt;

use itertools::Itertools;

use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Sign patterns
// ---------------------------------------------------------------------------

/// A fully populated `p x d` matrix of signs, stored row-major as
/// "is negative" flags.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    p: usize,
    d: usize,
    neg: Vec<bool>,
}

impl SignPattern {
    pub fn new(p: usize, d: usize, neg: Vec<bool>) -> Result<Self> {
        if p == 0 || d == 0 {
            return Err(Error::InvalidArgument(
                "sign pattern needs p >= 1 and d >= 1".into(),
            ));
        }
        if neg.len() != p * d {
            return Err(Error::DimensionMismatch(format!(
                "expected {} sign entries, got {}",
                p * d,
                neg.len()
            )));
        }
        Ok(SignPattern { p, d, neg })
    }

    pub fn from_fn(p: usize, d: usize, mut is_neg: impl FnMut(usize, usize) -> bool) -> Self {
        let mut neg = Vec::with_capacity(p * d);
        for i in 0..p {
            for j in 0..d {
                neg.push(is_neg(i, j));
            }
        }
        SignPattern { p, d, neg }
    }

    /// Decodes a pattern from a `p*d`-bit integer; bit `i*d + j` set means
    /// the entry at row `i`, column `j` is negative.
    pub fn from_code(p: usize, d: usize, code: u64) -> Result<Self> {
        if p * d > 64 {
            return Err(Error::GuardExceeded {
                what: "pattern code bits",
                got: (p * d) as u64,
                limit: 64,
            });
        }
        Ok(Self::from_fn(p, d, |i, j| code >> (i * d + j) & 1 == 1))
    }

    /// The bit encoding inverse to [`SignPattern::from_code`].
    pub fn code(&self) -> Result<u64> {
        if self.p * self.d > 64 {
            return Err(Error::GuardExceeded {
                what: "pattern code bits",
                got: (self.p * self.d) as u64,
                limit: 64,
            });
        }
        let mut code = 0u64;
        for (b, &neg) in self.neg.iter().enumerate() {
            if neg {
                code |= 1 << b;
            }
        }
        Ok(code)
    }

    pub fn all_plus(p: usize, d: usize) -> Self {
        Self::from_fn(p, d, |_, _| false)
    }

    /// The column-alternating pattern: negative exactly in the
    /// even-positioned columns (0-based odd `j`).
    pub fn alternating(p: usize, d: usize) -> Self {
        Self::from_fn(p, d, |_, j| j % 2 == 1)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_negative(&self, i: usize, j: usize) -> bool {
        self.neg[i * self.d + j]
    }

    pub fn set_negative(&mut self, i: usize, j: usize, neg: bool) {
        self.neg[i * self.d + j] = neg;
    }

    /// The 180-degree reversal: entry `(i, j)` becomes entry
    /// `(p-1-i, d-1-j)`.
    pub fn reversed(&self) -> Self {
        Self::from_fn(self.p, self.d, |i, j| {
            self.is_negative(self.p - 1 - i, self.d - 1 - j)
        })
    }

    /// Sub-pattern on row range `rows` and column range `cols`; `None` if
    /// either range is empty.
    pub fn submatrix(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Option<SignPattern> {
        if rows.is_empty() || cols.is_empty() || rows.end > self.p || cols.end > self.d {
            return None;
        }
        Some(Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.is_negative(rows.start + i, cols.start + j)
        }))
    }

    /// Parses the textual pattern format: an optional `p d` header line
    /// followed by `p` lines of `d` characters from `{+, -}`. Errors carry
    /// 1-based line/column positions.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(idx, l)| (idx + 1, l.trim_end()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        if lines.is_empty() {
            return Err(Error::Parse {
                line: 1,
                col: 1,
                msg: "empty pattern file".into(),
            });
        }
        let mut header: Option<(usize, usize)> = None;
        let first = lines[0].1;
        if !first.starts_with(['+', '-']) {
            let (lineno, l) = lines[0];
            let mut it = l.split_whitespace();
            let parse_dim = |tok: Option<&str>| -> Result<usize> {
                tok.and_then(|t| t.parse::<usize>().ok())
                    .filter(|&v| v >= 1)
                    .ok_or(Error::Parse {
                        line: lineno,
                        col: 1,
                        msg: format!("expected header `p d`, got {l:?}"),
                    })
            };
            let p = parse_dim(it.next())?;
            let d = parse_dim(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    col: 1,
                    msg: "trailing tokens after `p d` header".into(),
                });
            }
            header = Some((p, d));
            lines.remove(0);
        }
        if lines.is_empty() {
            return Err(Error::Parse {
                line: 1,
                col: 1,
                msg: "no pattern rows after header".into(),
            });
        }
        let d = lines[0].1.chars().count();
        let mut neg = Vec::new();
        for &(lineno, l) in &lines {
            let mut width = 0;
            for (cidx, ch) in l.chars().enumerate() {
                match ch {
                    '+' => neg.push(false),
                    '-' => neg.push(true),
                    other => {
                        return Err(Error::Parse {
                            line: lineno,
                            col: cidx + 1,
                            msg: format!("expected '+' or '-', got {other:?}"),
                        })
                    }
                }
                width += 1;
            }
            if width != d {
                return Err(Error::Parse {
                    line: lineno,
                    col: width.min(d) + 1,
                    msg: format!("ragged row: expected {d} columns, got {width}"),
                });
            }
        }
        let p = lines.len();
        if let Some((hp, hd)) = header {
            if (hp, hd) != (p, d) {
                return Err(Error::Parse {
                    line: lines[0].0,
                    col: 1,
                    msg: format!("header says {hp} x {hd}, body is {p} x {d}"),
                });
            }
        }
        SignPattern::new(p, d, neg)
    }

    /// The inverse of [`SignPattern::parse`] (no header).
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.p * (self.d + 1));
        for i in 0..self.p {
            for j in 0..self.d {
                out.push(if self.is_negative(i, j) { '-' } else { '+' });
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignPattern({}x{})\n{}", self.p, self.d, self.to_text())
    }
}

// ---------------------------------------------------------------------------
// Lattice paths
// ---------------------------------------------------------------------------

/// A monotone staircase over a `p x d` grid: `rows` are the 0-based
/// ordinates of its horizontal segments, `cols` the 0-based abscissae of
/// its vertical segments, both strictly increasing with
/// `cols.len() == rows.len() + 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePath {
    // Field order matters: the derived ordering is lexicographic on
    // (J, I), which fixes the enumeration output order.
    cols: Vec<usize>,
    rows: Vec<usize>,
}

impl LatticePath {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if cols.len() != rows.len() + 1 {
            return Err(Error::InvalidPath(format!(
                "need |J| = |I| + 1, got |I| = {}, |J| = {}",
                rows.len(),
                cols.len()
            )));
        }
        if !rows.windows(2).all(|w| w[0] < w[1]) || !cols.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidPath(
                "indices must be strictly increasing".into(),
            ));
        }
        Ok(LatticePath { cols, rows })
    }

    /// Number of horizontal segments.
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn in_bounds(&self, p: usize, d: usize) -> bool {
        self.rows.last().is_none_or(|&i| i < p) && self.cols.last().is_some_and(|&j| j < d)
    }

    fn check_bounds(&self, p: usize, d: usize) -> Result<()> {
        if self.in_bounds(p, d) {
            Ok(())
        } else {
            Err(Error::InvalidPath(format!(
                "path {self:?} out of bounds for a {p} x {d} pattern"
            )))
        }
    }

    /// The sign pairs at the extreme positions of the horizontal
    /// segments, as `(is_negative_left, is_negative_right)`.
    pub fn horizontal_pairs(&self, pattern: &SignPattern) -> Result<Vec<(bool, bool)>> {
        self.check_bounds(pattern.p(), pattern.d())?;
        Ok(self
            .rows
            .iter()
            .enumerate()
            .map(|(r, &i)| {
                (
                    pattern.is_negative(i, self.cols[r]),
                    pattern.is_negative(i, self.cols[r + 1]),
                )
            })
            .collect())
    }

    /// Word form over the alphabet `{d, r}`: the moves of a pen drawing
    /// the path from the dummy top row to the dummy bottom row. The word
    /// contains exactly `p + 1` letters `d`.
    pub fn to_word(&self, p: usize, d: usize) -> Result<String> {
        self.check_bounds(p, d)?;
        let mut word = String::new();
        word.extend(std::iter::repeat_n('r', self.cols[0]));
        let mut seg = 0;
        for i in 0..p {
            word.push('d');
            if seg < self.rows.len() && self.rows[seg] == i {
                let run = self.cols[seg + 1] - self.cols[seg];
                word.extend(std::iter::repeat_n('r', run));
                seg += 1;
            }
        }
        word.push('d');
        Ok(word)
    }

    /// Parses a `{d, r}` word back into a path over a `p x d` grid.
    pub fn from_word(word: &str, p: usize, d: usize) -> Result<Self> {
        let mut row = 0usize; // 0 = dummy top row, p + 1 = dummy bottom row
        let mut col = 0usize;
        let mut cols = Vec::new();
        let mut rows = Vec::new();
        for ch in word.chars() {
            if row > p {
                return Err(Error::InvalidPath("moves past the bottom row".into()));
            }
            match ch {
                'd' | 'D' => {
                    if cols.last() != Some(&col) {
                        cols.push(col);
                    }
                    row += 1;
                }
                'r' | 'R' => {
                    col += 1;
                    if col >= d {
                        return Err(Error::InvalidPath("moves past the last column".into()));
                    }
                    if row >= 1 && rows.last() != Some(&(row - 1)) {
                        rows.push(row - 1);
                    }
                }
                other => {
                    return Err(Error::InvalidPath(format!(
                        "unexpected letter {other:?} in path word"
                    )))
                }
            }
        }
        if row != p + 1 {
            return Err(Error::InvalidPath(format!(
                "word has {row} down moves, need {}",
                p + 1
            )));
        }
        LatticePath::new(rows, cols)
    }

    /// ASCII picture of the path over its pattern: `+`/`-` for path cells
    /// whose sign matters, `*` for sign-irrelevant path cells (horizontal
    /// interiors), `.` elsewhere.
    pub fn render(&self, pattern: &SignPattern) -> Result<String> {
        let (p, d) = (pattern.p(), pattern.d());
        self.check_bounds(p, d)?;
        let mut grid = vec![b'.'; p * d];
        let k = self.k();
        let sign_char = |i: usize, j: usize| {
            if pattern.is_negative(i, j) {
                b'-'
            } else {
                b'+'
            }
        };
        for r in 0..=k {
            let top = if r == 0 { 0 } else { self.rows[r - 1] };
            let bottom = if r == k { p - 1 } else { self.rows[r] };
            for i in top..=bottom {
                grid[i * d + self.cols[r]] = sign_char(i, self.cols[r]);
            }
        }
        for r in 0..k {
            let i = self.rows[r];
            for j in self.cols[r]..=self.cols[r + 1] {
                grid[i * d + j] = if j == self.cols[r] || j == self.cols[r + 1] {
                    sign_char(i, j)
                } else {
                    b'*'
                };
            }
        }
        let mut out = String::with_capacity(p * (d + 1));
        for i in 0..p {
            out.push_str(std::str::from_utf8(&grid[i * d..(i + 1) * d]).unwrap());
            out.push('\n');
        }
        Ok(out)
    }
}

impl fmt::Debug for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
        write!(
            f,
            "Path(I={:?}, J={:?})",
            one_based(&self.rows),
            one_based(&self.cols)
        )
    }
}

// ---------------------------------------------------------------------------
// The path automaton
// ---------------------------------------------------------------------------

/// States of the path automaton. `Closed*` states are the accepting ones;
/// they record the sign pair of the last closed horizontal segment.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AutomatonState {
    /// On the dummy top row, before entering the pattern.
    Initial,
    /// Inside a horizontal segment opened on a `+` sign.
    OpenPlus,
    /// Inside a horizontal segment opened on a `-` sign.
    OpenMinus,
    /// Vertical mode after a `(+,-)` segment (or right after entry).
    ClosedPlusMinus,
    /// Vertical mode after a `(-,+)` segment.
    ClosedMinusPlus,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Letter {
    Down,
    Right,
}

/// Sign requirement attached to an automaton arc.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SignReq {
    Any,
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug)]
pub struct Arc {
    pub from: AutomatonState,
    pub letter: Letter,
    pub req: SignReq,
    pub to: AutomatonState,
}

use AutomatonState::*;
use Letter::*;

const TROPICAL_ARCS: &[Arc] = &[
    Arc {
        from: Initial,
        letter: Right,
        req: SignReq::Any,
        to: Initial,
    },
    Arc {
        from: Initial,
        letter: Down,
        req: SignReq::Any,
        to: ClosedPlusMinus,
    },
    Arc {
        from: OpenPlus,
        letter: Right,
        req: SignReq::Any,
        to: OpenPlus,
    },
    Arc {
        from: OpenPlus,
        letter: Down,
        req: SignReq::Minus,
        to: ClosedPlusMinus,
    },
    Arc {
        from: OpenMinus,
        letter: Right,
        req: SignReq::Any,
        to: OpenMinus,
    },
    Arc {
        from: OpenMinus,
        letter: Down,
        req: SignReq::Plus,
        to: ClosedMinusPlus,
    },
    Arc {
        from: ClosedPlusMinus,
        letter: Down,
        req: SignReq::Plus,
        to: ClosedPlusMinus,
    },
    Arc {
        from: ClosedPlusMinus,
        letter: Right,
        req: SignReq::Plus,
        to: OpenPlus,
    },
    Arc {
        from: ClosedPlusMinus,
        letter: Right,
        req: SignReq::Minus,
        to: OpenMinus,
    },
    Arc {
        from: ClosedMinusPlus,
        letter: Down,
        req: SignReq::Plus,
        to: ClosedMinusPlus,
    },
    Arc {
        from: ClosedMinusPlus,
        letter: Right,
        req: SignReq::Minus,
        to: OpenMinus,
    },
];

/// Extra arc that relaxes the segment-ordering restriction: after a
/// `(-,+)` segment, a new segment may open on a `+` sign again. With it
/// the automaton recognizes the allowed (rather than tropically allowed)
/// paths.
const CLASSICAL_EXTRA_ARC: Arc = Arc {
    from: ClosedMinusPlus,
    letter: Right,
    req: SignReq::Plus,
    to: OpenPlus,
};

/// The automaton's arc table; `classical` adds [`CLASSICAL_EXTRA_ARC`].
pub fn automaton_arcs(classical: bool) -> Vec<Arc> {
    let mut arcs = TROPICAL_ARCS.to_vec();
    if classical {
        arcs.push(CLASSICAL_EXTRA_ARC);
    }
    arcs
}

fn req_matches(req: SignReq, cell_negative: Option<bool>) -> bool {
    match req {
        SignReq::Any => true,
        SignReq::Plus => cell_negative == Some(false),
        SignReq::Minus => cell_negative == Some(true),
    }
}

/// Runs the automaton over a `{d, r}` word read against `pattern`. The
/// word is accepted if every move is accepted, the pen ends on the dummy
/// bottom row, and the final state is accepting.
pub fn automaton_accepts(word: &str, pattern: &SignPattern, classical: bool) -> Result<bool> {
    let arcs = automaton_arcs(classical);
    let (p, d) = (pattern.p(), pattern.d());
    let mut state = Initial;
    let (mut row, mut col) = (0usize, 0usize); // row 0 is the dummy top row
    for ch in word.chars() {
        let letter = match ch {
            'd' | 'D' => Down,
            'r' | 'R' => Right,
            other => {
                return Err(Error::InvalidPath(format!(
                    "unexpected letter {other:?} in path word"
                )))
            }
        };
        if row > p || (letter == Right && col + 1 >= d) {
            return Ok(false);
        }
        // Sign of the current cell; the dummy rows carry no sign, so only
        // unconditioned arcs may fire there.
        let cell = (1..=p)
            .contains(&row)
            .then(|| pattern.is_negative(row - 1, col));
        let Some(arc) = arcs
            .iter()
            .find(|a| a.from == state && a.letter == letter && req_matches(a.req, cell))
        else {
            return Ok(false);
        };
        state = arc.to;
        match letter {
            Down => row += 1,
            Right => col += 1,
        }
    }
    Ok(row == p + 1 && matches!(state, ClosedPlusMinus | ClosedMinusPlus))
}

/// Whether `path` is tropically allowed for `pattern` (automaton
/// acceptance; for paths without horizontal segments this requires every
/// sign in the path's column to be positive).
pub fn is_tropically_allowed(path: &LatticePath, pattern: &SignPattern) -> Result<bool> {
    let word = path.to_word(pattern.p(), pattern.d())?;
    automaton_accepts(&word, pattern, false)
}

/// Whether `path` is allowed for `pattern`: tropical acceptance minus the
/// restriction that `(-,+)` segments must come after all `(+,-)` ones.
pub fn is_allowed(path: &LatticePath, pattern: &SignPattern) -> Result<bool> {
    let word = path.to_word(pattern.p(), pattern.d())?;
    automaton_accepts(&word, pattern, true)
}

/// Literal transcription of the path conditions, used to cross-check the
/// automaton: (i) the initial vertical segment is positive except
/// possibly at its bottom, (ii) the final vertical segment is positive
/// except possibly at its top, (iii) interior vertical segments are
/// positive except possibly at both ends, (iv) each horizontal segment
/// has opposite signs at its extreme positions, and optionally (v) no
/// `(+,-)` segment occurs below a `(-,+)` one. A path without horizontal
/// segments requires its whole column to be positive.
pub fn satisfies_conditions(
    path: &LatticePath,
    pattern: &SignPattern,
    with_order_condition: bool,
) -> Result<bool> {
    let (p, _d) = (pattern.p(), pattern.d());
    path.check_bounds(p, pattern.d())?;
    let k = path.k();
    if k == 0 {
        let j = path.cols()[0];
        return Ok((0..p).all(|i| !pattern.is_negative(i, j)));
    }
    let rows = path.rows();
    let cols = path.cols();
    // (i)
    for i in 0..rows[0] {
        if pattern.is_negative(i, cols[0]) {
            return Ok(false);
        }
    }
    // (ii)
    for i in rows[k - 1] + 1..p {
        if pattern.is_negative(i, cols[k]) {
            return Ok(false);
        }
    }
    // (iii)
    for r in 0..k.saturating_sub(1) {
        for i in rows[r] + 1..rows[r + 1] {
            if pattern.is_negative(i, cols[r + 1]) {
                return Ok(false);
            }
        }
    }
    // (iv)
    let pairs = path.horizontal_pairs(pattern)?;
    if pairs.iter().any(|&(l, r)| l == r) {
        return Ok(false);
    }
    // (v)
    if with_order_condition {
        let mut seen_minus_plus = false;
        for &(left_neg, _) in &pairs {
            if left_neg {
                seen_minus_plus = true;
            } else if seen_minus_plus {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

const ENUMERATION_GUARD: usize = 30;

fn enumeration_guard(pattern: &SignPattern) -> Result<()> {
    let cells = pattern.p() * pattern.d();
    if cells > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded {
            what: "path enumeration cells",
            got: cells as u64,
            limit: ENUMERATION_GUARD as u64,
        });
    }
    Ok(())
}

fn enumerate_paths_where(
    pattern: &SignPattern,
    mut keep: impl FnMut(&LatticePath, &SignPattern) -> Result<bool>,
) -> Result<Vec<LatticePath>> {
    enumeration_guard(pattern)?;
    let (p, d) = (pattern.p(), pattern.d());
    let mut out = Vec::new();
    for k in 0..=p.min(d - 1) {
        for cols in (0..d).combinations(k + 1) {
            for rows in (0..p).combinations(k) {
                let path = LatticePath::new(rows, cols.clone())?;
                if keep(&path, pattern)? {
                    out.push(path);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// All tropically allowed paths of `pattern`, in lexicographic `(J, I)`
/// order. Guarded to `p * d <= 30`.
pub fn enumerate_tropical_paths(pattern: &SignPattern) -> Result<Vec<LatticePath>> {
    enumerate_paths_where(pattern, is_tropically_allowed)
}

/// All allowed paths of `pattern`, in lexicographic `(J, I)` order.
pub fn enumerate_allowed_paths(pattern: &SignPattern) -> Result<Vec<LatticePath>> {
    enumerate_paths_where(pattern, is_allowed)
}

/// Counts of enumerated tropically allowed paths whose horizontal sign
/// pairs are all `(+,-)` resp. all `(-,+)`; paths without horizontal
/// segments count in both.
pub fn reverse_path_type_counts(pattern: &SignPattern) -> Result<(u64, u64)> {
    let mut n_pm = 0u64;
    let mut n_mp = 0u64;
    for path in enumerate_tropical_paths(pattern)? {
        let pairs = path.horizontal_pairs(pattern)?;
        if pairs.iter().all(|&(l, _)| !l) {
            n_pm += 1;
        }
        if pairs.iter().all(|&(l, _)| l) {
            n_mp += 1;
        }
    }
    Ok((n_pm, n_mp))
}

// ---------------------------------------------------------------------------
// Counting DP
// ---------------------------------------------------------------------------

/// Reusable buffers for the counting DP; one instance per worker thread
/// keeps the per-pattern cost allocation-free.
#[derive(Default)]
pub struct PathCounter {
    prev_pm: Vec<u64>,
    prev_mp: Vec<u64>,
    cur_pm: Vec<u64>,
    cur_mp: Vec<u64>,
}

impl PathCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs the automaton DP bottom-up. State meanings follow the
    /// automaton: `pm`/`mp` are the vertical modes, `p`/`m` the open
    /// horizontal segments. Cell `(i, j)` holds the number of accepted
    /// continuations of a pen sitting there in that state; the answer is
    /// the total over the first row's entry points.
    ///
    /// With `CHECKED = false` the adds are unchecked; callers must
    /// guarantee the counts fit, which holds whenever `p * d <= 63`
    /// (every state count is at most the number of monotone paths in a
    /// `(p+2) x d` grid, below 2^63 there).
    fn count_dp<const CHECKED: bool>(
        &mut self,
        p: usize,
        d: usize,
        is_neg: impl Fn(usize, usize) -> bool,
        classical: bool,
    ) -> Result<u64> {
        let add = |a: u64, b: u64| {
            if CHECKED {
                a.checked_add(b).ok_or(Error::Overflow)
            } else {
                Ok(a.wrapping_add(b))
            }
        };
        for buf in [
            &mut self.prev_pm,
            &mut self.prev_mp,
            &mut self.cur_pm,
            &mut self.cur_mp,
        ] {
            buf.clear();
            buf.resize(d, 0);
        }
        // Dummy bottom row: only closed states accept.
        self.prev_pm.fill(1);
        self.prev_mp.fill(1);
        for i in (0..p).rev() {
            let mut np_right = 0u64; // open-plus count one column to the right
            let mut nm_right = 0u64;
            let cells = self
                .cur_pm
                .iter_mut()
                .zip(self.cur_mp.iter_mut())
                .zip(self.prev_pm.iter().zip(self.prev_mp.iter()))
                .enumerate()
                .rev();
            for (j, ((cur_pm, cur_mp), (&prev_pm, &prev_mp))) in cells {
                let (npm, nmp, np, nm) = if is_neg(i, j) {
                    (nm_right, nm_right, add(np_right, prev_pm)?, nm_right)
                } else {
                    let extra = if classical { np_right } else { 0 };
                    (
                        add(prev_pm, np_right)?,
                        add(prev_mp, extra)?,
                        np_right,
                        add(nm_right, prev_mp)?,
                    )
                };
                *cur_pm = npm;
                *cur_mp = nmp;
                np_right = np;
                nm_right = nm;
            }
            std::mem::swap(&mut self.prev_pm, &mut self.cur_pm);
            std::mem::swap(&mut self.prev_mp, &mut self.cur_mp);
        }
        // Entering the pattern at any column of the top row starts in the
        // plus-minus vertical mode.
        let mut total = 0u64;
        for j in 0..d {
            total = add(total, self.prev_pm[j])?;
        }
        Ok(total)
    }

    pub fn count_tropical(&mut self, pattern: &SignPattern) -> Result<u64> {
        self.count_dp::<true>(
            pattern.p(),
            pattern.d(),
            |i, j| pattern.is_negative(i, j),
            false,
        )
    }

    pub fn count_allowed(&mut self, pattern: &SignPattern) -> Result<u64> {
        self.count_dp::<true>(
            pattern.p(),
            pattern.d(),
            |i, j| pattern.is_negative(i, j),
            true,
        )
    }

    /// Counts tropically allowed paths for a bit-encoded pattern without
    /// materializing it; this is the hot path of the exhaustive search.
    /// The 63-bit code limit keeps the unchecked counts in range.
    pub fn count_tropical_code(&mut self, p: usize, d: usize, code: u64) -> Result<u64> {
        if p * d > 63 {
            return Err(Error::GuardExceeded {
                what: "pattern code bits",
                got: (p * d) as u64,
                limit: 63,
            });
        }
        self.count_dp::<false>(p, d, |i, j| code >> (i * d + j) & 1 == 1, false)
    }
}

/// Number of tropically allowed paths of `pattern`, by the linear-time
/// DP.
pub fn count_tropical_paths(pattern: &SignPattern) -> Result<u64> {
    PathCounter::new().count_tropical(pattern)
}

/// Number of allowed paths of `pattern`.
pub fn count_allowed_paths(pattern: &SignPattern) -> Result<u64> {
    PathCounter::new().count_allowed(pattern)
}

// ---------------------------------------------------------------------------
// Gale evenness subsets
// ---------------------------------------------------------------------------

/// A subset of `{1, ..., n}` satisfying Gale's evenness condition:
/// between any two non-members lies an even number of members.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GaleSubset {
    n: usize,
    elements: Vec<usize>, // sorted, 1-based
}

impl GaleSubset {
    pub fn new(n: usize, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&e| e == 0 || e > n) {
            return Err(Error::InvalidArgument(format!(
                "subset elements must lie in 1..={n}"
            )));
        }
        if !evenness_holds(n, &elements) {
            return Err(Error::InvalidArgument(
                "subset violates the evenness condition".into(),
            ));
        }
        Ok(GaleSubset { n, elements })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted 1-based elements.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn evenness_holds(n: usize, sorted_elements: &[usize]) -> bool {
    let mut member = vec![false; n + 1];
    for &e in sorted_elements {
        member[e] = true;
    }
    // Interior runs of members (flanked by non-members) must have even
    // length; boundary runs are unconstrained.
    let mut seen_gap = false;
    let mut run = 0usize;
    for &inside in &member[1..=n] {
        if inside {
            run += 1;
        } else {
            if seen_gap && run % 2 == 1 {
                return false;
            }
            seen_gap = true;
            run = 0;
        }
    }
    true
}

/// All `k`-element subsets of `{1, ..., n}` satisfying the evenness
/// condition, lexicographically ordered. Guarded to `n <= 20`.
pub fn enumerate_gale_subsets(n: usize, k: usize) -> Result<Vec<GaleSubset>> {
    if n > 20 {
        return Err(Error::GuardExceeded {
            what: "gale ground set",
            got: n as u64,
            limit: 20,
        });
    }
    if k > n {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for combo in (1..=n).combinations(k) {
        if evenness_holds(n, &combo) {
            out.push(GaleSubset { n, elements: combo });
        }
    }
    Ok(out)
}

/// The subset of `{1, ..., p+d}` associated with a path: rows of
/// horizontal segments shifted by `d`, plus the reflected complement of
/// the vertical columns. Errors if the image violates evenness, which
/// cannot happen for paths allowed on the alternating pattern.
pub fn path_to_gale(path: &LatticePath, p: usize, d: usize) -> Result<GaleSubset> {
    path.check_bounds(p, d)?;
    let mut elements: Vec<usize> = path.rows().iter().map(|&i| i + 1 + d).collect();
    let in_path: std::collections::HashSet<usize> = path.cols().iter().copied().collect();
    for j in 0..d {
        if !in_path.contains(&j) {
            elements.push(d - j);
        }
    }
    GaleSubset::new(p + d, elements)
}

/// Inverse of [`path_to_gale`]: requires `q` to live on `{1, ..., p+d}`
/// with exactly `d - 1` elements.
pub fn gale_to_path(q: &GaleSubset, p: usize, d: usize) -> Result<LatticePath> {
    if q.n() != p + d {
        return Err(Error::InvalidArgument(format!(
            "subset ground set is {}, expected p + d = {}",
            q.n(),
            p + d
        )));
    }
    if q.len() != d - 1 {
        return Err(Error::InvalidArgument(format!(
            "subset has {} elements, expected d - 1 = {}",
            q.len(),
            d - 1
        )));
    }
    let rows: Vec<usize> = q
        .elements()
        .iter()
        .filter(|&&e| e > d)
        .map(|&e| e - d - 1)
        .collect();
    let excluded: std::collections::HashSet<usize> = q
        .elements()
        .iter()
        .filter(|&&e| e <= d)
        .map(|&e| d - e)
        .collect();
    let cols: Vec<usize> = (0..d).filter(|j| !excluded.contains(j)).collect();
    LatticePath::new(rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_row_pattern() -> SignPattern {
        SignPattern::parse("+-+\n+-+\n").unwrap()
    }

    fn path(rows: &[usize], cols: &[usize]) -> LatticePath {
        LatticePath::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    #[test]
    fn pattern_parse_and_render() {
        let pat = two_row_pattern();
        assert_eq!((pat.p(), pat.d()), (2, 3));
        assert!(pat.is_negative(0, 1));
        assert!(!pat.is_negative(1, 2));
        assert_eq!(pat.to_text(), "+-+\n+-+\n");
        let with_header = SignPattern::parse("2 3\n+-+\n+-+\n").unwrap();
        assert_eq!(with_header, pat);
    }

    #[test]
    fn pattern_parse_errors_are_positioned() {
        match SignPattern::parse("+-+\n+x+\n") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 2)),
            other => panic!("expected parse error, got {other:?}"),
        }
        match SignPattern::parse("+-+\n+-\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match SignPattern::parse("2 4\n+-+\n+-+\n") {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected header mismatch, got {other:?}"),
        }
    }

    #[test]
    fn code_round_trip() {
        let pat = SignPattern::from_code(2, 3, 0b010010).unwrap();
        assert_eq!(pat, two_row_pattern());
        assert_eq!(pat.code().unwrap(), 0b010010);
        assert_eq!(pat.reversed().code().unwrap(), 0b010010);
    }

    #[test]
    fn word_round_trip() {
        let pat = two_row_pattern();
        let g1 = path(&[0, 1], &[0, 1, 2]);
        let word = g1.to_word(pat.p(), pat.d()).unwrap();
        assert_eq!(word, "drdrd");
        assert_eq!(LatticePath::from_word(&word, 2, 3).unwrap(), g1);
        let vertical = path(&[], &[2]);
        assert_eq!(vertical.to_word(2, 3).unwrap(), "rrddd");
        assert_eq!(LatticePath::from_word("rrddd", 2, 3).unwrap(), vertical);
    }

    #[test]
    fn tropical_allowedness_examples() {
        let pat = two_row_pattern();
        // The staircase through both rows is tropically allowed.
        assert!(is_tropically_allowed(&path(&[0, 1], &[0, 1, 2]), &pat).unwrap());
        // A vertical in the all-minus column is not.
        assert!(!is_tropically_allowed(&path(&[], &[1]), &pat).unwrap());
        // Final vertical segment with a non-exempt minus at (2,2).
        assert!(!is_tropically_allowed(&path(&[0], &[0, 1]), &pat).unwrap());
        assert!(!is_allowed(&path(&[0], &[0, 1]), &pat).unwrap());
    }

    #[test]
    fn order_condition_separates_allowed_from_tropical() {
        // Rows 2..3 host a (-,+) segment followed by a (+,-) one.
        let pat = SignPattern::parse("+++\n-++\n++-\n+++\n").unwrap();
        let zigzag = path(&[1, 2], &[0, 1, 2]);
        assert!(is_allowed(&zigzag, &pat).unwrap());
        assert!(!is_tropically_allowed(&zigzag, &pat).unwrap());
        assert!(satisfies_conditions(&zigzag, &pat, false).unwrap());
        assert!(!satisfies_conditions(&zigzag, &pat, true).unwrap());
    }

    #[test]
    fn alternating_pattern_staircase_is_allowed() {
        let pat = SignPattern::alternating(2, 3);
        assert_eq!(pat, two_row_pattern());
        assert!(is_allowed(&path(&[0, 1], &[0, 1, 2]), &pat).unwrap());
    }

    #[test]
    fn enumeration_reference_counts() {
        let paths = enumerate_tropical_paths(&two_row_pattern()).unwrap();
        assert_eq!(paths.len(), 5);
        let expected = vec![
            path(&[], &[0]),
            path(&[1], &[0, 1]),
            path(&[0, 1], &[0, 1, 2]),
            path(&[0], &[1, 2]),
            path(&[], &[2]),
        ];
        assert_eq!(paths, expected);

        let all_plus = SignPattern::all_plus(3, 4);
        let paths = enumerate_tropical_paths(&all_plus).unwrap();
        assert_eq!(paths.len(), 4);
        assert!(paths.iter().all(|pth| pth.k() == 0));

        let all_minus = SignPattern::from_fn(2, 3, |_, _| true);
        assert!(enumerate_tropical_paths(&all_minus).unwrap().is_empty());
    }

    #[test]
    fn dp_reference_counts() {
        assert_eq!(count_tropical_paths(&two_row_pattern()).unwrap(), 5);
        // The five-row variant of the same column pattern has 8 paths.
        let tall = SignPattern::from_fn(5, 3, |_, j| j == 1);
        assert_eq!(count_tropical_paths(&tall).unwrap(), 8);
        for (p, d) in [(1, 1), (3, 4), (4, 7)] {
            assert_eq!(
                count_tropical_paths(&SignPattern::all_plus(p, d)).unwrap(),
                d as u64
            );
            assert_eq!(
                count_allowed_paths(&SignPattern::all_plus(p, d)).unwrap(),
                d as u64
            );
        }
    }

    #[test]
    fn allowed_dp_matches_mcmullen_on_alternating() {
        // U(5, 2) = 5 and U(9, 4) = 27.
        assert_eq!(
            count_allowed_paths(&SignPattern::alternating(2, 3)).unwrap(),
            5
        );
        assert_eq!(
            count_allowed_paths(&SignPattern::alternating(4, 5)).unwrap(),
            27
        );
    }

    #[test]
    fn dp_agrees_with_enumeration_exhaustively() {
        let mut counter = PathCounter::new();
        for (p, d) in [(1, 1), (1, 4), (2, 2), (2, 3), (3, 3), (4, 2), (2, 5)] {
            for code in 0u64..1 << (p * d) {
                let pat = SignPattern::from_code(p, d, code).unwrap();
                let by_dp = counter.count_tropical(&pat).unwrap();
                let by_enum = enumerate_tropical_paths(&pat).unwrap().len() as u64;
                assert_eq!(by_dp, by_enum, "tropical mismatch on {pat:?}");
                let by_dp = counter.count_allowed(&pat).unwrap();
                let by_enum = enumerate_allowed_paths(&pat).unwrap().len() as u64;
                assert_eq!(by_dp, by_enum, "allowed mismatch on {pat:?}");
                assert_eq!(
                    counter.count_tropical_code(p, d, code).unwrap(),
                    counter.count_tropical(&pat).unwrap()
                );
            }
        }
    }

    #[test]
    fn conditions_agree_with_automaton() {
        for (p, d) in [(2, 2), (2, 3), (3, 3), (4, 2)] {
            for code in 0u64..1 << (p * d) {
                let pat = SignPattern::from_code(p, d, code).unwrap();
                for k in 0..=p.min(d - 1) {
                    for cols in (0..d).combinations(k + 1) {
                        for rows in (0..p).combinations(k) {
                            let pth = LatticePath::new(rows, cols.clone()).unwrap();
                            assert_eq!(
                                is_tropically_allowed(&pth, &pat).unwrap(),
                                satisfies_conditions(&pth, &pat, true).unwrap(),
                                "tropical {pth:?} on {pat:?}"
                            );
                            assert_eq!(
                                is_allowed(&pth, &pat).unwrap(),
                                satisfies_conditions(&pth, &pat, false).unwrap(),
                                "allowed {pth:?} on {pat:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn automaton_is_unambiguous() {
        // No state may have two arcs consumable by the same letter and
        // concrete sign.
        for classical in [false, true] {
            let arcs = automaton_arcs(classical);
            for state in [
                Initial,
                OpenPlus,
                OpenMinus,
                ClosedPlusMinus,
                ClosedMinusPlus,
            ] {
                for letter in [Down, Right] {
                    for neg in [false, true] {
                        let n = arcs
                            .iter()
                            .filter(|a| {
                                a.from == state
                                    && a.letter == letter
                                    && req_matches(a.req, Some(neg))
                            })
                            .count();
                        assert!(
                            n <= 1,
                            "ambiguous: {state:?} {letter:?} neg={neg} has {n} arcs"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn reverse_type_counts() {
        let (n_pm, n_mp) = reverse_path_type_counts(&two_row_pattern()).unwrap();
        // Verticals (2) + the (+,-) segment path g0; g2 is (-,+); the
        // two-segment staircase is mixed.
        assert_eq!((n_pm, n_mp), (3, 3));
        let all_plus = SignPattern::all_plus(3, 4);
        assert_eq!(reverse_path_type_counts(&all_plus).unwrap(), (4, 4));
    }

    #[test]
    fn reverse_type_counts_swap_under_reversal() {
        for (p, d) in [(2, 3), (3, 3), (2, 4)] {
            for code in 0u64..1 << (p * d) {
                let pat = SignPattern::from_code(p, d, code).unwrap();
                let (pm, mp) = reverse_path_type_counts(&pat).unwrap();
                let (rpm, rmp) = reverse_path_type_counts(&pat.reversed()).unwrap();
                assert_eq!((pm, mp), (rmp, rpm), "on {pat:?}");
            }
        }
    }

    #[test]
    fn gale_subsets_small_counts() {
        assert_eq!(enumerate_gale_subsets(5, 2).unwrap().len(), 5);
        assert_eq!(enumerate_gale_subsets(8, 2).unwrap().len(), 8);
        assert_eq!(enumerate_gale_subsets(9, 0).unwrap().len(), 1);
    }

    #[test]
    fn gale_map_reproduces_worked_example() {
        // p = 7, d = 9, I = {1,2,4,5}, J = {1,4,5,6,9} (1-based).
        let pth = path(&[0, 1, 3, 4], &[0, 3, 4, 5, 8]);
        let q = path_to_gale(&pth, 7, 9).unwrap();
        assert_eq!(q.elements(), &[2, 3, 7, 8, 10, 11, 13, 14]);
        assert_eq!(gale_to_path(&q, 7, 9).unwrap(), pth);
    }

    #[test]
    fn gale_map_on_vertical_path() {
        // Full-column path at column j: Q = {d - j' + 1 : j' != j}.
        let pth = path(&[], &[0]);
        let q = path_to_gale(&pth, 3, 4).unwrap();
        assert_eq!(q.elements(), &[1, 2, 3]);
        assert_eq!(gale_to_path(&q, 3, 4).unwrap(), pth);
        // A vertical at column 2 is not allowed on the alternating
        // pattern, and indeed its image violates evenness.
        assert!(path_to_gale(&path(&[], &[1]), 3, 4).is_err());
    }

    #[test]
    fn gale_round_trip_on_alternating_patterns() {
        for (p, d) in [(2, 3), (3, 4), (4, 4), (5, 3), (3, 5)] {
            let pat = SignPattern::alternating(p, d);
            let allowed = enumerate_allowed_paths(&pat).unwrap();
            assert_eq!(
                allowed.len() as u64,
                count_allowed_paths(&pat).unwrap(),
                "({p},{d})"
            );
            for pth in &allowed {
                let q = path_to_gale(pth, p, d).unwrap();
                assert_eq!(&gale_to_path(&q, p, d).unwrap(), pth);
            }
            // And the other way: every evenness subset comes from an
            // allowed path.
            for q in enumerate_gale_subsets(p + d, d - 1).unwrap() {
                let pth = gale_to_path(&q, p, d).unwrap();
                assert!(is_allowed(&pth, &pat).unwrap(), "{q:?} -> {pth:?}");
                assert_eq!(path_to_gale(&pth, p, d).unwrap(), q);
            }
        }
    }

    #[test]
    fn render_marks_horizontal_interiors() {
        let pat = SignPattern::parse("+-+\n+-+\n").unwrap();
        let g1 = path(&[0, 1], &[0, 1, 2]);
        assert_eq!(g1.render(&pat).unwrap(), "+-.\n.-+\n");
        let pat = SignPattern::parse("+--+\n++++\n").unwrap();
        let wide = path(&[0], &[0, 3]);
        assert_eq!(wide.render(&pat).unwrap(), "+**+\n...+\n");
    }

    #[test]
    fn enumeration_guard_enforced() {
        let pat = SignPattern::all_plus(8, 4);
        assert!(matches!(
            enumerate_tropical_paths(&pat),
            Err(Error::GuardExceeded { .. })
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_pattern() -> impl Strategy<Value = SignPattern> {
            (1usize..=5, 1usize..=5)
                .prop_flat_map(|(p, d)| {
                    (Just(p), Just(d), proptest::bits::u64::masked((1u64 << (p * d)) - 1))
                })
                .prop_map(|(p, d, code)| SignPattern::from_code(p, d, code).unwrap())
        }

        proptest! {
            #[test]
            fn dp_equals_enumeration(pat in arb_pattern()) {
                let mut counter = PathCounter::new();
                prop_assert_eq!(
                    counter.count_tropical(&pat).unwrap(),
                    enumerate_tropical_paths(&pat).unwrap().len() as u64
                );
                prop_assert_eq!(
                    counter.count_allowed(&pat).unwrap(),
                    enumerate_allowed_paths(&pat).unwrap().len() as u64
                );
            }

            #[test]
            fn tropically_allowed_implies_allowed(pat in arb_pattern()) {
                for pth in enumerate_tropical_paths(&pat).unwrap() {
                    prop_assert!(is_allowed(&pth, &pat).unwrap());
                }
            }

            #[test]
            fn pattern_text_round_trip(pat in arb_pattern()) {
                prop_assert_eq!(SignPattern::parse(&pat.to_text()).unwrap(), pat);
            }

            #[test]
            fn path_word_round_trip(pat in arb_pattern()) {
                let (p, d) = (pat.p(), pat.d());
                for pth in enumerate_allowed_paths(&pat).unwrap() {
                    let word = pth.to_word(p, d).unwrap();
                    prop_assert_eq!(word.matches('d').count(), p + 1);
                    prop_assert!(word.matches('r').count() < d);
                    prop_assert_eq!(LatticePath::from_word(&word, p, d).unwrap(), pth);
                }
            }

            #[test]
            fn reversal_preserves_the_count(pat in arb_pattern()) {
                let mut counter = PathCounter::new();
                prop_assert_eq!(
                    counter.count_tropical(&pat).unwrap(),
                    counter.count_tropical(&pat.reversed()).unwrap()
                );
            }
        }
    }
}

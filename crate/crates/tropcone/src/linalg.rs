//! Signed max-plus linear algebra.
//!
//! Determinants over the symmetrized semiring are plain permutation
//! expansions behind a small size guard; the library's hot paths never
//! call them, they exist as the reference against which the closed-form
//! Cramer determinants of the cyclic system are checked. The tropical
//! permanent drives the general-position test in [`crate::cone`].
//!
//! [`cramer_determinants`] and [`cramer_solution`] evaluate the closed
//! forms for the `k x (k+1)` saturation system attached to an
//! [`IndexPair`] on a signed cyclic pattern: each Cramer determinant is a
//! single signed monomial (the maximizing permutation is unique because
//! the generator parameters increase strictly), and the system has a
//! positive solution exactly when consecutive signs along the pair
//! alternate.

use crate::paths::{LatticePath, SignPattern};
use crate::semiring::{MaxPlus, Sign, SignedScalar};
use crate::{Error, Result};

/// Maximum dimension for permutation-expansion determinants/permanents.
pub const DET_SIZE_GUARD: usize = 10;

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Dense matrix over the max-plus semiring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MaxPlusMatrix {
    rows: usize,
    cols: usize,
    data: Vec<MaxPlus>,
}

impl MaxPlusMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<MaxPlus>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(MaxPlusMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> MaxPlus) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MaxPlusMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> MaxPlus {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[MaxPlus] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    /// Entrywise tropical sum.
    pub fn entrywise_max(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(
                "entrywise max of unequal shapes".into(),
            ));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).plus(other.get(i, j))
        }))
    }
}

/// Dense matrix over the symmetrized semiring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SignedScalar>,
}

impl SignedMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<SignedScalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(SignedMatrix { rows, cols, data })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> SignedScalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        SignedMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> SignedScalar {
        self.data[i * self.cols + j]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn moduli(&self) -> MaxPlusMatrix {
        MaxPlusMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).modulus())
    }
}

// ---------------------------------------------------------------------------
// Permutation expansion
// ---------------------------------------------------------------------------

/// Heap's algorithm: visits every permutation of `0..n` exactly once,
/// reporting its parity (`true` = even). Allocation-free per step.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize], bool)) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut even = true;
    visit(&perm, even);
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            even = !even;
            visit(&perm, even);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

fn square_guard(m_rows: usize, m_cols: usize) -> Result<usize> {
    if m_rows != m_cols {
        return Err(Error::NotSquare {
            rows: m_rows,
            cols: m_cols,
        });
    }
    if m_rows > DET_SIZE_GUARD {
        return Err(Error::GuardExceeded {
            what: "determinant size",
            got: m_rows as u64,
            limit: DET_SIZE_GUARD as u64,
        });
    }
    Ok(m_rows)
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

/// Determinant over the symmetrized semiring: the signed sum over all
/// permutations of the diagonal products. Intermediate moduli are
/// accumulated in 128 bits, so only the final value can overflow.
pub fn sdet(m: &SignedMatrix) -> Result<SignedScalar> {
    let n = square_guard(m.rows(), m.cols())?;
    if n == 0 {
        return Ok(SignedScalar::ONE);
    }
    // Running symmetrized sum, kept as (modulus, sign) with wide modulus.
    let mut best: Option<(i128, Sign)> = None;
    for_each_permutation(n, |perm, even| {
        let mut modulus = 0i128;
        let mut sign = if even { Sign::Pos } else { Sign::Neg };
        for (col, &row) in perm.iter().enumerate() {
            let entry = m.get(row, col);
            match entry.modulus().value() {
                Some(v) => {
                    modulus += v as i128;
                    sign = sign.times(entry.sign());
                }
                None => {
                    sign = Sign::Zero;
                    break;
                }
            }
        }
        if sign == Sign::Zero {
            return;
        }
        best = match best {
            None => Some((modulus, sign)),
            Some((bm, bs)) => match modulus.cmp(&bm) {
                std::cmp::Ordering::Greater => Some((modulus, sign)),
                std::cmp::Ordering::Less => Some((bm, bs)),
                std::cmp::Ordering::Equal => Some((bm, if bs == sign { bs } else { Sign::Bal })),
            },
        };
    });
    match best {
        None => Ok(SignedScalar::Zero),
        Some((modulus, sign)) => Ok(SignedScalar::from_parts(
            sign,
            MaxPlus::finite(narrow(modulus)?),
        )),
    }
}

/// Tropical permanent: the maximum over permutations of the diagonal
/// sums, together with whether that maximum is finite and attained by a
/// unique permutation (tropical non-singularity).
pub fn tper(m: &MaxPlusMatrix) -> Result<(MaxPlus, bool)> {
    let n = square_guard(m.rows(), m.cols())?;
    if n == 0 {
        return Ok((MaxPlus::ONE, true));
    }
    let mut best: Option<(i128, u64)> = None;
    for_each_permutation(n, |perm, _| {
        let mut sum = 0i128;
        for (col, &row) in perm.iter().enumerate() {
            match m.get(row, col).value() {
                Some(v) => sum += v as i128,
                None => return,
            }
        }
        best = match best {
            None => Some((sum, 1)),
            Some((bm, cnt)) => {
                if sum > bm {
                    Some((sum, 1))
                } else if sum == bm {
                    Some((bm, cnt + 1))
                } else {
                    Some((bm, cnt))
                }
            }
        };
    });
    match best {
        None => Ok((MaxPlus::ZERO, false)),
        Some((sum, cnt)) => Ok((MaxPlus::finite(narrow(sum)?), cnt == 1)),
    }
}

// ---------------------------------------------------------------------------
// Index pairs and Cramer closed forms
// ---------------------------------------------------------------------------

/// A pair of strictly increasing index sequences `I` (rows, length `k`)
/// and `J` (columns, length `k + 1`), 0-based. Selects the `k x (k+1)`
/// saturation system `C(I, J) z` of a signed cyclic pattern.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IndexPair {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl IndexPair {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if cols.len() != rows.len() + 1 {
            return Err(Error::InvalidIndexPair(format!(
                "need |J| = |I| + 1, got |I| = {}, |J| = {}",
                rows.len(),
                cols.len()
            )));
        }
        if !rows.windows(2).all(|w| w[0] < w[1]) || !cols.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidIndexPair(
                "indices must be strictly increasing".into(),
            ));
        }
        Ok(IndexPair { rows, cols })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    fn check_bounds(&self, p: usize, d: usize) -> Result<()> {
        let rows_ok = self.rows.last().is_none_or(|&i| i < p);
        let cols_ok = self.cols.last().is_some_and(|&j| j < d);
        if rows_ok && cols_ok {
            Ok(())
        } else {
            Err(Error::InvalidIndexPair(format!(
                "{self:?} out of bounds for a {p} x {d} pattern"
            )))
        }
    }
}

impl From<&LatticePath> for IndexPair {
    fn from(path: &LatticePath) -> Self {
        IndexPair {
            rows: path.rows().to_vec(),
            cols: path.cols().to_vec(),
        }
    }
}

fn check_t(pattern: &SignPattern, t: &[i64]) -> Result<()> {
    if t.len() != pattern.p() {
        return Err(Error::DimensionMismatch(format!(
            "t has {} entries for a pattern with {} rows",
            t.len(),
            pattern.p()
        )));
    }
    if !t.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "t must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn epsilon(pattern: &SignPattern, i: usize, j: usize) -> Sign {
    if pattern.is_negative(i, j) {
        Sign::Neg
    } else {
        Sign::Pos
    }
}

/// The Cramer determinants `D_1, ..., D_{k+1}` of the saturation system
/// selected by `ij`: deleting column `r` of `C(I, J)` leaves a matrix
/// whose permutation expansion is maximized by the identity alone, so
/// each `D_r` is the single signed monomial evaluated here. Requires
/// `k >= 1`.
pub fn cramer_determinants(
    pattern: &SignPattern,
    t: &[i64],
    ij: &IndexPair,
) -> Result<Vec<SignedScalar>> {
    check_t(pattern, t)?;
    ij.check_bounds(pattern.p(), pattern.d())?;
    let k = ij.k();
    if k == 0 {
        return Err(Error::InvalidIndexPair(
            "cramer determinants need k >= 1".into(),
        ));
    }
    let (rows, cols) = (ij.rows(), ij.cols());
    let mut out = Vec::with_capacity(k + 1);
    for r in 0..=k {
        let mut modulus = 0i128;
        let mut sign = Sign::Pos;
        for s in 0..k {
            // Below the deleted column the factor sits at (i_s, j_s),
            // from it on at (i_s, j_{s+1}).
            let col = if s < r { cols[s] } else { cols[s + 1] };
            modulus += col as i128 * t[rows[s]] as i128;
            sign = sign.times(epsilon(pattern, rows[s], col));
        }
        out.push(SignedScalar::from_parts(
            sign,
            MaxPlus::finite(narrow(modulus)?),
        ));
    }
    Ok(out)
}

/// Solves the saturation system selected by `ij`. The system has a
/// non-zero max-plus solution iff the two signs flanking each horizontal
/// index alternate; the solution, normalized to end with the unit, is
/// returned as plain finite integers. `k = 0` is vacuously feasible with
/// the unit solution.
pub fn cramer_solution(
    pattern: &SignPattern,
    t: &[i64],
    ij: &IndexPair,
) -> Result<Option<Vec<i64>>> {
    check_t(pattern, t)?;
    ij.check_bounds(pattern.p(), pattern.d())?;
    let k = ij.k();
    let (rows, cols) = (ij.rows(), ij.cols());
    for s in 0..k {
        if pattern.is_negative(rows[s], cols[s]) == pattern.is_negative(rows[s], cols[s + 1]) {
            return Ok(None);
        }
    }
    let mut z = vec![0i64; k + 1];
    for s in (0..k).rev() {
        let step = (cols[s + 1] - cols[s]) as i64;
        let jump = step.checked_mul(t[rows[s]]).ok_or(Error::Overflow)?;
        z[s] = jump.checked_add(z[s + 1]).ok_or(Error::Overflow)?;
    }
    Ok(Some(z))
}

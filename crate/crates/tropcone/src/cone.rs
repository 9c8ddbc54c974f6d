//! Generic tropical inequality systems `A x <= B x`.
//!
//! Membership, saturation and the tangent cone are direct evaluations of
//! the rowwise max-plus products; comparisons happen in 128-bit space so
//! no intermediate sum can overflow. The extremality test enumerates the
//! Boolean points of the tangent cone: a member spans an extreme ray iff
//! some support coordinate forces the whole support through the tangent
//! cone's constraints.

use crate::linalg::{self, MaxPlusMatrix};
use crate::semiring::MaxPlus;
use crate::{Error, Result};

/// Dimension limit for the Boolean enumeration in [`TropicalIneqSystem::is_extreme`].
pub const EXTREME_DIM_GUARD: usize = 24;

/// Submatrix-count limit for [`TropicalIneqSystem::in_general_position`].
pub const GENERAL_POSITION_GUARD: u64 = 1_000_000;

/// A point of max-plus space with exact extended-integer coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropicalVector {
    coords: Vec<MaxPlus>,
}

impl TropicalVector {
    pub fn new(coords: Vec<MaxPlus>) -> Self {
        TropicalVector { coords }
    }

    /// All-finite vector.
    pub fn finite(values: &[i64]) -> Self {
        TropicalVector {
            coords: values.iter().map(|&v| MaxPlus::finite(v)).collect(),
        }
    }

    /// Builds from options, `None` meaning `-inf`.
    pub fn from_options(values: &[Option<i64>]) -> Self {
        TropicalVector {
            coords: values
                .iter()
                .map(|v| v.map_or(MaxPlus::ZERO, MaxPlus::finite))
                .collect(),
        }
    }

    /// The tropical unit vector at `j`: `0` there, `-inf` elsewhere.
    pub fn unit(dim: usize, j: usize) -> Self {
        let mut coords = vec![MaxPlus::ZERO; dim];
        coords[j] = MaxPlus::ONE;
        TropicalVector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[MaxPlus] {
        &self.coords
    }

    pub fn coord(&self, j: usize) -> MaxPlus {
        self.coords[j]
    }

    /// Indices of the finite coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&j| self.coords[j].is_finite())
            .collect()
    }

    /// Whether this is the zero vector (all coordinates `-inf`).
    pub fn is_zero_vector(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Tropical scalar multiple: adds `lambda` to every finite
    /// coordinate.
    pub fn scaled(&self, lambda: i64) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.times(MaxPlus::finite(lambda)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TropicalVector { coords })
    }

    /// Entrywise tropical sum.
    pub fn max_with(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(
                "tropical sum of unequal dimensions".into(),
            ));
        }
        Ok(TropicalVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| a.plus(b))
                .collect(),
        })
    }

    /// The canonical representative of this vector's ray: shifted so the
    /// last support coordinate is `0`. The zero vector is its own
    /// canonical form.
    pub fn canonicalized(&self) -> Self {
        match self.coords.iter().rev().find_map(|c| c.value()) {
            None => self.clone(),
            Some(last) => TropicalVector {
                coords: self
                    .coords
                    .iter()
                    .map(|c| {
                        c.value()
                            .map_or(MaxPlus::ZERO, |v| MaxPlus::finite(v - last))
                    })
                    .collect(),
            },
        }
    }

    /// Ray equality: support equality plus a constant coordinate
    /// difference on the support.
    pub fn projectively_equal(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.canonicalized() == other.canonicalized()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64()).collect()
    }
}

impl std::fmt::Display for TropicalVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (idx, c) in self.coords.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl std::fmt::Debug for TropicalVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

/// Local description of a cone at a point: per saturated row with finite
/// value, the argmax index sets of the two sides.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TangentCone {
    rows: Vec<(Vec<usize>, Vec<usize>)>,
}

impl TangentCone {
    /// `(lhs_argmax, rhs_argmax)` pairs, one per saturated row with
    /// finite common value.
    pub fn rows(&self) -> &[(Vec<usize>, Vec<usize>)] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// The system `A x <= B x` of `p` tropical half-spaces in dimension `d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TropicalIneqSystem {
    lhs: MaxPlusMatrix,
    rhs: MaxPlusMatrix,
}

fn row_eval(row: &[MaxPlus], x: &[MaxPlus]) -> Option<i128> {
    let mut best: Option<i128> = None;
    for (a, v) in row.iter().zip(x) {
        if let (Some(a), Some(v)) = (a.value(), v.value()) {
            let s = a as i128 + v as i128;
            best = Some(best.map_or(s, |b| b.max(s)));
        }
    }
    best
}

fn row_argmax(row: &[MaxPlus], x: &[MaxPlus]) -> (Option<i128>, Vec<usize>) {
    let best = row_eval(row, x);
    let arg = match best {
        None => Vec::new(),
        Some(b) => row
            .iter()
            .zip(x)
            .enumerate()
            .filter(|(_, (a, v))| match (a.value(), v.value()) {
                (Some(a), Some(v)) => a as i128 + v as i128 == b,
                _ => false,
            })
            .map(|(j, _)| j)
            .collect(),
    };
    (best, arg)
}

impl TropicalIneqSystem {
    pub fn new(lhs: MaxPlusMatrix, rhs: MaxPlusMatrix) -> Result<Self> {
        if (lhs.rows(), lhs.cols()) != (rhs.rows(), rhs.cols()) {
            return Err(Error::DimensionMismatch(format!(
                "lhs is {}x{}, rhs is {}x{}",
                lhs.rows(),
                lhs.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(TropicalIneqSystem { lhs, rhs })
    }

    /// Number of inequalities.
    pub fn p(&self) -> usize {
        self.lhs.rows()
    }

    /// Ambient dimension.
    pub fn d(&self) -> usize {
        self.lhs.cols()
    }

    pub fn lhs(&self) -> &MaxPlusMatrix {
        &self.lhs
    }

    pub fn rhs(&self) -> &MaxPlusMatrix {
        &self.rhs
    }

    /// The coefficient matrix `C = A (+) B` (entrywise max).
    pub fn combined(&self) -> MaxPlusMatrix {
        self.lhs.entrywise_max(&self.rhs).expect("equal shapes")
    }

    /// Whether every position is finite on at most one side.
    pub fn supports_disjoint(&self) -> bool {
        (0..self.p()).all(|i| {
            (0..self.d())
                .all(|j| !(self.lhs.get(i, j).is_finite() && self.rhs.get(i, j).is_finite()))
        })
    }

    fn check_dim(&self, x: &TropicalVector) -> Result<()> {
        if x.dim() != self.d() {
            return Err(Error::DimensionMismatch(format!(
                "vector has dimension {}, system has {}",
                x.dim(),
                self.d()
            )));
        }
        Ok(())
    }

    /// Whether `x` satisfies every inequality.
    pub fn member(&self, x: &TropicalVector) -> Result<bool> {
        self.check_dim(x)?;
        for i in 0..self.p() {
            if row_eval(self.lhs.row(i), x.coords()) > row_eval(self.rhs.row(i), x.coords()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rows satisfied with equality by `x`, including rows where both
    /// sides are `-inf`. Meaningful for members.
    pub fn saturated_rows(&self, x: &TropicalVector) -> Result<Vec<usize>> {
        self.check_dim(x)?;
        Ok((0..self.p())
            .filter(|&i| {
                row_eval(self.lhs.row(i), x.coords()) == row_eval(self.rhs.row(i), x.coords())
            })
            .collect())
    }

    /// The tangent cone at a member `y`: one argmax-pair constraint per
    /// saturated row with finite value. Rows saturated at `-inf` carry no
    /// local constraint and are omitted.
    pub fn tangent_cone(&self, y: &TropicalVector) -> Result<TangentCone> {
        if !self.member(y)? {
            return Err(Error::NotMember);
        }
        let mut rows = Vec::new();
        for i in 0..self.p() {
            let (lv, larg) = row_argmax(self.lhs.row(i), y.coords());
            let (rv, rarg) = row_argmax(self.rhs.row(i), y.coords());
            if lv == rv && lv.is_some() {
                rows.push((larg, rarg));
            }
        }
        Ok(TangentCone { rows })
    }

    /// Whether a non-zero member `y` spans an extreme ray: some support
    /// index `s` must force every Boolean point of the tangent cone with
    /// `x_s = 1` to cover the whole support of `y`.
    pub fn is_extreme(&self, y: &TropicalVector) -> Result<bool> {
        let d = self.d();
        if d > EXTREME_DIM_GUARD {
            return Err(Error::GuardExceeded {
                what: "extremality dimension",
                got: d as u64,
                limit: EXTREME_DIM_GUARD as u64,
            });
        }
        if y.is_zero_vector() {
            return Err(Error::InvalidArgument(
                "extremality is defined for non-zero vectors".into(),
            ));
        }
        let tangent = self.tangent_cone(y)?;
        let row_masks: Vec<(u32, u32)> = tangent
            .rows()
            .iter()
            .map(|(l, r)| (bit_mask(l), bit_mask(r)))
            .collect();
        let supp_mask = bit_mask(&y.support());
        // An index s is disqualified when some Boolean tangent-cone point
        // contains s but misses part of the support.
        let mut disqualified = 0u32;
        for x in 0u32..1 << d {
            if x & supp_mask == supp_mask {
                continue;
            }
            if row_masks.iter().all(|&(l, r)| x & l == 0 || x & r != 0) {
                disqualified |= x;
            }
        }
        Ok(supp_mask & !disqualified != 0)
    }

    /// Saturation lower bound for extreme vectors: with `t` zero
    /// coordinates, at least `d - t - 1` inequalities must be saturated.
    /// Always true when the precondition (`y` extreme) holds.
    pub fn check_saturation_bound(&self, y: &TropicalVector) -> Result<bool> {
        let saturated = self.saturated_rows(y)?.len();
        let zeros = y.dim() - y.support().len();
        Ok(saturated >= (self.d() - zeros).saturating_sub(1))
    }

    /// Whether every square submatrix of `C = A (+) B` is tropically
    /// non-singular (finite permanent attained by a unique permutation).
    pub fn in_general_position(&self) -> Result<bool> {
        let (p, d) = (self.p(), self.d());
        let mut total: u64 = 0;
        for k in 1..=p.min(d) {
            total = total.saturating_add(choose_u64(p, k).saturating_mul(choose_u64(d, k)));
        }
        if total > GENERAL_POSITION_GUARD {
            return Err(Error::GuardExceeded {
                what: "general position submatrices",
                got: total,
                limit: GENERAL_POSITION_GUARD,
            });
        }
        let c = self.combined();
        use itertools::Itertools;
        for k in 1..=p.min(d) {
            for rows in (0..p).combinations(k) {
                for cols in (0..d).combinations(k) {
                    let (value, unique) = linalg::tper(&c.submatrix(&rows, &cols))?;
                    if !unique || !value.is_finite() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

fn bit_mask(indices: &[usize]) -> u32 {
    indices.iter().fold(0u32, |m, &j| m | 1 << j)
}

fn choose_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u64 = 1;
    for i in 0..k.min(n - k) {
        acc = acc
            .saturating_mul((n - i) as u64)
            .checked_div((i + 1) as u64)
            .unwrap_or(u64::MAX);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    const BOT: Option<i64> = None;

    fn mp(rows: usize, cols: usize, vals: &[Option<i64>]) -> MaxPlusMatrix {
        MaxPlusMatrix::new(
            rows,
            cols,
            vals.iter()
                .map(|v| v.map_or(MaxPlus::ZERO, MaxPlus::finite))
                .collect(),
        )
        .unwrap()
    }

    /// The polar of the two-row signed cyclic cone with a negative middle
    /// column and t = (0, 1).
    fn reference_system() -> TropicalIneqSystem {
        let a = mp(2, 3, &[BOT, Some(0), BOT, BOT, Some(1), BOT]);
        let b = mp(2, 3, &[Some(0), BOT, Some(0), Some(0), BOT, Some(2)]);
        TropicalIneqSystem::new(a, b).unwrap()
    }

    fn v(vals: &[Option<i64>]) -> TropicalVector {
        TropicalVector::from_options(vals)
    }

    #[test]
    fn member_examples() {
        let sys = reference_system();
        assert!(sys.member(&v(&[Some(1), Some(1), Some(0)])).unwrap());
        assert!(!sys.member(&v(&[BOT, Some(0), BOT])).unwrap());
        assert!(sys.member(&v(&[BOT, BOT, BOT])).unwrap());
        assert!(sys.supports_disjoint());
    }

    #[test]
    fn saturated_rows_examples() {
        let sys = reference_system();
        assert_eq!(
            sys.saturated_rows(&v(&[Some(1), Some(1), Some(0)]))
                .unwrap(),
            vec![0, 1]
        );
        assert_eq!(
            sys.saturated_rows(&v(&[Some(0), BOT, BOT])).unwrap(),
            Vec::<usize>::new()
        );
        assert_eq!(
            sys.saturated_rows(&v(&[BOT, BOT, BOT])).unwrap(),
            vec![0, 1]
        );
        // The ray through (1, 0, -inf) saturates exactly its defining row.
        assert_eq!(
            sys.saturated_rows(&v(&[Some(1), Some(0), BOT])).unwrap(),
            vec![1]
        );
    }

    #[test]
    fn tangent_cone_examples() {
        let sys = reference_system();
        let tc = sys.tangent_cone(&v(&[Some(1), Some(1), Some(0)])).unwrap();
        assert_eq!(tc.rows(), &[(vec![1], vec![0]), (vec![1], vec![2])]);
        let tc = sys.tangent_cone(&v(&[Some(0), BOT, BOT])).unwrap();
        assert!(tc.is_empty());
        // All-bottom member: rows saturate at -inf, no local constraint.
        let tc = sys.tangent_cone(&v(&[BOT, BOT, BOT])).unwrap();
        assert!(tc.is_empty());
        assert!(matches!(
            sys.tangent_cone(&v(&[BOT, Some(0), BOT])),
            Err(Error::NotMember)
        ));
    }

    #[test]
    fn extremality_examples() {
        let sys = reference_system();
        assert!(sys.is_extreme(&v(&[Some(1), Some(1), Some(0)])).unwrap());
        // (1,0,0) = (1,0,-inf) (+) (-inf,0,0) is not extreme.
        assert!(!sys.is_extreme(&v(&[Some(1), Some(0), Some(0)])).unwrap());
        // Unsaturated single-support member: vacuously extreme.
        assert!(sys.is_extreme(&v(&[Some(0), BOT, BOT])).unwrap());
        assert!(sys.is_extreme(&v(&[BOT, BOT, BOT])).is_err());
    }

    #[test]
    fn saturation_bound_examples() {
        let sys = reference_system();
        for y in [
            v(&[Some(1), Some(1), Some(0)]),
            v(&[Some(0), BOT, BOT]),
            v(&[Some(1), Some(0), BOT]),
        ] {
            assert!(sys.is_extreme(&y).unwrap());
            assert!(sys.check_saturation_bound(&y).unwrap());
        }
    }

    #[test]
    fn scaling_invariance() {
        let sys = reference_system();
        let rays = [
            v(&[Some(1), Some(1), Some(0)]),
            v(&[Some(1), Some(0), BOT]),
            v(&[BOT, Some(0), Some(0)]),
            v(&[Some(1), Some(0), Some(0)]),
        ];
        for y in rays {
            for lambda in [-5, -1, 3, 40] {
                let scaled = y.scaled(lambda).unwrap();
                assert_eq!(sys.member(&scaled).unwrap(), sys.member(&y).unwrap());
                assert_eq!(
                    sys.is_extreme(&scaled).unwrap(),
                    sys.is_extreme(&y).unwrap()
                );
                assert!(scaled.projectively_equal(&y));
            }
        }
    }

    #[test]
    fn general_position_examples() {
        assert!(reference_system().in_general_position().unwrap());
        // Two identical finite rows give a 2x2 permanent tie.
        let a = mp(2, 2, &[BOT, BOT, BOT, BOT]);
        let b = mp(2, 2, &[Some(0), Some(1), Some(0), Some(1)]);
        let sys = TropicalIneqSystem::new(a, b).unwrap();
        assert!(!sys.in_general_position().unwrap());
        let sys = TropicalIneqSystem::new(mp(1, 1, &[BOT]), mp(1, 1, &[Some(5)])).unwrap();
        assert!(sys.in_general_position().unwrap());
    }

    #[test]
    fn canonical_form_and_projective_equality() {
        let a = v(&[Some(4), Some(0), BOT]);
        let b = v(&[Some(9), Some(5), BOT]);
        assert!(a.projectively_equal(&b));
        assert_eq!(b.canonicalized(), a);
        let c = v(&[Some(4), BOT, Some(0)]);
        assert!(!a.projectively_equal(&c));
        let zero = v(&[BOT, BOT, BOT]);
        assert_eq!(zero.canonicalized(), zero);
    }

    #[test]
    fn display_forms() {
        assert_eq!(v(&[Some(1), BOT, Some(0)]).to_string(), "(1, -inf, 0)");
    }

    /// Brute-force reimplementation of the extremality criterion with the
    /// witness index ranging over all coordinates, not just the support.
    fn is_extreme_unrestricted(sys: &TropicalIneqSystem, y: &TropicalVector) -> bool {
        let d = sys.d();
        let tangent = sys.tangent_cone(y).unwrap();
        let supp = y.support();
        's: for s in 0..d {
            for x in 0u32..1 << d {
                if x >> s & 1 == 0 {
                    continue;
                }
                let in_tangent = tangent.rows().iter().all(|(l, r)| {
                    let lhs_one = l.iter().any(|&j| x >> j & 1 == 1);
                    let rhs_one = r.iter().any(|&j| x >> j & 1 == 1);
                    !lhs_one || rhs_one
                });
                if in_tangent && supp.iter().any(|&j| x >> j & 1 == 0) {
                    continue 's;
                }
            }
            return true;
        }
        false
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_coord() -> impl Strategy<Value = MaxPlus> {
            prop_oneof![
                1 => Just(MaxPlus::ZERO),
                4 => (-6i64..6).prop_map(MaxPlus::finite),
            ]
        }

        fn arb_system() -> impl Strategy<Value = TropicalIneqSystem> {
            (1usize..=3, 1usize..=4)
                .prop_flat_map(|(p, d)| {
                    let entries = proptest::collection::vec(arb_coord(), 2 * p * d);
                    (Just(p), Just(d), entries)
                })
                .prop_map(|(p, d, entries)| {
                    let (a, b) = entries.split_at(p * d);
                    TropicalIneqSystem::new(
                        MaxPlusMatrix::new(p, d, a.to_vec()).unwrap(),
                        MaxPlusMatrix::new(p, d, b.to_vec()).unwrap(),
                    )
                    .unwrap()
                })
        }

        proptest! {
            #[test]
            fn membership_is_scale_invariant(
                sys in arb_system(),
                coords in proptest::collection::vec(arb_coord(), 4),
                lambda in -20i64..20,
            ) {
                let x = TropicalVector::new(coords[..sys.d()].to_vec());
                let scaled = x.scaled(lambda).unwrap();
                prop_assert_eq!(sys.member(&scaled).unwrap(), sys.member(&x).unwrap());
                prop_assert_eq!(
                    sys.saturated_rows(&scaled).unwrap(),
                    sys.saturated_rows(&x).unwrap()
                );
                if !x.is_zero_vector() && sys.member(&x).unwrap() {
                    prop_assert_eq!(
                        sys.is_extreme(&scaled).unwrap(),
                        sys.is_extreme(&x).unwrap()
                    );
                }
            }

            #[test]
            fn canonical_form_is_idempotent(
                coords in proptest::collection::vec(arb_coord(), 1..6),
                lambda in -20i64..20,
            ) {
                let x = TropicalVector::new(coords);
                let canon = x.canonicalized();
                prop_assert_eq!(canon.canonicalized(), canon.clone());
                prop_assert!(x.projectively_equal(&canon));
                prop_assert!(x.scaled(lambda).unwrap().projectively_equal(&x));
            }
        }
    }

    #[test]
    fn support_restricted_witness_is_equivalent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut compared = 0;
        while compared < 400 {
            let p = rng.random_range(1..=3);
            let d = rng.random_range(2..=4);
            let entry = |rng: &mut ChaCha8Rng| -> MaxPlus {
                match rng.random_range(0..4) {
                    0 => MaxPlus::ZERO,
                    1 => MaxPlus::finite(0),
                    2 => MaxPlus::finite(1),
                    _ => MaxPlus::finite(2),
                }
            };
            let a = MaxPlusMatrix::from_fn(p, d, |_, _| entry(&mut rng));
            let b = MaxPlusMatrix::from_fn(p, d, |_, _| entry(&mut rng));
            let sys = TropicalIneqSystem::new(a, b).unwrap();
            let y = TropicalVector::new((0..d).map(|_| entry(&mut rng)).collect());
            if y.is_zero_vector() || !sys.member(&y).unwrap() {
                continue;
            }
            assert_eq!(
                sys.is_extreme(&y).unwrap(),
                is_extreme_unrestricted(&sys, &y),
                "sys {sys:?} y {y:?}"
            );
            compared += 1;
        }
    }
}

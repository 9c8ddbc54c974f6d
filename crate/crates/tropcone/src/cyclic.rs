//! Signed cyclic polyhedral cones and their polars.
//!
//! A [`SignedCyclicSpec`] is a sign pattern together with a strictly
//! increasing integer sequence `t`. Its coefficient matrix has entry
//! `(i, j)` equal to the sign times the tropical power `j * t_i`
//! (0-based column). The polar is the tropical inequality system whose
//! left side collects the negative entries and whose right side the
//! positive ones.
//!
//! Extreme rays of the polar are produced in two independent ways:
//! [`SignedCyclicSpec::enumerate_extreme_rays`] walks the tropically
//! allowed lattice paths and evaluates the Cramer solution along each,
//! while [`SignedCyclicSpec::oracle_extreme_rays`] ignores path
//! combinatorics entirely, generating a candidate from *every* index
//! pair and keeping the ones that pass membership and the extremality
//! criterion. Their agreement is the crate's central cross-check.
//!
//! ```
//! use tropcone::{SignPattern, SignedCyclicSpec};
//!
//! let pattern = SignPattern::parse("+-+\n+-+\n")?;
//! let spec = SignedCyclicSpec::with_default_t(pattern);
//! let rays = spec.enumerate_extreme_rays()?;
//! assert_eq!(rays.len(), 5);
//! assert_eq!(rays[2].ray.to_string(), "(1, 1, 0)");
//! # Ok::<(), tropcone::Error>(())
//! ```

use std::collections::BTreeSet;

use serde_json::json;

use crate::cone::{TropicalIneqSystem, TropicalVector};
use crate::linalg::{self, IndexPair, MaxPlusMatrix, SignedMatrix};
use crate::paths::{self, LatticePath, SignPattern};
use crate::semiring::{MaxPlus, SignedScalar};
use crate::{Error, Result};

/// Cell-count guard for the brute-force oracle.
pub const ORACLE_GUARD: usize = 20;

/// Dimension up to which enumerated rays are re-verified against the
/// extremality criterion.
const SELF_CHECK_DIM: usize = 16;

/// A signed cyclic cone specification: sign pattern plus generator
/// parameters `t_1 < t_2 < ... < t_p` (finite).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedCyclicSpec {
    pattern: SignPattern,
    t: Vec<i64>,
}

impl SignedCyclicSpec {
    pub fn new(pattern: SignPattern, t: Vec<i64>) -> Result<Self> {
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
        Ok(SignedCyclicSpec { pattern, t })
    }

    /// The default parameters `t_i = i - 1`.
    pub fn with_default_t(pattern: SignPattern) -> Self {
        let t = (0..pattern.p() as i64).collect();
        SignedCyclicSpec { pattern, t }
    }

    pub fn pattern(&self) -> &SignPattern {
        &self.pattern
    }

    pub fn t(&self) -> &[i64] {
        &self.t
    }

    fn entry_modulus(&self, i: usize, j: usize) -> Result<MaxPlus> {
        let v = (j as i64).checked_mul(self.t[i]).ok_or(Error::Overflow)?;
        Ok(MaxPlus::finite(v))
    }

    /// The full coefficient matrix over the symmetrized semiring.
    pub fn matrix(&self) -> Result<SignedMatrix> {
        let (p, d) = (self.pattern.p(), self.pattern.d());
        let mut data = Vec::with_capacity(p * d);
        for i in 0..p {
            for j in 0..d {
                let m = self.entry_modulus(i, j)?;
                data.push(if self.pattern.is_negative(i, j) {
                    SignedScalar::neg(m)
                } else {
                    SignedScalar::pos(m)
                });
            }
        }
        SignedMatrix::new(p, d, data)
    }

    /// The polar system: negative entries on the left, positive on the
    /// right, so membership reads `C^- x <= C^+ x`. Supports are disjoint
    /// by construction.
    pub fn build_polar(&self) -> Result<TropicalIneqSystem> {
        let (p, d) = (self.pattern.p(), self.pattern.d());
        let mut lhs = Vec::with_capacity(p * d);
        let mut rhs = Vec::with_capacity(p * d);
        for i in 0..p {
            for j in 0..d {
                let m = self.entry_modulus(i, j)?;
                if self.pattern.is_negative(i, j) {
                    lhs.push(m);
                    rhs.push(MaxPlus::ZERO);
                } else {
                    lhs.push(MaxPlus::ZERO);
                    rhs.push(m);
                }
            }
        }
        TropicalIneqSystem::new(
            MaxPlusMatrix::new(p, d, lhs)?,
            MaxPlusMatrix::new(p, d, rhs)?,
        )
    }

    /// The extreme-ray representative attached to a tropically allowed
    /// path: the Cramer solution on the path's columns, `-inf` off them.
    /// The last support coordinate is normalized to `0`.
    pub fn path_to_ray(&self, path: &LatticePath) -> Result<TropicalVector> {
        if !paths::is_tropically_allowed(path, &self.pattern)? {
            return Err(Error::PathNotAllowed);
        }
        let ij = IndexPair::from(path);
        let z =
            linalg::cramer_solution(&self.pattern, &self.t, &ij)?.ok_or(Error::PathNotAllowed)?;
        Ok(self.embed(&ij, &z))
    }

    fn embed(&self, ij: &IndexPair, z: &[i64]) -> TropicalVector {
        let mut coords = vec![MaxPlus::ZERO; self.pattern.d()];
        for (r, &j) in ij.cols().iter().enumerate() {
            coords[j] = MaxPlus::finite(z[r]);
        }
        TropicalVector::new(coords)
    }

    /// All extreme rays of the polar, one per tropically allowed path, in
    /// the paths' lexicographic order. Every produced ray is re-checked
    /// against the polar; a failure signals a bug, not bad input.
    pub fn enumerate_extreme_rays(&self) -> Result<Vec<ExtremeRay>> {
        let polar = self.build_polar()?;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for path in paths::enumerate_tropical_paths(&self.pattern)? {
            let ray = self.path_to_ray(&path)?;
            if !polar.member(&ray)? {
                return Err(Error::Internal(format!(
                    "ray {ray} from {path:?} fails membership"
                )));
            }
            if self.pattern.d() <= SELF_CHECK_DIM && !polar.is_extreme(&ray)? {
                return Err(Error::Internal(format!(
                    "ray {ray} from {path:?} fails extremality"
                )));
            }
            if !seen.insert(ray.canonicalized()) {
                return Err(Error::Internal(format!(
                    "duplicate ray {ray} from {path:?}"
                )));
            }
            out.push(ExtremeRay { path, ray });
        }
        Ok(out)
    }

    /// Brute-force reference for the extreme-ray set: tries *every*
    /// row/column index pair regardless of path conditions, embeds the
    /// feasible Cramer solutions, and keeps the projectively distinct
    /// candidates that pass membership and extremality. Sorted by
    /// coordinates.
    pub fn oracle_extreme_rays(&self) -> Result<Vec<TropicalVector>> {
        use itertools::Itertools;
        let (p, d) = (self.pattern.p(), self.pattern.d());
        let cells = p * d;
        if cells > ORACLE_GUARD {
            return Err(Error::GuardExceeded {
                what: "oracle cells",
                got: cells as u64,
                limit: ORACLE_GUARD as u64,
            });
        }
        let polar = self.build_polar()?;
        let mut kept = BTreeSet::new();
        for k in 0..=p.min(d - 1) {
            for cols in (0..d).combinations(k + 1) {
                for rows in (0..p).combinations(k) {
                    let ij = IndexPair::new(rows, cols.clone())?;
                    let Some(z) = linalg::cramer_solution(&self.pattern, &self.t, &ij)? else {
                        continue;
                    };
                    let candidate = self.embed(&ij, &z).canonicalized();
                    if kept.contains(&candidate) {
                        continue;
                    }
                    if polar.member(&candidate)? && polar.is_extreme(&candidate)? {
                        kept.insert(candidate);
                    }
                }
            }
        }
        Ok(kept.into_iter().collect())
    }
}

/// An extreme ray together with the lattice path it came from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtremeRay {
    pub path: LatticePath,
    pub ray: TropicalVector,
}

impl ExtremeRay {
    /// JSON form: `{"coords": [...], "path": {"I": [...], "J": [...]}}`
    /// with `"-inf"` for bottom coordinates and 1-based path indices.
    pub fn to_json(&self) -> serde_json::Value {
        let coords: Vec<serde_json::Value> = self
            .ray
            .coords()
            .iter()
            .map(|c| match c.value() {
                Some(v) => json!(v),
                None => json!("-inf"),
            })
            .collect();
        let one_based = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
        json!({
            "coords": coords,
            "path": {
                "I": one_based(self.path.rows()),
                "J": one_based(self.path.cols()),
            }
        })
    }
}

/// JSON array for a full enumeration result.
pub fn rays_to_json(rays: &[ExtremeRay]) -> serde_json::Value {
    serde_json::Value::Array(rays.iter().map(ExtremeRay::to_json).collect())
}

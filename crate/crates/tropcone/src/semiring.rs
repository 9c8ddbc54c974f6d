//! Exact max-plus arithmetic and its symmetrization.
//!
//! [`MaxPlus`] is the max-plus semiring over 64-bit integers: addition is
//! `max`, multiplication is integer addition, the zero element is the
//! bottom element `-inf` and the unit is `0`. [`SignedScalar`] extends it
//! with a sign tag (positive, negative or balanced), three copies of the
//! semiring glued at the zero element. Balanced elements absorb ties
//! between opposite signs, which is what makes sign-aware elimination
//! (the balance relation) work without an additive inverse.
//!
//! Moduli are exact integers, never floats: every quantity that appears
//! downstream is an integer combination of the generator parameters, and
//! ray comparisons must be exact. Multiplicative overflow is reported as
//! an error, not wrapped.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A max-plus scalar: a finite integer or the bottom element `-inf`.
///
/// Ordering is total with `-inf` smallest, so `a.max(b)` is the tropical
/// sum.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MaxPlus(Option<i64>);

impl MaxPlus {
    /// The zero element `-inf` (neutral for tropical sum, absorbing for
    /// tropical product).
    pub const ZERO: MaxPlus = MaxPlus(None);
    /// The unit element `0`.
    pub const ONE: MaxPlus = MaxPlus(Some(0));

    pub fn finite(v: i64) -> Self {
        MaxPlus(Some(v))
    }

    pub fn value(self) -> Option<i64> {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.is_none()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_some()
    }

    /// Tropical sum: `max`.
    pub fn plus(self, rhs: Self) -> Self {
        self.max(rhs)
    }

    /// Tropical product: integer addition, `-inf` absorbing.
    pub fn times(self, rhs: Self) -> Result<Self> {
        match (self.0, rhs.0) {
            (Some(a), Some(b)) => a.checked_add(b).map(Self::finite).ok_or(Error::Overflow),
            _ => Ok(Self::ZERO),
        }
    }

    /// Tropical power: `e`-fold product, i.e. `e * v`.
    pub fn pow(self, e: u32) -> Result<Self> {
        match self.0 {
            None => Ok(if e == 0 { Self::ONE } else { Self::ZERO }),
            Some(v) => v
                .checked_mul(e as i64)
                .map(Self::finite)
                .ok_or(Error::Overflow),
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.0 {
            Some(v) => v as f64,
            None => f64::NEG_INFINITY,
        }
    }
}

impl From<i64> for MaxPlus {
    fn from(v: i64) -> Self {
        MaxPlus::finite(v)
    }
}

impl fmt::Display for MaxPlus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "-inf"),
        }
    }
}

impl fmt::Debug for MaxPlus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MaxPlus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-inf" {
            return Ok(MaxPlus::ZERO);
        }
        s.parse::<i64>()
            .map(MaxPlus::finite)
            .map_err(|e| Error::InvalidArgument(format!("bad max-plus scalar {s:?}: {e}")))
    }
}

/// Sign tag of a [`SignedScalar`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Pos,
    Neg,
    Bal,
    Zero,
}

impl Sign {
    /// Multiplicative sign table: `Zero` absorbs, `Bal` absorbs everything
    /// nonzero, otherwise the usual rule of signs.
    pub fn times(self, rhs: Sign) -> Sign {
        use Sign::*;
        match (self, rhs) {
            (Zero, _) | (_, Zero) => Zero,
            (Bal, _) | (_, Bal) => Bal,
            (Pos, Pos) | (Neg, Neg) => Pos,
            (Pos, Neg) | (Neg, Pos) => Neg,
        }
    }

    pub fn negated(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
            s => s,
        }
    }
}

/// An element of the symmetrized max-plus semiring: a modulus together
/// with a sign tag. The representation makes the gluing invariant
/// (`sign == Zero` iff `modulus == -inf`) unrepresentable otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignedScalar {
    Zero,
    Pos(i64),
    Neg(i64),
    Bal(i64),
}

impl SignedScalar {
    /// The unit `0` with positive sign.
    pub const ONE: SignedScalar = SignedScalar::Pos(0);
    /// The negated unit.
    pub const MINUS_ONE: SignedScalar = SignedScalar::Neg(0);

    /// Builds an element from a sign and a modulus; any sign with modulus
    /// `-inf` collapses to the zero element.
    pub fn from_parts(sign: Sign, modulus: MaxPlus) -> Self {
        match (sign, modulus.value()) {
            (_, None) | (Sign::Zero, _) => SignedScalar::Zero,
            (Sign::Pos, Some(v)) => SignedScalar::Pos(v),
            (Sign::Neg, Some(v)) => SignedScalar::Neg(v),
            (Sign::Bal, Some(v)) => SignedScalar::Bal(v),
        }
    }

    pub fn pos(modulus: MaxPlus) -> Self {
        Self::from_parts(Sign::Pos, modulus)
    }

    pub fn neg(modulus: MaxPlus) -> Self {
        Self::from_parts(Sign::Neg, modulus)
    }

    pub fn bal(modulus: MaxPlus) -> Self {
        Self::from_parts(Sign::Bal, modulus)
    }

    pub fn modulus(self) -> MaxPlus {
        match self {
            SignedScalar::Zero => MaxPlus::ZERO,
            SignedScalar::Pos(v) | SignedScalar::Neg(v) | SignedScalar::Bal(v) => {
                MaxPlus::finite(v)
            }
        }
    }

    pub fn sign(self) -> Sign {
        match self {
            SignedScalar::Zero => Sign::Zero,
            SignedScalar::Pos(_) => Sign::Pos,
            SignedScalar::Neg(_) => Sign::Neg,
            SignedScalar::Bal(_) => Sign::Bal,
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, SignedScalar::Zero)
    }

    /// Positive or negative (not balanced, not zero).
    pub fn is_signed(self) -> bool {
        matches!(self, SignedScalar::Pos(_) | SignedScalar::Neg(_))
    }

    pub fn is_balanced(self) -> bool {
        matches!(self, SignedScalar::Bal(_))
    }

    /// Symmetrized sum: the larger modulus wins; on ties the signs are
    /// merged, opposite or balanced operands producing a balanced result.
    pub fn plus(self, rhs: Self) -> Self {
        use std::cmp::Ordering::*;
        match self.modulus().cmp(&rhs.modulus()) {
            Greater => self,
            Less => rhs,
            Equal => {
                if self.is_zero() {
                    return SignedScalar::Zero;
                }
                let sign = match (self.sign(), rhs.sign()) {
                    (a, b) if a == b => a,
                    _ => Sign::Bal,
                };
                Self::from_parts(sign, self.modulus())
            }
        }
    }

    /// Symmetrized product: moduli add, signs multiply (both morphisms).
    pub fn times(self, rhs: Self) -> Result<Self> {
        Ok(Self::from_parts(
            self.sign().times(rhs.sign()),
            self.modulus().times(rhs.modulus())?,
        ))
    }

    /// The involution: swaps positive and negative, fixes balanced
    /// elements and zero.
    pub fn negated(self) -> Self {
        match self {
            SignedScalar::Pos(v) => SignedScalar::Neg(v),
            SignedScalar::Neg(v) => SignedScalar::Pos(v),
            other => other,
        }
    }

    /// Symmetrized difference `x (+) (-y)`.
    pub fn minus(self, rhs: Self) -> Self {
        self.plus(rhs.negated())
    }

    /// The balance relation: `x` and `y` balance iff their difference is
    /// balanced or zero. Reflexive and symmetric but not transitive; on
    /// signed elements it coincides with equality.
    pub fn balances(self, rhs: Self) -> bool {
        !self.minus(rhs).is_signed()
    }
}

impl From<MaxPlus> for SignedScalar {
    fn from(m: MaxPlus) -> Self {
        SignedScalar::pos(m)
    }
}

impl std::ops::Neg for SignedScalar {
    type Output = SignedScalar;

    fn neg(self) -> SignedScalar {
        self.negated()
    }
}

impl fmt::Display for SignedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignedScalar::Zero => write!(f, "-inf"),
            SignedScalar::Pos(v) => write!(f, "{v}"),
            SignedScalar::Neg(v) => write!(f, "~{v}"),
            SignedScalar::Bal(v) => write!(f, "{v}*"),
        }
    }
}

impl fmt::Debug for SignedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SignedScalar {
    type Err = Error;

    /// Accepts `-inf`, plain integers (positive sign), `~m` or `⊖m`
    /// (negative sign) and `m*` or `m•` (balanced).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-inf" {
            return Ok(SignedScalar::Zero);
        }
        if let Some(rest) = s.strip_prefix('~').or_else(|| s.strip_prefix('⊖')) {
            return Ok(SignedScalar::neg(rest.parse::<MaxPlus>()?));
        }
        if let Some(rest) = s.strip_suffix('*').or_else(|| s.strip_suffix('•')) {
            return Ok(SignedScalar::bal(rest.parse::<MaxPlus>()?));
        }
        Ok(SignedScalar::pos(s.parse::<MaxPlus>()?))
    }
}

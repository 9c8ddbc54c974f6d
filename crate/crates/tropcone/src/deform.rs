//! Floating-point checks of the exponential deformation bridge.
//!
//! `E_beta` sends a max-plus vector to the positive orthant coordinate
//! by coordinate via `exp(beta * x_j)` (bottom maps to `0`); `L_beta` is
//! its inverse. A member of a tropical system maps into the classical
//! cone obtained by replacing each max with a scaled sum, which is what
//! [`deformed_member`] verifies. Everything here is double precision
//! with explicit slack; no exact claim depends on this module.

use crate::cone::{TropicalIneqSystem, TropicalVector};
use crate::semiring::MaxPlus;
use crate::{Error, Result};

/// Slack for the floating-point comparisons.
pub const SLACK: f64 = 1e-9;

/// `exp(beta * x)` coordinatewise; `-inf` maps to `0`.
pub fn e_beta(x: &TropicalVector, beta: f64) -> Vec<f64> {
    x.coords()
        .iter()
        .map(|c| match c.value() {
            Some(v) => (beta * v as f64).exp(),
            None => 0.0,
        })
        .collect()
}

/// `log(y) / beta` coordinatewise; `0` maps to `-inf`. Negative entries
/// are rejected.
pub fn l_beta(y: &[f64], beta: f64) -> Result<Vec<f64>> {
    y.iter()
        .map(|&v| {
            if v < 0.0 {
                Err(Error::InvalidArgument(format!(
                    "l_beta needs nonnegative input, got {v}"
                )))
            } else if v == 0.0 {
                Ok(f64::NEG_INFINITY)
            } else {
                Ok(v.ln() / beta)
            }
        })
        .collect()
}

/// Stable `log sum_j exp(beta * v_j)`; `-inf` when every entry is
/// `-inf`.
fn log_sum_exp(values: impl Iterator<Item = f64> + Clone, beta: f64) -> f64 {
    let m = values
        .clone()
        .fold(f64::NEG_INFINITY, |acc, v| acc.max(beta * v));
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values.map(|v| (beta * v - m).exp()).sum();
    m + sum.ln()
}

/// Verifies the log-sum-exp sandwich
/// `max v <= beta^{-1} log sum exp(beta v) <= beta^{-1} log d + max v`
/// within [`SLACK`].
pub fn lse_sandwich_check(v: &[f64], beta: f64) -> bool {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mid = log_sum_exp(v.iter().copied(), beta) / beta;
    if max == f64::NEG_INFINITY {
        return true;
    }
    let d = v.len() as f64;
    max <= mid + SLACK && mid <= d.ln() / beta + max + SLACK
}

/// Whether `E_beta(x)` satisfies the deformed system: per row,
/// `(1/d) sum_j exp(beta a_ij) y_j <= sum_j exp(beta b_ij) y_j`,
/// evaluated in log space with [`SLACK`]. Tropical members satisfy this
/// for every `beta > 0`.
pub fn deformed_member(sys: &TropicalIneqSystem, x: &TropicalVector, beta: f64) -> Result<bool> {
    if x.dim() != sys.d() {
        return Err(Error::DimensionMismatch(format!(
            "vector has dimension {}, system has {}",
            x.dim(),
            sys.d()
        )));
    }
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::InvalidArgument("beta must be positive".into()));
    }
    let d = sys.d() as f64;
    let xs = x.to_f64();
    let row_lse = |row: &[MaxPlus]| {
        log_sum_exp(
            row.iter()
                .zip(&xs)
                .map(|(a, &v)| a.to_f64() + v)
                .collect::<Vec<_>>()
                .into_iter(),
            beta,
        )
    };
    for i in 0..sys.p() {
        let lhs = row_lse(sys.lhs().row(i));
        let rhs = row_lse(sys.rhs().row(i));
        if lhs == f64::NEG_INFINITY {
            continue;
        }
        if rhs == f64::NEG_INFINITY || lhs - d.ln() > rhs + SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::SignedCyclicSpec;
    use crate::paths::SignPattern;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    const BOT: Option<i64> = None;

    fn v(vals: &[Option<i64>]) -> TropicalVector {
        TropicalVector::from_options(vals)
    }

    #[test]
    fn e_beta_examples() {
        let y = e_beta(&v(&[Some(0), BOT]), 1.0);
        assert_eq!(y, vec![1.0, 0.0]);
    }

    #[test]
    fn round_trip() {
        let x = v(&[Some(1), Some(1), Some(0), BOT]);
        for beta in [0.5, 2.0, 7.0] {
            let back = l_beta(&e_beta(&x, beta), beta).unwrap();
            for (orig, round) in x.to_f64().iter().zip(&back) {
                if orig.is_finite() {
                    assert!((orig - round).abs() < 1e-12);
                } else {
                    assert_eq!(*round, f64::NEG_INFINITY);
                }
            }
        }
        assert!(l_beta(&[0.5, -0.1], 1.0).is_err());
    }

    #[test]
    fn e_beta_is_a_scaling_morphism() {
        let x = v(&[Some(2), Some(-1), BOT]);
        let beta = 3.0;
        let lambda = 4i64;
        let scaled = e_beta(&x.scaled(lambda).unwrap(), beta);
        let factor = (beta * lambda as f64).exp();
        for (s, e) in scaled.iter().zip(e_beta(&x, beta)) {
            assert!((s - factor * e).abs() <= 1e-9 * s.abs().max(1.0));
        }
    }

    #[test]
    fn sandwich_examples() {
        // All-zero vector: the right inequality is tight.
        assert!(lse_sandwich_check(&[0.0; 6], 1.0));
        // Single finite entry: all three quantities coincide.
        assert!(lse_sandwich_check(
            &[0.0, f64::NEG_INFINITY, f64::NEG_INFINITY],
            2.0
        ));
    }

    #[test]
    fn sandwich_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let d = rng.random_range(1..=8);
            let vals: Vec<f64> = (0..d).map(|_| rng.random_range(-30.0..30.0)).collect();
            for beta in [0.5, 1.0, 10.0] {
                assert!(lse_sandwich_check(&vals, beta), "{vals:?} beta={beta}");
            }
        }
    }

    #[test]
    fn deformed_membership_of_reference_rays() {
        let spec = SignedCyclicSpec::with_default_t(SignPattern::parse("+-+\n+-+\n").unwrap());
        let polar = spec.build_polar().unwrap();
        for er in spec.enumerate_extreme_rays().unwrap() {
            for beta in [1.0, 2.0, 5.0, 16.0] {
                assert!(deformed_member(&polar, &er.ray, beta).unwrap());
            }
        }
        // The all-bottom vector maps to the origin.
        assert!(deformed_member(&polar, &v(&[BOT, BOT, BOT]), 1.0).unwrap());
    }

    #[test]
    fn violation_beyond_margin_is_detected() {
        use crate::linalg::MaxPlusMatrix;
        // Single inequality x_1 <= x_2, violated by margin 5.
        let lhs = MaxPlusMatrix::new(1, 2, vec![MaxPlus::finite(0), MaxPlus::ZERO]).unwrap();
        let rhs = MaxPlusMatrix::new(1, 2, vec![MaxPlus::ZERO, MaxPlus::finite(0)]).unwrap();
        let sys = TropicalIneqSystem::new(lhs, rhs).unwrap();
        let x = v(&[Some(5), Some(0)]);
        // Margin 5 > log(2) / beta already at beta = 1.
        assert!(!deformed_member(&sys, &x, 1.0).unwrap());
        assert!(!deformed_member(&sys, &x, 16.0).unwrap());
        // Sanity: an actual member stays inside.
        assert!(deformed_member(&sys, &v(&[Some(0), Some(0)]), 1.0).unwrap());
    }
}

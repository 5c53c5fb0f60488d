//! PSLQ integer-relation detection over balls.
//!
//! Classic fixed-point formulation: inputs are scaled to integers at a
//! working precision derived from the requested coefficient bound, the
//! H-matrix is reduced with gamma = sqrt(4/3) + 1/100, and the run ends
//! either with a candidate relation (min |y| below tolerance) or with a
//! certified statement that no relation with coefficients below the bound
//! exists (reciprocal of the largest H entry). Candidates are only
//! surfaced after their combination ball is checked to contain zero.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ball::Ball;
use crate::dyadic::Dyadic;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PslqError {
    #[error("pslq needs at least two values, got {0}")]
    TooFewValues(usize),
    #[error("value {index} has radius above 2^-{required_bits}; supply more precision")]
    InsufficientPrecision { index: usize, required_bits: u64 },
    #[error("value {0} is a ball containing zero: sign is ambiguous")]
    DegenerateInput(usize),
    #[error("precision exhausted during reduction (H diagonal vanished)")]
    PrecisionExhausted,
    #[error("no decision within {0} iterations")]
    IterationLimit(usize),
    #[error("candidate relation failed the exact zero check; more precision needed")]
    CandidateRejected,
}

/// A purported integer dependence: not all coefficients zero, and the
/// combination ball contains zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCandidate {
    pub coefficients: Vec<BigInt>,
    /// max |c_i|
    pub norm: BigInt,
    pub residual: Ball,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PslqOutcome {
    Candidate(RelationCandidate),
    /// No integer relation with all |c_i| below this bound exists.
    NoRelationBelow(BigInt),
}

const GUARD_BITS: u64 = 64;

/// Radius each input ball must reach: 2^-(n * max_coeff_bits + 64).
pub fn required_radius_bits(n: usize, max_coeff_bits: u32) -> u64 {
    n as u64 * max_coeff_bits as u64 + 64
}

fn mulfix(a: &BigInt, b: &BigInt, wp: u64) -> BigInt {
    floor_shift(&(a * b), wp)
}

fn floor_shift(x: &BigInt, s: u64) -> BigInt {
    if x.is_negative() {
        let bias = (BigInt::one() << s) - BigInt::one();
        let shifted: BigInt = (-x + bias) >> s;
        -shifted
    } else {
        x >> s
    }
}

/// round(a / b) to a plain integer, fixed-point inputs.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two_a = a << 1u8;
    let q = &two_a / b; // 2a/b truncated toward zero
    // round-half-away-from-zero on a/b
    if q.is_negative() {
        -((-q + BigInt::one()) >> 1u8)
    } else {
        (q + BigInt::one()) >> 1u8
    }
}

fn sqrt_fixed(a: &BigInt, wp: u64) -> BigInt {
    assert!(!a.is_negative());
    (a << wp).sqrt()
}

/// Exact linear combination of the input balls.
pub fn combination_ball(coeffs: &[BigInt], values: &[Ball], wp: u64) -> Ball {
    let mut acc = Ball::zero();
    for (c, v) in coeffs.iter().zip(values) {
        if c.is_zero() {
            continue;
        }
        let term = Ball::new(
            v.midpoint().mul_bigint(c),
            v.radius().mul_bigint(&c.abs()),
        );
        acc = acc.add(&term, wp);
    }
    acc
}

/// Detect an integer relation among the values, or certify that none
/// exists with coefficients below 2^max_coeff_bits.
pub fn pslq(values: &[Ball], max_coeff_bits: u32) -> Result<PslqOutcome, PslqError> {
    let n = values.len();
    if n < 2 {
        return Err(PslqError::TooFewValues(n));
    }
    let required = required_radius_bits(n, max_coeff_bits);
    for (i, v) in values.iter().enumerate() {
        if v.contains_zero() {
            return Err(PslqError::DegenerateInput(i));
        }
        if !v.radius_le_pow2(-(required as i64)) {
            return Err(PslqError::InsufficientPrecision {
                index: i,
                required_bits: required,
            });
        }
    }
    let wp = required + 128;
    let max_steps = 256 * n * max_coeff_bits as usize;
    let tol = BigInt::one() << GUARD_BITS; // |y| < 2^(GUARD-wp)
    let max_coeff = BigInt::one() << max_coeff_bits;

    let x: Vec<BigInt> = values.iter().map(|v| v.midpoint().to_fixed(wp)).collect();
    let min_x = x.iter().map(|v| v.abs()).min().unwrap();
    if min_x < (&tol << 8u8) {
        // magnitudes this close to the tolerance make the run meaningless
        return Err(PslqError::InsufficientPrecision {
            index: 0,
            required_bits: required,
        });
    }

    // gamma = sqrt(4/3) + 1/100
    let four_thirds = (BigInt::one() << wp) * BigInt::from(4) / BigInt::from(3);
    let gamma: BigInt = sqrt_fixed(&four_thirds, wp) + (BigInt::one() << wp) / BigInt::from(100);

    // partial norms s_k = sqrt(sum_{i>=k} x_i^2)
    let mut s = vec![BigInt::zero(); n];
    for k in 0..n {
        let mut t = BigInt::zero();
        for xi in &x[k..] {
            t += mulfix(xi, xi, wp);
        }
        s[k] = sqrt_fixed(&t, wp);
    }
    let t0 = s[0].clone();
    if t0.is_zero() {
        return Err(PslqError::PrecisionExhausted);
    }
    let mut y: Vec<BigInt> = x.iter().map(|xi| (xi << wp) / &t0).collect();
    for sk in s.iter_mut() {
        *sk = (&*sk << wp) / &t0;
    }

    // H: n x (n-1)
    let mut h = vec![vec![BigInt::zero(); n - 1]; n];
    for i in 0..n {
        for j in 0..n - 1 {
            if i < j {
                continue;
            }
            if i == j {
                if s[j].is_zero() {
                    return Err(PslqError::PrecisionExhausted);
                }
                h[i][j] = (&s[j + 1] << wp) / &s[j];
            } else {
                let denom = mulfix(&s[j], &s[j + 1], wp);
                if denom.is_zero() {
                    return Err(PslqError::PrecisionExhausted);
                }
                h[i][j] = (-(mulfix(&y[i], &y[j], wp)) << wp) / denom;
            }
        }
    }

    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut b = a.clone();

    // initial size reduction
    for i in 1..n {
        for j in (0..i.min(n - 1)).rev() {
            if h[j][j].is_zero() {
                continue;
            }
            let t = round_div(&h[i][j], &h[j][j]);
            if t.is_zero() {
                continue;
            }
            y[j] = &y[j] + &t * &y[i];
            for k in 0..=j {
                let d = &t * &h[j][k];
                h[i][k] -= d;
            }
            for k in 0..n {
                let da = &t * &a[j][k];
                a[i][k] -= da;
                let db = &t * &b[k][i];
                b[k][j] += db;
            }
        }
    }

    for _rep in 0..max_steps {
        // candidate?
        for i in 0..n {
            if y[i].abs() < tol {
                let mut vec: Vec<BigInt> = (0..n).map(|j| b[j][i].clone()).collect();
                if vec.iter().all(|v| v.is_zero()) {
                    continue;
                }
                let norm = vec.iter().map(|v| v.abs()).max().unwrap();
                if norm < max_coeff {
                    // canonical sign: first nonzero coefficient positive
                    if vec
                        .iter()
                        .find(|v| !v.is_zero())
                        .is_some_and(|v| v.is_negative())
                    {
                        for v in vec.iter_mut() {
                            *v = -&*v;
                        }
                    }
                    let residual = combination_ball(&vec, values, wp);
                    if !residual.contains_zero() {
                        return Err(PslqError::CandidateRejected);
                    }
                    return Ok(PslqOutcome::Candidate(RelationCandidate {
                        coefficients: vec,
                        norm,
                        residual,
                    }));
                }
            }
        }

        // certified lower bound for any relation norm: 1 / max |H_ij|,
        // shaved by 2^7 for fixed-point headroom
        let recnorm = h
            .iter()
            .flat_map(|row| row.iter())
            .map(|v| v.abs())
            .max()
            .unwrap();
        if !recnorm.is_zero() {
            let bound = floor_shift(&((BigInt::one() << (2 * wp)) / &recnorm), wp) >> 7u8;
            if bound >= max_coeff {
                return Ok(PslqOutcome::NoRelationBelow(max_coeff));
            }
        }

        // row with maximal gamma^(j+1) |H_jj|
        let mut m = 0usize;
        let mut szmax = BigInt::from(-1);
        let mut gpow = gamma.clone();
        for j in 0..n - 1 {
            let sz = &gpow * h[j][j].abs();
            if sz > szmax {
                szmax = sz;
                m = j;
            }
            gpow = mulfix(&gpow, &gamma, wp);
        }

        y.swap(m, m + 1);
        h.swap(m, m + 1);
        a.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }

        // corner rotation
        if m + 2 < n {
            let hm = h[m][m].clone();
            let hm1 = h[m][m + 1].clone();
            let t0 = sqrt_fixed(&(mulfix(&hm, &hm, wp) + mulfix(&hm1, &hm1, wp)), wp);
            if t0.is_zero() {
                return Err(PslqError::PrecisionExhausted);
            }
            let t1 = (&hm << wp) / &t0;
            let t2 = (&hm1 << wp) / &t0;
            for i in m..n {
                let t3 = h[i][m].clone();
                let t4 = h[i][m + 1].clone();
                h[i][m] = mulfix(&t1, &t3, wp) + mulfix(&t2, &t4, wp);
                h[i][m + 1] = mulfix(&t1, &t4, wp) - mulfix(&t2, &t3, wp);
            }
        }

        // size reduction below the swap
        for i in m + 1..n {
            for j in (0..=(i - 1).min(m + 1)).rev() {
                if h[j][j].is_zero() {
                    return Err(PslqError::PrecisionExhausted);
                }
                let t = round_div(&h[i][j], &h[j][j]);
                if t.is_zero() {
                    continue;
                }
                y[j] = &y[j] + &t * &y[i];
                for k in 0..=j {
                    let d = &t * &h[j][k];
                    h[i][k] -= d;
                }
                for k in 0..n {
                    let da = &t * &a[j][k];
                    a[i][k] -= da;
                    let db = &t * &b[k][i];
                    b[k][j] += db;
                }
            }
        }
    }
    Err(PslqError::IterationLimit(max_steps))
}

/// Re-check a candidate against evaluations at doubled precision: the
/// combination must still contain zero and its radius must not grow.
pub fn verify_candidate(cand: &RelationCandidate, values: &[Ball]) -> bool {
    let wp = 64
        + values
            .iter()
            .filter_map(|v| v.radius().magnitude_exp())
            .map(|e| -e)
            .max()
            .unwrap_or(128) as u64;
    let combo = combination_ball(&cand.coefficients, values, wp);
    combo.contains_zero() && combo.radius() <= cand.residual.radius()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::real_root_in;
    use crate::rat::Rational;

    fn golden_ratio(prec: u32) -> Ball {
        real_root_in(&[-1, -1, 1], 1, 2, prec)
    }

    #[test]
    fn phi_relation() {
        let prec = 200;
        let phi = golden_ratio(prec);
        let phi2 = phi.mul(&phi, prec as u64 + 16);
        let values = vec![Ball::one(), phi.clone(), phi2];
        let out = pslq(&values, 10).unwrap();
        match out {
            PslqOutcome::Candidate(c) => {
                assert_eq!(
                    c.coefficients,
                    vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1)]
                );
                assert!(c.residual.contains_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_recovery() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x5eed_0004);
        for _ in 0..15 {
            let p = rng.random_range(1..1000i64);
            let q = rng.random_range(1..1000i64);
            let g = num_integer::gcd(p, q);
            let (p, q) = (p / g, q / g);
            let r = Ball::from_rational(&Rational::new(p.into(), q.into()), 256);
            let values = vec![Ball::one(), r];
            match pslq(&values, 16).unwrap() {
                PslqOutcome::Candidate(c) => {
                    // c0 + c1 p/q = 0 -> (p, -q) up to scale; primitive
                    // result expected
                    assert_eq!(c.coefficients, vec![BigInt::from(p), BigInt::from(-q)]);
                }
                other => panic!("{p}/{q}: {other:?}"),
            }
        }
    }

    #[test]
    fn no_relation_for_sqrt2() {
        // sqrt(2) vs 1: no small relation (it is irrational); PSLQ must
        // certify absence below 2^16
        let s2 = real_root_in(&[-2, 0, 1], 1, 2, 300);
        let values = vec![Ball::one(), s2];
        match pslq(&values, 16).unwrap() {
            PslqOutcome::NoRelationBelow(b) => assert_eq!(b, BigInt::one() << 16u8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_and_precision_errors() {
        let z = Ball::zero();
        assert_eq!(
            pslq(&[Ball::one(), z], 10),
            Err(PslqError::DegenerateInput(1))
        );
        let coarse = Ball::one().widen_pow2(-10);
        assert!(matches!(
            pslq(&[Ball::one(), coarse], 16),
            Err(PslqError::InsufficientPrecision { .. })
        ));
        assert_eq!(pslq(&[Ball::one()], 10), Err(PslqError::TooFewValues(1)));
    }

    #[test]
    fn verify_candidate_detects_corruption() {
        let prec = 300;
        let phi = golden_ratio(prec);
        let phi2 = phi.mul(&phi, prec as u64 + 16);
        let values = vec![Ball::one(), phi.clone(), phi2];
        let PslqOutcome::Candidate(c) = pslq(&values, 10).unwrap() else {
            panic!("expected candidate");
        };
        // doubled precision
        let phi_hi = golden_ratio(2 * prec);
        let phi2_hi = phi_hi.mul(&phi_hi, 2 * prec as u64 + 16);
        let hi = vec![Ball::one(), phi_hi, phi2_hi];
        assert!(verify_candidate(&c, &hi));

        let mut bad = c.clone();
        bad.coefficients[0] += 1;
        assert!(!verify_candidate(&bad, &hi));
    }
}

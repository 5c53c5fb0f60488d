//! Output rendering: guaranteed decimal digits and exact dyadic forms.

use num_bigint::BigInt;
use num_traits::{Num, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ball::Ball;
use crate::dyadic::Dyadic;

/// Decimal rendering of a ball: only digits shared by every point of the
/// ball are printed, with a trailing `…`. A ball straddling zero prints
/// as `0…` (no digit is certain).
pub fn guaranteed_decimal(ball: &Ball) -> String {
    if ball.radius().is_zero() && ball.midpoint().is_zero() {
        return "0".into();
    }
    if ball.contains_zero() {
        return "0…".into();
    }
    let negative = ball.midpoint().is_negative();
    let (lo, hi) = if negative {
        (ball.upper().abs(), ball.lower().abs())
    } else {
        (ball.lower(), ball.upper())
    };

    let digits_cap = match ball.radius().magnitude_exp() {
        Some(e) => (((-e).max(0) as f64) * 0.30103).floor() as u32 + 1,
        None => 64, // exact midpoint: render generously
    };
    let digits_cap = digits_cap.min(2000);

    let mut d = digits_cap;
    loop {
        let a = lo.floor_scaled_pow10(d);
        let b = hi.floor_scaled_pow10(d);
        if a == b {
            // an exact midpoint that terminates within d digits carries
            // no trailing ellipsis
            let exact = ball.radius().is_zero()
                && lo.to_rational() * crate::rat::Rational::from_integer(BigInt::from(10u32).pow(d))
                    == crate::rat::Rational::from_integer(a.clone());
            let mut s = place_decimal_point(&a, d);
            if negative {
                s.insert(0, '-');
            }
            if !exact {
                s.push('…');
            }
            return s;
        }
        if d == 0 {
            // a decimal boundary sits inside the ball at every scale
            return "0…".into();
        }
        d -= 1;
    }
}

fn place_decimal_point(value: &BigInt, decimals: u32) -> String {
    let s = value.to_string();
    debug_assert!(!s.starts_with('-'));
    if decimals == 0 {
        return s;
    }
    let d = decimals as usize;
    if s.len() <= d {
        format!("0.{}{}", "0".repeat(d - s.len()), s)
    } else {
        format!("{}.{}", &s[..s.len() - d], &s[s.len() - d..])
    }
}

/// Lossless ball representation: hex midpoint mantissa, binary exponent,
/// radius as a power of two (rounded up when stored).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BallRepr {
    pub mid_mant_hex: String,
    pub mid_exp: i64,
    /// None means an exact midpoint (radius zero).
    pub radius_exp: Option<i64>,
}

impl BallRepr {
    pub fn from_ball(ball: &Ball) -> BallRepr {
        let radius_exp = if ball.radius().is_zero() {
            None
        } else {
            // smallest e with radius <= 2^e
            let r = ball.radius();
            let e = r.magnitude_exp().expect("nonzero");
            Some(if r == &Dyadic::pow2(e - 1) { e - 1 } else { e })
        };
        BallRepr {
            mid_mant_hex: ball.midpoint().mantissa().to_str_radix(16),
            mid_exp: ball.midpoint().exponent(),
            radius_exp,
        }
    }

    pub fn to_ball(&self) -> Option<Ball> {
        let mant = BigInt::from_str_radix(&self.mid_mant_hex, 16).ok()?;
        let rad = match self.radius_exp {
            None => Dyadic::zero(),
            Some(e) => Dyadic::pow2(e),
        };
        Some(Ball::new(Dyadic::new(mant, self.mid_exp), rad))
    }

    /// `0x<mant>p<exp> ± 2^<e>` — the exact dyadic form for the CLI flag.
    pub fn display(&self) -> String {
        let rad = match self.radius_exp {
            None => "exact".into(),
            Some(e) => format!("± 2^{e}"),
        };
        format!("0x{}p{} {}", self.mid_mant_hex, self.mid_exp, rad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn decimal_digits_guaranteed() {
        // 1/3 at 80 bits: ~24 digits are certain
        let b = Ball::from_rational(&rat(1, 3), 80);
        let s = guaranteed_decimal(&b);
        assert!(s.starts_with("0.3333333333"), "{s}");
        assert!(s.ends_with('…'));
        // every printed digit must match the true expansion of 1/3
        let digits = s.trim_start_matches("0.").trim_end_matches('…');
        assert!(digits.chars().all(|c| c == '3'));
        assert!(digits.len() >= 20);
    }

    #[test]
    fn decimal_of_negative_and_zero() {
        let b = Ball::from_rational(&rat(-22, 7), 60);
        let s = guaranteed_decimal(&b);
        assert!(s.starts_with("-3.142857142857"), "{s}");
        assert_eq!(guaranteed_decimal(&Ball::zero()), "0");
        let straddle = Ball::zero().widen_pow2(-5);
        assert_eq!(guaranteed_decimal(&straddle), "0…");
    }

    #[test]
    fn decimal_exact_dyadic() {
        let b = Ball::exact(Dyadic::new(BigInt::from(5), -2)); // 1.25
        assert_eq!(guaranteed_decimal(&b), "1.25");
        let i = Ball::from_i64(42);
        assert_eq!(guaranteed_decimal(&i), "42");
    }

    #[test]
    fn ball_repr_roundtrip_is_bit_identical() {
        let b = Ball::from_rational(&rat(355, 113), 90);
        let repr = BallRepr::from_ball(&b);
        let back = repr.to_ball().unwrap();
        assert_eq!(back.midpoint(), b.midpoint());
        // stored radius is a power-of-two upper bound
        assert!(back.radius() >= b.radius());
        // the reconstruction of the reconstruction is identical
        let repr2 = BallRepr::from_ball(&back);
        assert_eq!(repr, repr2);
        assert_eq!(repr2.to_ball().unwrap(), back);
    }

    #[test]
    fn pi_digits() {
        let pi = crate::numeval::pi_ball(200);
        let s = guaranteed_decimal(&pi);
        assert!(
            s.starts_with("3.14159265358979323846264338327950288419716939937510"),
            "{s}"
        );
    }
}

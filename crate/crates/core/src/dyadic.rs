//! Arbitrary-precision dyadic numbers: `mantissa * 2^exponent`.
//!
//! Exact addition and multiplication, plus directed rounding to a given
//! number of mantissa bits. These are the midpoints and radii of balls;
//! every rounding direction here is explicit because the enclosure
//! contract depends on it.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Round {
    /// Toward minus infinity.
    Floor,
    /// Toward plus infinity.
    Ceil,
    /// To nearest; error at most one ulp either way.
    Nearest,
}

/// `mant * 2^exp`, with `mant` odd or zero (zero stored as 0 * 2^0).
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// Floor division by 2^s for signed BigInt (arithmetic shift semantics,
/// independent of the library's own Shr behavior on negatives).
fn floor_shr(x: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    if x.is_negative() {
        let bias = (BigInt::one() << s) - BigInt::one();
        let shifted: BigInt = (-x + bias) >> s;
        -shifted
    } else {
        x >> s
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic { mant: n, exp: 0 }.normalized()
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant = floor_shr(&self.mant, tz); // exact: trailing zeros
            self.exp += tz as i64;
        }
        self
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent e with 2^(e-1) <= |x| < 2^e; None for zero.
    pub fn magnitude_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        Dyadic {
            mant: (&hi.mant << shift) + &lo.mant,
            exp: lo.exp,
        }
        .normalized()
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    pub fn mul_bigint(&self, n: &BigInt) -> Dyadic {
        Dyadic {
            mant: &self.mant * n,
            exp: self.exp,
        }
        .normalized()
    }

    /// Exact scaling by 2^e.
    pub fn shift(&self, e: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + e,
        }
    }

    /// Rounds to at most `prec` mantissa bits. Returns the rounded value
    /// and, when inexact, the exponent `e` of an error bound 2^e.
    pub fn round(&self, prec: u64, mode: Round) -> (Dyadic, Option<i64>) {
        let bits = self.mant.bits();
        if bits <= prec {
            return (self.clone(), None);
        }
        let s = bits - prec;
        let floor_q = floor_shr(&self.mant, s);
        let exact = (&floor_q << s) == self.mant;
        if exact {
            return (
                Dyadic {
                    mant: floor_q,
                    exp: self.exp + s as i64,
                }
                .normalized(),
                None,
            );
        }
        let q = match mode {
            Round::Floor => floor_q,
            Round::Ceil => floor_q + 1,
            Round::Nearest => {
                // inspect the dropped most-significant bit
                let half = floor_shr(&self.mant, s - 1);
                if (&half - (&floor_q << 1u8)).is_one() {
                    floor_q + 1
                } else {
                    floor_q
                }
            }
        };
        let err_exp = self.exp + s as i64; // |error| <= one ulp of the result
        (
            Dyadic {
                mant: q,
                exp: self.exp + s as i64,
            }
            .normalized(),
            Some(err_exp),
        )
    }

    /// `self / den` rounded to `prec` bits, plus an error-bound exponent
    /// when inexact. `den` must be positive.
    pub fn div_bigint(&self, den: &BigInt, prec: u64, mode: Round) -> (Dyadic, Option<i64>) {
        assert!(den.is_positive(), "div_bigint requires positive divisor");
        if self.is_zero() {
            return (Dyadic::zero(), None);
        }
        // Scale the numerator so the quotient keeps >= prec+2 bits.
        let extra = (prec + 2).saturating_sub(self.mant.bits()) + den.bits() + 2;
        let num = &self.mant << extra;
        let exp = self.exp - extra as i64;
        let (q, r) = num_integer::Integer::div_mod_floor(&num, den);
        if r.is_zero() {
            return Dyadic { mant: q, exp }.normalized().round(prec, mode);
        }
        // q*2^exp <= exact < (q+1)*2^exp
        let (lo, hi) = (
            Dyadic {
                mant: q.clone(),
                exp,
            },
            Dyadic { mant: q + 1, exp },
        );
        let picked = match mode {
            Round::Floor => lo.normalized().round(prec, Round::Floor),
            Round::Ceil => hi.normalized().round(prec, Round::Ceil),
            Round::Nearest => lo.normalized().round(prec, Round::Nearest),
        };
        // worst case: truncation error 2^exp plus the final rounding error
        let err = match picked.1 {
            None => exp,
            Some(e) => e.max(exp) + 1,
        };
        (picked.0, Some(err))
    }

    /// Fixed-point view: round(self * 2^prec) toward -inf.
    pub fn to_fixed(&self, prec: u64) -> BigInt {
        let shift = self.exp + prec as i64;
        if shift >= 0 {
            &self.mant << shift as u64
        } else {
            floor_shr(&self.mant, (-shift) as u64)
        }
    }

    pub fn from_fixed(fixed: BigInt, prec: u64) -> Dyadic {
        Dyadic {
            mant: fixed,
            exp: -(prec as i64),
        }
        .normalized()
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // keep 64 bits of mantissa
        let (r, _) = self.round(64, Round::Nearest);
        let m: f64 = match i64::try_from(&r.mant) {
            Ok(v) => v as f64,
            Err(_) => {
                let s = r.mant.bits() - 53;
                let top = floor_shr(&r.mant, s);
                let t: i64 = i64::try_from(&top).unwrap_or(0);
                return t as f64 * 2f64.powi((r.exp + s as i64) as i32);
            }
        };
        m * 2f64.powi(r.exp as i32)
    }

    /// Exact conversion to a rational.
    pub fn to_rational(&self) -> crate::rat::Rational {
        use crate::rat::Rational;
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as u64)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// floor(self * 10^digits) — exact, used for decimal rendering.
    pub fn floor_scaled_pow10(&self, digits: u32) -> BigInt {
        let p10 = BigInt::from(10u32).pow(digits);
        let scaled = &self.mant * &p10;
        if self.exp >= 0 {
            scaled << self.exp as u64
        } else {
            floor_shr(&scaled, (-self.exp) as u64)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        if d.mant.is_zero() {
            Ordering::Equal
        } else if d.mant.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·2^{} (~{})", self.mant, self.exp, self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalization() {
        assert_eq!(d(8, 0), d(1, 3));
        assert_eq!(d(0, 5), Dyadic::zero());
        assert_eq!(d(12, -2).mantissa(), &BigInt::from(3));
    }

    #[test]
    fn exact_arithmetic() {
        assert_eq!(d(3, -1).add(&d(1, -2)), d(7, -2)); // 1.5 + 0.25
        assert_eq!(d(3, -1).mul(&d(3, -1)), d(9, -2)); // 1.5^2 = 2.25
        assert_eq!(d(1, 0).sub(&d(1, -3)), d(7, -3));
        assert_eq!(d(-3, 0).abs(), d(3, 0));
    }

    #[test]
    fn ordering() {
        assert!(d(1, -1) < d(3, -2)); // 0.5 < 0.75
        assert!(d(-1, 4) < d(1, -10));
        assert_eq!(d(2, 1), d(1, 2));
    }

    #[test]
    fn rounding_directions() {
        let x = d(0b10111, 0); // 23
        let (fl, e1) = x.round(3, Round::Floor);
        assert_eq!(fl, d(0b101, 2)); // 20
        assert!(e1.is_some());
        let (ce, _) = x.round(3, Round::Ceil);
        assert_eq!(ce, d(0b110, 2)); // 24
        let (ne, _) = x.round(3, Round::Nearest);
        assert_eq!(ne, d(0b110, 2)); // 23 -> 24 (dropped bits 11)
        // negative value: floor goes away from zero
        let y = d(-23, 0);
        let (fl, _) = y.round(3, Round::Floor);
        assert_eq!(fl, d(-24, 0));
        let (ce, _) = y.round(3, Round::Ceil);
        assert_eq!(ce, d(-20, 0));
    }

    #[test]
    fn rounding_error_bound_holds() {
        let x = d(0b1011_0110_1101, -7);
        for mode in [Round::Floor, Round::Ceil, Round::Nearest] {
            let (r, err) = x.round(4, mode);
            let e = err.expect("inexact");
            let diff = r.sub(&x).abs();
            assert!(diff <= Dyadic::pow2(e));
        }
    }

    #[test]
    fn division() {
        // 1/3 to 10 bits, floor vs ceil bracket the true value
        let (lo, _) = Dyadic::one().div_bigint(&BigInt::from(3), 10, Round::Floor);
        let (hi, _) = Dyadic::one().div_bigint(&BigInt::from(3), 10, Round::Ceil);
        assert!(lo < hi);
        let three = d(3, 0);
        assert!(lo.mul(&three) <= Dyadic::one());
        assert!(hi.mul(&three) >= Dyadic::one());
        // exact division stays exact
        let (q, err) = d(6, 0).div_bigint(&BigInt::from(3), 50, Round::Nearest);
        assert_eq!(q, d(2, 0));
        assert!(err.is_none());
    }

    #[test]
    fn fixed_point_roundtrip() {
        let x = d(-411, -7);
        let f = x.to_fixed(30);
        let back = Dyadic::from_fixed(f, 30);
        assert!(back.sub(&x).abs() <= Dyadic::pow2(-30));
    }

    #[test]
    fn pow10_floor() {
        // 1/4 * 100 = 25
        assert_eq!(d(1, -2).floor_scaled_pow10(2), BigInt::from(25));
        // -1/3-ish: floor(-0.251 * 10) = -3
        assert_eq!(d(-1027, -12).floor_scaled_pow10(1), BigInt::from(-3));
    }
}

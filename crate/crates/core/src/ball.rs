//! Ball arithmetic: midpoint ± radius enclosures.
//!
//! The contract of every operation here is containment: if the exact
//! inputs lie in the input balls, the exact result lies in the output
//! ball. Midpoints are rounded to the working precision with the rounding
//! error absorbed into the radius; radii are always rounded upward.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dyadic::{Dyadic, Round};
use crate::rat::Rational;

/// Radii are kept coarse: few mantissa bits, always an upper bound.
const RADIUS_BITS: u64 = 32;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
}

fn rad_up(x: &Dyadic) -> Dyadic {
    debug_assert!(!x.is_negative());
    x.round(RADIUS_BITS, Round::Ceil).0
}

impl Ball {
    pub fn new(mid: Dyadic, rad: Dyadic) -> Self {
        assert!(!rad.is_negative(), "radius must be nonnegative");
        Ball { mid, rad }
    }

    pub fn exact(mid: Dyadic) -> Self {
        Ball {
            mid,
            rad: Dyadic::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::exact(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::exact(Dyadic::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::exact(Dyadic::from_i64(n))
    }

    /// Smallest-effort enclosure of a rational at `prec` mantissa bits.
    pub fn from_rational(q: &Rational, prec: u64) -> Self {
        let num = Dyadic::from_bigint(q.numer().clone());
        if q.denom() == &BigInt::from(1) {
            return Self::exact(num);
        }
        let (mid, err) = num.div_bigint(q.denom(), prec, Round::Nearest);
        let rad = match err {
            None => Dyadic::zero(),
            Some(e) => Dyadic::pow2(e),
        };
        Ball { mid, rad }
    }

    pub fn midpoint(&self) -> &Dyadic {
        &self.mid
    }

    pub fn radius(&self) -> &Dyadic {
        &self.rad
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.mid.sub(x).abs() <= self.rad
    }

    pub fn intersects(&self, other: &Ball) -> bool {
        self.mid.sub(&other.mid).abs() <= self.rad.add(&other.rad)
    }

    /// True when the whole ball lies inside `other`.
    pub fn subset_of(&self, other: &Ball) -> bool {
        self.mid.sub(&other.mid).abs().add(&self.rad) <= other.rad
    }

    pub fn radius_le_pow2(&self, e: i64) -> bool {
        self.rad <= Dyadic::pow2(e)
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
        }
    }

    pub fn add(&self, other: &Ball, prec: u64) -> Ball {
        let exact = self.mid.add(&other.mid);
        let (mid, err) = exact.round(prec, Round::Nearest);
        let mut rad = self.rad.add(&other.rad);
        if let Some(e) = err {
            rad = rad.add(&Dyadic::pow2(e));
        }
        Ball {
            mid,
            rad: rad_up(&rad),
        }
    }

    pub fn sub(&self, other: &Ball, prec: u64) -> Ball {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Ball, prec: u64) -> Ball {
        let exact = self.mid.mul(&other.mid);
        let (mid, err) = exact.round(prec, Round::Nearest);
        // |a||rb| + |b||ra| + ra rb (+ rounding)
        let mut rad = rad_up(&self.mid.abs().round(RADIUS_BITS, Round::Ceil).0.mul(&other.rad))
            .add(&rad_up(
                &other.mid.abs().round(RADIUS_BITS, Round::Ceil).0.mul(&self.rad),
            ))
            .add(&rad_up(&self.rad.mul(&other.rad)));
        if let Some(e) = err {
            rad = rad.add(&Dyadic::pow2(e));
        }
        Ball {
            mid,
            rad: rad_up(&rad),
        }
    }

    /// Exact scaling by 2^e.
    pub fn shift(&self, e: i64) -> Ball {
        Ball {
            mid: self.mid.shift(e),
            rad: self.rad.shift(e),
        }
    }

    /// Scaling by an exact rational.
    pub fn scale_rational(&self, q: &Rational, prec: u64) -> Ball {
        if q.is_zero() {
            return Ball::zero();
        }
        let num_scaled = self.mid.mul_bigint(q.numer());
        let (mid, err) = num_scaled.div_bigint(q.denom(), prec, Round::Nearest);
        let qa = q.abs();
        let rad_num = self.rad.mul_bigint(qa.numer());
        let (rad_scaled, rerr) = rad_num.div_bigint(qa.denom(), RADIUS_BITS, Round::Ceil);
        let mut rad = rad_scaled;
        if let Some(e) = rerr {
            rad = rad.add(&Dyadic::pow2(e));
        }
        if let Some(e) = err {
            rad = rad.add(&Dyadic::pow2(e));
        }
        Ball {
            mid,
            rad: rad_up(&rad),
        }
    }

    /// Division by a positive integer (the bulk of series work).
    pub fn div_bigint(&self, den: &BigInt, prec: u64) -> Ball {
        let (mid, err) = self.mid.div_bigint(den, prec, Round::Nearest);
        let (rad_scaled, rerr) = self.rad.div_bigint(den, RADIUS_BITS, Round::Ceil);
        let mut rad = rad_scaled;
        if let Some(e) = rerr {
            rad = rad.add(&Dyadic::pow2(e));
        }
        if let Some(e) = err {
            rad = rad.add(&Dyadic::pow2(e));
        }
        Ball {
            mid,
            rad: rad_up(&rad),
        }
    }

    /// Grows the radius by 2^e (used to fold in truncation-tail bounds).
    pub fn widen_pow2(&self, e: i64) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: rad_up(&self.rad.add(&Dyadic::pow2(e))),
        }
    }

    /// Grows the radius by an exact nonnegative dyadic amount.
    pub fn widen(&self, extra: &Dyadic) -> Ball {
        assert!(!extra.is_negative());
        Ball {
            mid: self.mid.clone(),
            rad: rad_up(&self.rad.add(extra)),
        }
    }

    /// Ball spanning a dyadic interval [lo, hi].
    pub fn from_interval(lo: &Dyadic, hi: &Dyadic) -> Ball {
        assert!(lo <= hi);
        let two = BigInt::from(2);
        let (mid, merr) = lo.add(hi).div_bigint(&two, 128, Round::Nearest);
        let (half, herr) = hi.sub(lo).div_bigint(&two, RADIUS_BITS, Round::Ceil);
        let mut rad = half;
        for e in [merr, herr].into_iter().flatten() {
            rad = rad.add(&Dyadic::pow2(e));
        }
        Ball {
            mid,
            rad: rad_up(&rad),
        }
    }
}

impl std::fmt::Display for Ball {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ± {}", self.mid.to_f64(), self.rad.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn rational_enclosure() {
        let b = Ball::from_rational(&rat(1, 3), 64);
        assert!(b.radius_le_pow2(-63));
        // 1/3 in [lo, hi]
        let lo = b.lower();
        let hi = b.upper();
        let three = Dyadic::from_i64(3);
        assert!(lo.mul(&three) <= Dyadic::one());
        assert!(hi.mul(&three) >= Dyadic::one());
    }

    #[test]
    fn containment_under_arithmetic() {
        // (1/3 + 1/7) * 1/3 computed in balls must contain the exact value 10/63
        let a = Ball::from_rational(&rat(1, 3), 80);
        let b = Ball::from_rational(&rat(1, 7), 80);
        let s = a.add(&b, 80).mul(&a, 80);
        let exact = rat(10, 63);
        let exact_lo = Ball::from_rational(&exact, 200);
        assert!(s.intersects(&exact_lo));
        assert!(s.contains(exact_lo.midpoint()) || s.radius() > exact_lo.radius());
    }

    #[test]
    fn zero_and_sign_predicates() {
        let z = Ball::zero();
        assert!(z.contains_zero());
        let b = Ball::from_i64(2).sub(&Ball::from_i64(2), 64);
        assert!(b.contains_zero());
        let c = Ball::from_i64(1).widen_pow2(-4);
        assert!(!c.contains_zero());
        assert!(c.contains(&Dyadic::one()));
    }

    #[test]
    fn interval_ball() {
        let lo = Dyadic::from_i64(1);
        let hi = Dyadic::new(BigInt::from(3), -1); // 1.5
        let b = Ball::from_interval(&lo, &hi);
        assert!(b.contains(&lo));
        assert!(b.contains(&hi));
        assert!(b.contains(&Dyadic::new(BigInt::from(5), -2))); // 1.25
    }

    #[test]
    fn scaling() {
        let b = Ball::from_rational(&rat(1, 3), 100).scale_rational(&rat(3, 1), 100);
        assert!(b.contains(&Dyadic::one()));
        let s = Ball::one().shift(-3);
        assert_eq!(s.midpoint(), &Dyadic::pow2(-3));
        assert!(s.radius().is_zero());
    }
}

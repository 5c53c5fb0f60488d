//! Exact rational scalars.
//!
//! All relation coefficients, matrix entries and reduction results are
//! `BigRational` values: arbitrary-precision, always reduced, denominator
//! positive, canonical zero `0/1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Shorthand for small literal rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((num, den)) => {
            let num = num.trim().parse::<BigInt>().ok()?;
            let den = den.trim().parse::<BigInt>().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Rational::new(num, den))
            }
        }
    }
}

/// Renders without a denominator when integral: `4/3`, `-1`, `0`.
pub fn rational_str(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Signed rendering with explicit `+`/`-` prefix, as used in relation dumps.
pub fn signed_rational_str(q: &Rational) -> String {
    if q.is_negative() {
        format!("-{}", rational_str(&-q))
    } else {
        format!("+{}", rational_str(q))
    }
}

/// Serde adapter storing rationals as `"p/q"` strings (JSON-safe, exact).
pub mod rational_serde {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&rational_str(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        parse_rational(&s).ok_or_else(|| de::Error::custom(format!("bad rational `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational("6/5").unwrap(), rat(6, 5));
        assert_eq!(parse_rational("-4/8").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat_int(7));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(rational_str(&rat(4, 3)), "4/3");
        assert_eq!(rational_str(&rat(-8, 2)), "-4");
        assert_eq!(signed_rational_str(&rat(1, 2)), "+1/2");
        assert_eq!(signed_rational_str(&rat(-1, 1)), "-1");
    }

    #[test]
    fn canonical_form() {
        let q = Rational::new(BigInt::from(-6), BigInt::from(-10));
        assert_eq!(q, rat(3, 5));
        assert!(q.denom() > &BigInt::from(0));
    }
}

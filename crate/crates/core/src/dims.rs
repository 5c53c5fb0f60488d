//! The conjectural dimension sequence d_w and its growth constant.
//!
//! d_0 = 1, d_1 = 0, d_2 = 1 and d_w = d_{w-3} + d_{w-2}; equivalently the
//! power-series coefficients of 1/(1 - x^2 - x^3). The ratio d_w/d_{w-1}
//! converges to the real root of x^3 - x - 1.

use num_bigint::BigInt;

use crate::ball::Ball;
use crate::dyadic::Dyadic;

/// Values d_0..d_wmax of the recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimsTable {
    values: Vec<u64>,
}

impl DimsTable {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, w: usize) -> u64 {
        self.values[w]
    }

    pub fn wmax(&self) -> usize {
        self.values.len() - 1
    }
}

pub fn d_sequence(wmax: u32) -> DimsTable {
    let wmax = wmax as usize;
    let mut values = Vec::with_capacity(wmax + 1);
    for w in 0..=wmax {
        let v = match w {
            0 | 2 => 1,
            1 => 0,
            _ => values[w - 3] + values[w - 2],
        };
        values.push(v);
    }
    DimsTable { values }
}

/// Conjectured dimension at a single weight.
pub fn d_w(w: u32) -> u64 {
    d_sequence(w).get(w as usize)
}

/// Exact Horner evaluation of an integer polynomial at a dyadic point.
fn eval_poly(coeffs: &[i64], x: &Dyadic) -> Dyadic {
    // coeffs[i] is the coefficient of x^i
    let mut acc = Dyadic::zero();
    for &c in coeffs.iter().rev() {
        acc = acc.mul(x).add(&Dyadic::from_i64(c));
    }
    acc
}

/// Bisection enclosure of the root of an integer polynomial in [lo, hi],
/// where the sign changes across the interval. Radius <= 2^-prec.
pub fn real_root_in(coeffs: &[i64], lo: i64, hi: i64, prec: u32) -> Ball {
    let mut lo = Dyadic::from_i64(lo);
    let mut hi = Dyadic::from_i64(hi);
    let f_lo_neg = eval_poly(coeffs, &lo).is_negative();
    assert_ne!(
        f_lo_neg,
        eval_poly(coeffs, &hi).is_negative(),
        "no sign change on the bracketing interval"
    );
    // halve until hi - lo <= 2^-(prec+1), so the midpoint ball has
    // radius <= 2^-prec
    let width_goal = Dyadic::pow2(-(prec as i64) - 1);
    while hi.sub(&lo) > width_goal {
        let mid = lo.add(&hi).shift(-1);
        let f_mid = eval_poly(coeffs, &mid);
        if f_mid.is_zero() {
            return Ball::exact(mid);
        }
        if f_mid.is_negative() == f_lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ball::from_interval(&lo, &hi)
}

/// Enclosure of the real root of x^3 - x - 1 with radius <= 2^-prec.
pub fn alpha(prec_bits: u32) -> Ball {
    assert!(prec_bits >= 8, "alpha needs prec >= 8");
    real_root_in(&[-1, -1, 0, 1], 1, 2, prec_bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, Rational};
    use num_traits::Signed;

    #[test]
    fn initial_values_and_unroll() {
        assert_eq!(d_sequence(2).values(), &[1, 0, 1]);
        // unrolled by hand: d3=d0+d1=1, d4=d1+d2=1, d5=d2+d3=2,
        // d6=d3+d4=2, d7=d4+d5=3
        assert_eq!(d_sequence(7).values(), &[1, 0, 1, 1, 1, 2, 2, 3]);
        assert_eq!(d_sequence(10).get(10), 7);
    }

    /// Independent oracle: expand 1/(1 - x^2 - x^3) by series inversion.
    fn series_inverse_coeffs(n: usize) -> Vec<i64> {
        // c satisfies c * (1 - x^2 - x^3) = 1
        let mut c = vec![0i64; n + 1];
        c[0] = 1;
        for k in 1..=n {
            let mut v = 0;
            if k >= 2 {
                v += c[k - 2];
            }
            if k >= 3 {
                v += c[k - 3];
            }
            c[k] = v;
        }
        c
    }

    #[test]
    fn matches_generating_function() {
        let table = d_sequence(40);
        let series = series_inverse_coeffs(40);
        for w in 0..=40 {
            assert_eq!(table.get(w), series[w] as u64, "coefficient {w}");
        }
    }

    #[test]
    fn alpha_enclosure() {
        let a8 = alpha(8);
        assert!(a8.radius_le_pow2(-8));
        let mid = a8.midpoint().to_f64();
        assert!((mid - 1.32).abs() < 0.01, "got {mid}");

        // prec 64 against an independent Newton oracle in f64
        let mut x = 1.3f64;
        for _ in 0..40 {
            x -= (x * x * x - x - 1.0) / (3.0 * x * x - 1.0);
        }
        let a64 = alpha(64);
        assert!(a64.radius_le_pow2(-64));
        assert!((a64.midpoint().to_f64() - x).abs() < 1e-12);
        assert!((x - 1.3247179572).abs() < 1e-9);

        // defining equation evaluated on the enclosure brackets zero:
        // check f(lo) and f(hi) straddle 0
        let lo = a64.lower();
        let hi = a64.upper();
        let f = |d: &Dyadic| d.mul(d).mul(d).sub(d).sub(&Dyadic::one());
        assert!(f(&lo).is_negative() != f(&hi).is_negative());
    }

    #[test]
    fn ratio_converges_to_alpha() {
        let t = d_sequence(60);
        let ratio = rat(t.get(60) as i64, t.get(59) as i64);
        let mid_q: Rational = alpha(64).midpoint().to_rational();
        // exact rational comparison of |d60/d59 - mid| < 10^-3
        let diff = (ratio - mid_q).abs();
        assert!(diff < rat(1, 1000));
    }

    #[test]
    fn golden_ratio_root() {
        let phi = real_root_in(&[-1, -1, 1], 1, 2, 100);
        assert!((phi.midpoint().to_f64() - 1.618033988749895).abs() < 1e-12);
    }
}

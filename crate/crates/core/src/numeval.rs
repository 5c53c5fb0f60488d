//! Rigorous numeric evaluation of multiple zeta values.
//!
//! Direct summation of the defining nested series converges like 1/N and
//! is useless beyond a few digits; it is kept as the independent
//! low-precision oracle (`eval_naive`). The production route rewrites
//! ζ(s) through the Hölder convolution at 1/2: a sum of n+1 products of
//! multiple polylogarithms evaluated at z = 1/2, each of which converges
//! geometrically (one bit per series term). Everything returns balls and
//! every truncation folds a proven tail bound into the radius.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ball::Ball;
use crate::dyadic::Dyadic;
use crate::formal::FormalSum;
use crate::index::MzvIndex;
use crate::rat::Rational;
use crate::word::{index_to_word, BinaryWord};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("index {0} is not admissible; ζ diverges")]
    NotAdmissible(MzvIndex),
    #[error("word `{0}` ends in x0 and has no convergent series at 1/2")]
    DivergentWord(BinaryWord),
    #[error("word `{0}` is not admissible (must start x0, end x1)")]
    InadmissibleWord(BinaryWord),
    #[error("series needs {needed} terms, above the configured cap {cap}")]
    MaxTermsExceeded { needed: u64, cap: u64 },
    #[error("naive summation bound requires N >= depth ({depth}), got {n}")]
    TruncationTooShort { n: u64, depth: u64 },
}

/// Precision request: target absolute radius 2^-prec_bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub prec_bits: u32,
    pub guard_bits: u32,
    pub max_terms: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            prec_bits: 128,
            guard_bits: 64,
            max_terms: 1_000_000,
        }
    }
}

impl EvalConfig {
    pub fn with_prec(prec_bits: u32) -> Self {
        EvalConfig {
            prec_bits: prec_bits.max(16),
            ..Default::default()
        }
    }

    fn working_prec(&self) -> u64 {
        self.prec_bits as u64 + self.guard_bits.max(16) as u64
    }
}

fn ceil_log2(x: u64) -> i64 {
    debug_assert!(x >= 1);
    (64 - (x - 1).leading_zeros()) as i64
}

// ---------------------------------------------------------------------------
// pi
// ---------------------------------------------------------------------------

/// arctan(1/q) as a fixed-point integer at `wp` bits together with an
/// error bound in ulps. Alternating series with strictly decreasing
/// terms, so the truncation tail is at most the first omitted term.
fn arctan_recip_fixed(q: u64, wp: u64) -> (BigInt, u64) {
    let q2 = BigInt::from(q) * BigInt::from(q);
    let mut power = (BigInt::one() << wp) / BigInt::from(q); // 1/q^{2k+1}, err <= 2 ulps
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    let mut terms = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power = &power / &q2;
        k += 1;
        terms += 1;
    }
    // each stored term carries <= 3 ulps of floor error; once power
    // underflows to zero the true tail is <= 3 ulps as well
    (sum, 3 * terms + 3)
}

fn compute_pi(wp: u64) -> Ball {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let (a5, e5) = arctan_recip_fixed(5, wp);
    let (a239, e239) = arctan_recip_fixed(239, wp);
    let fixed = (a5 << 4u8) - (a239 << 2u8);
    let err_ulps = 16 * e5 + 4 * e239;
    let rad = Dyadic::from_i64(err_ulps as i64).shift(-(wp as i64));
    Ball::new(Dyadic::from_fixed(fixed, wp), rad)
}

/// Enclosure of pi with radius well below 2^-wp_bits, cached per precision.
pub fn pi_ball(wp_bits: u64) -> Ball {
    static CACHE: OnceLock<Mutex<HashMap<u64, Ball>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&wp_bits) {
        return b.clone();
    }
    let b = compute_pi(wp_bits + 32);
    cache.lock().unwrap().insert(wp_bits, b.clone());
    b
}

// ---------------------------------------------------------------------------
// multiple polylogarithms at 1/2
// ---------------------------------------------------------------------------

/// Truncation point N for the z = 1/2 series: the tail beyond N is at
/// most 2^(1-N) (N+1)^(depth-1) once N >= 4*depth, and we push it below
/// 2^-target.
fn li_truncation(depth: u64, target: i64, cap: u64) -> Result<u64, EvalError> {
    let mut n = (target.max(1) as u64 + 2).max(4 * depth).max(16);
    loop {
        let tail_exp = 1 - n as i64 + (depth as i64 - 1) * ceil_log2(n + 1);
        if tail_exp <= -target {
            return Ok(n);
        }
        n += (n / 8).max(8);
        if n > cap {
            return Err(EvalError::MaxTermsExceeded {
                needed: n,
                cap,
            });
        }
    }
}

/// Li_{a_1,...,a_l}(1/2) = sum over n_1 > ... > n_l >= 1 of
/// (1/2)^{n_1} / (n_1^{a_1} ... n_l^{a_l}), for the exponent word of any
/// word ending in x1 (leading 1s allowed: the series still converges
/// geometrically at 1/2). The empty word gives exactly 1.
pub fn eval_li_half(word: &BinaryWord, cfg: &EvalConfig) -> Result<Ball, EvalError> {
    if word.is_empty() {
        return Ok(Ball::one());
    }
    let exps = word
        .exponents()
        .map_err(|_| EvalError::DivergentWord(word.clone()))?;
    let wp = cfg.working_prec();
    let target = cfg.prec_bits as i64 + (cfg.guard_bits / 2).max(16) as i64;
    let depth = exps.len() as u64;
    let n_max = li_truncation(depth, target, cfg.max_terms)?;
    let n = n_max as usize;

    // T_j(m) = sum over m > m' chains for inner exponents a_j..a_l;
    // one sweep per level, innermost first.
    let mut inner: Vec<Ball> = vec![Ball::one(); n + 1];
    for &a in exps.iter().skip(1).rev() {
        let mut next: Vec<Ball> = Vec::with_capacity(n + 1);
        next.push(Ball::zero()); // m = 0 unused
        next.push(Ball::zero()); // no chain below 1
        for m in 2..=n {
            let prev = (m - 1) as u64;
            let term = inner[m - 1].div_bigint(&BigInt::from(prev).pow(a), wp);
            next.push(next[m - 1].add(&term, wp));
        }
        inner = next;
    }

    let mut sum = Ball::zero();
    for m in 1..=n {
        let t = &inner[m];
        if t.midpoint().is_zero() && t.radius().is_zero() {
            continue;
        }
        let term = t
            .div_bigint(&BigInt::from(m as u64).pow(exps[0]), wp)
            .shift(-(m as i64));
        sum = sum.add(&term, wp);
    }
    let tail_exp = 1 - n_max as i64 + (depth as i64 - 1) * ceil_log2(n_max + 1);
    Ok(sum.widen_pow2(tail_exp))
}

// ---------------------------------------------------------------------------
// Hölder convolution
// ---------------------------------------------------------------------------

/// The n+1 split pairs (tau(prefix_j), suffix_j) of an admissible word:
/// ζ(word) = Σ_j Li_{tau(prefix_j)}(1/2) · Li_{suffix_j}(1/2).
/// Every returned word is empty or ends in x1.
pub fn holder_split(word: &BinaryWord) -> Result<Vec<(BinaryWord, BinaryWord)>, EvalError> {
    if !word.is_admissible() {
        return Err(EvalError::InadmissibleWord(word.clone()));
    }
    let n = word.len();
    Ok((0..=n)
        .map(|j| (word.prefix(j).tau(), word.suffix(j)))
        .collect())
}

// ---------------------------------------------------------------------------
// zeta
// ---------------------------------------------------------------------------

fn mzv_cache() -> &'static RwLock<HashMap<(MzvIndex, u32), Ball>> {
    static CACHE: OnceLock<RwLock<HashMap<(MzvIndex, u32), Ball>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// ζ(index) with radius <= 2^-prec_bits, via the Hölder convolution.
pub fn eval_mzv(index: &MzvIndex, cfg: &EvalConfig) -> Result<Ball, EvalError> {
    if !index.is_admissible() {
        return Err(EvalError::NotAdmissible(index.clone()));
    }
    let key = (index.clone(), cfg.prec_bits);
    if let Some(b) = mzv_cache().read().unwrap().get(&key) {
        return Ok(b.clone());
    }

    let word = index_to_word(index);
    let splits = holder_split(&word)?;
    let mut cfg_try = cfg.clone();
    let mut result = None;
    for _ in 0..3 {
        let wp = cfg_try.working_prec();
        let mut sum = Ball::zero();
        let mut li_memo: HashMap<BinaryWord, Ball> = HashMap::new();
        for (left, right) in &splits {
            let mut li = |w: &BinaryWord| -> Result<Ball, EvalError> {
                if let Some(b) = li_memo.get(w) {
                    return Ok(b.clone());
                }
                let b = eval_li_half(w, &cfg_try)?;
                li_memo.insert(w.clone(), b.clone());
                Ok(b)
            };
            let l = li(left)?;
            let r = li(right)?;
            sum = sum.add(&l.mul(&r, wp), wp);
        }
        if sum.radius_le_pow2(-(cfg.prec_bits as i64)) {
            result = Some(sum);
            break;
        }
        // widen the guard and retry; the loop terminates because the tail
        // and rounding radii both shrink geometrically in the guard
        cfg_try.guard_bits *= 2;
    }
    let ball = result.expect("guard growth must reach the requested radius");
    mzv_cache()
        .write()
        .unwrap()
        .insert(key, ball.clone());
    Ok(ball)
}

/// ζ((2)_k) = pi^{2k} / (2k+1)! from a rigorous pi enclosure.
pub fn zeta_two_pow(k: u32, cfg: &EvalConfig) -> Ball {
    assert!(k >= 1);
    let wp = cfg.working_prec() + 2 * k as u64;
    let pi = pi_ball(wp);
    let pi2 = pi.mul(&pi, wp);
    let mut pow = pi2.clone();
    for _ in 1..k {
        pow = pow.mul(&pi2, wp);
    }
    let mut fact = BigInt::one();
    for i in 2..=(2 * k as u64 + 1) {
        fact *= BigInt::from(i);
    }
    pow.div_bigint(&fact, wp)
}

/// Truncation of the defining series over n_1 <= N, with the coarse tail
/// bound depth * N^(1-s_1) * (1 + ln N)^(depth-1) folded into the radius
/// (ln N is upper-bounded by the bit length of N).
pub fn eval_naive(index: &MzvIndex, n_terms: u64) -> Result<Ball, EvalError> {
    if !index.is_admissible() {
        return Err(EvalError::NotAdmissible(index.clone()));
    }
    let depth = index.depth() as u64;
    if n_terms < depth {
        return Err(EvalError::TruncationTooShort {
            n: n_terms,
            depth,
        });
    }
    let wp: u64 = 192;
    let parts = index.parts();
    let n = n_terms as usize;

    let mut inner: Vec<Ball> = vec![Ball::one(); n + 1];
    for &a in parts.iter().skip(1).rev() {
        let mut next: Vec<Ball> = Vec::with_capacity(n + 1);
        next.push(Ball::zero());
        next.push(Ball::zero());
        for m in 2..=n {
            let prev = (m - 1) as u64;
            let term = inner[m - 1].div_bigint(&BigInt::from(prev).pow(a), wp);
            next.push(next[m - 1].add(&term, wp));
        }
        inner = next;
    }
    let mut sum = Ball::zero();
    for m in 1..=n {
        let t = &inner[m];
        if t.midpoint().is_zero() && t.radius().is_zero() {
            continue;
        }
        let term = t.div_bigint(&BigInt::from(m as u64).pow(parts[0]), wp);
        sum = sum.add(&term, wp);
    }

    // tail <= depth * N^(1-s1) * (1 + ln N)^(depth-1), by comparing the
    // inner sums with iterated harmonic integrals; ln N <= bitlen(N).
    let bitlen = 64 - n_terms.leading_zeros() as i64;
    let log_factor = BigInt::from(1 + bitlen).pow(depth as u32 - 1);
    let tail = Rational::new(
        BigInt::from(depth) * log_factor,
        BigInt::from(n_terms).pow(parts[0] - 1),
    );
    let tail_ball = Ball::from_rational(&tail, 32);
    let tail_dyadic = tail_ball.upper();
    Ok(sum.widen(&tail_dyadic))
}

/// Σ coeff · ζ(term) over an index sum; the empty sum is the exact zero
/// ball. Rational coefficients scale exactly.
pub fn eval_formal(sum: &FormalSum<MzvIndex>, cfg: &EvalConfig) -> Result<Ball, EvalError> {
    let wp = cfg.working_prec();
    let mut acc = Ball::zero();
    for (index, coeff) in sum.iter() {
        let v = eval_mzv(index, cfg)?;
        acc = acc.add(&v.scale_rational(coeff, wp), wp);
    }
    Ok(acc)
}

/// Product ball ζ(u)·ζ(v), used by the stuffle checks and the certificates.
pub fn eval_product(u: &MzvIndex, v: &MzvIndex, cfg: &EvalConfig) -> Result<Ball, EvalError> {
    let wp = cfg.working_prec();
    Ok(eval_mzv(u, cfg)?.mul(&eval_mzv(v, cfg)?, wp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::word_to_index;

    fn ix(parts: &[u32]) -> MzvIndex {
        MzvIndex::of(parts)
    }

    fn w(s: &str) -> BinaryWord {
        BinaryWord::parse(s).unwrap()
    }

    fn cfg(prec: u32) -> EvalConfig {
        EvalConfig::with_prec(prec)
    }

    #[test]
    fn pi_enclosure() {
        let pi = pi_ball(128);
        assert!(pi.radius_le_pow2(-128));
        assert!((pi.midpoint().to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn li_empty_word_is_one() {
        let b = eval_li_half(&BinaryWord::empty(), &cfg(64)).unwrap();
        assert_eq!(b, Ball::one());
    }

    #[test]
    fn li_x1_is_ln2() {
        // oracle: ln 2 = 2 atanh(1/3) = 2 sum 1/((2k+1) 9^k 3); f64 partial
        // sum of the first 30 terms is correct to ~1e-16
        let mut ln2 = 0.0f64;
        for k in 0..30 {
            ln2 += 2.0 / ((2 * k + 1) as f64 * 3f64.powi(2 * k + 1));
        }
        let b = eval_li_half(&w("1"), &cfg(96)).unwrap();
        assert!(b.radius_le_pow2(-96));
        assert!((b.midpoint().to_f64() - ln2).abs() < 1e-13);
        assert!((ln2 - 0.6931471805599453).abs() < 1e-15);
    }

    #[test]
    fn li2_half_matches_direct_sum() {
        // oracle: 200-term direct summation in f64 (geometric series,
        // truncation far below f64 eps)
        let mut direct = 0.0f64;
        for n in 1..=200u64 {
            direct += 0.5f64.powi(n as i32) / ((n * n) as f64);
        }
        let b = eval_li_half(&w("01"), &cfg(96)).unwrap();
        assert!((b.midpoint().to_f64() - direct).abs() < 1e-13);
        assert!((direct - 0.5822405264650125).abs() < 1e-14);
    }

    #[test]
    fn li_rejects_divergent_word() {
        assert!(matches!(
            eval_li_half(&w("010"), &cfg(64)),
            Err(EvalError::DivergentWord(_))
        ));
    }

    #[test]
    fn holder_split_examples() {
        let splits = holder_split(&w("01")).unwrap();
        assert_eq!(
            splits,
            vec![
                (BinaryWord::empty(), w("01")),
                (w("1"), w("1")),
                (w("01"), BinaryWord::empty()),
            ]
        );
        assert_eq!(holder_split(&w("011")).unwrap().len(), 4);
        assert!(holder_split(&w("10")).is_err());
        for (l, r) in holder_split(&w("0011")).unwrap() {
            assert!(l.is_empty() || l.ends_with_x1());
            assert!(r.is_empty() || r.ends_with_x1());
        }
    }

    #[test]
    fn holder_identity_for_zeta2() {
        // 2 Li2(1/2) + (ln 2)^2 lands inside a ball containing pi^2/6
        let c = cfg(128);
        let wp = c.working_prec();
        let li2 = eval_li_half(&w("01"), &c).unwrap();
        let ln2 = eval_li_half(&w("1"), &c).unwrap();
        let combo = li2.add(&li2, wp).add(&ln2.mul(&ln2, wp), wp);
        let z2 = zeta_two_pow(1, &c);
        assert!(combo.intersects(&z2));
    }

    #[test]
    fn mzv_basics() {
        let c = cfg(128);
        let z2 = eval_mzv(&ix(&[2]), &c).unwrap();
        assert!(z2.radius_le_pow2(-128));
        assert!((z2.midpoint().to_f64() - 1.6449340668482264).abs() < 1e-14);
        assert!(z2.intersects(&zeta_two_pow(1, &c)));

        let z3 = eval_mzv(&ix(&[3]), &c).unwrap();
        // naive oracle: 1e5 terms + integral tail in f64
        let mut naive = 0.0f64;
        for n in 1..=100_000u64 {
            naive += 1.0 / ((n * n * n) as f64);
        }
        // tail between 1/(2 (N+1)^2) and 1/(2 N^2)
        naive += 0.5 / (100_000.0f64 * 100_000.0);
        assert!((z3.midpoint().to_f64() - naive).abs() < 1e-10);

        assert!(eval_mzv(&ix(&[1, 2]), &c).is_err());
    }

    #[test]
    fn euler_identity_via_independent_evaluations() {
        let c = cfg(128);
        let z21 = eval_mzv(&ix(&[2, 1]), &c).unwrap();
        let z3 = eval_mzv(&ix(&[3]), &c).unwrap();
        assert!(z21.intersects(&z3));
    }

    #[test]
    fn zeta_two_pow_values() {
        let c = cfg(128);
        let k1 = zeta_two_pow(1, &c);
        assert!((k1.midpoint().to_f64() - 1.6449340668482264).abs() < 1e-14);
        let k2 = zeta_two_pow(2, &c);
        // pi^4/120 via the f64 pi oracle
        let expect = std::f64::consts::PI.powi(4) / 120.0;
        assert!((k2.midpoint().to_f64() - expect).abs() < 1e-13);
        assert!((expect - 0.8117424252833536).abs() < 1e-15);
        let k3 = zeta_two_pow(3, &c);
        let expect3 = std::f64::consts::PI.powi(6) / 5040.0;
        assert!((k3.midpoint().to_f64() - expect3).abs() < 1e-13);
        // and they agree with the series evaluation
        for k in 1..=3u32 {
            let series = eval_mzv(&MzvIndex::repeated(2, k as usize), &c).unwrap();
            assert!(series.intersects(&zeta_two_pow(k, &c)), "k={k}");
        }
    }

    #[test]
    fn naive_summation() {
        let first = eval_naive(&ix(&[2]), 1).unwrap();
        assert!(first.contains(&Dyadic::one()));

        let z2 = eval_naive(&ix(&[2]), 1000).unwrap();
        assert!(z2.intersects(&zeta_two_pow(1, &cfg(64))));

        let z21 = eval_naive(&ix(&[2, 1]), 1000).unwrap();
        let z3 = eval_mzv(&ix(&[3]), &cfg(64)).unwrap();
        assert!(z21.intersects(&z3));

        assert!(eval_naive(&ix(&[2, 1]), 1).is_err());
    }

    #[test]
    fn formal_sums() {
        let c = cfg(100);
        assert_eq!(
            eval_formal(&FormalSum::zero(), &c).unwrap(),
            Ball::zero()
        );
        // stuffle instance: ζ(5)+ζ(3,2)+ζ(2,3) - ζ(3)ζ(2) = 0
        let mut s = FormalSum::zero();
        s.add_term(ix(&[5]), Rational::one());
        s.add_term(ix(&[3, 2]), Rational::one());
        s.add_term(ix(&[2, 3]), Rational::one());
        let rhs = eval_formal(&s, &c).unwrap();
        let prod = eval_product(&ix(&[3]), &ix(&[2]), &c).unwrap();
        let wp = c.working_prec();
        assert!(rhs.sub(&prod, wp).contains_zero());

        // duality: ζ(3) - ζ(2,1) = 0
        let mut d = FormalSum::zero();
        d.add_term(ix(&[3]), Rational::one());
        d.add_term(ix(&[2, 1]), -Rational::one());
        assert!(eval_formal(&d, &c).unwrap().contains_zero());
    }

    #[test]
    fn monotone_refinement() {
        for parts in [vec![2], vec![3], vec![2, 1], vec![4, 2]] {
            let index = MzvIndex::of(&parts);
            let coarse = eval_mzv(&index, &cfg(64)).unwrap();
            let fine = eval_mzv(&index, &cfg(128)).unwrap();
            assert!(fine.subset_of(&coarse), "{index}");
        }
    }

    #[test]
    fn containment_exhaustive_small_weights() {
        for weight in 2..=5u32 {
            for index in crate::index::enumerate_admissible(weight).unwrap() {
                let rigorous = eval_mzv(&index, &cfg(64)).unwrap();
                let oracle = eval_naive(&index, 4000).unwrap();
                assert!(rigorous.intersects(&oracle), "{index}");
                let _ = word_to_index(&index_to_word(&index)).unwrap();
            }
        }
    }
}

//! Experimental linear-independence machinery.
//!
//! `lemma1_eliminate` mechanizes the symbolic elimination step used to
//! trade a dependence among 1, x, x·y_i for one among 1, y_1..y_k. The
//! certificate builder probes tuples {1, ζ(3)} ∪ {products ζ(3)ζ(2k)}
//! with PSLQ and reports the first subset certified free of small integer
//! relations. Certificates are experimental evidence, never proofs, and
//! say so in their rendering.

pub mod pslq;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::Ball;
use crate::formal::FormalSum;
use crate::index::{enumerate_hoffman, MzvIndex};
use crate::numeval::{eval_formal, eval_mzv, eval_product, EvalConfig, EvalError};
use crate::rat::{rational_str, Rational};
use crate::relations::{hoffman_reduce_capped, stuffle, ReduceOutcome, RelationError};

use pslq::{pslq, PslqError, PslqOutcome};

pub use pslq::{combination_ball, required_radius_bits, verify_candidate, RelationCandidate};

#[derive(Debug, Error)]
pub enum LindepError {
    #[error("coefficient of 1 must be nonzero in both forms")]
    ZeroConstant,
    #[error("form 1 must involve y_{0}")]
    MissingPivot(usize),
    #[error("form 2 must not involve y_{0}")]
    PivotNotEliminated(usize),
    #[error("pivot index {p} outside 1..={k}")]
    PivotOutOfRange { p: usize, k: usize },
    #[error(transparent)]
    Pslq(#[from] PslqError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Index(#[from] crate::index::IndexError),
    #[error("no product subset certified independent; inspect the tuple outcomes")]
    NoIndependentSubset(Box<IndependenceCertificate>),
}

// ---------------------------------------------------------------------------
// Lemma 1
// ---------------------------------------------------------------------------

/// `a + b x + sum_i c_i x y_i` with rational coefficients; `k` is the
/// ambient count of y's and the map holds only nonzero entries with
/// indices in 1..=k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub a: Rational,
    pub b: Rational,
    pub c: BTreeMap<usize, Rational>,
    pub k: usize,
}

impl LinearForm {
    pub fn new(a: Rational, b: Rational, c: BTreeMap<usize, Rational>, k: usize) -> Self {
        let c: BTreeMap<usize, Rational> =
            c.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        assert!(
            c.keys().all(|&i| (1..=k).contains(&i)),
            "y indices must lie in 1..=k"
        );
        LinearForm { a, b, c, k }
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(&i).cloned().unwrap_or_else(Rational::zero)
    }
}

/// A linear form in 1, y_1..y_k — the output of the elimination step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminatedForm {
    pub constant: Rational,
    pub y_coeffs: BTreeMap<usize, Rational>,
}

/// Cross-multiply two dependencies and divide by x: from
/// A1 + B1 x + Σ C1i x y_i = 0 and A2 + B2 x + Σ C2i x y_i = 0 (with
/// C2p = 0), produce (B1 A2 - B2 A1) + Σ (C1i A2 - C2i A1) y_i. The
/// coefficient of y_p comes out as C1p * A2, which is nonzero under the
/// preconditions.
pub fn lemma1_eliminate(
    f1: &LinearForm,
    f2: &LinearForm,
    p: usize,
) -> Result<EliminatedForm, LindepError> {
    let k = f1.k.max(f2.k);
    if !(1..=k).contains(&p) {
        return Err(LindepError::PivotOutOfRange { p, k });
    }
    if f1.coeff(p).is_zero() {
        return Err(LindepError::MissingPivot(p));
    }
    if !f2.coeff(p).is_zero() {
        return Err(LindepError::PivotNotEliminated(p));
    }
    if f1.a.is_zero() || f2.a.is_zero() {
        return Err(LindepError::ZeroConstant);
    }
    let constant = &f1.b * &f2.a - &f2.b * &f1.a;
    let mut y_coeffs = BTreeMap::new();
    for i in 1..=k {
        let v = f1.coeff(i) * &f2.a - f2.coeff(i) * &f1.a;
        if !v.is_zero() {
            y_coeffs.insert(i, v);
        }
    }
    debug_assert_eq!(y_coeffs.get(&p), Some(&(f1.coeff(p) * &f2.a)));
    Ok(EliminatedForm { constant, y_coeffs })
}

// ---------------------------------------------------------------------------
// corollary products and certificates
// ---------------------------------------------------------------------------

/// For k = 1..l+1, the right-hand side (2k+3) + (3,2k) + (2k,3) of the
/// product identity ζ(3)ζ(2k) = ζ(2k+3) + ζ(3,2k) + ζ(2k,3). Each equals
/// stuffle((3),(2k)) exactly.
pub fn corollary_products(l: u32) -> Vec<(u32, FormalSum<MzvIndex>)> {
    (1..=l + 1)
        .map(|k| {
            let mut s = FormalSum::zero();
            s.add_term(MzvIndex::of(&[2 * k + 3]), Rational::one());
            s.add_term(MzvIndex::of(&[3, 2 * k]), Rational::one());
            s.add_term(MzvIndex::of(&[2 * k, 3]), Rational::one());
            debug_assert_eq!(s, stuffle(&MzvIndex::of(&[3]), &MzvIndex::of(&[2 * k])));
            (k, s)
        })
        .collect()
}

pub const CERTIFICATE_COEFF_BITS: u32 = 32;
/// Reductions inside a certificate are computed exactly up to this
/// weight; above it the conjectural {2,3} basis stands in, and the
/// certificate records which route was taken.
pub const CERTIFICATE_REDUCE_CAP: u32 = 9;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProductEvidence {
    pub k: u32,
    pub weight: u32,
    /// Rendering of the product identity ζ(3)ζ(2k) = rhs.
    pub identity: String,
    /// rhs ball intersected the product ball at 128 bits.
    pub identity_checked: bool,
    /// Spanning vectors for this weight (M_w candidates).
    pub candidates: Vec<MzvIndex>,
    /// true: candidates come from an exact verified reduction;
    /// false: conjectural {2,3}-composition basis.
    pub from_verified_reduction: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub enum TupleVerdict {
    NoRelationBelow { bound_log2: u32 },
    CandidateFound { coefficients: Vec<String> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TupleOutcome {
    /// Weights 2k+3 of the products included in the tuple.
    pub weights: Vec<u32>,
    pub verdict: TupleVerdict,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IndependenceCertificate {
    pub l: u32,
    pub precision: u32,
    pub coeff_bound_bits: u32,
    /// The chosen subset I of {5,7,...,2l+5}, |I| = l.
    pub subset_weights: Vec<u32>,
    /// One representative vector t_i per weight in I.
    pub representatives: Vec<MzvIndex>,
    /// Union of the per-weight candidate vectors.
    pub candidate_vectors: Vec<MzvIndex>,
    pub products: Vec<ProductEvidence>,
    pub tuples: Vec<TupleOutcome>,
    pub disclaimer: String,
}

pub const CERTIFICATE_DISCLAIMER: &str =
    "experimental evidence, not proof: PSLQ excludes integer relations only below the stated coefficient bound at the stated precision";

impl IndependenceCertificate {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "independence certificate (l = {}, precision {} bits, coefficient bound 2^{})\n",
            self.l, self.precision, self.coeff_bound_bits
        ));
        out.push_str(&format!(
            "chosen weights I = {:?} with representatives {}\n",
            self.subset_weights,
            self.representatives
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str("product identities:\n");
        for p in &self.products {
            out.push_str(&format!(
                "  k={} (weight {}): {} [numeric check: {}] candidates {} ({})\n",
                p.k,
                p.weight,
                p.identity,
                if p.identity_checked { "ok" } else { "FAILED" },
                p.candidates
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                if p.from_verified_reduction {
                    "verified reduction"
                } else {
                    "conjectural basis"
                }
            ));
        }
        out.push_str("tuple probes:\n");
        for t in &self.tuples {
            match &t.verdict {
                TupleVerdict::NoRelationBelow { bound_log2 } => out.push_str(&format!(
                    "  weights {:?}: no relation below 2^{}\n",
                    t.weights, bound_log2
                )),
                TupleVerdict::CandidateFound { coefficients } => out.push_str(&format!(
                    "  weights {:?}: candidate relation {:?}\n",
                    t.weights, coefficients
                )),
            }
        }
        out.push_str(&format!("NOTE: {}\n", self.disclaimer));
        out
    }
}

/// Candidate spanning vectors for the weight-w part of a product: the
/// support of the exact Hoffman reduction when the weight is within the
/// reduction cap, otherwise the conjectural basis itself.
fn weight_candidates(
    rhs: &FormalSum<MzvIndex>,
    w: u32,
) -> Result<(Vec<MzvIndex>, bool), LindepError> {
    if w <= CERTIFICATE_REDUCE_CAP {
        let mut support: Vec<MzvIndex> = Vec::new();
        for (index, _) in rhs.iter() {
            match hoffman_reduce_capped(index, CERTIFICATE_REDUCE_CAP)? {
                ReduceOutcome::Reduced(r) => {
                    for b in r.coefficients.keys() {
                        if !support.contains(b) {
                            support.push(b.clone());
                        }
                    }
                }
                ReduceOutcome::NotExpressible { .. } => {
                    // fall back to the conjectural basis for this weight
                    return Ok((enumerate_hoffman(w)?, false));
                }
            }
        }
        support.sort();
        Ok((support, true))
    } else {
        Ok((enumerate_hoffman(w)?, false))
    }
}

/// Probe the tuples {1, ζ(3)} ∪ (l-subset of {ζ(3)ζ(2k)}) and build the
/// certificate for the first subset with a NoRelationBelow outcome.
pub fn certify_corollary(l: u32, prec: u32) -> Result<IndependenceCertificate, LindepError> {
    assert!(l >= 1);
    let n_tuple = l as usize + 2;
    let needed = required_radius_bits(n_tuple, CERTIFICATE_COEFF_BITS) + 8;
    let prec = prec.max(needed as u32);
    let cfg = EvalConfig::with_prec(prec);
    let wp = prec as u64 + 64;
    let check_cfg = EvalConfig::with_prec(128);

    let z3 = eval_mzv(&MzvIndex::of(&[3]), &cfg)?;
    let rhs_list = corollary_products(l);

    let mut products = Vec::new();
    let mut product_balls = Vec::new();
    for (k, rhs) in &rhs_list {
        let z2k = eval_mzv(&MzvIndex::of(&[2 * k]), &cfg)?;
        let prod = z3.mul(&z2k, wp);
        // identity check at 128 bits, per the certificate contract
        let rhs_ball = eval_formal(rhs, &check_cfg)?;
        let prod_check = eval_product(
            &MzvIndex::of(&[3]),
            &MzvIndex::of(&[2 * k]),
            &check_cfg,
        )?;
        let identity_checked = rhs_ball.intersects(&prod_check);
        let w = 2 * k + 3;
        let (candidates, from_verified_reduction) = weight_candidates(rhs, w)?;
        products.push(ProductEvidence {
            k: *k,
            weight: w,
            identity: format!("(3)*({}) = {}", 2 * k, rhs.pretty()),
            identity_checked,
            candidates,
            from_verified_reduction,
        });
        product_balls.push(prod);
    }

    // l-subsets in deterministic order: drop the largest k first
    let mut tuples = Vec::new();
    let mut chosen: Option<Vec<u32>> = None;
    for excluded in (1..=l + 1).rev() {
        let ks: Vec<u32> = (1..=l + 1).filter(|&k| k != excluded).collect();
        let weights: Vec<u32> = ks.iter().map(|k| 2 * k + 3).collect();
        let mut values = vec![Ball::one(), z3.clone()];
        for &k in &ks {
            values.push(product_balls[k as usize - 1].clone());
        }
        match pslq(&values, CERTIFICATE_COEFF_BITS)? {
            PslqOutcome::NoRelationBelow(_) => {
                tuples.push(TupleOutcome {
                    weights: weights.clone(),
                    verdict: TupleVerdict::NoRelationBelow {
                        bound_log2: CERTIFICATE_COEFF_BITS,
                    },
                });
                chosen = Some(weights);
                break;
            }
            PslqOutcome::Candidate(c) => {
                tuples.push(TupleOutcome {
                    weights,
                    verdict: TupleVerdict::CandidateFound {
                        coefficients: c
                            .coefficients
                            .iter()
                            .map(|v| v.to_string())
                            .collect(),
                    },
                });
            }
        }
    }

    let mut candidate_vectors: Vec<MzvIndex> = Vec::new();
    for p in &products {
        for c in &p.candidates {
            if !candidate_vectors.contains(c) {
                candidate_vectors.push(c.clone());
            }
        }
    }

    let Some(subset_weights) = chosen else {
        return Err(LindepError::NoIndependentSubset(Box::new(
            IndependenceCertificate {
                l,
                precision: prec,
                coeff_bound_bits: CERTIFICATE_COEFF_BITS,
                subset_weights: vec![],
                representatives: vec![],
                candidate_vectors,
                products,
                tuples,
                disclaimer: CERTIFICATE_DISCLAIMER.into(),
            },
        )));
    };

    let representatives: Vec<MzvIndex> = subset_weights
        .iter()
        .map(|w| {
            products
                .iter()
                .find(|p| p.weight == *w)
                .and_then(|p| p.candidates.first().cloned())
                .expect("every chosen weight has candidates")
        })
        .collect();

    Ok(IndependenceCertificate {
        l,
        precision: prec,
        coeff_bound_bits: CERTIFICATE_COEFF_BITS,
        subset_weights,
        representatives,
        candidate_vectors,
        products,
        tuples,
        disclaimer: CERTIFICATE_DISCLAIMER.into(),
    })
}

/// `coeff * index ...` rendering helper shared by reports.
pub fn coefficients_strings(coeffs: &BTreeMap<MzvIndex, Rational>) -> Vec<(String, String)> {
    coeffs
        .iter()
        .map(|(k, v)| (k.canonical(), rational_str(v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn form(a: i64, b: i64, c: &[(usize, i64)], k: usize) -> LinearForm {
        LinearForm::new(
            rat_int(a),
            rat_int(b),
            c.iter().map(|&(i, v)| (i, rat_int(v))).collect(),
            k,
        )
    }

    #[test]
    fn lemma1_worked_example() {
        // f1 = 2 + 3x + 5 x y1 (k=2), f2 = 1 + 7 x y2, p=1
        let f1 = form(2, 3, &[(1, 5)], 2);
        let f2 = form(1, 0, &[(2, 7)], 2);
        let out = lemma1_eliminate(&f1, &f2, 1).unwrap();
        assert_eq!(out.constant, rat_int(3));
        assert_eq!(
            out.y_coeffs,
            BTreeMap::from([(1, rat_int(5)), (2, rat_int(-14))])
        );
        // coefficient of y_p equals C1p * A2 = 5 * 1
        assert_eq!(out.y_coeffs[&1], rat_int(5));
    }

    #[test]
    fn lemma1_b2_zero_keeps_b1a2() {
        let f1 = form(3, 4, &[(1, 2)], 3);
        let f2 = form(5, 0, &[(2, 1), (3, 9)], 3);
        let out = lemma1_eliminate(&f1, &f2, 1).unwrap();
        assert_eq!(out.constant, rat_int(4 * 5));
    }

    #[test]
    fn lemma1_preconditions() {
        let f1 = form(2, 3, &[(1, 5)], 2);
        let f2 = form(1, 0, &[(1, 7)], 2);
        assert!(matches!(
            lemma1_eliminate(&f1, &f2, 1),
            Err(LindepError::PivotNotEliminated(1))
        ));
        let f3 = form(0, 1, &[(1, 5)], 2);
        let f4 = form(1, 0, &[(2, 7)], 2);
        assert!(matches!(
            lemma1_eliminate(&f3, &f4, 1),
            Err(LindepError::ZeroConstant)
        ));
        assert!(matches!(
            lemma1_eliminate(&f1, &f4, 9),
            Err(LindepError::PivotOutOfRange { .. })
        ));
    }

    #[test]
    fn lemma1_pivot_identity_random() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x5eed_0005);
        for _ in 0..200 {
            let k = rng.random_range(2..6usize);
            let p = rng.random_range(1..=k);
            let nz = |rng: &mut StdRng| loop {
                let v = rng.random_range(-9..=9i64);
                if v != 0 {
                    break rat(v, rng.random_range(1..4i64));
                }
            };
            let mut c1 = BTreeMap::new();
            let mut c2 = BTreeMap::new();
            for i in 1..=k {
                if rng.random_range(0..3) > 0 {
                    c1.insert(i, nz(&mut rng));
                }
                if i != p && rng.random_range(0..3) > 0 {
                    c2.insert(i, nz(&mut rng));
                }
            }
            c1.insert(p, nz(&mut rng));
            let f1 = LinearForm::new(nz(&mut rng), nz(&mut rng), c1, k);
            let f2 = LinearForm::new(nz(&mut rng), nz(&mut rng), c2, k);
            let out = lemma1_eliminate(&f1, &f2, p).unwrap();
            assert_eq!(out.y_coeffs.get(&p), Some(&(f1.coeff(p) * &f2.a)));
        }
    }

    #[test]
    fn products_match_stuffle() {
        for (k, rhs) in corollary_products(3) {
            assert_eq!(
                rhs,
                stuffle(&MzvIndex::of(&[3]), &MzvIndex::of(&[2 * k]))
            );
            assert_eq!(rhs.homogeneous_weight(), Some(2 * k + 3));
        }
        let l1 = corollary_products(1);
        assert_eq!(l1.len(), 2);
        assert_eq!(
            l1[0].1,
            FormalSum::from_terms(
                [
                    (MzvIndex::of(&[5]), rat_int(1)),
                    (MzvIndex::of(&[3, 2]), rat_int(1)),
                    (MzvIndex::of(&[2, 3]), rat_int(1)),
                ]
                .into_iter()
            )
        );
    }

    #[test]
    fn certificate_l1() {
        let cert = certify_corollary(1, 256).unwrap();
        assert_eq!(cert.l, 1);
        assert_eq!(cert.subset_weights.len(), 1);
        assert!(cert.subset_weights.iter().all(|w| [5, 7].contains(w)));
        let expected: Vec<MzvIndex> = vec![
            MzvIndex::of(&[2, 3]),
            MzvIndex::of(&[3, 2]),
            MzvIndex::of(&[2, 2, 3]),
            MzvIndex::of(&[2, 3, 2]),
            MzvIndex::of(&[3, 2, 2]),
        ];
        assert_eq!(cert.candidate_vectors, expected);
        assert!(cert.products.iter().all(|p| p.identity_checked));
        assert!(cert.products.iter().all(|p| p.from_verified_reduction));
        for (t, w) in cert.representatives.iter().zip(&cert.subset_weights) {
            assert_eq!(t.weight(), *w);
        }
        assert!(cert.render_text().contains("experimental evidence"));
        // deterministic rerun
        let again = certify_corollary(1, 256).unwrap();
        assert_eq!(cert, again);
    }
}

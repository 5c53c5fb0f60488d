//! Algebraic relations among multiple zeta values.
//!
//! Three elementary families are generated at each weight:
//!   - DUALITY:  ζ(u) = ζ(dual u)
//!   - HOFFMAN:  stuffle (1)*v minus shuffle x1 ⧢ word(v); the divergent
//!     leading-1 terms cancel identically and a weight-(w+1) relation
//!     among admissible values remains
//!   - FDS (finite double shuffle): the stuffle and shuffle expansions of
//!     ζ(u)ζ(v) agree, so their difference vanishes
//! Together they drive the dimension upper bounds and the reduction onto
//! the {2,3}-composition basis.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::Ball;
use crate::dims::d_w;
use crate::exactla::{rref, EchelonResult, QMatrix, SparseRow};
use crate::formal::FormalSum;
use crate::index::{enumerate_admissible, enumerate_hoffman, IndexError, MzvIndex};
use crate::numeval::{eval_formal, EvalConfig, EvalError};
use crate::rat::Rational;
use crate::word::{dual, index_to_word, BinaryWord};

#[derive(Debug, Error)]
pub enum RelationError {
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("relation weight {0} exceeds the configured cap {1}")]
    WeightAboveCap(u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    Fds,
    Hoffman,
    Duality,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Fds, Family::Hoffman, Family::Duality];

    pub fn parse(s: &str) -> Option<Family> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fds" => Some(Family::Fds),
            "hoffman" => Some(Family::Hoffman),
            "duality" => Some(Family::Duality),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Fds => write!(f, "FDS"),
            Family::Hoffman => write!(f, "HOFFMAN"),
            Family::Duality => write!(f, "DUALITY"),
        }
    }
}

/// The generating seed of a relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Pair(MzvIndex, MzvIndex),
    Seed(MzvIndex),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Pair(u, v) => write!(f, "[{u},{v}]"),
            Provenance::Seed(u) => write!(f, "[{u}]"),
        }
    }
}

/// A weight-homogeneous rational combination of admissible indices that
/// evaluates to zero.
#[derive(Clone, Debug)]
pub struct Relation {
    pub combo: FormalSum<MzvIndex>,
    pub family: Family,
    pub provenance: Provenance,
}

impl Relation {
    /// `FDS[(2),(3)]: +1*(5) ...` — one line of the dump format.
    pub fn dump_line(&self) -> String {
        format!("{}{}: {}", self.family, self.provenance, self.combo)
    }
}

// ---------------------------------------------------------------------------
// products
// ---------------------------------------------------------------------------

/// Quasi-shuffle (harmonic) product on index sums:
/// (a,U)*(b,V) = (a, U*(b,V)) + (b, (a,U)*V) + (a+b, U*V).
/// Every term has weight w(u)+w(v). Admissibility is not required.
pub fn stuffle(u: &MzvIndex, v: &MzvIndex) -> FormalSum<MzvIndex> {
    fn rec(u: &[u32], v: &[u32]) -> Vec<(Vec<u32>, i64)> {
        if u.is_empty() {
            return vec![(v.to_vec(), 1)];
        }
        if v.is_empty() {
            return vec![(u.to_vec(), 1)];
        }
        let mut out = Vec::new();
        for (head, tail) in [
            (u[0], rec(&u[1..], v)),
            (v[0], rec(u, &v[1..])),
            (u[0] + v[0], rec(&u[1..], &v[1..])),
        ] {
            for (mut parts, c) in tail {
                parts.insert(0, head);
                out.push((parts, c));
            }
        }
        out
    }
    FormalSum::from_terms(
        rec(u.parts(), v.parts())
            .into_iter()
            .map(|(parts, c)| (MzvIndex::of(&parts), Rational::from_integer(c.into()))),
    )
}

/// Shuffle product on words: the sum over all interleavings preserving
/// both internal orders. Coefficient mass is C(|a|+|b|, |a|).
pub fn shuffle(a: &BinaryWord, b: &BinaryWord) -> FormalSum<BinaryWord> {
    type Memo = HashMap<(Vec<crate::word::Letter>, Vec<crate::word::Letter>), FormalSum<BinaryWord>>;
    fn rec(a: &[crate::word::Letter], b: &[crate::word::Letter], memo: &mut Memo) -> FormalSum<BinaryWord> {
        if a.is_empty() {
            return FormalSum::singleton(BinaryWord::new(b.to_vec()));
        }
        if b.is_empty() {
            return FormalSum::singleton(BinaryWord::new(a.to_vec()));
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(s) = memo.get(&key) {
            return s.clone();
        }
        let mut out = FormalSum::zero();
        for (head, rest) in [(a[0], rec(&a[1..], b, memo)), (b[0], rec(a, &b[1..], memo))] {
            for (w, c) in rest.iter() {
                let mut letters = Vec::with_capacity(w.len() + 1);
                letters.push(head);
                letters.extend_from_slice(w.letters());
                out.add_term(BinaryWord::new(letters), c.clone());
            }
        }
        memo.insert(key, out.clone());
        out
    }
    rec(a.letters(), b.letters(), &mut HashMap::new())
}

// ---------------------------------------------------------------------------
// relation families
// ---------------------------------------------------------------------------

/// ζ(u) - ζ(dual u); the zero sum for self-dual u.
pub fn duality_rel(u: &MzvIndex) -> Result<Relation, RelationError> {
    let d = dual(u)?;
    let combo = FormalSum::singleton(u.clone()) - FormalSum::singleton(d);
    Ok(Relation {
        combo,
        family: Family::Duality,
        provenance: Provenance::Seed(u.clone()),
    })
}

/// Hoffman's relation for admissible v: [(1)*v] - [x1 ⧢ word(v)], weight
/// w(v)+1. The divergent terms (leading part 1) must cancel identically;
/// a survivor indicates a bug in the product code.
pub fn hoffman_rel(v: &MzvIndex) -> Result<Relation, RelationError> {
    v.ensure_admissible()?;
    let one = MzvIndex::of(&[1]);
    let st = stuffle(&one, v);
    let sh = shuffle(&BinaryWord::parse("1").unwrap(), &index_to_word(v))
        .decode()
        .expect("shuffle terms keep the trailing x1");
    let combo = st - sh;
    assert!(
        combo.keys().all(|k| k.is_admissible()),
        "divergent terms failed to cancel in the Hoffman relation of {v}"
    );
    Ok(Relation {
        combo,
        family: Family::Hoffman,
        provenance: Provenance::Seed(v.clone()),
    })
}

/// Finite double shuffle for admissible u, v: stuffle(u,v) minus the
/// decoded shuffle of the corresponding words.
pub fn fds_rel(u: &MzvIndex, v: &MzvIndex) -> Result<Relation, RelationError> {
    u.ensure_admissible()?;
    v.ensure_admissible()?;
    let st = stuffle(u, v);
    let sh = shuffle(&index_to_word(u), &index_to_word(v))
        .decode()
        .expect("shuffle terms keep the trailing x1");
    Ok(Relation {
        combo: st - sh,
        family: Family::Fds,
        provenance: Provenance::Pair(u.clone(), v.clone()),
    })
}

/// Every relation of the requested families at weight `w`, in a fixed
/// deterministic order (FDS by split then seeds, HOFFMAN by seed, DUALITY
/// by seed). Zero combinations are kept out.
pub fn generate_relations(
    w: u32,
    families: &BTreeSet<Family>,
) -> Result<Vec<Relation>, RelationError> {
    let mut out = Vec::new();
    if families.contains(&Family::Fds) {
        for w1 in 2..=w / 2 {
            let w2 = w - w1;
            if w2 < 2 {
                continue;
            }
            let us = enumerate_admissible(w1)?;
            let vs = enumerate_admissible(w2)?;
            for (i, u) in us.iter().enumerate() {
                let vs_slice: &[MzvIndex] = if w1 == w2 { &vs[i..] } else { &vs[..] };
                for v in vs_slice {
                    out.push(fds_rel(u, v)?);
                }
            }
        }
    }
    if families.contains(&Family::Hoffman) && w >= 3 {
        for v in enumerate_admissible(w - 1)? {
            out.push(hoffman_rel(&v)?);
        }
    }
    if families.contains(&Family::Duality) {
        for u in enumerate_admissible(w)? {
            out.push(duality_rel(&u)?);
        }
    }
    out.retain(|r| !r.combo.is_zero());
    for r in &out {
        debug_assert_eq!(r.combo.homogeneous_weight(), Some(w));
    }
    Ok(out)
}

/// Primitive integer image of a combo row used for duplicate detection.
fn normalized_row_key(row: &SparseRow) -> Vec<(usize, num_bigint::BigInt)> {
    use num_integer::Integer as _;
    use num_traits::{Signed, Zero};
    let mut lcm = num_bigint::BigInt::one();
    for v in row.values() {
        lcm = lcm.lcm(v.denom());
    }
    let mut ints: Vec<(usize, num_bigint::BigInt)> = row
        .iter()
        .map(|(&c, v)| (c, v.numer() * (&lcm / v.denom())))
        .collect();
    let mut g = num_bigint::BigInt::zero();
    for (_, v) in &ints {
        g = g.gcd(v);
    }
    if ints.first().is_some_and(|(_, v)| v.is_negative()) {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in ints.iter_mut() {
            *v = &*v / &g;
        }
    }
    ints
}

/// Matrix of relations over the weight-w admissible column basis, with
/// zero rows and (scale-normalized) duplicate rows dropped. Returns the
/// surviving relations aligned with the matrix rows.
pub fn relation_matrix(
    w: u32,
    relations: Vec<Relation>,
) -> Result<(QMatrix, Vec<Relation>), RelationError> {
    let columns = enumerate_admissible(w)?;
    let col_of: HashMap<&MzvIndex, usize> =
        columns.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut rows = Vec::new();
    let mut kept = Vec::new();
    let mut seen = BTreeSet::new();
    for rel in relations {
        let row: SparseRow = rel
            .combo
            .iter()
            .map(|(k, c)| (*col_of.get(k).expect("weight-homogeneous combo"), c.clone()))
            .collect();
        if row.is_empty() {
            continue;
        }
        if seen.insert(normalized_row_key(&row)) {
            rows.push(row);
            kept.push(rel);
        }
    }
    Ok((QMatrix::with_labels(columns.len(), rows, columns), kept))
}

pub const DEFAULT_RELATION_WEIGHT_CAP: u32 = 12;

pub fn build_relations(w: u32, families: &BTreeSet<Family>) -> Result<QMatrix, RelationError> {
    build_relations_capped(w, families, DEFAULT_RELATION_WEIGHT_CAP)
}

pub fn build_relations_capped(
    w: u32,
    families: &BTreeSet<Family>,
    cap: u32,
) -> Result<QMatrix, RelationError> {
    if w < 2 || w > cap {
        return Err(RelationError::WeightAboveCap(w, cap));
    }
    let rels = generate_relations(w, families)?;
    Ok(relation_matrix(w, rels)?.0)
}

// ---------------------------------------------------------------------------
// dimension bounds
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DimensionReport {
    pub weight: u32,
    pub num_unknowns: u64,
    pub num_relations: usize,
    pub rank: usize,
    pub upper_bound: u64,
    pub conjectured: u64,
    pub matches_conjecture: bool,
}

/// Upper bound on the weight-w dimension from the generated relations:
/// 2^(w-2) unknowns minus the exact rank.
pub fn dimension_bound(w: u32) -> Result<DimensionReport, RelationError> {
    dimension_bound_capped(w, DEFAULT_RELATION_WEIGHT_CAP)
}

pub fn dimension_bound_capped(w: u32, cap: u32) -> Result<DimensionReport, RelationError> {
    let families = BTreeSet::from(Family::ALL);
    let m = build_relations_capped(w, &families, cap)?;
    let rank = crate::exactla::rank(&m);
    let num_unknowns = 1u64 << (w - 2);
    let upper_bound = num_unknowns - rank as u64;
    let conjectured = d_w(w);
    Ok(DimensionReport {
        weight: w,
        num_unknowns,
        num_relations: m.nrows(),
        rank,
        upper_bound,
        conjectured,
        matches_conjecture: upper_bound == conjectured,
    })
}

// ---------------------------------------------------------------------------
// Hoffman-basis reduction
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Reduction {
    pub target: MzvIndex,
    pub coefficients: BTreeMap<MzvIndex, Rational>,
    pub residual_check: Ball,
}

#[derive(Clone, Debug)]
pub enum ReduceOutcome {
    Reduced(Reduction),
    /// The relation families span too little at this weight; an honest
    /// non-result, not an error.
    NotExpressible { target: MzvIndex, weight: u32 },
}

/// Per-weight reduced system: RREF with non-Hoffman columns eliminated
/// first, shared by every reduction at that weight.
struct WeightSystem {
    columns: Vec<MzvIndex>,
    hoffman_cols: BTreeSet<usize>,
    echelon: EchelonResult,
    /// pivot column -> row position in the echelon
    pivot_row: HashMap<usize, usize>,
}

fn weight_system(w: u32, cap: u32) -> Result<Arc<WeightSystem>, RelationError> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<WeightSystem>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(sys) = cache.lock().unwrap().get(&w) {
        return Ok(sys.clone());
    }
    let families = BTreeSet::from(Family::ALL);
    let matrix = build_relations_capped(w, &families, cap)?;
    let columns = matrix.column_labels().expect("labeled").to_vec();
    let hoffman: BTreeSet<MzvIndex> = enumerate_hoffman(w)?.into_iter().collect();
    let hoffman_cols: BTreeSet<usize> = columns
        .iter()
        .enumerate()
        .filter(|(_, c)| hoffman.contains(c))
        .map(|(i, _)| i)
        .collect();
    let mut order: Vec<usize> = (0..columns.len())
        .filter(|c| !hoffman_cols.contains(c))
        .collect();
    order.extend(hoffman_cols.iter().copied());
    let echelon = rref(&matrix, &order);
    let pivot_row = echelon
        .pivot_columns
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let sys = Arc::new(WeightSystem {
        columns,
        hoffman_cols,
        echelon,
        pivot_row,
    });
    cache.lock().unwrap().insert(w, sys.clone());
    Ok(sys)
}

pub const RESIDUAL_CHECK_PREC: u32 = 100;

/// Reduce ζ(target) to the Hoffman basis of its weight. The reduction is
/// exact; the residual ball re-evaluates target minus the combination at
/// 100 bits and must contain zero.
pub fn hoffman_reduce(target: &MzvIndex) -> Result<ReduceOutcome, RelationError> {
    hoffman_reduce_capped(target, DEFAULT_RELATION_WEIGHT_CAP)
}

pub fn hoffman_reduce_capped(
    target: &MzvIndex,
    cap: u32,
) -> Result<ReduceOutcome, RelationError> {
    target.ensure_admissible()?;
    let w = target.weight();
    if w < 2 || w > cap {
        return Err(RelationError::WeightAboveCap(w, cap));
    }

    let hoffman: Vec<MzvIndex> = enumerate_hoffman(w)?;
    if hoffman.contains(target) {
        return Ok(ReduceOutcome::Reduced(Reduction {
            target: target.clone(),
            coefficients: BTreeMap::from([(target.clone(), Rational::one())]),
            residual_check: Ball::zero(),
        }));
    }

    let sys = weight_system(w, cap)?;
    let t_col = sys
        .columns
        .iter()
        .position(|c| c == target)
        .expect("admissible index of this weight is a column");

    let coefficients: BTreeMap<MzvIndex, Rational> = match sys.pivot_row.get(&t_col) {
        Some(&row_i) => {
            let row = &sys.echelon.reduced_rows[row_i];
            if row
                .keys()
                .any(|c| *c != t_col && !sys.hoffman_cols.contains(c))
            {
                // a non-Hoffman column beyond the pivot survived: the
                // shared ordering cannot separate this target
                return Ok(ReduceOutcome::NotExpressible {
                    target: target.clone(),
                    weight: w,
                });
            }
            row.iter()
                .filter(|(&c, _)| c != t_col)
                .map(|(&c, v)| (sys.columns[c].clone(), -v))
                .collect()
        }
        None => {
            return Ok(ReduceOutcome::NotExpressible {
                target: target.clone(),
                weight: w,
            })
        }
    };

    // numeric confirmation at 100 bits
    let mut residual_sum = FormalSum::singleton(target.clone());
    for (b, c) in &coefficients {
        residual_sum.add_term(b.clone(), -c.clone());
    }
    let residual_check = eval_formal(&residual_sum, &EvalConfig::with_prec(RESIDUAL_CHECK_PREC))?;
    Ok(ReduceOutcome::Reduced(Reduction {
        target: target.clone(),
        coefficients,
        residual_check,
    }))
}

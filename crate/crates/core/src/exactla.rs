//! Exact sparse linear algebra over Q.
//!
//! Relation systems are sparse matrices with small integer entries; rank
//! and reduced echelon form are computed exactly. The forward pass is
//! fraction-free: rows are scaled to primitive integer vectors and
//! eliminated by lcm cross-multiplication with content stripping, so no
//! rational arithmetic happens until back-substitution. Pivoting is the
//! first nonzero entry under the supplied column order, ties broken by
//! lowest row index, which makes every reduction reproducible.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::index::MzvIndex;
use crate::rat::Rational;

/// column index -> nonzero coefficient
pub type SparseRow = BTreeMap<usize, Rational>;

#[derive(Clone, Debug)]
pub struct QMatrix {
    ncols: usize,
    rows: Vec<SparseRow>,
    column_labels: Option<Vec<MzvIndex>>,
}

impl QMatrix {
    pub fn new(ncols: usize, rows: Vec<SparseRow>) -> Self {
        for r in &rows {
            debug_assert!(r.keys().all(|&c| c < ncols));
            debug_assert!(r.values().all(|v| !v.is_zero()));
        }
        QMatrix {
            ncols,
            rows,
            column_labels: None,
        }
    }

    pub fn with_labels(ncols: usize, rows: Vec<SparseRow>, labels: Vec<MzvIndex>) -> Self {
        assert_eq!(labels.len(), ncols);
        QMatrix {
            ncols,
            rows,
            column_labels: Some(labels),
        }
    }

    /// Dense integer constructor for tests and small systems.
    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let sparse = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, &v)| (j, Rational::from_integer(v.into())))
                    .collect()
            })
            .collect();
        QMatrix::new(ncols, sparse)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn column_labels(&self) -> Option<&[MzvIndex]> {
        self.column_labels.as_deref()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut rows: Vec<SparseRow> = vec![BTreeMap::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                rows[j].insert(i, v.clone());
            }
        }
        rows.retain(|r| !r.is_empty());
        // transpose of an m x n matrix has m columns
        QMatrix::new(self.rows.len().max(1), rows)
    }
}

#[derive(Clone, Debug)]
pub struct EchelonResult {
    pub rank: usize,
    /// Original column ids of the pivots, in elimination order.
    pub pivot_columns: Vec<usize>,
    /// Reduced row-echelon rows (pivot coefficient 1), keyed by original
    /// column ids, ordered by pivot position under the elimination order.
    pub reduced_rows: Vec<SparseRow>,
    /// Human-readable elimination log, populated on request.
    pub transform_trace: Option<Vec<String>>,
}

type IntRow = BTreeMap<usize, BigInt>;

/// Scale a rational row to a primitive integer row with positive leading
/// coefficient. Preserves the row space.
fn integerize(row: &SparseRow, pos_of: &[usize]) -> IntRow {
    let mut lcm = BigInt::one();
    for v in row.values() {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: IntRow = row
        .iter()
        .map(|(&c, v)| (pos_of[c], v.numer() * (&lcm / v.denom())))
        .collect();
    strip_content(&mut out);
    out
}

fn strip_content(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    let lead_negative = row.values().next().is_some_and(|v| v.is_negative());
    if lead_negative {
        g = -g;
    }
    if !g.is_one() {
        for v in row.values_mut() {
            *v = &*v / &g;
        }
    }
}

/// dest := (lead/g)*dest - (dest[pos]/g)*src, then strip content.
/// Eliminates position `pos`, fraction-free.
fn eliminate(dest: &mut IntRow, src: &IntRow, pos: usize) {
    let a = dest.get(&pos).cloned().expect("dest must hit the pivot");
    let b = src.get(&pos).cloned().expect("src must be a pivot row");
    let g = a.gcd(&b);
    let mul_dest = &b / &g;
    let mul_src = &a / &g;
    let mut out: IntRow = BTreeMap::new();
    for (&c, v) in dest.iter() {
        out.insert(c, v * &mul_dest);
    }
    for (&c, v) in src.iter() {
        let delta = v * &mul_src;
        let slot = out.entry(c).or_insert_with(BigInt::zero);
        *slot -= delta;
        if slot.is_zero() {
            out.remove(&c);
        }
    }
    debug_assert!(!out.contains_key(&pos));
    strip_content(&mut out);
    *dest = out;
}

pub fn rref(m: &QMatrix, column_order: &[usize]) -> EchelonResult {
    rref_impl(m, column_order, false)
}

pub fn rref_traced(m: &QMatrix, column_order: &[usize]) -> EchelonResult {
    rref_impl(m, column_order, true)
}

fn rref_impl(m: &QMatrix, column_order: &[usize], trace: bool) -> EchelonResult {
    assert_eq!(column_order.len(), m.ncols, "column order must be complete");
    let mut pos_of = vec![usize::MAX; m.ncols];
    for (pos, &col) in column_order.iter().enumerate() {
        assert!(
            pos_of[col] == usize::MAX,
            "column order must be a permutation"
        );
        pos_of[col] = pos;
    }

    let mut log = trace.then(Vec::new);
    let mut work: Vec<IntRow> = m
        .rows
        .iter()
        .map(|r| integerize(r, &pos_of))
        .filter(|r| !r.is_empty())
        .collect();

    // forward pass
    let mut pivots: Vec<(usize, IntRow)> = Vec::new();
    for pos in 0..m.ncols {
        let Some(i) = work
            .iter()
            .position(|r| r.keys().next() == Some(&pos))
        else {
            continue;
        };
        let pivot = work.remove(i);
        if let Some(log) = log.as_mut() {
            log.push(format!(
                "pivot at column {} (position {pos})",
                column_order[pos]
            ));
        }
        let mut j = 0;
        while j < work.len() {
            if work[j].contains_key(&pos) {
                eliminate(&mut work[j], &pivot, pos);
                if let Some(log) = log.as_mut() {
                    log.push(format!("eliminate position {pos} from a later row"));
                }
                if work[j].is_empty() {
                    work.remove(j);
                    continue;
                }
            }
            j += 1;
        }
        pivots.push((pos, pivot));
    }

    // back substitution on rational rows, pivot coefficient normalized to 1
    let mut reduced: Vec<(usize, SparseRow)> = pivots
        .iter()
        .map(|(pos, row)| {
            let lead = row[pos].clone();
            let rat_row: SparseRow = row
                .iter()
                .map(|(&p, v)| (p, Rational::new(v.clone(), lead.clone())))
                .collect();
            (*pos, rat_row)
        })
        .collect();
    for i in (0..reduced.len()).rev() {
        let (pos_i, row_i) = reduced[i].clone();
        for j in 0..i {
            let Some(c) = reduced[j].1.get(&pos_i).cloned() else {
                continue;
            };
            if let Some(log) = log.as_mut() {
                log.push(format!(
                    "clear position {pos_i} above its pivot (factor {c})"
                ));
            }
            let target = &mut reduced[j].1;
            for (&p, v) in &row_i {
                let delta = &c * v;
                let slot = target.entry(p).or_insert_with(Rational::zero);
                *slot -= delta;
                if slot.is_zero() {
                    target.remove(&p);
                }
            }
        }
    }

    let pivot_columns: Vec<usize> = reduced.iter().map(|(pos, _)| column_order[*pos]).collect();
    let reduced_rows: Vec<SparseRow> = reduced
        .into_iter()
        .map(|(_, row)| {
            row.into_iter()
                .map(|(pos, v)| (column_order[pos], v))
                .collect()
        })
        .collect();
    EchelonResult {
        rank: pivot_columns.len(),
        pivot_columns,
        reduced_rows,
        transform_trace: log,
    }
}

pub fn rank(m: &QMatrix) -> usize {
    let order: Vec<usize> = (0..m.ncols).collect();
    rref(m, &order).rank
}

/// Reduce `v` against RREF rows; the remainder is zero iff `v` lies in the
/// row space.
pub fn in_row_space(reduced: &EchelonResult, v: &SparseRow) -> bool {
    let mut v = v.clone();
    for (pivot, row) in reduced.pivot_columns.iter().zip(&reduced.reduced_rows) {
        let Some(c) = v.get(pivot).cloned() else {
            continue;
        };
        for (&p, rv) in row {
            let delta = &c * rv;
            let slot = v.entry(p).or_insert_with(Rational::zero);
            *slot -= delta;
            if slot.is_zero() {
                v.remove(&p);
            }
        }
    }
    v.is_empty()
}

/// Coefficients c_b with `e_target - sum c_b e_b` in the row space of
/// `relations`, or None when the quotient classes do not permit it.
///
/// The elimination order puts every column outside `basis_cols` and the
/// target first, then the target, then the basis; a pivot landing exactly
/// on the target column yields the certificate row.
pub fn express_in_span(
    relations: &QMatrix,
    target_col: usize,
    basis_cols: &BTreeSet<usize>,
) -> Option<BTreeMap<usize, Rational>> {
    assert!(target_col < relations.ncols);
    assert!(
        !basis_cols.contains(&target_col),
        "target must not be a basis column"
    );
    let mut order: Vec<usize> = (0..relations.ncols)
        .filter(|c| *c != target_col && !basis_cols.contains(c))
        .collect();
    order.push(target_col);
    order.extend(basis_cols.iter().copied());
    let red = rref(relations, &order);
    let i = red.pivot_columns.iter().position(|&c| c == target_col)?;
    let row = &red.reduced_rows[i];
    // echelon structure: entries of this row outside the pivot lie in the
    // basis columns
    debug_assert!(row
        .keys()
        .all(|c| *c == target_col || basis_cols.contains(c)));
    Some(
        row.iter()
            .filter(|(&c, _)| c != target_col)
            .map(|(&c, v)| (c, -v))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn natural(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn identity_and_proportional_rows() {
        let id = QMatrix::from_dense(&[vec![1, 0], vec![0, 1]]);
        let r = rref(&id, &natural(2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_columns, vec![0, 1]);

        let prop = QMatrix::from_dense(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(rank(&prop), 1);

        let zero = QMatrix::from_dense(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(rank(&zero), 0);
        for n in 1..=4 {
            let eye: Vec<Vec<i64>> = (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect();
            assert_eq!(rank(&QMatrix::from_dense(&eye)), n);
        }
    }

    #[test]
    fn rref_is_idempotent() {
        let m = QMatrix::from_dense(&[
            vec![2, 4, 6, 1],
            vec![1, 2, 3, 0],
            vec![0, 3, 3, 2],
            vec![1, 5, 6, 2],
        ]);
        let r1 = rref(&m, &natural(4));
        let again = QMatrix::new(4, r1.reduced_rows.clone());
        let r2 = rref(&again, &natural(4));
        assert_eq!(r1.rank, r2.rank);
        assert_eq!(r1.reduced_rows, r2.reduced_rows);
        assert_eq!(r1.pivot_columns, r2.pivot_columns);
    }

    #[test]
    fn trace_is_recorded() {
        let m = QMatrix::from_dense(&[vec![2, 1], vec![4, 3]]);
        let r = rref_traced(&m, &natural(2));
        let log = r.transform_trace.expect("trace requested");
        assert!(log.iter().any(|l| l.contains("pivot at column 0")));
        assert!(rref(&m, &natural(2)).transform_trace.is_none());
    }

    /// Independent oracle: rank = size of the largest square submatrix
    /// with nonzero determinant (cofactor expansion over i128).
    fn det_i128(m: &[Vec<i128>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut det = 0i128;
        for (j, &v) in m[0].iter().enumerate() {
            if v == 0 {
                continue;
            }
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            det += sign * v * det_i128(&minor);
        }
        det
    }

    fn rank_oracle(m: &[Vec<i64>]) -> usize {
        let nr = m.len();
        let nc = m[0].len();
        for k in (1..=nr.min(nc)).rev() {
            let row_subsets = subsets(nr, k);
            let col_subsets = subsets(nc, k);
            for rs in &row_subsets {
                for cs in &col_subsets {
                    let sub: Vec<Vec<i128>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| m[i][j] as i128).collect())
                        .collect();
                    if det_i128(&sub) != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    #[test]
    fn rank_matches_minor_oracle() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0001);
        for trial in 0..12 {
            let nr = rng.random_range(2..=6);
            let nc = rng.random_range(2..=6);
            // bias toward singular matrices: small entries, some zero rows
            let dense: Vec<Vec<i64>> = (0..nr)
                .map(|_| (0..nc).map(|_| rng.random_range(-3..=3)).collect())
                .collect();
            let m = QMatrix::from_dense(&dense);
            assert_eq!(rank(&m), rank_oracle(&dense), "trial {trial}: {dense:?}");
        }
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0002);
        for _ in 0..20 {
            let nr = rng.random_range(1..=7);
            let nc = rng.random_range(1..=7);
            let dense: Vec<Vec<i64>> = (0..nr)
                .map(|_| (0..nc).map(|_| rng.random_range(-10..=10)).collect())
                .collect();
            let m = QMatrix::from_dense(&dense);
            assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }

    #[test]
    fn express_single_substitution() {
        // relations = {e0 - e1}, target 0, basis {1} -> {1: 1}
        let m = QMatrix::from_dense(&[vec![1, -1]]);
        let coeffs = express_in_span(&m, 0, &BTreeSet::from([1])).unwrap();
        assert_eq!(coeffs, BTreeMap::from([(1, Rational::from_integer(1.into()))]));
    }

    #[test]
    fn express_not_expressible_without_relations() {
        let m = QMatrix::new(2, vec![]);
        assert!(express_in_span(&m, 0, &BTreeSet::from([1])).is_none());
    }

    #[test]
    fn express_substituted_back_in_row_space() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0003);
        let mut hits = 0;
        for _ in 0..40 {
            let nr = rng.random_range(1..=5);
            let nc = rng.random_range(2..=6);
            let dense: Vec<Vec<i64>> = (0..nr)
                .map(|_| (0..nc).map(|_| rng.random_range(-4..=4)).collect())
                .collect();
            let m = QMatrix::from_dense(&dense);
            let target = rng.random_range(0..nc);
            let basis: BTreeSet<usize> = (0..nc).filter(|&c| c != target).take(2).collect();
            if basis.contains(&target) {
                continue;
            }
            if let Some(coeffs) = express_in_span(&m, target, &basis) {
                hits += 1;
                let mut v: SparseRow =
                    BTreeMap::from([(target, Rational::from_integer(1.into()))]);
                for (c, q) in &coeffs {
                    if !q.is_zero() {
                        v.insert(*c, -q.clone());
                    }
                }
                let red = rref(&m, &natural(nc));
                assert!(in_row_space(&red, &v), "{dense:?} target {target}");
            }
        }
        assert!(hits > 0, "no expressible instance sampled");
    }
}

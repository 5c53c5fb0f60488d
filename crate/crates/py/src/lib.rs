//! Python bindings: the main types and operations of mzvlab exposed as a
//! small extension module. Indices travel as canonical strings ("3,2,2"),
//! rationals as "p/q" strings, and every numeric result is a `Ball` with
//! guaranteed-digit rendering.

use std::collections::BTreeMap;
use std::str::FromStr;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use mzvlab::ball::Ball as CoreBall;
use mzvlab::dims::{alpha as alpha_ball, d_sequence};
use mzvlab::index::MzvIndex;
use mzvlab::lindep::pslq::{pslq as run_pslq, PslqOutcome};
use mzvlab::lindep::certify_corollary;
use mzvlab::numeval::{eval_mzv, eval_naive as naive, zeta_two_pow as z2k, EvalConfig};
use mzvlab::rat::rational_str;
use mzvlab::relations::{
    dimension_bound, hoffman_reduce, ReduceOutcome,
};
use mzvlab::render::{guaranteed_decimal, BallRepr};
use mzvlab::word::{dual as dual_index, index_to_word};

fn parse_index(s: &str) -> PyResult<MzvIndex> {
    MzvIndex::from_str(s).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A rigorous enclosure: midpoint ± radius.
#[pyclass(name = "Ball")]
#[derive(Clone)]
struct PyBall {
    inner: CoreBall,
}

#[pymethods]
impl PyBall {
    /// Decimal digits guaranteed by the radius, with a trailing ellipsis.
    fn decimal(&self) -> String {
        guaranteed_decimal(&self.inner)
    }

    /// Exact dyadic form `0x<mant>p<exp> ± 2^<e>`.
    fn dyadic(&self) -> String {
        BallRepr::from_ball(&self.inner).display()
    }

    fn midpoint(&self) -> f64 {
        self.inner.midpoint().to_f64()
    }

    /// log2 of an upper bound on the radius; None for exact balls.
    fn radius_log2(&self) -> Option<i64> {
        self.inner.radius().magnitude_exp()
    }

    fn contains_zero(&self) -> bool {
        self.inner.contains_zero()
    }

    fn intersects(&self, other: &PyBall) -> bool {
        self.inner.intersects(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Ball({})", self.decimal())
    }
}

/// ζ(index) with radius <= 2^-prec.
#[pyfunction]
#[pyo3(signature = (index, prec = 128))]
fn eval(index: &str, prec: u32) -> PyResult<PyBall> {
    let ix = parse_index(index)?;
    let ball = eval_mzv(&ix, &EvalConfig::with_prec(prec))
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(PyBall { inner: ball })
}

/// Truncated defining series with a proven tail bound in the radius.
#[pyfunction]
fn eval_naive(index: &str, terms: u64) -> PyResult<PyBall> {
    let ix = parse_index(index)?;
    let ball = naive(&ix, terms).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(PyBall { inner: ball })
}

/// ζ((2)_k) = pi^{2k}/(2k+1)!.
#[pyfunction]
#[pyo3(signature = (k, prec = 128))]
fn zeta_two_pow(k: u32, prec: u32) -> PyResult<PyBall> {
    if k < 1 {
        return Err(PyValueError::new_err("k must be >= 1"));
    }
    Ok(PyBall {
        inner: z2k(k, &EvalConfig::with_prec(prec)),
    })
}

/// Enclosure of the real root of x^3 - x - 1.
#[pyfunction]
#[pyo3(signature = (prec = 64))]
fn alpha(prec: u32) -> PyResult<PyBall> {
    if prec < 8 {
        return Err(PyValueError::new_err("prec must be >= 8"));
    }
    Ok(PyBall {
        inner: alpha_ball(prec),
    })
}

/// Quasi-shuffle expansion of ζ(u)ζ(v): {index: coefficient} strings.
#[pyfunction]
fn stuffle(u: &str, v: &str) -> PyResult<BTreeMap<String, String>> {
    let s = mzvlab::relations::stuffle(&parse_index(u)?, &parse_index(v)?);
    Ok(s.iter()
        .map(|(k, c)| (k.canonical(), rational_str(c)))
        .collect())
}

/// Shuffle expansion of the index words, decoded back to indices.
#[pyfunction]
fn shuffle(u: &str, v: &str) -> PyResult<BTreeMap<String, String>> {
    let (u, v) = (parse_index(u)?, parse_index(v)?);
    for ix in [&u, &v] {
        ix.ensure_admissible()
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
    }
    let words = mzvlab::relations::shuffle(&index_to_word(&u), &index_to_word(&v));
    let decoded = words
        .decode()
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(decoded
        .iter()
        .map(|(k, c)| (k.canonical(), rational_str(c)))
        .collect())
}

/// MZV duality (reverse the word, swap the letters).
#[pyfunction]
fn dual(index: &str) -> PyResult<String> {
    let d = dual_index(&parse_index(index)?).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(d.canonical())
}

/// d_0..d_max of the dimension recurrence.
#[pyfunction]
fn dims(max: u32) -> PyResult<Vec<u64>> {
    if max > 10_000 {
        return Err(PyValueError::new_err("max too large"));
    }
    Ok(d_sequence(max).values().to_vec())
}

/// Dimension upper-bound report at a weight, as a dict.
#[pyfunction]
fn bound(py: Python<'_>, weight: u32) -> PyResult<PyObject> {
    let r = dimension_bound(weight).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("weight", r.weight)?;
    d.set_item("num_unknowns", r.num_unknowns)?;
    d.set_item("num_relations", r.num_relations)?;
    d.set_item("rank", r.rank)?;
    d.set_item("upper_bound", r.upper_bound)?;
    d.set_item("conjectured", r.conjectured)?;
    d.set_item("matches_conjecture", r.matches_conjecture)?;
    Ok(d.into())
}

/// Reduce ζ(index) to the {2,3} basis: {basis index: rational coeff}, or
/// None when the relation families cannot express it.
#[pyfunction]
fn reduce(index: &str) -> PyResult<Option<BTreeMap<String, String>>> {
    let target = parse_index(index)?;
    match hoffman_reduce(&target).map_err(|e| PyValueError::new_err(e.to_string()))? {
        ReduceOutcome::Reduced(r) => {
            if !r.residual_check.contains_zero() {
                return Err(PyRuntimeError::new_err(
                    "reduction residual excludes zero (bug)",
                ));
            }
            Ok(Some(
                r.coefficients
                    .iter()
                    .map(|(k, c)| (k.canonical(), rational_str(c)))
                    .collect(),
            ))
        }
        ReduceOutcome::NotExpressible { .. } => Ok(None),
    }
}

/// PSLQ probe. Entries are `"1"` (the constant) or admissible indices.
/// Returns a list of integer coefficients, or None when no relation with
/// coefficients below 2^max_coeff_bits exists.
#[pyfunction]
#[pyo3(signature = (entries, prec = 256, max_coeff_bits = 20))]
fn pslq(entries: Vec<String>, prec: u32, max_coeff_bits: u32) -> PyResult<Option<Vec<i64>>> {
    let cfg = EvalConfig::with_prec(prec);
    let mut values = Vec::new();
    for e in &entries {
        if e.trim() == "1" {
            values.push(CoreBall::one());
        } else {
            let ix = parse_index(e)?;
            values.push(
                eval_mzv(&ix, &cfg).map_err(|err| PyValueError::new_err(err.to_string()))?,
            );
        }
    }
    match run_pslq(&values, max_coeff_bits).map_err(|e| PyValueError::new_err(e.to_string()))? {
        PslqOutcome::Candidate(c) => Ok(Some(
            c.coefficients
                .iter()
                .map(|v| i64::try_from(v).map_err(|_| {
                    PyRuntimeError::new_err("coefficient exceeds i64")
                }))
                .collect::<PyResult<Vec<i64>>>()?,
        )),
        PslqOutcome::NoRelationBelow(_) => Ok(None),
    }
}

/// Experimental independence certificate as a JSON string.
#[pyfunction]
#[pyo3(signature = (l, prec = 512))]
fn certify(l: u32, prec: u32) -> PyResult<String> {
    let cert = certify_corollary(l, prec).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    serde_json::to_string_pretty(&cert).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn mzvlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBall>()?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(eval_naive, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_two_pow, m)?)?;
    m.add_function(wrap_pyfunction!(alpha, m)?)?;
    m.add_function(wrap_pyfunction!(stuffle, m)?)?;
    m.add_function(wrap_pyfunction!(shuffle, m)?)?;
    m.add_function(wrap_pyfunction!(dual, m)?)?;
    m.add_function(wrap_pyfunction!(dims, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(pslq, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    Ok(())
}

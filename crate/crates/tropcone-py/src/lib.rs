//! Python bindings: sign patterns, path counting, extreme-ray
//! enumeration and the pattern search, exposed as the `tropcone_py`
//! extension module.
//!
//! Rays are returned as dicts with `coords` (ints, `None` for the bottom
//! element) and 1-based path index lists `I` and `J`.

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tropcone::cyclic::SignedCyclicSpec;
use tropcone::search::{self, SearchMode, SearchOptions};
use tropcone::{bounds, paths, Error};

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::Overflow => PyOverflowError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A p x d matrix of signs.
#[pyclass(name = "SignPattern", frozen)]
struct PySignPattern {
    inner: paths::SignPattern,
}

#[pymethods]
impl PySignPattern {
    /// Parses the textual format: optional `p d` header, then rows of
    /// `+`/`-` characters.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PySignPattern {
            inner: paths::SignPattern::parse(text).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn all_plus(p: usize, d: usize) -> Self {
        PySignPattern {
            inner: paths::SignPattern::all_plus(p, d),
        }
    }

    /// Columns alternate +, -, +, ...
    #[staticmethod]
    fn alternating(p: usize, d: usize) -> Self {
        PySignPattern {
            inner: paths::SignPattern::alternating(p, d),
        }
    }

    /// Decodes a p*d-bit integer, bit `i*d + j` set meaning entry
    /// `(i, j)` is negative.
    #[staticmethod]
    fn from_code(p: usize, d: usize, code: u64) -> PyResult<Self> {
        Ok(PySignPattern {
            inner: paths::SignPattern::from_code(p, d, code).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    fn text(&self) -> String {
        self.inner.to_text()
    }

    fn code(&self) -> PyResult<u64> {
        self.inner.code().map_err(to_py_err)
    }

    fn is_negative(&self, i: usize, j: usize) -> bool {
        self.inner.is_negative(i, j)
    }

    /// Number of tropically allowed lattice paths (linear-time DP).
    fn count_tropical(&self) -> PyResult<u64> {
        paths::count_tropical_paths(&self.inner).map_err(to_py_err)
    }

    /// Number of allowed lattice paths.
    fn count_allowed(&self) -> PyResult<u64> {
        paths::count_allowed_paths(&self.inner).map_err(to_py_err)
    }

    /// All tropically allowed paths as `(I, J)` pairs of 1-based index
    /// lists.
    fn tropical_paths(&self) -> PyResult<Vec<(Vec<usize>, Vec<usize>)>> {
        let paths = paths::enumerate_tropical_paths(&self.inner).map_err(to_py_err)?;
        Ok(paths.iter().map(one_based_pair).collect())
    }

    /// ASCII picture of a path (1-based `I`, `J`) over this pattern.
    fn render_path(&self, i: Vec<usize>, j: Vec<usize>) -> PyResult<String> {
        let path = zero_based_path(i, j)?;
        path.render(&self.inner).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("SignPattern({}x{})", self.inner.p(), self.inner.d())
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }
}

fn one_based_pair(path: &paths::LatticePath) -> (Vec<usize>, Vec<usize>) {
    (
        path.rows().iter().map(|&i| i + 1).collect(),
        path.cols().iter().map(|&j| j + 1).collect(),
    )
}

fn zero_based_path(i: Vec<usize>, j: Vec<usize>) -> PyResult<paths::LatticePath> {
    if i.iter().chain(&j).any(|&x| x == 0) {
        return Err(PyValueError::new_err("path indices are 1-based"));
    }
    paths::LatticePath::new(
        i.into_iter().map(|x| x - 1).collect(),
        j.into_iter().map(|x| x - 1).collect(),
    )
    .map_err(to_py_err)
}

fn build_spec(pattern: &PySignPattern, t: Option<Vec<i64>>) -> PyResult<SignedCyclicSpec> {
    match t {
        Some(t) => SignedCyclicSpec::new(pattern.inner.clone(), t).map_err(to_py_err),
        None => Ok(SignedCyclicSpec::with_default_t(pattern.inner.clone())),
    }
}

/// Extreme rays of the polar of the signed cyclic cone with this
/// pattern and parameters `t` (default 0, 1, 2, ...).
#[pyfunction]
#[pyo3(signature = (pattern, t=None))]
fn enumerate_rays<'py>(
    py: Python<'py>,
    pattern: &PySignPattern,
    t: Option<Vec<i64>>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let spec = build_spec(pattern, t)?;
    let rays = spec.enumerate_extreme_rays().map_err(to_py_err)?;
    rays.iter()
        .map(|er| {
            let dict = PyDict::new(py);
            let coords: Vec<Option<i64>> = er.ray.coords().iter().map(|c| c.value()).collect();
            let (i, j) = one_based_pair(&er.path);
            dict.set_item("coords", coords)?;
            dict.set_item("I", i)?;
            dict.set_item("J", j)?;
            Ok(dict)
        })
        .collect()
}

/// Brute-force reference for the extreme-ray set: coordinate lists of
/// the canonical representatives, sorted.
#[pyfunction]
#[pyo3(signature = (pattern, t=None))]
fn oracle_rays(pattern: &PySignPattern, t: Option<Vec<i64>>) -> PyResult<Vec<Vec<Option<i64>>>> {
    let spec = build_spec(pattern, t)?;
    let rays = spec.oracle_extreme_rays().map_err(to_py_err)?;
    Ok(rays
        .iter()
        .map(|r| r.coords().iter().map(|c| c.value()).collect())
        .collect())
}

/// McMullen's facet bound `U(n, k)`.
#[pyfunction]
fn mcmullen_u(n: u64, k: u64) -> PyResult<u128> {
    bounds::mcmullen_u(n, k).map_err(to_py_err)
}

/// The path-count bound `(p (d - 1) + 1) 2^{d-1}`.
#[pyfunction]
fn trop_upper_bound(p: u64, d: u64) -> PyResult<u128> {
    bounds::trop_upper_bound(p, d).map_err(to_py_err)
}

#[pyfunction]
fn natural_pattern(p: usize, d: usize) -> PyResult<PySignPattern> {
    Ok(PySignPattern {
        inner: bounds::natural_pattern(p, d).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn checkerboard_pattern(p: usize, d: usize) -> PySignPattern {
    PySignPattern {
        inner: bounds::checkerboard_pattern(p, d),
    }
}

#[pyfunction]
fn attained_pattern(p: usize, d: usize) -> PyResult<PySignPattern> {
    Ok(PySignPattern {
        inner: bounds::attained_pattern(p, d).map_err(to_py_err)?,
    })
}

/// All k-subsets of 1..=n satisfying the evenness condition.
#[pyfunction]
fn gale_subsets(n: usize, k: usize) -> PyResult<Vec<Vec<usize>>> {
    let subsets = paths::enumerate_gale_subsets(n, k).map_err(to_py_err)?;
    Ok(subsets.iter().map(|q| q.elements().to_vec()).collect())
}

/// Maximizes the tropically allowed path count over all p x d sign
/// patterns. Returns a dict with `max`, `witnesses` (pattern texts),
/// `scanned` and `exhaustive`.
#[pyfunction]
#[pyo3(signature = (p, d, samples=None, seed=0, threads=None))]
fn max_ntrop<'py>(
    py: Python<'py>,
    p: usize,
    d: usize,
    samples: Option<u64>,
    seed: u64,
    threads: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let opts = SearchOptions {
        mode: match samples {
            Some(samples) => SearchMode::Random { samples, seed },
            None => SearchMode::Exhaustive,
        },
        threads,
        ..SearchOptions::default()
    };
    let result = search::max_ntrop(p, d, &opts).map_err(to_py_err)?;
    let witnesses: Vec<String> = result
        .witness_patterns()
        .map_err(to_py_err)?
        .iter()
        .map(|w| w.to_text())
        .collect();
    let dict = PyDict::new(py);
    dict.set_item("max", result.max_count)?;
    dict.set_item("witnesses", witnesses)?;
    dict.set_item("scanned", result.patterns_scanned)?;
    dict.set_item("exhaustive", result.exhaustive)?;
    Ok(dict)
}

#[pymodule]
fn tropcone_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignPattern>()?;
    m.add_function(wrap_pyfunction!(enumerate_rays, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_rays, m)?)?;
    m.add_function(wrap_pyfunction!(mcmullen_u, m)?)?;
    m.add_function(wrap_pyfunction!(trop_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(natural_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(checkerboard_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(attained_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(gale_subsets, m)?)?;
    m.add_function(wrap_pyfunction!(max_ntrop, m)?)?;
    Ok(())
}

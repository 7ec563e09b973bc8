//! Python bindings for `vee-core`.
//!
//! Rationals cross the boundary as strings such as `"-3/4"`; Python ints and
//! `fractions.Fraction` values are accepted on input through `str()`.
//! Reports come back as plain dicts with the same layout as the CLI output.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use vee_core::catalog::{make_family, FamilySpec};
use vee_core::io::{configuration_from_json, configuration_to_json, format_rational, parse_rational};
use vee_core::{report, wdvv, Matrix, Rational};

fn err(e: vee_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(x.str()?.to_str()?.trim()).map_err(err)
}

fn matrix(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Matrix> {
    let rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(rational).collect::<PyResult<_>>())
        .collect::<PyResult<_>>()?;
    Matrix::from_rows(&rows).map_err(err)
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.row_vectors().iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (v.to_string(),))?.unbind())
}

/// A configuration of weighted covectors with exact rational entries.
#[pyclass(name = "Configuration", module = "vee_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConfiguration {
    inner: vee_core::Configuration,
}

impl From<vee_core::Configuration> for PyConfiguration {
    fn from(inner: vee_core::Configuration) -> Self {
        PyConfiguration { inner }
    }
}

#[pymethods]
impl PyConfiguration {
    /// Builds from direction rows and weights. Parallel covectors are merged.
    #[new]
    #[pyo3(signature = (directions, weights, label=None))]
    fn new(
        directions: Vec<Vec<Bound<'_, PyAny>>>,
        weights: Vec<Bound<'_, PyAny>>,
        label: Option<String>,
    ) -> PyResult<Self> {
        if directions.len() != weights.len() {
            return Err(PyValueError::new_err("directions and weights differ in length"));
        }
        let dim = directions.first().map_or(0, Vec::len);
        let raw = directions
            .iter()
            .zip(&weights)
            .map(|(d, w)| Ok((d.iter().map(rational).collect::<PyResult<Vec<_>>>()?, rational(w)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let mut c = vee_core::Configuration::build(dim, raw, None).map_err(err)?;
        if let Some(l) = label {
            c = c.with_label(l);
        }
        Ok(c.into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        configuration_from_json(text).map(Into::into).map_err(err)
    }

    /// A catalog family member, e.g. `family("G3", t=3)` or `family("A_n", n=3, c0=2)`.
    #[staticmethod]
    #[pyo3(signature = (name, **params))]
    fn family(name: &str, params: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut pairs = Vec::new();
        if let Some(p) = params {
            for (k, v) in p.iter() {
                pairs.push((k.extract::<String>()?, rational(&v)?));
            }
        }
        let spec = FamilySpec::parse(name, pairs.iter().map(|(k, v)| (k.as_str(), v.clone()))).map_err(err)?;
        make_family(&spec).map(Into::into).map_err(err)
    }

    fn to_json(&self) -> String {
        configuration_to_json(&self.inner)
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Configuration({:?}, dimension={}, covectors={})",
            self.inner.label(),
            self.inner.dimension(),
            self.inner.len()
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    /// `(direction, weight)` pairs with rational strings.
    fn covectors(&self) -> Vec<(Vec<String>, String)> {
        self.inner
            .covectors()
            .iter()
            .map(|wc| (wc.direction().iter().map(format_rational).collect(), format_rational(wc.weight())))
            .collect()
    }

    fn canonical_form(&self) -> Vec<Vec<String>> {
        matrix_strings(&self.inner.canonical_form())
    }

    /// The plane-by-plane report as a dict.
    fn check(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let r = vee_core::check_vee(&self.inner);
        to_py(py, &report::vee_report_json(&self.inner, &r))
    }

    fn is_vee_system(&self) -> bool {
        vee_core::check_vee(&self.inner).is_vee_system
    }

    /// Checks against a background form instead of the canonical one.
    fn euclidean_check(&self, py: Python<'_>, background: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Py<PyAny>> {
        let b = matrix(background)?;
        if !b.is_square() || b.rows() != self.inner.dimension() {
            return Err(PyValueError::new_err("background has the wrong size"));
        }
        let r = vee_core::euclidean_check(&self.inner, &b);
        to_py(py, &report::vee_report_json(&self.inner, &r))
    }

    /// Whether the WDVV identities hold at `points` seeded sample points.
    #[pyo3(signature = (points=3, seed=0))]
    fn wdvv(&self, points: usize, seed: u64) -> PyResult<bool> {
        let pts = wdvv::sample_points(&self.inner, points, seed);
        wdvv::check_wdvv(&self.inner, &pts).map_err(err)
    }

    fn fingerprint(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let frame = self.inner.dual_frame().map_err(err)?;
        let f = self.inner.fingerprint().map_err(err)?;
        to_py(py, &report::fingerprint_json(&self.inner, &frame, &f))
    }

    fn planes(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &report::planes_json(&self.inner, &self.inner.enumerate_planes()))
    }

    /// Restriction to the subspace cut out by the covectors at `along`.
    fn restrict(&self, along: Vec<usize>) -> PyResult<Self> {
        vee_core::restrict(&self.inner, &along).map(Into::into).map_err(err)
    }

    /// The subsystem in the span of the covectors at `span`.
    fn subsystem(&self, span: Vec<usize>) -> PyResult<Self> {
        vee_core::subsystem(&self.inner, &span).map(Into::into).map_err(err)
    }

    /// Image under the invertible matrix `p`, acting on covectors as rows.
    fn apply_linear(&self, p: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        vee_core::apply_linear(&self.inner, &matrix(p)?).map(Into::into).map_err(err)
    }

    fn scale_weights(&self, rho: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.inner.scale_weights(&rational(rho)?).map(Into::into).map_err(err)
    }
}

/// Searches for a linear equivalence; returns the witness dict or `None`.
#[pyfunction]
fn find_equivalence(py: Python<'_>, a: &PyConfiguration, b: &PyConfiguration) -> PyResult<Option<Py<PyAny>>> {
    match vee_core::find_equivalence(&a.inner, &b.inner).map_err(err)? {
        Some(w) => Ok(Some(to_py(py, &report::equivalence_json(&a.inner, &b.inner, Some(&w)))?)),
        None => Ok(None),
    }
}

/// A named restriction such as `"(E7,A2^2)"`, one configuration per fingerprint class.
#[pyfunction]
#[pyo3(signature = (name, **params))]
fn named_restriction(name: &str, params: Option<&Bound<'_, PyDict>>) -> PyResult<Vec<PyConfiguration>> {
    let mut map = BTreeMap::new();
    if let Some(p) = params {
        for (k, v) in p.iter() {
            map.insert(k.extract::<String>()?, rational(&v)?);
        }
    }
    let found = vee_core::named_restriction(name, &map).map_err(err)?;
    Ok(found.into_iter().map(Into::into).collect())
}

#[pymodule]
fn vee_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfiguration>()?;
    m.add_function(wrap_pyfunction!(find_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(named_restriction, m)?)?;
    Ok(())
}

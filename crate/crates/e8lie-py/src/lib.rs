//! Python module `e8lie_py`. Rationals cross the boundary as strings such as
//! `"-1/6"`, which `fractions.Fraction` parses directly.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use e8lie::algebra::{self, AnchorSet, ChevalleyTable, Q};
use e8lie::error::Error;
use e8lie::orbits::{self, OrbitData, OrbitLabel};
use e8lie::roots::Root;
use e8lie::{report, slice, weights};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BadPrime(_) | Error::NotIntegralAt(..) | Error::Parse { .. } | Error::ChecksumMismatch { .. } => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn label(s: &str) -> PyResult<OrbitLabel> {
    s.parse().map_err(PyValueError::new_err)
}

fn root(s: &str) -> PyResult<Root> {
    s.parse().map_err(PyValueError::new_err)
}

fn rational(s: &str) -> PyResult<Q> {
    s.trim().parse::<Q>().map_err(|e| PyValueError::new_err(format!("bad rational {s:?}: {e}")))
}

/// The calibrated E8 structure-constant table.
#[pyclass(frozen)]
pub struct Table {
    inner: Arc<ChevalleyTable>,
}

#[pymethods]
impl Table {
    /// Builds and calibrates the table, optionally against an anchor fixture file.
    #[new]
    #[pyo3(signature = (anchors_path=None))]
    fn new(anchors_path: Option<&str>) -> PyResult<Self> {
        let anchors = match anchors_path {
            Some(p) => AnchorSet::from_path(std::path::Path::new(p)).map_err(to_py)?,
            None => AnchorSet::shipped(),
        };
        let t = algebra::build_chevalley_table_with(e8lie::build_root_system(), &anchors).map_err(to_py)?;
        Ok(Table { inner: Arc::new(t) })
    }

    /// Parses a table file.
    #[staticmethod]
    fn import_text(text: &str) -> PyResult<Self> {
        Ok(Table { inner: Arc::new(algebra::import_table(text).map_err(to_py)?) })
    }

    #[getter]
    fn convention(&self) -> String {
        self.inner.convention().to_string()
    }

    /// `N(alpha, beta)` for root labels such as `"12232111"` or `"-00010000"`.
    fn n(&self, alpha: &str, beta: &str) -> PyResult<i32> {
        Ok(self.inner.n(&root(alpha)?, &root(beta)?))
    }

    /// The table in its line format.
    fn export(&self) -> String {
        algebra::export_table(&self.inner)
    }

    /// `(id, expected, computed)` for every shipped anchor.
    fn check_anchors(&self) -> PyResult<Vec<(String, i32, i32)>> {
        let checks = self.inner.check_anchors(&AnchorSet::shipped()).map_err(to_py)?;
        Ok(checks.into_iter().map(|c| (c.anchor.id, c.anchor.value, c.computed)).collect())
    }

    /// Full verification report for an orbit as a JSON string.
    fn verify(&self, orbit: &str) -> PyResult<String> {
        let r = report::verify_orbit(&self.inner, label(orbit)?, &AnchorSet::shipped()).map_err(to_py)?;
        Ok(r.to_json())
    }

    fn orbit(&self, orbit: &str) -> PyResult<Orbit> {
        let od = orbits::orbit_data(&self.inner, label(orbit)?).map_err(to_py)?;
        Ok(Orbit { table: Arc::clone(&self.inner), data: Arc::new(od) })
    }
}

/// Orbit data: triple, grading and graded centralizer.
#[pyclass(frozen)]
pub struct Orbit {
    table: Arc<ChevalleyTable>,
    data: Arc<OrbitData>,
}

#[pymethods]
impl Orbit {
    #[getter]
    fn label(&self) -> String {
        self.data.label.to_string()
    }

    #[getter]
    fn dim_centralizer(&self) -> usize {
        self.data.dim_centralizer()
    }

    /// `{i: dim g_e(i)}`.
    fn centralizer_dims(&self) -> Vec<(i64, usize)> {
        self.data.centralizer.iter().map(|(i, s)| (*i, s.dim())).collect()
    }

    /// `{i: dim g(i)}`.
    fn grading_dims(&self) -> Vec<(i64, usize)> {
        self.data.grading.iter().map(|(i, s)| (*i, s.dim())).collect()
    }

    /// Values `alpha_i(h)`.
    fn h_values(&self) -> Vec<String> {
        self.data.h_values.iter().map(ToString::to_string).collect()
    }

    /// A named distinguished vector, rendered as a combination of basis vectors.
    fn vector(&self, name: &str) -> PyResult<String> {
        if !self.data.distinguished.contains_key(name) {
            return Err(PyValueError::new_err(format!("no vector named {name:?}")));
        }
        Ok(orbits::describe(&self.table, &self.data, name))
    }

    /// `(A, B, A+B, (e,p), lambda, dim_ab)` with rationals as strings.
    fn lambda_result(&self) -> PyResult<(String, String, String, String, String, u8)> {
        let r = slice::compute_lambda(&self.table, &self.data).map_err(to_py)?;
        Ok((r.a.to_string(), r.b.to_string(), r.phi_value.to_string(), r.e_p.to_string(), r.lambda.to_string(), r.dim_ab))
    }

    /// `A + B` computed with a pseudo-random Darboux basis.
    fn darboux_sum(&self, seed: u64) -> PyResult<String> {
        let sb = slice::darboux_basis_seeded(&self.table, &self.data, seed).map_err(to_py)?;
        let (a, b) = slice::sum_ab(&self.table, &self.data, &sb);
        Ok((a + b).to_string())
    }
}

/// `Lambda + rho` (or the primed weight) in epsilon coordinates.
#[pyfunction]
#[pyo3(signature = (orbit, primed=false))]
fn lambda_plus_rho(orbit: &str, primed: bool) -> PyResult<Vec<String>> {
    Ok(weights::lambda_plus_rho(label(orbit)?, primed).0.iter().map(ToString::to_string).collect())
}

#[pyfunction]
fn norm_difference(orbit: &str) -> PyResult<String> {
    Ok(weights::norm_difference(label(orbit)?).to_string())
}

/// `(is_unit, [e2, e3, e5], residual)`.
#[pyfunction]
fn r_unit(x: &str) -> PyResult<(bool, [i64; 3], String)> {
    let v = weights::r_unit(&rational(x)?);
    Ok((v.is_unit, v.exponents, v.residual.to_string()))
}

#[pyfunction]
fn nonzero_mod_p(x: &str, p: u64) -> PyResult<bool> {
    weights::nonzero_mod_p(&rational(x)?, p).map_err(to_py)
}

#[pymodule]
fn e8lie_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Table>()?;
    m.add_class::<Orbit>()?;
    m.add_function(wrap_pyfunction!(lambda_plus_rho, m)?)?;
    m.add_function(wrap_pyfunction!(norm_difference, m)?)?;
    m.add_function(wrap_pyfunction!(r_unit, m)?)?;
    m.add_function(wrap_pyfunction!(nonzero_mod_p, m)?)?;
    Ok(())
}


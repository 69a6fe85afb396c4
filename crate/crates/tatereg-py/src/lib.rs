//! Python bindings: rings, series, q-expansions, decompositions, residues and
//! the surface bound pipeline. Structured reports are returned as dicts.

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use tatereg::eis::{eisenstein_report, lambert_decompose, TeichBasis};
use tatereg::padic::{make_ring, Ring as CoreRing};
use tatereg::qexp::{self, Gamma13, Level1};
use tatereg::series::LaurentSeries;
use tatereg::surfaces::{self, BoundRequest, FamilyName};
use tatereg::error::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Usage(_) | Error::BadPrime(_) | Error::Precondition(_) | Error::ModulusTooLarge { .. } => {
            PyValueError::new_err(e.to_string())
        }
        Error::NonUnit(_) | Error::NoRoot { .. } | Error::Uncertified(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// The coefficient ring `W(F_{p^d})/p^M`.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Ring {
    inner: CoreRing,
}

#[pymethods]
impl Ring {
    #[new]
    #[pyo3(signature = (p, d = 1, precision = 6))]
    fn new(p: u64, d: usize, precision: u32) -> PyResult<Self> {
        Ok(Ring { inner: make_ring(p, d, precision).map_err(py_err)? })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn precision(&self) -> u32 {
        self.inner.precision()
    }

    fn __repr__(&self) -> String {
        format!("Ring(p={}, d={}, precision={})", self.inner.p(), self.inner.d(), self.inner.precision())
    }
}

/// A truncated Laurent series `Σ_{val ≤ n < order} c_n q^n`.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Series {
    inner: LaurentSeries,
}

#[pymethods]
impl Series {
    /// Builds a series from integer coefficients starting at `q^val`.
    #[staticmethod]
    #[pyo3(signature = (ring, coeffs, val = 0, order = None))]
    fn from_ints(ring: &Ring, coeffs: Vec<i64>, val: i64, order: Option<i64>) -> Self {
        let order = order.unwrap_or(val + coeffs.len() as i64);
        Series { inner: LaurentSeries::from_ints(&ring.inner, val, &coeffs, order) }
    }

    #[getter]
    fn val(&self) -> i64 {
        self.inner.val()
    }

    #[getter]
    fn order(&self) -> i64 {
        self.inner.order()
    }

    #[getter]
    fn ring(&self) -> Ring {
        Ring { inner: self.inner.ring().clone() }
    }

    /// Coefficients from `q^val` up to the order: symmetric integers over
    /// `Z_p`, coordinate lists otherwise.
    fn coefficients<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let s = &self.inner;
        if s.ring().d() == 1 {
            let v: Vec<i128> = (s.val()..s.order()).map(|n| s.coeff(n).to_signed()).collect();
            to_py(py, &v)
        } else {
            let v: Vec<Vec<u64>> = (s.val()..s.order()).map(|n| s.coeff(n).into_coords()).collect();
            to_py(py, &v)
        }
    }

    fn __add__(&self, o: &Series) -> PyResult<Series> {
        Ok(Series { inner: self.inner.add(&o.inner).map_err(py_err)? })
    }

    fn __sub__(&self, o: &Series) -> PyResult<Series> {
        Ok(Series { inner: self.inner.sub(&o.inner).map_err(py_err)? })
    }

    fn __mul__(&self, o: &Series) -> PyResult<Series> {
        Ok(Series { inner: self.inner.mul(&o.inner).map_err(py_err)? })
    }

    fn __neg__(&self) -> Series {
        Series { inner: self.inner.neg() }
    }

    fn __eq__(&self, o: &Series) -> bool {
        self.inner == o.inner
    }

    fn __pow__(&self, e: i64, _modulo: Option<i64>) -> PyResult<Series> {
        Ok(Series { inner: self.inner.powi(e).map_err(py_err)? })
    }

    fn inv(&self) -> PyResult<Series> {
        Ok(Series { inner: self.inner.inv().map_err(py_err)? })
    }

    fn compose(&self, g: &Series) -> PyResult<Series> {
        Ok(Series { inner: self.inner.compose(&g.inner).map_err(py_err)? })
    }

    fn reversion(&self) -> PyResult<Series> {
        Ok(Series { inner: self.inner.reversion().map_err(py_err)? })
    }

    fn ell_phi(&self) -> PyResult<Series> {
        Ok(Series { inner: self.inner.ell_phi().map_err(py_err)? })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.to_bytes())
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Series> {
        Ok(Series { inner: LaurentSeries::from_bytes(data).map_err(py_err)? })
    }

    fn __repr__(&self) -> String {
        format!("Series(val={}, order={}, ring={:?})", self.inner.val(), self.inner.order(), self.inner.ring().params())
    }
}

fn level1_name(name: &str) -> PyResult<Level1> {
    Ok(match name {
        "e4" => Level1::E4,
        "e6" => Level1::E6,
        "delta" => Level1::Delta,
        "j" => Level1::J,
        _ => return Err(PyValueError::new_err(format!("unknown level-one series {name:?}"))),
    })
}

fn gamma13_name(name: &str) -> PyResult<Gamma13> {
    Ok(match name {
        "e1" => Gamma13::E1,
        "e3a" => Gamma13::E3a,
        "e3b" => Gamma13::E3b,
        "t" => Gamma13::T,
        "f1" => Gamma13::F1,
        "f2" => Gamma13::F2,
        "g" => Gamma13::G,
        _ => return Err(PyValueError::new_err(format!("unknown Gamma1(3) series {name:?}"))),
    })
}

/// A named q-expansion: `e4`, `e6`, `delta`, `j`, `e1`, `e3a`, `e3b`, `t`, `f1`, `f2`, `g`.
#[pyfunction]
fn named_series(ring: &Ring, name: &str, order: i64) -> PyResult<Series> {
    let inner = match level1_name(name) {
        Ok(l) => qexp::level1_series(&ring.inner, l, order),
        Err(_) => qexp::gamma13_series(&ring.inner, gamma13_name(name)?, order).map_err(py_err)?,
    };
    Ok(Series { inner })
}

/// The Tate-curve coefficients `(a4, a6)`.
#[pyfunction]
fn tate_coeffs(ring: &Ring, order: i64) -> (Series, Series) {
    let (a4, a6) = qexp::tate_coeffs(&ring.inner, order);
    (Series { inner: a4 }, Series { inner: a6 })
}

/// Lambert coefficients `a_j` (first basis element) and the Eisenstein verdict up to `n_max`.
#[pyfunction]
fn decompose<'py>(py: Python<'py>, f: &Series, n_max: i64) -> PyResult<Bound<'py, PyAny>> {
    let basis = TeichBasis::new(f.inner.ring(), 0).map_err(py_err)?;
    let dec = lambert_decompose(&f.inner, &basis).map_err(py_err)?;
    let verdict = eisenstein_report(&dec, n_max).map_err(py_err)?;
    let a: Vec<u64> = (1..dec.order).map(|j| dec.a(0, j)).collect();
    to_py(py, &serde_json::json!({ "lambert": a, "eisenstein": verdict.is_eisenstein(), "verdict": verdict }))
}

/// The residue of the theta-symbol element by the rules.
#[pyfunction]
fn xi_rule_value(ring: &Ring, a: i64, b: i64, r: i64, order: i64) -> PyResult<Series> {
    Ok(Series { inner: tatereg::symbol_residue::xi_rule_value(&ring.inner, a, b, r, order).map_err(py_err)? })
}

/// The closed-form residue value.
#[pyfunction]
fn xi_closed_value(ring: &Ring, a: i64, b: i64, r: i64, order: i64) -> PyResult<Series> {
    Ok(Series { inner: qexp::xi_closed_value(&ring.inner, a, b, r, order).map_err(py_err)? })
}

#[pyfunction]
fn check_dlog_integrality<'py>(py: Python<'py>, h: &Series) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &qexp::check_dlog_integrality(&h.inner).map_err(py_err)?)
}

fn family(name: &str) -> PyResult<FamilyName> {
    name.parse().map_err(py_err)
}

/// Conditions (A′), (B′), the Cartier matrix and the Hasse coefficient.
#[pyfunction]
fn condition_checks<'py>(py: Python<'py>, name: &str, k: u32, p: u64) -> PyResult<Bound<'py, PyAny>> {
    let fam = surfaces::family_catalog(family(name)?, k).map_err(py_err)?;
    to_py(py, &surfaces::condition_checks(&fam, p).map_err(py_err)?)
}

/// Condition C(p) for the K3 family.
#[pyfunction]
#[pyo3(signature = (p, precision = 6))]
fn check_cp<'py>(py: Python<'py>, p: u64, precision: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &surfaces::check_cp(p, precision).map_err(py_err)?)
}

/// The residue bound report.
#[pyfunction]
#[pyo3(signature = (name, k, p, n, fibers = "roots", embeddings = vec![], exclusions = vec![], precision = 4, guard = 2))]
#[allow(clippy::too_many_arguments)]
fn bound_report<'py>(
    py: Python<'py>,
    name: &str,
    k: u32,
    p: u64,
    n: i64,
    fibers: &str,
    embeddings: Vec<u32>,
    exclusions: Vec<Vec<i64>>,
    precision: u32,
    guard: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let family = family(name)?;
    let k = if family == FamilyName::K3 { 4 } else { k };
    let req = BoundRequest {
        family,
        k,
        p,
        n,
        fibers: surfaces::parse_fibers(fibers, k).map_err(py_err)?,
        embeddings,
        exclusions,
        precision,
        guard,
    };
    to_py(py, &surfaces::bound_report(&req).map_err(py_err)?)
}

/// Runs the command-line driver and returns `(exit_code, output)`.
#[pyfunction]
fn run_command(argv: Vec<String>) -> (i32, String) {
    tatereg::cli::run_to_string(std::iter::once("tatereg".to_string()).chain(argv))
}

#[pymodule(name = "tatereg")]
fn tatereg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ring>()?;
    m.add_class::<Series>()?;
    m.add_function(wrap_pyfunction!(named_series, m)?)?;
    m.add_function(wrap_pyfunction!(tate_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(xi_rule_value, m)?)?;
    m.add_function(wrap_pyfunction!(xi_closed_value, m)?)?;
    m.add_function(wrap_pyfunction!(check_dlog_integrality, m)?)?;
    m.add_function(wrap_pyfunction!(condition_checks, m)?)?;
    m.add_function(wrap_pyfunction!(check_cp, m)?)?;
    m.add_function(wrap_pyfunction!(bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(run_command, m)?)?;
    Ok(())
}

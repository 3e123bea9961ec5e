//! Python bindings: table checks, certificates, p-adic numbers and the
//! special constants.

use num_bigint::BigInt;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use x6star::driver::{self, Family, IdentityRow, IdentityTable, RunOptions, SCertificate, VerificationReport};
use x6star::hyperseries::{sum_linear, PochFamily, SeriesSpec};
use x6star::numkernel::{Precision, Rational};
use x6star::padic::PadicInt;
use x6star::polys::AppendixPolys;

fn err(e: x6star::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<Rational> {
    x6star::datafile::parse_rational(s).ok_or_else(|| PyValueError::new_err(format!("not a rational: {s:?}")))
}

fn precision(digits: Option<u32>) -> PyResult<Precision> {
    digits.map_or(Ok(Precision::DEFAULT), |d| Precision::from_digits(d).map_err(err))
}

fn family(s: Option<&str>) -> PyResult<Option<Family>> {
    s.map(|s| s.parse::<Family>().map_err(err)).transpose()
}

fn rows(d: i64, fam: Option<Family>) -> PyResult<Vec<IdentityRow>> {
    let table = IdentityTable::embedded().map_err(err)?;
    let out: Vec<IdentityRow> = table.rows.iter().filter(|r| r.d.d == d && fam.is_none_or(|f| r.family == f)).cloned().collect();
    if out.is_empty() {
        return Err(PyValueError::new_err(format!("no table row for D = {d}")));
    }
    Ok(out)
}

/// One verification result.
#[pyclass(name = "Report", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyReport {
    id: String,
    family: String,
    equation: String,
    label: String,
    lhs: String,
    rhs: String,
    residual_exponent: Option<i64>,
    padic_digits: Option<u32>,
    sign: Option<i32>,
    terms: u64,
    ms: u64,
    status: String,
    note: Option<String>,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn passed(&self) -> bool {
        self.status != "fail"
    }

    fn __repr__(&self) -> String {
        format!("Report({} {} {})", self.id, self.equation, self.status)
    }
}

impl From<&VerificationReport> for PyReport {
    fn from(r: &VerificationReport) -> PyReport {
        let tag = |s: String| s.trim_matches('"').to_string();
        PyReport {
            id: r.id.clone(),
            family: r.family.clone(),
            equation: r.equation.clone(),
            label: tag(serde_json::to_string(&r.label).unwrap_or_default()),
            lhs: r.lhs.clone(),
            rhs: r.rhs.clone(),
            residual_exponent: r.residual_exponent,
            padic_digits: r.padic_digits,
            sign: r.sign,
            terms: r.terms,
            ms: r.ms,
            status: tag(serde_json::to_string(&r.status).unwrap_or_default()),
            note: r.note.clone(),
        }
    }
}

fn wrap(reps: &[VerificationReport]) -> Vec<PyReport> {
    reps.iter().map(PyReport::from).collect()
}

/// Derived linear coefficient of a row and its root certificate, if any.
#[pyclass(name = "Certificate", frozen)]
struct PyCertificate(SCertificate);

#[pymethods]
impl PyCertificate {
    #[getter]
    fn id(&self) -> String {
        self.0.id()
    }

    #[getter]
    fn s(&self) -> String {
        self.0.s.to_string()
    }

    #[getter]
    fn x(&self) -> Option<String> {
        self.0.x.as_ref().map(|x| x.to_string())
    }

    #[getter]
    fn q(&self) -> Option<u32> {
        self.0.q
    }

    #[getter]
    fn rho(&self) -> Option<String> {
        self.0.rho.as_ref().map(|r| r.to_string())
    }

    #[getter]
    fn certified(&self) -> bool {
        self.0.is_certified()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn __repr__(&self) -> String {
        let q = self.0.q.map_or("None".to_string(), |q| q.to_string());
        format!("Certificate({}, s={}, q={q})", self.0.id(), self.0.s)
    }
}

/// A p-adic integer known modulo `p^prec`.
#[pyclass(name = "Padic", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPadic(PadicInt);

#[pymethods]
impl PyPadic {
    #[new]
    #[pyo3(signature = (value, p = 5, prec = 40))]
    fn new(value: &str, p: u64, prec: u32) -> PyResult<PyPadic> {
        PadicInt::from_rational(&rational(value)?, p, prec).map(PyPadic).map_err(err)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.prime()
    }

    #[getter]
    fn precision(&self) -> u32 {
        self.0.precision()
    }

    #[getter]
    fn valuation(&self) -> Option<u32> {
        self.0.valuation()
    }

    fn residue(&self) -> BigInt {
        self.0.residue()
    }

    fn digits(&self) -> Vec<u64> {
        self.0.digits()
    }

    fn agreement(&self, other: &PyPadic) -> u32 {
        self.0.agreement_digits(&other.0)
    }

    fn __add__(&self, o: &PyPadic) -> PyPadic {
        PyPadic(self.0.add(&o.0))
    }

    fn __sub__(&self, o: &PyPadic) -> PyPadic {
        PyPadic(self.0.sub(&o.0))
    }

    fn __mul__(&self, o: &PyPadic) -> PyPadic {
        PyPadic(self.0.mul(&o.0))
    }

    fn __truediv__(&self, o: &PyPadic) -> PyResult<PyPadic> {
        self.0.div(&o.0).map(PyPadic).map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    fn __neg__(&self) -> PyPadic {
        PyPadic(self.0.neg())
    }

    fn __pow__(&self, k: u32, _modulo: Option<Bound<'_, PyAny>>) -> PyPadic {
        PyPadic(self.0.pow(k))
    }

    fn __eq__(&self, o: &PyPadic) -> bool {
        self.0 == o.0
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// Checks every identity of discriminant `d`.
#[pyfunction]
#[pyo3(signature = (d, family = None, digits = None))]
fn verify(d: i64, family: Option<&str>, digits: Option<u32>) -> PyResult<Vec<PyReport>> {
    let consts = driver::ArchConstants::compute(precision(digits)?).map_err(err)?;
    let polys = AppendixPolys::embedded().map_err(err)?;
    let mut out = Vec::new();
    for row in rows(d, self::family(family)?)? {
        out.extend(wrap(&driver::verify_archimedean(&row, &consts).map_err(err)?));
        out.extend(wrap(&driver::certificate_and_embedding(&row, polys, &consts).0));
    }
    Ok(out)
}

/// Every check over the shipped tables.
#[pyfunction]
#[pyo3(signature = (digits = None, exploratory = false))]
fn verify_all(py: Python<'_>, digits: Option<u32>, exploratory: bool) -> PyResult<Vec<PyReport>> {
    let opts = RunOptions { prec: precision(digits)?, exploratory, ..RunOptions::default() };
    let summary = py.detach(|| driver::run_all(&opts)).map_err(err)?;
    Ok(wrap(&summary.reports))
}

/// The sixth-power congruences of a second-family row.
#[pyfunction]
#[pyo3(signature = (d, k = 40, p = 5))]
fn padic(d: i64, k: u32, p: u64) -> PyResult<Vec<PyReport>> {
    let mut out = Vec::new();
    for row in rows(d, Some(Family::B))? {
        out.extend(wrap(&driver::verify_padic(&row, p, k, driver::PADIC_GUARD).map_err(err)?));
    }
    Ok(out)
}

#[pyfunction]
fn derive_s(d: i64) -> PyResult<Vec<PyCertificate>> {
    let polys = AppendixPolys::embedded().map_err(err)?;
    rows(d, None)?.iter().map(|r| driver::certify_root(&driver::derive_s(r), polys).map(PyCertificate).map_err(err)).collect()
}

/// `Q(x, y)` rebuilt from the Hecke table, as text.
#[pyfunction]
fn reconstruct_q() -> PyResult<String> {
    let table = x6star::hecke::HeckeTable::embedded().map_err(err)?;
    let ps = x6star::hecke::power_sum_polys(table).map_err(err)?;
    Ok(x6star::hecke::newton_to_q(&ps).to_string())
}

/// `Γ(a/b)` as a decimal string.
#[pyfunction]
#[pyo3(signature = (arg, digits = 50))]
fn gamma(arg: &str, digits: u32) -> PyResult<String> {
    let v = x6star::gamma::gamma_rat(&rational(arg)?, precision(Some(digits + 5))?).map_err(err)?;
    Ok(v.to_sci_string(digits as usize))
}

/// `Γ_p(x)` at a rational `x` that is a p-adic integer.
#[pyfunction]
#[pyo3(signature = (x, p = 5, k = 40))]
fn gamma_p(x: &str, p: u64, k: u32) -> PyResult<PyPadic> {
    x6star::padic::gamma_p(p, &rational(x)?, k).map(PyPadic).map_err(err)
}

/// `C1`, `C2` and the periods behind them.
#[pyfunction]
#[pyo3(signature = (digits = 50))]
fn constants(digits: u32) -> PyResult<Vec<(String, String)>> {
    let g = x6star::gamma::GammaConstantSet::compute(precision(Some(digits + 5))?).map_err(err)?;
    let s = |x: &x6star::numkernel::BigReal| x.to_sci_string(digits as usize);
    Ok(vec![
        ("C1".into(), s(&g.c1)),
        ("C2".into(), s(&g.c2)),
        ("C".into(), s(&g.c_lemma3)),
        ("Omega_-3".into(), s(&g.omega_m3)),
        ("Omega_-4".into(), s(&g.omega_m4)),
    ])
}

/// `Σ (r1 (n + shift) + r2) a_n x^n` for one of the families `A`, `A'`, `B`, `B'`.
#[pyfunction]
#[pyo3(signature = (family, r1, r2, x, shift = "0", digits = 50))]
fn series_sum(family: &str, r1: &str, r2: &str, x: &str, shift: &str, digits: u32) -> PyResult<(String, u64)> {
    let fam = match family {
        "A" => PochFamily::a(),
        "A'" => PochFamily::a_prime(),
        "B" => PochFamily::b(),
        "B'" => PochFamily::b_prime(),
        _ => return Err(PyValueError::new_err(format!("unknown family {family:?}"))),
    };
    let spec = SeriesSpec { family: fam, r1: rational(r1)?, r2: rational(r2)?, shift: rational(shift)?, argument: rational(x)? };
    let v = sum_linear(&spec, precision(Some(digits + 5))?).map_err(err)?;
    Ok((v.value.to_sci_string(digits as usize), v.terms))
}

/// `(D, family, status)` of every table row.
#[pyfunction]
fn table() -> PyResult<Vec<(i64, String, String)>> {
    let t = IdentityTable::embedded().map_err(err)?;
    Ok(t.rows.iter().map(|r| (r.d.d, r.family.to_string(), format!("{:?}", r.status))).collect())
}

#[pymodule]
#[pyo3(name = "x6star")]
fn x6star_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReport>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyPadic>()?;
    for f in [
        wrap_pyfunction!(verify, m)?,
        wrap_pyfunction!(verify_all, m)?,
        wrap_pyfunction!(padic, m)?,
        wrap_pyfunction!(derive_s, m)?,
        wrap_pyfunction!(reconstruct_q, m)?,
        wrap_pyfunction!(gamma, m)?,
        wrap_pyfunction!(gamma_p, m)?,
        wrap_pyfunction!(constants, m)?,
        wrap_pyfunction!(series_sum, m)?,
        wrap_pyfunction!(table, m)?,
    ] {
        m.add_function(f)?;
    }
    Ok(())
}

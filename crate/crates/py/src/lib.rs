//! Python bindings for the verification toolkit: the cyclotomic integers,
//! finite-field character sums, curve counts, period evaluation, bound
//! arithmetic, subgroup classification, and the named suites as JSON.

use num_bigint::BigInt;
use num_complex::Complex64;
use prym_core::ffchar::{self, FqField, MultChar};
use prym_core::galrep::{Mat2, Ring};
use prym_core::periods::{self, HypParams, HYP_EPS};
use prym_core::report::Report;
use prym_core::suites::{self, SuiteError};
use prym_core::{bounds, curves, cyclotomic};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::time::Instant;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn suite_err(e: SuiteError) -> PyErr {
    match e {
        SuiteError::Config(m) => PyValueError::new_err(m),
        SuiteError::Internal(m) => PyRuntimeError::new_err(m),
    }
}

/// Element a + b*z6 of the ring of Eisenstein-type integers on the
/// hexagonal lattice (z6 a primitive sixth root of unity).
#[pyclass(name = "CycZ6", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCycZ6 {
    inner: cyclotomic::CycZ6,
}

#[pymethods]
impl PyCycZ6 {
    #[new]
    fn new(a: BigInt, b: BigInt) -> Self {
        PyCycZ6 { inner: cyclotomic::CycZ6 { a, b } }
    }

    #[getter]
    fn a(&self) -> BigInt {
        self.inner.a.clone()
    }

    #[getter]
    fn b(&self) -> BigInt {
        self.inner.b.clone()
    }

    /// Complex conjugate: a + b*z6 maps to (a+b) - b*z6.
    fn conj(&self) -> Self {
        PyCycZ6 { inner: self.inner.conj() }
    }

    /// Field norm a^2 + a*b + b^2, always a nonnegative integer.
    fn norm(&self) -> BigInt {
        self.inner.norm()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn is_rational(&self) -> bool {
        self.inner.is_rational()
    }

    /// Numerical image under z6 -> exp(i*pi/3).
    fn embed(&self) -> Complex64 {
        self.inner.embed()
    }

    fn __add__(&self, other: &Self) -> Self {
        PyCycZ6 { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyCycZ6 { inner: &self.inner - &other.inner }
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyCycZ6 { inner: &self.inner * &other.inner }
    }

    fn __neg__(&self) -> Self {
        PyCycZ6 { inner: -&self.inner }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CycZ6({}, {})", self.inner.a, self.inner.b)
    }
}

/// zeta6^k as a lattice integer.
#[pyfunction]
fn root_of_unity(k: i64) -> PyCycZ6 {
    PyCycZ6 { inner: cyclotomic::CycZ6::root_of_unity(k) }
}

/// The field F_(p^k) with q = p^k at most 10^6 and q = 1 mod 6, carrying
/// exp/dlog tables and the distinguished sextic character.
#[pyclass(name = "FqField", frozen)]
struct PyFqField {
    inner: FqField,
}

#[pymethods]
impl PyFqField {
    #[new]
    #[pyo3(signature = (p, k=1))]
    fn new(p: u64, k: u32) -> PyResult<Self> {
        Ok(PyFqField { inner: FqField::new(p, k).map_err(value_err)? })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q
    }

    /// The tabulated multiplicative generator.
    #[getter]
    fn g(&self) -> u64 {
        self.inner.g
    }

    /// j-th power of the sextic character at x, as a lattice integer
    /// (zero at x = 0).
    #[pyo3(signature = (x, j=1))]
    fn eta(&self, x: u64, j: i64) -> PyCycZ6 {
        PyCycZ6 { inner: self.inner.eta(x, j) }
    }

    /// Discrete log base g, or None at 0.
    fn dlog(&self, x: u64) -> Option<u64> {
        self.inner.dlog(x)
    }

    fn trace_to_fp(&self, x: u64) -> u64 {
        self.inner.trace_to_fp(x)
    }

    fn __repr__(&self) -> String {
        format!("FqField(p={}, k={})", self.inner.p, self.inner.k)
    }
}

/// Jacobi sum J(eta^j1, eta^j2) as an exact lattice integer.
#[pyfunction]
fn jacobi_sum(field: &PyFqField, j1: i64, j2: i64) -> PyCycZ6 {
    PyCycZ6 {
        inner: ffchar::jacobi_sum(&field.inner, MultChar::power(j1), MultChar::power(j2)),
    }
}

/// q times the finite-field hypergeometric value with character exponents
/// (a, b; c) at x: an exact lattice integer.
#[pyfunction]
fn hypergeometric_sum(field: &PyFqField, a: i64, b: i64, c: i64, x: u64) -> PyCycZ6 {
    PyCycZ6 {
        inner: ffchar::fhyp_numerator(
            &field.inner,
            MultChar::power(a),
            MultChar::power(b),
            MultChar::power(c),
            x,
        ),
    }
}

/// Affine point count of the smooth genus-2 fiber at lambda.
#[pyfunction]
fn count_x(field: &PyFqField, lam: u64) -> PyResult<u64> {
    curves::count_x_smooth(&field.inner, lam).map_err(value_err)
}

/// Point count and trace (n_E, a_E) of the elliptic quotient at lambda.
#[pyfunction]
fn count_e(field: &PyFqField, lam: u64) -> PyResult<(u64, i64)> {
    curves::count_e(&field.inner, lam).map_err(value_err)
}

/// The conjugate pair of surface traces at lambda.
#[pyfunction]
fn prym_traces(field: &PyFqField, lam: u64) -> PyResult<(PyCycZ6, PyCycZ6)> {
    let pair = curves::prym_trace_pair(&field.inner, lam).map_err(value_err)?;
    Ok((PyCycZ6 { inner: pair.t1 }, PyCycZ6 { inner: pair.t2 }))
}

/// Whether the two surface traces add up to q + 1 - #X - a_E at lambda.
#[pyfunction]
fn trace_additivity(field: &PyFqField, lam: u64) -> PyResult<bool> {
    Ok(curves::check_trace_additivity(&field.inner, lam).map_err(value_err)?.additivity_ok)
}

/// Degree-6 zeta numerator coefficients from the counts over F_q, F_q^2,
/// F_q^3.
#[pyfunction]
fn zeta_coefficients(q: u64, n1: u64, n2: u64, n3: u64) -> Vec<i128> {
    curves::zeta_numerator_coeffs(q, n1, n2, n3).to_vec()
}

/// Gauss hypergeometric value 2F1(an/ad, bn/bd; cn/cd; z) by series,
/// connection, or Pfaff continuation.
#[pyfunction]
#[pyo3(signature = (an, ad, bn, bd, cn, cd, z, eps=HYP_EPS))]
#[allow(clippy::too_many_arguments)]
fn hyp2f1(
    an: i64,
    ad: i64,
    bn: i64,
    bd: i64,
    cn: i64,
    cd: i64,
    z: Complex64,
    eps: f64,
) -> PyResult<Complex64> {
    let params = HypParams::of(an, ad, bn, bd, cn, cd);
    periods::hyp2f1_eps(&params, z, eps).map_err(value_err)
}

/// The two period 3-vectors (mu, nu) at lambda with the given column twist.
#[pyfunction]
#[pyo3(signature = (lam, twist=0, eps=HYP_EPS))]
fn period_vectors(
    lam: Complex64,
    twist: i32,
    eps: f64,
) -> PyResult<(Vec<Complex64>, Vec<Complex64>)> {
    let pv = periods::period_vectors(lam, twist, eps).map_err(value_err)?;
    Ok((pv.mu.to_vec(), pv.nu.to_vec()))
}

/// Off-diagonal entries (m12, m21) of the quaternionic intertwiner at x.
#[pyfunction]
#[pyo3(signature = (x, twist=0))]
fn qm_offdiagonal(x: f64, twist: i32) -> (Complex64, Complex64) {
    let qm = periods::qm_matrix(x, twist);
    (qm.m12, qm.m21)
}

/// Whether the intertwiner maps the projected period lattice into itself
/// at x (lambda = x^6).
#[pyfunction]
fn qm_stabilizes(x: f64) -> PyResult<bool> {
    let qm = periods::qm_matrix(x, 0);
    let pv = periods::period_vectors(Complex64::new(x.powi(6), 0.0), 0, HYP_EPS)
        .map_err(value_err)?;
    let rows = periods::check_qm_stabilizes(&pv, &qm).map_err(value_err)?;
    Ok(rows.iter().all(|r| r.ok))
}

/// Hilbert symbol (a, b)_p, exactly, for odd p and p = 2.
#[pyfunction]
fn hilbert_symbol(a: i64, b: i64, p: u64) -> i32 {
    periods::hilbert_symbol(a, b, p)
}

/// Discriminant of the rational quaternion algebra (a, b).
#[pyfunction]
fn quaternion_discriminant(a: i64, b: i64) -> u64 {
    periods::quaternion_discriminant(a, b)
}

/// log10 of the isogeny constant for (dim, degree, height), as
/// (level, exponent) on the iterated-log scale.
#[pyfunction]
fn kappa_log10(g: u32, degk: u32, h: f64) -> PyResult<(u8, f64)> {
    let ls = bounds::kappa_log(g, degk, h).map_err(value_err)?;
    Ok((ls.level, ls.exponent))
}

/// Effective height bound for a g-dimensional isogeny factor of a
/// dim_b-dimensional variety of height h_b over a degree-degk field.
#[pyfunction]
fn isogeny_height_bound(g: u32, degk: u32, h_b: f64, dim_b: u32) -> PyResult<f64> {
    bounds::isogeny_factor_height_bound(g, degk, h_b, dim_b).map_err(value_err)
}

/// The auxiliary-prime-set constant as (level, exponent): level 0 means
/// the value is 10^exponent, level 1 means 10^10^exponent.
#[pyfunction]
fn snowden_level_exponent(degk: u32, qs: Vec<u64>) -> PyResult<(u8, f64)> {
    let ls = bounds::snowden_constant_log(degk, &qs).map_err(value_err)?;
    Ok((ls.level, ls.exponent))
}

/// Classification of the matrix group generated over the named ring
/// ("F7", "F25", ...): reducible, dihedral, exceptional, contains-SL2, or
/// projectively-small.
#[pyfunction]
fn dickson_classify(ring: &str, gens: Vec<[i64; 4]>) -> PyResult<String> {
    let ring: Ring = suites::parse_ring(ring).map_err(suite_err)?;
    let mats: Vec<Mat2> = gens.iter().map(|e| Mat2::from_ints(&ring, *e)).collect();
    for (i, m) in mats.iter().enumerate() {
        if !Mat2::is_invertible(&ring, m) {
            return Err(value_err(format!("generator {} is not invertible", i + 1)));
        }
    }
    let class = prym_core::galrep::dickson_classify(&ring, &mats).map_err(value_err)?;
    Ok(class.to_string())
}

/// Runs a named suite ("charsums", "traces", "ca", "periods", "bounds",
/// "dickson", "faltings-serre", "calibrate", "all") and returns the JSON
/// report.
#[pyfunction]
#[pyo3(signature = (name, samples=suites::DEFAULT_SAMPLES, seed=suites::DEFAULT_SEED))]
fn run_suite(name: &str, samples: usize, seed: u64) -> PyResult<String> {
    let start = Instant::now();
    let rows = match name {
        "charsums" => suites::charsums_suite(),
        "traces" => {
            let mut rows = suites::traces_exhaustive_suite().map_err(suite_err)?;
            rows.extend(suites::traces_random_suite(samples, seed).map_err(suite_err)?);
            rows.extend(suites::count_oracle_suite().map_err(suite_err)?);
            rows.extend(suites::zeta_suite().map_err(suite_err)?);
            rows
        }
        "ca" => suites::ca_suite().map_err(suite_err)?,
        "periods" => suites::periods_suite().map_err(suite_err)?,
        "bounds" => suites::bounds_suite().map_err(suite_err)?,
        "dickson" => suites::dickson_suite(),
        "faltings-serre" => {
            let mut rows = suites::fs_random_suite(samples, seed);
            rows.extend(suites::fs_special_rows());
            rows
        }
        "calibrate" => suites::run_calibration().map_err(suite_err)?.1,
        "all" => suites::all_rows(samples, seed).map_err(suite_err)?,
        other => return Err(value_err(format!("unknown suite {other:?}"))),
    };
    Ok(Report::new(name, rows, start.elapsed().as_millis()).to_json())
}

#[pymodule]
fn prym_verify_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCycZ6>()?;
    m.add_class::<PyFqField>()?;
    m.add_function(wrap_pyfunction!(root_of_unity, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_sum, m)?)?;
    m.add_function(wrap_pyfunction!(hypergeometric_sum, m)?)?;
    m.add_function(wrap_pyfunction!(count_x, m)?)?;
    m.add_function(wrap_pyfunction!(count_e, m)?)?;
    m.add_function(wrap_pyfunction!(prym_traces, m)?)?;
    m.add_function(wrap_pyfunction!(trace_additivity, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(hyp2f1, m)?)?;
    m.add_function(wrap_pyfunction!(period_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(qm_offdiagonal, m)?)?;
    m.add_function(wrap_pyfunction!(qm_stabilizes, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(quaternion_discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_log10, m)?)?;
    m.add_function(wrap_pyfunction!(isogeny_height_bound, m)?)?;
    m.add_function(wrap_pyfunction!(snowden_level_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(dickson_classify, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}

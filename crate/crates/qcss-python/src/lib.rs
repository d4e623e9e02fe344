//! Python bindings: the finite field, the four family constructions, the
//! exhaustive correlation profile, and the codebook/character-sum helpers.
//!
//! Field elements cross the boundary as integer codes (sum of coeffs[i]*p^i)
//! or as expression strings in the same `1+2a` / `g+1` syntax the CLI uses;
//! complex values come back as (re, im) tuples.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qcss_core::characters::{AdditiveCharacter, MultiplicativeCharacter, ZeroConvention};
use qcss_core::charsum::PolynomialOverField;
use qcss_core::codebook::CodebookOptions;
use qcss_core::constructions::Construction as CoreConstruction;
use qcss_core::correlation::{correlation_profile, matrix_corr, ProfileOptions};
use qcss_core::field::{FieldElement, FieldSpec};
use qcss_core::textfmt::{format_element, parse_element, parse_modulus};

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite field F_{p^m} with log/antilog tables.
#[pyclass(frozen)]
struct Field {
    spec: Arc<FieldSpec>,
}

impl Field {
    fn parse(&self, expr: &str) -> PyResult<FieldElement> {
        parse_element(expr, &self.spec).map_err(value_error)
    }

    fn element(&self, code: u64) -> PyResult<FieldElement> {
        self.spec.element(code).map_err(value_error)
    }
}

#[pymethods]
impl Field {
    /// Build F_{p^m}; `poly` (e.g. "x4+x+2") and `g` (e.g. "1+2a") default
    /// to the smallest-code choices.
    #[new]
    #[pyo3(signature = (p, m, poly=None, g=None))]
    fn new(p: u64, m: u32, poly: Option<&str>, g: Option<&str>) -> PyResult<Self> {
        let spec = build_field(p, m, poly, g)?;
        Ok(Field { spec })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.spec.p()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.spec.degree()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.spec.order()
    }

    /// Modulus polynomial coefficients, constant-first.
    #[getter]
    fn poly(&self) -> Vec<u64> {
        self.spec.modulus().to_vec()
    }

    /// The primitive element, as its integer code.
    #[getter]
    fn generator(&self) -> u64 {
        self.spec.generator().code()
    }

    /// Parse an element expression into its integer code.
    fn parse_element(&self, expr: &str) -> PyResult<u64> {
        Ok(self.parse(expr)?.code())
    }

    /// Canonical alpha-form string of an element code.
    fn format_element(&self, code: u64) -> PyResult<String> {
        Ok(format_element(&self.spec, self.element(code)?))
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.spec.add(self.element(a)?, self.element(b)?).code())
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.spec.sub(self.element(a)?, self.element(b)?).code())
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.spec.mul(self.element(a)?, self.element(b)?).code())
    }

    fn inv(&self, a: u64) -> PyResult<u64> {
        Ok(self.spec.inv(self.element(a)?).map_err(value_error)?.code())
    }

    fn pow(&self, a: u64, e: i64) -> PyResult<u64> {
        Ok(self.spec.pow(self.element(a)?, e).map_err(value_error)?.code())
    }

    /// Trace down to F_p.
    fn trace(&self, a: u64) -> PyResult<u64> {
        Ok(self.spec.trace(self.element(a)?))
    }

    fn discrete_log(&self, a: u64) -> PyResult<u64> {
        self.spec.discrete_log(self.element(a)?).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Field(p={}, m={}, poly={:?}, g={})",
            self.spec.p(),
            self.spec.degree(),
            self.spec.modulus(),
            format_element(&self.spec, self.spec.generator()),
        )
    }
}

fn build_field(p: u64, m: u32, poly: Option<&str>, g: Option<&str>) -> PyResult<Arc<FieldSpec>> {
    let mut builder = FieldSpec::builder(p, m);
    if let Some(s) = poly {
        builder = builder.poly(parse_modulus(s, p).map_err(value_error)?);
    }
    let base = builder.build().map_err(value_error)?;
    let spec = match g {
        None => base,
        Some(expr) => {
            if expr.contains('g') {
                return Err(PyValueError::new_err(
                    "g must be written in a/alpha form, not in terms of g",
                ));
            }
            let code = parse_element(expr, &base).map_err(value_error)?.code();
            FieldSpec::builder(p, m)
                .poly(base.modulus().to_vec())
                .generator(code)
                .build()
                .map_err(value_error)?
        }
    };
    Ok(Arc::new(spec))
}

/// One of the four family generators.
#[pyclass(frozen)]
struct Construction {
    inner: CoreConstruction,
}

#[pymethods]
impl Construction {
    /// kind: "cubic" | "quadratic" | "mixed" | "mixed0"; the field is
    /// F_{p^(2n)}; `delta` is the multiplicative character order for the
    /// mixed kinds; `chi_multiplier` defaults to 1.
    #[new]
    #[pyo3(signature = (kind, p, n, q_divisor, delta=None, poly=None, g=None, chi_multiplier=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        kind: &str,
        p: u64,
        n: u32,
        q_divisor: u64,
        delta: Option<u64>,
        poly: Option<&str>,
        g: Option<&str>,
        chi_multiplier: Option<&str>,
    ) -> PyResult<Self> {
        let field = build_field(p, 2 * n, poly, g)?;
        let need_delta =
            || delta.ok_or_else(|| PyValueError::new_err("mixed constructions require delta"));
        let inner = match kind {
            "cubic" => CoreConstruction::cubic(field.clone(), q_divisor),
            "quadratic" => CoreConstruction::quadratic(field.clone(), q_divisor),
            "mixed" => CoreConstruction::mixed_full(field.clone(), q_divisor, need_delta()?),
            "mixed0" => {
                CoreConstruction::mixed_lambda_zero(field.clone(), q_divisor, need_delta()?)
            }
            other => return Err(PyValueError::new_err(format!("unknown kind `{other}`"))),
        }
        .map_err(value_error)?;
        let inner = match chi_multiplier {
            None => inner,
            Some(expr) => {
                let a = parse_element(expr, &field).map_err(value_error)?;
                inner.set_multiplier(a).map_err(value_error)?
            }
        };
        Ok(Construction { inner })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    /// {"M", "K", "N", "delta_bound", "alphabet"}
    fn expected_parameters<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let e = self.inner.expected_parameters();
        let d = PyDict::new(py);
        d.set_item("M", e.set_size)?;
        d.set_item("K", e.flock_size)?;
        d.set_item("N", e.length)?;
        d.set_item("delta_bound", e.delta_bound)?;
        d.set_item("alphabet", e.alphabet)?;
        Ok(d)
    }

    /// The first `limit` canonical index strings, in enumeration order.
    fn indices(&self, limit: usize) -> Vec<String> {
        self.inner
            .enumerate_indices()
            .take(limit)
            .map(|idx| self.inner.index_string(&idx))
            .collect()
    }

    /// Exponent rows of one member, e.g. build_matrix("0,g+1,1").
    fn build_matrix(&self, index: &str) -> PyResult<Vec<Vec<u64>>> {
        let idx = self.inner.parse_index(index).map_err(value_error)?;
        let m = self.inner.build_matrix(&idx).map_err(value_error)?;
        Ok((0..m.rows()).map(|k| m.row(k).to_vec()).collect())
    }

    /// The full matrix file (header + body) for one member.
    fn matrix_text(&self, index: &str) -> PyResult<String> {
        let idx = self.inner.parse_index(index).map_err(value_error)?;
        let m = self.inner.build_matrix(&idx).map_err(value_error)?;
        Ok(self.inner.matrix_file_text(&m))
    }

    /// Periodic correlation of two members at shift tau, via the matrices.
    fn correlation(&self, index1: &str, index2: &str, tau: usize) -> PyResult<(f64, f64)> {
        let idx1 = self.inner.parse_index(index1).map_err(value_error)?;
        let idx2 = self.inner.parse_index(index2).map_err(value_error)?;
        let s1 = self.inner.build_matrix(&idx1).map_err(value_error)?;
        let s2 = self.inner.build_matrix(&idx2).map_err(value_error)?;
        let r = matrix_corr(&s1, &s2, tau).map_err(value_error)?;
        Ok((r.re, r.im))
    }

    /// The same correlation through the reduced character-sum route.
    fn correlation_via_charsum(
        &self,
        index1: &str,
        index2: &str,
        tau: usize,
    ) -> PyResult<(f64, f64)> {
        let idx1 = self.inner.parse_index(index1).map_err(value_error)?;
        let idx2 = self.inner.parse_index(index2).map_err(value_error)?;
        let r = self
            .inner
            .correlation_via_charsum(&idx1, &idx2, tau)
            .map_err(value_error)?;
        Ok((r.re, r.im))
    }

    /// Materialize the family and scan it exhaustively. Returns the profile
    /// as a dict with keys M, K, N, A, delta_a, delta_c, delta_c_defined,
    /// delta_max, delta_opt, rho, argmax, plus the theorem bound.
    #[pyo3(signature = (cap=100_000, budget=10_000_000_000))]
    fn correlation_profile<'py>(
        &self,
        py: Python<'py>,
        cap: u64,
        budget: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let family = self.inner.build_family(cap).map_err(value_error)?;
        let profile = correlation_profile(
            &family,
            &ProfileOptions {
                max_multiply_adds: budget,
            },
        )
        .map_err(value_error)?;
        let d = PyDict::new(py);
        d.set_item("M", profile.set_size)?;
        d.set_item("K", profile.flock_size)?;
        d.set_item("N", profile.length)?;
        d.set_item("A", profile.alphabet)?;
        d.set_item("delta_a", profile.delta_a)?;
        d.set_item("delta_c", profile.delta_c)?;
        d.set_item("delta_c_defined", profile.delta_c_defined)?;
        d.set_item("delta_max", profile.delta_max)?;
        d.set_item("delta_opt", profile.delta_opt)?;
        d.set_item("rho", profile.rho)?;
        d.set_item("argmax", profile.argmax)?;
        d.set_item("theorem_bound", self.inner.expected_parameters().delta_bound)?;
        Ok(d)
    }

    /// Induce the unit-norm codebook and scan its maximum inner product.
    /// Returns {"U", "V", "i_max", "welch"}.
    #[pyo3(signature = (cap=100_000, budget=10_000_000_000))]
    fn codebook_imax<'py>(&self, py: Python<'py>, cap: u64, budget: u64) -> PyResult<Bound<'py, PyDict>> {
        let family = self.inner.build_family(cap).map_err(value_error)?;
        let opts = CodebookOptions {
            max_multiply_adds: budget,
            ..Default::default()
        };
        let cb = qcss_core::induce_codebook(&family, &opts).map_err(value_error)?;
        let observed = qcss_core::i_max(&cb, &opts).map_err(value_error)?;
        let u = cb.num_vectors() as u64;
        let v = cb.dim() as u64;
        let d = PyDict::new(py);
        d.set_item("U", u)?;
        d.set_item("V", v)?;
        d.set_item("i_max", observed)?;
        d.set_item("welch", qcss_core::welch_bound(u, v).map_err(value_error)?)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let e = self.inner.expected_parameters();
        format!(
            "Construction({}, M={}, K={}, N={}, alphabet={})",
            self.inner.name(),
            e.set_size,
            e.flock_size,
            e.length,
            e.alphabet
        )
    }
}

/// The lower bound KN*sqrt((M/K-1)/(MN-1)) on delta_max.
#[pyfunction]
fn delta_opt(m: u64, k: u64, n: u64) -> PyResult<f64> {
    qcss_core::delta_opt(m, k, n).map_err(value_error)
}

/// delta_max / delta_opt.
#[pyfunction]
fn tightness_rho(delta_max: f64, m: u64, k: u64, n: u64) -> PyResult<f64> {
    qcss_core::tightness_rho(delta_max, m, k, n).map_err(value_error)
}

/// The Welch bound sqrt((U-V)/((U-1)V)).
#[pyfunction]
fn welch_bound(u: u64, v: u64) -> PyResult<f64> {
    qcss_core::welch_bound(u, v).map_err(value_error)
}

/// {"real_flavor", "complex_flavor", "cubic"}; values are None where the
/// density preconditions fail.
#[pyfunction]
fn levenshtein_bounds(py: Python<'_>, u: u64, v: u64) -> PyResult<Bound<'_, PyDict>> {
    let b = qcss_core::levenshtein_bounds(u, v).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("real_flavor", b.real_flavor)?;
    d.set_item("complex_flavor", b.complex_flavor)?;
    d.set_item("cubic", b.cubic)?;
    Ok(d)
}

/// Scaling diagnostics for an (M, K, N, delta_max) family, as a JSON-shaped dict.
#[pyfunction]
fn scaling_report(py: Python<'_>, m: u64, k: u64, n: u64, delta_max: f64) -> PyResult<Bound<'_, PyDict>> {
    let r = qcss_core::scaling_report(m, k, n, delta_max).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("M", r.set_size)?;
    d.set_item("K", r.flock_size)?;
    d.set_item("N", r.length)?;
    d.set_item("U", r.num_vectors)?;
    d.set_item("V", r.dim)?;
    d.set_item("delta_max", r.delta_max)?;
    d.set_item("delta_opt", r.delta_opt)?;
    d.set_item("rho", r.rho)?;
    d.set_item("i_max", r.i_max)?;
    d.set_item("welch", r.welch)?;
    d.set_item("lev_complex", r.levenshtein.complex_flavor)?;
    d.set_item("lev_cubic", r.levenshtein.cubic)?;
    d.set_item("ratio_quadratic", r.ratio_quadratic)?;
    d.set_item("ratio_cubic", r.ratio_cubic)?;
    d.set_item("regime", r.regime.to_string())?;
    Ok(d)
}

/// Sum over F_q of chi_a(h(z)); `h` is the coefficient-code list,
/// constant-first, and `a` an element expression (default "1").
#[pyfunction]
#[pyo3(signature = (field, h, a=None))]
fn additive_charsum(field: &Field, h: Vec<u64>, a: Option<&str>) -> PyResult<(f64, f64)> {
    let multiplier = match a {
        None => FieldElement::ONE,
        Some(expr) => field.parse(expr)?,
    };
    let chi = AdditiveCharacter::new(field.spec.clone(), multiplier);
    let poly = PolynomialOverField::from_codes(field.spec.clone(), &h);
    let s = qcss_core::additive_charsum(&chi, &poly);
    Ok((s.re, s.im))
}

/// Sum over F_q of psi^r(f(z)) chi_a(h(z)) with psi of order `delta`
/// vanishing at 0.
#[pyfunction]
#[pyo3(signature = (field, delta, f, r=1, h=None, a=None))]
fn mixed_charsum(
    field: &Field,
    delta: u64,
    f: Vec<u64>,
    r: u64,
    h: Option<Vec<u64>>,
    a: Option<&str>,
) -> PyResult<(f64, f64)> {
    let psi = MultiplicativeCharacter::new(field.spec.clone(), delta, ZeroConvention::Zero)
        .map_err(value_error)?;
    let multiplier = match a {
        None => FieldElement::ONE,
        Some(expr) => field.parse(expr)?,
    };
    let chi = AdditiveCharacter::new(field.spec.clone(), multiplier);
    let f = PolynomialOverField::from_codes(field.spec.clone(), &f);
    let h = PolynomialOverField::from_codes(field.spec.clone(), &h.unwrap_or_default());
    let s = qcss_core::mixed_charsum(&psi, r, &f, &chi, &h).map_err(value_error)?;
    Ok((s.re, s.im))
}

/// The Gauss sum of the order-`delta` character against chi_a.
#[pyfunction]
#[pyo3(signature = (field, delta, a=None))]
fn gauss_sum(field: &Field, delta: u64, a: Option<&str>) -> PyResult<(f64, f64)> {
    let psi = MultiplicativeCharacter::new(field.spec.clone(), delta, ZeroConvention::Zero)
        .map_err(value_error)?;
    let multiplier = match a {
        None => FieldElement::ONE,
        Some(expr) => field.parse(expr)?,
    };
    let chi = AdditiveCharacter::new(field.spec.clone(), multiplier);
    let s = qcss_core::gauss_sum(&psi, &chi).map_err(value_error)?;
    Ok((s.re, s.im))
}

/// Randomized square-root-bound audit; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (field, trials=1000, seed=0))]
fn weil_audit<'py>(
    py: Python<'py>,
    field: &Field,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let report = qcss_core::weil_audit(&field.spec, trials, seed).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("field", report.field)?;
    d.set_item("trials", report.trials)?;
    d.set_item("max_ratio", report.max_ratio)?;
    d.set_item("attaining_polynomial", report.attaining_polynomial)?;
    Ok(d)
}

#[pymodule]
fn qcss_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Field>()?;
    m.add_class::<Construction>()?;
    m.add_function(wrap_pyfunction!(delta_opt, m)?)?;
    m.add_function(wrap_pyfunction!(tightness_rho, m)?)?;
    m.add_function(wrap_pyfunction!(welch_bound, m)?)?;
    m.add_function(wrap_pyfunction!(levenshtein_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_report, m)?)?;
    m.add_function(wrap_pyfunction!(additive_charsum, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_charsum, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum, m)?)?;
    m.add_function(wrap_pyfunction!(weil_audit, m)?)?;
    Ok(())
}

//! Python bindings. Structured results (reports, growth series) are handed
//! over as plain dicts with the same shape as the CLI's JSON output.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use plength::acm::{acm_extremal_plength, acm_factorizations, Acm as CoreAcm};
use plength::factor::{extremal_plength, factorizations, DEFAULT_BUDGET};
use plength::harness::{acm_verify, ns_verify, RunConfig};
use plength::m46::{
    construct_70_factorization, count_good_atoms as core_count_good_atoms, ell0_max_exact, growth_series, GrowthBase,
    GrowthPoint, GrowthSeries, SmoothElement,
};
use plength::table1::verify_table1;
use plength::{ExtExponent, Mode, NumericalSemigroup as CoreSemigroup};

fn err(e: plength::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// `p` may be a nonnegative int or the string "inf".
fn exponent(p: &Bound<'_, PyAny>) -> PyResult<ExtExponent> {
    if let Ok(k) = p.extract::<u32>() {
        return Ok(ExtExponent::Finite(k));
    }
    let s: String = p.extract()?;
    s.parse().map_err(err)
}

fn mode(m: &str) -> PyResult<Mode> {
    m.parse().map_err(err)
}

fn run_config(window: Option<(u64, u64)>, seed: u64) -> PyResult<RunConfig> {
    let cfg = RunConfig {
        window,
        seed,
        ..RunConfig::default()
    };
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

#[pyclass(frozen, module = "plength")]
struct NumericalSemigroup(CoreSemigroup);

#[pymethods]
impl NumericalSemigroup {
    #[new]
    fn new(generators: Vec<u64>) -> PyResult<Self> {
        CoreSemigroup::new(&generators).map(Self).map_err(err)
    }

    #[getter]
    fn generators(&self) -> Vec<u64> {
        self.0.generators().to_vec()
    }

    fn __contains__(&self, n: u64) -> bool {
        self.0.contains(n)
    }

    fn __repr__(&self) -> String {
        format!("NumericalSemigroup({:?})", self.0.generators())
    }

    fn frobenius(&self) -> i64 {
        self.0.frobenius()
    }

    #[pyo3(signature = (m=None))]
    fn apery(&self, m: Option<u64>) -> PyResult<Vec<u64>> {
        Ok(self.0.apery(m.unwrap_or(self.0.smallest())).map_err(err)?.entries)
    }

    #[pyo3(signature = (n, budget=DEFAULT_BUDGET))]
    fn factorizations(&self, n: u64, budget: u64) -> PyResult<Vec<Vec<u64>>> {
        let all = factorizations(&self.0, n, budget).map_err(err)?;
        Ok(all.into_iter().map(|z| z.exponents().to_vec()).collect())
    }

    /// Returns `(value, witness)` for the extremal p-length of `n`.
    fn plength(&self, n: u64, p: &Bound<'_, PyAny>, mode: &str) -> PyResult<(u128, Vec<u64>)> {
        let r = extremal_plength(&self.0, n, exponent(p)?, self::mode(mode)?).map_err(err)?;
        Ok((r.value, r.witness.exponents().to_vec()))
    }

    #[pyo3(signature = (window=None, seed=0))]
    fn verify<'py>(&self, py: Python<'py>, window: Option<(u64, u64)>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let cfg = run_config(window, seed)?;
        let report = py.detach(|| ns_verify(&self.0, &cfg)).map_err(err)?;
        to_py(py, &report)
    }

    #[pyo3(signature = (window=None))]
    fn table1<'py>(&self, py: Python<'py>, window: Option<(u64, u64)>) -> PyResult<Bound<'py, PyAny>> {
        let report = py.detach(|| verify_table1(&self.0, window)).map_err(err)?;
        to_py(py, &report)
    }
}

/// The arithmetical congruence monoid {1} ∪ {x ≡ a mod b}.
#[pyclass(frozen, module = "plength")]
struct Acm(CoreAcm);

#[pymethods]
impl Acm {
    #[new]
    fn new(a: u64, b: u64) -> PyResult<Self> {
        CoreAcm::new(a, b).map(Self).map_err(err)
    }

    #[getter]
    fn a(&self) -> u64 {
        self.0.a()
    }

    #[getter]
    fn b(&self) -> u64 {
        self.0.b()
    }

    #[getter]
    fn is_regular(&self) -> bool {
        self.0.is_regular()
    }

    fn __contains__(&self, x: u128) -> bool {
        self.0.contains(x)
    }

    fn __repr__(&self) -> String {
        format!("Acm({}, {})", self.0.a(), self.0.b())
    }

    fn is_atom(&self, x: u128) -> PyResult<bool> {
        self.0.is_atom(x).map_err(err)
    }

    fn atoms_up_to(&self, bound: u128) -> PyResult<Vec<u128>> {
        self.0.atoms_up_to(bound).map_err(err)
    }

    /// Factorizations as lists of `(atom, multiplicity)` pairs.
    #[pyo3(signature = (x, budget=DEFAULT_BUDGET))]
    fn factorizations(&self, x: u128, budget: u64) -> PyResult<Vec<Vec<(u128, u64)>>> {
        let all = acm_factorizations(&self.0, x, budget).map_err(err)?;
        Ok(all.into_iter().map(|f| f.parts().to_vec()).collect())
    }

    fn plength(&self, x: u128, p: &Bound<'_, PyAny>, mode: &str) -> PyResult<(u128, Vec<(u128, u64)>)> {
        let r = acm_extremal_plength(&self.0, x, exponent(p)?, self::mode(mode)?).map_err(err)?;
        Ok((r.value, r.witness.parts().to_vec()))
    }

    #[pyo3(signature = (window=None, seed=0))]
    fn verify<'py>(&self, py: Python<'py>, window: Option<(u64, u64)>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let cfg = run_config(window, seed)?;
        let report = py.detach(|| acm_verify(&self.0, &cfg)).map_err(err)?;
        to_py(py, &report)
    }

    /// Values of the functional along x, x², …, x^nmax with a log-log fit.
    fn growth<'py>(
        &self,
        py: Python<'py>,
        x: u128,
        p: &Bound<'_, PyAny>,
        mode: &str,
        nmax: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let (p, mode) = (exponent(p)?, self::mode(mode)?);
        let m = self.0;
        let series = py
            .detach(|| -> plength::Result<GrowthSeries> {
                let smooth = SmoothElement::from_integer(x).filter(|_| (m.a(), m.b()) == (4, 6));
                if let Some(e) = smooth {
                    return growth_series(&e, p, mode, nmax, RunConfig::default().cell_budget);
                }
                let mut points = Vec::new();
                for n in 1..=nmax {
                    let xn = x.checked_pow(n).ok_or(plength::Error::Overflow("a power of the base"))?;
                    points.push(GrowthPoint { n, value: acm_extremal_plength(&m, xn, p, mode)?.value });
                }
                Ok(GrowthSeries::from_points(GrowthBase::Integer(x), p, mode, points))
            })
            .map_err(err)?;
        to_py(py, &series)
    }
}

/// Largest number of distinct atoms in a factorization of xⁿ in the monoid
/// 4 mod 6, for x = 2^e2·5^e5·7^e7.
#[pyfunction]
fn ell0_max(py: Python<'_>, e2: u32, e5: u32, e7: u32, n: u32) -> PyResult<u64> {
    py.detach(|| ell0_max_exact(&SmoothElement::new(e2, e5, e7), n)).map_err(err)
}

/// Number of good atoms dividing x in the monoid 4 mod 6.
#[pyfunction]
fn count_good_atoms(x: u128) -> PyResult<u64> {
    let e = SmoothElement::from_integer(x)
        .ok_or_else(|| PyValueError::new_err(format!("{x} is not of the form 2^a 5^b 7^c")))?;
    core_count_good_atoms(&e).map_err(err)
}

/// The explicit factorization of 70ⁿ with many distinct atoms, for even k.
/// Returns `(n, [(atom, multiplicity), ...])`.
#[pyfunction]
fn construct_70(k: u32) -> PyResult<(u64, Vec<(u128, u64)>)> {
    let (n, f) = construct_70_factorization(k).map_err(err)?;
    let parts = f
        .parts()
        .iter()
        .map(|(a, m)| {
            let v = a.element().to_u128().ok_or(plength::Error::Overflow("an atom value"))?;
            Ok((v, *m))
        })
        .collect::<plength::Result<Vec<_>>>()
        .map_err(err)?;
    Ok((n, parts))
}

#[pymodule(name = "plength")]
fn plength_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<NumericalSemigroup>()?;
    m.add_class::<Acm>()?;
    m.add_function(wrap_pyfunction!(ell0_max, m)?)?;
    m.add_function(wrap_pyfunction!(count_good_atoms, m)?)?;
    m.add_function(wrap_pyfunction!(construct_70, m)?)?;
    Ok(())
}

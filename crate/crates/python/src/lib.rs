use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sl2lnd_core::golden::{golden as run_golden, Suite};
use sl2lnd_core::grading::{cayley_sylvester as cs, criterion, kernel_basis};
use sl2lnd_core::models::{self, CheckMode, ModelInstance};
use sl2lnd_core::sl2::{check_relations, isotypic_decompose, RelationCheckConfig};
use sl2lnd_core::{basic_pair, FundamentalPair, Which};

fn err(e: sl2lnd_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn which(name: &str) -> PyResult<Which> {
    match name {
        "D" | "d" => Ok(Which::D),
        "U" | "u" => Ok(Which::U),
        _ => Err(PyValueError::new_err(format!("unknown derivation {name:?}, expected D or U"))),
    }
}

/// Polynomial with exact rational coefficients.
#[pyclass(frozen, eq, skip_from_py_object, module = "sl2lnd")]
#[derive(Clone, PartialEq)]
pub struct Polynomial(sl2lnd_core::Polynomial);

#[pymethods]
impl Polynomial {
    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.0)
    }

    fn __add__(&self, other: &Polynomial) -> PyResult<Polynomial> {
        self.0.checked_add(&other.0).map(Polynomial).map_err(err)
    }

    fn __sub__(&self, other: &Polynomial) -> PyResult<Polynomial> {
        self.0.checked_sub(&other.0).map(Polynomial).map_err(err)
    }

    fn __mul__(&self, other: &Polynomial) -> PyResult<Polynomial> {
        self.0.checked_mul(&other.0).map(Polynomial).map_err(err)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Total degree, `None` for the zero polynomial.
    fn degree(&self) -> Option<u32> {
        self.0.total_degree()
    }
}

/// A fundamental pair (D, U) with E = [D, U].
#[pyclass(frozen, module = "sl2lnd")]
pub struct Pair(FundamentalPair);

#[pymethods]
impl Pair {
    /// The pair on k[V_d].
    #[staticmethod]
    fn basic(d: usize) -> PyResult<Pair> {
        basic_pair(d).map(Pair).map_err(err)
    }

    fn variables(&self) -> Vec<String> {
        self.0.vars().names().to_vec()
    }

    fn parse(&self, text: &str) -> PyResult<Polynomial> {
        self.0.parse(text).map(Polynomial).map_err(err)
    }

    #[pyo3(signature = (which_name, f, power = 1))]
    fn apply(&self, which_name: &str, f: &Polynomial, power: usize) -> PyResult<Polynomial> {
        let der = if which_name == "E" { self.0.e() } else { self.0.get(which(which_name)?) };
        der.apply_n(&f.0, power).map(Polynomial).map_err(err)
    }

    fn weight_of(&self, f: &Polynomial) -> PyResult<Option<i64>> {
        self.0.weight_of(&f.0).map_err(err)
    }

    fn check_relations(&self) -> PyResult<bool> {
        Ok(check_relations(&self.0, &RelationCheckConfig::default()).map_err(err)?.passed)
    }

    #[pyo3(signature = (degree, weight, which_name = "D"))]
    fn kernel(&self, degree: u32, weight: i64, which_name: &str) -> PyResult<Vec<Polynomial>> {
        Ok(kernel_basis(&self.0, which(which_name)?, degree, weight).map_err(err)?.into_iter().map(Polynomial).collect())
    }

    /// Parts keyed by the nilpotency index n, with D^(n+1) part = 0.
    fn isotypic(&self, f: &Polynomial) -> PyResult<BTreeMap<usize, Polynomial>> {
        let dec = isotypic_decompose(&self.0, &f.0).map_err(err)?;
        Ok(dec.parts.into_iter().map(|(n, p)| (n, Polynomial(p))).collect())
    }

    /// Certificate search up to `bound`, as a JSON string.
    fn criterion(&self, bound: u32) -> PyResult<String> {
        json(&criterion(&self.0, bound).map_err(err)?)
    }
}

/// A matrix model together with its relation ideal.
#[pyclass(frozen, module = "sl2lnd")]
pub struct Model(ModelInstance);

#[pymethods]
impl Model {
    #[new]
    #[pyo3(signature = (kind, n = 1, m = 2, tau = 1))]
    fn new(kind: &str, n: usize, m: usize, tau: i64) -> PyResult<Model> {
        let model = match kind {
            "cm" => models::build_cm(n),
            "cm-rank2" => models::build_cm_rank2(n, sl2lnd_core::algebra::rat(tau)),
            "quiver" => models::build_quiver(m, n, &models::default_lambda(m)),
            _ => return Err(PyValueError::new_err(format!("unknown model {kind:?}"))),
        };
        model.map(Model).map_err(err)
    }

    fn pair(&self) -> Pair {
        Pair(self.0.pair.clone())
    }

    fn certificate_function(&self) -> Polynomial {
        Polynomial(self.0.certificate_fn.clone())
    }

    fn relations(&self) -> Vec<Polynomial> {
        self.0.relations.iter().cloned().map(Polynomial).collect()
    }

    fn check_certificate(&self) -> PyResult<bool> {
        Ok(models::check_certificate(&self.0).map_err(err)?.passed)
    }

    /// sl2 relations modulo the ideal; returns the JSON report.
    #[pyo3(signature = (mode = "groebner"))]
    fn check_quotient(&self, mode: &str) -> PyResult<String> {
        let mode = match mode {
            "groebner" => CheckMode::Groebner,
            "points" => CheckMode::Points,
            _ => return Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
        };
        json(&models::check_sl2_mod_ideal(&self.0, mode, None).map_err(err)?)
    }
}

/// Kernel dimension of D on the weight-w part of degree-j forms on V_d.
#[pyfunction]
fn cayley_sylvester(d: usize, j: usize, w: i64) -> u128 {
    cs(d, j, w)
}

#[pyfunction]
fn golden(suite: &str) -> PyResult<bool> {
    let suite = match suite {
        "d3" => Suite::D3,
        "v3v3" => Suite::V3v3,
        "v4v4" => Suite::V4v4,
        _ => return Err(PyValueError::new_err(format!("unknown suite {suite:?}"))),
    };
    Ok(run_golden(suite).map_err(err)?.passed)
}

#[pymodule]
fn sl2lnd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Polynomial>()?;
    m.add_class::<Pair>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(cayley_sylvester, m)?)?;
    m.add_function(wrap_pyfunction!(golden, m)?)?;
    Ok(())
}

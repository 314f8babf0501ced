//! Python bindings: the `frobenius` extension module.

use frobenius_core::analysis;
use frobenius_core::frobenius::{
    conductor_set, diophantine_solve, frobenius_vector, gaps, sylvester_number as sylvester, DiophantineStatus,
};
use frobenius_core::lattice::{standard_representation, GeneratorSystem};
use frobenius_core::oracle::{frobenius_number_dp, verify_conductor, verify_theorem1};
use frobenius_core::semigroup::{membership_fast, AffineSemigroup, BruteForce, SearchOutcome, DEFAULT_BUDGET};
use frobenius_core::singularities::{curve_semigroup as curve, qo_semigroup as qo, zariski_validate as zariski};
use frobenius_core::singularities::{CurveExponents, QOExponents};
use frobenius_core::Error;
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(frobenius, ConditionsUnmet, PyValueError, "Conditions (*) and (**) do not both hold.");
create_exception!(frobenius, BudgetExhausted, PyRuntimeError, "A brute-force search ran out of budget.");

fn py_err(err: Error) -> PyErr {
    match err {
        Error::ConditionsUnmet(_) => ConditionsUnmet::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Affine semigroup generated by the given vectors; the first `e` must be
/// linearly independent.
#[pyclass(frozen, module = "frobenius")]
struct Semigroup {
    inner: AffineSemigroup,
}

#[pymethods]
impl Semigroup {
    #[new]
    #[pyo3(signature = (generators, e=None))]
    fn new(generators: Vec<Vec<BigInt>>, e: Option<usize>) -> PyResult<Self> {
        let e = e.or_else(|| generators.first().map(Vec::len)).unwrap_or(0);
        let system = GeneratorSystem::new(e, generators).map_err(py_err)?;
        Ok(Self { inner: AffineSemigroup::new(system).map_err(py_err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<BigInt>> {
        self.inner.system().generators().to_vec()
    }

    /// `[D₁, …, D_{s+1}]`.
    #[getter]
    fn d(&self) -> Vec<BigInt> {
        self.inner.chain().d().to_vec()
    }

    /// `[e₁, …, e_s]`.
    #[getter]
    fn indices(&self) -> Vec<BigInt> {
        self.inner.chain().indices().to_vec()
    }

    #[getter]
    fn conditions_hold(&self) -> bool {
        self.inner.conditions().all_hold()
    }

    fn frobenius_vector(&self) -> PyResult<Vec<BigInt>> {
        Ok(frobenius_vector(&self.inner).map_err(py_err)?.g)
    }

    fn conductor(&self) -> PyResult<Vec<Vec<BigInt>>> {
        let g = self.frobenius_vector()?;
        conductor_set(&self.inner, &g).map_err(py_err)
    }

    fn gaps(&self) -> PyResult<Vec<BigInt>> {
        gaps(&self.inner).map_err(py_err)
    }

    fn standard_representation(&self, v: Vec<BigInt>) -> PyResult<Vec<BigInt>> {
        let chain = self.inner.chain();
        Ok(standard_representation(chain, &v, chain.depth()).map_err(py_err)?.coefficients)
    }

    /// Membership; uses the standard representation when the conditions
    /// hold and a bounded search otherwise.
    #[pyo3(signature = (v, budget=DEFAULT_BUDGET))]
    fn contains(&self, v: Vec<BigInt>, budget: u64) -> PyResult<bool> {
        let chain = self.inner.chain();
        if v.len() != self.inner.dim() || !chain.contains(&v, chain.depth()).map_err(py_err)? {
            return Ok(false);
        }
        if self.inner.conditions().all_hold() {
            return Ok(membership_fast(&self.inner, &v).map_err(py_err)?.in_semigroup);
        }
        match BruteForce::new(self.inner.system().generators()).search(&v, Some(budget)) {
            SearchOutcome::Found(_) => Ok(true),
            SearchOutcome::NotFound => Ok(false),
            SearchOutcome::Exhausted => Err(BudgetExhausted::new_err(format!("no answer within {budget} nodes"))),
        }
    }

    fn __contains__(&self, v: Vec<BigInt>) -> PyResult<bool> {
        self.contains(v, DEFAULT_BUDGET)
    }

    /// Nonnegative solution of `A·X = B`: `(status, witness or None)`.
    #[pyo3(signature = (rhs, budget=DEFAULT_BUDGET))]
    fn solve(&self, rhs: Vec<BigInt>, budget: u64) -> PyResult<(&'static str, Option<Vec<BigInt>>)> {
        let answer = diophantine_solve(&self.inner, &rhs, budget).map_err(py_err)?;
        let status = match answer.status {
            DiophantineStatus::SolvableByCone => "solvable_by_cone",
            DiophantineStatus::SolvableWithWitness => "solvable_with_witness",
            DiophantineStatus::LatticeInfeasible => "lattice_infeasible",
            DiophantineStatus::NoSolution => "no_solution",
            DiophantineStatus::ConditionsUnmet => "conditions_unmet",
        };
        Ok((status, answer.witness))
    }

    /// Brute-force check of the Frobenius vector (and the conductor when
    /// defined) on the box `g + [0, margin·(v₁ + … + v_e)]`.
    #[pyo3(signature = (margin=3))]
    fn verify(&self, margin: u64) -> PyResult<bool> {
        let g = self.frobenius_vector()?;
        let mut ok = verify_theorem1(&self.inner, &g, margin).map_err(py_err)?.holds;
        if ok && self.inner.chain().full_lattice() {
            let set = conductor_set(&self.inner, &g).map_err(py_err)?;
            ok = verify_conductor(&self.inner, &set, margin).map_err(py_err)?.holds();
        }
        Ok(ok)
    }

    #[pyo3(signature = (allow_subset=false))]
    fn analyze<'py>(&self, py: Python<'py>, allow_subset: bool) -> PyResult<Bound<'py, PyAny>> {
        document(py, self.inner.system(), allow_subset)
    }

    fn __repr__(&self) -> String {
        let gens: Vec<String> = self
            .inner
            .system()
            .generators()
            .iter()
            .map(|g| format!("[{}]", g.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("Semigroup([{}])", gens.join(", "))
    }
}

fn document<'py>(py: Python<'py>, system: &GeneratorSystem, allow_subset: bool) -> PyResult<Bound<'py, PyAny>> {
    let doc = analysis::analyze(system, allow_subset).map_err(py_err)?;
    py.import("json")?.call_method1("loads", (doc.to_json(),))
}

/// Full analysis as a dict in the CLI's document format (integers as strings).
#[pyfunction]
#[pyo3(signature = (generators, allow_subset=false))]
fn analyze<'py>(py: Python<'py>, generators: Vec<Vec<BigInt>>, allow_subset: bool) -> PyResult<Bound<'py, PyAny>> {
    let e = generators.first().map(Vec::len).unwrap_or(0);
    let system = GeneratorSystem::new(e, generators).map_err(py_err)?;
    document(py, &system, allow_subset)
}

#[pyfunction]
fn curve_semigroup<'py>(py: Python<'py>, n: BigInt, m: Vec<BigInt>) -> PyResult<Bound<'py, PyDict>> {
    let data = curve(&CurveExponents::new(n, m)).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("generators", data.generators)?;
    out.set_item("d", data.d)?;
    out.set_item("e", data.e)?;
    out.set_item("conductor", data.conductor)?;
    out.set_item("milnor", data.milnor)?;
    out.set_item("gap_count", data.gap_count)?;
    Ok(out)
}

#[pyfunction]
fn qo_semigroup<'py>(py: Python<'py>, n: BigInt, m: Vec<Vec<BigInt>>) -> PyResult<Bound<'py, PyDict>> {
    let e = m.first().map(Vec::len).unwrap_or(0);
    let data = qo(&QOExponents::new(e, n, m)).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("generators", data.semigroup.system().generators().to_vec())?;
    out.set_item("d", data.d)?;
    out.set_item("e", data.e_indices)?;
    out.set_item("g", data.g)?;
    Ok(out)
}

#[pyfunction]
fn zariski_validate(r: Vec<BigInt>) -> bool {
    zariski(&r)
}

#[pyfunction]
fn sylvester_number(a: BigInt, b: BigInt) -> PyResult<BigInt> {
    sylvester(&a, &b).map_err(py_err)
}

/// Frobenius number of a numerical semigroup by sieving.
#[pyfunction]
fn frobenius_number(generators: Vec<BigInt>) -> PyResult<BigInt> {
    frobenius_number_dp(&generators).map_err(py_err)
}

#[pymodule]
pub fn frobenius(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Semigroup>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(curve_semigroup, m)?)?;
    m.add_function(wrap_pyfunction!(qo_semigroup, m)?)?;
    m.add_function(wrap_pyfunction!(zariski_validate, m)?)?;
    m.add_function(wrap_pyfunction!(sylvester_number, m)?)?;
    m.add_function(wrap_pyfunction!(frobenius_number, m)?)?;
    m.add("ConditionsUnmet", m.py().get_type::<ConditionsUnmet>())?;
    m.add("BudgetExhausted", m.py().get_type::<BudgetExhausted>())?;
    Ok(())
}

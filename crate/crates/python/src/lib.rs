//! Python bindings: instances, schedules, the heuristics, the exact sweep
//! and the front metrics.

use std::time::Duration;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use tousched::bench::{self, GeneratorParams};
use tousched::exact::{self, BranchAndBound, ExactOptions};
use tousched::heuristics;
use tousched::metrics::{self, Normalization};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Instance", module = "tousched_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: tousched::Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    fn new(processing_times: Vec<usize>, rates: Vec<f64>, slot_costs: Vec<f64>) -> PyResult<Self> {
        let inner =
            tousched::Instance::new(processing_times, rates, slot_costs).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        let inner = bench::read_instance(path.as_ref()).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = bench::parse_instance(text).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (n, m, k, seed, p_max=12, u_max=6, c_max=8))]
    fn generate(
        n: usize,
        m: usize,
        k: usize,
        seed: u64,
        p_max: u32,
        u_max: u32,
        c_max: u32,
    ) -> PyResult<Self> {
        let params = GeneratorParams {
            n,
            m,
            k,
            p_max,
            u_max,
            c_max,
            seed,
        };
        let inner = bench::generate_instance(&params).map_err(value_error)?;
        Ok(Self { inner })
    }

    fn to_text(&self) -> String {
        bench::format_instance(&self.inner)
    }

    #[getter]
    fn n_jobs(&self) -> usize {
        self.inner.n_jobs()
    }

    #[getter]
    fn n_machines(&self) -> usize {
        self.inner.n_machines()
    }

    #[getter]
    fn n_slots(&self) -> usize {
        self.inner.n_slots()
    }

    #[getter]
    fn processing_times(&self) -> Vec<usize> {
        self.inner.processing_times().to_vec()
    }

    #[getter]
    fn rates(&self) -> Vec<f64> {
        self.inner.consumption_rates().to_vec()
    }

    #[getter]
    fn slot_costs(&self) -> Vec<f64> {
        self.inner.slot_costs().to_vec()
    }

    fn lower_bound_makespan(&self) -> usize {
        tousched::lower_bound_makespan(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(n_jobs={}, n_machines={}, n_slots={})",
            self.inner.n_jobs(),
            self.inner.n_machines(),
            self.inner.n_slots()
        )
    }
}

/// A non-preemptive schedule; `placements[j]` is `(machine, start)`.
#[pyclass(name = "Schedule", module = "tousched_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySchedule {
    inner: tousched::Schedule,
    makespan: usize,
    tec: f64,
}

impl PySchedule {
    fn wrap(instance: &tousched::Instance, inner: tousched::Schedule) -> Self {
        let obj = inner.objectives(instance);
        Self {
            inner,
            makespan: obj.makespan,
            tec: obj.tec,
        }
    }
}

#[pymethods]
impl PySchedule {
    #[new]
    fn new(instance: &PyInstance, placements: Vec<(usize, usize)>) -> PyResult<Self> {
        let placements = placements
            .into_iter()
            .map(|(machine, start)| tousched::Placement { machine, start })
            .collect();
        let inner = tousched::Schedule::new(&instance.inner, placements).map_err(value_error)?;
        Ok(Self::wrap(&instance.inner, inner))
    }

    #[getter]
    fn placements(&self) -> Vec<(usize, usize)> {
        self.inner
            .placements()
            .iter()
            .map(|p| (p.machine, p.start))
            .collect()
    }

    #[getter]
    fn makespan(&self) -> usize {
        self.makespan
    }

    #[getter]
    fn tec(&self) -> f64 {
        self.tec
    }

    fn __repr__(&self) -> String {
        format!("Schedule(makespan={}, tec={})", self.makespan, self.tec)
    }
}

type PyFront = Vec<(usize, f64, Option<PySchedule>)>;

fn front_to_py(instance: &tousched::Instance, front: tousched::Front) -> PyFront {
    front
        .into_points()
        .into_iter()
        .map(|p| {
            let schedule = p.schedule.map(|s| PySchedule::wrap(instance, s));
            (p.objectives.makespan, p.objectives.tec, schedule)
        })
        .collect()
}

fn k_max_of(instance: &tousched::Instance, k_max: Option<usize>) -> usize {
    k_max.unwrap_or(instance.n_slots())
}

/// One SGH schedule within `horizon` slots, or `None`.
#[pyfunction]
fn sgh(instance: &PyInstance, horizon: usize, seed: u64) -> Option<PySchedule> {
    heuristics::sgh(&instance.inner, horizon, seed).map(|s| PySchedule::wrap(&instance.inner, s))
}

#[pyfunction]
#[pyo3(signature = (instance, seed=0, k_max=None))]
fn sgs(instance: &PyInstance, seed: u64, k_max: Option<usize>) -> PyFront {
    let k = k_max_of(&instance.inner, k_max);
    front_to_py(
        &instance.inner,
        heuristics::split_greedy_scheduler(&instance.inner, k, seed, false),
    )
}

#[pyfunction]
#[pyo3(signature = (instance, seed=0, k_max=None))]
fn sgs_es(instance: &PyInstance, seed: u64, k_max: Option<usize>) -> PyFront {
    let k = k_max_of(&instance.inner, k_max);
    front_to_py(
        &instance.inner,
        heuristics::split_greedy_scheduler(&instance.inner, k, seed, true),
    )
}

#[pyfunction]
#[pyo3(signature = (instance, seed=0, k_max=None))]
fn ch_j(instance: &PyInstance, seed: u64, k_max: Option<usize>) -> PyFront {
    let k = k_max_of(&instance.inner, k_max);
    front_to_py(
        &instance.inner,
        heuristics::ch_j_from(&instance.inner, k, seed),
    )
}

#[pyfunction]
fn exchange_search(instance: &PyInstance, schedule: &PySchedule, horizon: usize) -> PySchedule {
    let improved = heuristics::exchange_search(&instance.inner, &schedule.inner, horizon);
    PySchedule::wrap(&instance.inner, improved)
}

/// Exact front with the built-in solver. Returns `(front, truncated)`.
#[pyfunction]
#[pyo3(signature = (instance, warm_start=false, seed=0, time_limit=None, k_max=None))]
fn exact_pareto(
    py: Python<'_>,
    instance: &PyInstance,
    warm_start: bool,
    seed: u64,
    time_limit: Option<f64>,
    k_max: Option<usize>,
) -> PyResult<(PyFront, bool)> {
    let time_limit = match time_limit {
        Some(s) if !(s > 0.0 && s.is_finite()) => {
            return Err(PyValueError::new_err("time_limit must be positive"))
        }
        other => other.map(Duration::from_secs_f64),
    };
    let options = ExactOptions {
        warm_start,
        seed,
        time_limit,
        k_max,
    };
    let outcome = py
        .detach(|| exact::exact_pareto(&instance.inner, &BranchAndBound, &options))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((
        front_to_py(&instance.inner, outcome.front),
        outcome.truncated,
    ))
}

/// Front by exhaustive enumeration; only for tiny instances.
#[pyfunction]
fn oracle_pareto(instance: &PyInstance) -> PyResult<PyFront> {
    let front = exact::oracle_pareto(&instance.inner).map_err(value_error)?;
    Ok(front_to_py(&instance.inner, front))
}

#[pyfunction]
fn hypervolume(front: Vec<[f64; 2]>, reference_point: [f64; 2]) -> f64 {
    metrics::hypervolume(&front, reference_point)
}

#[pyfunction]
#[pyo3(signature = (front, reference, normalize=false))]
fn d_r(front: Vec<[f64; 2]>, reference: Vec<[f64; 2]>, normalize: bool) -> PyResult<f64> {
    let mode = if normalize {
        Normalization::ReferenceExtremes
    } else {
        Normalization::None
    };
    metrics::d_r(&front, &reference, mode).map_err(value_error)
}

#[pyfunction]
fn purity(front: Vec<[f64; 2]>, reference: Vec<[f64; 2]>) -> PyResult<f64> {
    metrics::purity(&front, &reference).map_err(value_error)
}

#[pyfunction]
fn spacing(front: Vec<[f64; 2]>) -> Option<f64> {
    metrics::spacing(&front)
}

#[pyfunction]
#[pyo3(signature = (front, reference=None))]
fn spread(front: Vec<[f64; 2]>, reference: Option<Vec<[f64; 2]>>) -> Option<f64> {
    metrics::spread(&front, reference.as_deref())
}

#[pymodule]
fn tousched_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySchedule>()?;
    m.add_function(wrap_pyfunction!(sgh, m)?)?;
    m.add_function(wrap_pyfunction!(sgs, m)?)?;
    m.add_function(wrap_pyfunction!(sgs_es, m)?)?;
    m.add_function(wrap_pyfunction!(ch_j, m)?)?;
    m.add_function(wrap_pyfunction!(exchange_search, m)?)?;
    m.add_function(wrap_pyfunction!(exact_pareto, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_pareto, m)?)?;
    m.add_function(wrap_pyfunction!(hypervolume, m)?)?;
    m.add_function(wrap_pyfunction!(d_r, m)?)?;
    m.add_function(wrap_pyfunction!(purity, m)?)?;
    m.add_function(wrap_pyfunction!(spacing, m)?)?;
    m.add_function(wrap_pyfunction!(spread, m)?)?;
    Ok(())
}

//! Python bindings: `import risrate_py`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use risrate::architectures::Architecture;
use risrate::channel::{db_to_linear, dbm_to_watts, Instance as CoreInstance, SystemConfig};
use risrate::experiments::{self, ExperimentSpec};
use risrate::fbl::{self, FblParams};
use risrate::optimizer::{self, OptimizerConfig, Setup};
use risrate::region;

fn err(e: risrate::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn arch(name: &str) -> PyResult<Architecture> {
    name.parse().map_err(err)
}

fn params(n: u32, epsilon: f64) -> PyResult<FblParams> {
    FblParams::new(n, epsilon).map_err(err)
}

#[pyfunction]
fn q_inverse(epsilon: f64) -> PyResult<f64> {
    fbl::q_inverse(epsilon).map_err(err)
}

/// Normal-approximation rate in nats per channel use.
#[pyfunction]
#[pyo3(signature = (sinr, n = 256, epsilon = 1e-5))]
fn fbl_rate(sinr: f64, n: u32, epsilon: f64) -> PyResult<f64> {
    Ok(fbl::fbl_rate(sinr, &params(n, epsilon)?))
}

/// SINR above which the rate is increasing.
#[pyfunction]
#[pyo3(signature = (n = 256, epsilon = 1e-5))]
fn sinr_threshold(n: u32, epsilon: f64) -> PyResult<f64> {
    Ok(fbl::sinr_threshold(&params(n, epsilon)?))
}

#[pyfunction]
#[pyo3(signature = (rate, n = 256, epsilon = 1e-5))]
fn rate_inverse(rate: f64, n: u32, epsilon: f64) -> PyResult<f64> {
    fbl::rate_inverse(rate, &params(n, epsilon)?).map_err(err)
}

/// System parameters; `normalized=True` uses unit noise with rescaled user gains.
#[pyclass(name = "SystemConfig", from_py_object)]
#[derive(Clone)]
struct PySystem {
    inner: SystemConfig,
}

#[pymethods]
impl PySystem {
    #[new]
    #[pyo3(signature = (
        tx_antennas = 6,
        ris_elements = 20,
        users = 4,
        power_db = 10.0,
        noise_dbm = -90.0,
        block_length = 256,
        error_prob = 1e-5,
        rician_factor = 10.0,
        normalized = false,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        tx_antennas: usize,
        ris_elements: usize,
        users: usize,
        power_db: f64,
        noise_dbm: f64,
        block_length: u32,
        error_prob: f64,
        rician_factor: f64,
        normalized: bool,
    ) -> PyResult<Self> {
        let mut inner = SystemConfig {
            num_tx_antennas: tx_antennas,
            num_ris_elements: ris_elements,
            num_users: users,
            power_budget: db_to_linear(power_db),
            noise_power: dbm_to_watts(noise_dbm),
            block_length,
            error_prob,
            rician_factor,
            ..SystemConfig::default()
        };
        if normalized {
            inner = inner.normalized();
        }
        inner.validate().map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn gamma_bar(&self) -> PyResult<f64> {
        Ok(self.inner.fbl_params().map_err(err)?.gamma_bar)
    }

    #[getter]
    fn power_budget(&self) -> f64 {
        self.inner.power_budget
    }

    #[getter]
    fn noise_power(&self) -> f64 {
        self.inner.noise_power
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "SystemConfig(N={}, M={}, K={}, P={:.3e} W, noise={:.3e} W, n={}, eps={:e})",
            s.num_tx_antennas, s.num_ris_elements, s.num_users, s.power_budget, s.noise_power, s.block_length, s.error_prob
        )
    }
}

/// One channel realization.
#[pyclass(name = "Instance", from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: CoreInstance,
}

#[pymethods]
impl PyInstance {
    #[staticmethod]
    fn draw(system: &PySystem, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: CoreInstance::draw(&system.inner, seed).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: CoreInstance::from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(err)
    }

    #[getter]
    fn num_users(&self) -> usize {
        self.inner.channels.num_users()
    }

    #[getter]
    fn num_ris_elements(&self) -> usize {
        self.inner.channels.num_ris()
    }

    #[getter]
    fn num_tx_antennas(&self) -> usize {
        self.inner.channels.num_tx()
    }
}

/// Outcome of one max-min solve.
#[pyclass(name = "SolveResult", get_all)]
struct PySolveResult {
    architecture: String,
    status: String,
    outer_iterations: usize,
    sinrs: Vec<f64>,
    min_sinr: f64,
    rates: Vec<f64>,
    max_min_rate: f64,
    total_power: f64,
    certification_issues: Vec<String>,
    /// Surface matrix as rows of `(re, im)` pairs.
    phi: Vec<Vec<(f64, f64)>>,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        format!(
            "SolveResult({}, status={}, min_sinr={:.4e}, max_min_rate={:.4})",
            self.architecture, self.status, self.min_sinr, self.max_min_rate
        )
    }
}

/// Max-min SINR by alternating optimization.
#[pyfunction]
#[pyo3(signature = (instance, system, architecture = "gp-bd", seed = 0, weights = None))]
fn solve(
    py: Python<'_>,
    instance: &PyInstance,
    system: &PySystem,
    architecture: &str,
    seed: u64,
    weights: Option<Vec<f64>>,
) -> PyResult<PySolveResult> {
    let arch = arch(architecture)?;
    let fbl = system.inner.fbl_params().map_err(err)?;
    let cfg = OptimizerConfig {
        seed,
        weights,
        ..OptimizerConfig::default()
    };
    let (inst, sys) = (&instance.inner, &system.inner);
    let (out, issues) = py
        .detach(|| {
            let setup = Setup::new(&inst.channels, sys)?;
            let out = optimizer::ao_solve(&setup, arch, &cfg)?;
            let issues = optimizer::certify(&out, &setup);
            Ok::<_, risrate::Error>((out, issues))
        })
        .map_err(err)?;
    let rates: Vec<f64> = out.sinrs.iter().map(|&g| fbl::fbl_rate(g, &fbl).max(0.0)).collect();
    let phi = (0..out.ris.phi.nrows())
        .map(|i| (0..out.ris.phi.ncols()).map(|j| (out.ris.phi[(i, j)].re, out.ris.phi[(i, j)].im)).collect())
        .collect();
    Ok(PySolveResult {
        architecture: arch.as_str().into(),
        status: format!("{:?}", out.status),
        outer_iterations: out.outer_iterations,
        max_min_rate: fbl::fbl_rate(out.min_sinr, &fbl).max(0.0),
        min_sinr: out.min_sinr,
        total_power: out.beams.total_power(),
        sinrs: out.sinrs,
        rates,
        certification_issues: issues,
        phi,
    })
}

/// Pareto boundary of the rate region; `mode` is `sinr` or `rate`.
/// Returns `(weights, rates)` pairs for points above the SINR threshold.
#[pyfunction]
#[pyo3(signature = (instance, system, architecture = "gp-d", grid = 21, mode = "sinr", seed = 0))]
fn rate_region(
    py: Python<'_>,
    instance: &PyInstance,
    system: &PySystem,
    architecture: &str,
    grid: usize,
    mode: &str,
    seed: u64,
) -> PyResult<Vec<(Vec<f64>, Vec<f64>)>> {
    let arch = arch(architecture)?;
    let fbl = system.inner.fbl_params().map_err(err)?;
    let cfg = OptimizerConfig { seed, ..OptimizerConfig::default() };
    let (inst, sys) = (&instance.inner, &system.inner);
    let points = py
        .detach(|| {
            let setup = Setup::new(&inst.channels, sys)?;
            match mode {
                "sinr" => region::rate_region_boundary(&setup, arch, grid, &cfg, &fbl),
                "rate" => region::rate_profile_boundary(&setup, arch, grid, &cfg, &fbl),
                other => Err(risrate::Error::Config {
                    key: "mode".into(),
                    reason: format!("expected sinr or rate, got {other}"),
                }),
            }
        })
        .map_err(err)?;
    Ok(points
        .into_iter()
        .filter(|p| !p.below_threshold)
        .map(|p| (p.weights, p.rates))
        .collect())
}

/// Runs a preset sweep and returns its CSV rows as dictionaries.
#[pyfunction]
#[pyo3(signature = (preset, trials = 20, grid = None, architectures = None, seed = 1))]
fn run_experiment<'py>(
    py: Python<'py>,
    preset: &str,
    trials: usize,
    grid: Option<Vec<f64>>,
    architectures: Option<Vec<String>>,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut spec = match preset {
        "maxmin_vs_power" => ExperimentSpec::maxmin_vs_power(),
        "gain_vs_epsilon" => ExperimentSpec::gain_vs_epsilon(),
        "gain_vs_blocklength" => ExperimentSpec::gain_vs_blocklength(),
        "vs_elements" => ExperimentSpec::vs_elements(),
        other => return Err(PyValueError::new_err(format!("unknown preset {other}"))),
    };
    spec.trials = trials;
    spec.base_seed = seed;
    if let Some(g) = grid {
        spec.grid = g;
    }
    if let Some(a) = architectures {
        spec.architectures = a.iter().map(|s| arch(s)).collect::<PyResult<_>>()?;
    }
    let result = py.detach(|| experiments::run_experiment(&spec)).map_err(err)?;
    result
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("experiment", &r.experiment)?;
            d.set_item("architecture", r.architecture.as_str())?;
            d.set_item("sweep_var", &r.sweep_var)?;
            d.set_item("sweep_value", r.sweep_value)?;
            d.set_item("trials", r.trials)?;
            d.set_item("failures", r.failures)?;
            d.set_item("mean_maxmin_rate_nats", r.mean_maxmin_rate_nats)?;
            d.set_item("stderr", r.stderr)?;
            d.set_item("mean_gain_pct", r.mean_gain_pct)?;
            d.set_item("config_hash", &r.config_hash)?;
            d.set_item("seed", r.seed)?;
            Ok(d)
        })
        .collect()
}

/// The CLI's self-test battery as `(name, passed, detail)` triples.
#[pyfunction]
fn validate(py: Python<'_>) -> Vec<(String, bool, String)> {
    py.detach(risrate::cli::self_tests)
        .into_iter()
        .map(|c| (c.name.to_string(), c.passed, c.detail))
        .collect()
}

#[pymodule]
fn risrate_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystem>()?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolveResult>()?;
    m.add_function(wrap_pyfunction!(q_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(fbl_rate, m)?)?;
    m.add_function(wrap_pyfunction!(sinr_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(rate_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(rate_region, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add("ARCHITECTURES", Architecture::ALL.iter().map(|a| a.as_str()).collect::<Vec<_>>())?;
    Ok(())
}

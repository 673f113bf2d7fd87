//! Python module `ppvac`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ppvac::config::RunConfig;
use ppvac::ensemble::{phase_statistics, superradiance_ratio, Cylinder};
use ppvac::exciton::{diagonalize_dimer, DimerSpec};
use ppvac::experiment::{proposal_report, reference_dimer, ExperimentParams, DEBYE};
use ppvac::field::{PulseSpec, VacuumParams};
use ppvac::oracle::{compare_report, OracleContext, QuadratureConfig};
use ppvac::signals::{s_total_ensemble, s_total_single, SignalComponents};

fn err(e: ppvac::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Exciton dimer. Frequencies in rad/fs, dipoles in debye.
#[pyclass(name = "Dimer", frozen)]
struct PyDimer {
    spec: DimerSpec,
}

#[pymethods]
impl PyDimer {
    #[new]
    fn new(omega_a: f64, omega_b: f64, coupling_j: f64, mu_ag_debye: f64, mu_bg_debye: f64) -> PyResult<Self> {
        let spec = DimerSpec {
            omega_a,
            omega_b,
            coupling_j,
            mu_ag: mu_ag_debye * DEBYE,
            mu_bg: mu_bg_debye * DEBYE,
        };
        spec.validate().map_err(err)?;
        Ok(PyDimer { spec })
    }

    /// `(ω_α, ω_β)` above the ground state.
    #[getter]
    fn exciton_frequencies(&self) -> (f64, f64) {
        let b = diagonalize_dimer(&self.spec);
        (b.omega_alpha - b.omega_g, b.omega_beta - b.omega_g)
    }

    #[getter]
    fn splitting(&self) -> f64 {
        diagonalize_dimer(&self.spec).splitting()
    }

    fn __repr__(&self) -> String {
        let s = &self.spec;
        format!(
            "Dimer(omega_a={}, omega_b={}, coupling_j={}, mu_ag_debye={}, mu_bg_debye={})",
            s.omega_a,
            s.omega_b,
            s.coupling_j,
            s.mu_ag / DEBYE,
            s.mu_bg / DEBYE
        )
    }
}

/// Gaussian pulse. `omega_0` in rad/fs, `sigma` in fs, spot diameter in m.
#[pyclass(name = "Pulse", frozen)]
struct PyPulse {
    spec: PulseSpec,
}

#[pymethods]
impl PyPulse {
    #[new]
    #[pyo3(signature = (omega_0, sigma, photon_number, spot_diameter, arrival_time = 0.0, direction = None))]
    fn new(
        omega_0: f64,
        sigma: f64,
        photon_number: f64,
        spot_diameter: f64,
        arrival_time: f64,
        direction: Option<[f64; 3]>,
    ) -> PyResult<Self> {
        let area = std::f64::consts::PI * spot_diameter * spot_diameter / 4.0;
        let mut spec = PulseSpec::new(omega_0, sigma, photon_number, arrival_time, area);
        if let Some(d) = direction {
            spec.direction = d;
        }
        spec.validate().map_err(err)?;
        Ok(PyPulse { spec })
    }

    #[getter]
    fn bandwidth(&self) -> f64 {
        self.spec.bandwidth()
    }

    #[getter]
    fn photon_number(&self) -> f64 {
        self.spec.photon_number
    }

    fn with_photon_number(&self, n: f64) -> PyResult<Self> {
        let spec = self.spec.with_photon_number(n);
        spec.validate().map_err(err)?;
        Ok(PyPulse { spec })
    }
}

fn components<'py>(py: Python<'py>, c: &SignalComponents) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("T", c.t)?;
    d.set_item("s_esa", c.s_esa)?;
    d.set_item("s_se_classical", c.s_se_classical)?;
    d.set_item("s_se_vacuum", c.s_se_vacuum)?;
    d.set_item("s_gsb", c.s_gsb)?;
    d.set_item("s_total", c.s_total)?;
    Ok(d)
}

fn vacuum(gamma: f64, probe: &PulseSpec) -> PyResult<VacuumParams> {
    VacuumParams::for_probe(gamma, probe).map_err(err)
}

#[pyfunction]
fn nm_to_rad_per_fs(wavelength_nm: f64) -> f64 {
    ppvac::constants::nm_to_rad_per_fs(wavelength_nm)
}

/// Single-dimer signal components at waiting time `t` (fs).
#[pyfunction]
fn single_signal<'py>(
    py: Python<'py>,
    dimer: PyRef<'_, PyDimer>,
    pump: PyRef<'_, PyPulse>,
    probe: PyRef<'_, PyPulse>,
    gamma: f64,
    t: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let basis = diagonalize_dimer(&dimer.spec);
    let vac = vacuum(gamma, &probe.spec)?;
    let c = s_total_single(&basis, &pump.spec, &probe.spec, &vac, t).map_err(err)?;
    components(py, &c)
}

/// Ensemble signal with phase-sum weight `x_squared`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn ensemble_signal<'py>(
    py: Python<'py>,
    dimer: PyRef<'_, PyDimer>,
    pump: PyRef<'_, PyPulse>,
    probe: PyRef<'_, PyPulse>,
    gamma: f64,
    t: f64,
    x_squared: f64,
    n_mol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let basis = diagonalize_dimer(&dimer.spec);
    let vac = vacuum(gamma, &probe.spec)?;
    let c = s_total_ensemble(&basis, &pump.spec, &probe.spec, &vac, t, x_squared, n_mol).map_err(err)?;
    components(py, &c)
}

#[pyfunction]
fn ratio(
    dimer: PyRef<'_, PyDimer>,
    pump: PyRef<'_, PyPulse>,
    probe: PyRef<'_, PyPulse>,
    gamma: f64,
    n_mol: f64,
    x_squared: f64,
) -> PyResult<f64> {
    let basis = diagonalize_dimer(&dimer.spec);
    let vac = vacuum(gamma, &probe.spec)?;
    superradiance_ratio(&basis, &pump.spec, &probe.spec, &vac, n_mol, x_squared).map_err(err)
}

/// Closed forms against the quadrature oracle at each `t`. Returns the
/// comparison records as JSON.
#[pyfunction]
#[pyo3(signature = (dimer, pump, probe, gamma, ts, time_points = 256, mode_count = 512))]
#[allow(clippy::too_many_arguments)]
fn validate(
    py: Python<'_>,
    dimer: PyRef<'_, PyDimer>,
    pump: PyRef<'_, PyPulse>,
    probe: PyRef<'_, PyPulse>,
    gamma: f64,
    ts: Vec<f64>,
    time_points: usize,
    mode_count: usize,
) -> PyResult<String> {
    let (d, p, q) = (dimer.spec, pump.spec, probe.spec);
    let cfg = QuadratureConfig {
        time_points,
        mode_count,
        regularization_gamma: gamma,
        ..Default::default()
    };
    let records = py
        .detach(|| {
            let basis = diagonalize_dimer(&d);
            let vac = VacuumParams::for_probe(gamma, &q)?;
            let ctx = OracleContext::new(&basis, &p, &q, &cfg)?;
            ts.iter()
                .map(|&t| {
                    let a = s_total_single(&basis, &p, &q, &vac, t)?;
                    Ok(compare_report(&a, &ctx.evaluate(t)?, &cfg))
                })
                .collect::<ppvac::Result<Vec<_>>>()
        })
        .map_err(err)?;
    to_json(&records)
}

/// Mean and spread of `|X|²` over `seeds` draws in a cylinder.
#[pyfunction]
#[pyo3(signature = (n_mol, diameter, length, pump, probe, seed = 0, seeds = 200))]
fn phase_sum_statistics(
    n_mol: usize,
    diameter: f64,
    length: f64,
    pump: PyRef<'_, PyPulse>,
    probe: PyRef<'_, PyPulse>,
    seed: u64,
    seeds: usize,
) -> PyResult<String> {
    let geom = Cylinder { diameter, length };
    let s = phase_statistics(n_mol, &geom, pump.spec.wavevector(), probe.spec.wavevector(), seed, seeds).map_err(err)?;
    to_json(&s)
}

/// Proposal parameter table as JSON. SI units except `sigma` and `gamma`
/// (fs).
#[pyfunction]
#[pyo3(signature = (pulse_energy = 5e-9, wavelength = 775e-9, spot_diameter = 70e-6, sigma = 20.0, concentration = 1.4e-3, gamma = 400.0))]
fn proposal(
    pulse_energy: f64,
    wavelength: f64,
    spot_diameter: f64,
    sigma: f64,
    concentration: f64,
    gamma: f64,
) -> PyResult<String> {
    let params = ExperimentParams {
        pulse_energy,
        wavelength,
        spot_diameter,
        sigma,
        concentration,
        gamma,
    };
    to_json(&proposal_report(&params, &reference_dimer()).map_err(err)?)
}

/// Parse a TOML run configuration and return its normalised text and hash.
#[pyfunction]
fn normalize_config(text: &str) -> PyResult<(String, String)> {
    let cfg = RunConfig::parse(text).map_err(err)?;
    Ok((cfg.to_toml(), cfg.hash()))
}

#[pymodule]
#[pyo3(name = "ppvac")]
fn ppvac_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDimer>()?;
    m.add_class::<PyPulse>()?;
    m.add_function(wrap_pyfunction!(nm_to_rad_per_fs, m)?)?;
    m.add_function(wrap_pyfunction!(single_signal, m)?)?;
    m.add_function(wrap_pyfunction!(ensemble_signal, m)?)?;
    m.add_function(wrap_pyfunction!(ratio, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(phase_sum_statistics, m)?)?;
    m.add_function(wrap_pyfunction!(proposal, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_config, m)?)?;
    Ok(())
}

//! Subcommand bodies: resolve a [`RunConfig`], evaluate, return a report.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{PhaseMode, RunConfig, SweepAxis, SweepConfig, Target};
use crate::ensemble::{
    phase_statistics, phase_sum, superradiance_ratio, visibility_scan, Cylinder, EnsembleSpec, PhaseStatistics,
    VisibilityPoint,
};
use crate::error::{invalid, Error, Result};
use crate::experiment::{proposal_report, reference_dimer, ProposalReport};
use crate::field::{PulseSpec, VacuumParams};
use crate::oracle::{compare_report, ComparisonRecord, OracleContext};
use crate::signals::{s_total_ensemble, s_total_single, SignalComponents};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalRow {
    pub sweep_value: f64,
    #[serde(flatten)]
    pub signal: SignalComponents,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalTable {
    pub config_sha256: String,
    pub axis: SweepAxis,
    /// Single dimer, or the ensemble phase mode.
    pub model: String,
    pub rows: Vec<SignalRow>,
}

impl SignalTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# ppvac signal").unwrap();
        writeln!(s, "# config_sha256 = {}", self.config_sha256).unwrap();
        writeln!(s, "# axis = {}", self.axis).unwrap();
        writeln!(s, "# model = {}", self.model).unwrap();
        writeln!(s, "# points = {}", self.rows.len()).unwrap();
        writeln!(s, "sweep_value,s_esa,s_se_classical,s_se_vacuum,s_gsb,s_total").unwrap();
        for r in &self.rows {
            let c = &r.signal;
            writeln!(
                s,
                "{:e},{:e},{:e},{:e},{:e},{:e}",
                r.sweep_value, c.s_esa, c.s_se_classical, c.s_se_vacuum, c.s_gsb, c.s_total
            )
            .unwrap();
        }
        s
    }
}

fn x_squared(cfg: &RunConfig, phase: PhaseMode, n: f64, pump: &PulseSpec, probe: &PulseSpec, seed: u64) -> Result<f64> {
    match phase {
        PhaseMode::Collinear => Ok(n * n),
        PhaseMode::Incoherent => Ok(n),
        PhaseMode::Sampled => {
            if n.fract() != 0.0 {
                return Err(invalid("n_mol", format!("sampled ensembles need a whole molecule count, got {n}")));
            }
            let spec = EnsembleSpec::sample(n as usize, cfg.cylinder()?, pump, probe, seed)?;
            Ok(phase_sum(&spec).x_squared)
        }
    }
}

fn signal_point(cfg: &RunConfig, sweep: &SweepConfig, value: f64) -> Result<SignalComponents> {
    let phys = cfg.physics()?;
    let (mut pump, mut probe) = (phys.pump, phys.probe);
    let mut t = sweep.t.unwrap_or(value);
    let mut n_mol = None;
    match sweep.axis {
        SweepAxis::T => t = value,
        SweepAxis::NMol => n_mol = Some(value),
        SweepAxis::PhotonNumber => match sweep.target {
            Target::Pump => pump = pump.with_photon_number(value),
            Target::Probe => probe = probe.with_photon_number(value),
        },
        SweepAxis::Angle => probe.direction = [value.sin(), 0.0, value.cos()],
    }
    pump.validate()?;
    probe.validate()?;
    let vac = VacuumParams::for_probe(phys.vacuum.gamma, &probe)?;
    match &cfg.ensemble {
        Some(e) => {
            if sweep.axis == SweepAxis::Angle && e.phase != PhaseMode::Sampled {
                return Err(Error::Config("an angle sweep needs ensemble.phase = \"sampled\"".into()));
            }
            let n = n_mol.unwrap_or(e.n_mol);
            let x2 = x_squared(cfg, e.phase, n, &pump, &probe, e.seed)?;
            s_total_ensemble(&phys.basis, &pump, &probe, &vac, t, x2, n)
        }
        None if sweep.axis == SweepAxis::NMol => Err(Error::Config("an n_mol sweep needs an [ensemble] section".into())),
        None => s_total_single(&phys.basis, &pump, &probe, &vac, t),
    }
}

/// One row per sweep point, computed in parallel and kept in sweep order.
pub fn run_signal(cfg: &RunConfig) -> Result<SignalTable> {
    cfg.physics()?;
    let sweep = cfg.sweep()?;
    let rows = sweep
        .values()
        .par_iter()
        .map(|&v| {
            Ok(SignalRow {
                sweep_value: v,
                signal: signal_point(cfg, &sweep, v)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let model = match &cfg.ensemble {
        Some(e) => format!("ensemble ({:?})", e.phase).to_lowercase(),
        None => "single dimer".into(),
    };
    Ok(SignalTable {
        config_sha256: cfg.hash(),
        axis: sweep.axis,
        model,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub config_sha256: String,
    pub pass: bool,
    pub failures: Vec<String>,
    pub records: Vec<ComparisonRecord>,
}

/// Closed forms against the quadrature oracle at every `T` of the sweep.
pub fn run_validate(cfg: &RunConfig) -> Result<ValidationReport> {
    let oracle = cfg.oracle()?;
    let phys = cfg.physics()?;
    let sweep = cfg.sweep()?;
    if sweep.axis != SweepAxis::T {
        return Err(Error::Config(format!("validate needs a sweep over T, got {}", sweep.axis)));
    }
    if oracle.regularization_gamma != phys.vacuum.gamma {
        return Err(Error::Config(format!(
            "oracle.regularization_gamma = {} differs from vacuum.gamma = {}",
            oracle.regularization_gamma, phys.vacuum.gamma
        )));
    }
    let ctx = OracleContext::new(&phys.basis, &phys.pump, &phys.probe, &oracle)?;
    let records = sweep
        .values()
        .par_iter()
        .map(|&t| {
            let analytic = s_total_single(&phys.basis, &phys.pump, &phys.probe, &phys.vacuum, t)?;
            Ok(compare_report(&analytic, &ctx.evaluate(t)?, &oracle))
        })
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<String> = records
        .iter()
        .flat_map(|r| r.failures().into_iter().map(move |f| format!("T = {}: {f}", r.t)))
        .collect();
    Ok(ValidationReport {
        config_sha256: cfg.hash(),
        pass: failures.is_empty(),
        failures,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub config_sha256: String,
    pub phase: PhaseMode,
    pub n_mol: f64,
    pub geometry: Cylinder,
    /// `|X|²` over position draws of `sample_n_mol` molecules. In the
    /// collinear mode the probe wavevector is set to the pump's.
    pub statistics: PhaseStatistics,
    pub mean_x_squared_over_n: f64,
    pub mean_x_squared_over_n_squared: f64,
    /// `|X|²` used for the ratio at `n_mol`.
    pub x_squared: f64,
    pub superradiance_ratio: f64,
    pub visibility: Vec<VisibilityPoint>,
}

pub fn run_ensemble(cfg: &RunConfig) -> Result<EnsembleReport> {
    let e = cfg.ensemble()?;
    let phys = cfg.physics()?;
    let geometry = cfg.cylinder()?;
    let k_pump = phys.pump.wavevector();
    let k_probe = match e.phase {
        PhaseMode::Collinear => k_pump,
        _ => phys.probe.wavevector(),
    };
    let statistics = phase_statistics(e.sample_n_mol, &geometry, k_pump, k_probe, e.seed, e.seeds)?;
    let m = e.sample_n_mol as f64;
    let per_molecule = statistics.mean_x_squared / m;
    let x2 = |n: f64| match e.phase {
        PhaseMode::Collinear => n * n,
        PhaseMode::Incoherent => n,
        PhaseMode::Sampled => n * per_molecule,
    };
    let (basis, pump, probe, vac) = (&phys.basis, &phys.pump, &phys.probe, &phys.vacuum);
    let visibility = if e.scan_n_mol.is_empty() {
        Vec::new()
    } else {
        let sweep = cfg.sweep()?;
        if sweep.axis != SweepAxis::T {
            return Err(Error::Config("the visibility scan needs a sweep over T".into()));
        }
        visibility_scan(basis, pump, probe, vac, &sweep.values(), &e.scan_n_mol, x2)?
    };
    Ok(EnsembleReport {
        config_sha256: cfg.hash(),
        phase: e.phase,
        n_mol: e.n_mol,
        geometry,
        statistics,
        mean_x_squared_over_n: per_molecule,
        mean_x_squared_over_n_squared: statistics.mean_x_squared / (m * m),
        x_squared: x2(e.n_mol),
        superradiance_ratio: superradiance_ratio(basis, pump, probe, vac, e.n_mol, x2(e.n_mol))?,
        visibility,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProposalOutput {
    pub config_sha256: String,
    #[serde(flatten)]
    pub report: ProposalReport,
}

/// Experiment section and dimer from the config, each falling back to the
/// built-in defaults.
pub fn run_proposal(cfg: &RunConfig) -> Result<ProposalOutput> {
    let params = cfg.experiment.unwrap_or_default();
    let dimer = cfg.dimer.map(|d| d.spec()).unwrap_or_else(reference_dimer);
    Ok(ProposalOutput {
        config_sha256: cfg.hash(),
        report: proposal_report(&params, &dimer)?,
    })
}

//! Molecular positions, the phase-matching sum and superradiant scaling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exciton::{Exciton, ExcitonBasis};
use crate::field::{PulseSpec, VacuumParams};
use crate::signals::{compute_couplings, ensemble_from_couplings};

/// Positions are drawn in chunks of this size, each from its own RNG
/// stream, so the output does not depend on the thread count.
const CHUNK: usize = 4096;

/// Largest ensemble summed position by position.
pub const MAX_DIRECT_MOLECULES: usize = 1_000_000;

/// Cylinder along z, centred at the origin. Lengths in m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cylinder {
    pub diameter: f64,
    pub length: f64,
}

impl Cylinder {
    pub fn validate(&self) -> Result<()> {
        if !(self.diameter > 0.0 && self.diameter.is_finite()) {
            return Err(invalid("diameter", "must be positive"));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(invalid("length", "must be positive"));
        }
        Ok(())
    }

    pub fn contains(&self, r: &[f64; 3]) -> bool {
        let rad = 0.5 * self.diameter;
        r[0].hypot(r[1]) <= rad * (1.0 + 1e-12) && r[2].abs() <= 0.5 * self.length * (1.0 + 1e-12)
    }

    pub fn volume(&self) -> f64 {
        std::f64::consts::PI * self.diameter * self.diameter / 4.0 * self.length
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n_mol: usize,
    pub positions: Vec<[f64; 3]>,
    /// rad/m
    pub k_pump: [f64; 3],
    pub k_probe: [f64; 3],
    pub geometry: Cylinder,
    pub seed: u64,
}

impl EnsembleSpec {
    /// Sample positions and take the wavevectors from the two pulses.
    pub fn sample(n_mol: usize, geometry: Cylinder, pump: &PulseSpec, probe: &PulseSpec, seed: u64) -> Result<Self> {
        Ok(EnsembleSpec {
            n_mol,
            positions: sample_positions(n_mol, &geometry, seed)?,
            k_pump: pump.wavevector(),
            k_probe: probe.wavevector(),
            geometry,
            seed,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        if self.positions.len() != self.n_mol {
            return Err(invalid(
                "positions",
                format!("{} positions for n_mol = {}", self.positions.len(), self.n_mol),
            ));
        }
        if let Some(r) = self.positions.iter().find(|r| !self.geometry.contains(r)) {
            return Err(invalid("positions", format!("{r:?} lies outside the cylinder")));
        }
        Ok(())
    }
}

fn check_count(n_mol: usize) -> Result<()> {
    if n_mol == 0 {
        return Err(invalid("n_mol", "must be at least 1"));
    }
    if n_mol > MAX_DIRECT_MOLECULES {
        return Err(invalid(
            "n_mol",
            format!("{n_mol} exceeds {MAX_DIRECT_MOLECULES}; use the collinear or incoherent limit instead"),
        ));
    }
    Ok(())
}

/// Uniform i.i.d. positions in the cylinder.
pub fn sample_positions(n_mol: usize, geometry: &Cylinder, seed: u64) -> Result<Vec<[f64; 3]>> {
    check_count(n_mol)?;
    geometry.validate()?;
    let rad = 0.5 * geometry.diameter;
    let len = geometry.length;
    let chunks = n_mol.div_ceil(CHUNK);
    let parts: Vec<Vec<[f64; 3]>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(n_mol - c * CHUNK);
            (0..count)
                .map(|_| {
                    let r = rad * rng.random::<f64>().sqrt();
                    let phi = std::f64::consts::TAU * rng.random::<f64>();
                    let z = len * (rng.random::<f64>() - 0.5);
                    [r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        })
        .collect();
    Ok(parts.concat())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSum {
    pub x: Complex64,
    pub x_squared: f64,
}

/// `X = Σ_j e^{i(k_P − k_P′)·r_j}`, reduced chunk by chunk in a fixed order.
pub fn phase_sum(spec: &EnsembleSpec) -> PhaseSum {
    let dk = [
        spec.k_pump[0] - spec.k_probe[0],
        spec.k_pump[1] - spec.k_probe[1],
        spec.k_pump[2] - spec.k_probe[2],
    ];
    let partial: Vec<Complex64> = spec
        .positions
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk
                .iter()
                .map(|r| Complex64::from_polar(1.0, dk[0] * r[0] + dk[1] * r[1] + dk[2] * r[2]))
                .sum()
        })
        .collect();
    let x: Complex64 = partial.into_iter().sum();
    PhaseSum { x, x_squared: x.norm_sqr() }
}

/// Statistics of `|X|²` over independent position draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseStatistics {
    pub n_mol: usize,
    pub seeds: usize,
    pub mean_x_squared: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    pub min_x_squared: f64,
    pub max_x_squared: f64,
}

/// `|X|²` for seeds `seed, seed + 1, …`.
pub fn phase_statistics(
    n_mol: usize,
    geometry: &Cylinder,
    k_pump: [f64; 3],
    k_probe: [f64; 3],
    seed: u64,
    seeds: usize,
) -> Result<PhaseStatistics> {
    if seeds < 2 {
        return Err(invalid("seeds", "need at least 2 draws"));
    }
    let values = (0..seeds)
        .map(|s| {
            let s = seed.wrapping_add(s as u64);
            let spec = EnsembleSpec {
                n_mol,
                positions: sample_positions(n_mol, geometry, s)?,
                k_pump,
                k_probe,
                geometry: *geometry,
                seed: s,
            };
            Ok(phase_sum(&spec).x_squared)
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(PhaseStatistics {
        n_mol,
        seeds,
        mean_x_squared: mean,
        std_error: (var / n).sqrt(),
        min_x_squared: values.iter().copied().fold(f64::INFINITY, f64::min),
        max_x_squared: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Vacuum stimulated emission over the static classical stimulated
/// emission of the ensemble. The beat cross term is left out of the
/// classical part, so the ratio does not depend on the waiting time.
pub fn superradiance_ratio(
    basis: &ExcitonBasis,
    pump: &PulseSpec,
    probe: &PulseSpec,
    vac: &VacuumParams,
    n_mol: f64,
    x_squared: f64,
) -> Result<f64> {
    let c = compute_couplings(basis, pump, probe, vac);
    if c.delta_window != 0 {
        return Err(Error::UnsupportedRegime(
            "the superradiance ratio needs non-degenerate excitons (window = 0)".into(),
        ));
    }
    if !(n_mol > 0.0 && n_mol.is_finite()) {
        return Err(invalid("n_mol", "must be positive"));
    }
    let mut vacuum = 0.0;
    let mut classical = 0.0;
    for n in Exciton::BOTH {
        vacuum += (c.vac(n).conj() * c.pump.ng(n)).norm_sqr();
        classical += (c.probe.ng(n).conj() * c.pump.ng(n)).norm_sqr();
    }
    if classical == 0.0 {
        return Err(Error::DivisionDomain("classical stimulated emission vanishes".into()));
    }
    Ok(x_squared * vacuum / (n_mol * classical))
}

/// `(max − min)/|max + min|` of a total-signal sweep. The sweep must span
/// at least three beat periods of the exciton splitting.
pub fn beat_visibility(ts: &[f64], totals: &[f64], splitting: f64) -> Result<f64> {
    const REQUIRED: f64 = 3.0;
    if ts.len() != totals.len() || ts.is_empty() {
        return Err(invalid("sweep", "times and totals must be nonempty and of equal length"));
    }
    let t_min = ts.iter().copied().fold(f64::INFINITY, f64::min);
    let t_max = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let periods = (t_max - t_min) * splitting.abs() / std::f64::consts::TAU;
    if !(periods >= REQUIRED) {
        return Err(Error::SweepTooShort {
            periods,
            required: REQUIRED,
        });
    }
    let hi = totals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = totals.iter().copied().fold(f64::INFINITY, f64::min);
    let mid = (hi + lo).abs();
    if mid == 0.0 {
        return Err(Error::DivisionDomain("signal averages to zero over the sweep".into()));
    }
    Ok((hi - lo) / mid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilityPoint {
    pub n_mol: f64,
    pub x_squared: f64,
    pub superradiance_ratio: f64,
    pub visibility: f64,
}

/// Beat visibility of the ensemble signal for each molecule count, with
/// `|X|²` supplied by `x_squared(n)`.
pub fn visibility_scan<F: Fn(f64) -> f64>(
    basis: &ExcitonBasis,
    pump: &PulseSpec,
    probe: &PulseSpec,
    vac: &VacuumParams,
    ts: &[f64],
    n_mols: &[f64],
    x_squared: F,
) -> Result<Vec<VisibilityPoint>> {
    let c = compute_couplings(basis, pump, probe, vac);
    n_mols
        .iter()
        .map(|&n| {
            let x2 = x_squared(n);
            let totals = ts
                .iter()
                .map(|&t| Ok(ensemble_from_couplings(&c, basis, t, x2, n)?.s_total))
                .collect::<Result<Vec<_>>>()?;
            Ok(VisibilityPoint {
                n_mol: n,
                x_squared: x2,
                superradiance_ratio: superradiance_ratio(basis, pump, probe, vac, n, x2)?,
                visibility: beat_visibility(ts, &totals, basis.splitting())?,
            })
        })
        .collect()
}

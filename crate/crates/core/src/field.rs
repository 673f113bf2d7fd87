//! Gaussian pulses as multimode coherent states.
//!
//! Times are in fs and angular frequencies in rad/fs. SI enters only through
//! the field amplitudes: `η` is returned in V·s/m and the per-mode coupling
//! `g` in V/m, so `μη/ħ` is dimensionless.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{EPSILON_0, FS, HBAR, SPEED_OF_LIGHT};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub omega_0: f64,
    pub sigma: f64,
    pub photon_number: f64,
    pub arrival_time: f64,
    pub direction: [f64; 3],
    pub area: f64,
}

impl PulseSpec {
    /// Collinear pulse along +z.
    pub fn new(omega_0: f64, sigma: f64, photon_number: f64, arrival_time: f64, area: f64) -> Self {
        PulseSpec {
            omega_0,
            sigma,
            photon_number,
            arrival_time,
            direction: [0.0, 0.0, 1.0],
            area,
        }
    }

    pub fn bandwidth(&self) -> f64 {
        1.0 / self.sigma
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_0 > 0.0 && self.omega_0.is_finite()) {
            return Err(invalid("omega_0", "must be positive"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(invalid("sigma", "must be positive"));
        }
        if !(self.photon_number >= 0.0 && self.photon_number.is_finite()) {
            return Err(invalid("photon_number", "must be non-negative"));
        }
        if !self.arrival_time.is_finite() {
            return Err(invalid("arrival_time", "must be finite"));
        }
        if !(self.area > 0.0 && self.area.is_finite()) {
            return Err(invalid("area", "must be positive"));
        }
        let norm = self.direction.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(invalid("direction", format!("must be a unit vector, |k̂| = {norm}")));
        }
        Ok(())
    }

    /// Wavevector in rad/m.
    pub fn wavevector(&self) -> [f64; 3] {
        let k = self.omega_0 / FS / SPEED_OF_LIGHT;
        self.direction.map(|d| d * k)
    }

    /// Gaussian spectral filter `exp(−σ²(ω−ω₀)²/2)`.
    pub fn spectral_factor(&self, omega: f64) -> f64 {
        let x = self.sigma * (omega - self.omega_0);
        (-0.5 * x * x).exp()
    }

    pub fn with_photon_number(mut self, n: f64) -> Self {
        self.photon_number = n;
        self
    }

    pub fn with_arrival_time(mut self, t: f64) -> Self {
        self.arrival_time = t;
        self
    }
}

/// Coherent amplitudes on a uniform mode grid centred at `ω₀`.
///
/// `amplitudes` are spectral densities (units √fs); the coherent-state
/// eigenvalue of mode `k` is `amplitudes[k]·√Δω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentAmplitudes {
    pub mode_freqs: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
    pub mode_spacing: f64,
}

impl CoherentAmplitudes {
    pub fn len(&self) -> usize {
        self.mode_freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mode_freqs.is_empty()
    }

    /// Coherent-state eigenvalue of mode `k`.
    pub fn eigenvalue(&self, k: usize) -> Complex64 {
        self.amplitudes[k] * self.mode_spacing.sqrt()
    }

    /// `Σ |α_k|² Δω`.
    pub fn photon_number(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.mode_spacing
    }

    /// Field synthesised from the mode sum, `Σ_k g α_k e^{−iω_k τ}`, with
    /// `τ = t − t_j` in fs. Returns V/m.
    pub fn synthesize(&self, coupling: f64, tau: f64) -> Complex64 {
        let sum: Complex64 = self
            .mode_freqs
            .iter()
            .enumerate()
            .map(|(k, &w)| self.eigenvalue(k) * Complex64::from_polar(1.0, -w * tau))
            .sum();
        sum * coupling
    }
}

/// Sample the Gaussian coherent amplitudes on `modes` midpoints spanning
/// `ω₀ ± grid_span·B`.
pub fn gaussian_amplitudes(pulse: &PulseSpec, grid_span: f64, modes: usize) -> Result<CoherentAmplitudes> {
    pulse.validate()?;
    if modes < 16 {
        return Err(invalid("modes", format!("need at least 16 modes, got {modes}")));
    }
    if !(grid_span >= 3.0) {
        return Err(invalid(
            "grid_span",
            format!("span {grid_span} B truncates the photon-number normalization; need >= 3"),
        ));
    }
    let b = pulse.bandwidth();
    let dw = 2.0 * grid_span * b / modes as f64;
    let peak = (pulse.photon_number / (PI.sqrt() * b)).sqrt();
    let centre = 0.5 * (modes as f64 - 1.0);
    let mut mode_freqs = Vec::with_capacity(modes);
    let mut amplitudes = Vec::with_capacity(modes);
    for k in 0..modes {
        let w = pulse.omega_0 + (k as f64 - centre) * dw;
        let x = (w - pulse.omega_0) / b;
        mode_freqs.push(w);
        amplitudes.push(Complex64::new(peak * (-0.5 * x * x).exp(), 0.0));
    }
    Ok(CoherentAmplitudes {
        mode_freqs,
        amplitudes,
        mode_spacing: dw,
    })
}

/// Pulse amplitude `η = (ħ ω₀ N √π σ / ε₀ c A)^{1/2}` in V·s/m.
pub fn pulse_eta(pulse: &PulseSpec) -> f64 {
    // ω₀σ is dimensionless, so the fs factors cancel.
    let w_sigma = pulse.omega_0 * pulse.sigma;
    (HBAR * pulse.photon_number * PI.sqrt() * w_sigma / (EPSILON_0 * SPEED_OF_LIGHT * pulse.area)).sqrt()
}

/// Vacuum single-photon amplitude `(ħ ω₀ Γ / ε₀ c A)^{1/2}` in V·s/m.
pub fn vacuum_eta(omega_0: f64, gamma: f64, area: f64) -> f64 {
    (HBAR * omega_0 * gamma / (EPSILON_0 * SPEED_OF_LIGHT * area)).sqrt()
}

/// Per-mode field coupling `g = (ħ ω₀ Δω / 4π ε₀ c A)^{1/2}` in V/m, with
/// every mode frequency replaced by the carrier (narrowband limit).
pub fn mode_coupling(omega_0: f64, mode_spacing: f64, area: f64) -> f64 {
    let w = omega_0 / FS;
    let dw = mode_spacing / FS;
    (HBAR * w * dw / (4.0 * PI * EPSILON_0 * SPEED_OF_LIGHT * area)).sqrt()
}

/// Lifetime `Γ` (fs) and the resulting vacuum amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuumParams {
    pub gamma: f64,
    pub eta_vac: f64,
}

impl VacuumParams {
    /// Vacuum parameters for the probe pulse.
    pub fn for_probe(gamma: f64, probe: &PulseSpec) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid("gamma", "must be positive"));
        }
        Ok(VacuumParams {
            gamma,
            eta_vac: vacuum_eta(probe.omega_0, gamma, probe.area),
        })
    }
}

/// Closed-form envelope `η/(√(2π)σ) e^{−(t−t_j)²/2σ²} e^{−iω₀(t−t_j)}`, V/m.
pub fn temporal_envelope(pulse: &PulseSpec, t: f64) -> Complex64 {
    let tau = t - pulse.arrival_time;
    let sigma_s = pulse.sigma * FS;
    let peak = pulse_eta(pulse) / ((2.0 * PI).sqrt() * sigma_s);
    let x = tau / pulse.sigma;
    Complex64::from_polar(peak * (-0.5 * x * x).exp(), -pulse.omega_0 * tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::nm_to_rad_per_fs;

    fn proposal_pulse() -> PulseSpec {
        let area = PI * (70e-6f64).powi(2) / 4.0;
        PulseSpec::new(nm_to_rad_per_fs(775.0), 20.0, 1.95e10, 0.0, area)
    }

    #[test]
    fn empty_pulse_has_zero_amplitudes() {
        let p = proposal_pulse().with_photon_number(0.0);
        let a = gaussian_amplitudes(&p, 5.0, 64).unwrap();
        assert!(a.amplitudes.iter().all(|z| z.norm() == 0.0));
        assert_eq!(pulse_eta(&p), 0.0);
    }

    #[test]
    fn peak_amplitude() {
        let p = proposal_pulse();
        let a = gaussian_amplitudes(&p, 5.0, 513).unwrap();
        let expect = (p.photon_number / (PI.sqrt() * p.bandwidth())).sqrt();
        assert!((a.mode_freqs[256] - p.omega_0).abs() < 1e-15);
        assert!((a.amplitudes[256].re - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn photon_number_normalization() {
        let p = proposal_pulse();
        let a = gaussian_amplitudes(&p, 5.0, 512).unwrap();
        let rel = (a.photon_number() - p.photon_number).abs() / p.photon_number;
        assert!(rel < 1e-6, "relative error {rel}");
    }

    #[test]
    fn grid_guards() {
        let p = proposal_pulse();
        assert!(gaussian_amplitudes(&p, 2.9, 512).is_err());
        assert!(gaussian_amplitudes(&p, 5.0, 15).is_err());
    }

    // Frozen from independent SI arithmetic on the 775 nm, 20 fs, 70 µm spot.
    #[test]
    fn eta_regression() {
        let eta = pulse_eta(&proposal_pulse());
        assert!((eta - 4.164_660_361_444_811e-6).abs() < 1e-12 * 4.2e-6, "{eta:e}");
    }

    #[test]
    fn eta_scaling() {
        let p = proposal_pulse();
        let e = pulse_eta(&p);
        let e2 = pulse_eta(&p.with_photon_number(2.0 * p.photon_number));
        assert!((e2 / e - 2f64.sqrt()).abs() < 1e-14);
        let mut q = p;
        q.sigma *= 2.0;
        assert!((pulse_eta(&q) / e - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn vacuum_eta_values() {
        let p = proposal_pulse();
        let v = vacuum_eta(p.omega_0, 400.0, p.area);
        assert!((v - 1.001_82e-10).abs() < 1e-5 * 1e-10, "{v:e}");
        assert!((vacuum_eta(p.omega_0, 1600.0, p.area) / v - 2.0).abs() < 1e-14);

        let one = PulseSpec { photon_number: 1.0, ..p };
        let g = PI.sqrt() * one.sigma;
        let ratio = vacuum_eta(one.omega_0, g, one.area) / pulse_eta(&one);
        assert!((ratio * ratio - 1.0).abs() < 1e-14);

        let q = p.with_photon_number(1.9e10);
        let r2 = (vacuum_eta(q.omega_0, 400.0, q.area) / pulse_eta(&q)).powi(2);
        assert!((r2 - 5.9388e-10).abs() < 1e-4 * 5.9388e-10, "{r2:e}");
    }

    #[test]
    fn vacuum_params_reject_zero_gamma() {
        assert!(VacuumParams::for_probe(0.0, &proposal_pulse()).is_err());
    }

    #[test]
    fn envelope_shape() {
        let p = proposal_pulse().with_arrival_time(100.0);
        let peak = temporal_envelope(&p, 100.0).norm();
        let expect = pulse_eta(&p) / ((2.0 * PI).sqrt() * p.sigma * FS);
        assert!((peak - expect).abs() < 1e-12 * expect);
        let r = temporal_envelope(&p, 120.0).norm() / peak;
        assert!((r - (-0.5f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn mode_sum_reproduces_envelope() {
        let p = proposal_pulse();
        let a = gaussian_amplitudes(&p, 5.0, 512).unwrap();
        let g = mode_coupling(p.omega_0, a.mode_spacing, p.area);
        let peak = temporal_envelope(&p, 0.0).norm();
        let mut worst = 0.0f64;
        for i in -100..=100 {
            let t = i as f64 * 0.05 * p.sigma;
            let dev = (a.synthesize(g, t) - temporal_envelope(&p, t)).norm() / peak;
            worst = worst.max(dev);
        }
        assert!(worst < 1e-4, "max deviation {worst:e}");
    }

    #[test]
    fn wavevector_magnitude() {
        let p = proposal_pulse();
        let k = p.wavevector();
        let mag = k.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((mag - 2.0 * PI / 775e-9).abs() / mag < 1e-12);
    }

    #[test]
    fn direction_must_be_unit() {
        let mut p = proposal_pulse();
        p.direction = [0.0, 0.0, 2.0];
        assert!(p.validate().is_err());
    }
}

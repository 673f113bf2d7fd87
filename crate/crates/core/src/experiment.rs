//! SI arithmetic for a benchtop version of the experiment: photon counts,
//! coherent volume, concentration and spectral widths.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{nm_to_rad_per_fs, AVOGADRO, PLANCK, SPEED_OF_LIGHT};
use crate::error::{invalid, Result};
use crate::ensemble::superradiance_ratio;
use crate::exciton::{diagonalize_dimer, DimerSpec};
use crate::field::{pulse_eta, PulseSpec, VacuumParams};

/// One Debye in C·m.
pub const DEBYE: f64 = 3.335_640_95e-30;

/// Litres per cubic metre.
const LITRES_PER_M3: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentParams {
    /// J
    pub pulse_energy: f64,
    /// m
    pub wavelength: f64,
    /// m
    pub spot_diameter: f64,
    /// fs
    pub sigma: f64,
    /// mol/L
    pub concentration: f64,
    /// Coherence lifetime used for the vacuum amplitude (fs).
    pub gamma: f64,
}

impl Default for ExperimentParams {
    /// 5 nJ, 20 fs pulses at 775 nm on a 70 µm spot, 1.4 mM, Γ = 400 fs.
    fn default() -> Self {
        ExperimentParams {
            pulse_energy: 5e-9,
            wavelength: 775e-9,
            spot_diameter: 70e-6,
            sigma: 20.0,
            concentration: 1.4e-3,
            gamma: 400.0,
        }
    }
}

impl ExperimentParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("pulse_energy", self.pulse_energy),
            ("wavelength", self.wavelength),
            ("spot_diameter", self.spot_diameter),
            ("sigma", self.sigma),
            ("concentration", self.concentration),
            ("gamma", self.gamma),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Pulse with the photon number implied by the pulse energy.
    pub fn pulse(&self) -> PulseSpec {
        let vol = coherent_volume(self.spot_diameter, self.sigma);
        PulseSpec::new(
            nm_to_rad_per_fs(self.wavelength * 1e9),
            self.sigma,
            photon_number(self.pulse_energy, self.wavelength),
            0.0,
            vol.area,
        )
    }
}

/// `N = Eλ/(hc)`.
pub fn photon_number(pulse_energy: f64, wavelength: f64) -> f64 {
    pulse_energy * wavelength / (PLANCK * SPEED_OF_LIGHT)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentVolume {
    /// m²
    pub area: f64,
    /// m
    pub length: f64,
    /// m³
    pub volume: f64,
}

/// `A = πD²/4`, `L = cσ`, `V = AL`. `sigma` in fs.
pub fn coherent_volume(spot_diameter: f64, sigma: f64) -> CoherentVolume {
    let area = PI * spot_diameter * spot_diameter / 4.0;
    let length = SPEED_OF_LIGHT * sigma * 1e-15;
    CoherentVolume {
        area,
        length,
        volume: area * length,
    }
}

/// Molecules in `volume` (m³) at `concentration` (mol/L).
pub fn n_mol_from_concentration(concentration: f64, volume: f64) -> f64 {
    concentration * LITRES_PER_M3 * AVOGADRO * volume
}

/// Concentration (mol/L) giving `n_mol` molecules in `volume` (m³).
pub fn concentration_from_n_mol(n_mol: f64, volume: f64) -> f64 {
    n_mol / (LITRES_PER_M3 * AVOGADRO * volume)
}

/// Spectral widths in nm under several conventions. The field spectrum is
/// `exp(−σ²Δω²/2)`, so its `1/e^{1/2}` half-width is `B = 1/σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralWidths {
    pub sigma_fs: f64,
    pub wavelength_nm: f64,
    /// `B = 1/σ`.
    pub bandwidth: f64,
    /// FWHM of the intensity spectrum, `2√(ln 2)·B`.
    pub intensity_fwhm: f64,
    /// FWHM of the field spectrum, `2√(2 ln 2)·B`.
    pub field_fwhm: f64,
    /// Transform limit `Δν = 0.441/σ` with `σ` read as the intensity FWHM
    /// duration.
    pub tbp_sigma_as_fwhm: f64,
}

fn delta_lambda(wavelength: f64, delta_omega_per_s: f64) -> f64 {
    wavelength * wavelength * delta_omega_per_s / (2.0 * PI * SPEED_OF_LIGHT) * 1e9
}

/// `sigma` in fs, `wavelength` in m.
pub fn spectral_width_report(sigma: f64, wavelength: f64) -> SpectralWidths {
    let b = 1.0 / (sigma * 1e-15);
    let ln2 = std::f64::consts::LN_2;
    SpectralWidths {
        sigma_fs: sigma,
        wavelength_nm: wavelength * 1e9,
        bandwidth: delta_lambda(wavelength, b),
        intensity_fwhm: delta_lambda(wavelength, 2.0 * ln2.sqrt() * b),
        field_fwhm: delta_lambda(wavelength, 2.0 * (2.0 * ln2).sqrt() * b),
        tbp_sigma_as_fwhm: wavelength * wavelength * 0.441 / (sigma * 1e-15) / SPEED_OF_LIGHT * 1e9,
    }
}

/// Everything derived from [`ExperimentParams`], including the strength of
/// the collinear vacuum term relative to classical stimulated emission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProposalReport {
    pub params: ExperimentParams,
    pub photon_number: f64,
    pub coherent_volume: CoherentVolume,
    pub n_mol: f64,
    pub widths: SpectralWidths,
    /// V·s/m
    pub eta_pulse: f64,
    pub eta_vacuum: f64,
    /// `(η_vac/η)² = Γ/(N√π σ)`.
    pub eta_ratio_squared: f64,
    /// `N_mol (η_vac/η)²`: vacuum over classical emission for excitons on
    /// the carrier.
    pub ratio_resonant: f64,
    /// `N_mol Γ/(N σ)`, the same estimate without the `√π` of `η²`.
    pub ratio_without_sqrt_pi: f64,
    /// Ratio for the reference dimer, with its off-resonant spectral
    /// filters.
    pub ratio_dimer: f64,
    pub dimer: DimerSpec,
    /// Order-of-magnitude ratio the proposal aims at.
    pub target_ratio: f64,
    /// `ratio_resonant` within a factor of two of `target_ratio`.
    pub within_factor_two: bool,
}

/// Reference dimer: bright excitons at 750 nm and 800 nm, no coupling.
pub fn reference_dimer() -> DimerSpec {
    DimerSpec {
        omega_a: nm_to_rad_per_fs(750.0),
        omega_b: nm_to_rad_per_fs(800.0),
        coupling_j: 0.0,
        mu_ag: DEBYE,
        mu_bg: DEBYE,
    }
}

pub const TARGET_RATIO: f64 = 20.0;

pub fn proposal_report(params: &ExperimentParams, dimer: &DimerSpec) -> Result<ProposalReport> {
    params.validate()?;
    dimer.validate()?;
    let pulse = params.pulse();
    let vol = coherent_volume(params.spot_diameter, params.sigma);
    let n_mol = n_mol_from_concentration(params.concentration, vol.volume);
    let vac = VacuumParams::for_probe(params.gamma, &pulse)?;
    let eta = pulse_eta(&pulse);
    let eta_ratio_squared = (vac.eta_vac / eta).powi(2);
    let ratio_resonant = n_mol * eta_ratio_squared;
    let basis = diagonalize_dimer(dimer);
    let ratio_dimer = superradiance_ratio(&basis, &pulse, &pulse, &vac, n_mol, n_mol * n_mol)?;
    Ok(ProposalReport {
        params: *params,
        photon_number: pulse.photon_number,
        coherent_volume: vol,
        n_mol,
        widths: spectral_width_report(params.sigma, params.wavelength),
        eta_pulse: eta,
        eta_vacuum: vac.eta_vac,
        eta_ratio_squared,
        ratio_resonant,
        ratio_without_sqrt_pi: n_mol * params.gamma / (pulse.photon_number * params.sigma),
        ratio_dimer,
        dimer: *dimer,
        target_ratio: TARGET_RATIO,
        within_factor_two: (TARGET_RATIO / 2.0..=TARGET_RATIO * 2.0).contains(&ratio_resonant),
    })
}

impl ProposalReport {
    /// Aligned two-column text table.
    pub fn to_text(&self) -> String {
        let w = &self.widths;
        let v = &self.coherent_volume;
        let rows: Vec<(&str, String)> = vec![
            ("pulse energy (J)", format!("{:.4e}", self.params.pulse_energy)),
            ("wavelength (nm)", format!("{:.1}", self.params.wavelength * 1e9)),
            ("sigma (fs)", format!("{:.2}", self.params.sigma)),
            ("spot diameter (um)", format!("{:.2}", self.params.spot_diameter * 1e6)),
            ("concentration (mM)", format!("{:.4}", self.params.concentration * 1e3)),
            ("gamma (fs)", format!("{:.1}", self.params.gamma)),
            ("photons per pulse", format!("{:.4e}", self.photon_number)),
            ("area A (m^2)", format!("{:.4e}", v.area)),
            ("length L (um)", format!("{:.4}", v.length * 1e6)),
            ("volume V (m^3)", format!("{:.4e}", v.volume)),
            ("molecules N_mol", format!("{:.4e}", self.n_mol)),
            ("width B=1/sigma (nm)", format!("{:.2}", w.bandwidth)),
            ("width intensity FWHM (nm)", format!("{:.2}", w.intensity_fwhm)),
            ("width field FWHM (nm)", format!("{:.2}", w.field_fwhm)),
            ("width 0.441/sigma (nm)", format!("{:.2}", w.tbp_sigma_as_fwhm)),
            ("eta pulse (V s/m)", format!("{:.6e}", self.eta_pulse)),
            ("eta vacuum (V s/m)", format!("{:.6e}", self.eta_vacuum)),
            ("(eta_vac/eta)^2", format!("{:.4e}", self.eta_ratio_squared)),
            ("ratio, resonant", format!("{:.3}", self.ratio_resonant)),
            ("ratio, without sqrt(pi)", format!("{:.3}", self.ratio_without_sqrt_pi)),
            ("ratio, reference dimer", format!("{:.3}", self.ratio_dimer)),
            ("target ratio", format!("{:.1}", self.target_ratio)),
            ("within factor 2", self.within_factor_two.to_string()),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter()
            .map(|(k, v)| format!("{k:<width$}  {v}\n"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn photons_in_five_nanojoules() {
        let n = photon_number(5e-9, 775e-9);
        assert!(close(n, 1.9e10, 0.05));
        assert!(close(n, 1.950_7e10, 1e-4), "{n:e}");
    }

    #[test]
    fn one_photon() {
        let e = PLANCK * SPEED_OF_LIGHT / 775e-9;
        assert!(close(photon_number(e, 775e-9), 1.0, 1e-14));
    }

    #[test]
    fn coherence_length() {
        let v = coherent_volume(70e-6, 20.0);
        assert!(close(v.length, 6e-6, 0.05));
        assert!(close(v.length, 5.995_85e-6, 1e-6));
        assert!(close(v.area, 3.848_451e-9, 1e-6));
        let v2 = coherent_volume(140e-6, 20.0);
        assert!(close(v2.area, 4.0 * v.area, 1e-14));
    }

    #[test]
    fn molecules_at_proposal_concentration() {
        let v = coherent_volume(70e-6, 20.0);
        let n = n_mol_from_concentration(1.4e-3, v.volume);
        assert!(close(n, 1.9e10, 0.05));
        assert!(close(n, 1.945_43e10, 1e-5), "{n:e}");
        assert_eq!(n_mol_from_concentration(0.0, v.volume), 0.0);
        assert!(close(concentration_from_n_mol(n, 2.0 * v.volume), 0.7e-3, 1e-12));
    }

    #[test]
    fn widths_at_twenty_fs() {
        let w = spectral_width_report(20.0, 775e-9);
        assert!(close(w.bandwidth, 15.943, 1e-4), "{w:?}");
        assert!(close(w.intensity_fwhm, 26.547, 1e-4), "{w:?}");
        assert!(close(w.field_fwhm, 37.543, 1e-4), "{w:?}");
        assert!(close(w.tbp_sigma_as_fwhm, 44.18, 1e-3), "{w:?}");
        let w2 = spectral_width_report(40.0, 775e-9);
        assert!(close(w2.field_fwhm, 0.5 * w.field_fwhm, 1e-14));
        assert!(close(w2.bandwidth, 0.5 * w.bandwidth, 1e-14));
    }

    #[test]
    fn proposal_numbers() {
        let r = proposal_report(&ExperimentParams::default(), &reference_dimer()).unwrap();
        // Γ/(√π σ) with N_mol ≈ N.
        let expect = r.n_mol / r.photon_number * 400.0 / (PI.sqrt() * 20.0);
        assert!(close(r.ratio_resonant, expect, 1e-12));
        assert!(close(r.ratio_resonant, 11.25, 1e-3), "{}", r.ratio_resonant);
        assert!(r.within_factor_two);
        assert!(close(r.ratio_without_sqrt_pi / r.ratio_resonant, PI.sqrt(), 1e-12));
        assert!(r.ratio_dimer > r.ratio_resonant);
        let text = r.to_text();
        assert!(text.contains("ratio, resonant"));
        assert!(r.eta_pulse > r.eta_vacuum);
    }

    #[test]
    fn invalid_params_rejected() {
        let p = ExperimentParams {
            sigma: 0.0,
            ..Default::default()
        };
        assert!(proposal_report(&p, &reference_dimer()).is_err());
    }

    proptest! {
        #[test]
        fn concentration_round_trip(c in 1e-9f64..10.0, v in 1e-20f64..1e-6) {
            let n = n_mol_from_concentration(c, v);
            prop_assert!(close(concentration_from_n_mol(n, v), c, 1e-12));
        }

        #[test]
        fn doubling_probes(e in 1e-12f64..1e-6, d in 1e-6f64..1e-3, s in 5.0f64..200.0) {
            prop_assert!(close(photon_number(2.0 * e, 775e-9), 2.0 * photon_number(e, 775e-9), 1e-14));
            let v = coherent_volume(d, s);
            let v2 = coherent_volume(d, 2.0 * s);
            prop_assert!(close(v2.volume, 2.0 * v.volume, 1e-14));
            let w = spectral_width_report(s, 775e-9);
            let w2 = spectral_width_report(2.0 * s, 775e-9);
            prop_assert!(close(w2.intensity_fwhm, 0.5 * w.intensity_fwhm, 1e-14));
        }
    }
}

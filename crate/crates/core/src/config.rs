//! TOML run configuration.
//!
//! Frequencies are strings with an explicit unit, `"775 nm"` (vacuum
//! wavelength) or `"2.43 rad/fs"`, and are normalised to rad/fs on output.
//! Dipoles are in debye, times in fs, lengths in m. Unknown keys are errors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::constants::nm_to_rad_per_fs;
use crate::ensemble::Cylinder;
use crate::error::{Error, Result};
use crate::exciton::{diagonalize_dimer, DimerSpec, ExcitonBasis};
use crate::experiment::{ExperimentParams, DEBYE};
use crate::field::{PulseSpec, VacuumParams};
use crate::oracle::QuadratureConfig;

/// Angular frequency stored in rad/fs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency(pub f64);

impl FromStr for Frequency {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let (num, unit) = s
            .find(|c: char| c.is_ascii_alphabetic())
            .map(|i| s.split_at(i))
            .ok_or_else(|| format!("`{s}` has no unit; use `nm` or `rad/fs`"))?;
        let v: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("`{}` is not a number", num.trim()))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(format!("`{s}` must be positive"));
        }
        match unit.trim() {
            "nm" => Ok(Frequency(nm_to_rad_per_fs(v))),
            "rad/fs" => Ok(Frequency(v)),
            u => Err(format!("unknown unit `{u}`; use `nm` or `rad/fs`")),
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad/fs", self.0)
    }
}

impl Serialize for Frequency {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Frequency {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Coupling `J`, rad/fs only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling(pub f64);

impl Serialize for Coupling {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("{} rad/fs", self.0))
    }
}

impl<'de> Deserialize<'de> for Coupling {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let num = s
            .trim()
            .strip_suffix("rad/fs")
            .ok_or_else(|| serde::de::Error::custom(format!("coupling `{s}` must be given in rad/fs")))?;
        num.trim()
            .parse()
            .map(Coupling)
            .map_err(|_| serde::de::Error::custom(format!("`{}` is not a number", num.trim())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimerConfig {
    pub omega_a: Frequency,
    pub omega_b: Frequency,
    pub coupling_j: Coupling,
    pub mu_ag_debye: f64,
    pub mu_bg_debye: f64,
}

impl DimerConfig {
    pub fn spec(&self) -> DimerSpec {
        DimerSpec {
            omega_a: self.omega_a.0,
            omega_b: self.omega_b.0,
            coupling_j: self.coupling_j.0,
            mu_ag: self.mu_ag_debye * DEBYE,
            mu_bg: self.mu_bg_debye * DEBYE,
        }
    }
}

fn default_direction() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    pub omega_0: Frequency,
    /// fs
    pub sigma: f64,
    pub photon_number: f64,
    /// m
    pub spot_diameter: f64,
    #[serde(default)]
    pub arrival_time: f64,
    #[serde(default = "default_direction")]
    pub direction: [f64; 3],
}

impl PulseConfig {
    pub fn spec(&self) -> PulseSpec {
        let mut p = PulseSpec::new(
            self.omega_0.0,
            self.sigma,
            self.photon_number,
            self.arrival_time,
            std::f64::consts::PI * self.spot_diameter * self.spot_diameter / 4.0,
        );
        p.direction = self.direction;
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VacuumConfig {
    /// fs
    pub gamma: f64,
}

/// How `|X|²` is obtained for an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseMode {
    /// `|X|² = N²`.
    #[default]
    Collinear,
    /// `|X|² = N`.
    Incoherent,
    /// Sum over sampled positions.
    Sampled,
}

fn default_seeds() -> usize {
    200
}

fn default_sample_n_mol() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub n_mol: f64,
    #[serde(default)]
    pub phase: PhaseMode,
    /// Cylinder diameter (m); defaults to the pump spot.
    pub diameter: Option<f64>,
    /// Cylinder length (m); defaults to `cσ` of the pump.
    pub length: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Position draws for the `|X|²` statistics.
    #[serde(default = "default_seeds")]
    pub seeds: usize,
    /// Molecules per draw in the statistics.
    #[serde(default = "default_sample_n_mol")]
    pub sample_n_mol: usize,
    /// Molecule counts for the beat-visibility scan.
    #[serde(default)]
    pub scan_n_mol: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "T")]
    T,
    #[serde(rename = "n_mol")]
    NMol,
    #[serde(rename = "photon_number")]
    PhotonNumber,
    /// Probe angle from the pump axis in the xz plane (rad).
    #[serde(rename = "angle")]
    Angle,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::T => "T",
            SweepAxis::NMol => "n_mol",
            SweepAxis::PhotonNumber => "photon_number",
            SweepAxis::Angle => "angle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Pump,
    #[default]
    Probe,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
    /// Waiting time (fs) for sweeps over other axes.
    pub t: Option<f64>,
    /// Pulse whose photon number is swept.
    #[serde(default)]
    pub target: Target,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::Config("sweep.points must be at least 1".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config("sweep.start and sweep.stop must be finite".into()));
        }
        if self.points > 1 && self.start == self.stop {
            return Err(Error::Config("sweep range is empty (start == stop)".into()));
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::Config("log sweeps need positive start and stop".into()));
        }
        if self.axis != SweepAxis::T && self.t.is_none() {
            return Err(Error::Config(format!("sweep.t is required for a sweep over {}", self.axis)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let f = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + f * (self.stop - self.start),
                    Scale::Log => (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<String>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimer: Option<DimerConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pump: Option<PulseConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<PulseConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vacuum: Option<VacuumConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<QuadratureConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

/// Physical inputs shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physics {
    pub dimer: DimerSpec,
    pub basis: ExcitonBasis,
    pub pump: PulseSpec,
    pub probe: PulseSpec,
    pub vacuum: VacuumParams,
}

fn missing(section: &str) -> Error {
    Error::Config(format!("missing [{section}] section"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Normalised TOML text.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }

    /// SHA-256 of the normalised text without the `[output]` section, hex
    /// encoded.
    pub fn hash(&self) -> String {
        let resolved = RunConfig {
            output: None,
            ..self.clone()
        };
        Sha256::digest(resolved.to_toml().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn physics(&self) -> Result<Physics> {
        let dimer = self.dimer.as_ref().ok_or_else(|| missing("dimer"))?.spec();
        let pump = self.pump.as_ref().ok_or_else(|| missing("pump"))?.spec();
        let probe = self.probe.as_ref().ok_or_else(|| missing("probe"))?.spec();
        let gamma = self.vacuum.as_ref().ok_or_else(|| missing("vacuum"))?.gamma;
        dimer.validate()?;
        pump.validate()?;
        probe.validate()?;
        let vacuum = VacuumParams::for_probe(gamma, &probe)?;
        Ok(Physics {
            dimer,
            basis: diagonalize_dimer(&dimer),
            pump,
            probe,
            vacuum,
        })
    }

    pub fn sweep(&self) -> Result<SweepConfig> {
        let s = self.sweep.ok_or_else(|| missing("sweep"))?;
        s.validate()?;
        Ok(s)
    }

    pub fn ensemble(&self) -> Result<&EnsembleConfig> {
        self.ensemble.as_ref().ok_or_else(|| missing("ensemble"))
    }

    pub fn oracle(&self) -> Result<QuadratureConfig> {
        let o = self.oracle.ok_or_else(|| missing("oracle"))?;
        o.validate()?;
        Ok(o)
    }

    /// Cylinder from the ensemble section, falling back to the pump spot
    /// and coherence length.
    pub fn cylinder(&self) -> Result<Cylinder> {
        let e = self.ensemble()?;
        let pump = self.pump.as_ref().ok_or_else(|| missing("pump"))?;
        let c = Cylinder {
            diameter: e.diameter.unwrap_or(pump.spot_diameter),
            length: e
                .length
                .unwrap_or(crate::constants::SPEED_OF_LIGHT * pump.sigma * crate::constants::FS),
        };
        c.validate()?;
        Ok(c)
    }
}

//! Two-site dimer Hamiltonian and its exciton representation.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Site-basis dimer parameters. Frequencies in rad/fs, dipoles in C·m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimerSpec {
    pub omega_a: f64,
    pub omega_b: f64,
    pub coupling_j: f64,
    pub mu_ag: f64,
    pub mu_bg: f64,
}

impl DimerSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_a > 0.0 && self.omega_a.is_finite()) {
            return Err(invalid("omega_a", "must be positive and finite"));
        }
        if !(self.omega_b > 0.0 && self.omega_b.is_finite()) {
            return Err(invalid("omega_b", "must be positive and finite"));
        }
        if !self.coupling_j.is_finite() {
            return Err(invalid("coupling_j", "must be finite"));
        }
        if !(self.mu_ag >= 0.0 && self.mu_ag.is_finite()) {
            return Err(invalid("mu_ag", "must be non-negative"));
        }
        if !(self.mu_bg >= 0.0 && self.mu_bg.is_finite()) {
            return Err(invalid("mu_bg", "must be non-negative"));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        0.5 * (self.omega_a - self.omega_b)
    }

    pub fn omega_bar(&self) -> f64 {
        0.5 * (self.omega_a + self.omega_b)
    }
}

/// Exciton-basis transition dipoles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcitonDipoles {
    pub mu_alpha_g: f64,
    pub mu_beta_g: f64,
    pub mu_f_alpha: f64,
    pub mu_f_beta: f64,
}

/// Eigen-representation `{g, α, β, f}` of a dimer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcitonBasis {
    pub theta: f64,
    pub delta: f64,
    pub omega_bar: f64,
    pub omega_g: f64,
    pub omega_alpha: f64,
    pub omega_beta: f64,
    pub omega_f: f64,
    pub mu_alpha_g: f64,
    pub mu_beta_g: f64,
    pub mu_f_alpha: f64,
    pub mu_f_beta: f64,
}

/// Which singly excited exciton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Exciton {
    Alpha,
    Beta,
}

impl Exciton {
    pub const BOTH: [Exciton; 2] = [Exciton::Alpha, Exciton::Beta];

    pub fn index(self) -> usize {
        match self {
            Exciton::Alpha => 0,
            Exciton::Beta => 1,
        }
    }
}

impl ExcitonBasis {
    pub fn omega(&self, n: Exciton) -> f64 {
        match n {
            Exciton::Alpha => self.omega_alpha,
            Exciton::Beta => self.omega_beta,
        }
    }

    /// `μ_ng` (equal to `μ_gn` for real dipoles).
    pub fn mu_ng(&self, n: Exciton) -> f64 {
        match n {
            Exciton::Alpha => self.mu_alpha_g,
            Exciton::Beta => self.mu_beta_g,
        }
    }

    pub fn mu_fn(&self, n: Exciton) -> f64 {
        match n {
            Exciton::Alpha => self.mu_f_alpha,
            Exciton::Beta => self.mu_f_beta,
        }
    }

    /// Exciton splitting `ω_α − ω_β`, always non-negative.
    pub fn splitting(&self) -> f64 {
        self.omega_alpha - self.omega_beta
    }

    pub fn dipoles(&self) -> ExcitonDipoles {
        ExcitonDipoles {
            mu_alpha_g: self.mu_alpha_g,
            mu_beta_g: self.mu_beta_g,
            mu_f_alpha: self.mu_f_alpha,
            mu_f_beta: self.mu_f_beta,
        }
    }
}

/// Diagonalize the dimer. Eigenvalues use `√(δ²+J²)` so the degenerate
/// case `δ = 0` needs no special handling.
pub fn diagonalize_dimer(spec: &DimerSpec) -> ExcitonBasis {
    let delta = spec.delta();
    let omega_bar = spec.omega_bar();
    let r = delta.hypot(spec.coupling_j);
    let theta = 0.5 * spec.coupling_j.atan2(delta);
    let d = transform_dipoles(spec, theta);
    ExcitonBasis {
        theta,
        delta,
        omega_bar,
        omega_g: 0.0,
        omega_alpha: omega_bar + r,
        omega_beta: omega_bar - r,
        omega_f: spec.omega_a + spec.omega_b,
        mu_alpha_g: d.mu_alpha_g,
        mu_beta_g: d.mu_beta_g,
        mu_f_alpha: d.mu_f_alpha,
        mu_f_beta: d.mu_f_beta,
    }
}

/// Rotate site dipoles into the exciton basis for
/// `|α⟩ = cosθ|a⟩ + sinθ|b⟩`, `|β⟩ = −sinθ|a⟩ + cosθ|b⟩`.
pub fn transform_dipoles(spec: &DimerSpec, theta: f64) -> ExcitonDipoles {
    let (s, c) = theta.sin_cos();
    ExcitonDipoles {
        mu_alpha_g: c * spec.mu_ag + s * spec.mu_bg,
        mu_beta_g: -s * spec.mu_ag + c * spec.mu_bg,
        // |f⟩ = |ab⟩, so ⟨f|μ|a⟩ = μ_bg and ⟨f|μ|b⟩ = μ_ag.
        mu_f_alpha: c * spec.mu_bg + s * spec.mu_ag,
        mu_f_beta: -s * spec.mu_bg + c * spec.mu_ag,
    }
}

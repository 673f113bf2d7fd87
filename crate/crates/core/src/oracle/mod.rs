//! Brute-force evaluation of the pump-probe overlaps from the mode-resolved
//! field correlations, used to check the closed forms in [`crate::signals`].
//!
//! The pump is centred at `t = 0` and the probe at `t = T`. Each pulse is
//! integrated on its own grid in the frame rotating at its carrier, so the
//! dependence on `T` reduces to explicit phases and everything else is built
//! once per resolution.

pub mod correlation;
pub mod multi;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{EPSILON_0, FS, HBAR, SPEED_OF_LIGHT};
use crate::error::{invalid, Error, Result};
use crate::exciton::{Exciton, ExcitonBasis};
use crate::field::{mode_coupling, PulseSpec, VacuumParams};
use crate::operators::PulseId;
use crate::quadrature::{regularized_integral, TimeGrid};
use crate::signals::SignalComponents;

use correlation::{PulseModes, ProbeModes, VacuumModes};

/// Largest relative change allowed between full and half time resolution.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-3;
/// Oracle against closed form, classical components.
pub const CLASSICAL_TOLERANCE: f64 = 1e-3;
/// Oracle against closed form, vacuum component. The closed form replaces
/// the Lorentzian cross term by a hard window, so agreement is approximate.
pub const VACUUM_TOLERANCE: f64 = 0.10;
/// Mode sum against the delta-function shortcut.
pub const SHORTCUT_TOLERANCE: f64 = 0.01;

/// The vacuum mode sum extends this far (rad/fs) beyond each exciton
/// transition. The product of two Lorentzians of width `1/2Γ` has a tail
/// of order `(1/(2Γ·margin))³` past it.
const VACUUM_MARGIN: f64 = 0.05;
/// Vacuum modes per `1/Γ`. Sampling the Lorentzians any coarser aliases
/// their tails back onto the peak.
const VACUUM_MODES_PER_WIDTH: f64 = 8.0;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Points per time axis at full resolution.
    pub time_points: usize,
    /// Half-width of each time axis in units of that pulse's σ.
    pub time_span: f64,
    pub mode_count: usize,
    /// Half-width of the mode grid in units of the bandwidth.
    pub mode_span: f64,
    /// Lifetime used to regularize the vacuum term (fs).
    pub regularization_gamma: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            time_points: 256,
            time_span: 6.0,
            mode_count: 512,
            mode_span: 5.0,
            regularization_gamma: 400.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        // 16 is allowed so that an under-resolved grid can be run and seen
        // to fail the convergence check.
        if self.time_points < 16 {
            return Err(invalid("time_points", format!("must be at least 16, got {}", self.time_points)));
        }
        if !(self.time_span >= 4.0 && self.time_span.is_finite()) {
            return Err(invalid("time_span", format!("must be at least 4, got {}", self.time_span)));
        }
        if self.mode_count < 16 {
            return Err(invalid("mode_count", format!("must be at least 16, got {}", self.mode_count)));
        }
        if !(self.mode_span >= 3.0 && self.mode_span.is_finite()) {
            return Err(invalid("mode_span", format!("must be at least 3, got {}", self.mode_span)));
        }
        if !(self.regularization_gamma > 0.0 && self.regularization_gamma.is_finite()) {
            return Err(invalid("regularization_gamma", "must be positive"));
        }
        Ok(())
    }
}

/// Oracle components at one resolution.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OracleValues {
    pub esa: f64,
    pub se_classical: f64,
    /// Vacuum term from the explicit sum over probe modes.
    pub se_vacuum: f64,
    /// Vacuum term from the delta-function shortcut.
    pub se_vacuum_delta: f64,
    pub gsb: f64,
}

impl OracleValues {
    fn drift(&self, other: &OracleValues) -> OracleValues {
        OracleValues {
            esa: rel_dev(self.esa, other.esa),
            se_classical: rel_dev(self.se_classical, other.se_classical),
            se_vacuum: rel_dev(self.se_vacuum, other.se_vacuum),
            se_vacuum_delta: rel_dev(self.se_vacuum_delta, other.se_vacuum_delta),
            gsb: rel_dev(self.gsb, other.gsb),
        }
    }

    fn max(&self) -> f64 {
        [self.esa, self.se_classical, self.se_vacuum, self.se_vacuum_delta, self.gsb]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    #[serde(rename = "T")]
    pub t: f64,
    pub time_points: usize,
    pub fine: OracleValues,
    pub coarse: OracleValues,
    pub drift: OracleValues,
    pub converged: bool,
    /// Largest `|full − 2 Re ordered| / |full|` over the bleach integrals.
    pub ordering_residual: f64,
}

impl OracleResult {
    fn check(&self, component: &'static str, pick: fn(&OracleValues) -> f64) -> Result<f64> {
        let drift = pick(&self.drift);
        if drift > CONVERGENCE_TOLERANCE {
            return Err(Error::NonConvergence {
                component,
                fine: pick(&self.fine),
                coarse: pick(&self.coarse),
                drift,
            });
        }
        Ok(pick(&self.fine))
    }
}

/// Stimulated emission from the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeOracle {
    pub classical: f64,
    pub vacuum_modesum: f64,
    pub vacuum_delta: f64,
    /// Relative gap between the two vacuum evaluations.
    pub discrepancy: f64,
}

/// Waiting-time independent pieces at one time resolution.
#[derive(Debug, Clone)]
struct Resolved {
    /// Pump overlap `P_mn`.
    pump: [[C; 2]; 2],
    /// Probe overlap on the `f ← m` transitions, without the `T` phase.
    esa_probe: [[C; 2]; 2],
    /// Antinormal probe overlap on `g ← m`, without the `T` phase.
    se_probe: [[C; 2]; 2],
    /// Probe population factor on `g → m`.
    probe_diag: [f64; 2],
    /// Time-ordered pump double integral for each exciton.
    ordered: [C; 2],
    ordering_residual: f64,
}

/// Mode grids and correlation matrices for one parameter set, reusable
/// across waiting times.
#[derive(Debug, Clone)]
pub struct OracleContext {
    pub basis: ExcitonBasis,
    pub cfg: QuadratureConfig,
    pub min_delay: f64,
    pump: PulseModes,
    probe: ProbeModes,
    fine: Resolved,
    coarse: Resolved,
    vacuum: VacuumModes,
    /// `L_{2Γ}(ω_k − ω_n)` on the vacuum modes, per exciton.
    lorentz: [Vec<f64>; 2],
    /// Prefactor of the delta-function shortcut.
    shortcut: f64,
}

fn transition(basis: &ExcitonBasis, n: Exciton) -> f64 {
    basis.omega(n) - basis.omega_g
}

fn upper(basis: &ExcitonBasis, n: Exciton) -> f64 {
    basis.omega_f - basis.omega(n)
}

fn resolve(basis: &ExcitonBasis, pump: &PulseModes, probe: &ProbeModes, cfg: &QuadratureConfig, n: usize) -> Resolved {
    let fs2 = FS * FS;
    let gp = TimeGrid::symmetric(cfg.time_span * pump.pulse.sigma, n);
    let gq = TimeGrid::symmetric(cfg.time_span * probe.modes.pulse.sigma, n);
    let w0 = pump.pulse.omega_0;
    let w0p = probe.modes.pulse.omega_0;

    let yp: Vec<Vec<C>> = Exciton::BOTH
        .iter()
        .map(|&m| pump.project(&gp, transition(basis, m) - w0))
        .collect();
    let yf: Vec<Vec<C>> = Exciton::BOTH
        .iter()
        .map(|&m| probe.modes.project(&gq, upper(basis, m) - w0p))
        .collect();
    let yg: Vec<Vec<C>> = Exciton::BOTH
        .iter()
        .map(|&m| probe.modes.project(&gq, transition(basis, m) - w0p))
        .collect();

    let mut out = Resolved {
        pump: [[C::default(); 2]; 2],
        esa_probe: [[C::default(); 2]; 2],
        se_probe: [[C::default(); 2]; 2],
        probe_diag: [0.0; 2],
        ordered: [C::default(); 2],
        ordering_residual: 0.0,
    };
    for m in 0..2 {
        for k in 0..2 {
            out.pump[m][k] = pump.normal.sesquilinear(&yp[k], &yp[m]) * fs2;
            out.esa_probe[m][k] = probe.modes.normal.sesquilinear(&yf[k], &yf[m]) * fs2;
            out.se_probe[m][k] = probe.anti_classical.bilinear_conj_right(&yg[k], &yg[m]) * fs2;
        }
        out.probe_diag[m] = (probe.modes.normal.sesquilinear(&yg[m], &yg[m]) * fs2).re;
    }

    // Bleach: the pump acts twice on the same side, so the two times are
    // ordered and the double integral does not factorize.
    let corr = pump.time_correlation(&gp);
    for &e in &Exciton::BOTH {
        let d = transition(basis, e) - w0;
        let ph: Vec<C> = gp.points.iter().map(|&t| C::from_polar(1.0, d * t)).collect();
        let mut ordered = C::default();
        let mut full = C::default();
        for (i, row) in corr.iter().enumerate() {
            let left = ph[i].conj();
            let mut acc_o = C::default();
            let mut acc_f = C::default();
            for (j, c) in row.iter().enumerate() {
                let v = c * ph[j];
                acc_o += v * gp.ordered_weight(i, j);
                acc_f += v * (gp.weights[i] * gp.weights[j]);
            }
            ordered += left * acc_o;
            full += left * acc_f;
        }
        let i = e.index();
        out.ordered[i] = ordered * fs2;
        let full = full * fs2;
        if full.norm() > 0.0 {
            let r = (full - 2.0 * out.ordered[i].re).norm() / full.norm();
            out.ordering_residual = out.ordering_residual.max(r);
        }
    }
    out
}

impl OracleContext {
    pub fn new(basis: &ExcitonBasis, pump: &PulseSpec, probe: &PulseSpec, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        pump.validate()?;
        probe.validate()?;
        let pm = PulseModes::new(PulseId::Pump, pump, cfg.mode_span, cfg.mode_count)?;
        let qm = ProbeModes::new(probe, cfg.mode_span, cfg.mode_count)?;
        let fine = resolve(basis, &pm, &qm, cfg, cfg.time_points);
        let coarse = resolve(basis, &pm, &qm, cfg, cfg.time_points / 2);
        let (lo, hi) = Exciton::BOTH
            .iter()
            .map(|&e| transition(basis, e))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), w| (a.min(w), b.max(w)));
        let spacing = 1.0 / (VACUUM_MODES_PER_WIDTH * cfg.regularization_gamma);
        let vacuum = VacuumModes::new(lo - VACUUM_MARGIN, hi + VACUUM_MARGIN, spacing)?;
        let lorentz = [Exciton::Alpha, Exciton::Beta].map(|e| {
            let w = transition(basis, e);
            vacuum
                .freqs
                .iter()
                .map(|&wk| regularized_integral(wk - w, 2.0 * cfg.regularization_gamma))
                .collect()
        });
        let shortcut = HBAR * probe.omega_0 / (2.0 * EPSILON_0 * SPEED_OF_LIGHT * probe.area);
        Ok(OracleContext {
            basis: *basis,
            cfg: *cfg,
            min_delay: 3.0 * (pump.sigma + probe.sigma),
            pump: pm,
            probe: qm,
            vacuum,
            fine,
            coarse,
            lorentz,
            shortcut,
        })
    }

    /// Vacuum correlation `A^vac_mn` from the commutator part of the
    /// antinormal probe matrix.
    fn vacuum_modesum(&self, t: f64) -> [[C; 2]; 2] {
        let g = mode_coupling(self.probe.modes.pulse.omega_0, self.vacuum.spacing, self.probe.modes.pulse.area);
        let g2 = g * g * FS * FS;
        let freqs = &self.vacuum.freqs;
        let mut out = [[C::default(); 2]; 2];
        for m in 0..2 {
            let right: Vec<C> = freqs
                .iter()
                .zip(&self.lorentz[m])
                .map(|(&w, &l)| C::from_polar(l, -w * t))
                .collect();
            for n in 0..2 {
                let left: Vec<C> = freqs
                    .iter()
                    .zip(&self.lorentz[n])
                    .map(|(&w, &l)| C::from_polar(l, w * t))
                    .collect();
                out[m][n] = self.vacuum.commutator.bilinear(&left, &right) * g2;
            }
        }
        out
    }

    fn values(&self, r: &Resolved, vac: &[[C; 2]; 2], t: f64) -> OracleValues {
        let b = &self.basis;
        let h4 = HBAR.powi(4);
        let mut esa = C::default();
        let mut se_cl = C::default();
        let mut se_vac = C::default();
        let mut se_delta = C::default();
        for m in Exciton::BOTH {
            for n in Exciton::BOTH {
                let (i, k) = (m.index(), n.index());
                let beat = C::from_polar(1.0, (transition(b, n) - transition(b, m)) * t);
                let p = r.pump[i][k];
                esa += b.mu_fn(m) * b.mu_ng(m) * b.mu_fn(n) * b.mu_ng(n) * p * r.esa_probe[i][k] * beat;
                let mu4 = b.mu_ng(m).powi(2) * b.mu_ng(n).powi(2);
                se_cl -= mu4 * p * r.se_probe[i][k] * beat;
                se_vac -= mu4 * p * vac[i][k];
                let l = regularized_integral(transition(b, m) - transition(b, n), self.cfg.regularization_gamma);
                se_delta -= mu4 * p * (self.shortcut * l);
            }
        }
        let mut gsb = C::default();
        for m in Exciton::BOTH {
            for n in Exciton::BOTH {
                gsb -= b.mu_ng(m).powi(2) * b.mu_ng(n).powi(2) * r.ordered[n.index()] * r.probe_diag[m.index()];
            }
        }
        OracleValues {
            esa: esa.re / h4,
            se_classical: se_cl.re / h4,
            se_vacuum: se_vac.re / h4,
            se_vacuum_delta: se_delta.re / h4,
            gsb: 2.0 * gsb.re / h4,
        }
    }

    /// All components at full and half time resolution.
    pub fn evaluate(&self, t: f64) -> Result<OracleResult> {
        if !(t > self.min_delay) {
            return Err(Error::PulseOverlap { t, min: self.min_delay });
        }
        let vac = self.vacuum_modesum(t);
        let fine = self.values(&self.fine, &vac, t);
        let coarse = self.values(&self.coarse, &vac, t);
        let drift = fine.drift(&coarse);
        Ok(OracleResult {
            t,
            time_points: self.cfg.time_points,
            fine,
            coarse,
            drift,
            converged: drift.max() <= CONVERGENCE_TOLERANCE,
            ordering_residual: self.fine.ordering_residual,
        })
    }
}

pub fn oracle_esa(
    basis: &ExcitonBasis,
    pump: &PulseSpec,
    probe: &PulseSpec,
    cfg: &QuadratureConfig,
    t: f64,
) -> Result<f64> {
    OracleContext::new(basis, pump, probe, cfg)?
        .evaluate(t)?
        .check("esa", |v| v.esa)
}

/// Stimulated emission. The vacuum lifetime must match the regularization
/// used by the quadrature.
pub fn oracle_se(
    basis: &ExcitonBasis,
    pump: &PulseSpec,
    probe: &PulseSpec,
    vac: &VacuumParams,
    cfg: &QuadratureConfig,
    t: f64,
) -> Result<SeOracle> {
    if rel_dev(vac.gamma, cfg.regularization_gamma) > 1e-12 {
        return Err(invalid(
            "regularization_gamma",
            format!("{} fs differs from the vacuum lifetime {} fs", cfg.regularization_gamma, vac.gamma),
        ));
    }
    let r = OracleContext::new(basis, pump, probe, cfg)?.evaluate(t)?;
    let classical = r.check("se_classical", |v| v.se_classical)?;
    let vacuum_modesum = r.check("se_vacuum", |v| v.se_vacuum)?;
    let vacuum_delta = r.check("se_vacuum_delta", |v| v.se_vacuum_delta)?;
    Ok(SeOracle {
        classical,
        vacuum_modesum,
        vacuum_delta,
        discrepancy: rel_dev(vacuum_modesum, vacuum_delta),
    })
}

pub fn oracle_gsb(
    basis: &ExcitonBasis,
    pump: &PulseSpec,
    probe: &PulseSpec,
    cfg: &QuadratureConfig,
    t: f64,
) -> Result<f64> {
    OracleContext::new(basis, pump, probe, cfg)?
        .evaluate(t)?
        .check("gsb", |v| v.gsb)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentComparison {
    pub name: String,
    pub analytic: f64,
    pub oracle: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub drift: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortcutComparison {
    pub modesum: f64,
    pub delta: f64,
    pub rel_dev: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    #[serde(rename = "T")]
    pub t: f64,
    pub config: QuadratureConfig,
    pub components: Vec<ComponentComparison>,
    pub vacuum_shortcut: ShortcutComparison,
    pub ordering_residual: f64,
    pub converged: bool,
    pub pass: bool,
}

impl ComparisonRecord {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .components
            .iter()
            .filter(|c| !c.pass)
            .map(|c| {
                format!(
                    "{}: analytic {:e}, oracle {:e}, rel {:.3e} (tol {:e}), drift {:.3e}",
                    c.name, c.analytic, c.oracle, c.rel_dev, c.tolerance, c.drift
                )
            })
            .collect();
        if !self.vacuum_shortcut.pass {
            out.push(format!(
                "vacuum mode sum {:e} vs shortcut {:e}: rel {:.3e}",
                self.vacuum_shortcut.modesum, self.vacuum_shortcut.delta, self.vacuum_shortcut.rel_dev
            ));
        }
        if !self.converged {
            out.push("quadrature not converged".into());
        }
        out
    }
}

fn component(name: &str, analytic: f64, oracle: f64, drift: f64, tolerance: f64) -> ComponentComparison {
    let rel = rel_dev(analytic, oracle);
    ComponentComparison {
        name: name.into(),
        analytic,
        oracle,
        abs_dev: (analytic - oracle).abs(),
        rel_dev: rel,
        drift,
        tolerance,
        pass: rel <= tolerance && drift <= CONVERGENCE_TOLERANCE,
    }
}

pub fn compare_report(analytic: &SignalComponents, oracle: &OracleResult, cfg: &QuadratureConfig) -> ComparisonRecord {
    let (f, d) = (&oracle.fine, &oracle.drift);
    let components = vec![
        component("s_esa", analytic.s_esa, f.esa, d.esa, CLASSICAL_TOLERANCE),
        component("s_se_classical", analytic.s_se_classical, f.se_classical, d.se_classical, CLASSICAL_TOLERANCE),
        component("s_se_vacuum", analytic.s_se_vacuum, f.se_vacuum, d.se_vacuum, VACUUM_TOLERANCE),
        component("s_gsb", analytic.s_gsb, f.gsb, d.gsb, CLASSICAL_TOLERANCE),
    ];
    let rel = rel_dev(f.se_vacuum, f.se_vacuum_delta);
    let vacuum_shortcut = ShortcutComparison {
        modesum: f.se_vacuum,
        delta: f.se_vacuum_delta,
        rel_dev: rel,
        tolerance: SHORTCUT_TOLERANCE,
        pass: rel <= SHORTCUT_TOLERANCE,
    };
    let pass = oracle.converged && vacuum_shortcut.pass && components.iter().all(|c| c.pass);
    ComparisonRecord {
        t: oracle.t,
        config: *cfg,
        components,
        vacuum_shortcut,
        ordering_residual: oracle.ordering_residual,
        converged: oracle.converged,
        pass,
    }
}

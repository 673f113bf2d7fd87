//! Closed-form pump-probe signals for one dimer and for an ensemble.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exciton::{Exciton, ExcitonBasis};
use crate::constants::HBAR;
use crate::field::{pulse_eta, PulseSpec, VacuumParams};

/// Absorption couplings `Ω_qn^j` of one pulse. Emission couplings are the
/// complex conjugates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseCouplings {
    pub alpha_g: Complex64,
    pub beta_g: Complex64,
    pub f_alpha: Complex64,
    pub f_beta: Complex64,
}

impl PulseCouplings {
    pub fn ng(&self, n: Exciton) -> Complex64 {
        match n {
            Exciton::Alpha => self.alpha_g,
            Exciton::Beta => self.beta_g,
        }
    }

    pub fn fn_(&self, n: Exciton) -> Complex64 {
        match n {
            Exciton::Alpha => self.f_alpha,
            Exciton::Beta => self.f_beta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSet {
    pub pump: PulseCouplings,
    pub probe: PulseCouplings,
    /// `Ω_gn^{vac}` for `n = α, β`.
    pub vac: [Complex64; 2],
    pub delta_window: u8,
    /// Smallest waiting time for which the pulses count as separated (fs).
    pub min_delay: f64,
}

impl CouplingSet {
    pub fn vac(&self, n: Exciton) -> Complex64 {
        self.vac[n.index()]
    }
}

fn pulse_couplings(basis: &ExcitonBasis, pulse: &PulseSpec) -> PulseCouplings {
    let eta = pulse_eta(pulse) / HBAR;
    let c = |mu: f64, w: f64| Complex64::new(mu * eta * pulse.spectral_factor(w), 0.0);
    PulseCouplings {
        alpha_g: c(basis.mu_alpha_g, basis.omega_alpha - basis.omega_g),
        beta_g: c(basis.mu_beta_g, basis.omega_beta - basis.omega_g),
        f_alpha: c(basis.mu_f_alpha, basis.omega_f - basis.omega_alpha),
        f_beta: c(basis.mu_f_beta, basis.omega_f - basis.omega_beta),
    }
}

/// Evaluate every coupling. The vacuum couplings carry no spectral filter:
/// only the pump envelope selects the transition.
pub fn compute_couplings(
    basis: &ExcitonBasis,
    pump: &PulseSpec,
    probe: &PulseSpec,
    vac: &VacuumParams,
) -> CouplingSet {
    let v = vac.eta_vac / HBAR;
    CouplingSet {
        pump: pulse_couplings(basis, pump),
        probe: pulse_couplings(basis, probe),
        vac: [
            Complex64::new(basis.mu_alpha_g * v, 0.0),
            Complex64::new(basis.mu_beta_g * v, 0.0),
        ],
        delta_window: delta_window(basis.omega_alpha, basis.omega_beta, vac.gamma),
        min_delay: 3.0 * (pump.sigma + probe.sigma),
    }
}

/// `1` when the two excitons lie within `π/(2Γ)` of each other.
pub fn delta_window(omega_alpha: f64, omega_beta: f64, gamma: f64) -> u8 {
    u8::from((omega_alpha - omega_beta).abs() <= std::f64::consts::PI / (2.0 * gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalComponents {
    #[serde(rename = "T")]
    pub t: f64,
    pub s_esa: f64,
    pub s_se_classical: f64,
    pub s_se_vacuum: f64,
    pub s_gsb: f64,
    pub s_total: f64,
}

impl SignalComponents {
    pub fn new(t: f64, s_esa: f64, s_se_classical: f64, s_se_vacuum: f64, s_gsb: f64) -> Self {
        SignalComponents {
            t,
            s_esa,
            s_se_classical,
            s_se_vacuum,
            s_gsb,
            s_total: s_esa + s_se_classical + s_se_vacuum + s_gsb,
        }
    }

    pub fn zero(t: f64) -> Self {
        SignalComponents::new(t, 0.0, 0.0, 0.0, 0.0)
    }
}

pub fn check_delay(c: &CouplingSet, t: f64) -> Result<()> {
    if t > c.min_delay {
        Ok(())
    } else {
        Err(Error::PulseOverlap { t, min: c.min_delay })
    }
}

fn phase(w: f64, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, -w * t)
}

/// Excited-state absorption at waiting time `t`.
pub fn s_esa(c: &CouplingSet, basis: &ExcitonBasis, t: f64) -> Result<f64> {
    check_delay(c, t)?;
    let amp: Complex64 = Exciton::BOTH
        .iter()
        .map(|&n| c.probe.fn_(n) * c.pump.ng(n) * phase(basis.omega(n), t))
        .sum();
    Ok(amp.norm_sqr())
}

/// Stimulated emission split into its classical and vacuum parts.
pub fn s_se(c: &CouplingSet, basis: &ExcitonBasis, t: f64) -> Result<(f64, f64)> {
    check_delay(c, t)?;
    let amp: Complex64 = Exciton::BOTH
        .iter()
        .map(|&n| c.probe.ng(n).conj() * c.pump.ng(n) * phase(basis.omega(n), t))
        .sum();
    Ok((-amp.norm_sqr(), se_vacuum(c)))
}

fn se_vacuum(c: &CouplingSet) -> f64 {
    let va = c.vac(Exciton::Alpha).conj() * c.pump.alpha_g;
    let vb = c.vac(Exciton::Beta).conj() * c.pump.beta_g;
    let mut s = va.norm_sqr() + vb.norm_sqr();
    if c.delta_window == 1 {
        s += 2.0 * (va * vb.conj()).re;
    }
    -s
}

/// Ground-state bleach; independent of the waiting time.
pub fn s_gsb(c: &CouplingSet) -> f64 {
    let pump = c.pump.alpha_g.norm_sqr() + c.pump.beta_g.norm_sqr();
    let probe = c.probe.alpha_g.norm_sqr() + c.probe.beta_g.norm_sqr();
    -pump * probe
}

/// All single-dimer components. `t` is the pump-probe delay; pulse arrival
/// times are not consulted.
pub fn s_total_single(
    basis: &ExcitonBasis,
    pump: &PulseSpec,
    probe: &PulseSpec,
    vac: &VacuumParams,
    t: f64,
) -> Result<SignalComponents> {
    let c = compute_couplings(basis, pump, probe, vac);
    single_from_couplings(&c, basis, t)
}

pub fn single_from_couplings(c: &CouplingSet, basis: &ExcitonBasis, t: f64) -> Result<SignalComponents> {
    let esa = s_esa(c, basis, t)?;
    let (cl, vac) = s_se(c, basis, t)?;
    Ok(SignalComponents::new(t, esa, cl, vac, s_gsb(c)))
}

fn check_ensemble(c: &CouplingSet, x_squared: f64, n_mol: f64) -> Result<()> {
    if c.delta_window != 0 {
        return Err(Error::UnsupportedRegime(
            "the ensemble signal is only defined for non-degenerate excitons (window = 0)".into(),
        ));
    }
    if !(n_mol >= 1.0 && n_mol.is_finite()) {
        return Err(invalid("n_mol", format!("must be at least 1, got {n_mol}")));
    }
    if !(x_squared >= 0.0 && x_squared.is_finite()) {
        return Err(invalid("x_squared", "must be non-negative"));
    }
    Ok(())
}

/// Ensemble signal: classical parts scale with `n_mol`, the vacuum part
/// with the phase-sum weight `|X|²`.
pub fn s_total_ensemble(
    basis: &ExcitonBasis,
    pump: &PulseSpec,
    probe: &PulseSpec,
    vac: &VacuumParams,
    t: f64,
    x_squared: f64,
    n_mol: f64,
) -> Result<SignalComponents> {
    let c = compute_couplings(basis, pump, probe, vac);
    ensemble_from_couplings(&c, basis, t, x_squared, n_mol)
}

pub fn ensemble_from_couplings(
    c: &CouplingSet,
    basis: &ExcitonBasis,
    t: f64,
    x_squared: f64,
    n_mol: f64,
) -> Result<SignalComponents> {
    check_ensemble(c, x_squared, n_mol)?;
    let one = single_from_couplings(c, basis, t)?;
    Ok(SignalComponents::new(
        t,
        n_mol * one.s_esa,
        n_mol * one.s_se_classical,
        x_squared * one.s_se_vacuum,
        n_mol * one.s_gsb,
    ))
}

/// The ensemble total written out term by term, as a closed formula in the
/// couplings.
pub fn ensemble_closed_form(c: &CouplingSet, basis: &ExcitonBasis, t: f64, x_squared: f64, n_mol: f64) -> Result<f64> {
    check_ensemble(c, x_squared, n_mol)?;
    check_delay(c, t)?;
    let (p, q, r) = (&c.pump, &c.probe, &c.probe);
    let beat = phase(basis.splitting(), t);
    let mut rows = 0.0;
    for n in Exciton::BOTH {
        rows += p.ng(n).norm_sqr() * (r.fn_(n).norm_sqr() - 2.0 * q.ng(n).norm_sqr());
    }
    rows -= p.alpha_g.norm_sqr() * q.beta_g.norm_sqr() + p.beta_g.norm_sqr() * q.alpha_g.norm_sqr();
    let esa_beat = p.alpha_g * p.beta_g.conj() * r.f_alpha * r.f_beta.conj() * beat;
    let se_beat = p.alpha_g * p.beta_g.conj() * q.alpha_g.conj() * q.beta_g * beat;
    let vac: f64 = Exciton::BOTH
        .iter()
        .map(|&n| (c.vac(n).conj() * p.ng(n)).norm_sqr())
        .sum();
    Ok(n_mol * rows + n_mol * 2.0 * esa_beat.re - n_mol * 2.0 * se_beat.re - x_squared * vac)
}

/// The three ensemble processes before the cross-process cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleTerms {
    pub esa: f64,
    pub se: f64,
    pub gsb: f64,
}

impl EnsembleTerms {
    pub fn total(&self) -> f64 {
        self.esa + self.se + self.gsb
    }
}

/// Excited-state absorption, stimulated emission and bleach of the
/// ensemble, each summed over molecule pairs. Their sum must reproduce
/// [`ensemble_closed_form`].
pub fn ensemble_terms(c: &CouplingSet, basis: &ExcitonBasis, t: f64, x_squared: f64, n_mol: f64) -> Result<EnsembleTerms> {
    check_ensemble(c, x_squared, n_mol)?;
    let one = single_from_couplings(c, basis, t)?;
    let (p, q) = (&c.pump, &c.probe);
    let a = p.alpha_g.norm_sqr() * q.alpha_g.norm_sqr();
    let b = p.beta_g.norm_sqr() * q.beta_g.norm_sqr();
    let a2 = p.alpha_g.norm_sqr() * q.beta_g.norm_sqr();
    let b2 = p.beta_g.norm_sqr() * q.alpha_g.norm_sqr();
    let cross = p.alpha_g.conj() * q.beta_g.conj() * p.beta_g * q.alpha_g * phase(-basis.splitting(), t);
    let n = n_mol;
    let esa = (a + b) * (n * (n - 2.0) + x_squared)
        + (a2 + b2) * n * (n - 1.0)
        + 2.0 * cross.re * (x_squared - n)
        + n * one.s_esa;
    let se = x_squared * (one.s_se_classical + one.s_se_vacuum);
    let gsb = -n * n * (a + b + a2 + b2);
    Ok(EnsembleTerms { esa, se, gsb })
}

/// Ensemble stimulated emission with the sign pattern
/// `a − b − 2Re c − v_α + v_β`. It does not cancel against the other
/// processes and is kept only as a negative check.
#[cfg(test)]
pub(crate) fn printed_se_term(c: &CouplingSet, basis: &ExcitonBasis, t: f64, x_squared: f64) -> f64 {
    let (p, q) = (&c.pump, &c.probe);
    let beat = phase(-basis.splitting(), t);
    let cross = p.alpha_g.conj() * q.beta_g.conj() * p.beta_g * q.alpha_g * beat;
    let va = (c.vac[0].conj() * p.alpha_g).norm_sqr();
    let vb = (c.vac[1].conj() * p.beta_g).norm_sqr();
    -x_squared
        * (p.alpha_g.norm_sqr() * q.alpha_g.norm_sqr()
            - p.beta_g.norm_sqr() * q.beta_g.norm_sqr()
            - 2.0 * cross.re
            - va
            + vb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::nm_to_rad_per_fs;
    use crate::exciton::{diagonalize_dimer, DimerSpec};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const DEBYE: f64 = 3.335_64e-30;

    fn area() -> f64 {
        PI * (70e-6f64).powi(2) / 4.0
    }

    fn setup(j: f64) -> (ExcitonBasis, PulseSpec, PulseSpec, VacuumParams) {
        let spec = DimerSpec {
            omega_a: nm_to_rad_per_fs(760.0),
            omega_b: nm_to_rad_per_fs(790.0),
            coupling_j: j,
            mu_ag: 6.0 * DEBYE,
            mu_bg: 4.0 * DEBYE,
        };
        let w0 = nm_to_rad_per_fs(775.0);
        let pump = PulseSpec::new(w0, 20.0, 1e6, 0.0, area());
        let probe = PulseSpec::new(w0 * 1.01, 25.0, 2e6, 0.0, area());
        let vac = VacuumParams::for_probe(400.0, &probe).unwrap();
        (diagonalize_dimer(&spec), pump, probe, vac)
    }

    #[test]
    fn resonant_coupling_has_unit_filter() {
        let (mut b, pump, probe, vac) = setup(0.01);
        b.omega_alpha = pump.omega_0;
        let c = compute_couplings(&b, &pump, &probe, &vac);
        let expect = b.mu_alpha_g * pulse_eta(&pump) / HBAR;
        assert!((c.pump.alpha_g.re - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn one_bandwidth_detuning() {
        let (mut b, pump, probe, vac) = setup(0.01);
        b.omega_alpha = pump.omega_0 + 1.0 / pump.sigma;
        let c = compute_couplings(&b, &pump, &probe, &vac);
        let expect = b.mu_alpha_g * pulse_eta(&pump) / HBAR * (-0.5f64).exp();
        assert!((c.pump.alpha_g.re - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn vacuum_couplings_ignore_spectrum() {
        let (b, pump, probe, vac) = setup(0.02);
        let c = compute_couplings(&b, &pump, &probe, &vac);
        assert!((c.vac[0].re - b.mu_alpha_g * vac.eta_vac / HBAR).abs() < 1e-20);
    }

    #[test]
    fn window_examples() {
        assert_eq!(delta_window(2.4, 2.4, 400.0), 1);
        assert_eq!(delta_window(2.4 + PI / 400.0, 2.4, 400.0), 0);
        assert_eq!(delta_window(2.4, 2.4 + PI / 400.0, 400.0), 0);
        // 750 nm and 800 nm excitons
        let wa = nm_to_rad_per_fs(750.0);
        let wb = nm_to_rad_per_fs(800.0);
        assert_eq!(delta_window(wa, wb, 400.0), 0);
    }

    #[test]
    fn overlap_is_rejected() {
        let (b, pump, probe, vac) = setup(0.02);
        let err = s_total_single(&b, &pump, &probe, &vac, 100.0).unwrap_err();
        assert_eq!(err, Error::PulseOverlap { t: 100.0, min: 135.0 });
    }

    #[test]
    fn single_pathway_is_static() {
        let (mut b, pump, probe, vac) = setup(0.02);
        b.mu_beta_g = 0.0;
        b.mu_f_beta = 0.0;
        let c = compute_couplings(&b, &pump, &probe, &vac);
        let e1 = s_esa(&c, &b, 200.0).unwrap();
        let e2 = s_esa(&c, &b, 313.7).unwrap();
        let expect = (c.probe.f_alpha * c.pump.alpha_g).norm_sqr();
        assert!((e1 - expect).abs() < 1e-12 * expect);
        assert!((e2 - expect).abs() < 1e-12 * expect);
        let g = s_gsb(&c);
        let expect = -c.pump.alpha_g.norm_sqr() * c.probe.alpha_g.norm_sqr();
        assert!((g - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn no_pump_no_emission() {
        let (b, pump, probe, vac) = setup(0.02);
        let s = s_total_single(&b, &pump.with_photon_number(0.0), &probe, &vac, 200.0).unwrap();
        assert_eq!(s.s_se_classical, 0.0);
        assert_eq!(s.s_se_vacuum, 0.0);
    }

    #[test]
    fn dark_dipoles_give_nothing() {
        let (mut b, pump, probe, vac) = setup(0.02);
        b.mu_alpha_g = 0.0;
        b.mu_beta_g = 0.0;
        b.mu_f_alpha = 0.0;
        b.mu_f_beta = 0.0;
        let s = s_total_single(&b, &pump, &probe, &vac, 200.0).unwrap();
        assert_eq!(s, SignalComponents::zero(200.0));
    }

    #[test]
    fn degenerate_vacuum_cross_term_doubles() {
        let (mut b, pump, probe, vac) = setup(0.0);
        b.omega_alpha = pump.omega_0;
        b.omega_beta = pump.omega_0;
        b.mu_alpha_g = 5.0 * DEBYE;
        b.mu_beta_g = 5.0 * DEBYE;
        let mut c = compute_couplings(&b, &pump, &probe, &vac);
        assert_eq!(c.delta_window, 1);
        let with = s_se(&c, &b, 200.0).unwrap().1;
        c.delta_window = 0;
        let without = s_se(&c, &b, 200.0).unwrap().1;
        assert!((with - 2.0 * without).abs() < 1e-12 * with.abs());
    }

    #[test]
    fn symmetric_dimer_bleach_uses_bright_state_only() {
        let spec = DimerSpec {
            omega_a: 2.4,
            omega_b: 2.4,
            coupling_j: 0.03,
            mu_ag: 5.0 * DEBYE,
            mu_bg: 5.0 * DEBYE,
        };
        let b = diagonalize_dimer(&spec);
        let pump = PulseSpec::new(2.4, 20.0, 1e6, 0.0, area());
        let vac = VacuumParams::for_probe(400.0, &pump).unwrap();
        let c = compute_couplings(&b, &pump, &pump, &vac);
        let expect = -c.pump.alpha_g.norm_sqr() * c.probe.alpha_g.norm_sqr();
        assert!((s_gsb(&c) - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn ensemble_of_one_is_single() {
        let (b, pump, probe, vac) = setup(0.02);
        let one = s_total_single(&b, &pump, &probe, &vac, 222.0).unwrap();
        let ens = s_total_ensemble(&b, &pump, &probe, &vac, 222.0, 1.0, 1.0).unwrap();
        assert!((one.s_total - ens.s_total).abs() < 1e-14 * one.s_total.abs());
    }

    #[test]
    fn ensemble_rejects_degenerate_window() {
        let (mut b, pump, probe, vac) = setup(0.0);
        b.omega_beta = b.omega_alpha;
        let r = s_total_ensemble(&b, &pump, &probe, &vac, 200.0, 4.0, 2.0);
        assert!(matches!(r, Err(Error::UnsupportedRegime(_))));
    }

    #[test]
    fn collinear_vacuum_is_quadratic() {
        let (b, pump, probe, vac) = setup(0.02);
        let c = compute_couplings(&b, &pump, &probe, &vac);
        let n = 37.0;
        let s = ensemble_from_couplings(&c, &b, 200.0, n * n, n).unwrap();
        let expect: f64 = -n * n
            * Exciton::BOTH
                .iter()
                .map(|&k| (c.vac(k).conj() * c.pump.ng(k)).norm_sqr())
                .sum::<f64>();
        assert!((s.s_se_vacuum - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn incoherent_ratio_matches_single() {
        let (b, pump, probe, vac) = setup(0.02);
        let c = compute_couplings(&b, &pump, &probe, &vac);
        let one = single_from_couplings(&c, &b, 200.0).unwrap();
        let s = ensemble_from_couplings(&c, &b, 200.0, 50.0, 50.0).unwrap();
        let r1 = one.s_se_classical / one.s_se_vacuum;
        let rn = s.s_se_classical / s.s_se_vacuum;
        assert!((r1 - rn).abs() < 1e-12 * r1.abs());
    }

    #[test]
    fn printed_se_term_breaks_the_cancellation() {
        let (b, pump, probe, vac) = setup(0.02);
        let c = compute_couplings(&b, &pump, &probe, &vac);
        let (x2, n) = (30.0, 12.0);
        let terms = ensemble_terms(&c, &b, 200.0, x2, n).unwrap();
        let closed = ensemble_closed_form(&c, &b, 200.0, x2, n).unwrap();
        let printed = terms.esa + printed_se_term(&c, &b, 200.0, x2) + terms.gsb;
        assert!((terms.total() - closed).abs() < 1e-12 * closed.abs());
        assert!((printed - closed).abs() > 1e-3 * closed.abs());
    }

    proptest! {
        #[test]
        fn signs_and_reality(
            j in -0.05f64..0.05, t in 140.0f64..600.0,
            np in 1.0f64..1e8, nq in 1.0f64..1e8,
        ) {
            let (b, pump, probe, vac) = setup(j);
            let s = s_total_single(&b, &pump.with_photon_number(np), &probe.with_photon_number(nq), &vac, t).unwrap();
            prop_assert!(s.s_esa >= 0.0);
            prop_assert!(s.s_se_classical <= 0.0);
            prop_assert!(s.s_se_vacuum <= 0.0);
            prop_assert!(s.s_gsb <= 0.0);
            let sum = s.s_esa + s.s_se_classical + s.s_se_vacuum + s.s_gsb;
            prop_assert_eq!(s.s_total, sum);
        }

        #[test]
        fn photon_number_scaling(j in -0.05f64..0.05, t in 140.0f64..600.0) {
            let (b, pump, probe, vac) = setup(j);
            let s = s_total_single(&b, &pump, &probe, &vac, t).unwrap();
            let sp = s_total_single(&b, &pump, &probe.with_photon_number(2.0 * probe.photon_number), &vac, t).unwrap();
            let sq = s_total_single(&b, &pump.with_photon_number(2.0 * pump.photon_number), &probe, &vac, t).unwrap();
            prop_assert!((sp.s_se_classical - 2.0 * s.s_se_classical).abs() <= 1e-12 * s.s_se_classical.abs());
            prop_assert!((sp.s_se_vacuum - s.s_se_vacuum).abs() <= 1e-12 * s.s_se_vacuum.abs());
            prop_assert!((sq.s_se_vacuum - 2.0 * s.s_se_vacuum).abs() <= 1e-12 * s.s_se_vacuum.abs());
            prop_assert!((sq.s_gsb - 2.0 * s.s_gsb).abs() <= 1e-12 * s.s_gsb.abs());
        }

        #[test]
        fn uncoupled_beats_cancel(
            mu_a in 1.0f64..8.0, mu_b in 1.0f64..8.0, t in 140.0f64..900.0,
        ) {
            let spec = DimerSpec {
                omega_a: nm_to_rad_per_fs(765.0),
                omega_b: nm_to_rad_per_fs(785.0),
                coupling_j: 0.0,
                mu_ag: mu_a * DEBYE,
                mu_bg: mu_b * DEBYE,
            };
            let b = diagonalize_dimer(&spec);
            let pump = PulseSpec::new(nm_to_rad_per_fs(775.0), 20.0, 1e6, 0.0, area());
            let vac = VacuumParams::for_probe(400.0, &pump).unwrap();
            let s0 = s_total_single(&b, &pump, &pump, &vac, 140.0).unwrap();
            let s1 = s_total_single(&b, &pump, &pump, &vac, t).unwrap();
            prop_assert!((s1.s_total - s0.s_total).abs() <= 1e-12 * s0.s_total.abs());
        }

        #[test]
        fn ensemble_paths_agree(
            j in 0.02f64..0.1, t in 140.0f64..600.0,
            n in 1.0f64..100.0, frac in 0.0f64..1.0,
        ) {
            let (b, pump, probe, vac) = setup(j);
            let c = compute_couplings(&b, &pump, &probe, &vac);
            let x2 = frac * n * n;
            let closed = ensemble_closed_form(&c, &b, t, x2, n).unwrap();
            let terms = ensemble_terms(&c, &b, t, x2, n).unwrap().total();
            let comps = ensemble_from_couplings(&c, &b, t, x2, n).unwrap().s_total;
            let scale = closed.abs().max(terms.abs());
            prop_assert!((closed - terms).abs() <= 1e-12 * scale);
            prop_assert!((closed - comps).abs() <= 1e-12 * scale);
        }
    }
}

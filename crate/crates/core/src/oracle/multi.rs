//! Direct evaluation for two or three molecules at explicit positions.
//!
//! Every molecule couples to the same classical pulse amplitudes, weighted
//! by `e^{±ik·r}`. Excited-state absorption is the norm of the amplitude on
//! each final matter configuration, so cross-molecule interference is kept
//! without any algebraic reduction.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::OracleContext;
use crate::constants::{FS, HBAR};
use crate::error::{invalid, Result};
use crate::exciton::Exciton;
use crate::field::PulseSpec;
use crate::operators::PulseId;
use crate::quadrature::TimeGrid;
use crate::signals::EnsembleTerms;

type C = Complex64;

const F_STATE: u8 = 2;

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// First-order field integral `∫dt e^{iωt} ε(t − t_j)` from sampled
/// rotating-frame field values, in V·s/m.
fn spectral_integral(grid: &TimeGrid, field: &[C], omega_0: f64, arrival: f64, omega: f64) -> C {
    let d = omega - omega_0;
    let s: C = grid
        .points
        .iter()
        .zip(&grid.weights)
        .zip(field)
        .map(|((&t, &w), f)| f * C::from_polar(w, d * t))
        .sum();
    s * C::from_polar(FS, omega * arrival)
}

struct Spectra {
    /// Pump on `g → n`.
    pump: [C; 2],
    /// Probe on `g → n`.
    probe_g: [C; 2],
    /// Probe on `n → f`.
    probe_f: [C; 2],
}

fn spectra(ctx: &OracleContext, t: f64) -> Result<Spectra> {
    let b = &ctx.basis;
    let n = ctx.cfg.time_points;
    let pp: &PulseSpec = &ctx.pump.pulse;
    let qp: &PulseSpec = &ctx.probe.modes.pulse;
    let gp = TimeGrid::symmetric(ctx.cfg.time_span * pp.sigma, n);
    let gq = TimeGrid::symmetric(ctx.cfg.time_span * qp.sigma, n);
    let fp = ctx.pump.eigen_field(PulseId::Pump, &gp)?;
    let fq = ctx.probe.modes.eigen_field(PulseId::Probe, &gq)?;
    let w = |e: Exciton| b.omega(e) - b.omega_g;
    Ok(Spectra {
        pump: Exciton::BOTH.map(|e| spectral_integral(&gp, &fp, pp.omega_0, 0.0, w(e))),
        probe_g: Exciton::BOTH.map(|e| spectral_integral(&gq, &fq, qp.omega_0, t, w(e))),
        probe_f: Exciton::BOTH.map(|e| spectral_integral(&gq, &fq, qp.omega_0, t, b.omega_f - b.omega(e))),
    })
}

/// Excited-state absorption, stimulated emission and bleach for molecules at
/// `positions` (m), pump centred at 0 and probe at `t`.
pub fn direct_ensemble(ctx: &OracleContext, positions: &[[f64; 3]], t: f64) -> Result<EnsembleTerms> {
    if positions.is_empty() || positions.len() > 3 {
        return Err(invalid("positions", format!("direct evaluation takes 1 to 3 molecules, got {}", positions.len())));
    }
    // Evaluating first also checks the delay.
    let single = ctx.evaluate(t)?;
    let b = &ctx.basis;
    let s = spectra(ctx, t)?;
    let kp = ctx.pump.pulse.wavevector();
    let kq = ctx.probe.modes.pulse.wavevector();
    let i_h = C::new(0.0, 1.0 / HBAR);

    let mut amps: BTreeMap<Vec<(usize, u8)>, C> = BTreeMap::new();
    for (i, ri) in positions.iter().enumerate() {
        let ph_p = C::from_polar(1.0, dot(&kp, ri));
        for m in Exciton::BOTH {
            let pump_amp = i_h * b.mu_ng(m) * s.pump[m.index()] * ph_p;
            for (j, rj) in positions.iter().enumerate() {
                if j == i {
                    continue;
                }
                let ph_q = C::from_polar(1.0, dot(&kq, rj));
                for m2 in Exciton::BOTH {
                    let probe_amp = i_h * b.mu_ng(m2) * s.probe_g[m2.index()] * ph_q;
                    let mut key = vec![(i, m.index() as u8), (j, m2.index() as u8)];
                    key.sort_unstable();
                    *amps.entry(key).or_default() += pump_amp * probe_amp;
                }
            }
        }
        let ph_pq = C::from_polar(1.0, dot(&kp, ri) + dot(&kq, ri));
        let f: C = Exciton::BOTH
            .iter()
            .map(|&m| b.mu_fn(m) * b.mu_ng(m) * s.probe_f[m.index()] * s.pump[m.index()])
            .sum();
        *amps.entry(vec![(i, F_STATE)]).or_default() += -f * ph_pq / (HBAR * HBAR);
    }
    let esa: f64 = amps.values().map(|a| a.norm_sqr()).sum();

    // Emission returns the matter to the ground state, so molecule j in the
    // ket interferes with molecule j' in the bra.
    let r = &ctx.fine;
    let vac = ctx.vacuum_modesum(t);
    let mut one = C::default();
    for m in Exciton::BOTH {
        for n in Exciton::BOTH {
            let (x, y) = (m.index(), n.index());
            let beat = C::from_polar(1.0, (b.omega(n) - b.omega(m)) * t);
            one -= b.mu_ng(m).powi(2) * b.mu_ng(n).powi(2) * r.pump[x][y] * (r.se_probe[x][y] * beat + vac[x][y]);
        }
    }
    let mut se = C::default();
    for rj in positions {
        for rj2 in positions {
            let d = [rj[0] - rj2[0], rj[1] - rj2[1], rj[2] - rj2[2]];
            let k = [kp[0] - kq[0], kp[1] - kq[1], kp[2] - kq[2]];
            se += C::from_polar(1.0, dot(&k, &d)) * one;
        }
    }
    let se = se.re / HBAR.powi(4);

    // Bleach: the pump goes up and down on molecule i, the probe acts on j
    // in both ket and bra.
    let mut gsb = 0.0;
    for ri in positions {
        let up = C::from_polar(1.0, dot(&kp, ri));
        for rj in positions {
            let q = C::from_polar(1.0, dot(&kq, rj));
            let w = (up * up.conj() * q * q.conj()).re;
            gsb += w * single.fine.gsb;
        }
    }

    Ok(EnsembleTerms { esa, se, gsb })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::nm_to_rad_per_fs;
    use crate::exciton::{diagonalize_dimer, DimerSpec};
    use crate::field::VacuumParams;
    use crate::oracle::{rel_dev, QuadratureConfig};
    use crate::signals::{compute_couplings, ensemble_terms, printed_se_term};
    use std::f64::consts::PI;

    const DEBYE: f64 = 3.335_64e-30;

    fn setup(dir: [f64; 3]) -> (OracleContext, crate::signals::CouplingSet) {
        let area = PI * (70e-6f64).powi(2) / 4.0;
        let spec = DimerSpec {
            omega_a: nm_to_rad_per_fs(765.0),
            omega_b: nm_to_rad_per_fs(785.0),
            coupling_j: 0.02,
            mu_ag: 6.0 * DEBYE,
            mu_bg: 4.0 * DEBYE,
        };
        let basis = diagonalize_dimer(&spec);
        let w0 = nm_to_rad_per_fs(775.0);
        let pump = PulseSpec::new(w0, 20.0, 1e6, 0.0, area);
        let mut probe = PulseSpec::new(w0 * 1.01, 25.0, 2e6, 0.0, area);
        probe.direction = dir;
        let vac = VacuumParams::for_probe(400.0, &probe).unwrap();
        let cfg = QuadratureConfig {
            mode_count: 256,
            ..Default::default()
        };
        let ctx = OracleContext::new(&basis, &pump, &probe, &cfg).unwrap();
        let c = compute_couplings(&basis, &pump, &probe, &vac);
        (ctx, c)
    }

    fn x_squared(ctx: &OracleContext, pos: &[[f64; 3]]) -> f64 {
        let kp = ctx.pump.pulse.wavevector();
        let kq = ctx.probe.modes.pulse.wavevector();
        let k = [kp[0] - kq[0], kp[1] - kq[1], kp[2] - kq[2]];
        pos.iter().map(|r| C::from_polar(1.0, dot(&k, r))).sum::<C>().norm_sqr()
    }

    #[test]
    fn matches_pair_sum_formulas() {
        let a = 0.3f64;
        let (ctx, c) = setup([a.sin(), 0.0, a.cos()]);
        let pos = [[0.0, 0.0, 0.0], [0.31e-6, -0.12e-6, 0.7e-6], [-0.45e-6, 0.2e-6, 1.3e-6]];
        for n in 1..=3 {
            let p = &pos[..n];
            let x2 = x_squared(&ctx, p);
            for t in [200.0, 277.0] {
                let direct = direct_ensemble(&ctx, p, t).unwrap();
                let formula = ensemble_terms(&c, &ctx.basis, t, x2, n as f64).unwrap();
                assert!(rel_dev(direct.esa, formula.esa) < 1e-3, "n={n} esa {direct:?} {formula:?}");
                assert!(rel_dev(direct.se, formula.se) < 1e-3, "n={n} se {direct:?} {formula:?}");
                assert!(rel_dev(direct.gsb, formula.gsb) < 1e-3, "n={n} gsb {direct:?} {formula:?}");
                if n > 1 {
                    let printed = printed_se_term(&c, &ctx.basis, t, x2);
                    assert!(rel_dev(direct.se, printed) > 1e-2);
                }
            }
        }
    }

    #[test]
    fn four_molecules_rejected() {
        let (ctx, _) = setup([0.0, 0.0, 1.0]);
        assert!(direct_ensemble(&ctx, &[[0.0; 3]; 4], 200.0).is_err());
    }
}

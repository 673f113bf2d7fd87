//! Mode-space correlation matrices and their time-domain projections.
//!
//! Everything runs in the frame rotating at the pulse carrier, so the time
//! grid only needs to resolve detunings.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::field::{gaussian_amplitudes, mode_coupling, CoherentAmplitudes, PulseSpec};
use crate::operators::{
    coherent_expectation, coherent_expectation_parts, Ladder, ModeLabel, OperatorString, PulseAmplitudes, PulseId,
};
use crate::quadrature::TimeGrid;

/// Dense square matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl ModeMatrix {
    fn build<F>(dim: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<Complex64> + Sync,
    {
        let rows: Vec<Vec<Complex64>> = (0..dim)
            .into_par_iter()
            .map(|l| (0..dim).map(|k| f(l, k)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(ModeMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn get(&self, l: usize, k: usize) -> Complex64 {
        self.data[l * self.dim + k]
    }

    /// `Σ_lk conj(x_l) M_lk y_k`.
    pub fn sesquilinear(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..self.dim {
            let row = &self.data[l * self.dim..(l + 1) * self.dim];
            let r: Complex64 = row.iter().zip(y).map(|(m, v)| m * v).sum();
            acc += x[l].conj() * r;
        }
        acc
    }

    /// `Σ_lk x_l M_lk y_k`.
    pub fn bilinear(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..self.dim {
            let row = &self.data[l * self.dim..(l + 1) * self.dim];
            let r: Complex64 = row.iter().zip(y).map(|(m, v)| m * v).sum();
            acc += x[l] * r;
        }
        acc
    }

    /// `Σ_lk x_l M_lk conj(y_k)`.
    pub fn bilinear_conj_right(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..self.dim {
            let row = &self.data[l * self.dim..(l + 1) * self.dim];
            let r: Complex64 = row.iter().zip(y).map(|(m, v)| m * v.conj()).sum();
            acc += x[l] * r;
        }
        acc
    }
}

/// One pulse's mode grid with the normally ordered two-point matrix
/// `⟨a_l† a_k⟩`.
#[derive(Debug, Clone)]
pub struct PulseModes {
    pub pulse: PulseSpec,
    pub amplitudes: CoherentAmplitudes,
    pub coupling: f64,
    pub detunings: Vec<f64>,
    pub normal: ModeMatrix,
}

/// Probe modes additionally carry the classical part of the antinormal
/// matrix `⟨a_l a_k†⟩`.
#[derive(Debug, Clone)]
pub struct ProbeModes {
    pub modes: PulseModes,
    pub anti_classical: ModeMatrix,
}

/// A uniform mode band with the commutator remainder of `⟨a_l a_k†⟩`. The
/// remainder does not depend on the state, so the band may be finer and
/// wider than the probe grid; its modes are taken empty.
#[derive(Debug, Clone)]
pub struct VacuumModes {
    pub freqs: Vec<f64>,
    pub spacing: f64,
    pub commutator: ModeMatrix,
}

fn amplitudes_for(pulse: &PulseSpec, span: f64, count: usize) -> Result<(CoherentAmplitudes, f64, Vec<f64>)> {
    let amps = gaussian_amplitudes(pulse, span, count)?;
    let g = mode_coupling(pulse.omega_0, amps.mode_spacing, pulse.area);
    let det = amps.mode_freqs.iter().map(|w| w - pulse.omega_0).collect();
    Ok((amps, g, det))
}

fn source(id: PulseId, amps: &CoherentAmplitudes) -> PulseAmplitudes<'_> {
    match id {
        PulseId::Pump => PulseAmplitudes {
            pump: Some(amps),
            probe: None,
        },
        PulseId::Probe => PulseAmplitudes {
            pump: None,
            probe: Some(amps),
        },
    }
}

impl PulseModes {
    pub fn new(id: PulseId, pulse: &PulseSpec, span: f64, count: usize) -> Result<Self> {
        let (amplitudes, coupling, detunings) = amplitudes_for(pulse, span, count)?;
        let src = source(id, &amplitudes);
        let label = |i| ModeLabel { pulse: id, index: i };
        let normal = ModeMatrix::build(count, |l, k| {
            let s = OperatorString::new(vec![Ladder::create(label(l)), Ladder::annihilate(label(k))]);
            coherent_expectation(&s, &src)
        })?;
        Ok(PulseModes {
            pulse: *pulse,
            amplitudes,
            coupling,
            detunings,
            normal,
        })
    }

    /// Mode-resolved first-order time integral
    /// `y_k = g Σ_τ w_τ e^{i(δ − Δ_k)τ}` for a detuning `δ` from the carrier.
    pub fn project(&self, grid: &TimeGrid, delta: f64) -> Vec<Complex64> {
        self.detunings
            .iter()
            .map(|&dk| {
                let s: Complex64 = grid
                    .points
                    .iter()
                    .zip(&grid.weights)
                    .map(|(&t, &w)| Complex64::from_polar(w, (delta - dk) * t))
                    .sum();
                s * self.coupling
            })
            .collect()
    }

    /// Coherent eigenvalue field `Σ_k g β_k e^{−iΔ_k τ}` in the rotating
    /// frame, with `β_k = ⟨a_k⟩` taken from the operator algebra.
    pub fn eigen_field(&self, id: PulseId, grid: &TimeGrid) -> Result<Vec<Complex64>> {
        let src = source(id, &self.amplitudes);
        let beta = (0..self.amplitudes.len())
            .map(|k| {
                let s = OperatorString::new(vec![Ladder::annihilate(ModeLabel { pulse: id, index: k })]);
                coherent_expectation(&s, &src)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(grid
            .points
            .iter()
            .map(|&t| {
                let s: Complex64 = beta
                    .iter()
                    .zip(&self.detunings)
                    .map(|(b, &dk)| b * Complex64::from_polar(1.0, -dk * t))
                    .sum();
                s * self.coupling
            })
            .collect())
    }

    /// Time-domain correlation `C̃(τ', τ) = Σ_lk g² e^{iΔ_l τ'} ⟨a_l† a_k⟩ e^{−iΔ_k τ}`
    /// on `grid × grid`, row index `τ'`.
    pub fn time_correlation(&self, grid: &TimeGrid) -> Vec<Vec<Complex64>> {
        let m = self.detunings.len();
        let n = grid.len();
        let u: Vec<Vec<Complex64>> = (0..m)
            .map(|k| {
                grid.points
                    .iter()
                    .map(|&t| Complex64::from_polar(self.coupling, -self.detunings[k] * t))
                    .collect()
            })
            .collect();
        // Z = M U, then C̃ = Uᴴ Z.
        let z: Vec<Vec<Complex64>> = (0..m)
            .into_par_iter()
            .map(|l| {
                let mut row = vec![Complex64::new(0.0, 0.0); n];
                for k in 0..m {
                    let mk = self.normal.get(l, k);
                    if mk == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (r, uk) in row.iter_mut().zip(&u[k]) {
                        *r += mk * uk;
                    }
                }
                row
            })
            .collect();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![Complex64::new(0.0, 0.0); n];
                for l in 0..m {
                    let c = u[l][i].conj();
                    for (r, zl) in row.iter_mut().zip(&z[l]) {
                        *r += c * zl;
                    }
                }
                row
            })
            .collect()
    }
}

impl ProbeModes {
    pub fn new(pulse: &PulseSpec, span: f64, count: usize) -> Result<Self> {
        let modes = PulseModes::new(PulseId::Probe, pulse, span, count)?;
        let src = source(PulseId::Probe, &modes.amplitudes);
        let label = ModeLabel::probe;
        let rows: Vec<Vec<(Complex64, Complex64)>> = (0..count)
            .into_par_iter()
            .map(|l| {
                (0..count)
                    .map(|k| {
                        let s = OperatorString::new(vec![Ladder::annihilate(label(l)), Ladder::create(label(k))]);
                        coherent_expectation_parts(&s, &src)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let classical = rows.into_iter().flatten().map(|(c, _)| c).collect();
        Ok(ProbeModes {
            modes,
            anti_classical: ModeMatrix {
                dim: count,
                data: classical,
            },
        })
    }
}

impl VacuumModes {
    /// Modes at `spacing` covering `[lo, hi]` (rad/fs).
    pub fn new(lo: f64, hi: f64, spacing: f64) -> Result<Self> {
        let dim = ((hi - lo) / spacing).ceil() as usize + 1;
        let freqs: Vec<f64> = (0..dim).map(|i| lo + i as f64 * spacing).collect();
        let src: BTreeMap<ModeLabel, Complex64> =
            (0..dim).map(|i| (ModeLabel::probe(i), Complex64::new(0.0, 0.0))).collect();
        let rows: Vec<Vec<Complex64>> = (0..dim)
            .into_par_iter()
            .map(|l| {
                (0..dim)
                    .map(|k| {
                        let s = OperatorString::new(vec![
                            Ladder::annihilate(ModeLabel::probe(l)),
                            Ladder::create(ModeLabel::probe(k)),
                        ]);
                        Ok(coherent_expectation_parts(&s, &src)?.1)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(VacuumModes {
            freqs,
            spacing,
            commutator: ModeMatrix {
                dim,
                data: rows.into_iter().flatten().collect(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pulse() -> PulseSpec {
        PulseSpec::new(2.43, 20.0, 1e6, 0.0, 3.8e-9)
    }

    #[test]
    fn normal_correlation_factorizes() {
        let m = PulseModes::new(PulseId::Pump, &pulse(), 5.0, 64).unwrap();
        let grid = TimeGrid::symmetric(120.0, 32);
        let f = m.eigen_field(PulseId::Pump, &grid).unwrap();
        let c = m.time_correlation(&grid);
        let scale = f.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                assert!((c[i][j] - f[i].conj() * f[j]).norm() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn antinormal_splits_into_field_and_vacuum() {
        let q = ProbeModes::new(&pulse(), 5.0, 32).unwrap();
        let a = &q.modes.amplitudes;
        for l in 0..32 {
            for k in 0..32 {
                let cl = a.eigenvalue(l) * a.eigenvalue(k).conj();
                assert!((q.anti_classical.get(l, k) - cl).norm() < 1e-12 * (1.0 + cl.norm()));
            }
        }
        let first = a.mode_freqs[0];
        let v = VacuumModes::new(first, first + 31.0 * a.mode_spacing, a.mode_spacing).unwrap();
        assert_eq!(v.freqs.len(), 32);
        for l in 0..32 {
            for k in 0..32 {
                let want = if l == k { 1.0 } else { 0.0 };
                assert_eq!(v.commutator.get(l, k), Complex64::new(want, 0.0));
            }
        }
    }
}

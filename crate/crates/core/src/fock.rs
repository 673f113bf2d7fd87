//! Occupation-number verifier for the symbolic operator algebra.
//!
//! States are sparse maps from occupation vectors to amplitudes. Ladder
//! operators act exactly, with no cutoff on intermediate states, so the
//! matrix of a product is never corrupted by truncation at the edge of the
//! space. Truncation only enters through the input columns and the coherent
//! kets.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{LadderKind, ModeLabel, NormalForm, OperatorString};

pub type Occupation = Vec<u32>;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseState(pub HashMap<Occupation, Complex64>);

impl SparseState {
    pub fn basis(occ: Occupation) -> Self {
        let mut m = HashMap::new();
        m.insert(occ, Complex64::new(1.0, 0.0));
        SparseState(m)
    }

    pub fn inner(&self, other: &SparseState) -> Complex64 {
        let (small, large, flip) = if self.0.len() <= other.0.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in &small.0 {
            if let Some(b) = large.0.get(k) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        acc
    }

    fn add_scaled(&mut self, other: &SparseState, c: Complex64) {
        for (k, v) in &other.0 {
            *self.0.entry(k.clone()).or_insert(Complex64::new(0.0, 0.0)) += c * v;
        }
    }
}

/// Fixed list of modes, one occupation slot each.
#[derive(Debug, Clone)]
pub struct FockSpace {
    modes: Vec<ModeLabel>,
}

impl FockSpace {
    pub fn new(modes: Vec<ModeLabel>) -> Self {
        FockSpace { modes }
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    fn slot(&self, m: ModeLabel) -> Result<usize> {
        self.modes
            .iter()
            .position(|&x| x == m)
            .ok_or_else(|| Error::UnknownMode(m.to_string()))
    }

    /// Apply `s` exactly. The rightmost factor acts first.
    pub fn apply(&self, s: &OperatorString, state: &SparseState) -> Result<SparseState> {
        let slots = s
            .factors
            .iter()
            .map(|l| self.slot(l.mode))
            .collect::<Result<Vec<_>>>()?;
        let mut out = HashMap::with_capacity(state.0.len());
        'entry: for (occ, amp) in &state.0 {
            let mut occ = occ.clone();
            let mut amp = *amp * s.scalar;
            for (l, &slot) in s.factors.iter().zip(&slots).rev() {
                let n = occ[slot];
                match l.kind {
                    LadderKind::Creation => {
                        amp *= ((n + 1) as f64).sqrt();
                        occ[slot] = n + 1;
                    }
                    LadderKind::Annihilation => {
                        if n == 0 {
                            continue 'entry;
                        }
                        amp *= (n as f64).sqrt();
                        occ[slot] = n - 1;
                    }
                }
            }
            // Ladder strings map basis states injectively, so no merging.
            out.insert(occ, amp);
        }
        Ok(SparseState(out))
    }

    pub fn apply_normal_form(&self, nf: &NormalForm, state: &SparseState) -> Result<SparseState> {
        let mut acc = SparseState::default();
        for t in &nf.terms {
            let part = self.apply(t, state)?;
            acc.add_scaled(&part, Complex64::new(1.0, 0.0));
        }
        Ok(acc)
    }

    /// All occupation vectors with every mode at most `cutoff`.
    pub fn basis_states(&self, cutoff: u32) -> Vec<Occupation> {
        let d = self.modes.len();
        let mut out = vec![vec![0u32; d]];
        for slot in 0..d {
            let mut next = Vec::with_capacity(out.len() * (cutoff as usize + 1));
            for occ in &out {
                for n in 0..=cutoff {
                    let mut o = occ.clone();
                    o[slot] = n;
                    next.push(o);
                }
            }
            out = next;
        }
        out
    }

    /// Largest elementwise difference between the matrices of `s` and `nf`
    /// over input columns with occupations up to `cutoff`.
    pub fn max_deviation(&self, s: &OperatorString, nf: &NormalForm, cutoff: u32) -> Result<f64> {
        let mut worst = 0.0f64;
        for occ in self.basis_states(cutoff) {
            let col = SparseState::basis(occ);
            let a = self.apply(s, &col)?;
            let b = self.apply_normal_form(nf, &col)?;
            for (k, va) in &a.0 {
                let vb = b.0.get(k).copied().unwrap_or_default();
                worst = worst.max((va - vb).norm());
            }
            for (k, vb) in &b.0 {
                if !a.0.contains_key(k) {
                    worst = worst.max(vb.norm());
                }
            }
        }
        Ok(worst)
    }

    /// Product coherent state truncated at `cutoff` photons per mode. The
    /// amplitudes keep their exact `e^{−|α|²/2} αⁿ/√n!` values.
    pub fn coherent_state(&self, alphas: &[Complex64], cutoff: u32) -> Result<SparseState> {
        if alphas.len() != self.modes.len() {
            return Err(Error::InvalidParameter {
                name: "alphas",
                reason: format!("expected {} amplitudes, got {}", self.modes.len(), alphas.len()),
            });
        }
        let per_mode: Vec<Vec<Complex64>> = alphas
            .iter()
            .map(|a| {
                let mut c = Vec::with_capacity(cutoff as usize + 1);
                let mut v = Complex64::new((-0.5 * a.norm_sqr()).exp(), 0.0);
                for n in 0..=cutoff {
                    if n > 0 {
                        v *= a / (n as f64).sqrt();
                    }
                    c.push(v);
                }
                c
            })
            .collect();
        let mut m = HashMap::new();
        for occ in self.basis_states(cutoff) {
            let amp = occ
                .iter()
                .zip(&per_mode)
                .fold(Complex64::new(1.0, 0.0), |acc, (&n, c)| acc * c[n as usize]);
            m.insert(occ, amp);
        }
        Ok(SparseState(m))
    }

    /// `⟨ψ|s|ψ⟩` for the truncated coherent state `ψ`.
    pub fn coherent_expectation(&self, s: &OperatorString, alphas: &[Complex64], cutoff: u32) -> Result<Complex64> {
        let psi = self.coherent_state(alphas, cutoff)?;
        let s_psi = self.apply(s, &psi)?;
        Ok(psi.inner(&s_psi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{normal_order, Ladder};

    fn modes(n: usize) -> Vec<ModeLabel> {
        (0..n).map(ModeLabel::pump).collect()
    }

    #[test]
    fn creation_then_annihilation() {
        let fs = FockSpace::new(modes(1));
        let s = OperatorString::new(vec![
            Ladder::annihilate(ModeLabel::pump(0)),
            Ladder::create(ModeLabel::pump(0)),
        ]);
        let out = fs.apply(&s, &SparseState::basis(vec![3])).unwrap();
        assert!((out.0[&vec![3]] - Complex64::new(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn no_edge_artefacts() {
        // a a† on the top truncated level must still give n + 1.
        let fs = FockSpace::new(modes(2));
        let s = OperatorString::new(vec![
            Ladder::annihilate(ModeLabel::pump(1)),
            Ladder::create(ModeLabel::pump(1)),
        ]);
        let nf = normal_order(&s);
        assert!(fs.max_deviation(&s, &nf, 8).unwrap() < 1e-12);
    }

    #[test]
    fn four_operator_identity_two_modes() {
        let m0 = ModeLabel::pump(0);
        let m1 = ModeLabel::pump(1);
        let s = OperatorString::new(vec![
            Ladder::annihilate(m0),
            Ladder::create(m1),
            Ladder::annihilate(m1),
            Ladder::create(m0),
        ]);
        let nf = normal_order(&s);
        let fs = FockSpace::new(vec![m0, m1]);
        assert!(fs.max_deviation(&s, &nf, 6).unwrap() < 1e-10);
    }

    #[test]
    fn coherent_number_expectation() {
        let fs = FockSpace::new(modes(1));
        let alpha = Complex64::new(0.5, 0.3);
        let n = OperatorString::new(vec![
            Ladder::create(ModeLabel::pump(0)),
            Ladder::annihilate(ModeLabel::pump(0)),
        ]);
        let v = fs.coherent_expectation(&n, &[alpha], 30).unwrap();
        assert!((v.re - alpha.norm_sqr()).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn basis_enumeration() {
        let fs = FockSpace::new(modes(3));
        assert_eq!(fs.basis_states(8).len(), 729);
    }
}

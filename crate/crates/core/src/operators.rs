//! Symbolic bosonic ladder-operator strings, normal ordering, and
//! coherent-state expectation values.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::CoherentAmplitudes;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PulseId {
    Pump,
    Probe,
}

/// A mode is a pulse plus an index into that pulse's grid, so modes of
/// different pulses commute by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeLabel {
    pub pulse: PulseId,
    pub index: usize,
}

impl ModeLabel {
    pub fn pump(index: usize) -> Self {
        ModeLabel { pulse: PulseId::Pump, index }
    }

    pub fn probe(index: usize) -> Self {
        ModeLabel { pulse: PulseId::Probe, index }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pulse {
            PulseId::Pump => write!(f, "P{}", self.index),
            PulseId::Probe => write!(f, "P'{}", self.index),
        }
    }
}

/// Creation sorts before annihilation, which is what normal order means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LadderKind {
    Creation,
    Annihilation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ladder {
    pub kind: LadderKind,
    pub mode: ModeLabel,
}

impl Ladder {
    pub fn create(mode: ModeLabel) -> Self {
        Ladder {
            kind: LadderKind::Creation,
            mode,
        }
    }

    pub fn annihilate(mode: ModeLabel) -> Self {
        Ladder {
            kind: LadderKind::Annihilation,
            mode,
        }
    }

    pub fn dagger(self) -> Self {
        let kind = match self.kind {
            LadderKind::Creation => LadderKind::Annihilation,
            LadderKind::Annihilation => LadderKind::Creation,
        };
        Ladder { kind, mode: self.mode }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LadderKind::Creation => write!(f, "a†[{}]", self.mode),
            LadderKind::Annihilation => write!(f, "a[{}]", self.mode),
        }
    }
}

/// Product of ladder operators written left to right; the rightmost factor
/// acts first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorString {
    pub factors: Vec<Ladder>,
    pub scalar: Complex64,
}

impl OperatorString {
    pub fn new(factors: Vec<Ladder>) -> Self {
        OperatorString {
            factors,
            scalar: Complex64::new(1.0, 0.0),
        }
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        self.scalar *= c;
        self
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Hermitian adjoint.
    pub fn dagger(&self) -> Self {
        OperatorString {
            factors: self.factors.iter().rev().map(|l| l.dagger()).collect(),
            scalar: self.scalar.conj(),
        }
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.factors
            .windows(2)
            .all(|w| !(w[0].kind == LadderKind::Annihilation && w[1].kind == LadderKind::Creation))
    }

    /// Product `self · other`.
    pub fn then(&self, other: &OperatorString) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        OperatorString {
            factors,
            scalar: self.scalar * other.scalar,
        }
    }
}

impl fmt::Display for OperatorString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.scalar)?;
        for l in &self.factors {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// Exact normally ordered expansion. Each term's `scalar` is its coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalForm {
    pub terms: Vec<OperatorString>,
}

impl NormalForm {
    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(|t| t.len()).max().unwrap_or(0)
    }
}

/// Normal-order `s` by repeatedly swapping the leftmost `a_l a_k†` pair into
/// `a_k† a_l + δ_lk`. Operators of one kind commute, so each finished term is
/// sorted by mode and like terms are merged.
pub fn normal_order(s: &OperatorString) -> NormalForm {
    let mut done: BTreeMap<Vec<Ladder>, Complex64> = BTreeMap::new();
    let mut work: Vec<(Vec<Ladder>, Complex64)> = vec![(s.factors.clone(), s.scalar)];
    while let Some((mut f, c)) = work.pop() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let swap = f
            .windows(2)
            .position(|w| w[0].kind == LadderKind::Annihilation && w[1].kind == LadderKind::Creation);
        match swap {
            None => {
                f.sort();
                *done.entry(f).or_insert(Complex64::new(0.0, 0.0)) += c;
            }
            Some(i) => {
                if f[i].mode == f[i + 1].mode {
                    let mut contracted = Vec::with_capacity(f.len() - 2);
                    contracted.extend_from_slice(&f[..i]);
                    contracted.extend_from_slice(&f[i + 2..]);
                    work.push((contracted, c));
                }
                f.swap(i, i + 1);
                work.push((f, c));
            }
        }
    }
    let terms = done
        .into_iter()
        .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
        .map(|(factors, scalar)| OperatorString { factors, scalar })
        .collect();
    NormalForm { terms }
}

/// Anything that can supply the coherent eigenvalue `α` of a mode.
pub trait AmplitudeSource {
    fn amplitude(&self, mode: ModeLabel) -> Option<Complex64>;
}

impl AmplitudeSource for HashMap<ModeLabel, Complex64> {
    fn amplitude(&self, mode: ModeLabel) -> Option<Complex64> {
        self.get(&mode).copied()
    }
}

impl AmplitudeSource for BTreeMap<ModeLabel, Complex64> {
    fn amplitude(&self, mode: ModeLabel) -> Option<Complex64> {
        self.get(&mode).copied()
    }
}

/// Pump and probe grids as an amplitude source. The coherent eigenvalue of
/// mode `k` is the sampled density times `√Δω`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PulseAmplitudes<'a> {
    pub pump: Option<&'a CoherentAmplitudes>,
    pub probe: Option<&'a CoherentAmplitudes>,
}

impl AmplitudeSource for PulseAmplitudes<'_> {
    fn amplitude(&self, mode: ModeLabel) -> Option<Complex64> {
        let grid = match mode.pulse {
            PulseId::Pump => self.pump?,
            PulseId::Probe => self.probe?,
        };
        (mode.index < grid.len()).then(|| grid.eigenvalue(mode.index))
    }
}

fn evaluate_term<A: AmplitudeSource + ?Sized>(t: &OperatorString, amps: &A) -> Result<Complex64> {
    let mut v = t.scalar;
    for l in &t.factors {
        let a = amps
            .amplitude(l.mode)
            .ok_or_else(|| Error::UnknownMode(l.mode.to_string()))?;
        v *= match l.kind {
            LadderKind::Creation => a.conj(),
            LadderKind::Annihilation => a,
        };
    }
    Ok(v)
}

/// `⟨{α}| s |{α}⟩` for a multimode coherent state.
pub fn coherent_expectation<A: AmplitudeSource + ?Sized>(s: &OperatorString, amps: &A) -> Result<Complex64> {
    let (classical, commutator) = coherent_expectation_parts(s, amps)?;
    Ok(classical + commutator)
}

/// Split the expectation into the full-degree (classical) terms and the
/// lower-degree terms generated by commutators.
pub fn coherent_expectation_parts<A: AmplitudeSource + ?Sized>(
    s: &OperatorString,
    amps: &A,
) -> Result<(Complex64, Complex64)> {
    let nf = normal_order(s);
    let mut classical = Complex64::new(0.0, 0.0);
    let mut commutator = Complex64::new(0.0, 0.0);
    for t in &nf.terms {
        let v = evaluate_term(t, amps)?;
        if t.len() == s.len() {
            classical += v;
        } else {
            commutator += v;
        }
    }
    Ok((classical, commutator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn a(k: usize) -> Ladder {
        Ladder::annihilate(ModeLabel::pump(k))
    }

    fn ad(k: usize) -> Ladder {
        Ladder::create(ModeLabel::pump(k))
    }

    #[test]
    fn single_commutator() {
        let nf = normal_order(&OperatorString::new(vec![a(0), ad(0)]));
        assert_eq!(nf.terms.len(), 2);
        assert_eq!(nf.terms[0].factors, Vec::<Ladder>::new());
        assert_eq!(nf.terms[0].scalar, c(1.0));
        assert_eq!(nf.terms[1].factors, vec![ad(0), a(0)]);
    }

    #[test]
    fn distinct_modes_commute() {
        let nf = normal_order(&OperatorString::new(vec![a(0), ad(1)]));
        assert_eq!(nf.terms.len(), 1);
        assert_eq!(nf.terms[0].factors, vec![ad(1), a(0)]);
    }

    #[test]
    fn pump_and_probe_modes_commute() {
        let p = ModeLabel::pump(3);
        let q = ModeLabel::probe(3);
        let nf = normal_order(&OperatorString::new(vec![Ladder::annihilate(p), Ladder::create(q)]));
        assert_eq!(nf.terms.len(), 1);
    }

    #[test]
    fn four_factor_expansion() {
        let s = OperatorString::new(vec![a(0), ad(0), a(1), ad(1)]);
        let nf = normal_order(&s);
        // (a0†a0 + 1)(a1†a1 + 1) has four terms.
        assert_eq!(nf.terms.len(), 4);
        assert!(nf.terms.iter().all(|t| t.is_normal_ordered()));
        assert!(nf.terms.iter().all(|t| t.scalar == c(1.0)));
    }

    #[test]
    fn number_and_antinormal_expectations() {
        let mut amps = HashMap::new();
        let alpha = Complex64::new(0.3, -1.2);
        amps.insert(ModeLabel::pump(0), alpha);
        let n = coherent_expectation(&OperatorString::new(vec![ad(0), a(0)]), &amps).unwrap();
        assert!((n - alpha.norm_sqr()).norm() < 1e-15);
        let (cl, cm) = coherent_expectation_parts(&OperatorString::new(vec![a(0), ad(0)]), &amps).unwrap();
        assert!((cl - alpha.norm_sqr()).norm() < 1e-15);
        assert_eq!(cm, c(1.0));
    }

    #[test]
    fn unknown_mode_is_an_error() {
        let amps: HashMap<ModeLabel, Complex64> = HashMap::new();
        let r = coherent_expectation(&OperatorString::new(vec![a(7)]), &amps);
        assert!(matches!(r, Err(Error::UnknownMode(_))));
    }

    fn arb_string() -> impl Strategy<Value = OperatorString> {
        let ladder = (0usize..3, any::<bool>(), any::<bool>()).prop_map(|(k, probe, cr)| {
            let mode = if probe { ModeLabel::probe(k) } else { ModeLabel::pump(k) };
            if cr {
                Ladder::create(mode)
            } else {
                Ladder::annihilate(mode)
            }
        });
        (prop::collection::vec(ladder, 0..=6), -2.0f64..2.0, -2.0f64..2.0)
            .prop_map(|(f, re, im)| OperatorString::new(f).scaled(Complex64::new(re, im)))
    }

    fn amplitudes() -> HashMap<ModeLabel, Complex64> {
        let mut m = HashMap::new();
        for k in 0..3 {
            m.insert(ModeLabel::pump(k), Complex64::new(0.4 * k as f64 - 0.3, 0.2 + 0.1 * k as f64));
            m.insert(ModeLabel::probe(k), Complex64::new(0.7 - 0.2 * k as f64, -0.5));
        }
        m
    }

    proptest! {
        #[test]
        fn normal_form_terms_are_ordered(s in arb_string()) {
            let nf = normal_order(&s);
            prop_assert!(nf.terms.iter().all(|t| t.is_normal_ordered()));
            prop_assert!(nf.max_degree() <= s.len());
        }

        #[test]
        fn normal_order_is_idempotent(s in arb_string()) {
            let nf = normal_order(&s);
            for t in &nf.terms {
                let again = normal_order(t);
                prop_assert_eq!(again.terms.len(), 1);
                prop_assert_eq!(&again.terms[0], t);
            }
        }

        #[test]
        fn expectation_of_adjoint_is_conjugate(s in arb_string()) {
            let amps = amplitudes();
            let e = coherent_expectation(&s, &amps).unwrap();
            let ed = coherent_expectation(&s.dagger(), &amps).unwrap();
            prop_assert!((e.conj() - ed).norm() <= 1e-10 * (1.0 + e.norm()));
        }

        #[test]
        fn distinct_pulses_factorize(s in arb_string()) {
            let amps = amplitudes();
            let pump: Vec<Ladder> = s.factors.iter().copied().filter(|l| l.mode.pulse == PulseId::Pump).collect();
            let probe: Vec<Ladder> = s.factors.iter().copied().filter(|l| l.mode.pulse == PulseId::Probe).collect();
            let whole = coherent_expectation(&s, &amps).unwrap();
            let ep = coherent_expectation(&OperatorString::new(pump), &amps).unwrap();
            let eq = coherent_expectation(&OperatorString::new(probe), &amps).unwrap();
            let prod = s.scalar * ep * eq;
            prop_assert!((whole - prod).norm() <= 1e-10 * (1.0 + whole.norm()));
        }
    }
}

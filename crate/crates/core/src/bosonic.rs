//! Two-photon Fock-space machinery: beam splitters acting on
//! indistinguishable photons, Hong–Ou–Mandel bunching, and coincidence
//! post-selection.
//!
//! Bunching-based post-selection is a different mechanism from the
//! annihilation projector in [`crate::measurement`]: the photons are never
//! removed, only filtered by which detectors fire. Both are exposed so the
//! two can be compared directly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use crate::amplitude::{ExactScalar, Rational, Scalar};
use crate::error::{Error, Result};
use crate::optics::BeamSplitter;
use crate::state::{Arm, BasisKet, PathLabel, StateVector};

/// Largest total photon number a [`BosonicState`] may carry.
pub const MAX_PHOTONS: u32 = 4;

/// Occupation number per bosonic mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockKet(pub Vec<u32>);

impl FockKet {
    pub fn photon_number(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn occupation(&self, mode: usize) -> u32 {
        self.0[mode]
    }
}

impl fmt::Display for FockKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let occ: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "|{}>", occ.join(","))
    }
}

/// Fixed-photon-number superposition over Fock kets.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonicState<A: Scalar> {
    modes: usize,
    photons: u32,
    amps: BTreeMap<FockKet, A>,
    norm_sq: A::Real,
}

impl<A: Scalar> BosonicState<A> {
    pub fn from_terms(modes: usize, terms: impl IntoIterator<Item = (FockKet, A)>) -> Result<Self> {
        let mut amps: BTreeMap<FockKet, A> = BTreeMap::new();
        let mut photons = None;
        for (ket, amp) in terms {
            if ket.0.len() != modes {
                return Err(Error::InvalidMode {
                    index: ket.0.len(),
                    modes,
                });
            }
            let n = ket.photon_number();
            if n > MAX_PHOTONS {
                return Err(Error::PhotonCap(n));
            }
            if photons.is_some_and(|p| p != n) {
                return Err(Error::UnexpectedInput(format!(
                    "mixed photon numbers {} and {n}",
                    photons.unwrap_or_default()
                )));
            }
            photons = Some(n);
            let next = match amps.remove(&ket) {
                Some(prev) => prev + amp,
                None => amp,
            };
            amps.insert(ket, next);
        }
        amps.retain(|_, a| !a.is_zero());
        let norm_sq = amps
            .values()
            .fold(A::real_zero(), |acc, a| acc + a.norm_sq());
        Ok(Self {
            modes,
            photons: photons.unwrap_or(0),
            amps,
            norm_sq,
        })
    }

    pub fn fock(occupations: &[u32]) -> Result<Self> {
        Self::from_terms(
            occupations.len(),
            [(FockKet(occupations.to_vec()), A::one())],
        )
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photon_number(&self) -> u32 {
        self.photons
    }

    pub fn amplitude(&self, ket: &FockKet) -> A {
        self.amps.get(ket).cloned().unwrap_or_else(A::zero)
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&FockKet, &A)> {
        self.amps.iter()
    }

    pub fn norm_sq(&self) -> &A::Real {
        &self.norm_sq
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn probability(&self, mut predicate: impl FnMut(&FockKet) -> bool) -> Result<A::Real> {
        if self.is_empty() {
            return Err(Error::EmptyState);
        }
        let weight = self
            .amps
            .iter()
            .filter(|(k, _)| predicate(k))
            .fold(A::real_zero(), |acc, (_, a)| acc + a.norm_sq());
        Ok(weight / self.norm_sq.clone())
    }

    fn check_mode(&self, index: usize) -> Result<()> {
        if index < self.modes {
            Ok(())
        } else {
            Err(Error::InvalidMode {
                index,
                modes: self.modes,
            })
        }
    }
}

fn factorial(n: u32) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn binomial(n: u32, k: u32) -> Rational {
    let b = factorial(n) / (factorial(k) * factorial(n - k));
    Rational::from_integer(b.into())
}

fn power<A: Scalar>(base: &A, exp: u32) -> A {
    (0..exp).fold(A::one(), |acc, _| acc * base.clone())
}

/// Balanced beam splitter on modes `(a, b)` with the reflection-`i`
/// convention: `a† → (a† + i b†)/√2`, `b† → (i a† + b†)/√2`.
///
/// Each input ket `(a†)^na (b†)^nb / √(na! nb!) |0⟩` is expanded binomially;
/// the output monomial `(a†)^m (b†)^n |0⟩` contributes `√(m! n!) |m, n⟩`.
pub fn apply_bs_bosonic<A: Scalar>(
    state: &BosonicState<A>,
    a: usize,
    b: usize,
) -> Result<BosonicState<A>> {
    state.check_mode(a)?;
    state.check_mode(b)?;
    if a == b {
        return Err(Error::UnexpectedInput(format!(
            "beam splitter on a single mode {a}"
        )));
    }
    let i = A::imag_unit();
    let r = A::frac_1_sqrt_2();
    let mut terms = Vec::new();
    for (ket, amp) in &state.amps {
        let (na, nb) = (ket.0[a], ket.0[b]);
        let scale = amp.clone() * power(&r, na + nb);
        for k in 0..=na {
            for l in 0..=nb {
                let m = k + l;
                let n = na + nb - m;
                let ratio = Rational::new(
                    (factorial(m) * factorial(n)).into(),
                    (factorial(na) * factorial(nb)).into(),
                );
                let root = A::sqrt_rational(&ratio)
                    .ok_or_else(|| Error::NotRepresentable(format!("sqrt({ratio})")))?;
                let coef = A::from_rational(&(binomial(na, k) * binomial(nb, l)))?
                    * power(&i, (na - k) + l)
                    * root;
                let mut out = ket.clone();
                out.0[a] = m;
                out.0[b] = n;
                terms.push((out, scale.clone() * coef));
            }
        }
    }
    BosonicState::from_terms(state.modes, terms)
}

/// Keeps kets with exactly one photon in each of `modes`.
pub fn coincidence_postselect<A: Scalar>(
    state: &BosonicState<A>,
    modes: (usize, usize),
) -> Result<(BosonicState<A>, A::Real)> {
    state.check_mode(modes.0)?;
    state.check_mode(modes.1)?;
    if state.is_empty() {
        return Err(Error::EmptyState);
    }
    let kept = BosonicState::from_terms(
        state.modes,
        state
            .amps
            .iter()
            .filter(|(k, _)| k.occupation(modes.0) == 1 && k.occupation(modes.1) == 1)
            .map(|(k, a)| (k.clone(), a.clone())),
    )?;
    if kept.is_empty() {
        return Err(Error::NoCoincidences);
    }
    let survival = kept.norm_sq.clone() / state.norm_sq.clone();
    Ok((kept, survival))
}

/// `|1,1⟩` through one balanced beam splitter, then the two-detector
/// coincidence probability.
pub fn hom_output<A: Scalar>() -> BosonicState<A> {
    let input = BosonicState::<A>::fock(&[1, 1]).expect("two modes, two photons");
    apply_bs_bosonic(&input, 0, 1).expect("two-photon amplitudes are representable")
}

pub fn hom_coincidence_probability() -> Rational {
    let out = hom_output::<ExactScalar>();
    out.probability(|k| k.0 == [1, 1])
        .ok()
        .and_then(|p| p.to_rational())
        .expect("two-photon probabilities are rational")
}

/// The same experiment with the two photons made distinguishable: each one
/// is a separate species traversing its own copy of the beam splitter.
pub fn distinguishable_output<A: Scalar>() -> StateVector<A> {
    // photon 1 enters port u, photon 2 port v; outputs c, d
    let input = StateVector::basis(BasisKet::pair(PathLabel::U, PathLabel::V));
    let one = BeamSplitter::second(Arm::Plus)
        .apply(&input)
        .expect("no aliasing on fresh ports");
    BeamSplitter::second(Arm::Minus)
        .apply(&one)
        .expect("no aliasing on fresh ports")
}

pub fn distinguishable_coincidence_probability() -> Rational {
    let out = distinguishable_output::<ExactScalar>();
    out.probability(|k| matches!(k, BasisKet::Pair { plus, minus } if plus != minus))
        .ok()
        .and_then(|p| p.to_rational())
        .expect("single-photon probabilities are rational")
}

//! Basis labels and state vectors for the positron/electron pair.
//!
//! Vacuum input ports of the first beam splitters are not modeled; they never
//! carry amplitude in this experiment.

mod density;

pub use density::{DensityMatrix, Operator};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use num_complex::Complex64;

use crate::amplitude::{ExactScalar, Scalar};
use crate::error::{Error, Result};

/// Path or detector mode of one interferometer arm.
///
/// `S` is the source port, `U`/`V` the internal paths, `C`/`D` the detectors.
/// The derived order is the canonical basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathLabel {
    S,
    U,
    V,
    C,
    D,
}

impl PathLabel {
    pub const ALL: [PathLabel; 5] = [Self::S, Self::U, Self::V, Self::C, Self::D];
}

impl fmt::Display for PathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathLabel::S => "S",
            PathLabel::U => "u",
            PathLabel::V => "v",
            PathLabel::C => "c",
            PathLabel::D => "d",
        })
    }
}

/// The positron (`Plus`) or electron (`Minus`) interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arm {
    Plus,
    Minus,
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arm::Plus => "e+",
            Arm::Minus => "e-",
        })
    }
}

/// Joint outcome label. `Absorbed` is the annihilation photon and sorts last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKet {
    Pair { plus: PathLabel, minus: PathLabel },
    Absorbed,
}

impl BasisKet {
    pub const fn pair(plus: PathLabel, minus: PathLabel) -> Self {
        BasisKet::Pair { plus, minus }
    }

    /// Label carried by `arm`, `None` for the absorbed branch.
    pub fn label(&self, arm: Arm) -> Option<PathLabel> {
        match (*self, arm) {
            (BasisKet::Pair { plus, .. }, Arm::Plus) => Some(plus),
            (BasisKet::Pair { minus, .. }, Arm::Minus) => Some(minus),
            (BasisKet::Absorbed, _) => None,
        }
    }

    pub fn with_label(&self, arm: Arm, label: PathLabel) -> Self {
        match (*self, arm) {
            (BasisKet::Pair { minus, .. }, Arm::Plus) => BasisKet::pair(label, minus),
            (BasisKet::Pair { plus, .. }, Arm::Minus) => BasisKet::pair(plus, label),
            (BasisKet::Absorbed, _) => BasisKet::Absorbed,
        }
    }
}

impl fmt::Display for BasisKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKet::Pair { plus, minus } => write!(f, "e+:{plus} e-:{minus}"),
            BasisKet::Absorbed => f.write_str("GAMMA"),
        }
    }
}

/// Sparse state vector with an unnormalized amplitude per ket and a cached
/// squared norm. Exact zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<A: Scalar> {
    amps: BTreeMap<BasisKet, A>,
    norm_sq: A::Real,
}

impl<A: Scalar> Default for StateVector<A> {
    fn default() -> Self {
        Self {
            amps: BTreeMap::new(),
            norm_sq: A::real_zero(),
        }
    }
}

impl<A: Scalar> StateVector<A> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(ket: BasisKet) -> Self {
        Self::from_terms([(ket, A::one())])
    }

    /// Sums repeated kets and drops zero amplitudes.
    pub fn from_terms(terms: impl IntoIterator<Item = (BasisKet, A)>) -> Self {
        let mut amps: BTreeMap<BasisKet, A> = BTreeMap::new();
        for (ket, amp) in terms {
            match amps.remove(&ket) {
                Some(prev) => {
                    amps.insert(ket, prev + amp);
                }
                None => {
                    amps.insert(ket, amp);
                }
            }
        }
        Self::from_map(amps)
    }

    fn from_map(mut amps: BTreeMap<BasisKet, A>) -> Self {
        amps.retain(|_, a| !a.is_zero());
        let norm_sq = amps
            .values()
            .fold(A::real_zero(), |acc, a| acc + a.norm_sq());
        Self { amps, norm_sq }
    }

    pub fn amplitude(&self, ket: &BasisKet) -> A {
        self.amps.get(ket).cloned().unwrap_or_else(A::zero)
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&BasisKet, &A)> {
        self.amps.iter()
    }

    pub fn support(&self) -> BTreeSet<BasisKet> {
        self.amps.keys().copied().collect()
    }

    pub fn contains(&self, ket: &BasisKet) -> bool {
        self.amps.contains_key(ket)
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sq(&self) -> &A::Real {
        &self.norm_sq
    }

    /// Labels currently carrying amplitude on `arm`.
    pub fn live_labels(&self, arm: Arm) -> BTreeSet<PathLabel> {
        self.amps.keys().filter_map(|k| k.label(arm)).collect()
    }

    pub fn scale(&self, factor: &A) -> Self {
        Self::from_map(
            self.amps
                .iter()
                .map(|(k, a)| (*k, factor.clone() * a.clone()))
                .collect(),
        )
    }

    /// Keeps only the kets accepted by `keep`, without renormalizing.
    pub fn filter(&self, mut keep: impl FnMut(&BasisKet) -> bool) -> Self {
        Self::from_map(
            self.amps
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, a)| (*k, a.clone()))
                .collect(),
        )
    }

    /// Extends a per-ket map linearly: `Σ a_k |k⟩ ↦ Σ a_k f(k)`.
    pub fn map_linear(
        &self,
        mut image: impl FnMut(&BasisKet) -> Result<StateVector<A>>,
    ) -> Result<Self> {
        let mut terms = Vec::new();
        for (ket, amp) in &self.amps {
            for (k, a) in image(ket)?.amps {
                terms.push((k, amp.clone() * a));
            }
        }
        Ok(Self::from_terms(terms))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> A {
        self.amps
            .iter()
            .filter_map(|(k, a)| other.amps.get(k).map(|b| a.conj() * b.clone()))
            .fold(A::zero(), |acc, x| acc + x)
    }

    fn require_nonzero(&self) -> Result<()> {
        if self.is_empty() || A::real_is_zero(&self.norm_sq) {
            Err(Error::EmptyState)
        } else {
            Ok(())
        }
    }

    /// Born-rule probability of the kets matching `predicate`.
    pub fn probability(&self, mut predicate: impl FnMut(&BasisKet) -> bool) -> Result<A::Real> {
        self.require_nonzero()?;
        let weight = self
            .amps
            .iter()
            .filter(|(k, _)| predicate(k))
            .fold(A::real_zero(), |acc, (_, a)| acc + a.norm_sq());
        Ok(weight / self.norm_sq.clone())
    }

    pub fn probability_of(&self, ket: BasisKet) -> Result<A::Real> {
        self.probability(|k| *k == ket)
    }

    /// True iff the two states are collinear, i.e. equal up to a global
    /// phase and normalization (Cauchy–Schwarz equality).
    pub fn equal_up_to_global_phase(&self, other: &Self) -> Result<bool> {
        self.require_nonzero()?;
        other.require_nonzero()?;
        let overlap = self.inner(other).norm_sq();
        let product = self.norm_sq.clone() * other.norm_sq.clone();
        Ok(A::real_approx_eq(&overlap, &product))
    }

    /// Amplitude-wise comparison; tolerant in the float backend.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let kets: BTreeSet<_> = self.amps.keys().chain(other.amps.keys()).collect();
        kets.into_iter()
            .all(|k| self.amplitude(k).approx_eq(&other.amplitude(k)))
    }

    pub fn to_float(&self) -> Result<StateVector<Complex64>> {
        let terms = self
            .amps
            .iter()
            .map(|(k, a)| Ok((*k, a.to_complex()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(StateVector::from_terms(terms))
    }

    /// Unit-norm copy in the float backend.
    pub fn normalized_float(&self) -> Result<StateVector<Complex64>> {
        self.require_nonzero()?;
        let inv_norm = 1.0 / A::real_to_f64(&self.norm_sq)?.sqrt();
        Ok(self.to_float()?.scale(&Complex64::new(inv_norm, 0.0)))
    }
}

impl StateVector<ExactScalar> {
    /// `|S+⟩|S−⟩` with unit amplitude.
    pub fn make_input() -> Self {
        Self::basis(BasisKet::pair(PathLabel::S, PathLabel::S))
    }
}

impl<A: Scalar> Add for &StateVector<A> {
    type Output = StateVector<A>;
    fn add(self, rhs: &StateVector<A>) -> StateVector<A> {
        StateVector::from_terms(
            self.amps
                .iter()
                .chain(rhs.amps.iter())
                .map(|(k, a)| (*k, a.clone())),
        )
    }
}

/// `|S+⟩|S−⟩` in either backend.
pub fn make_input<A: Scalar>() -> StateVector<A> {
    StateVector::basis(BasisKet::pair(PathLabel::S, PathLabel::S))
}

/// Canonical dump, one `<ket> | <amplitude>` line per ket in basis order.
impl<A: Scalar> fmt::Display for StateVector<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (ket, amp) in &self.amps {
            writeln!(f, "{ket} | {amp}")?;
        }
        Ok(())
    }
}

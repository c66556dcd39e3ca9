//! The projection that removes the annihilating branch, and its
//! generalization to a two-outcome quantum channel for reaction
//! probability `p < 1`.
//!
//! The channel has Kraus operators
//!
//! ```text
//! K_pass = Σ_{k ≠ doomed} |k⟩⟨k| + √(1−p) |doomed⟩⟨doomed|
//! K_abs  = √p |γ⟩⟨doomed|
//! ```
//!
//! where `doomed = |u+⟩|u−⟩`. At `p = 1`, `K_pass` restricted to the
//! pre-interaction modes is the knowledge projector onto `{vv, vu, uv}`.
//!
//! The sign of the `γ` amplitude is not observable in any quantity computed
//! here, so `K_abs` carries `+√p`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::amplitude::{ExactScalar, Rational, Scalar};
use crate::error::{Error, Result};
use crate::state::{BasisKet, DensityMatrix, Operator, PathLabel, StateVector};

/// Ket on which both particles meet at the interaction point.
pub const ANNIHILATION_KET: BasisKet = BasisKet::pair(PathLabel::U, PathLabel::U);

/// Projector onto the kets that are known not to annihilate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeProjector {
    kept: BTreeSet<BasisKet>,
}

impl KnowledgeProjector {
    pub fn new(kept: impl IntoIterator<Item = BasisKet>) -> Result<Self> {
        let kept: BTreeSet<_> = kept.into_iter().collect();
        if kept.is_empty() {
            return Err(Error::UnexpectedInput("projector keeps no kets".into()));
        }
        if kept.contains(&BasisKet::Absorbed) {
            return Err(Error::UnexpectedInput(
                "projector cannot keep the absorbed branch".into(),
            ));
        }
        Ok(Self { kept })
    }

    /// Keeps `{vv, vu, uv}`, dropping the annihilating `uu` ket.
    pub fn no_annihilation() -> Self {
        use PathLabel::{U, V};
        Self {
            kept: BTreeSet::from([
                BasisKet::pair(V, V),
                BasisKet::pair(V, U),
                BasisKet::pair(U, V),
            ]),
        }
    }

    pub fn kept(&self) -> &BTreeSet<BasisKet> {
        &self.kept
    }

    /// `Σ_{k ∈ kept} |k⟩⟨k|`.
    pub fn to_operator<A: Scalar>(&self) -> Operator<A> {
        Operator::identity_on(&self.kept)
    }
}

/// Projects `state` and returns the (unnormalized) projected state with the
/// probability that the projection succeeds.
pub fn project_knowledge<A: Scalar>(
    state: &StateVector<A>,
    projector: &KnowledgeProjector,
) -> Result<(StateVector<A>, A::Real)> {
    if state.is_empty() || A::real_is_zero(state.norm_sq()) {
        return Err(Error::EmptyState);
    }
    let projected = state.filter(|k| projector.kept.contains(k));
    if projected.is_empty() {
        return Err(Error::Annihilated);
    }
    let survival = projected.norm_sq().clone() / state.norm_sq().clone();
    Ok((projected, survival))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilationChannel {
    reaction_probability: Rational,
    doomed: BasisKet,
    gamma: BasisKet,
}

impl AnnihilationChannel {
    pub fn new(p: Rational) -> Result<Self> {
        if p < Rational::zero() || p > Rational::one() {
            return Err(Error::ProbabilityOutOfRange(p.to_string()));
        }
        Ok(Self {
            reaction_probability: p,
            doomed: ANNIHILATION_KET,
            gamma: BasisKet::Absorbed,
        })
    }

    pub fn reaction_probability(&self) -> &Rational {
        &self.reaction_probability
    }

    pub fn doomed(&self) -> BasisKet {
        self.doomed
    }

    pub fn gamma(&self) -> BasisKet {
        self.gamma
    }

    fn sqrt<A: Scalar>(q: &Rational) -> Result<A> {
        A::sqrt_rational(q).ok_or_else(|| Error::NotRepresentable(format!("sqrt({q})")))
    }

    /// True when both Kraus coefficients lie in ℚ(i, √2).
    pub fn is_exact(&self) -> bool {
        let p = &self.reaction_probability;
        ExactScalar::sqrt_rational(p).is_some()
            && ExactScalar::sqrt_rational(&(Rational::one() - p)).is_some()
    }

    /// `K_pass` on `basis ∪ {doomed, γ}`.
    pub fn kraus_pass<A: Scalar>(&self, basis: &BTreeSet<BasisKet>) -> Result<Operator<A>> {
        let stay = Self::sqrt::<A>(&(Rational::one() - &self.reaction_probability))?;
        let mut support = basis.clone();
        support.insert(self.gamma);
        support.remove(&self.doomed);
        Ok(Operator::identity_on(&support).sum(&Operator::outer(self.doomed, self.doomed, stay)))
    }

    /// `K_abs = √p |γ⟩⟨doomed|`.
    pub fn kraus_absorb<A: Scalar>(&self) -> Result<Operator<A>> {
        let react = Self::sqrt::<A>(&self.reaction_probability)?;
        Ok(Operator::outer(self.gamma, self.doomed, react))
    }
}

pub fn annihilation_channel(p: Rational) -> Result<AnnihilationChannel> {
    AnnihilationChannel::new(p)
}

/// `ρ′ = K_pass ρ K_pass† + K_abs ρ K_abs†`.
pub fn apply_channel<A: Scalar>(
    rho: &DensityMatrix<A>,
    channel: &AnnihilationChannel,
) -> Result<DensityMatrix<A>> {
    let trace = rho.trace()?;
    if !A::real_approx_eq(&trace, &A::real_one()) {
        return Err(Error::TraceNotOne(trace.to_string()));
    }
    let pass = channel.kraus_pass::<A>(&rho.basis())?;
    let absorb = channel.kraus_absorb::<A>()?;
    Ok(pass.conjugate(rho).sum(&absorb.conjugate(rho)))
}

/// Post-selects on "no γ detected": drops the absorbed row and column and
/// renormalizes. Returns the conditioned state and its probability.
pub fn condition_on_no_absorption<A: Scalar>(
    rho: &DensityMatrix<A>,
) -> Result<(DensityMatrix<A>, A::Real)> {
    let trace = rho.trace()?;
    let survivors = rho.restrict(|k| *k != BasisKet::Absorbed);
    let weight = survivors.weight(|_| true);
    if A::real_is_zero(&weight) {
        return Err(Error::NoSurvivingTrace);
    }
    let conditioned = survivors.scale(&A::from_real(A::real_one() / weight.clone()));
    Ok((conditioned, weight / trace))
}

//! Scenario orchestration for the two-interferometer experiment.
//!
//! Pipeline: `|S+⟩|S−⟩` → both BS1 → annihilation channel at the interaction
//! point → per arm either BS2 or a direct `u→c, v→d` relabel → detector
//! statistics. Every scenario is computed on the density-matrix path; at
//! `p = 1` the pure projection path is computed as well and the two are
//! required to agree.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::amplitude::{Backend, ExactScalar, Rational, Scalar};
use crate::error::{Error, Result};
use crate::measurement::{
    annihilation_channel, apply_channel, condition_on_no_absorption, project_knowledge,
    AnnihilationChannel, KnowledgeProjector,
};
use crate::optics::{apply_bs1_pair, SecondStage};
use crate::state::{make_input, Arm, BasisKet, DensityMatrix, PathLabel, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detector {
    C,
    D,
}

impl Detector {
    pub const ALL: [Detector; 2] = [Detector::C, Detector::D];

    pub fn label(self) -> PathLabel {
        match self {
            Detector::C => PathLabel::C,
            Detector::D => PathLabel::D,
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Detector::C => "c",
            Detector::D => "d",
        })
    }
}

/// Which second beam splitters are in place. The first letter is the
/// positron arm: `InOut` means BS2+ present, BS2− removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Layout {
    #[serde(rename = "OO")]
    OutOut,
    #[serde(rename = "IO")]
    InOut,
    #[serde(rename = "OI")]
    OutIn,
    #[serde(rename = "II")]
    InIn,
}

impl Layout {
    pub const ALL: [Layout; 4] = [Layout::OutOut, Layout::InOut, Layout::OutIn, Layout::InIn];

    pub fn from_flags(bs2_plus: bool, bs2_minus: bool) -> Self {
        match (bs2_plus, bs2_minus) {
            (false, false) => Layout::OutOut,
            (true, false) => Layout::InOut,
            (false, true) => Layout::OutIn,
            (true, true) => Layout::InIn,
        }
    }

    pub fn bs2_plus(self) -> bool {
        matches!(self, Layout::InOut | Layout::InIn)
    }

    pub fn bs2_minus(self) -> bool {
        matches!(self, Layout::OutIn | Layout::InIn)
    }

    pub fn code(self) -> &'static str {
        match self {
            Layout::OutOut => "OO",
            Layout::InOut => "IO",
            Layout::OutIn => "OI",
            Layout::InIn => "II",
        }
    }

    /// Setting names as `plus,minus`, e.g. `in,out`.
    pub fn settings(self) -> &'static str {
        match self {
            Layout::OutOut => "out,out",
            Layout::InOut => "in,out",
            Layout::OutIn => "out,in",
            Layout::InIn => "in,in",
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub bs2_plus: bool,
    pub bs2_minus: bool,
    pub reaction_probability: Rational,
    pub backend: Backend,
}

impl ScenarioConfig {
    pub fn new(layout: Layout, reaction_probability: Rational, backend: Backend) -> Result<Self> {
        let cfg = Self {
            bs2_plus: layout.bs2_plus(),
            bs2_minus: layout.bs2_minus(),
            reaction_probability,
            backend,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.reaction_probability;
        if *p < Rational::zero() || *p > Rational::one() {
            return Err(Error::ProbabilityOutOfRange(p.to_string()));
        }
        Ok(())
    }

    pub fn layout(&self) -> Layout {
        Layout::from_flags(self.bs2_plus, self.bs2_minus)
    }

    fn stages(&self) -> [SecondStage; 2] {
        [
            SecondStage {
                arm: Arm::Plus,
                bs2_present: self.bs2_plus,
            },
            SecondStage {
                arm: Arm::Minus,
                bs2_present: self.bs2_minus,
            },
        ]
    }
}

/// A probability with its exact value when the computation tracked one.
#[derive(Debug, Clone, PartialEq)]
pub struct Probability {
    pub exact: Option<ExactScalar>,
    pub float: f64,
}

impl Probability {
    pub fn exact(value: ExactScalar) -> Result<Self> {
        let float = value.to_float()?.re;
        Ok(Self {
            exact: Some(value),
            float,
        })
    }

    fn from_real<A: Scalar>(r: &A::Real) -> Result<Self> {
        Ok(Self {
            exact: A::real_to_exact(r),
            float: A::real_to_f64(r)?,
        })
    }

    pub fn is_exactly(&self, n: i64, d: i64) -> bool {
        self.exact
            .as_ref()
            .and_then(ExactScalar::to_rational)
            .is_some_and(|q| q == crate::amplitude::rational(n, d))
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(x) => write!(f, "{x}"),
            None => write!(f, "{}", self.float),
        }
    }
}

/// Detector-coincidence probabilities for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    pub layout: Layout,
    pub rows: BTreeMap<(Detector, Detector), Probability>,
    pub gamma: Probability,
    /// Rows are conditioned on no annihilation photon.
    pub conditional: bool,
}

impl OutcomeTable {
    pub fn get(&self, plus: Detector, minus: Detector) -> &Probability {
        &self.rows[&(plus, minus)]
    }

    /// Row sum, plus the γ probability when unconditional.
    pub fn total(&self) -> Probability {
        let mut parts: Vec<&Probability> = self.rows.values().collect();
        if !self.conditional {
            parts.push(&self.gamma);
        }
        let exact = parts
            .iter()
            .map(|p| p.exact.clone())
            .sum::<Option<ExactScalar>>();
        Probability {
            exact,
            float: parts.iter().map(|p| p.float).sum(),
        }
    }

    fn from_density<A: Scalar>(
        layout: Layout,
        rho: &DensityMatrix<A>,
        conditional: bool,
    ) -> Result<Self> {
        let mut rows = BTreeMap::new();
        for plus in Detector::ALL {
            for minus in Detector::ALL {
                let ket = BasisKet::pair(plus.label(), minus.label());
                let p = rho.probability(|k| *k == ket)?;
                rows.insert((plus, minus), Probability::from_real::<A>(&p)?);
            }
        }
        let gamma = rho.probability(|k| *k == BasisKet::Absorbed)?;
        Ok(Self {
            layout,
            rows,
            gamma: Probability::from_real::<A>(&gamma)?,
            conditional,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum FinalState {
    ExactPure(StateVector<ExactScalar>),
    FloatPure(StateVector<Complex64>),
    ExactMixed(DensityMatrix<ExactScalar>),
    FloatMixed(DensityMatrix<Complex64>),
}

impl FinalState {
    pub fn as_exact_pure(&self) -> Option<&StateVector<ExactScalar>> {
        match self {
            FinalState::ExactPure(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_float_pure(&self) -> Option<&StateVector<Complex64>> {
        match self {
            FinalState::FloatPure(s) => Some(s),
            _ => None,
        }
    }
}

trait IntoFinal: Scalar {
    fn pure(s: StateVector<Self>) -> FinalState;
    fn mixed(r: DensityMatrix<Self>) -> FinalState;
}

impl IntoFinal for ExactScalar {
    fn pure(s: StateVector<Self>) -> FinalState {
        FinalState::ExactPure(s)
    }
    fn mixed(r: DensityMatrix<Self>) -> FinalState {
        FinalState::ExactMixed(r)
    }
}

impl IntoFinal for Complex64 {
    fn pure(s: StateVector<Self>) -> FinalState {
        FinalState::FloatPure(s)
    }
    fn mixed(r: DensityMatrix<Self>) -> FinalState {
        FinalState::FloatMixed(r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub config: ScenarioConfig,
    /// Backend actually used; an exact request falls back to float when the
    /// channel coefficients leave ℚ(i, √2).
    pub backend: Backend,
    /// At `p = 1`: the post-selected pure state (unnormalized). Otherwise
    /// the full density matrix including the γ branch.
    pub state: FinalState,
    pub conditional: OutcomeTable,
    pub unconditional: OutcomeTable,
}

fn through_stages<A: Scalar>(
    stages: &[SecondStage],
    state: &StateVector<A>,
) -> Result<StateVector<A>> {
    stages
        .iter()
        .try_fold(state.clone(), |s, stage| stage.apply(&s))
}

fn run_in<A: IntoFinal>(
    cfg: &ScenarioConfig,
    channel: &AnnihilationChannel,
) -> Result<ScenarioOutcome> {
    let layout = cfg.layout();
    let stages = cfg.stages();
    let psi = apply_bs1_pair(&make_input::<A>())?;
    let rho = apply_channel(&DensityMatrix::from_pure(&psi)?, channel)?;

    // aliasing and injectivity are checked once on the whole basis
    let all_kets = StateVector::from_terms(rho.basis().into_iter().map(|k| (k, A::one())));
    through_stages(&stages, &all_kets)?;
    let rho_out = rho.transform(|k| through_stages(&stages, &StateVector::basis(*k)))?;

    let unconditional = OutcomeTable::from_density(layout, &rho_out, false)?;
    let (rho_cond, _) = condition_on_no_absorption(&rho_out)?;
    let conditional = OutcomeTable::from_density(layout, &rho_cond, true)?;

    let state = if cfg.reaction_probability.is_one() {
        let (post, survival) = project_knowledge(&psi, &KnowledgeProjector::no_annihilation())?;
        let final_pure = through_stages(&stages, &post)?;
        let expected_survival = rho_out.weight(|k| *k != BasisKet::Absorbed);
        if !A::real_approx_eq(&survival, &expected_survival) {
            return Err(Error::PathMismatch(format!(
                "survival {survival} vs {expected_survival}"
            )));
        }
        if !DensityMatrix::from_pure(&final_pure)?.approx_eq(&rho_cond) {
            return Err(Error::PathMismatch(format!("layout {layout}")));
        }
        A::pure(final_pure)
    } else {
        A::mixed(rho_out)
    };

    Ok(ScenarioOutcome {
        config: cfg.clone(),
        backend: A::BACKEND,
        state,
        conditional,
        unconditional,
    })
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutcome> {
    cfg.validate()?;
    let channel = annihilation_channel(cfg.reaction_probability.clone())?;
    match cfg.backend {
        Backend::Exact if channel.is_exact() => run_in::<ExactScalar>(cfg, &channel),
        _ => run_in::<Complex64>(cfg, &channel),
    }
}

/// The four layouts at `p = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullTable {
    outcomes: BTreeMap<Layout, ScenarioOutcome>,
}

impl FullTable {
    pub fn get(&self, layout: Layout) -> &ScenarioOutcome {
        &self.outcomes[&layout]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Layout, &ScenarioOutcome)> {
        self.outcomes.iter()
    }
}

pub fn full_table() -> FullTable {
    full_table_with(Backend::Exact)
}

pub fn full_table_with(backend: Backend) -> FullTable {
    let outcomes = std::thread::scope(|scope| {
        let handles: Vec<_> = Layout::ALL
            .into_iter()
            .map(|layout| {
                scope.spawn(move || {
                    let cfg = ScenarioConfig::new(layout, Rational::one(), backend)
                        .expect("p = 1 is in range");
                    (layout, run_scenario(&cfg))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                let (layout, outcome) = h.join().expect("scenario thread panicked");
                (layout, outcome.expect("p = 1 scenarios are well-formed"))
            })
            .collect()
    });
    FullTable { outcomes }
}

/// Detector statistics with the interaction switched off.
pub fn no_interaction_baseline(cfg: &ScenarioConfig) -> Result<OutcomeTable> {
    if !cfg.reaction_probability.is_zero() {
        return Err(Error::UnexpectedInput(format!(
            "baseline needs reaction probability 0, got {}",
            cfg.reaction_probability
        )));
    }
    Ok(run_scenario(cfg)?.unconditional)
}

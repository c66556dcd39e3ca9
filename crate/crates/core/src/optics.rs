//! Balanced beam splitters and mode relabeling.
//!
//! One phase convention throughout: reflection picks up a factor `i`.
//! A beam splitter with inputs `(a, b)` and outputs `(x, y)` acts on creation
//! operators as
//!
//! ```text
//! a† → (x† + i y†)/√2        b† → (i x† + y†)/√2
//! ```

use std::collections::BTreeSet;

use crate::amplitude::Scalar;
use crate::error::{Error, Result};
use crate::state::{Arm, BasisKet, PathLabel, StateVector};

/// Port assignment of a beam splitter on one arm. The second input may be
/// an unmodeled vacuum port.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeamSplitter {
    pub arm: Arm,
    pub inputs: (PathLabel, Option<PathLabel>),
    pub outputs: (PathLabel, PathLabel),
}

impl BeamSplitter {
    /// BS1 of either interferometer: `S → (v + i u)/√2`.
    pub fn first(arm: Arm) -> Self {
        Self {
            arm,
            inputs: (PathLabel::S, None),
            outputs: (PathLabel::V, PathLabel::U),
        }
    }

    /// BS2 of either interferometer: `u → (c + i d)/√2`, `v → (i c + d)/√2`.
    pub fn second(arm: Arm) -> Self {
        Self {
            arm,
            inputs: (PathLabel::U, Some(PathLabel::V)),
            outputs: (PathLabel::C, PathLabel::D),
        }
    }

    fn input_labels(&self) -> impl Iterator<Item = PathLabel> {
        std::iter::once(self.inputs.0).chain(self.inputs.1)
    }

    fn check_aliasing<A: Scalar>(&self, state: &StateVector<A>) -> Result<()> {
        let aliasing = |label| Error::ModeAliasing {
            arm: self.arm,
            label,
        };
        if self.outputs.0 == self.outputs.1 {
            return Err(aliasing(self.outputs.0));
        }
        if self.inputs.1 == Some(self.inputs.0) {
            return Err(aliasing(self.inputs.0));
        }
        let inputs: BTreeSet<_> = self.input_labels().collect();
        for label in state.live_labels(self.arm) {
            if !inputs.contains(&label) && (label == self.outputs.0 || label == self.outputs.1) {
                return Err(aliasing(label));
            }
        }
        Ok(())
    }

    fn image_of<A: Scalar>(&self, ket: &BasisKet) -> StateVector<A> {
        let (x, y) = self.outputs;
        let r = A::frac_1_sqrt_2();
        let ir = A::imag_unit() * r.clone();
        match ket.label(self.arm) {
            Some(l) if l == self.inputs.0 => StateVector::from_terms([
                (ket.with_label(self.arm, x), r),
                (ket.with_label(self.arm, y), ir),
            ]),
            Some(l) if Some(l) == self.inputs.1 => StateVector::from_terms([
                (ket.with_label(self.arm, x), ir),
                (ket.with_label(self.arm, y), r),
            ]),
            _ => StateVector::basis(*ket),
        }
    }

    pub fn apply<A: Scalar>(&self, state: &StateVector<A>) -> Result<StateVector<A>> {
        self.check_aliasing(state)?;
        state.map_linear(|ket| Ok(self.image_of(ket)))
    }

    /// Conjugate transpose, `x → (a − i b)/√2`, `y → (−i a + b)/√2`.
    /// Only defined when both inputs are modeled.
    #[cfg(test)]
    pub(crate) fn inverse<A: Scalar>(&self, state: &StateVector<A>) -> Result<StateVector<A>> {
        let Some(b) = self.inputs.1 else {
            return Err(Error::UnexpectedInput(
                "inverse of a beam splitter with a vacuum port".into(),
            ));
        };
        let a = self.inputs.0;
        let (x, y) = self.outputs;
        let r = A::frac_1_sqrt_2();
        let mir = -(A::imag_unit() * r.clone());
        state.map_linear(|ket| {
            Ok(match ket.label(self.arm) {
                Some(l) if l == x => StateVector::from_terms([
                    (ket.with_label(self.arm, a), r.clone()),
                    (ket.with_label(self.arm, b), mir.clone()),
                ]),
                Some(l) if l == y => StateVector::from_terms([
                    (ket.with_label(self.arm, a), mir.clone()),
                    (ket.with_label(self.arm, b), r.clone()),
                ]),
                _ => StateVector::basis(*ket),
            })
        })
    }
}

/// Applies a balanced beam splitter on `arm`. See the module docs for the
/// convention.
pub fn apply_bs<A: Scalar>(
    state: &StateVector<A>,
    arm: Arm,
    inputs: (PathLabel, Option<PathLabel>),
    outputs: (PathLabel, PathLabel),
) -> Result<StateVector<A>> {
    BeamSplitter {
        arm,
        inputs,
        outputs,
    }
    .apply(state)
}

/// Renames the labels of one arm; labels absent from `map` are kept.
pub fn relabel<A: Scalar>(
    state: &StateVector<A>,
    arm: Arm,
    map: &[(PathLabel, PathLabel)],
) -> Result<StateVector<A>> {
    let lookup = |l: PathLabel| {
        map.iter()
            .find(|(from, _)| *from == l)
            .map_or(l, |(_, to)| *to)
    };
    let live = state.live_labels(arm);
    let images: BTreeSet<_> = live.iter().map(|l| lookup(*l)).collect();
    if images.len() != live.len() {
        return Err(Error::NonInjectiveRelabel { arm });
    }
    Ok(StateVector::from_terms(state.amplitudes().map(|(k, a)| {
        let ket = match k.label(arm) {
            Some(l) => k.with_label(arm, lookup(l)),
            None => *k,
        };
        (ket, a.clone())
    })))
}

/// Mapping used when a second beam splitter is removed: `u → c`, `v → d`.
pub const BS2_REMOVED: [(PathLabel, PathLabel); 2] =
    [(PathLabel::U, PathLabel::C), (PathLabel::V, PathLabel::D)];

/// What sits between the interaction point and the detectors on one arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecondStage {
    pub arm: Arm,
    pub bs2_present: bool,
}

impl SecondStage {
    pub fn apply<A: Scalar>(&self, state: &StateVector<A>) -> Result<StateVector<A>> {
        if self.bs2_present {
            BeamSplitter::second(self.arm).apply(state)
        } else {
            relabel(state, self.arm, &BS2_REMOVED)
        }
    }
}

/// Both first beam splitters applied to `|S+⟩|S−⟩`.
pub fn apply_bs1_pair<A: Scalar>(input: &StateVector<A>) -> Result<StateVector<A>> {
    let source = BasisKet::pair(PathLabel::S, PathLabel::S);
    if input.support() != BTreeSet::from([source]) {
        return Err(Error::UnexpectedInput(format!(
            "expected support {{{source}}}, got {} ket(s)",
            input.len()
        )));
    }
    let plus = BeamSplitter::first(Arm::Plus).apply(input)?;
    BeamSplitter::first(Arm::Minus).apply(&plus)
}

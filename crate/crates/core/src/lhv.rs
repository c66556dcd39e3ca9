//! Exhaustive local-hidden-variable audit of the Hardy probability facts.
//!
//! A local model assigns each particle a predetermined detector outcome for
//! each of its two settings (BS2 in or out). Any local model is a convex
//! mixture of these 16 deterministic strategies. A zero-probability event
//! must be avoided by every strategy in the mixture, and an event of positive
//! probability needs at least one strategy in the mixture that produces it.
//! So a local model exists iff some strategy avoids every forbidden event and
//! produces the positive one; enumerating 16 cases decides it exactly.

use std::fmt;

use num_traits::Zero;

use crate::amplitude::{ExactScalar, Rational};
use crate::hardy::{full_table, Detector, FullTable, Layout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    In,
    Out,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::In => "in",
            Setting::Out => "out",
        })
    }
}

/// Predetermined outcomes: `a_*` for the positron, `b_*` for the electron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalStrategy {
    pub a_in: Detector,
    pub a_out: Detector,
    pub b_in: Detector,
    pub b_out: Detector,
}

impl LocalStrategy {
    pub fn all() -> Vec<LocalStrategy> {
        let mut out = Vec::with_capacity(16);
        for a_in in Detector::ALL {
            for a_out in Detector::ALL {
                for b_in in Detector::ALL {
                    for b_out in Detector::ALL {
                        out.push(LocalStrategy {
                            a_in,
                            a_out,
                            b_in,
                            b_out,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn outcome(&self, plus: Setting, minus: Setting) -> (Detector, Detector) {
        let a = match plus {
            Setting::In => self.a_in,
            Setting::Out => self.a_out,
        };
        let b = match minus {
            Setting::In => self.b_in,
            Setting::Out => self.b_out,
        };
        (a, b)
    }

    pub fn produces(&self, event: &Event) -> bool {
        self.outcome(event.plus_setting, event.minus_setting) == event.outcome
    }
}

impl fmt::Display for LocalStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a(in,out)=({},{}) b(in,out)=({},{})",
            self.a_in, self.a_out, self.b_in, self.b_out
        )
    }
}

/// Joint settings plus joint outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    pub plus_setting: Setting,
    pub minus_setting: Setting,
    pub outcome: (Detector, Detector),
}

impl Event {
    pub fn new(layout: Layout, plus: Detector, minus: Detector) -> Self {
        let setting = |present| if present { Setting::In } else { Setting::Out };
        Self {
            plus_setting: setting(layout.bs2_plus()),
            minus_setting: setting(layout.bs2_minus()),
            outcome: (plus, minus),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P({}+,{}-|{},{})",
            self.outcome.0, self.outcome.1, self.plus_setting, self.minus_setting
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    pub zero_events: Vec<Event>,
    pub positive_event: Event,
    pub positive_probability: Rational,
}

fn exact_rational(p: &Option<ExactScalar>) -> Option<Rational> {
    p.as_ref().and_then(ExactScalar::to_rational)
}

/// Hardy's four facts, with probabilities read off the exact `p = 1` table.
pub fn quantum_constraints() -> ConstraintSet {
    constraints_from(&full_table())
}

pub fn constraints_from(table: &FullTable) -> ConstraintSet {
    use Detector::{C, D};
    let cond = |layout: Layout, a, b| {
        exact_rational(&table.get(layout).conditional.get(a, b).exact)
            .expect("p = 1 table is exact")
    };
    let zero_events = [
        (Layout::OutOut, C, C),
        (Layout::InOut, D, D),
        (Layout::OutIn, D, D),
    ]
    .into_iter()
    .filter(|(layout, a, b)| cond(*layout, *a, *b).is_zero())
    .map(|(layout, a, b)| Event::new(layout, a, b))
    .collect();
    ConstraintSet {
        zero_events,
        positive_event: Event::new(Layout::InIn, D, D),
        positive_probability: cond(Layout::InIn, D, D),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    /// No local model reproduces the constraints.
    pub contradiction: bool,
    pub surviving_strategies: Vec<LocalStrategy>,
    /// Strategies removed, each with the first forbidden event it produces.
    pub eliminated: Vec<(LocalStrategy, Event)>,
    /// Survivors that produce the positive event.
    pub witnesses: Vec<LocalStrategy>,
    pub positive_event: Event,
    pub positive_required: bool,
}

pub fn audit(constraints: &ConstraintSet) -> Verdict {
    let mut surviving = Vec::new();
    let mut eliminated = Vec::new();
    for strategy in LocalStrategy::all() {
        match constraints
            .zero_events
            .iter()
            .find(|e| strategy.produces(e))
        {
            Some(event) => eliminated.push((strategy, *event)),
            None => surviving.push(strategy),
        }
    }
    let witnesses: Vec<_> = surviving
        .iter()
        .copied()
        .filter(|s| s.produces(&constraints.positive_event))
        .collect();
    let positive_required = constraints.positive_probability > Rational::zero();
    Verdict {
        contradiction: positive_required && witnesses.is_empty(),
        surviving_strategies: surviving,
        eliminated,
        witnesses,
        positive_event: constraints.positive_event,
        positive_required,
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let total = self.eliminated.len() + self.surviving_strategies.len();
        writeln!(f, "strategies enumerated: {total}")?;
        for (strategy, event) in &self.eliminated {
            writeln!(f, "eliminated {strategy} by {event} = 0")?;
        }
        for strategy in &self.surviving_strategies {
            let mark = if self.witnesses.contains(strategy) {
                format!(" (produces {})", self.positive_event)
            } else {
                String::new()
            };
            writeln!(f, "surviving  {strategy}{mark}")?;
        }
        if self.contradiction {
            writeln!(
                f,
                "verdict: CONTRADICTION: no local model exists ({} > 0 but no surviving strategy produces it)",
                self.positive_event
            )
        } else {
            writeln!(f, "verdict: SATISFIABLE: a local model exists")
        }
    }
}

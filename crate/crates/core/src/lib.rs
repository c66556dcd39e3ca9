//! Exact simulation of the two-interferometer Hardy experiment.
//!
//! A positron and an electron each traverse a Mach–Zehnder interferometer;
//! if both take the inner path they meet and annihilate. The crate builds the
//! input state, the first beam splitters, the knowledge projection (or, for a
//! reaction probability below one, a Kraus channel on density matrices), the
//! four second-beam-splitter layouts, and the detector statistics, all in
//! exact ℚ(i, √2) arithmetic with a double-precision mirror.
//!
//! Around that core sit a brute-force local-hidden-variable audit and a small
//! Fock-space module for the photon-bunching analogue.

pub mod amplitude;
pub mod bosonic;
pub mod error;
pub mod hardy;
pub mod lhv;
pub mod measurement;
pub mod optics;
pub mod report;
pub mod state;

pub use amplitude::{Backend, ComplexFloat, ExactScalar, Rational, Scalar};
pub use error::{Error, Result};
pub use hardy::{
    full_table, full_table_with, no_interaction_baseline, run_scenario, Detector, FullTable,
    Layout, OutcomeTable, Probability, ScenarioConfig, ScenarioOutcome,
};
pub use state::{Arm, BasisKet, DensityMatrix, PathLabel, StateVector};

use thiserror::Error;

use crate::state::{Arm, PathLabel};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty state")]
    EmptyState,

    #[error("mode aliasing on the {arm} arm: label {label} is already live")]
    ModeAliasing { arm: Arm, label: PathLabel },

    #[error("relabel map is not injective on the {arm} arm")]
    NonInjectiveRelabel { arm: Arm },

    #[error("unexpected input state: {0}")]
    UnexpectedInput(String),

    #[error("state annihilated with certainty")]
    Annihilated,

    #[error("no surviving trace after conditioning on no absorption")]
    NoSurvivingTrace,

    #[error("reaction probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(String),

    #[error("density matrix is not Hermitian")]
    NonHermitian,

    #[error("density matrix trace is {0}, expected 1")]
    TraceNotOne(String),

    #[error("{0} is not representable in the exact backend")]
    NotRepresentable(String),

    #[error("value {0} overflows double precision")]
    FloatOverflow(String),

    #[error("cannot parse exact scalar {0:?}")]
    ParseScalar(String),

    #[error("invalid bosonic mode index {index} for a {modes}-mode state")]
    InvalidMode { index: usize, modes: usize },

    #[error("photon number {0} exceeds the cap of {cap}", cap = crate::bosonic::MAX_PHOTONS)]
    PhotonCap(u32),

    #[error("no coincidences")]
    NoCoincidences,

    #[error("inconsistent result between pure and density paths: {0}")]
    PathMismatch(String),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("basis is singular")]
    SingularBasis,

    #[error("rows are linearly dependent: rank {rank} < {rows}")]
    RankDeficient { rank: usize, rows: usize },

    #[error("k = {k} outside the admissible range [{min}, {max}]")]
    InvalidK { k: usize, min: usize, max: usize },

    #[error("degenerate sampler: no full-rank draw after {attempts} attempts")]
    DegenerateSampler { attempts: usize },

    #[error("subspace meets factor block {factor} nontrivially; not a virtual subdirect product")]
    NotVirtualSubdirect { factor: usize },

    #[error("point is not finitely presented")]
    NotFinitelyPresented,

    #[error("piece {piece} of the cone union contains a line; certificate unavailable")]
    NonPointedPiece { piece: usize },

    #[error("dim Γ = {gamma_dim} <= k = {k}: the generic point is finitely presented")]
    TheoremAApplies { gamma_dim: usize, k: usize },

    #[error("unsupported configuration: {0}")]
    UnsupportedRank(String),

    #[error("construction failed its exact post-check: {0}")]
    ConstructionFailed(String),

    #[error("fewer than two factors with nonzero Σ^c")]
    NoSuitableFactors,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Validation(_) | Error::Io(_) => 2,
            Error::NotVirtualSubdirect { .. }
            | Error::NotFinitelyPresented
            | Error::InvalidK { .. }
            | Error::DimensionMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::SingularBasis
            | Error::RankDeficient { .. } => 3,
            Error::NonPointedPiece { .. }
            | Error::TheoremAApplies { .. }
            | Error::UnsupportedRank(_)
            | Error::NoSuitableFactors => 4,
            Error::DegenerateSampler { .. } | Error::ConstructionFailed(_) => 5,
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

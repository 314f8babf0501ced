use thiserror::Error;

use crate::semigroup::ConditionReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("vectors do not span the ambient space (rank {rank} < {dim})")]
    RankDeficient { rank: usize, dim: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("vector is not in the group generated at level {level}")]
    NotInGroup { level: usize },

    #[error("invalid generator system: {0}")]
    InvalidSystem(String),

    #[error("level {level} out of range (chain has {max} levels)")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("zero vector has no finite order")]
    ZeroVector,

    #[error("conditions (*) and (**) are not both satisfied")]
    ConditionsUnmet(Box<ConditionReport>),

    #[error("generators do not span the full integer lattice (index {index})")]
    NotFullLattice { index: String },

    #[error("inputs are not coprime: {0}")]
    NotCoprime(String),

    #[error("invalid exponents: {0}")]
    InvalidExponents(String),

    #[error("instance too large: {0}")]
    TooLarge(String),
}

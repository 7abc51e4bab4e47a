use thiserror::Error;

use crate::graph::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state index {0} is not one of 0, 1, 2")]
    StateIndex(usize),

    #[error("invalid apparatus parameters: {0}")]
    Params(String),

    #[error("mean photon number must be finite and non-negative, got {0}")]
    Intensity(f64),

    #[error("probability must lie in [0, 1], got {0}")]
    Probability(f64),

    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),

    #[error("closed form assumes no dark counts, got dark_rate = {0}")]
    DarkCounts(f64),

    #[error("cheat targets must be distinct, got ({0}, {0})")]
    EqualTargets(usize),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("coloring has {got} entries but the graph has {expected} vertices")]
    ColoringLength { expected: usize, got: usize },

    #[error("graph has {0} vertices; exhaustive search is limited to {max}", max = crate::graph::MAX_EXHAUSTIVE_VERTICES)]
    TooLarge(usize),

    #[error("coloring is not a proper 3-coloring of the graph")]
    InvalidColoring,

    #[error("graph is 3-colorable, a cheating prover needs at least one unavoidable bad edge")]
    Colorable,

    #[error("invalid protocol configuration: {0}")]
    Config(String),
}

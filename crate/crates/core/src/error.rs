use thiserror::Error;

/// Errors surfaced by the engine. Admissibility *violations* are data, not
/// errors — see [`crate::filtration::WeightedFiltration::validate`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("trivial 1-PS")]
    TrivialOnePs,
    #[error("not special-linear: weights must sum to zero")]
    NotSpecialLinear,
    #[error("weights must be nonincreasing")]
    WeightsNotSorted,
    #[error("incomparable series: mixed twist levels")]
    IncomparableSeries,
    #[error("empty intersection")]
    EmptyIntersection,
    #[error("oracle size limit: {0} series (max 20)")]
    OracleSizeLimit(usize),
    #[error("diagonal minimality violated in column {0}")]
    DiagonalMinimality(usize),
    #[error("series count {0} does not match point count {1}")]
    NotSquare(usize, usize),
    #[error("degree hypothesis fails: {0} >= {1}")]
    DegreeHypothesis(u64, i64),
    #[error("W undefined in case {0}")]
    WUndefined(&'static str),
    #[error("degenerate bracket: equal pivot weights")]
    DegenerateBracket,
    #[error("row index {0} out of range (max {1})")]
    RowOutOfRange(usize, usize),
    #[error("degenerate projective space: N = 0")]
    DegenerateProjectiveSpace,
    #[error("unstable weight data: 2g-2+a <= 0")]
    UnstableWeightData,
    #[error("nonintegral degree: nu*(2g-2+a) is not an integer")]
    NonIntegralDegree,
    #[error("mode inapplicable: {0}")]
    ModeInapplicable(&'static str),
    #[error("epsilon must be positive")]
    EpsilonNotPositive,
    #[error("hypotheses violated: case {0}")]
    HypothesesViolated(char),
    #[error("generation failed after {0} attempts")]
    GenerationFailed(u32),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

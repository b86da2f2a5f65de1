use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("elements live over different generator sets")]
    GeneratorSetMismatch,

    #[error("ill-graded: {0}")]
    IllGraded(String),

    #[error("element is not closed: {0}")]
    NotClosed(String),

    #[error("invalid differential: {0}")]
    InvalidDifferential(String),

    #[error(
        "generator `{name}` has degree 1: only simply connected inputs are accepted. \
         Pass the model of a simply connected replacement M+ whose rational cohomology \
         agrees with that of M from degree 2 on"
    )]
    DegreeOneGenerator { name: String },

    #[error(
        "H^1(M;Q) has dimension {rank}: only simply connected inputs are accepted. \
         Pass the cohomology of a simply connected replacement M+ (same rational \
         cohomology as M from degree 2 on, nothing in degree 1)"
    )]
    NonTrivialFirstCohomology { rank: usize },

    #[error(
        "codimension n - m = {codim} is not supported: the obstruction theory here is only \
         valid when n - m is odd and positive (got m = {m}, n = {n})"
    )]
    Scope { m: u32, n: u32, codim: i64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("missing characteristic class for generator `{0}`")]
    MissingClass(String),

    #[error("internal error: {0}")]
    Internal(String),
}

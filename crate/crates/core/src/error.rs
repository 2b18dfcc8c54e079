use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("unsupported measure kind: {0}")]
    Unsupported(String),

    #[error("wrong support: {0}")]
    WrongSupport(String),

    #[error("insufficient atoms: {atoms} atoms cannot carry degree {degree}")]
    InsufficientAtoms { atoms: usize, degree: usize },

    #[error("measure too coarse: discretization exhausted at degree {degree}")]
    MeasureTooCoarse { degree: usize },

    #[error("degree {requested} exceeds available degree {available}")]
    DegreeOutOfRange { requested: usize, available: usize },

    #[error("confluent points: |conj(z) - zeta| = {gap:e} is below the guard")]
    Confluent { gap: f64 },

    #[error("overflow while evaluating degree {degree} at {point}")]
    Overflow { degree: usize, point: String },

    #[error("ill-conditioned: residual {residual:e} exceeds contract {contract:e}")]
    IllConditioned { residual: f64, contract: f64 },

    #[error("inadmissible point-mass weight {lambda} (must be >= {minimum})")]
    InadmissibleLambda { lambda: f64, minimum: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numeric breakdown: {0}")]
    Breakdown(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("property violated: {0}")]
    Violation(String),
}

impl Error {
    /// True for failures caused by floating-point limits rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::MeasureTooCoarse { .. }
                | Error::Overflow { .. }
                | Error::IllConditioned { .. }
                | Error::Breakdown(_)
        )
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("class is not unitary: {0}")]
    NotUnitary(String),
    #[error("symmetric power k = {0} outside 1..=4")]
    SymPowerRange(u32),
    #[error("twist value {0} is not a unit")]
    NonUnitTwist(String),
    #[error("classes live at different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("unknown formula id `{0}`")]
    UnknownFormula(String),
    #[error("unknown weight function `{0}`")]
    UnknownFunction(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("missing local data for prime {0}")]
    MissingPrime(u64),
    #[error("bound {requested} exceeds the memory budget of {limit}")]
    TooLarge { requested: u64, limit: u64 },
    #[error("{path}:{line}: {message}")]
    Ingest { path: String, line: u64, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("checkpoint {checkpoint} exceeds available data bound {bound}")]
    CheckpointBeyondData { checkpoint: u64, bound: u64 },
    #[error("need at least {needed} checkpoints with X >= 100, got {got}")]
    InsufficientCheckpoints { needed: usize, got: usize },
    #[error("denominator not certifiably positive: lower bound {lower_bound:e} on [{lo}, {hi}]")]
    DenominatorNotPositive { lower_bound: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

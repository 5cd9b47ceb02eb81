use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("price violates the no-arbitrage band: {0}")]
    ArbitrageViolation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("erfcx difference cancelled to zero at x={x}, v={v}")]
    DegenerateDifference { x: f64, v: f64 },
    #[error("reference inversion did not converge: {0}")]
    NoConvergence(String),
    #[error("reference table missing for dataset {dataset} (expected at {path})")]
    MissingReferenceTable { dataset: String, path: String },
    #[error("malformed reference table: {0}")]
    Table(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

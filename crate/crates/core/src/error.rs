use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypergroupError {
    #[error("index {index} out of range for table of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("product {x}*{y} leaves the truncated section (radius {radius})")]
    TruncationOverflow { x: usize, y: usize, radius: usize },
    #[error("zero identity coefficient for element {0}: support axiom violated")]
    ZeroDiagonal(usize),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("operation requires a complete finite table")]
    NotFinite,
    #[error("operation requires a designated generator")]
    NoGenerator,

    #[error("Cayley table is not a Latin square: {0}")]
    NotLatinSquare(String),
    #[error("Cayley table has no identity element")]
    NoIdentity,
    #[error("Cayley table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("recovered dimension {value} is not an integer")]
    NonIntegerDimension { value: f64 },
    #[error("invalid family parameters: {0}")]
    InvalidParameters(String),
    #[error("product would have {size} elements, above the cap {cap}")]
    SizeOverflow { size: usize, cap: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("Frobenius reciprocity violated: {0}")]
    Reciprocity(String),
    #[error("io error: {0}")]
    Io(String),

    #[error("joint diagonalization failed after {attempts} attempts: {reason}")]
    DegenerateSpectrum { attempts: usize, reason: String },
    #[error("candidate positive character does not dominate: {0}")]
    DominationFailure(String),
    #[error("character basis is singular")]
    SingularCharacterBasis,

    #[error("multiplier vanishes at element {0}")]
    ZeroValue(usize),
    #[error("value set grows with the radius ({small} values on the half ball, {large} on the full section)")]
    UnboundedValueSet { small: usize, large: usize },
    #[error("the table is certified to fail the Reiter condition (P2)")]
    P2Failure,
    #[error("search did not converge: {0}")]
    NoConvergence(String),
}

impl From<std::io::Error> for HypergroupError {
    fn from(e: std::io::Error) -> Self {
        HypergroupError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HypergroupError>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("not a Cartan matrix of finite type: {0}")]
    NotFiniteType(String),
    #[error("vector {0:?} is not a coroot")]
    NotACoroot(Vec<i32>),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("division by 1 - e^0")]
    ZeroDirection,
    #[error("denominator factor 1 - e^{0:?} is not a coroot binomial")]
    DenominatorOverflow(Vec<i32>),
    #[error("inexact division at w = {w}: witness {witness}")]
    NonExactDivision { w: String, witness: String },
    #[error("no Steinberg basis found within the search bound")]
    NoBasisFound,
    #[error("Steinberg coefficient for {0} is not W-invariant")]
    NonInvariantCoefficient(String),
    #[error("no splitting endomorphism found for a non-local algebra of dimension {0}")]
    SplitSearchExhausted(usize),
    #[error("isomorphism test inconclusive: {0}")]
    Inconclusive(String),
    #[error("catalog ambiguity at {w}: {detail}")]
    CatalogAmbiguity { w: String, detail: String },
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::Parse(_) => "Parse",
            Error::Usage(_) => "UsageError",
            Error::NotFiniteType(_) => "NotFiniteType",
            Error::NotACoroot(_) => "NotACoroot",
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::RankMismatch(..) => "RankMismatch",
            Error::ZeroDirection => "ZeroDirection",
            Error::DenominatorOverflow(_) => "DenominatorOverflow",
            Error::NonExactDivision { .. } => "NonExactDivision",
            Error::NoBasisFound => "NoBasisFound",
            Error::NonInvariantCoefficient(_) => "NonInvariantCoefficient",
            Error::SplitSearchExhausted(_) => "SplitSearchExhausted",
            Error::Inconclusive(_) => "Inconclusive",
            Error::CatalogAmbiguity { .. } => "CatalogAmbiguity",
            Error::Io(_) => "Io",
        }
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("factorization incomplete: {0} exceeds the supported range")]
    FactorizationIncomplete(u64),

    #[error("{p} is ramified in the conductor-{n} field")]
    Ramified { p: u64, n: u64 },

    #[error("groups do not match")]
    GroupMismatch,

    #[error("lemma hypothesis violated: {0}")]
    LemmaHypothesis(String),

    #[error("{0} is not a residue-degree candidate: no cyclic subgroup of that order")]
    NotResidueDegreeCandidate(usize),

    #[error("Gica exclusion: q = {0} is one of 2, 3, 5, 7, 17")]
    GicaExclusion(u64),

    #[error("proposition hypotheses violated: {0}")]
    HypothesesViolated(String),

    #[error("value out of the exact range: {0}")]
    OutOfRange(String),

    #[error("undecidable at desk scale: {0}")]
    Undecidable(String),

    #[error("no nonprincipality certificate available: {0}")]
    NoCertificate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("table row {row}: {reason}")]
    Table { row: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),

    #[error("candidate `{0}` appears more than once in a ballot")]
    DuplicateCandidate(String),

    #[error("duplicate candidate id `{0}` in candidate list")]
    DuplicateCandidateId(String),

    #[error("empty equivalence class in ballot")]
    EmptyClass,

    #[error("position {position} is out of range 1..={max}")]
    DepthOutOfRange { position: usize, max: usize },

    #[error("committee size k = {k} must satisfy 1 <= k <= m = {m}")]
    InvalidCommitteeSize { k: usize, m: usize },

    #[error("profile has no voters")]
    EmptyProfile,

    #[error("profile has no candidates")]
    NoCandidates,

    #[error("operation requires strict (linear) preferences")]
    NotStrict,

    #[error("operation requires dichotomous preferences")]
    NotDichotomous,

    #[error("quota {quota} lies outside the admissible interval ({lower}, {upper}]")]
    QuotaNotAdmissible {
        quota: String,
        lower: String,
        upper: String,
    },

    #[error("invalid quota: {0}")]
    InvalidQuota(String),

    #[error("supporter weight {support} does not meet quota {quota}")]
    BelowQuota { support: String, quota: String },

    #[error("{what} = {value} exceeds the configured bound {limit}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("election stalled with {elected} of {k} seats filled: no candidate reaches the quota")]
    Stalled { elected: usize, k: usize },

    #[error("committee must contain exactly k = {k} distinct candidates, got {got}")]
    CommitteeSize { k: usize, got: usize },

    #[error("{0}")]
    InvalidConfig(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

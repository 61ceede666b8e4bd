use thiserror::Error;

/// Failure modes shared by every module. The CLI maps each variant to an exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input text (interchange file, rational, vertex list).
    #[error("parse error: {0}")]
    Parse(String),

    /// A checked hypothesis of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The instance exceeds an enumeration limit.
    #[error("size limit: {0}")]
    Size(String),

    /// A stage of the randomized pipeline could not continue.
    #[error("pipeline stage `{stage}` failed: {message}")]
    Pipeline { stage: String, message: String },

    /// The absorbing family ran out of members able to absorb `set`.
    #[error("absorption stuck: no unused family member absorbs {set:?}")]
    AbsorptionStuck { set: Vec<u32> },

    /// An exact certificate failed to verify. Always a bug.
    #[error("internal certificate failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }

    pub(crate) fn pipeline(stage: &str, msg: impl Into<String>) -> Self {
        Error::Pipeline {
            stage: stage.to_string(),
            message: msg.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Parse(_) | Error::Precondition(_) => 1,
            Error::Size(_) => 2,
            Error::Pipeline { .. } | Error::AbsorptionStuck { .. } | Error::Internal(_) => 3,
        }
    }

    /// Short tag used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Parse(_) => "parse",
            Error::Precondition(_) => "precondition",
            Error::Size(_) => "size",
            Error::Pipeline { .. } => "pipeline",
            Error::AbsorptionStuck { .. } => "absorption-stuck",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Whether an enumeration limit is enforced or only reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Guard {
    #[default]
    Enforce,
    /// Run past the limit; the caller is expected to warn.
    Force,
}

impl Guard {
    pub(crate) fn check(self, what: &str, value: usize, limit: usize) -> Result<()> {
        if value > limit && self == Guard::Enforce {
            return Err(Error::size(format!(
                "{what}: n = {value} exceeds the exhaustive limit {limit} (use --force to override)"
            )));
        }
        Ok(())
    }
}

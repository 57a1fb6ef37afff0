use thiserror::Error;

use crate::cyclo::CongruenceGuard;
use crate::table::ValidationReport;

/// Errors raised by the engine. Every variant carries enough context to name
/// the offending table, class or character.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero{}", ctx_suffix(.0))]
    DivisionByZero(String),

    #[error("parse error at position {position}: {message}{}", ctx_suffix(.context))]
    Parse {
        position: usize,
        message: String,
        context: String,
    },

    #[error("malformed input at line {line}, column {column}: {message}")]
    Format {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsatisfiable guard{}", ctx_suffix(.0))]
    UnsatisfiableGuard(String),

    #[error("q = {q} violates guard {guard}")]
    GuardViolation { q: i64, guard: CongruenceGuard },

    #[error("unknown class `{class}` in group `{group}`")]
    UnknownClass { group: String, class: String },

    #[error("unknown character `{name}` in group `{group}`")]
    UnknownCharacter { group: String, name: String },

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("incomplete registry: {0}")]
    IncompleteRegistry(String),

    #[error("rank deficient: rank {rank} < {expected} ({context})")]
    RankDeficient {
        rank: usize,
        expected: usize,
        context: String,
    },

    #[error("no integer solution: {0}")]
    NoIntegerSolution(String),

    #[error("inconsistent system: {0}")]
    Inconsistent(String),

    #[error("non-invertible matrix: {0}")]
    NonInvertibleMatrix(String),

    #[error("inconsistent table data:\n{0}")]
    InconsistentTable(ValidationReport),

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("sign mismatch: {0}")]
    SignMismatch(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("i/o error on `{path}`: {message}")]
    Io { path: String, message: String },
}

fn ctx_suffix(ctx: &str) -> String {
    if ctx.is_empty() {
        String::new()
    } else {
        format!(" ({ctx})")
    }
}

/// Process exit categories used by the command line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Validation = 1,
    Parse = 2,
    Mathematical = 3,
}

impl Error {
    pub fn exit_class(&self) -> ExitClass {
        match self {
            Error::Parse { .. } | Error::Format { .. } => ExitClass::Parse,
            Error::RankDeficient { .. }
            | Error::NoIntegerSolution(_)
            | Error::Inconsistent(_)
            | Error::NonInvertibleMatrix(_)
            | Error::DivisionByZero(_)
            | Error::SignMismatch(_) => ExitClass::Mathematical,
            _ => ExitClass::Validation,
        }
    }

    /// Prefixes a context string onto errors that carry free-form context.
    pub fn context(self, what: impl AsRef<str>) -> Error {
        let what = what.as_ref();
        let join = |s: String| {
            if s.is_empty() {
                what.to_string()
            } else {
                format!("{what}: {s}")
            }
        };
        match self {
            Error::DivisionByZero(s) => Error::DivisionByZero(join(s)),
            Error::Parse {
                position,
                message,
                context,
            } => Error::Parse {
                position,
                message,
                context: join(context),
            },
            Error::UnsatisfiableGuard(s) => Error::UnsatisfiableGuard(join(s)),
            Error::SupportMismatch(s) => Error::SupportMismatch(join(s)),
            Error::DimensionMismatch(s) => Error::DimensionMismatch(join(s)),
            Error::IncompleteRegistry(s) => Error::IncompleteRegistry(join(s)),
            Error::RankDeficient {
                rank,
                expected,
                context,
            } => Error::RankDeficient {
                rank,
                expected,
                context: join(context),
            },
            Error::NoIntegerSolution(s) => Error::NoIntegerSolution(join(s)),
            Error::Inconsistent(s) => Error::Inconsistent(join(s)),
            Error::NonInvertibleMatrix(s) => Error::NonInvertibleMatrix(join(s)),
            Error::MissingData(s) => Error::MissingData(join(s)),
            Error::SignMismatch(s) => Error::SignMismatch(join(s)),
            Error::Precondition(s) => Error::Precondition(join(s)),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::fmt;

use qlift_core::Error;

/// Exit codes of the `qlift` binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Io = 1,
    Usage = 2,
    Format = 3,
    Dimension = 4,
    Constraint = 5,
    Falsifier = 6,
}

impl Kind {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Io => "io",
            Kind::Usage => "usage",
            Kind::Format => "format",
            Kind::Dimension => "dimension",
            Kind::Constraint => "constraint",
            Kind::Falsifier => "falsifier",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub reason: String,
}

impl CliError {
    pub fn new(kind: Kind, reason: impl Into<String>) -> Self {
        Self {
            kind,
            reason: reason.into(),
        }
    }

    pub fn usage(reason: impl Into<String>) -> Self {
        Self::new(Kind::Usage, reason)
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Self::new(Kind::Io, format!("{}: {e}", path.display()))
    }
}

/// Single line: `error: kind=<name> code=<n> reason="<text>"`.
impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reason = self.reason.replace('\n', " ");
        write!(
            f,
            "error: kind={} code={} reason={:?}",
            self.kind.name(),
            self.kind.code(),
            reason
        )
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::Format(_) | Error::NonFinite(_) => Kind::Format,
            Error::DimensionMismatch(_)
            | Error::IndexOutOfRange(_)
            | Error::InsufficientEnvironment { .. } => Kind::Dimension,
            Error::InvalidArgument(_) => Kind::Usage,
            Error::NotHermitian { .. }
            | Error::NotPositive { .. }
            | Error::NotNormalized { .. }
            | Error::KrausNormalization { .. }
            | Error::BadLiftEntry { .. }
            | Error::Constraint(_) => Kind::Constraint,
        };
        Self::new(kind, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

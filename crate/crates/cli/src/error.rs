use std::fmt;

use serde::Serialize;

/// Failure classes with a stable exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable input, unsupported parameters: exit 2.
    Usage(String),
    /// A mathematical check failed: exit 1.
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Violation(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Violation(_) => "violation",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Violation(m) => m,
        }
    }

    pub fn report(&self, json: bool) {
        if json {
            #[derive(Serialize)]
            struct Payload<'a> {
                error: &'a str,
                message: &'a str,
                exit_code: i32,
            }
            let p = Payload { error: self.kind(), message: self.message(), exit_code: self.exit_code() };
            eprintln!("{}", serde_json::to_string(&p).expect("plain struct serializes"));
        } else {
            eprintln!("error: {self}");
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}

impl From<linepack_core::Error> for CliError {
    fn from(e: linepack_core::Error) -> Self {
        use linepack_core::Error as E;
        match e {
            E::Parse(_)
            | E::InvalidInput(_)
            | E::InvalidDegree(..)
            | E::Unsupported(_)
            | E::DimensionMismatch(_)
            | E::ReducibleModulus { .. }
            | E::ElementOutOfRange(_)
            | E::EmptyIndexSet
            | E::IndexOutOfRange(_) => CliError::Usage(e.to_string()),
            E::DivisionByZero | E::ZeroParameter | E::Consistency(_) => CliError::Violation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

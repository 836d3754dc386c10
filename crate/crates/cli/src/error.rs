use std::fmt;
use std::process::ExitCode;

/// Everything a subcommand can fail with, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
    Lib(dupzero_core::Error),
    /// A `verify` check ran and found a violation.
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use dupzero_core::Error as E;
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Check(_) => 1,
            CliError::Lib(E::BudgetExceeded { .. }) => 3,
            CliError::Lib(E::Invariant(_)) => 4,
            CliError::Lib(_) => 2,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Check(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<dupzero_core::Error> for CliError {
    fn from(e: dupzero_core::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => CliError::Io(e),
            other => CliError::Io(std::io::Error::other(format!("{other:?}"))),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

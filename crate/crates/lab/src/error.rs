use std::fmt;

/// Everything that stops a command before it can report checks. All of
/// these exit with status 2.
#[derive(Debug)]
pub enum LabError {
    Usage(String),
    Parse { source: String, line: usize, column: usize, message: String },
    Validation(String),
    Io { path: String, message: String },
    Engine(bessel_core::error::Error),
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabError::Usage(msg) => write!(f, "usage error: {msg}"),
            LabError::Parse { source, line, column, message } => {
                write!(f, "parse error in {source} at line {line}, column {column}: {message}")
            }
            LabError::Validation(msg) => write!(f, "invalid input: {msg}"),
            LabError::Io { path, message } => write!(f, "cannot read {path}: {message}"),
            LabError::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LabError {}

impl From<bessel_core::error::Error> for LabError {
    fn from(e: bessel_core::error::Error) -> Self {
        LabError::Engine(e)
    }
}

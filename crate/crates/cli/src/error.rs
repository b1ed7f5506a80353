use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            error: &'a str,
            message: String,
            exit_code: i32,
        }
        let body = Body { error: self.kind(), message: self.to_string(), exit_code: self.exit_code() };
        serde_json::to_string(&body).expect("error body serializes")
    }
}

impl From<catenary_core::Error> for CliError {
    fn from(e: catenary_core::Error) -> Self {
        use catenary_core::Error as E;
        match e {
            E::Io(m) => CliError::Io(m),
            E::InvalidParameter(_) | E::SingularState { .. } | E::Format(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

use iptree::Error;
use thiserror::Error;

/// Errors surfaced by the command line, each with a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Carrier(String),
    #[error("{0}")]
    Cap(String),
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    /// Attaches a field path to a library error and classifies it.
    pub fn at(field: &str, e: Error) -> Self {
        let msg = format!("{field}: {e}");
        match e {
            Error::CarrierMismatch(_) => CliError::Carrier(msg),
            Error::EnumerationCapExceeded { .. } | Error::SizeCapExceeded { .. } => CliError::Cap(msg),
            Error::InvalidPlan(_) | Error::EpsilonOutOfRange { .. } | Error::RealizedNotInHorizon(_) => {
                CliError::Plan(msg)
            }
            _ => CliError::Parse(msg),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Carrier(_) => 3,
            CliError::Cap(_) => 4,
            CliError::Plan(_) => 5,
            CliError::Other(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CarrierMismatch(m) => CliError::Carrier(format!("carrier mismatch: {m}")),
            Error::EnumerationCapExceeded { ref required, ref cap } => {
                let pow = |n| match Error::power_of_two_hint(n) {
                    Some(k) => format!("2^{k}"),
                    None => n.to_string(),
                };
                CliError::Cap(format!(
                    "enumeration needs {} vertex assignments, cap is {}",
                    pow(required),
                    pow(cap)
                ))
            }
            Error::SizeCapExceeded { .. } => CliError::Cap(e.to_string()),
            Error::InvalidPlan(_) | Error::EpsilonOutOfRange { .. } | Error::RealizedNotInHorizon(_) => {
                CliError::Plan(e.to_string())
            }
            _ => CliError::Parse(e.to_string()),
        }
    }
}

use thiserror::Error;

use crate::critical::ScanReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    /// The requested work exceeds a desk-scale enumeration budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Threshold machinery was asked for a clause length outside the proven
    /// regime (k >= 5), or the expected root structure was not found.
    #[error("unproven regime for k = {k}: {report}")]
    Unproven { k: u32, report: Box<ScanReport> },

    #[error("root not bracketed: {0}")]
    NotBracketed(String),

    #[error("integer overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(what: &'static str, value: f64, domain: impl Into<String>) -> Self {
        Error::Domain {
            what,
            value,
            domain: domain.into(),
        }
    }
}

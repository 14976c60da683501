use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the quantity is defined.
    /// `boundary` carries the limiting value when one exists (for example the
    /// largest admissible fugacity of a Bose-like state).
    #[error("domain error: {message}")]
    Domain {
        message: String,
        boundary: Option<f64>,
    },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// A numerical procedure stopped before reaching its accuracy target.
    #[error("accuracy error: {message} (best value {value:e}, bound {bound:e})")]
    Accuracy {
        message: String,
        value: f64,
        bound: f64,
    },
}

impl Error {
    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain {
            message: message.into(),
            boundary: None,
        }
    }

    pub(crate) fn domain_with_boundary(message: impl Into<String>, boundary: f64) -> Self {
        Error::Domain {
            message: message.into(),
            boundary: Some(boundary),
        }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain { .. })
    }
}

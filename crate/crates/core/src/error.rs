use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input outside the mathematical domain of a function.
    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: value {value}, error estimate {error_estimate}")]
    Accuracy { value: f64, error_estimate: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("outcome space of 2^{edges} graphs is too large (at most 2^{max_edges})")]
    OutcomeSpaceTooLarge { edges: usize, max_edges: usize },

    #[error("cannot parse {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: impl Into<f64>, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value: value.into(),
            domain,
        }
    }
}

use thiserror::Error;

/// Errors raised by the link model, the solvers and the experiment runners.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system parameter `{name}` = {value}: {reason}")]
    InvalidParams {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("invalid argument `{name}` = {value}: {reason}")]
    InvalidArgument {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// No allocation satisfies the constraints (e.g. the circuit of the
    /// backscatter node can never be powered).
    #[error("problem is infeasible: {0}")]
    Infeasible(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("failed to parse configuration {path}: {source}")]
    ConfigParse {
        path: String,
        #[source]
        source: toml::de::Error,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

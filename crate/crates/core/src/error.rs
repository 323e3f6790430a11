use thiserror::Error;

/// Errors raised by the workbench operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("assignment has {got} bits, polynomial has {expected} variables")]
    BitLength { expected: usize, got: usize },

    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("{what} limit exceeded: requested {requested}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("constant terms are not allowed")]
    ConstantTerm,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is singular or not positive definite (min eigenvalue {0:.3e})")]
    Singular(f64),

    #[error("scale factor too large: c*||A|| = {0} must be below 1")]
    ScaleTooLarge(f64),

    #[error("photon number mismatch: input has {input}, output has {output}")]
    PhotonMismatch { input: usize, output: usize },

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            position: e.column(),
            message: e.to_string(),
        }
    }
}

pub(crate) fn check_cap(what: &'static str, requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        Err(Error::CapExceeded {
            what,
            requested,
            cap,
        })
    } else {
        Ok(())
    }
}

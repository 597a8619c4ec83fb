use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the function it was passed to.
    #[error("domain error: {0}")]
    Domain(String),

    /// `wing_floor * gamma / gamma_s` exceeds one, so the wing factor would
    /// enhance rather than suppress the far wing.
    #[error("degenerate wing: wing_floor*gamma/gamma_s = {ratio} exceeds 1")]
    DegenerateWing { ratio: f64 },

    #[error("halfwidth never saturates: linear pressure slope is {slope}")]
    NoSaturation { slope: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("spectral ranges do not overlap: [{a_lo}, {a_hi}] vs [{b_lo}, {b_hi}]")]
    DisjointRanges {
        a_lo: f64,
        a_hi: f64,
        b_lo: f64,
        b_hi: f64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("I/O error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("{0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the filesystem or a stream, as opposed to bad
    /// parameters or data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Stream(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

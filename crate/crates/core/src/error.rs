use thiserror::Error;

/// Failure modes shared by all numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: argument outside the domain ({detail})")]
    Domain { op: &'static str, detail: String },

    #[error("{op}: result exceeds the representable range ({detail})")]
    Overflow { op: &'static str, detail: String },

    #[error("{op} requires {requirement}; got dims {dims}")]
    Dimension {
        op: &'static str,
        requirement: &'static str,
        dims: String,
    },

    #[error("{op}: index ({i}, {j}) out of range for order {order}")]
    IndexOutOfRange {
        op: &'static str,
        i: usize,
        j: usize,
        order: usize,
    },

    #[error("{op}: precision lost ({detail})")]
    Precision { op: &'static str, detail: String },

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("{op}: {detail}")]
    Unsupported { op: &'static str, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{op}: numerical failure ({detail})")]
    Numerical { op: &'static str, detail: String },
}

pub type Result<V> = std::result::Result<V, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}

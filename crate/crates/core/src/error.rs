use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input text, with a line/column or field-path location.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty conditioning event on [{lo}, {hi}]")]
    EmptyConditioningEvent { lo: f64, hi: f64 },

    #[error("median condition fails: median(seller) = {seller} > median(buyer) = {buyer}")]
    MedianConditionFails { seller: f64, buyer: f64 },

    #[error("atomless required: {0} has point masses (smooth it first)")]
    AtomlessRequired(&'static str),

    #[error("no beneficial trade: r = 0")]
    NoBeneficialTrade,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidDistribution(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

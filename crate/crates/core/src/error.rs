use thiserror::Error;

/// Errors raised by the numerical kernels, the operator pipeline and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("numerator Gamma argument {arg} is a pole")]
    NumeratorPole { arg: f64 },

    #[error("denominator Gamma argument {arg} is a pole")]
    DenominatorPole { arg: f64 },

    /// A numerator Gamma of the series coefficient at index `k`, offset `j`
    /// (1-based), sits on a pole; the coefficient is undefined.
    #[error("coefficient {k}: numerator Gamma(stride*k + a_{j}) = Gamma({arg}) is a pole")]
    CoefficientPole { k: usize, j: usize, arg: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series did not converge within {terms} terms (tail {tail:e}, |value| {value:e})")]
    NoConvergence { terms: usize, tail: f64, value: f64 },

    #[error("term x^{exponent} is outside the domain of an order-{order} fractional operator")]
    UnsupportedExponent { exponent: f64, order: f64 },

    #[error("series layouts differ: {0}")]
    LayoutMismatch(String),

    #[error("pipeline stage {index}: {source}")]
    Stage {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

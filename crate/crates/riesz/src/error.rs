use thiserror::Error;

/// Failures raised by algebra, spectral and inverse computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("tail rules do not combine in closed form: {0}")]
    TailNotClosed(String),
    #[error("invalid tail rule: {0}")]
    InvalidTail(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("element is not invertible: {witness}")]
    NotInvertible { witness: String },
    #[error("not an idempotent: residual {0:e}")]
    NotIdempotent(f64),
    #[error("elements do not commute: residual {0:e}")]
    NotCommuting(f64),
    #[error("point {0} lies on the spectrum")]
    OnSpectrum(String),
    #[error("target is not a clopen part of the spectrum: {0}")]
    NotClopen(String),
    #[error("a dense tail region is split by the target: {0}")]
    TailStraddles(String),
    #[error("|xi| = {xi} does not exceed 2 r = {bound}")]
    XiTooSmall { xi: f64, bound: f64 },
    #[error("0 does not belong to the spectral set")]
    ZeroNotInSet,
    #[error("split is not certified")]
    SplitNotCertified,
    #[error("0 lies in the complement part")]
    ZeroOutside,
    #[error("element is not Browder")]
    NotBrowder,
    #[error("element is not generalized Drazin-Riesz invertible: {0}")]
    NotGdrInvertible(String),
    #[error("window index too small: r_n = {0}")]
    WindowTooSmall(f64),
    #[error("point outside the admissible domain: {0}")]
    OutsideDomain(String),
    #[error("powers of the window and its complement collide")]
    PowerCollision,
    #[error("0 is not in the spectrum")]
    ZeroNotInSpectrum,
    #[error("products are not zero: residual {0:e}")]
    ProductsNotZero(f64),
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("no invertible combination a + lambda b on the search grid")]
    NoInvertibleCombination,
    #[error("hypothesis unsatisfied: {0}")]
    HypothesisUnsatisfied(String),
    #[error("generator exhausted: {0}")]
    GeneratorExhausted(String),
    #[error("internal disagreement: {0}")]
    InternalDisagreement(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

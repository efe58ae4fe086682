use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its domain; the message names the invariant.
    #[error("{0}")]
    Invalid(String),

    /// `2^(n*util) - 1` is not representable: the plan is infeasible.
    #[error("threshold overflow: 2^({n} * {util}) - 1 is not representable")]
    ThresholdOverflow { n: u32, util: f64 },

    /// The rate cannot be met even without interference.
    #[error("noise-infeasible: 1/beta = {inv_beta:e} does not exceed 1/(n*SNR) = {noise:e} at n = {n}")]
    NoiseInfeasible { n: u32, inv_beta: f64, noise: f64 },

    #[error("domain error: lambert_w0 is defined here only on [-1/e, 0], got {0}")]
    Domain(f64),

    #[error("not bracketed: outage {p_out} at density {hi:e} (bracket [{lo:e}, {hi:e}]) never exceeded {target}")]
    NotBracketed { lo: f64, hi: f64, p_out: f64, target: f64 },

    #[error("outage {p_out} already exceeds {target} at zero density")]
    InfeasibleAtZeroDensity { p_out: f64, target: f64 },

    #[error("max iterations: bisection stopped after {iters} steps with bracket [{lo:e}, {hi:e}] and outage {p_out} (target {target} +/- {tol})")]
    MaxIterations { iters: u32, lo: f64, hi: f64, p_out: f64, target: f64, tol: f64 },

    #[error("insufficient truncation: tail bound {tail:e} exceeds 1% of partial sum {partial:e} at {cells} cells")]
    InsufficientTruncation { tail: f64, partial: f64, cells: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by bad inputs rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Invalid(_) | Error::Domain(_))
    }
}

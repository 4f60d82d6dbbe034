use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "particle is untrapped (a_z = {a_z:e}, q_z = {q_z:e}): no confining secular potential"
    )]
    Untrapped { a_z: f64, q_z: f64 },

    #[error("trap is unstable: (a_z, q_z) = ({a_z:.4}, {q_z:.4}) lies outside the lowest Mathieu stability region")]
    UnstableTrap { a_z: f64, q_z: f64 },

    #[error("time step {dt:e} s exceeds the stability guard {limit:e} s (dt * fastest rate must be <= 0.05)")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("state became non-finite at t = {t:e} s ({detail})")]
    NonFinite { t: f64, detail: String },

    #[error("trajectory too short: {len} samples, need at least {needed}")]
    TrajectoryTooShort { len: usize, needed: usize },

    #[error("equilibrium temperature diverges for gain G = {gain} (requires G < 1)")]
    DivergentTemperature { gain: f64 },

    #[error("feedback noise temperature {noise_temperature:e} K is not below the circuit temperature {circuit_temperature:e} K: feedback cannot cool")]
    NoCoolingBenefit {
        noise_temperature: f64,
        circuit_temperature: f64,
    },

    #[error(
        "damping rate {gamma:e} 1/s is below the detection limit 4*bandwidth = {required:e} 1/s"
    )]
    BelowDetectionLimit { gamma: f64, required: f64 },

    #[error("unsupported potential: {0}")]
    UnsupportedPotential(&'static str),

    #[error("unsupported circuit topology: {0}")]
    UnsupportedTopology(&'static str),

    #[error("drift matrix is not Hurwitz (max real eigenvalue {max_real:e}): no steady state")]
    NoSteadyState { max_real: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("linear solve failed: {0}")]
    Singular(&'static str),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

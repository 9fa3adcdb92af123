use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} index {index} out of range (expected {lo}..={hi})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        lo: usize,
        hi: usize,
    },
    #[error("theta is too close to 1 at boundary sample {point} (theta = {theta})")]
    DegenerateTheta { point: usize, theta: f64 },
    #[error("first boundary coefficient is singular at sample {point}; condition cannot be normalized")]
    NonNormalizable { point: usize },
    #[error("surface sampler is empty")]
    EmptySampler,
    #[error("invalid boundary frame: {0}")]
    InvalidFrame(String),
    #[error("grid of {n} points is too small (need at least {min})")]
    GridTooSmall { n: usize, min: usize },
    #[error("lambda = {lambda} is outside the open gap (-{edge}, {edge})")]
    OutsideGap { lambda: f64, edge: f64 },
    #[error("lambda = {lambda} is not an eigenvalue of the half-line model problem")]
    NotAnEigenvalue { lambda: f64 },
    #[error("radial schedule has {have} radii but {need} shells were requested")]
    ScheduleTooShort { have: usize, need: usize },
    #[error("radial schedule must be strictly increasing and positive")]
    ScheduleNotIncreasing,
    #[error("window ({lo}, {hi}) is not inside the spectral gap (-{edge}, {edge})")]
    WindowOutsideGap { lo: f64, hi: f64, edge: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid coefficient table: {0}")]
    InvalidTable(String),
    #[error("potential must be real-valued")]
    ComplexPotential,
    #[error("lower limit {inf} exceeds upper limit {sup}")]
    InvalidBounds { sup: f64, inf: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

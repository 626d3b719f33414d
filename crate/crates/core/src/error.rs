use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid temporal edge {label}@{from} -- {label}@{to}: {reason}")]
    InvalidTemporalEdge {
        label: String,
        from: usize,
        to: usize,
        reason: String,
    },

    #[error("unknown vertex {label}@{time}")]
    UnknownVertex { label: String, time: usize },

    #[error("no edge between {0} and {1}")]
    UnknownEdge(String, String),

    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),

    #[error("edge {0} is not a spatial edge")]
    NotSpatial(String),

    #[error("relative coordinate {0} outside [0, 1]")]
    DeltaOutOfRange(f64),

    #[error("true time {time} is inconsistent with {location}")]
    InconsistentTime { time: f64, location: String },

    #[error("true time is required for points of a periodic graph")]
    MissingTrueTime,

    #[error("true time is only meaningful for points of a periodic graph")]
    UnexpectedTrueTime,

    #[error("points lie in different connected components")]
    DifferentComponents,

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    Asymmetric(f64),

    #[error("parameter {name} = {value} out of range: {expected}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("time {tau} is not part of the lifespan")]
    TimeOutsideLifespan { tau: usize },

    #[error("metric parameters do not match the graph's time model: {0}")]
    ModelMismatch(String),

    #[error("distance {value:e} between distinct points {p1} and {p2} is numerically zero")]
    DegenerateDistance { value: f64, p1: String, p2: String },

    #[error("argument must be nonnegative, got {0}")]
    NegativeArgument(f64),

    #[error("covariance matrix is not positive semidefinite even with jitter {0:e}")]
    NotPositiveSemidefinite(f64),

    #[error("{0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

use thiserror::Error;

/// Errors raised across the toolkit.
///
/// The split between input problems and numerical failures matters to callers
/// (the command-line front end maps them to different exit codes), see
/// [`Error::is_numeric`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at `{path}`: {message}")]
    Syntax { path: String, message: String },

    #[error("invalid value at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("compact set is empty")]
    EmptySet,

    #[error("grid has no interior nodes")]
    EmptyInterior,

    #[error("grid of {nodes} nodes exceeds the node budget of {cap}")]
    GridTooLarge { nodes: usize, cap: usize },

    #[error("conjugate gradient broke down after {iterations} iterations (residual {residual:e})")]
    CgBreakdown { iterations: usize, residual: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("evaluation point coincides with a measure node")]
    OnNode,

    #[error("point ({x}, {y}) lies outside the safe evaluation region")]
    OutsideSafeRegion { x: f64, y: f64 },

    #[error("field vanishes identically")]
    ZeroField,

    #[error("field support touches the domain boundary")]
    SupportTouchesBoundary,

    #[error("J = ln 2 - I is not positive ({0})")]
    NonPositiveJ(f64),

    #[error("set is polar (capacity zero)")]
    Polar,

    #[error("cells {cells:?} have capacity below {delta}")]
    InsufficientCapacity { cells: Vec<(i64, i64)>, delta: f64 },

    #[error("witness field is missing cell ({0}, {1})")]
    IncompleteField(i64, i64),

    #[error("sample set is empty")]
    EmptySamples,

    #[error("unsupported scene: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::EmptyInterior
                | Error::CgBreakdown { .. }
                | Error::NonConvergence { .. }
                | Error::OnNode
                | Error::ZeroField
                | Error::NonPositiveJ(_)
                | Error::InsufficientCapacity { .. }
                | Error::IncompleteField(..)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph specification: {0}")]
    InvalidSpec(String),

    #[error("failed to parse edge list: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("start set is empty")]
    EmptyStart,

    #[error("start set misses the connected component containing vertex {0}")]
    StartMissesComponent(usize),

    #[error(
        "{uncertain} white vertices have a fractional force probability, over the frontier cap of {cap}; \
         use the Monte Carlo engine (--mode mc)"
    )]
    FrontierCap { uncertain: usize, cap: usize },

    #[error("reachable state space exceeds the cap of {cap} states; use the Monte Carlo engine (--mode mc)")]
    StateCap { cap: usize },

    #[error("exhaustive search over {n} vertices exceeds the cap of {cap} vertices")]
    SearchCap { n: usize, cap: usize },

    #[error("trial did not finish within {cap} rounds")]
    RoundCap { cap: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors raised by a resource cap rather than by bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::FrontierCap { .. } | Error::StateCap { .. } | Error::SearchCap { .. } | Error::RoundCap { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

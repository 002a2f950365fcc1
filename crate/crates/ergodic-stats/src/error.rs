use thiserror::Error;

use dynamics_core::DynamicsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),

    #[error("sample count must be at least 1")]
    EmptySample,

    #[error("observable frequency has {frequency} rotation components, the point has {point}")]
    FrequencyArityMismatch { frequency: usize, point: usize },

    #[error("observable uses the center coordinate but the point has none")]
    MissingCenterCoordinate,

    #[error("this statistic needs a system with a center factor")]
    NeedsCenter,

    #[error("this statistic is defined for systems without a center factor")]
    CenterNotSupported,

    #[error("histogram needs at least 2 bins per coordinate, got {bins}")]
    TooFewBins { bins: usize },

    #[error("histogram dims cover {dims} coordinates but the system has {coords}")]
    DimsMismatch { dims: usize, coords: usize },

    #[error("box resolution eps must lie in (0, 1], got {eps}")]
    BadBoxResolution { eps: f64 },

    #[error("probe would allocate {boxes} boxes; the cap is {cap}")]
    TooManyBoxes { boxes: u128, cap: u128 },

    #[error("sandwich tolerance eps must be positive, got {eps}")]
    BadTolerance { eps: f64 },

    #[error("start point did not resolve to a sink; sandwich bound needs a resolved start")]
    UnresolvedStart,

    #[error("center frequency box requested on a system without a center factor")]
    CenterFrequencyWithoutCenter,

    #[error("frequency box bounds must be nonnegative")]
    NegativeFrequencyBound,
}

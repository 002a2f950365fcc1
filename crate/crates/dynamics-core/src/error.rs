use thiserror::Error;

/// Errors raised while constructing or driving the product systems.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("matrix determinant must be 1, got {det}")]
    NotUnimodular { det: i128 },

    #[error("matrix trace must satisfy |a+d| > 2 for hyperbolicity, got trace {trace}")]
    NotHyperbolic { trace: i64 },

    #[error("matrix entries must have magnitude below 2^32, got {entry}")]
    EntryTooLarge { entry: i64 },

    #[error("{p} is not prime")]
    NotPrime { p: u64 },

    #[error("angle value must reduce to a nonzero fraction in (0,1)")]
    InvalidAngle,

    #[error("center map needs epsilon strictly inside (0,1), got {epsilon}")]
    InvalidEpsilon { epsilon: f64 },

    #[error("center map needs at least one sink")]
    ZeroSinks,

    #[error("a product system needs at least one rotation factor")]
    NoRotations,

    #[error("point has {point} rotation coordinates but the system has {system}")]
    RotationArityMismatch { point: usize, system: usize },

    #[error("point center coordinate is {point_has}present but the system center is {system_has}present")]
    CenterMismatch {
        point_has: &'static str,
        system_has: &'static str,
    },

    #[error("center coordinate must lie in [0,1), got {z}")]
    CenterOutOfRange { z: f64 },

    #[error("sink index {index} out of range: the center map has {sinks} sinks")]
    SinkIndexOutOfRange { index: usize, sinks: usize },

    #[error("not partially hyperbolic: sup|Dh| / lambda_u = {lambda} >= 1")]
    NotPartiallyHyperbolic { lambda: f64 },

    #[error("orbit needs at least one sample and a stride of at least one")]
    EmptyOrbit,
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("index iteration overflowed i64 at ({m}, {n})")]
    IndexOverflow { m: i128, n: i128 },

    #[error("rotation frequency vector must be nonzero")]
    ZeroFrequency,

    #[error("frequency vector length {frequency} does not match {rotations} rotation factors")]
    FrequencyArityMismatch { frequency: usize, rotations: usize },

    #[error("box bound and step budget must be at least 1")]
    EmptyBox,

    #[error("coefficient bound must be at least 1")]
    EmptyCoefficientBox,

    #[error("this certificate is defined for systems without a center factor")]
    CenterNotSupported,
}

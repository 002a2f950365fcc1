//! Orbit statistics for the toral product systems.
//!
//! Everything here consumes exact orbits from `dynamics-core` and reduces
//! them to finite evidence: Birkhoff averages of characters and trig
//! polynomials, Weyl sum tables over frequency boxes, coordinate histograms,
//! Lyapunov block estimates, Monte-Carlo basin surveys of the center factor,
//! the two-orbit sandwich bound, and a box-visiting transitivity probe.
//!
//! Determinism contract: single orbits are serial; every parallel survey
//! keys its per-sample work by sample index and merges with associative
//! integer counts, so results are independent of the worker count. Floating
//! accumulation uses compensated summation in a fixed order.

mod basin;
mod birkhoff;
mod error;
mod histogram;
mod lyapunov;
mod observable;
mod sandwich;
mod transitivity;
mod weyl;

pub use basin::{
    basin_survey, classify_basin, BasinClass, BasinReport, Sampler, SinkStat, SOURCE_GUARD,
};
pub use birkhoff::birkhoff_average;
pub use error::StatsError;
pub use histogram::{empirical_measure, EmpiricalMeasure};
pub use lyapunov::{lyapunov_estimate, LyapunovEstimate};
pub use observable::{BuiltinObservable, LipschitzBound, Observable};
pub use sandwich::{sandwich_check, LadderPoint, SandwichReport};
pub use transitivity::{transitivity_probe, TransitivityReport};
pub use weyl::{rotation_weyl_modulus, weyl_sums, FrequencyBox, WeylRow, WeylSumTable};

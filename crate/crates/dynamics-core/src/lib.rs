//! Exact-arithmetic product dynamics on tori.
//!
//! This crate defines the building blocks of the skew products studied by the
//! rest of the workspace: a hyperbolic toral automorphism `A` on T^2, a tuple
//! of irrational circle rotations, and an optional Morse-Smale circle
//! diffeomorphism `h` on the center factor. The product with the center
//! absent is volume preserving; with the center present it is a partially
//! hyperbolic diffeomorphism whose center factor carries finitely many sinks.
//!
//! Torus and rotation coordinates are stored as 64-bit fixed-point fractions
//! ([`TorusCoord`]), so the automorphism and the rotations are evaluated
//! exactly modulo 1: long orbits of the chaotic factor are free of roundoff
//! accumulation and are bit-reproducible. Only the center coordinate, whose
//! map involves a sine, lives in floating point.

mod angle;
mod cat;
mod error;
mod morse_smale;
mod system;
mod torus;
pub mod trig;

pub use angle::{rationally_independent_by_construction, AngleSpec, AngleTag};
pub use cat::CatMap;
pub use error::DynamicsError;
pub use morse_smale::{FixedPoint, FixedPointKind, MorseSmaleMap};
pub use system::{
    OrbitIter, PartialHyperbolicityCertificate, ProductSystem, SystemPoint,
};
pub use torus::TorusCoord;

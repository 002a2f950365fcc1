//! Character-lattice dynamics behind the ergodicity of the toral products.
//!
//! Composing a character `e^{2 pi i (m x + n y + <k, w>)}` with the product
//! map sends the torus frequency `(m, n)` through the transpose of the
//! matrix and multiplies the coefficient by the unit phase
//! `e^{2 pi i <alpha, k>}`. Any invariant L^2 observable therefore has
//! Fourier coefficients of constant modulus along each index orbit. Two
//! finite checks turn that into numerical evidence of unique ergodicity:
//!
//! * every nonzero `(m, n)` in a frequency box escapes the box in finitely
//!   many transpose steps ([`escape_certificate`]), so a square-summable
//!   coefficient family must vanish there;
//! * `e^{2 pi i <alpha, k>}` stays away from 1 for all small nonzero `k`
//!   ([`rotation_margin`]), so pure rotation frequencies vanish too.
//!
//! [`ergodicity_certificate`] bundles both checks into one report.

mod coefficient;
mod ergodicity;
mod error;
mod escape;
mod index;
mod margin;

pub use coefficient::CoefficientRelation;
pub use ergodicity::{
    ergodicity_certificate, ErgodicityCertificate, MarginEntry, DEFAULT_MARGIN_FLOOR,
    DEFAULT_STEP_BUDGET,
};
pub use error::LatticeError;
pub use escape::{escape_certificate, EscapeCertificate, EscapeEntry};
pub use index::{index_step, FrequencyIndex};
pub use margin::{
    frequency_dot, independence_falsifier, rotation_margin, RationalRelation,
};

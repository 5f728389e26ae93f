//! Reconstruction of bandlimited functions from equispaced samples.
//!
//! Three reconstruction operators are provided:
//!
//! - the truncated Shannon sampling sum `S_T f`,
//! - the partial sum `P_{ψ,T} f` regularized by a frequency window `ψ̂`,
//! - the localized, interpolating formula `R_{φ,m} f` regularized by a
//!   compactly supported time window `φ` (sinh-type or continuous
//!   Kaiser–Bessel).
//!
//! Alongside the operators, [`bounds`] evaluates the closed-form operator
//! norm, approximation and robustness bounds, and [`harness`] runs the
//! numerical experiments that check measured errors against those bounds.
//!
//! All scalar special functions needed by the windows and bounds live in
//! [`specfun`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod harness;
pub mod quad;
pub mod reconstruct;
pub mod sampling;
pub mod specfun;
pub mod windows;

pub use error::{Error, Result};
pub use reconstruct::{Method, Reconstructor};
pub use sampling::{BandlimitedTestFunction, NoiseKind, NoiseModel, SampleSet};
pub use windows::{
    FrequencyWindow, FrequencyWindowKind, SamplingConfig, TimeWindow, TimeWindowKind,
};

//! AoA-based shallow-water multipath channel model and ergodic capacity of a
//! single-transmitter link received on one acoustic vector sensor
//! (pressure plus range and depth particle velocity).
//!
//! * [`channel`]: AoA densities, AoA-conditioned Rayleigh gains, sampling.
//! * [`capacity`]: instantaneous and Monte Carlo ergodic capacity, Jensen bound.
//! * [`geometry`]: image-method eigenrays and BELLHOP arrivals files.
//! * [`fitting`]: scaled-Gaussian fit of gain against AoA.
//! * [`experiment`]: config-driven commands behind the `avs` binary.
//!
//! Numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the type for common use.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod capacity;
pub mod channel;
pub mod experiment;
pub mod fitting;
pub mod geometry;
pub mod quadrature;
pub mod scalar;

pub use scalar::Scalar;

pub type GainModel = channel::ScaledGaussianGainModel<f64>;
pub type GainModelF32 = channel::ScaledGaussianGainModel<f32>;
pub type TriangularAoa = channel::TriangularAoaModel<f64>;
pub type TriangularAoaF32 = channel::TriangularAoaModel<f32>;
pub type TruncatedAoa = channel::TruncatedAoaModel<f64>;
pub type TruncatedAoaF32 = channel::TruncatedAoaModel<f32>;
pub type Snr = capacity::SnrSpec<f64>;
pub type SnrF32 = capacity::SnrSpec<f32>;
pub type Scenario64 = geometry::Scenario<f64>;
pub type ScenarioF32 = geometry::Scenario<f32>;
pub type Ray = geometry::Eigenray<f64>;
pub type RayF32 = geometry::Eigenray<f32>;
pub type Realization = channel::ChannelRealization<f64>;
pub type RealizationF32 = channel::ChannelRealization<f32>;

//! Statistical multipath channel: AoA densities, AoA-conditioned Rayleigh
//! path gains, channel sampling and the three vector-sensor energies.
//!
//! All model types are immutable once built. Sampling functions take the
//! random stream explicitly; nothing here holds mutable state.

mod aoa;
mod gain;
mod realization;

pub use aoa::{AoaDistribution, TriangularAoaModel, TruncatedAoaModel, TruncatedKind};
pub use gain::{
    rayleigh_gain_density, rayleigh_inverse_cdf, DeterministicGain, PathGainSampler,
    ScaledGaussianGainModel, RAYLEIGH_SECOND_MOMENT_FACTOR,
};
pub use realization::{
    component_energies, sample_channel, ChannelRealization, ComponentEnergies, PathArrival,
};
pub(crate) use realization::sample_paths_into;

use thiserror::Error;

use crate::quadrature::QuadratureError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("path {index}: {reason}")]
    InvalidPath { index: usize, reason: &'static str },
    #[error("channel must have at least one path")]
    EmptyChannel,
    #[error("got {aoa_models} AoA models but {delays} delays")]
    LengthMismatch { aoa_models: usize, delays: usize },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

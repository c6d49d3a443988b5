//! Estimation of the scaled-Gaussian scale map from eigenray statistics.
//!
//! Rays are binned by AoA, the mean squared amplitude per bin is fitted with
//! `Λ·exp(−((γ−ξ)/ς)²)` by weighted least squares, and SSE, R² and RMSE are
//! reported. The fitted curve is a map of mean energy `E[h²]`; use
//! [`rayleigh_scale_from_energy_fit`] to turn it into the Rayleigh `σ²` map.

mod binning;
mod solver;

pub use binning::bin_gain_vs_aoa;
pub use solver::{fit_scaled_gaussian, fit_scaled_gaussian_with, SolverOptions};

use thiserror::Error;

use crate::channel::{ModelError, ScaledGaussianGainModel, RAYLEIGH_SECOND_MOMENT_FACTOR};
use crate::geometry::Eigenray;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least {required} points, got {got}")]
    TooFewPoints { required: usize, got: usize },
    #[error("point {index}: {reason}")]
    InvalidPoint { index: usize, reason: &'static str },
    #[error("degenerate data: {0}")]
    Degenerate(&'static str),
    #[error("no rays to bin")]
    EmptyRays,
    #[error("n_bins must be >= 2, got {0}")]
    InvalidBinCount(usize),
    #[error("R² undefined: data have zero variance")]
    ZeroVariance,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Mean squared amplitude of the rays falling in one AoA bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainAoaPoint<T> {
    /// Bin centre, radians.
    pub aoa: T,
    pub gain_sq: T,
    /// Rays in the bin.
    pub weight: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodnessOfFit<T> {
    pub sse: T,
    pub r2: T,
    pub rmse: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult<T> {
    pub model: ScaledGaussianGainModel<T>,
    pub sse: T,
    pub r2: T,
    pub rmse: T,
    pub converged: bool,
    pub iterations: usize,
}

/// Unweighted SSE, R² and RMSE of `model` on `points`.
pub fn goodness_of_fit<T: Scalar>(
    points: &[GainAoaPoint<T>],
    model: &ScaledGaussianGainModel<T>,
) -> Result<GoodnessOfFit<T>, FitError> {
    if points.is_empty() {
        return Err(FitError::TooFewPoints { required: 1, got: 0 });
    }
    let n = T::from_usize_lossy(points.len());
    let mean = points.iter().map(|p| p.gain_sq).sum::<T>() / n;
    let sst: T = points.iter().map(|p| (p.gain_sq - mean).powi(2)).sum();
    let sse: T = points
        .iter()
        .map(|p| (p.gain_sq - model.sigma_squared(p.aoa)).powi(2))
        .sum();
    if !(sst > T::zero()) {
        return Err(FitError::ZeroVariance);
    }
    Ok(GoodnessOfFit {
        sse,
        r2: T::one() - sse / sst,
        rmse: (sse / n).sqrt(),
    })
}

/// Rayleigh scale map whose mean energy `2σ²(γ)` equals the fitted energy map.
pub fn rayleigh_scale_from_energy_fit<T: Scalar>(
    energy_model: &ScaledGaussianGainModel<T>,
) -> Result<ScaledGaussianGainModel<T>, ModelError> {
    energy_model.scaled(T::one() / T::lit(RAYLEIGH_SECOND_MOMENT_FACTOR))
}

/// Energy fit of binned ray amplitudes, and the Rayleigh scale map derived
/// from it.
#[derive(Debug, Clone)]
pub struct RayFit<T> {
    pub points: Vec<GainAoaPoint<T>>,
    pub energy_fit: FitResult<T>,
    pub gain_model: ScaledGaussianGainModel<T>,
}

pub fn fit_gain_model_from_rays<T: Scalar>(
    rays: &[Eigenray<T>],
    n_bins: usize,
) -> Result<RayFit<T>, FitError> {
    let points = bin_gain_vs_aoa(rays, n_bins)?;
    let energy_fit = fit_scaled_gaussian(&points)?;
    let gain_model = rayleigh_scale_from_energy_fit(&energy_fit.model)?;
    Ok(RayFit {
        points,
        energy_fit,
        gain_model,
    })
}

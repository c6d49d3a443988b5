//! AoA-dependent Rayleigh path gains.

use rand::Rng;

use super::ModelError;
use crate::scalar::{uniform_open_closed, Scalar};

/// Ratio `E[h²] / σ²` for a Rayleigh amplitude with scale parameter `σ²`.
///
/// The density `(α/σ²)·exp(−α²/2σ²)` has second moment `2σ²`. Every place
/// that converts a scale parameter into an expected energy goes through this
/// constant: the Monte Carlo sampler, the capacity bound and the fitting
/// pipeline (which fits mean energies and halves them to get `σ²`).
pub const RAYLEIGH_SECOND_MOMENT_FACTOR: f64 = 2.0;

/// Scaled-Gaussian map from angle of arrival to Rayleigh scale parameter,
/// `σ²(γ) = Λ·exp(−((γ − ξ)/ς)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledGaussianGainModel<T> {
    lambda: T,
    xi: T,
    varsigma: T,
}

impl<T: Scalar> ScaledGaussianGainModel<T> {
    pub fn new(lambda: T, xi: T, varsigma: T) -> Result<Self, ModelError> {
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "lambda",
                value: lambda.as_f64(),
                reason: "must be finite and > 0",
            });
        }
        if !xi.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "xi",
                value: xi.as_f64(),
                reason: "must be finite",
            });
        }
        if !(varsigma > T::zero()) || varsigma.is_nan() {
            return Err(ModelError::InvalidParameter {
                name: "varsigma",
                value: varsigma.as_f64(),
                reason: "must be > 0",
            });
        }
        Ok(Self { lambda, xi, varsigma })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn xi(&self) -> T {
        self.xi
    }

    pub fn varsigma(&self) -> T {
        self.varsigma
    }

    /// Same shape with the scale multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self, ModelError> {
        Self::new(self.lambda * factor, self.xi, self.varsigma)
    }

    /// Rayleigh scale parameter at angle of arrival `gamma`.
    #[inline]
    pub fn sigma_squared(&self, gamma: T) -> T {
        let z = (gamma - self.xi) / self.varsigma;
        self.lambda * (-(z * z)).exp()
    }

    /// Expected path energy `E[h²]` at `gamma`.
    #[inline]
    pub fn mean_energy(&self, gamma: T) -> T {
        T::lit(RAYLEIGH_SECOND_MOMENT_FACTOR) * self.sigma_squared(gamma)
    }

    /// Draws a Rayleigh amplitude with scale `σ²(gamma)`.
    pub fn sample_path_gain<R: Rng + ?Sized>(&self, gamma: T, rng: &mut R) -> T {
        rayleigh_inverse_cdf(self.sigma_squared(gamma), uniform_open_closed(rng))
    }
}

/// Rayleigh amplitude density `(α/σ²)·exp(−α²/(2σ²))`.
pub fn rayleigh_gain_density<T: Scalar>(sigma2: T, alpha: T) -> Result<T, ModelError> {
    if !(sigma2 > T::zero()) {
        return Err(ModelError::InvalidParameter {
            name: "sigma2",
            value: sigma2.as_f64(),
            reason: "must be > 0",
        });
    }
    if !(alpha >= T::zero()) {
        return Err(ModelError::InvalidParameter {
            name: "alpha",
            value: alpha.as_f64(),
            reason: "must be >= 0",
        });
    }
    Ok(alpha / sigma2 * (-(alpha * alpha) / (T::lit(2.0) * sigma2)).exp())
}

/// `α = √(−2σ² ln u)` for `u ∈ (0, 1]`.
#[inline]
pub fn rayleigh_inverse_cdf<T: Scalar>(sigma2: T, u: T) -> T {
    let e = -T::lit(2.0) * sigma2 * u.ln();
    // ln(1) is exactly zero but be safe about -0.0.
    e.max(T::zero()).sqrt()
}

/// Draws path amplitudes given the angle of arrival.
///
/// [`ScaledGaussianGainModel`] draws Rayleigh amplitudes; [`DeterministicGain`]
/// returns the root-mean-square amplitude and exists so capacity estimators
/// can be checked against a degenerate (non-fading) channel.
pub trait PathGainSampler<T: Scalar>: Sync {
    fn sample_gain<R: Rng + ?Sized>(&self, gamma: T, rng: &mut R) -> T;
}

impl<T: Scalar> PathGainSampler<T> for ScaledGaussianGainModel<T> {
    #[inline]
    fn sample_gain<R: Rng + ?Sized>(&self, gamma: T, rng: &mut R) -> T {
        self.sample_path_gain(gamma, rng)
    }
}

/// Non-fading gain `h = √(E[h²](γ))`, same second moment as the Rayleigh model.
#[derive(Debug, Clone, Copy)]
pub struct DeterministicGain<T>(pub ScaledGaussianGainModel<T>);

impl<T: Scalar> PathGainSampler<T> for DeterministicGain<T> {
    #[inline]
    fn sample_gain<R: Rng + ?Sized>(&self, gamma: T, rng: &mut R) -> T {
        // Consume the same draw as the Rayleigh sampler so streams stay aligned.
        let _: f64 = rng.random();
        self.0.mean_energy(gamma).sqrt()
    }
}

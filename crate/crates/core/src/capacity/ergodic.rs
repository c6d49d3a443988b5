//! Monte Carlo estimate of the ergodic capacity.
//!
//! Trial `k` draws its channel from ChaCha8 stream `k` under a key derived
//! from the user seed, so every realization is fixed by `(seed, k)` alone.
//! Trials run in parallel, results are collected in trial order and reduced
//! sequentially: the estimate is bit-identical for any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::instantaneous::{vector_capacity_from_energies, vector_capacity_from_pressure};
use super::SnrSpec;
use crate::channel::{
    sample_paths_into, AoaDistribution, ComponentEnergies, ModelError, PathGainSampler,
};
use crate::scalar::Scalar;

/// Sample mean of the instantaneous capacity with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityEstimate<T> {
    /// bits/s/Hz
    pub mean: T,
    /// Sample standard deviation over `√trials`.
    pub std_error: T,
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    /// Pressure plus range and depth particle velocity (1×3 SIMO).
    VectorSensor,
    /// Pressure only.
    Scalar,
}

/// Random stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let key = ChaCha8Rng::seed_from_u64(seed).get_seed();
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Per-trial channel energies for a fixed set of path models.
///
/// Capacities at any number of SNR values are computed from the same
/// realizations, which keeps curves over SNR smooth and monotone.
#[derive(Debug, Clone)]
pub struct EnergyEnsemble<T> {
    samples: Vec<ComponentEnergies<T>>,
}

impl<T: Scalar> EnergyEnsemble<T> {
    pub fn simulate<A, G>(
        aoa_models: &[A],
        delays: &[T],
        gains: &G,
        trials: usize,
        seed: u64,
    ) -> Result<Self, ModelError>
    where
        A: AoaDistribution<T>,
        G: PathGainSampler<T>,
    {
        if aoa_models.len() != delays.len() {
            return Err(ModelError::LengthMismatch {
                aoa_models: aoa_models.len(),
                delays: delays.len(),
            });
        }
        if aoa_models.is_empty() {
            return Err(ModelError::EmptyChannel);
        }
        if trials == 0 {
            return Err(ModelError::InvalidParameter {
                name: "trials",
                value: 0.0,
                reason: "must be >= 1",
            });
        }
        let key = ChaCha8Rng::seed_from_u64(seed).get_seed();
        let samples = (0..trials)
            .into_par_iter()
            .map_init(
                || Vec::with_capacity(aoa_models.len()),
                |buf, trial| {
                    let mut rng = ChaCha8Rng::from_seed(key);
                    rng.set_stream(trial as u64);
                    sample_paths_into(aoa_models, delays, gains, &mut rng, buf);
                    crate::channel::component_energies(buf)
                },
            )
            .collect();
        Ok(Self { samples })
    }

    pub fn trials(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[ComponentEnergies<T>] {
        &self.samples
    }

    /// Sample mean of `Σhᵢ²`.
    pub fn mean_pressure_energy(&self) -> T {
        let n = T::from_usize_lossy(self.samples.len());
        self.samples.iter().map(|e| e.pressure).sum::<T>() / n
    }

    pub fn capacity(&self, snr: SnrSpec<T>, receiver: Receiver) -> CapacityEstimate<T> {
        let rho = snr.rho();
        summarize(self.samples.iter().map(|e| match receiver {
            Receiver::VectorSensor => vector_capacity_from_energies(e, snr),
            Receiver::Scalar => (rho * e.pressure).ln_1p() / T::LN_2(),
        }))
    }

    /// Vector capacity computed through `3ρ|h|²` instead of the component sum.
    pub fn vector_capacity_via_pressure(&self, snr: SnrSpec<T>) -> CapacityEstimate<T> {
        summarize(
            self.samples
                .iter()
                .map(|e| vector_capacity_from_pressure(e.pressure, snr)),
        )
    }
}

fn summarize<T: Scalar, I: ExactSizeIterator<Item = T> + Clone>(values: I) -> CapacityEstimate<T> {
    let n = values.len();
    let nf = T::from_usize_lossy(n);
    let mean = values.clone().sum::<T>() / nf;
    let std_error = if n > 1 {
        let ss: T = values.map(|v| (v - mean) * (v - mean)).sum();
        (ss / T::from_usize_lossy(n - 1) / nf).sqrt()
    } else {
        T::zero()
    };
    CapacityEstimate {
        mean,
        std_error,
        trials: n,
    }
}

/// Both receivers' ergodic capacity from one ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicCapacity<T> {
    pub vector: CapacityEstimate<T>,
    pub siso: CapacityEstimate<T>,
}

/// Monte Carlo ergodic capacity over `trials` independent realizations.
pub fn ergodic_capacity_mc<T, A, G>(
    aoa_models: &[A],
    delays: &[T],
    gains: &G,
    snr: SnrSpec<T>,
    trials: usize,
    seed: u64,
    receiver: Receiver,
) -> Result<CapacityEstimate<T>, ModelError>
where
    T: Scalar,
    A: AoaDistribution<T>,
    G: PathGainSampler<T>,
{
    Ok(EnergyEnsemble::simulate(aoa_models, delays, gains, trials, seed)?.capacity(snr, receiver))
}

pub fn ergodic_capacity_both<T, A, G>(
    aoa_models: &[A],
    delays: &[T],
    gains: &G,
    snr: SnrSpec<T>,
    trials: usize,
    seed: u64,
) -> Result<ErgodicCapacity<T>, ModelError>
where
    T: Scalar,
    A: AoaDistribution<T>,
    G: PathGainSampler<T>,
{
    let ens = EnergyEnsemble::simulate(aoa_models, delays, gains, trials, seed)?;
    Ok(ErgodicCapacity {
        vector: ens.capacity(snr, Receiver::VectorSensor),
        siso: ens.capacity(snr, Receiver::Scalar),
    })
}

use rand::Rng;

use super::aoa::AoaDistribution;
use super::gain::PathGainSampler;
use super::ModelError;
use crate::scalar::Scalar;

/// One path of a sampled channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathArrival<T> {
    /// Path gain `hᵢ`.
    pub amplitude: T,
    /// Angle of arrival `γᵢ` in radians.
    pub aoa: T,
    /// Delay `τᵢ` in seconds.
    pub delay: T,
}

/// Energies seen by the three sensor channels: pressure, range velocity,
/// depth velocity (`|h|²`, `|hʸ|²`, `|hᶻ|²`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentEnergies<T> {
    pub pressure: T,
    pub range: T,
    pub depth: T,
}

impl<T: Scalar> ComponentEnergies<T> {
    /// `|h|² + 2|hʸ|² + 2|hᶻ|²`; the velocity channels carry half the noise.
    pub fn noise_weighted_sum(&self) -> T {
        let two = T::lit(2.0);
        self.pressure + two * self.range + two * self.depth
    }
}

/// A sampled multipath channel with at least one path.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    paths: Vec<PathArrival<T>>,
}

impl<T: Scalar> ChannelRealization<T> {
    pub fn new(paths: Vec<PathArrival<T>>) -> Result<Self, ModelError> {
        if paths.is_empty() {
            return Err(ModelError::EmptyChannel);
        }
        let half_pi = T::FRAC_PI_2();
        for (i, p) in paths.iter().enumerate() {
            if !(p.amplitude >= T::zero()) {
                return Err(ModelError::InvalidPath {
                    index: i,
                    reason: "amplitude must be >= 0",
                });
            }
            if !(p.aoa.abs() < half_pi) {
                return Err(ModelError::InvalidPath {
                    index: i,
                    reason: "|aoa| must be < pi/2",
                });
            }
            if !(p.delay >= T::zero()) {
                return Err(ModelError::InvalidPath {
                    index: i,
                    reason: "delay must be >= 0",
                });
            }
        }
        Ok(Self { paths })
    }

    pub fn paths(&self) -> &[PathArrival<T>] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn component_energies(&self) -> ComponentEnergies<T> {
        component_energies(&self.paths)
    }
}

/// `(Σhᵢ², Σhᵢ²cos²γᵢ, Σhᵢ²sin²γᵢ)`.
pub fn component_energies<T: Scalar>(paths: &[PathArrival<T>]) -> ComponentEnergies<T> {
    let mut e = ComponentEnergies {
        pressure: T::zero(),
        range: T::zero(),
        depth: T::zero(),
    };
    for p in paths {
        let h2 = p.amplitude * p.amplitude;
        let (s, c) = p.aoa.sin_cos();
        e.pressure += h2;
        e.range += h2 * c * c;
        e.depth += h2 * s * s;
    }
    e
}

/// Draws one channel realization: for each path the AoA first, then the gain
/// conditioned on it, in path order.
///
/// The draw order is part of the contract: the first `k` paths of an
/// `N`-path realization are identical to a `k`-path realization drawn from
/// the same stream.
pub fn sample_channel<T, A, G, R>(
    aoa_models: &[A],
    delays: &[T],
    gains: &G,
    rng: &mut R,
) -> Result<ChannelRealization<T>, ModelError>
where
    T: Scalar,
    A: AoaDistribution<T>,
    G: PathGainSampler<T>,
    R: Rng + ?Sized,
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
    let mut paths = Vec::with_capacity(aoa_models.len());
    sample_paths_into(aoa_models, delays, gains, rng, &mut paths);
    ChannelRealization::new(paths)
}

/// Allocation-free inner loop used by the Monte Carlo estimators. Inputs are
/// assumed validated.
pub(crate) fn sample_paths_into<T, A, G, R>(
    aoa_models: &[A],
    delays: &[T],
    gains: &G,
    rng: &mut R,
    out: &mut Vec<PathArrival<T>>,
) where
    T: Scalar,
    A: AoaDistribution<T>,
    G: PathGainSampler<T>,
    R: Rng + ?Sized,
{
    out.clear();
    for (model, &delay) in aoa_models.iter().zip(delays) {
        let aoa = model.sample(rng);
        let amplitude = gains.sample_gain(aoa, rng);
        out.push(PathArrival {
            amplitude,
            aoa,
            delay,
        });
    }
}

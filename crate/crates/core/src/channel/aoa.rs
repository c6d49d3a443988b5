//! Angle-of-arrival densities for a single path.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::ModelError;
use crate::quadrature::{integrate, QuadratureError, Tolerance};
use crate::scalar::{uniform_closed_open, Scalar};

/// Common interface of the per-path AoA densities.
pub trait AoaDistribution<T: Scalar>: Sync {
    fn density(&self, gamma: T) -> T;
    /// Closed support `[lo, hi]`.
    fn support(&self) -> (T, T);
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T;
    /// Points inside the support where the density is not smooth.
    fn kinks(&self) -> Vec<T> {
        Vec::new()
    }
    /// Probability mass in `[a, b]`. The default integrates numerically.
    fn probability(&self, a: T, b: T) -> Result<T, QuadratureError> {
        let (lo, hi) = self.support();
        let a = a.max(lo);
        let b = b.min(hi);
        if b <= a {
            return Ok(T::zero());
        }
        let mut pts = vec![a];
        pts.extend(self.kinks().into_iter().filter(|&k| k > a && k < b));
        pts.push(b);
        crate::quadrature::integrate_piecewise(|g| self.density(g), &pts, Tolerance::default())
    }
}

/// Symmetric triangular density with mode `theta` and half-width `beta`.
///
/// `beta == 0` is accepted and behaves as a point mass at `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangularAoaModel<T> {
    theta: T,
    beta: T,
}

impl<T: Scalar> TriangularAoaModel<T> {
    pub fn new(theta: T, beta: T) -> Result<Self, ModelError> {
        if !theta.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "theta",
                value: theta.as_f64(),
                reason: "must be finite",
            });
        }
        if !(beta >= T::zero()) || !beta.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "beta",
                value: beta.as_f64(),
                reason: "must be finite and >= 0",
            });
        }
        Ok(Self { theta, beta })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn is_point_mass(&self) -> bool {
        self.beta == T::zero()
    }

    /// Inverse CDF for `u ∈ [0, 1]`.
    pub fn quantile(&self, u: T) -> T {
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        if u < half {
            self.theta - self.beta + self.beta * (two * u).sqrt()
        } else {
            self.theta + self.beta - self.beta * (two * (T::one() - u)).sqrt()
        }
    }

    /// CDF, used by goodness-of-fit checks.
    pub fn cdf(&self, gamma: T) -> T {
        let (lo, hi) = self.support();
        if gamma <= lo {
            return T::zero();
        }
        if gamma >= hi {
            return T::one();
        }
        let half = T::lit(0.5);
        if gamma <= self.theta {
            let d = (gamma - lo) / self.beta;
            half * d * d
        } else {
            let d = (hi - gamma) / self.beta;
            T::one() - half * d * d
        }
    }
}

impl<T: Scalar> AoaDistribution<T> for TriangularAoaModel<T> {
    fn density(&self, gamma: T) -> T {
        if self.beta == T::zero() {
            return T::zero();
        }
        let d = (gamma - self.theta).abs();
        if d >= self.beta {
            T::zero()
        } else {
            (self.beta - d) / (self.beta * self.beta)
        }
    }

    fn support(&self) -> (T, T) {
        (self.theta - self.beta, self.theta + self.beta)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let u = uniform_closed_open(rng);
        if self.beta == T::zero() {
            return self.theta;
        }
        self.quantile(u)
    }

    fn kinks(&self) -> Vec<T> {
        vec![self.theta]
    }

    fn probability(&self, a: T, b: T) -> Result<T, QuadratureError> {
        if b <= a {
            return Ok(T::zero());
        }
        Ok(self.cdf(b) - self.cdf(a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncatedKind {
    Gaussian,
    Laplacian,
}

/// Gaussian or Laplacian AoA density truncated to `[mu − π/2, mu + π/2]`.
///
/// The normalizer `A` is computed by quadrature when the model is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedAoaModel<T> {
    kind: TruncatedKind,
    mu: T,
    sigma: T,
    normalizer: T,
}

impl<T: Scalar> TruncatedAoaModel<T> {
    pub fn new(kind: TruncatedKind, mu: T, sigma: T) -> Result<Self, ModelError> {
        if !mu.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "mu",
                value: mu.as_f64(),
                reason: "must be finite",
            });
        }
        if !(sigma > T::zero()) || !sigma.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "sigma",
                value: sigma.as_f64(),
                reason: "must be finite and > 0",
            });
        }
        let mut model = Self {
            kind,
            mu,
            sigma,
            normalizer: T::one(),
        };
        let half_pi = T::FRAC_PI_2();
        let mass = integrate(|g| model.base_density(g), mu - half_pi, mu, Tolerance::default())?
            + integrate(|g| model.base_density(g), mu, mu + half_pi, Tolerance::default())?;
        if !(mass > T::zero()) {
            return Err(ModelError::InvalidParameter {
                name: "sigma",
                value: sigma.as_f64(),
                reason: "density has no mass on the support",
            });
        }
        model.normalizer = T::one() / mass;
        Ok(model)
    }

    pub fn kind(&self) -> TruncatedKind {
        self.kind
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn normalizer(&self) -> T {
        self.normalizer
    }

    /// Un-truncated density (normalizer 1).
    fn base_density(&self, gamma: T) -> T {
        let d = gamma - self.mu;
        match self.kind {
            TruncatedKind::Gaussian => {
                let z = d / self.sigma;
                (-(z * z) / T::lit(2.0)).exp() / (self.sigma * T::TAU().sqrt())
            }
            TruncatedKind::Laplacian => {
                let sqrt2 = T::SQRT_2();
                (-sqrt2 * d.abs() / self.sigma).exp() / (self.sigma * sqrt2)
            }
        }
    }

    fn draw_untruncated<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match self.kind {
            TruncatedKind::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                self.mu + self.sigma * T::lit(z)
            }
            TruncatedKind::Laplacian => {
                // Laplace with scale b = sigma/√2 via inverse CDF.
                let b = self.sigma / T::SQRT_2();
                let u = uniform_closed_open::<T, _>(rng) - T::lit(0.5);
                let mag = (T::one() - T::lit(2.0) * u.abs()).max(T::min_positive_value());
                self.mu - b * u.signum() * mag.ln()
            }
        }
    }
}

impl<T: Scalar> AoaDistribution<T> for TruncatedAoaModel<T> {
    fn density(&self, gamma: T) -> T {
        let (lo, hi) = self.support();
        if gamma < lo || gamma > hi {
            T::zero()
        } else {
            self.normalizer * self.base_density(gamma)
        }
    }

    fn support(&self) -> (T, T) {
        (self.mu - T::FRAC_PI_2(), self.mu + T::FRAC_PI_2())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let (lo, hi) = self.support();
        loop {
            let g = self.draw_untruncated(rng);
            if g >= lo && g <= hi {
                return g;
            }
        }
    }

    fn kinks(&self) -> Vec<T> {
        vec![self.mu]
    }
}

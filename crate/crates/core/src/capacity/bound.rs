//! Jensen upper bound on the vector-sensor ergodic capacity.
//!
//! Moving the expectation inside the logarithm gives
//!
//! ```text
//! C_UB = log2(1 + 3ρ · Σᵢ E[hᵢ²]),   E[hᵢ²] = κ · Iᵢ,   Iᵢ = ∫ σ²(γ) p_γᵢ(γ) dγ
//! ```
//!
//! with `κ` = [`RAYLEIGH_SECOND_MOMENT_FACTOR`]. `Iᵢ` has a closed form for
//! the triangular AoA density; [`per_path_expected_energy`] evaluates the
//! same integral by adaptive quadrature and is the reference the closed form
//! is tested against.
//!
//! # Closed form
//!
//! Put `x = (θ − ξ)/ς` and `b = β/ς`. With `K(u) = (√π/2)·u·erf(u) + e^{−u²}/2`
//! (so `K'' = e^{−u²}`), the triangular weight is the second difference
//! kernel and
//!
//! ```text
//! Iᵢ = Λ · [K(x + b) − 2K(x) + K(x − b)] / b²
//! ```
//!
//! Evaluated literally this cancels catastrophically once `|x|` is a few
//! units. `K` is even and `K(u) = (√π/2)|u| + M(|u|)` with
//! `M(y) = e^{−y²}/2 − (√π/2)·y·erfc(y)`, a positive decaying function, so the
//! linear parts are differenced exactly and only `M` is evaluated. For
//! `b` below `ε^{1/6}` a Taylor series in `b` is used instead.

use super::SnrSpec;
use crate::channel::{
    AoaDistribution, ScaledGaussianGainModel, TriangularAoaModel, RAYLEIGH_SECOND_MOMENT_FACTOR,
};
use crate::quadrature::{integrate_piecewise, QuadratureError, Tolerance};
use crate::scalar::Scalar;

/// `M(y) = e^{−y²}/2 − (√π/2)·y·erfc(y)` for `y ≥ 0`.
fn tail_part<T: Scalar>(y: T) -> T {
    let half = T::lit(0.5);
    let sqrt_pi = T::PI().sqrt();
    half * (-(y * y)).exp() - half * sqrt_pi * y * y.erfc()
}

/// `[K(x + b) − 2K(x) + K(x − b)] / b²` for `b > 0`.
fn normalized_second_difference<T: Scalar>(x: T, b: T) -> T {
    let x = x.abs();
    let series_limit = T::epsilon().powf(T::lit(1.0 / 6.0));
    if b < series_limit {
        let x2 = x * x;
        let b2 = b * b;
        let g = (-x2).exp();
        let d2 = T::lit(4.0) * x2 - T::lit(2.0);
        let d4 = T::lit(16.0) * x2 * x2 - T::lit(48.0) * x2 + T::lit(12.0);
        return g * (T::one() + b2 / T::lit(12.0) * d2 + b2 * b2 / T::lit(360.0) * d4);
    }
    let two = T::lit(2.0);
    let outer = tail_part(x + b) - two * tail_part(x);
    let diff = if x >= b {
        outer + tail_part(x - b)
    } else {
        T::PI().sqrt() * (b - x) + outer + tail_part(b - x)
    };
    (diff / (b * b)).max(T::zero())
}

/// Closed-form `Iᵢ = ∫ σ²(γ) p_γᵢ(γ) dγ` for a triangular AoA density.
pub fn per_path_closed_form<T: Scalar>(
    gain: &ScaledGaussianGainModel<T>,
    aoa: &TriangularAoaModel<T>,
) -> T {
    if aoa.is_point_mass() {
        return gain.sigma_squared(aoa.theta());
    }
    let x = (aoa.theta() - gain.xi()) / gain.varsigma();
    let b = aoa.beta() / gain.varsigma();
    gain.lambda() * normalized_second_difference(x, b)
}

/// `Iᵢ` by adaptive Gauss–Kronrod quadrature, split at the triangle's mode.
pub fn per_path_expected_energy<T: Scalar>(
    gain: &ScaledGaussianGainModel<T>,
    aoa: &TriangularAoaModel<T>,
) -> Result<T, QuadratureError> {
    per_path_expected_energy_with(gain, aoa, Tolerance::relative(1e-13))
}

pub fn per_path_expected_energy_with<T: Scalar>(
    gain: &ScaledGaussianGainModel<T>,
    aoa: &TriangularAoaModel<T>,
    tol: Tolerance,
) -> Result<T, QuadratureError> {
    if aoa.is_point_mass() {
        return Ok(gain.sigma_squared(aoa.theta()));
    }
    let (lo, hi) = aoa.support();
    integrate_piecewise(
        |g| gain.sigma_squared(g) * aoa.density(g),
        &[lo, aoa.theta(), hi],
        tol,
    )
}

fn log2_1p<T: Scalar>(x: T) -> T {
    x.ln_1p() / T::LN_2()
}

/// Mean total pressure energy `E[Σhᵢ²] = κ Σ Iᵢ` from closed-form integrals.
pub fn expected_total_energy<T: Scalar>(
    aoa_specs: &[TriangularAoaModel<T>],
    gain: &ScaledGaussianGainModel<T>,
) -> T {
    let sum: T = aoa_specs.iter().map(|a| per_path_closed_form(gain, a)).sum();
    T::lit(RAYLEIGH_SECOND_MOMENT_FACTOR) * sum
}

/// `C_UB = log2(1 + 3ρ·κ·Σ Iᵢ)` with closed-form `Iᵢ`.
pub fn capacity_upper_bound_closed_form<T: Scalar>(
    aoa_specs: &[TriangularAoaModel<T>],
    gain: &ScaledGaussianGainModel<T>,
    snr: SnrSpec<T>,
) -> T {
    log2_1p(T::lit(3.0) * snr.rho() * expected_total_energy(aoa_specs, gain))
}

/// `C_UB` with every `Iᵢ` obtained by quadrature.
pub fn capacity_upper_bound_quadrature<T: Scalar>(
    aoa_specs: &[TriangularAoaModel<T>],
    gain: &ScaledGaussianGainModel<T>,
    snr: SnrSpec<T>,
) -> Result<T, QuadratureError> {
    let mut sum = T::zero();
    for a in aoa_specs {
        sum += per_path_expected_energy(gain, a)?;
    }
    let energy = T::lit(RAYLEIGH_SECOND_MOMENT_FACTOR) * sum;
    Ok(log2_1p(T::lit(3.0) * snr.rho() * energy))
}

/// Jensen bound for a pressure-only receiver, `log2(1 + ρ·κ·Σ Iᵢ)`.
pub fn siso_upper_bound<T: Scalar>(
    aoa_specs: &[TriangularAoaModel<T>],
    gain: &ScaledGaussianGainModel<T>,
    snr: SnrSpec<T>,
) -> T {
    log2_1p(snr.rho() * expected_total_energy(aoa_specs, gain))
}

//! Instantaneous and ergodic capacity of the 1×3 vector-sensor link and of a
//! pressure-only baseline, plus the Jensen upper bound.

mod bound;
mod ergodic;
mod instantaneous;

pub use bound::{
    capacity_upper_bound_closed_form, capacity_upper_bound_quadrature, expected_total_energy,
    per_path_closed_form, per_path_expected_energy, per_path_expected_energy_with,
    siso_upper_bound,
};
pub use ergodic::{
    ergodic_capacity_both, ergodic_capacity_mc, trial_rng, CapacityEstimate, EnergyEnsemble,
    ErgodicCapacity, Receiver,
};
pub use instantaneous::{
    instantaneous_capacity_siso, instantaneous_capacity_vector, vector_capacity_from_energies,
    vector_capacity_from_pressure,
};

use crate::channel::ModelError;
use crate::scalar::Scalar;

/// Linear SNR `ρ` multiplying the channel energies.
///
/// Noise on the two velocity channels is half the pressure-channel noise; that
/// factor lives in the capacity formulas, not here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSpec<T> {
    rho: T,
}

impl<T: Scalar> SnrSpec<T> {
    pub fn from_linear(rho: T) -> Result<Self, ModelError> {
        if !(rho > T::zero()) || !rho.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "rho",
                value: rho.as_f64(),
                reason: "must be finite and > 0",
            });
        }
        Ok(Self { rho })
    }

    pub fn from_db(db: T) -> Result<Self, ModelError> {
        Self::from_linear(T::lit(10.0).powf(db / T::lit(10.0)))
    }

    /// `ρ = P_tx / Ω_N`: transmit power over pressure-channel noise power, so
    /// that path loss enters through the channel energies.
    pub fn from_power(tx_power: T, noise_power: T) -> Result<Self, ModelError> {
        if !(noise_power > T::zero()) {
            return Err(ModelError::InvalidParameter {
                name: "noise_power",
                value: noise_power.as_f64(),
                reason: "must be > 0",
            });
        }
        Self::from_linear(tx_power / noise_power)
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn db(&self) -> T {
        T::lit(10.0) * self.rho.log10()
    }
}

/// Error function, exposed for callers evaluating bound expressions directly.
pub fn erf_eval<T: Scalar>(x: T) -> T {
    x.erf()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Maclaurin series of erf, summed to convergence. Independent of libm.
    fn erf_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        while term.abs() > 1e-20 {
            n += 1.0;
            term *= -x * x / n;
            sum += term / (2.0 * n + 1.0);
        }
        2.0 / std::f64::consts::PI.sqrt() * sum
    }

    #[test]
    fn erf_values() {
        assert_eq!(erf_eval(0.0f64), 0.0);
        assert!((erf_eval(1.0f64) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!((erf_eval(30.0f64) - 1.0).abs() < 1e-16);
        for i in 0..=30 {
            let x = -1.5 + 0.1 * i as f64;
            assert_eq!(erf_eval(-x), -erf_eval(x));
            assert!((erf_eval(x) - erf_series(x)).abs() < 1e-14, "x={x}");
        }
        // Tail values from a 40-digit reference.
        assert!((erf_eval(2.0f64) - 0.995_322_265_018_952_7).abs() < 1e-15);
        assert!((erf_eval(3.0f64) - 0.999_977_909_503_001_4).abs() < 1e-15);
    }

    #[test]
    fn snr_conversions() {
        let s = SnrSpec::from_db(20.0f64).unwrap();
        assert!((s.rho() - 100.0).abs() < 1e-12);
        assert!((s.db() - 20.0).abs() < 1e-12);
        assert!(SnrSpec::from_linear(0.0f64).is_err());
        assert!(SnrSpec::from_power(1.0f64, 0.0).is_err());
        let p = SnrSpec::from_power(1.0f64, 1.3e-8).unwrap();
        assert!((p.rho() - 1.0 / 1.3e-8).abs() < 1e-3);
    }
}

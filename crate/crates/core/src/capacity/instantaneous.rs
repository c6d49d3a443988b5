use super::SnrSpec;
use crate::channel::{ChannelRealization, ComponentEnergies};
use crate::scalar::Scalar;

#[inline]
fn log2_1p<T: Scalar>(x: T) -> T {
    x.ln_1p() / T::LN_2()
}

/// `log2(1 + ρ·(|h|² + 2|hʸ|² + 2|hᶻ|²))` from per-channel energies.
#[inline]
pub fn vector_capacity_from_energies<T: Scalar>(e: &ComponentEnergies<T>, snr: SnrSpec<T>) -> T {
    log2_1p(snr.rho() * e.noise_weighted_sum())
}

/// `log2(1 + 3ρ·|h|²)`: the same quantity, using `cos² + sin² = 1`.
#[inline]
pub fn vector_capacity_from_pressure<T: Scalar>(pressure_energy: T, snr: SnrSpec<T>) -> T {
    log2_1p(T::lit(3.0) * snr.rho() * pressure_energy)
}

/// Instantaneous capacity of the pressure + two-velocity receiver.
pub fn instantaneous_capacity_vector<T: Scalar>(
    realization: &ChannelRealization<T>,
    snr: SnrSpec<T>,
) -> T {
    let e = realization.component_energies();
    let by_components = vector_capacity_from_energies(&e, snr);
    debug_assert!({
        let by_pressure = vector_capacity_from_pressure(e.pressure, snr);
        (by_components - by_pressure).abs()
            <= T::lit(1e-12) * by_pressure.abs().max(T::min_positive_value())
    });
    by_components
}

/// Instantaneous capacity of a pressure-only (scalar) receiver.
pub fn instantaneous_capacity_siso<T: Scalar>(
    realization: &ChannelRealization<T>,
    snr: SnrSpec<T>,
) -> T {
    log2_1p(snr.rho() * realization.component_energies().pressure)
}

use super::GeometryError;
use crate::scalar::Scalar;

/// Shallow-water link geometry and environment.
///
/// Depths are measured downward from the surface. The water column is
/// isovelocity; the surface is a pressure-release boundary and the bottom a
/// lossy fluid half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario<T> {
    /// Horizontal range R, metres.
    pub range_m: T,
    pub water_depth_m: T,
    pub tx_depth_m: T,
    pub rx_depth_m: T,
    /// Water sound speed c, m/s.
    pub sound_speed: T,
    pub frequency_hz: T,
    /// kg/m³
    pub water_density: T,
    /// Compressional speed in the bottom, m/s.
    pub bottom_speed: T,
    /// g/cm³ (the unit bottom densities are usually quoted in).
    pub bottom_density_g_cm3: T,
    /// dB per wavelength.
    pub bottom_attenuation_db_per_wavelength: T,
    /// Ambient noise power Ω_N on the pressure channel, linear.
    pub noise_power: T,
    pub max_bounce_order: usize,
}

pub const DEFAULT_MAX_BOUNCE_ORDER: usize = 8;

impl<T: Scalar> Scenario<T> {
    /// 1 km link in 250 m of water, source at 150 m, receiver at 130 m,
    /// 1520 m/s water over a 1550 m/s, 1.8 g/cm³, 0.6 dB/λ bottom.
    pub fn shallow_water_reference() -> Self {
        Self {
            range_m: T::lit(1000.0),
            water_depth_m: T::lit(250.0),
            tx_depth_m: T::lit(150.0),
            rx_depth_m: T::lit(130.0),
            sound_speed: T::lit(1520.0),
            frequency_hz: T::lit(5000.0),
            water_density: T::lit(1027.0),
            bottom_speed: T::lit(1550.0),
            bottom_density_g_cm3: T::lit(1.8),
            bottom_attenuation_db_per_wavelength: T::lit(0.6),
            noise_power: T::lit(1.3e-8),
            max_bounce_order: DEFAULT_MAX_BOUNCE_ORDER,
        }
    }

    pub fn bottom_density_kg_m3(&self) -> T {
        self.bottom_density_g_cm3 * T::lit(1000.0)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let positive = [
            ("range", self.range_m),
            ("water_depth", self.water_depth_m),
            ("sound_speed", self.sound_speed),
            ("frequency", self.frequency_hz),
            ("water_density", self.water_density),
            ("bottom_speed", self.bottom_speed),
            ("bottom_density", self.bottom_density_g_cm3),
            ("noise_power", self.noise_power),
        ];
        for (field, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(GeometryError::InvalidScenario {
                    field,
                    reason: format!("must be finite and > 0, got {v}"),
                });
            }
        }
        if !(self.bottom_attenuation_db_per_wavelength >= T::zero()) {
            return Err(GeometryError::InvalidScenario {
                field: "bottom_attenuation",
                reason: format!("must be >= 0, got {}", self.bottom_attenuation_db_per_wavelength),
            });
        }
        for (field, v) in [("tx_depth", self.tx_depth_m), ("rx_depth", self.rx_depth_m)] {
            if !(v > T::zero() && v < self.water_depth_m) {
                return Err(GeometryError::InvalidScenario {
                    field,
                    reason: format!("must lie strictly inside the water column (0, {}), got {v}", self.water_depth_m),
                });
            }
        }
        Ok(())
    }
}

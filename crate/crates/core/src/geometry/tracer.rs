//! Isovelocity image-method eigenray tracer.
//!
//! Each reflected path is a straight line from a mirrored source. Every order
//! `k ≥ 1` has two images, one whose first bounce is off the surface and one
//! whose first bounce is off the bottom, so order `K` yields `1 + 2K` rays.
//!
//! Amplitude model: spherical spreading `1/L`, unit-magnitude surface
//! reflection, two-fluid Rayleigh bottom reflection and Thorp absorption.
//! Phases are dropped.

use num_complex::Complex;

use super::{GeometryError, Scenario};
use crate::scalar::Scalar;

/// One geometric arrival at the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenray<T> {
    /// Angle of arrival at the receiver, radians from horizontal; positive
    /// for rays arriving from the surface side (travelling downward).
    pub aoa: T,
    /// Seconds.
    pub delay: T,
    pub amplitude: T,
    pub surface_bounces: u32,
    pub bottom_bounces: u32,
    /// Declination of the ray at the source, radians, positive downward.
    pub launch_angle: T,
}

/// Thorp's empirical seawater absorption in dB/km, with `f` in Hz.
pub fn thorp_absorption<T: Scalar>(frequency_hz: T) -> T {
    let f = frequency_hz / T::lit(1000.0);
    let f2 = f * f;
    T::lit(0.11) * f2 / (T::one() + f2)
        + T::lit(44.0) * f2 / (T::lit(4100.0) + f2)
        + T::lit(2.75e-4) * f2
        + T::lit(0.003)
}

/// Magnitude of the plane-wave reflection coefficient of the fluid bottom at
/// grazing angle `grazing` (radians from the seabed).
///
/// Bottom loss is folded into a complex sound speed with loss tangent
/// `δ = α_λ / (40π·log10 e)`.
pub fn bottom_reflection_coefficient<T: Scalar>(
    grazing: T,
    scenario: &Scenario<T>,
) -> Result<T, GeometryError> {
    if !(grazing > T::zero() && grazing <= T::FRAC_PI_2()) {
        return Err(GeometryError::GrazingOutOfRange(grazing.as_f64()));
    }
    let density_ratio = scenario.bottom_density_kg_m3() / scenario.water_density;
    let loss_tangent = scenario.bottom_attenuation_db_per_wavelength
        / (T::lit(40.0) * T::PI() * T::LOG10_E());
    let index = Complex::new(T::one(), loss_tangent)
        * (scenario.sound_speed / scenario.bottom_speed);
    let (sin_g, cos_g) = grazing.sin_cos();
    let vertical = (index * index - Complex::new(cos_g * cos_g, T::zero())).sqrt();
    let direct = Complex::new(density_ratio * sin_g, T::zero());
    let r = (direct - vertical) / (direct + vertical);
    Ok(r.norm().min(T::one()))
}

struct Image<T> {
    depth: T,
    surface: u32,
    bottom: u32,
    first_bounce_surface: Option<bool>,
}

fn images_of_order<T: Scalar>(order: usize, scenario: &Scenario<T>) -> Vec<Image<T>> {
    let zs = scenario.tx_depth_m;
    let d = scenario.water_depth_m;
    if order == 0 {
        return vec![Image {
            depth: zs,
            surface: 0,
            bottom: 0,
            first_bounce_surface: None,
        }];
    }
    let m = (order / 2) as u32;
    let two_d = T::lit(2.0) * d;
    if order.is_multiple_of(2) {
        let shift = two_d * T::from_usize_lossy(order / 2);
        vec![
            Image {
                depth: shift + zs,
                surface: m,
                bottom: m,
                first_bounce_surface: Some(true),
            },
            Image {
                depth: zs - shift,
                surface: m,
                bottom: m,
                first_bounce_surface: Some(false),
            },
        ]
    } else {
        let mf = T::from_usize_lossy(order / 2);
        vec![
            Image {
                depth: two_d * (mf + T::one()) - zs,
                surface: m,
                bottom: m + 1,
                first_bounce_surface: Some(false),
            },
            Image {
                depth: -(two_d * mf) - zs,
                surface: m + 1,
                bottom: m,
                first_bounce_surface: Some(true),
            },
        ]
    }
}

/// Enumerates eigenrays up to `scenario.max_bounce_order`, sorted by delay.
/// The first ray is the direct path.
pub fn trace_image_method<T: Scalar>(scenario: &Scenario<T>) -> Result<Vec<Eigenray<T>>, GeometryError> {
    scenario.validate()?;
    let r = scenario.range_m;
    let zr = scenario.rx_depth_m;
    let absorption_db_per_m = thorp_absorption(scenario.frequency_hz) / T::lit(1000.0);
    let mut rays = Vec::with_capacity(1 + 2 * scenario.max_bounce_order);
    for order in 0..=scenario.max_bounce_order {
        for img in images_of_order(order, scenario) {
            let dz = zr - img.depth;
            let length = (r * r + dz * dz).sqrt();
            let aoa = dz.atan2(r);
            let grazing = aoa.abs();
            let bottom_loss = if img.bottom > 0 {
                bottom_reflection_coefficient(grazing, scenario)?.powi(img.bottom as i32)
            } else {
                T::one()
            };
            let absorption = T::lit(10.0).powf(-absorption_db_per_m * length / T::lit(20.0));
            let launch_angle = match img.first_bounce_surface {
                None => aoa,
                Some(true) => -grazing,
                Some(false) => grazing,
            };
            rays.push(Eigenray {
                aoa,
                delay: length / scenario.sound_speed,
                amplitude: bottom_loss * absorption / length,
                surface_bounces: img.surface,
                bottom_bounces: img.bottom,
                launch_angle,
            });
        }
    }
    rays.sort_by(|a, b| a.delay.partial_cmp(&b.delay).expect("finite delays"));
    Ok(rays)
}

/// Smallest bounce order whose trace holds at least `n_rays` rays.
pub fn order_for_ray_count(n_rays: usize) -> usize {
    n_rays.saturating_sub(1).div_ceil(2)
}

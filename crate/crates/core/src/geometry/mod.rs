//! Shallow-water ray geometry: link scenario, image-method eigenrays and
//! BELLHOP arrivals files.

mod arrivals;
mod scenario;
mod tracer;

pub use arrivals::{ArrivalRecord, ArrivalsFile, ParseError, ParseErrorKind, ReceiverIndex, SourceArrivals};
pub use scenario::{Scenario, DEFAULT_MAX_BOUNCE_ORDER};
pub use tracer::{
    bottom_reflection_coefficient, order_for_ray_count, thorp_absorption, trace_image_method,
    Eigenray,
};

use thiserror::Error;

use crate::channel::{ModelError, TriangularAoaModel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid scenario {field}: {reason}")]
    InvalidScenario { field: &'static str, reason: String },
    #[error("grazing angle {0} rad outside (0, π/2]")]
    GrazingOutOfRange(f64),
    #[error("no eigenrays")]
    EmptyRays,
    #[error("requested {requested} rays but only {available} available")]
    TooFewRays { requested: usize, available: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Triangular AoA models centred on each eigenray's arrival angle, all with
/// half-width `beta`, together with the ray delays.
pub fn eigenrays_to_aoa_specs<T: Scalar>(
    rays: &[Eigenray<T>],
    beta: T,
) -> Result<(Vec<TriangularAoaModel<T>>, Vec<T>), GeometryError> {
    eigenrays_to_aoa_specs_with(rays, |_| beta)
}

/// As [`eigenrays_to_aoa_specs`] with a half-width chosen per ray index.
pub fn eigenrays_to_aoa_specs_with<T: Scalar, F: Fn(usize) -> T>(
    rays: &[Eigenray<T>],
    beta: F,
) -> Result<(Vec<TriangularAoaModel<T>>, Vec<T>), GeometryError> {
    if rays.is_empty() {
        return Err(GeometryError::EmptyRays);
    }
    let models = rays
        .iter()
        .enumerate()
        .map(|(i, r)| TriangularAoaModel::new(r.aoa, beta(i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((models, rays.iter().map(|r| r.delay).collect()))
}

/// The first `n` rays in delay order.
pub fn first_rays<T: Scalar>(rays: &[Eigenray<T>], n: usize) -> Result<&[Eigenray<T>], GeometryError> {
    if n == 0 {
        return Err(GeometryError::EmptyRays);
    }
    rays.get(..n).ok_or(GeometryError::TooFewRays {
        requested: n,
        available: rays.len(),
    })
}

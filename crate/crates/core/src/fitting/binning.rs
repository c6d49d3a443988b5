use super::{FitError, GainAoaPoint};
use crate::geometry::Eigenray;
use crate::scalar::Scalar;

/// Equal-width AoA bins over the observed range; each non-empty bin yields
/// its centre, the mean squared amplitude and the ray count.
///
/// If every ray has the same AoA a single point is returned and a warning
/// logged.
pub fn bin_gain_vs_aoa<T: Scalar>(
    rays: &[Eigenray<T>],
    n_bins: usize,
) -> Result<Vec<GainAoaPoint<T>>, FitError> {
    if rays.is_empty() {
        return Err(FitError::EmptyRays);
    }
    if n_bins < 2 {
        return Err(FitError::InvalidBinCount(n_bins));
    }
    let (lo, hi) = rays.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), r| {
        (lo.min(r.aoa), hi.max(r.aoa))
    });
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(FitError::Degenerate("non-finite angle of arrival"));
    }
    if hi == lo {
        log::warn!("all {} rays arrive at {lo} rad; emitting a single bin", rays.len());
        let n = T::from_usize_lossy(rays.len());
        let mean = rays.iter().map(|r| r.amplitude * r.amplitude).sum::<T>() / n;
        return Ok(vec![GainAoaPoint {
            aoa: lo,
            gain_sq: mean,
            weight: n,
        }]);
    }
    let nb = T::from_usize_lossy(n_bins);
    let width = (hi - lo) / nb;
    let mut sums = vec![(T::zero(), 0usize); n_bins];
    for r in rays {
        let idx = ((r.aoa - lo) / width).floor().to_usize().unwrap_or(0).min(n_bins - 1);
        sums[idx].0 += r.amplitude * r.amplitude;
        sums[idx].1 += 1;
    }
    Ok(sums
        .into_iter()
        .enumerate()
        .filter(|(_, (_, c))| *c > 0)
        .map(|(i, (s, c))| {
            let c = T::from_usize_lossy(c);
            GainAoaPoint {
                aoa: lo + width * (T::from_usize_lossy(i) + T::lit(0.5)),
                gain_sq: s / c,
                weight: c,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{trace_image_method, Scenario};

    fn ray(aoa: f64, amplitude: f64) -> Eigenray<f64> {
        Eigenray {
            aoa,
            delay: 1.0,
            amplitude,
            surface_bounces: 0,
            bottom_bounces: 0,
            launch_angle: aoa,
        }
    }

    #[test]
    fn single_aoa_collapses() {
        let p = bin_gain_vs_aoa(&[ray(0.2, 1.0), ray(0.2, 3.0)], 4).unwrap();
        assert_eq!(p, vec![GainAoaPoint { aoa: 0.2, gain_sq: 5.0, weight: 2.0 }]);
    }

    #[test]
    fn two_bins_at_centres() {
        let p = bin_gain_vs_aoa(&[ray(-0.1, 1.0), ray(0.1, 2.0)], 2).unwrap();
        assert_eq!(p.len(), 2);
        assert!((p[0].aoa + 0.05).abs() < 1e-15 && (p[1].aoa - 0.05).abs() < 1e-15);
        assert_eq!((p[0].gain_sq, p[1].gain_sq), (1.0, 4.0));
    }

    #[test]
    fn empty_bins_omitted_and_counts_kept() {
        let rays = [ray(0.0, 1.0), ray(0.01, 1.0), ray(1.0, 2.0)];
        let p = bin_gain_vs_aoa(&rays, 10).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.iter().map(|q| q.weight).sum::<f64>(), 3.0);
        assert!(bin_gain_vs_aoa::<f64>(&[], 3).is_err());
        assert!(bin_gain_vs_aoa(&rays, 1).is_err());
    }

    #[test]
    fn reference_trace_peaks_near_direct_path() {
        let rays = trace_image_method(&Scenario::<f64>::shallow_water_reference()).unwrap();
        let p = bin_gain_vs_aoa(&rays, 15).unwrap();
        let best = p.iter().max_by(|a, b| a.gain_sq.partial_cmp(&b.gain_sq).unwrap()).unwrap();
        let width = p.windows(2).map(|w| w[1].aoa - w[0].aoa).fold(f64::INFINITY, f64::min);
        assert!((best.aoa - rays[0].aoa).abs() <= width, "{best:?} vs {}", rays[0].aoa);
    }
}

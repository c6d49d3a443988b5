//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Used for the per-path energy integrals and for normalizing the truncated
//! AoA densities. Callers split the interval at known kinks so that every
//! panel sees a smooth integrand.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not converge: estimated error {error:e} exceeds tolerance {tolerance:e} after {panels} panels")]
    NotConverged {
        error: f64,
        tolerance: f64,
        panels: usize,
    },
    #[error("integrand is not finite on [{lo}, {hi}]")]
    NonFinite { lo: f64, hi: f64 },
}

/// Stopping rule: `error <= max(abs, rel * |integral|)`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-15,
            rel: 1e-13,
            max_panels: 2000,
        }
    }
}

impl Tolerance {
    /// Purely relative stopping rule, for integrands of one sign whose
    /// magnitude may be arbitrarily small.
    pub fn relative(rel: f64) -> Self {
        Self {
            abs: 0.0,
            rel,
            ..Self::default()
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes (indices 1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Scalar> Eq for Panel<T> {}
impl<T: Scalar> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn kronrod_panel<T: Scalar, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> Panel<T> {
    let half = T::lit(0.5);
    let center = half * (lo + hi);
    let half_len = half * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod += T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss += T::lit(WG[j / 2]) * pair;
        }
    }
    Panel {
        lo,
        hi,
        value: kronrod * half_len,
        error: ((kronrod - gauss) * half_len).abs(),
    }
}

/// Integrates `f` over `[lo, hi]` by global adaptive bisection.
pub fn integrate<T: Scalar, F: Fn(T) -> T>(
    f: F,
    lo: T,
    hi: T,
    tol: Tolerance,
) -> Result<T, QuadratureError> {
    if lo == hi {
        return Ok(T::zero());
    }
    let first = kronrod_panel(&f, lo, hi);
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(QuadratureError::NonFinite {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        let target = T::lit(tol.abs).max(T::lit(tol.rel) * total.abs());
        if total_err <= target {
            return Ok(total);
        }
        if heap.len() >= tol.max_panels {
            return Err(QuadratureError::NotConverged {
                error: total_err.as_f64(),
                tolerance: target.as_f64(),
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = T::lit(0.5) * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Panel cannot be split further in this precision; accept it.
            total_err -= worst.error;
            heap.push(Panel {
                error: T::zero(),
                ..worst
            });
            continue;
        }
        let left = kronrod_panel(&f, worst.lo, mid);
        let right = kronrod_panel(&f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

/// Integrates over consecutive breakpoints, summing the pieces.
pub fn integrate_piecewise<T: Scalar, F: Fn(T) -> T>(
    f: F,
    breakpoints: &[T],
    tol: Tolerance,
) -> Result<T, QuadratureError> {
    let mut sum = T::zero();
    for w in breakpoints.windows(2) {
        sum += integrate(&f, w[0], w[1], tol)?;
    }
    Ok(sum)
}

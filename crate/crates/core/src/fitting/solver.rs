//! Weighted Levenberg–Marquardt fit of `Λ·exp(−((γ−ξ)/ς)²)`.

use super::{goodness_of_fit, FitError, FitResult, GainAoaPoint};
use crate::channel::ScaledGaussianGainModel;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Stop once Λ and ς move by less than this, relative, and ξ by less
    /// than this times ς.
    pub step_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            step_tolerance: 1e-10,
        }
    }
}

pub fn fit_scaled_gaussian<T: Scalar>(points: &[GainAoaPoint<T>]) -> Result<FitResult<T>, FitError> {
    fit_scaled_gaussian_with(points, SolverOptions::default())
}

type P<T> = [T; 3];

fn cost_and_normal<T: Scalar>(points: &[GainAoaPoint<T>], p: &P<T>) -> (T, [[T; 3]; 3], P<T>) {
    let [lambda, xi, s] = *p;
    let mut cost = T::zero();
    let mut jtj = [[T::zero(); 3]; 3];
    let mut jtr = [T::zero(); 3];
    for q in points {
        let u = (q.aoa - xi) / s;
        let e = (-(u * u)).exp();
        let model = lambda * e;
        let r = q.gain_sq - model;
        let two = T::lit(2.0);
        let j = [e, model * two * u / s, model * two * u * u / s];
        cost += q.weight * r * r;
        for a in 0..3 {
            jtr[a] += q.weight * j[a] * r;
            for b in 0..3 {
                jtj[a][b] += q.weight * j[a] * j[b];
            }
        }
    }
    (cost, jtj, jtr)
}

fn cost<T: Scalar>(points: &[GainAoaPoint<T>], p: &P<T>) -> T {
    points
        .iter()
        .map(|q| {
            let u = (q.aoa - p[1]) / p[2];
            let r = q.gain_sq - p[0] * (-(u * u)).exp();
            q.weight * r * r
        })
        .sum()
}

/// Gaussian elimination with partial pivoting.
fn solve3<T: Scalar>(mut a: [[T; 3]; 3], mut b: P<T>) -> Option<P<T>> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if !(a[piv][col].abs() > T::zero()) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (v, p) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *v -= f * p;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = [T::zero(); 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn validate<T: Scalar>(points: &[GainAoaPoint<T>]) -> Result<(), FitError> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints {
            required: 3,
            got: points.len(),
        });
    }
    for (index, p) in points.iter().enumerate() {
        if !p.aoa.is_finite() {
            return Err(FitError::InvalidPoint { index, reason: "aoa must be finite" });
        }
        if !(p.gain_sq >= T::zero()) || !p.gain_sq.is_finite() {
            return Err(FitError::InvalidPoint { index, reason: "gain_sq must be finite and >= 0" });
        }
        if !(p.weight >= T::one()) || !p.weight.is_finite() {
            return Err(FitError::InvalidPoint { index, reason: "weight must be >= 1" });
        }
    }
    let first = points[0].gain_sq;
    if points.iter().all(|p| p.gain_sq == first) {
        return Err(FitError::Degenerate("all gain_sq equal, width is unbounded"));
    }
    let a0 = points[0].aoa;
    if points.iter().all(|p| p.aoa == a0) {
        return Err(FitError::Degenerate("all points share one angle of arrival"));
    }
    Ok(())
}

/// Minimizes `Σ wⱼ (gⱼ − Λ e^{−((γⱼ−ξ)/ς)²})²`, starting from `Λ₀ = max g`,
/// `ξ₀` at the maximum and `ς₀` half the AoA span.
///
/// Returns the best iterate with `converged = false` if the iteration limit
/// is reached first.
pub fn fit_scaled_gaussian_with<T: Scalar>(
    points: &[GainAoaPoint<T>],
    options: SolverOptions,
) -> Result<FitResult<T>, FitError> {
    validate(points)?;
    let peak = points
        .iter()
        .max_by(|a, b| a.gain_sq.partial_cmp(&b.gain_sq).unwrap())
        .expect("non-empty");
    let (lo, hi) = points
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(l, h), p| (l.min(p.aoa), h.max(p.aoa)));
    let mut p: P<T> = [peak.gain_sq, peak.aoa, (hi - lo) / T::lit(2.0)];

    let tol = T::lit(options.step_tolerance);
    let mut mu = T::lit(1e-3);
    let mut converged = false;
    let mut iterations = 0;
    let (mut c, mut jtj, mut jtr) = cost_and_normal(points, &p);
    while iterations < options.max_iterations {
        iterations += 1;
        let mut accepted = false;
        while mu < T::lit(1e16) {
            let mut a = jtj;
            for (k, row) in a.iter_mut().enumerate() {
                row[k] += mu * row[k].max(T::min_positive_value());
            }
            if let Some(step) = solve3(a, jtr) {
                let trial = [p[0] + step[0], p[1] + step[1], (p[2] + step[2]).abs()];
                let tc = cost(points, &trial);
                if tc <= c && trial[0] > T::zero() && trial[2] > T::zero() {
                    // ξ may be zero, so its step is measured against ς.
                    let rel = (step[0].abs() / p[0])
                        .max(step[1].abs() / p[2])
                        .max(step[2].abs() / p[2]);
                    p = trial;
                    (c, jtj, jtr) = cost_and_normal(points, &p);
                    mu = (mu / T::lit(10.0)).max(T::lit(1e-12));
                    accepted = true;
                    if rel < tol {
                        converged = true;
                    }
                    break;
                }
            }
            mu *= T::lit(10.0);
        }
        if converged {
            break;
        }
        if !accepted {
            // No damping reduces the cost: a numerical minimum.
            converged = true;
            break;
        }
    }
    let model = ScaledGaussianGainModel::new(p[0], p[1], p[2])?;
    let g = goodness_of_fit(points, &model)?;
    Ok(FitResult {
        model,
        sse: g.sse,
        r2: g.r2,
        rmse: g.rmse,
        converged,
        iterations,
    })
}

/// Gradient of the weighted cost at the model's parameters.
#[cfg(test)]
pub(crate) fn cost_gradient<T: Scalar>(points: &[GainAoaPoint<T>], m: &ScaledGaussianGainModel<T>) -> P<T> {
    let (_, _, jtr) = cost_and_normal(points, &[m.lambda(), m.xi(), m.varsigma()]);
    jtr.map(|v| -T::lit(2.0) * v)
}

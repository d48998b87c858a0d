use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::SmootherSpec;
use crate::search::golden_minimize;
use crate::symbol::{lambda_bounds, FrequencySampling, LambdaBounds, PreconditionerKind, Stencil};

/// Symbol of the smoother S = I − q(X)X at the preconditioned eigenvalue x.
pub fn smoother_symbol(spec: &SmootherSpec, xtilde: f64) -> f64 {
    spec.error_poly(xtilde)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingReport {
    pub mu: f64,
    /// Preconditioned eigenvalue at which the maximum is reached.
    pub argmax_x: f64,
    pub bounds: LambdaBounds,
    pub iterations: u32,
}

/// Max of |e(x)|^ν over the largest of `n` samples of [lo, hi], polished by
/// golden section around the best samples.
pub fn max_abs_on_interval(spec: &SmootherSpec, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let n = n.max(3);
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| spec.error_poly(x).abs()).collect();
    let mut best = (0.0f64, lo);
    for (&x, &v) in xs.iter().zip(&vals) {
        if v > best.0 {
            best = (v, x);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap_or(std::cmp::Ordering::Equal));
    for &i in order.iter().take(8) {
        let a = xs[i.saturating_sub(1)];
        let b = xs[(i + 1).min(n - 1)];
        let (x, neg) = golden_minimize(|x| -spec.error_poly(x).abs(), a, b, 1e-13 * hi.abs().max(1.0));
        if -neg > best.0 {
            best = (-neg, x);
        }
    }
    best
}

/// Smoothing factor μ = sup over high frequencies of |S̃(θ)|^ν.
///
/// The closed high-frequency set is connected and X̃ is continuous on it, so
/// X̃ maps it onto [λ₀, λ₁] and μ is a one-dimensional maximum over that
/// interval.
pub fn smoothing_factor(
    stencil: &Stencil,
    preconditioner: PreconditionerKind,
    spec: &SmootherSpec,
    k: u32,
    iterations: u32,
    sampling: &FrequencySampling,
) -> Result<SmoothingReport> {
    spec.validate()?;
    let bounds = lambda_bounds(stencil, preconditioner, k, sampling)?;
    Ok(smoothing_factor_on(spec, &bounds, iterations))
}

/// Smoothing factor for already computed bounds.
pub fn smoothing_factor_on(spec: &SmootherSpec, bounds: &LambdaBounds, iterations: u32) -> SmoothingReport {
    let (v, x) = max_abs_on_interval(spec, bounds.lambda0, bounds.lambda1, 20_001);
    SmoothingReport {
        mu: v.powi(iterations as i32),
        argmax_x: x,
        bounds: *bounds,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{build_fd_laplace, GridGeometry};

    #[test]
    fn symbol_is_error_polynomial() {
        let spec = SmootherSpec::chebyshev(2, 0.5, 2.0).unwrap();
        assert_eq!(smoother_symbol(&spec, 0.0), 1.0);
        assert!(smoother_symbol(&spec, 2.0).abs() <= 0.0741);
    }

    #[test]
    fn chebyshev_2d_k1() {
        let s = build_fd_laplace(&GridGeometry::uniform(2, 1.0 / 64.0).unwrap()).unwrap();
        let spec = SmootherSpec::chebyshev(2, 0.5, 2.0).unwrap();
        let r = smoothing_factor(&s, PreconditionerKind::Jacobi, &spec, 1, 1, &FrequencySampling::default()).unwrap();
        assert!((r.mu - 0.074).abs() < 0.001, "{}", r.mu);
        let r2 = smoothing_factor_on(&spec, &r.bounds, 2);
        assert!((r2.mu - r.mu * r.mu).abs() < 1e-12);
    }
}

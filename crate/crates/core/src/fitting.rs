//! One-parameter scaling-law fits.
//!
//! The sweep data follow known functional forms with a single free
//! amplitude, `y = A·f(N)` with `f(N) = N^p` or `f(N) = ln(N)/N`, so the
//! fit is ordinary least squares in linear space:
//! `A = Σ f_i y_i / Σ f_i²`, with the standard-error formula of the
//! one-parameter linear model.

use serde::Serialize;

use crate::error::{Error, Result};

/// Basis of a single-amplitude scaling model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingModel {
    /// `y = A · N^p` with a fixed exponent `p`.
    Power { exponent: f64 },
    /// `y = A · ln(N)/N`.
    LogOverN,
}

impl ScalingModel {
    pub fn basis(&self, n: f64) -> f64 {
        match self {
            ScalingModel::Power { exponent } => n.powf(*exponent),
            ScalingModel::LogOverN => n.ln() / n,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ScalingModel::Power { exponent } => format!("A*N^({exponent})"),
            ScalingModel::LogOverN => "A*ln(N)/N".to_string(),
        }
    }
}

/// Result of a single-amplitude least-squares fit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitResult {
    pub amplitude: f64,
    pub std_error: f64,
    pub residual_rms: f64,
    pub n_points: usize,
}

/// Fits `y = A·f(N)` to `(N, y)` pairs by ordinary least squares.
///
/// Requires at least two points, distinct `N ≥ 2`, and positive `y`.
pub fn fit_amplitude(data: &[(f64, f64)], model: ScalingModel) -> Result<FitResult> {
    if data.len() < 2 {
        return Err(Error::invalid("fit needs at least 2 points"));
    }
    for &(n, y) in data {
        if !(n >= 2.0) || !n.is_finite() {
            return Err(Error::invalid(format!("invalid N = {n}")));
        }
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::invalid(format!("invalid y = {y} at N = {n}")));
        }
    }
    for (i, &(n_i, _)) in data.iter().enumerate() {
        if data.iter().skip(i + 1).any(|&(n_j, _)| n_j == n_i) {
            return Err(Error::invalid(format!("duplicate N = {n_i}")));
        }
    }

    let basis: Vec<f64> = data.iter().map(|&(n, _)| model.basis(n)).collect();
    let ff: f64 = basis.iter().map(|f| f * f).sum();
    if ff <= 0.0 || !ff.is_finite() {
        return Err(Error::invalid("degenerate model basis"));
    }
    let fy: f64 = basis.iter().zip(data).map(|(f, &(_, y))| f * y).sum();
    let amplitude = fy / ff;

    let rss: f64 = basis
        .iter()
        .zip(data)
        .map(|(f, &(_, y))| {
            let r = y - amplitude * f;
            r * r
        })
        .sum();
    let n_points = data.len();
    let residual_rms = (rss / n_points as f64).sqrt();
    let sigma_sq = rss / (n_points - 1) as f64;
    let std_error = (sigma_sq / ff).sqrt();
    Ok(FitResult {
        amplitude,
        std_error,
        residual_rms,
        n_points,
    })
}

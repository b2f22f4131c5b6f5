//! Unscented-transform sigma points.
//!
//! Points are m and m ± √(n+λ)·Lᵢ with Lᵢ the columns of a Cholesky factor
//! of P; weights are λ/(n+λ) for the centre and 1/(2(n+λ)) otherwise.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SMatrix, SVector};

use crate::error::{Result, TsfError};

/// Relative jitter added to the diagonal when the first Cholesky attempt fails.
pub const JITTER: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SigmaSet {
    pub points: Vec<DVector<f64>>,
    pub weights: Vec<f64>,
}

impl SigmaSet {
    pub fn new(mean: &DVector<f64>, cov: &DMatrix<f64>, lambda: f64) -> Result<Self> {
        let n = mean.len();
        if cov.nrows() != n || cov.ncols() != n {
            return Err(TsfError::DimensionMismatch { expected: n, found: cov.nrows() });
        }
        let scale = n as f64 + lambda;
        if scale <= 0.0 {
            return Err(TsfError::InvalidParameter("n + lambda must be positive"));
        }
        let l = cholesky_dyn(cov)? * scale.sqrt();
        let mut points = Vec::with_capacity(2 * n + 1);
        let mut weights = Vec::with_capacity(2 * n + 1);
        points.push(mean.clone());
        weights.push(lambda / scale);
        for sign in [1.0, -1.0] {
            for i in 0..n {
                points.push(mean + l.column(i) * sign);
                weights.push(0.5 / scale);
            }
        }
        Ok(Self { points, weights })
    }

    pub fn mean(&self) -> DVector<f64> {
        weighted_mean(&self.points, &self.weights)
    }

    pub fn cov(&self) -> DMatrix<f64> {
        weighted_cov(&self.points, &self.weights)
    }
}

pub fn weighted_mean(points: &[DVector<f64>], weights: &[f64]) -> DVector<f64> {
    let n = points[0].len();
    points
        .iter()
        .zip(weights)
        .fold(DVector::zeros(n), |acc, (p, w)| acc + p * *w)
}

pub fn weighted_cov(points: &[DVector<f64>], weights: &[f64]) -> DMatrix<f64> {
    let m = weighted_mean(points, weights);
    let n = m.len();
    points.iter().zip(weights).fold(DMatrix::zeros(n, n), |acc, (p, w)| {
        let d = p - &m;
        acc + &d * d.transpose() * *w
    })
}

/// Lower Cholesky factor, retrying once with diagonal jitter
/// 1e-12·tr(P)/n. A zero matrix factors as zero.
pub fn cholesky_dyn(p: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = p.nrows();
    if p.iter().all(|x| *x == 0.0) {
        return Ok(DMatrix::zeros(n, n));
    }
    if let Some(c) = p.clone().cholesky() {
        return Ok(c.l());
    }
    let eps = JITTER * p.trace().abs() / n as f64;
    let jittered = p + DMatrix::identity(n, n) * eps;
    jittered.cholesky().map(|c| c.l()).ok_or(TsfError::CholeskyFail)
}

pub fn cholesky<const N: usize>(p: &SMatrix<f64, N, N>) -> Result<SMatrix<f64, N, N>> {
    if p.iter().all(|x| *x == 0.0) {
        return Ok(SMatrix::zeros());
    }
    if let Some(c) = p.cholesky() {
        return Ok(c.l());
    }
    let eps = JITTER * p.trace().abs() / N as f64;
    let jittered = p + SMatrix::<f64, N, N>::identity() * eps;
    jittered.cholesky().map(|c| c.l()).ok_or(TsfError::CholeskyFail)
}

/// Fixed-size sigma points: returns (points, centre weight, side weight).
/// With λ = 0 the centre weight is zero.
pub fn sigma_points<const N: usize>(
    mean: &SVector<f64, N>,
    cov: &SMatrix<f64, N, N>,
    lambda: f64,
) -> Result<(Vec<SVector<f64, N>>, f64, f64)> {
    let scale = N as f64 + lambda;
    if scale <= 0.0 {
        return Err(TsfError::InvalidParameter("n + lambda must be positive"));
    }
    let l = cholesky(cov)? * scale.sqrt();
    let mut pts = Vec::with_capacity(2 * N + 1);
    pts.push(*mean);
    for i in 0..N {
        pts.push(mean + l.column(i));
    }
    for i in 0..N {
        pts.push(mean - l.column(i));
    }
    Ok((pts, lambda / scale, 0.5 / scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_set_reproduces_moments() {
        let m = DVector::from_vec(alloc::vec![1.0, -2.0, 0.5]);
        let p = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.5]);
        for lambda in [0.0, 1.0, 3.0] {
            let s = SigmaSet::new(&m, &p, lambda).unwrap();
            assert!((s.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            assert!((s.mean() - &m).norm() < 1e-14);
            assert!((s.cov() - &p).abs().max() < 1e-14);
        }
    }

    #[test]
    fn zero_covariance_collapses_points() {
        let (pts, _, _) = sigma_points::<2>(&SVector::<f64, 2>::new(1.0, 2.0), &SMatrix::zeros(), 0.0).unwrap();
        assert!(pts.iter().all(|p| (p - SVector::<f64, 2>::new(1.0, 2.0)).norm() == 0.0));
    }

    #[test]
    fn indefinite_matrix_fails() {
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(cholesky_dyn(&p), Err(TsfError::CholeskyFail));
    }
}

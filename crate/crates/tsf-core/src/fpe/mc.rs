//! Monte-Carlo reference moments for tangent-space SDEs, integrated in
//! Stratonovich form with the stochastic Heun scheme.

use alloc::vec::Vec;
use nalgebra::{SMatrix, SVector};
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, TsfError};
use crate::propagation::{Moments, TangentSde};
use crate::ut::cholesky;

/// Empirical moments with block-jackknife standard errors.
#[derive(Debug, Clone)]
pub struct McReport<const N: usize> {
    pub moments: Moments<N>,
    pub mean_se: SVector<f64, N>,
    pub cov_se: SMatrix<f64, N, N>,
    pub paths: usize,
}

const JACKKNIFE_BLOCKS: usize = 100;

fn normal<const K: usize>(rng: &mut ChaCha8Rng) -> SVector<f64, K> {
    SVector::from_fn(|_, _| rng.sample(StandardNormal))
}

/// Endpoints of `paths` independent trajectories started from N(m₀, P₀).
/// Path k draws from ChaCha8 seeded with `seed` on stream k.
pub fn simulate_paths<const N: usize, const M: usize, S>(
    model: &S,
    m0: &Moments<N>,
    t_span: f64,
    dt: f64,
    paths: usize,
    seed: u64,
) -> Result<Vec<SVector<f64, N>>>
where
    S: TangentSde<N, M> + ?Sized,
{
    if !(dt > 0.0) || !(t_span >= 0.0) {
        return Err(TsfError::InvalidParameter("time step and span must be positive"));
    }
    let steps = (t_span / dt - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { 0.0 } else { t_span / steps as f64 };
    let init = cholesky(&m0.cov)?;
    let noise = cholesky(&model.noise_density())? * h.sqrt();
    let mut out = Vec::with_capacity(paths);
    let mut escaped = 0;
    for k in 0..paths {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let mut x = m0.mean + init * normal::<N>(&mut rng);
        for _ in 0..steps {
            let dw = noise * normal::<M>(&mut rng);
            let f0 = model.drift(&x);
            let g0 = model.diffusion(&x);
            let pred = x + f0 * h + g0 * dw;
            let f1 = model.drift(&pred);
            let g1 = model.diffusion(&pred);
            x += (f0 + f1) * (0.5 * h) + (g0 + g1) * dw * 0.5;
            if !(model.branch_norm(&x) < core::f64::consts::PI) {
                escaped += 1;
                break;
            }
        }
        out.push(x);
    }
    if escaped > 0 {
        return Err(TsfError::PathEscape { escaped });
    }
    Ok(out)
}

/// Sample mean and covariance (1/n normalisation) with standard errors
/// from a leave-one-block-out jackknife over contiguous blocks.
pub fn jackknife_moments<const N: usize>(samples: &[SVector<f64, N>]) -> McReport<N> {
    let n = samples.len();
    let blocks = JACKKNIFE_BLOCKS.min(n).max(1);
    let centre = samples.iter().fold(SVector::<f64, N>::zeros(), |a, x| a + x) / n as f64;
    let mut s1 = alloc::vec![SVector::<f64, N>::zeros(); blocks];
    let mut s2 = alloc::vec![SMatrix::<f64, N, N>::zeros(); blocks];
    let mut counts = alloc::vec![0usize; blocks];
    for (i, x) in samples.iter().enumerate() {
        let b = i * blocks / n;
        let d = x - centre;
        s1[b] += d;
        s2[b] += d * d.transpose();
        counts[b] += 1;
    }
    let t1 = s1.iter().fold(SVector::<f64, N>::zeros(), |a, x| a + x);
    let t2 = s2.iter().fold(SMatrix::<f64, N, N>::zeros(), |a, x| a + x);
    let moments_of = |sum1: &SVector<f64, N>, sum2: &SMatrix<f64, N, N>, m: usize| {
        let mean = sum1 / m as f64;
        (mean, sum2 / m as f64 - mean * mean.transpose())
    };
    let (dmean, cov) = moments_of(&t1, &t2, n);
    let mut loo_mean = Vec::with_capacity(blocks);
    let mut loo_cov = Vec::with_capacity(blocks);
    for b in 0..blocks {
        if counts[b] == n {
            continue;
        }
        let (m, c) = moments_of(&(t1 - s1[b]), &(t2 - s2[b]), n - counts[b]);
        loo_mean.push(m);
        loo_cov.push(c);
    }
    let nb = loo_mean.len().max(1) as f64;
    let avg_m = loo_mean.iter().fold(SVector::<f64, N>::zeros(), |a, x| a + x) / nb;
    let avg_c = loo_cov.iter().fold(SMatrix::<f64, N, N>::zeros(), |a, x| a + x) / nb;
    let factor = (nb - 1.0) / nb;
    let mean_se = loo_mean
        .iter()
        .fold(SVector::<f64, N>::zeros(), |a, x| a + (x - avg_m).component_mul(&(x - avg_m)))
        .map(|v| (v * factor).sqrt());
    let cov_se = loo_cov
        .iter()
        .fold(SMatrix::<f64, N, N>::zeros(), |a, x| a + (x - avg_c).component_mul(&(x - avg_c)))
        .map(|v| (v * factor).sqrt());
    McReport {
        moments: Moments { mean: centre + dmean, cov: (cov + cov.transpose()) * 0.5 },
        mean_se,
        cov_se,
        paths: n,
    }
}

/// Reference moments of the SDE at `t_span` from `paths` Heun trajectories.
pub fn mc_oracle<const N: usize, const M: usize, S>(
    model: &S,
    m0: &Moments<N>,
    t_span: f64,
    dt: f64,
    paths: usize,
    seed: u64,
) -> Result<McReport<N>>
where
    S: TangentSde<N, M> + ?Sized,
{
    let samples = simulate_paths(model, m0, t_span, dt, paths, seed)?;
    Ok(jackknife_moments(&samples))
}

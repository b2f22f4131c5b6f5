//! Discrete Farrenkopf gyro: white rate noise plus a random-walk bias.

use nalgebra::Vector3;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::ScenarioConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GyroSample {
    /// Measured rate ω_m,k.
    pub rate: Vector3<f64>,
    /// True bias β_k at the start of the interval.
    pub bias: Vector3<f64>,
}

fn normal3<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    Vector3::from_fn(|_, _| rng.sample(StandardNormal))
}

/// β_{k+1} = β_k + σ_ζ√Δt·w₁ and
/// ω_m,k = ω_k + ½(β_k + β_{k+1}) + √(σ_η²/Δt + σ_ζ²Δt/12)·w₂.
pub fn simulate_gyro<R: Rng + ?Sized>(true_rates: &[Vector3<f64>], cfg: &ScenarioConfig, rng: &mut R) -> Vec<GyroSample> {
    let dt = cfg.gyro_dt();
    let walk = cfg.rrw * dt.sqrt();
    let white = (cfg.arw * cfg.arw / dt + cfg.rrw * cfg.rrw * dt / 12.0).sqrt();
    let mut bias = cfg.true_initial_bias;
    true_rates
        .iter()
        .map(|w| {
            let next = bias + normal3(rng) * walk;
            let rate = w + (bias + next) * 0.5 + normal3(rng) * white;
            let sample = GyroSample { rate, bias };
            bias = next;
            sample
        })
        .collect()
}

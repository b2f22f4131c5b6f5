//! Reference solutions for the isotropic attitude diffusion on S³: the
//! closed-form heat kernel in exponential coordinates, its convolution
//! with an initial density on a spherical product grid, and a Monte-Carlo
//! integrator for tangent-space SDEs.

mod mc;

pub use mc::{jackknife_moments, mc_oracle, simulate_paths, McReport};

use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::Vector3;
#[allow(unused_imports)]
use num_traits::Float;

use crate::quadrature::GaussLegendre;

/// Kernel time for the attitude SDE with rate noise q²I over `t` seconds.
/// The noise ½W̄_s(ξ)η injects covariance at rate q²/4 near the origin,
/// while the kernel is written for unit rate.
pub fn heat_time(q: f64, t: f64) -> f64 {
    q * q * t / 4.0
}

/// Smallest N ≥ 1 whose winding tail bound
/// e^{−(π(2N−1))²/2t}·π(2N+1)/t^{3/2} falls below 1e-14.
pub fn winding_cutoff(t: f64) -> usize {
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let a = PI * (2.0 * nf - 1.0);
        let bound = (-(a * a) / (2.0 * t)).exp() * PI * (2.0 * nf + 1.0) / t.powf(1.5);
        if bound < 1e-14 || n > 10_000 {
            return n;
        }
        n += 1;
    }
}

/// Σₙ (r + 2πn)e^{−(r+2πn)²/2t} divided by r, with the ±n terms paired so
/// that r → 0 is finite.
fn winding_sum_over_r(t: f64, r: f64, n: usize) -> f64 {
    let phi = |x: f64| x * (-(x * x) / (2.0 * t)).exp();
    let mut s = (-(r * r) / (2.0 * t)).exp();
    for k in 1..=n {
        let a = 2.0 * PI * k as f64;
        s += if r < 1e-6 {
            2.0 * (1.0 - a * a / t) * (-(a * a) / (2.0 * t)).exp()
        } else {
            (phi(a + r) - phi(a - r)) / r
        };
    }
    s
}

fn sinc(r: f64) -> f64 {
    if r < 1e-8 {
        1.0 - r * r / 6.0
    } else {
        r.sin() / r
    }
}

fn prefactor(t: f64) -> f64 {
    (t / 2.0).exp() / (2.0 * PI * t).powf(1.5)
}

/// K(t, ξ) at radius r = ‖ξ‖ with an explicit winding cutoff:
/// h(ξ)e^{t/2}(2πt)^{−3/2} Σₙ (r + 2πn)/sin r · e^{−(r+2πn)²/2t}.
pub fn heat_kernel_radial(t: f64, r: f64, n: usize) -> f64 {
    prefactor(t) * sinc(r) * winding_sum_over_r(t, r, n)
}

/// Heat kernel density on B_π in exponential coordinates.
pub fn heat_kernel(t: f64, xi: &Vector3<f64>) -> f64 {
    heat_kernel_radial(t, xi.norm(), winding_cutoff(t))
}

/// K/h, the kernel density with respect to the Haar measure h(ξ)dξ.
fn haar_kernel(t: f64, r: f64, n: usize) -> f64 {
    let r = r.min(PI - 1e-7);
    prefactor(t) * winding_sum_over_r(t, r, n) / sinc(r)
}

/// h(ξ) = sin²‖ξ‖/‖ξ‖².
pub fn haar_density(r: f64) -> f64 {
    let s = sinc(r);
    s * s
}

/// The Euclidean small-time approximation e^{−r²/2t}/(2πt)^{3/2}.
pub fn gaussian_limit(t: f64, r: f64) -> f64 {
    (-(r * r) / (2.0 * t)).exp() / (2.0 * PI * t).powf(1.5)
}

/// sin²r/(2π²r²), the uniform density on S³ in exponential coordinates.
pub fn uniform_density(r: f64) -> f64 {
    haar_density(r) / (2.0 * PI * PI)
}

/// ∫_{B_π} K(t, ξ)dξ by composite Gauss–Legendre in the radius.
pub fn heat_kernel_mass(t: f64) -> f64 {
    let n = winding_cutoff(t);
    let rule = GaussLegendre::new(20);
    rule.integrate_composite(0.0, PI, 64, |r| 4.0 * PI * r * r * heat_kernel_radial(t, r, n))
}

/// Product quadrature on B_π: Gauss–Legendre in r and cos θ, uniform in φ.
#[derive(Debug, Clone)]
pub struct SphericalGrid {
    pub points: Vec<Vector3<f64>>,
    pub weights: Vec<f64>,
}

impl SphericalGrid {
    pub fn new(radial: usize, polar: usize, azimuth: usize) -> Self {
        let r_rule = GaussLegendre::new(radial);
        let c_rule = GaussLegendre::new(polar);
        let mut points = Vec::with_capacity(radial * polar * azimuth);
        let mut weights = Vec::with_capacity(radial * polar * azimuth);
        let w_phi = 2.0 * PI / azimuth as f64;
        for (r, wr) in r_rule.on_interval(0.0, PI) {
            for (c, wc) in c_rule.on_interval(-1.0, 1.0) {
                let s = (1.0 - c * c).sqrt();
                for k in 0..azimuth {
                    let phi = w_phi * (k as f64 + 0.5);
                    points.push(Vector3::new(s * phi.cos(), s * phi.sin(), c) * r);
                    weights.push(r * r * wr * wc * w_phi);
                }
            }
        }
        Self { points, weights }
    }

    /// 48 radial × (10 polar × 11 azimuthal) nodes.
    pub fn standard() -> Self {
        Self::new(48, 10, 11)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sample<F: FnMut(&Vector3<f64>) -> f64>(&self, f: F) -> Vec<f64> {
        self.points.iter().map(f).collect()
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

/// p(t, ξ) = h(ξ)∫ K(t, z)/h(z)·p₀(δ)dδ with z = BCH(ξ, −δ), the group
/// convolution written against Lebesgue measure in exponential
/// coordinates. Each row is divided by its discrete version of the identity
/// ∫ K(t, z)/h(z)·h(δ)dδ = 1, so the Haar-uniform density is reproduced
/// exactly and an unresolved kernel degrades to local averaging.
pub fn convolve_propagate(grid: &SphericalGrid, p0: &[f64], t: f64) -> Vec<f64> {
    let n = winding_cutoff(t);
    let norms: Vec<f64> = grid.points.iter().map(|p| p.norm()).collect();
    let units: Vec<Vector3<f64>> = grid
        .points
        .iter()
        .zip(&norms)
        .map(|(p, r)| if *r > 0.0 { p / *r } else { Vector3::z() })
        .collect();
    let trig: Vec<(f64, f64)> = norms.iter().map(|r| (r.cos(), r.sin())).collect();
    let h: Vec<f64> = norms.iter().map(|r| haar_density(*r)).collect();
    let source: Vec<f64> = p0.iter().zip(&grid.weights).map(|(p, w)| p * w).collect();
    let haar_w: Vec<f64> = h.iter().zip(&grid.weights).map(|(h, w)| h * w).collect();
    (0..grid.len())
        .map(|i| {
            let (ci, si) = trig[i];
            let (mut num, mut den) = (0.0, 0.0);
            for j in 0..grid.len() {
                // ‖BCH(ξ, −δ)‖ from cos‖z‖ = cos‖ξ‖cos‖δ‖ + sin‖ξ‖sin‖δ‖⟨ξ̂, δ̂⟩.
                let (cj, sj) = trig[j];
                let cos_z = (ci * cj + si * sj * units[i].dot(&units[j])).clamp(-1.0, 1.0);
                let k = haar_kernel(t, cos_z.acos(), n);
                num += k * source[j];
                den += k * haar_w[j];
            }
            if den > 0.0 {
                h[i] * num / den
            } else {
                0.0
            }
        })
        .collect()
}

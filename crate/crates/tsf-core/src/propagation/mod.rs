//! Tangent-space SDEs and moment propagation.
//!
//! A model is a Stratonovich SDE dξ = f(ξ)dt + G(ξ)∘dW with noise spectral
//! density Q. Moments are propagated by the continuous-time unscented
//! transform after converting to Itô form.

mod map;
mod models;

pub use map::{map_propagate, MapDynamics};
pub use models::{GyroBiasDp, GyroBiasSe3, LinearModel, Se23Model, Se3Model, Su2Model};

use nalgebra::{DMatrix, Matrix3, SMatrix, SVector, Vector3};

use crate::error::{Result, TsfError};
use crate::lie::expm;
use crate::ut::sigma_points;

pub trait TangentSde<const N: usize, const M: usize> {
    fn drift(&self, xi: &SVector<f64, N>) -> SVector<f64, N>;

    fn diffusion(&self, xi: &SVector<f64, N>) -> SMatrix<f64, N, M>;

    fn noise_density(&self) -> SMatrix<f64, M, M>;

    /// Norm of the rotational coordinates; sigma points must keep it below π.
    fn branch_norm(&self, xi: &SVector<f64, N>) -> f64 {
        xi.fixed_rows::<3>(0).norm()
    }

    /// Derivative of G at ξ along `dir`, when a closed form is available.
    fn diffusion_directional(
        &self,
        _xi: &SVector<f64, N>,
        _dir: &SVector<f64, N>,
    ) -> Option<SMatrix<f64, N, M>> {
        None
    }

    /// ½ Σₖ (∂_{vₖ}G)[:, k] with vₖ = (GQ)[:, k].
    fn ito_correction(&self, xi: &SVector<f64, N>) -> SVector<f64, N> {
        ito_correction(self, xi)
    }

    fn ito_drift(&self, xi: &SVector<f64, N>) -> SVector<f64, N> {
        self.drift(xi) + self.ito_correction(xi)
    }

    /// Itô drift and G at one point. Models override this to share work
    /// between the two.
    fn ito_drift_and_diffusion(&self, xi: &SVector<f64, N>) -> (SVector<f64, N>, SMatrix<f64, N, M>) {
        (self.ito_drift(xi), self.diffusion(xi))
    }
}

/// Itô drift f̃ᵢ = fᵢ + ½ Σ G_{jℓ}Q_{kℓ}∂ⱼG_{ik}.
pub fn ito_drift<const N: usize, const M: usize, S>(model: &S, xi: &SVector<f64, N>) -> SVector<f64, N>
where
    S: TangentSde<N, M> + ?Sized,
{
    model.ito_drift(xi)
}

/// Finite-difference step used for ∂G.
pub fn fd_step(xi_norm: f64) -> f64 {
    1e-6 * xi_norm.max(1.0)
}

/// Central difference of G along `dir`, taken with step h along dir/‖dir‖.
pub fn fd_diffusion_directional<const N: usize, const M: usize, S>(
    model: &S,
    xi: &SVector<f64, N>,
    dir: &SVector<f64, N>,
) -> SMatrix<f64, N, M>
where
    S: TangentSde<N, M> + ?Sized,
{
    let len = dir.norm();
    if len == 0.0 {
        return SMatrix::zeros();
    }
    let h = fd_step(xi.norm());
    let unit = dir / len;
    (model.diffusion(&(xi + unit * h)) - model.diffusion(&(xi - unit * h))) * (len / (2.0 * h))
}

/// Itô correction using the model's analytic ∂G when it has one and
/// central differences otherwise.
pub fn ito_correction<const N: usize, const M: usize, S>(model: &S, xi: &SVector<f64, N>) -> SVector<f64, N>
where
    S: TangentSde<N, M> + ?Sized,
{
    ito_correction_by(model, xi, |dir| {
        model
            .diffusion_directional(xi, dir)
            .unwrap_or_else(|| fd_diffusion_directional(model, xi, dir))
    })
}

/// Itô correction with ∂G always taken by central differences.
pub fn ito_correction_fd<const N: usize, const M: usize, S>(model: &S, xi: &SVector<f64, N>) -> SVector<f64, N>
where
    S: TangentSde<N, M> + ?Sized,
{
    ito_correction_by(model, xi, |dir| fd_diffusion_directional(model, xi, dir))
}

fn ito_correction_by<const N: usize, const M: usize, S, F>(
    model: &S,
    xi: &SVector<f64, N>,
    mut d_g: F,
) -> SVector<f64, N>
where
    S: TangentSde<N, M> + ?Sized,
    F: FnMut(&SVector<f64, N>) -> SMatrix<f64, N, M>,
{
    let gq = model.diffusion(xi) * model.noise_density();
    let mut out = SVector::<f64, N>::zeros();
    for k in 0..M {
        let v: SVector<f64, N> = gq.column(k).into_owned();
        if v.iter().all(|x| *x == 0.0) {
            continue;
        }
        out += d_g(&v).column(k);
    }
    out * 0.5
}

/// Mean and covariance of a tangent-space random vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments<const N: usize> {
    pub mean: SVector<f64, N>,
    pub cov: SMatrix<f64, N, N>,
}

impl<const N: usize> Moments<N> {
    pub fn new(mean: SVector<f64, N>, cov: SMatrix<f64, N, N>) -> Self {
        Self { mean, cov }
    }

    pub fn centred(cov: SMatrix<f64, N, N>) -> Self {
        Self { mean: SVector::zeros(), cov }
    }
}

/// (dm/dt, dP/dt) with the expectations taken over fresh sigma points.
pub fn moment_rates<const N: usize, const M: usize, S>(
    model: &S,
    m: &Moments<N>,
    lambda: f64,
) -> Result<(SVector<f64, N>, SMatrix<f64, N, N>)>
where
    S: TangentSde<N, M> + ?Sized,
{
    let (points, w0, wi) = sigma_points(&m.mean, &m.cov, lambda)?;
    let q = model.noise_density();
    let mut dm = SVector::<f64, N>::zeros();
    let mut cross = SMatrix::<f64, N, N>::zeros();
    let mut gqg = SMatrix::<f64, N, N>::zeros();
    for (i, p) in points.iter().enumerate() {
        let w = if i == 0 { w0 } else { wi };
        if w == 0.0 {
            continue;
        }
        let norm = model.branch_norm(p);
        if !(norm < core::f64::consts::PI) {
            return Err(TsfError::StepReject { norm });
        }
        let (f, g) = model.ito_drift_and_diffusion(p);
        dm += f * w;
        cross += (p - m.mean) * f.transpose() * w;
        gqg += g * q * g.transpose() * w;
    }
    Ok((dm, cross + cross.transpose() + gqg))
}

/// Integrates the moment ODEs with fixed-step RK4 over `t_span`, using
/// steps no longer than `dt`.
pub fn ctut_propagate<const N: usize, const M: usize, S>(
    m0: &Moments<N>,
    model: &S,
    t_span: f64,
    dt: f64,
    lambda: f64,
) -> Result<Moments<N>>
where
    S: TangentSde<N, M> + ?Sized,
{
    if !(dt > 0.0) || !(t_span >= 0.0) {
        return Err(TsfError::InvalidParameter("time step and span must be positive"));
    }
    let steps = (t_span / dt - 1e-9).ceil().max(0.0) as usize;
    if steps == 0 {
        return Ok(*m0);
    }
    let h = t_span / steps as f64;
    let mut m = *m0;
    let shift = |m: &Moments<N>, k: &(SVector<f64, N>, SMatrix<f64, N, N>), s: f64| Moments {
        mean: m.mean + k.0 * s,
        cov: symmetric(&(m.cov + k.1 * s)),
    };
    for _ in 0..steps {
        let k1 = moment_rates(model, &m, lambda)?;
        let k2 = moment_rates(model, &shift(&m, &k1, h / 2.0), lambda)?;
        let k3 = moment_rates(model, &shift(&m, &k2, h / 2.0), lambda)?;
        let k4 = moment_rates(model, &shift(&m, &k3, h), lambda)?;
        m.mean += (k1.0 + (k2.0 + k3.0) * 2.0 + k4.0) * (h / 6.0);
        m.cov = symmetric(&(m.cov + (k1.1 + (k2.1 + k3.1) * 2.0 + k4.1) * (h / 6.0)));
    }
    Ok(m)
}

fn symmetric<const N: usize>(p: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    (p + p.transpose()) * 0.5
}

/// Exact solution of the linear short-time moment equations on su(2):
/// dξ̂/dt = −([ω]× + q²/6·I)ξ̂ and
/// dP/dt = AP + PAᵀ − (q²/12)(P − tr(P)I) + q²I with A = −([ω]× + q²/12·I).
pub fn su2_shorttime_moments(m0: &Moments<3>, rate: &Vector3<f64>, q: f64, t_span: f64) -> Moments<3> {
    let q2 = q * q;
    let w = crate::groups::so3::skew(rate);
    let mean_gen = (w + Matrix3::identity() * (q2 / 6.0)) * -t_span;
    let mean_flow = expm(&DMatrix::from_column_slice(3, 3, mean_gen.as_slice()));
    let mean = Matrix3::from_column_slice(mean_flow.as_slice()) * m0.mean;

    // vec(P) with column-major stacking, plus a constant slot for q²I.
    let a = -(w + Matrix3::identity() * (q2 / 12.0));
    let mut gen = DMatrix::<f64>::zeros(10, 10);
    for c in 0..3 {
        for r in 0..3 {
            let row = r + 3 * c;
            for k in 0..3 {
                gen[(row, r + 3 * k)] += a[(c, k)];
                gen[(row, k + 3 * c)] += a[(r, k)];
            }
            gen[(row, row)] -= q2 / 12.0;
            if r == c {
                for k in 0..3 {
                    gen[(row, k + 3 * k)] += q2 / 12.0;
                }
                gen[(row, 9)] = q2;
            }
        }
    }
    let mut state = nalgebra::DVector::<f64>::zeros(10);
    state.rows_mut(0, 9).copy_from_slice(m0.cov.as_slice());
    state[9] = 1.0;
    let out = expm(&(gen * t_span)) * state;
    let cov = Matrix3::from_column_slice(&out.as_slice()[..9]);
    Moments { mean, cov: symmetric(&cov) }
}

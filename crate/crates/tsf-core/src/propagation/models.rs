//! Concrete tangent-space SDEs.

use core::ops::AddAssign;

use nalgebra::{Matrix3, Matrix6, SMatrix, SVector, Vector3, Vector6};

use super::TangentSde;
use crate::groups::se23::{self, Matrix9, Vector9};
use crate::groups::so3::{self, skew};
use crate::groups::se3;

fn block_diag(a: &Matrix3<f64>, b: &Matrix3<f64>) -> Matrix6<f64> {
    se3::blocks(a, &Matrix3::zeros(), &Matrix3::zeros(), b)
}

/// Attitude on S³ driven by a noisy rate: dξ = −[ω]×ξ dt + ½W̄_s(ξ)∘dη.
#[derive(Debug, Clone, Copy)]
pub struct Su2Model {
    pub rate: Vector3<f64>,
    pub rate_noise: Matrix3<f64>,
}

impl Su2Model {
    pub fn new(rate: Vector3<f64>, rate_noise: Matrix3<f64>) -> Self {
        Self { rate, rate_noise }
    }

    pub fn isotropic(rate: Vector3<f64>, q: f64) -> Self {
        Self::new(rate, Matrix3::identity() * (q * q))
    }
}

impl TangentSde<3, 3> for Su2Model {
    fn drift(&self, xi: &Vector3<f64>) -> Vector3<f64> {
        -self.rate.cross(xi)
    }

    fn diffusion(&self, xi: &Vector3<f64>) -> Matrix3<f64> {
        so3::wbar(&(xi * -2.0)) * 0.5
    }

    fn noise_density(&self) -> Matrix3<f64> {
        self.rate_noise
    }

    fn diffusion_directional(&self, xi: &Vector3<f64>, dir: &Vector3<f64>) -> Option<Matrix3<f64>> {
        Some(so3::wbar_directional(&(xi * -2.0), &(dir * -2.0)) * 0.5)
    }
}

/// Rigid body on SE(3) with measured angular and linear rates:
/// dξ = adbar_{(ω,v)}ξ dt + W̄(ξ)∘d(η, ζ).
#[derive(Debug, Clone, Copy)]
pub struct Se3Model {
    pub rate: Vector3<f64>,
    pub velocity: Vector3<f64>,
    pub noise: Matrix6<f64>,
}

impl Se3Model {
    pub fn new(rate: Vector3<f64>, velocity: Vector3<f64>, q_eta: Matrix3<f64>, q_zeta: Matrix3<f64>) -> Self {
        Self { rate, velocity, noise: block_diag(&q_eta, &q_zeta) }
    }
}

/// Derivative of W̄_se3 = [[W, 0], [−WNW, W]] along (dω, dv).
fn se3_wbar_directional(xi: &Vector6<f64>, dir: &Vector6<f64>) -> Matrix6<f64> {
    let (w, v) = se3::split(xi);
    let (dw, dv) = se3::split(dir);
    let wb = so3::wbar(&w);
    let dwb = so3::wbar_directional(&w, &dw);
    let n = so3::n_matrix(&w, &v);
    let dn = so3::n_matrix_directional(&w, &v, &dw, &dv);
    let d_lower = -(dwb * n * wb + wb * dn * wb + wb * n * dwb);
    se3::blocks(&dwb, &Matrix3::zeros(), &d_lower, &dwb)
}

impl TangentSde<6, 6> for Se3Model {
    fn drift(&self, xi: &Vector6<f64>) -> Vector6<f64> {
        se3::adbar(&se3::join(&self.rate, &self.velocity)) * xi
    }

    fn diffusion(&self, xi: &Vector6<f64>) -> Matrix6<f64> {
        se3::wbar(xi)
    }

    fn noise_density(&self) -> Matrix6<f64> {
        self.noise
    }

    fn diffusion_directional(&self, xi: &Vector6<f64>, dir: &Vector6<f64>) -> Option<Matrix6<f64>> {
        Some(se3_wbar_directional(xi, dir))
    }
}

/// Inertial navigation on SE(2,3) with measured rate and specific force.
/// Gravity does not enter the tangent dynamics.
#[derive(Debug, Clone, Copy)]
pub struct Se23Model {
    pub rate: Vector3<f64>,
    pub accel: Vector3<f64>,
    pub noise: Matrix6<f64>,
}

impl Se23Model {
    pub fn new(rate: Vector3<f64>, accel: Vector3<f64>, q_eta: Matrix3<f64>, q_zeta: Matrix3<f64>) -> Self {
        Self { rate, accel, noise: block_diag(&q_eta, &q_zeta) }
    }

    /// [[[ω]×, 0, 0], [[a]×, [ω]×, 0], [0, I, [ω]×]].
    pub fn drift_matrix(&self) -> Matrix9 {
        let w = skew(&self.rate);
        let mut m = se23::block_lower(&w, &skew(&self.accel), &Matrix3::zeros());
        se23::set_block(&mut m, 2, 1, &Matrix3::identity());
        m
    }
}

impl TangentSde<9, 6> for Se23Model {
    fn drift(&self, xi: &Vector9) -> Vector9 {
        self.drift_matrix() * xi
    }

    fn diffusion(&self, xi: &Vector9) -> SMatrix<f64, 9, 6> {
        -se23::wbar(xi).fixed_columns::<6>(0).into_owned()
    }

    fn noise_density(&self) -> Matrix6<f64> {
        self.noise
    }
}

/// Attitude and gyro bias under the semidirect (SE(3)) law, linearised
/// about a bias estimate β̂₀ that is held fixed over the interval.
#[derive(Debug, Clone, Copy)]
pub struct GyroBiasSe3 {
    pub rate: Vector3<f64>,
    pub bias: Vector3<f64>,
    pub noise: Matrix6<f64>,
}

struct Se3Terms {
    wb: Matrix3<f64>,
    n: Matrix3<f64>,
    beta: Vector3<f64>,
}

impl GyroBiasSe3 {
    pub fn new(rate: Vector3<f64>, bias: Vector3<f64>, q_eta: Matrix3<f64>, q_zeta: Matrix3<f64>) -> Self {
        Self { rate, bias, noise: block_diag(&q_eta, &q_zeta) }
    }

    /// β̃ = e^{[δ]×}(β̂₀ + J̄(δ)u), the bias seen through the tangent offset.
    pub fn fluctuating_bias(&self, xi: &Vector6<f64>) -> Vector3<f64> {
        let (d, u) = se3::split(xi);
        so3::exp(&d) * (self.bias + so3::jbar(&d) * u)
    }

    fn terms(&self, xi: &Vector6<f64>) -> Se3Terms {
        let (d, u) = se3::split(xi);
        Se3Terms { wb: so3::wbar(&d), n: so3::n_matrix(&d, &u), beta: self.fluctuating_bias(xi) }
    }

    /// The generator (ω − β̂₀, −[ω]×β̂₀) of the MAP flow.
    pub fn map_generator(&self) -> Vector6<f64> {
        se3::join(&(self.rate - self.bias), &-self.rate.cross(&self.bias))
    }
}

impl TangentSde<6, 6> for GyroBiasSe3 {
    fn drift(&self, xi: &Vector6<f64>) -> Vector6<f64> {
        let t = self.terms(xi);
        let dev = self.bias - t.beta;
        let top = t.wb * dev;
        let lower = -(t.wb * t.n * t.wb) * dev + t.wb * self.rate.cross(&dev);
        -se3::adbar(xi) * self.map_generator() + se3::join(&top, &lower)
    }

    /// W̄(ξ)·[[−I, 0], [−[β̃]×, I]].
    fn diffusion(&self, xi: &Vector6<f64>) -> Matrix6<f64> {
        let t = self.terms(xi);
        let wnw = t.wb * t.n * t.wb;
        se3::blocks(&-t.wb, &Matrix3::zeros(), &(wnw - t.wb * skew(&t.beta)), &t.wb)
    }

    fn noise_density(&self) -> Matrix6<f64> {
        self.noise
    }

    fn ito_drift_and_diffusion(&self, xi: &Vector6<f64>) -> (Vector6<f64>, Matrix6<f64>) {
        let (d, u) = se3::split(xi);
        let wb = so3::wbar(&d);
        let n = so3::n_matrix(&d, &u);
        let rot = so3::exp(&d);
        let jb = so3::jbar(&d);
        let inner = self.bias + jb * u;
        let beta = rot * inner;
        let wnw = wb * n * wb;

        let dev = self.bias - beta;
        let lower = -wnw * dev + wb * self.rate.cross(&dev);
        let drift = -se3::adbar(xi) * self.map_generator() + se3::join(&(wb * dev), &lower);
        let g = se3::blocks(&-wb, &Matrix3::zeros(), &(wnw - wb * skew(&beta)), &wb);

        // Only column k of ∂_{vₖ}G enters the correction.
        let gq = g * self.noise;
        let mut corr = Vector6::zeros();
        for k in 0..6 {
            let v = gq.column(k).into_owned();
            if v.iter().all(|x| *x == 0.0) {
                continue;
            }
            let (dd, du) = se3::split(&v);
            let dwb = -wb * so3::jbar_directional(&-d, &-dd) * wb;
            if k >= 3 {
                corr.fixed_rows_mut::<3>(3).add_assign(&dwb.column(k - 3));
                continue;
            }
            let dn = so3::n_matrix_directional(&d, &u, &dd, &du);
            let d_inner = so3::jbar_directional(&d, &dd) * u + jb * du;
            let d_beta = rot * (skew(&(jb * dd)) * inner + d_inner);
            let e = Vector3::ith(k, 1.0);
            let wb_e = wb.column(k).into_owned();
            let d_wnw_e = dwb * (n * wb_e) + wb * (dn * wb_e) + wb * (n * (dwb * e));
            let d_lower_e = d_wnw_e - dwb * beta.cross(&e) - wb * d_beta.cross(&e);
            corr.fixed_rows_mut::<3>(0).add_assign(&-dwb.column(k));
            corr.fixed_rows_mut::<3>(3).add_assign(&d_lower_e);
        }
        (drift + corr * 0.5, g)
    }

    fn diffusion_directional(&self, xi: &Vector6<f64>, dir: &Vector6<f64>) -> Option<Matrix6<f64>> {
        let (d, u) = se3::split(xi);
        let (dd, du) = se3::split(dir);
        let t = self.terms(xi);
        let dwb = so3::wbar_directional(&d, &dd);
        let dn = so3::n_matrix_directional(&d, &u, &dd, &du);
        let inner = self.bias + so3::jbar(&d) * u;
        let d_inner = so3::jbar_directional(&d, &dd) * u + so3::jbar(&d) * du;
        let d_beta = so3::exp_directional(&d, &dd) * inner + so3::exp(&d) * d_inner;
        let d_wnw = dwb * t.n * t.wb + t.wb * dn * t.wb + t.wb * t.n * dwb;
        let d_lower = d_wnw - dwb * skew(&t.beta) - t.wb * skew(&d_beta);
        Some(se3::blocks(&-dwb, &Matrix3::zeros(), &d_lower, &dwb))
    }
}

/// Attitude and gyro bias under the direct-product law:
/// dδ = ([ω − β̂₀]×δ − W̄(δ)u)dt − W̄(δ)∘dη, du = dζ.
#[derive(Debug, Clone, Copy)]
pub struct GyroBiasDp {
    pub rate: Vector3<f64>,
    pub bias: Vector3<f64>,
    pub noise: Matrix6<f64>,
}

impl GyroBiasDp {
    pub fn new(rate: Vector3<f64>, bias: Vector3<f64>, q_eta: Matrix3<f64>, q_zeta: Matrix3<f64>) -> Self {
        Self { rate, bias, noise: block_diag(&q_eta, &q_zeta) }
    }
}

impl TangentSde<6, 6> for GyroBiasDp {
    fn drift(&self, xi: &Vector6<f64>) -> Vector6<f64> {
        let (d, u) = se3::split(xi);
        let top = (self.rate - self.bias).cross(&d) - so3::wbar(&d) * u;
        se3::join(&top, &Vector3::zeros())
    }

    fn diffusion(&self, xi: &Vector6<f64>) -> Matrix6<f64> {
        let (d, _) = se3::split(xi);
        block_diag(&-so3::wbar(&d), &Matrix3::identity())
    }

    fn noise_density(&self) -> Matrix6<f64> {
        self.noise
    }

    fn ito_drift_and_diffusion(&self, xi: &Vector6<f64>) -> (Vector6<f64>, Matrix6<f64>) {
        let (d, u) = se3::split(xi);
        let wb = so3::wbar(&d);
        let top = (self.rate - self.bias).cross(&d) - wb * u;
        let g = block_diag(&-wb, &Matrix3::identity());
        let gq = g * self.noise;
        let mut corr = Vector3::zeros();
        for k in 0..3 {
            let dd: Vector3<f64> = gq.fixed_view::<3, 1>(0, k).into_owned();
            if dd.iter().all(|x| *x == 0.0) {
                continue;
            }
            let dwb = -wb * so3::jbar_directional(&-d, &-dd) * wb;
            corr -= dwb.column(k);
        }
        (se3::join(&(top + corr * 0.5), &Vector3::zeros()), g)
    }

    fn diffusion_directional(&self, xi: &Vector6<f64>, dir: &Vector6<f64>) -> Option<Matrix6<f64>> {
        let (d, _) = se3::split(xi);
        let (dd, _) = se3::split(dir);
        Some(block_diag(&-so3::wbar_directional(&d, &dd), &Matrix3::zeros()))
    }
}

/// dξ = Aξ dt + B dW with constant A and B.
#[derive(Debug, Clone, Copy)]
pub struct LinearModel<const N: usize, const M: usize> {
    pub generator: SMatrix<f64, N, N>,
    pub input: SMatrix<f64, N, M>,
    pub noise: SMatrix<f64, M, M>,
}

impl<const N: usize, const M: usize> TangentSde<N, M> for LinearModel<N, M> {
    fn drift(&self, xi: &SVector<f64, N>) -> SVector<f64, N> {
        self.generator * xi
    }

    fn diffusion(&self, _xi: &SVector<f64, N>) -> SMatrix<f64, N, M> {
        self.input
    }

    fn noise_density(&self) -> SMatrix<f64, M, M> {
        self.noise
    }

    fn branch_norm(&self, _xi: &SVector<f64, N>) -> f64 {
        0.0
    }

    fn diffusion_directional(&self, _xi: &SVector<f64, N>, _dir: &SVector<f64, N>) -> Option<SMatrix<f64, N, M>> {
        Some(SMatrix::zeros())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::{fd_diffusion_directional, ito_correction_fd};

    fn xi6(k: f64) -> Vector6<f64> {
        Vector6::new(0.3 * k.sin(), -0.4 * (1.3 * k).cos(), 0.5 * (0.7 * k).sin(), 1.0, -0.5 * k, 0.2)
    }

    #[test]
    fn su2_diffusion_at_identity_is_half() {
        let m = Su2Model::isotropic(Vector3::zeros(), 0.1);
        assert_eq!(m.diffusion(&Vector3::zeros()), Matrix3::identity() * 0.5);
    }

    #[test]
    fn su2_ito_correction_near_identity() {
        let q = 0.3;
        let m = Su2Model::isotropic(Vector3::zeros(), q);
        let xi = Vector3::new(1e-3, 0.0, 0.0);
        let expected = -xi * (q * q / 6.0);
        for c in [m.ito_correction(&xi), ito_correction_fd(&m, &xi)] {
            assert!((c - expected).norm() <= 1e-6 * expected.norm(), "{c}");
        }
    }

    #[test]
    fn analytic_diffusion_derivatives_match_differences() {
        let q = Matrix3::identity();
        for k in 0..10 {
            let xi = xi6(k as f64);
            let dir = xi6(k as f64 + 17.0);
            let gyro = GyroBiasSe3::new(Vector3::new(0.1, 0.0, -0.2), Vector3::new(0.01, 0.02, 0.03), q, q);
            let se3m = Se3Model::new(Vector3::new(0.1, 0.2, 0.3), Vector3::x(), q, q);
            let dp = GyroBiasDp::new(Vector3::zeros(), Vector3::zeros(), q, q);
            let pairs = [
                (gyro.diffusion_directional(&xi, &dir).unwrap(), fd_diffusion_directional(&gyro, &xi, &dir)),
                (se3m.diffusion_directional(&xi, &dir).unwrap(), fd_diffusion_directional(&se3m, &xi, &dir)),
                (dp.diffusion_directional(&xi, &dir).unwrap(), fd_diffusion_directional(&dp, &xi, &dir)),
            ];
            for (a, f) in pairs {
                assert!((a - f).abs().max() <= 1e-6 * (1.0 + a.abs().max()), "{a}{f}");
            }
        }
    }

    #[test]
    fn fused_evaluation_matches_separate_calls() {
        let mut q = Matrix6::identity() * 0.3;
        q[(0, 4)] = 0.05;
        q[(4, 0)] = 0.05;
        let se3m = GyroBiasSe3 { rate: Vector3::new(0.1, 0.0, -0.2), bias: Vector3::new(0.01, 0.02, 0.03), noise: q };
        let dp = GyroBiasDp { rate: Vector3::new(0.1, 0.0, -0.2), bias: Vector3::new(0.01, 0.02, 0.03), noise: q };
        for k in 0..20 {
            let xi = xi6(k as f64);
            let (f, g) = se3m.ito_drift_and_diffusion(&xi);
            let f_ref = se3m.drift(&xi) + crate::propagation::ito_correction(&se3m, &xi);
            assert!((f - f_ref).norm() < 1e-12 * (1.0 + f_ref.norm()), "{f}{f_ref}");
            assert!((g - se3m.diffusion(&xi)).abs().max() < 1e-14);
            let (f, g) = dp.ito_drift_and_diffusion(&xi);
            let f_ref = dp.drift(&xi) + crate::propagation::ito_correction(&dp, &xi);
            assert!((f - f_ref).norm() < 1e-12 * (1.0 + f_ref.norm()), "{f}{f_ref}");
            assert!((g - dp.diffusion(&xi)).abs().max() < 1e-14);
        }
    }

    #[test]
    fn gyro_bias_drift_vanishes_at_the_estimate() {
        let m = GyroBiasSe3::new(
            Vector3::new(0.3, -0.1, 0.2),
            Vector3::new(0.05, 0.01, -0.02),
            Matrix3::identity(),
            Matrix3::identity(),
        );
        assert_eq!(m.drift(&Vector6::zeros()), Vector6::zeros());
    }

    #[test]
    fn gyro_bias_attitude_drift_is_linear() {
        let rate = Vector3::new(0.3, -0.1, 0.2);
        let m = GyroBiasSe3::new(rate, Vector3::new(0.05, 0.01, -0.02), Matrix3::zeros(), Matrix3::zeros());
        let xi = Vector6::new(1e-4, -2e-4, 3e-4, 1e-5, 2e-5, -1e-5);
        let (d, u) = se3::split(&xi);
        let expected = rate.cross(&d) - u;
        let got = m.drift(&xi).fixed_rows::<3>(0).into_owned();
        assert!((got - expected).norm() < 1e-10);
    }

    #[test]
    fn dp_bias_block_is_pure_noise() {
        let m = GyroBiasDp::new(Vector3::new(0.1, 0.2, 0.3), Vector3::zeros(), Matrix3::identity(), Matrix3::identity());
        let xi = xi6(2.0);
        assert_eq!(m.drift(&xi).fixed_rows::<3>(3).into_owned(), Vector3::zeros());
        let d = Vector6::new(0.0, 0.0, 0.0, 1.0, 0.0, 0.0);
        assert_eq!(m.drift(&d).fixed_rows::<3>(0).into_owned(), Vector3::new(-1.0, 0.0, 0.0));
    }
}

//! Unscented Bayesian update of a concentrated Gaussian.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use crate::cg::{symmetrize, ConcentratedGaussian, OffsetGaussian};
use crate::error::{Result, TsfError};
use crate::groups::GroupElement;
use crate::ut::SigmaSet;

/// z = h(g) + w with w ~ N(0, R).
pub trait MeasurementModel {
    fn predict(&self, g: &GroupElement) -> DVector<f64>;
    fn noise_cov(&self) -> DMatrix<f64>;

    fn dim(&self) -> usize {
        self.noise_cov().nrows()
    }
}

/// A measurement given by a closure and a noise covariance.
pub struct FnMeasurement<F> {
    pub h: F,
    pub noise: DMatrix<f64>,
}

impl<F: Fn(&GroupElement) -> DVector<f64>> MeasurementModel for FnMeasurement<F> {
    fn predict(&self, g: &GroupElement) -> DVector<f64> {
        (self.h)(g)
    }

    fn noise_cov(&self) -> DMatrix<f64> {
        self.noise.clone()
    }
}

/// Triaxial magnetometer reading R·B of a known reference field.
#[derive(Debug, Clone, Copy)]
pub struct Magnetometer {
    pub field: Vector3<f64>,
    pub noise: Matrix3<f64>,
}

impl Magnetometer {
    pub fn isotropic(field: Vector3<f64>, sigma: f64) -> Self {
        Self { field, noise: Matrix3::identity() * (sigma * sigma) }
    }
}

impl MeasurementModel for Magnetometer {
    fn predict(&self, g: &GroupElement) -> DVector<f64> {
        let b = magnetometer_h(g, &self.field);
        DVector::from_column_slice(b.as_slice())
    }

    fn noise_cov(&self) -> DMatrix<f64> {
        DMatrix::from_column_slice(3, 3, self.noise.as_slice())
    }

    fn dim(&self) -> usize {
        3
    }
}

/// The attitude block of g applied to a reference vector.
pub fn magnetometer_h(g: &GroupElement, field: &Vector3<f64>) -> Vector3<f64> {
    g.rotation() * field
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CovarianceForm {
    /// Σ − K P_zz Kᵀ.
    #[default]
    Subtractive,
    /// (I − KH)Σ(I − KH)ᵀ + KRKᵀ with the statistical linearisation
    /// H = P_xzᵀΣ⁻¹.
    Joseph,
}

/// Sigma points drawn at (0, Σ) are pushed through h(exp(σ)·μ). The
/// returned tangent mean is the Kalman correction; μ is unchanged and the
/// caller is expected to whiten.
pub fn ut_update<H: MeasurementModel + ?Sized>(
    cg: &ConcentratedGaussian,
    z: &DVector<f64>,
    model: &H,
    lambda: f64,
    form: CovarianceForm,
) -> Result<OffsetGaussian> {
    let kind = cg.kind();
    let n = kind.dim();
    let r = model.noise_cov();
    let d = r.nrows();
    if z.len() != d {
        return Err(TsfError::DimensionMismatch { expected: d, found: z.len() });
    }
    let sigma = SigmaSet::new(&DVector::zeros(n), &cg.cov, lambda)?;
    let nu: Vec<DVector<f64>> = sigma
        .points
        .iter()
        .map(|p| Ok(model.predict(&kind.exp(p)?.compose(&cg.mean)?)))
        .collect::<Result<_>>()?;
    let z_hat = nu
        .iter()
        .zip(&sigma.weights)
        .fold(DVector::zeros(d), |acc, (v, w)| acc + v * *w);
    let mut p_zz = r.clone();
    let mut p_xz = DMatrix::zeros(n, d);
    for ((p, v), w) in sigma.points.iter().zip(&nu).zip(&sigma.weights) {
        let dz = v - &z_hat;
        p_zz += &dz * dz.transpose() * *w;
        p_xz += p * dz.transpose() * *w;
    }
    let p_zz = symmetrize(&p_zz);
    let chol = p_zz.clone().cholesky().ok_or(TsfError::SingularInnovation)?;
    // K = P_xz P_zz⁻¹, solved as P_zz Kᵀ = P_xzᵀ.
    let gain = chol.solve(&p_xz.transpose()).transpose();
    let offset = &gain * (z - z_hat);
    let cov = match form {
        CovarianceForm::Subtractive => &cg.cov - &gain * &p_zz * gain.transpose(),
        CovarianceForm::Joseph => {
            let sigma_chol = cg.cov.clone().cholesky().ok_or(TsfError::Singular)?;
            let h = sigma_chol.solve(&p_xz).transpose();
            let a = DMatrix::identity(n, n) - &gain * h;
            &a * &cg.cov * a.transpose() + &gain * &r * gain.transpose()
        }
    };
    OffsetGaussian::new(cg.mean, offset, symmetrize(&cov))
}

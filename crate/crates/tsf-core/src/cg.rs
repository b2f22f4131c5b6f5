//! Concentrated Gaussians g = e^{M(ξ)}μ with ξ ~ N(0, Σ), their offset
//! variant with a nonzero tangent mean, and whitening back to CG form.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, TsfError};
use crate::groups::{BiasLaw, GroupElement, GroupKind};
use crate::ut::{cholesky_dyn, weighted_cov, weighted_mean, SigmaSet};

pub const DEFAULT_WHITEN_TOL: f64 = 1e-15;
pub const DEFAULT_WHITEN_MAX_ITER: usize = 50;
/// Below this offset norm whitening uses the first-order BCH expansion.
pub const FIRST_ORDER_SWITCH: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentratedGaussian {
    pub mean: GroupElement,
    pub cov: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OffsetGaussian {
    pub mean: GroupElement,
    pub offset: DVector<f64>,
    pub cov: DMatrix<f64>,
}

/// Result of [`whiten`] together with the number of recentring passes.
#[derive(Debug, Clone)]
pub struct Whitened {
    pub cg: ConcentratedGaussian,
    pub iterations: usize,
}

fn check_cov(kind: GroupKind, cov: &DMatrix<f64>) -> Result<()> {
    let n = kind.dim();
    if cov.nrows() != n || cov.ncols() != n {
        return Err(TsfError::DimensionMismatch { expected: n, found: cov.nrows() });
    }
    let asym = (cov - cov.transpose()).abs().max();
    if asym > 1e-12 * (1.0 + cov.abs().max()) {
        return Err(TsfError::InvalidParameter("covariance is not symmetric"));
    }
    Ok(())
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

impl ConcentratedGaussian {
    pub fn new(mean: GroupElement, cov: DMatrix<f64>) -> Result<Self> {
        check_cov(mean.kind(), &cov)?;
        cholesky_dyn(&cov)?;
        Ok(Self { mean, cov })
    }

    pub fn kind(&self) -> GroupKind {
        self.mean.kind()
    }

    /// Draws e^{M(Lz)}μ with z standard normal.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<GroupElement> {
        let n = self.kind().dim();
        let l = cholesky_dyn(&self.cov)?;
        let z = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        self.kind().exp(&(l * z))?.compose(&self.mean)
    }

    /// χ²_G = ⟨ℓ, Σ⁻¹ℓ⟩/n with ℓ = log(g·μ⁻¹).
    pub fn chi2(&self, truth: &GroupElement) -> Result<f64> {
        let l = truth.compose(&self.mean.inverse())?.log()?;
        let chol = self.cov.clone().cholesky().ok_or(TsfError::Singular)?;
        let y = chol.solve(&l);
        Ok(l.dot(&y) / l.len() as f64)
    }
}

impl OffsetGaussian {
    pub fn new(mean: GroupElement, offset: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        check_cov(mean.kind(), &cov)?;
        if offset.len() != mean.kind().dim() {
            return Err(TsfError::DimensionMismatch { expected: mean.kind().dim(), found: offset.len() });
        }
        Ok(Self { mean, offset, cov })
    }

    pub fn from_cg(cg: &ConcentratedGaussian) -> Self {
        let n = cg.kind().dim();
        Self { mean: cg.mean, offset: DVector::zeros(n), cov: cg.cov.clone() }
    }
}

/// Moves the tangent mean into the group mean: with a = ξ̂, ξ̃ = BCH(ξ, −a)
/// and μ̃ = e^{M(a)}μ. The new mean of ξ̃ is recomputed with the UT through
/// the exact BCH map and the covariance becomes J̄⁻¹(a)ΣJ̄⁻ᵀ(a). Passes
/// repeat until ‖ξ̂‖ ≤ tol.
pub fn whiten(og: &OffsetGaussian, tol: f64, max_iter: usize) -> Result<Whitened> {
    let kind = og.mean.kind();
    let mut mean = og.mean;
    let mut offset = og.offset.clone();
    let mut cov = og.cov.clone();
    let mut iterations = 0;
    while offset.norm() > tol {
        if iterations == max_iter {
            return Err(TsfError::NoConvergence { iterations, residual: offset.norm() });
        }
        let a = offset.clone();
        let neg = -&a;
        let sigma = SigmaSet::new(&offset, &cov, 0.0)?;
        let shifted: Vec<DVector<f64>> = if a.norm() < FIRST_ORDER_SWITCH {
            // ξ̃ ≈ ξ − J̄⁻¹(ξ)a, with J̄⁻¹(ξ) = W̄(−ξ).
            sigma
                .points
                .iter()
                .map(|p| Ok(p - kind.wbar(&-p)? * &a))
                .collect::<Result<_>>()?
        } else {
            sigma
                .points
                .iter()
                .map(|p| kind.bch(p, &neg))
                .collect::<Result<_>>()?
        };
        let jinv = kind.wbar(&neg)?;
        cov = symmetrize(&(&jinv * &cov * jinv.transpose()));
        offset = weighted_mean(&shifted, &sigma.weights);
        mean = kind.exp(&a)?.compose(&mean)?;
        iterations += 1;
    }
    Ok(Whitened { cg: ConcentratedGaussian { mean, cov }, iterations })
}

/// Re-expresses a CG on SO(3) × R³ under another group law: sigma points
/// are mapped through log_B(exp_A(σ)·μ·μ⁻¹) and moment-matched about
/// their mean. The manifold point μ is unchanged.
pub fn transport_law(cg: &ConcentratedGaussian, to: BiasLaw) -> Result<ConcentratedGaussian> {
    let GroupElement::AttitudeBias(from, mu) = cg.mean else {
        return Err(TsfError::TagMismatch);
    };
    if from == to {
        return Ok(cg.clone());
    }
    let sigma = SigmaSet::new(&DVector::zeros(6), &cg.cov, 0.0)?;
    let mu_to_inv = mu.inverse(to);
    let mapped: Vec<DVector<f64>> = sigma
        .points
        .iter()
        .map(|p| {
            let xi = nalgebra::Vector6::from_column_slice(p.as_slice());
            let g = crate::groups::AttitudeBias::exp(&xi, from).compose(&mu, from);
            let l = g.compose(&mu_to_inv, to).log(to)?;
            Ok(DVector::from_column_slice(l.as_slice()))
        })
        .collect::<Result<_>>()?;
    let cov = symmetrize(&weighted_cov(&mapped, &sigma.weights));
    Ok(ConcentratedGaussian { mean: GroupElement::AttitudeBias(to, mu), cov })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Quaternion;
    use nalgebra::Vector3;

    #[test]
    fn chi2_of_diagonal_quadratic_form() {
        let mu = GroupElement::S3(Quaternion::identity());
        let cg = ConcentratedGaussian::new(mu, DMatrix::identity(3, 3) * 0.01).unwrap();
        assert_eq!(cg.chi2(&mu).unwrap(), 0.0);
        let g = GroupKind::S3.exp(&DVector::from_vec(alloc::vec![0.1, 0.0, 0.0])).unwrap();
        assert!((cg.chi2(&g).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn whitening_a_centred_gaussian_is_a_no_op() {
        let mu = GroupElement::So3(crate::groups::so3::exp(&Vector3::new(0.1, 0.2, 0.3)));
        let og = OffsetGaussian::new(mu, DVector::zeros(3), DMatrix::identity(3, 3) * 1e-3).unwrap();
        let w = whiten(&og, 1e-15, 50).unwrap();
        assert_eq!(w.iterations, 0);
        assert_eq!(w.cg.mean, mu);
    }

    #[test]
    fn first_pass_covariance_uses_inverse_jacobian() {
        let kind = GroupKind::S3;
        let mu = kind.identity();
        let xi = DVector::from_vec(alloc::vec![0.2, 0.0, 0.0]);
        let cov = DMatrix::identity(3, 3) * 1e-4;
        let og = OffsetGaussian::new(mu, xi.clone(), cov.clone()).unwrap();
        let w = whiten(&og, 0.1, 1).unwrap();
        let jinv = kind.jbar(&xi).unwrap().try_inverse().unwrap();
        let expected = &jinv * cov * jinv.transpose();
        assert!((w.cg.cov - expected).abs().max() < 1e-18);
    }
}

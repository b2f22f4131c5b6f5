//! SO(3) × R³ as an attitude/gyro-bias state under the direct-product law,
//! the SE(3) semidirect law, and the time-parameterised law ∘_t.

use nalgebra::{Matrix3, Matrix6, SMatrix, Vector3, Vector6};

use super::{se3, so3};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BiasLaw {
    /// (R₁, β₁)(R₂, β₂) = (R₁R₂, β₁ + β₂)
    Direct,
    /// (R₁, β₁)(R₂, β₂) = (R₁R₂, β₁ + R₁β₂)
    Semidirect,
}

/// A rotation paired with a bias vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttitudeBias {
    pub rot: Matrix3<f64>,
    pub bias: Vector3<f64>,
}

impl AttitudeBias {
    pub fn identity() -> Self {
        Self { rot: Matrix3::identity(), bias: Vector3::zeros() }
    }

    pub fn compose(&self, rhs: &Self, law: BiasLaw) -> Self {
        let rot = so3::reorthonormalize(&(self.rot * rhs.rot));
        let bias = match law {
            BiasLaw::Direct => self.bias + rhs.bias,
            BiasLaw::Semidirect => self.bias + self.rot * rhs.bias,
        };
        Self { rot, bias }
    }

    pub fn inverse(&self, law: BiasLaw) -> Self {
        let rt = self.rot.transpose();
        let bias = match law {
            BiasLaw::Direct => -self.bias,
            BiasLaw::Semidirect => -(rt * self.bias),
        };
        Self { rot: rt, bias }
    }

    pub fn exp(xi: &Vector6<f64>, law: BiasLaw) -> Self {
        match law {
            BiasLaw::Direct => {
                let (d, u) = se3::split(xi);
                Self { rot: so3::exp(&d), bias: u }
            }
            BiasLaw::Semidirect => {
                let (rot, bias) = se3::exp(xi);
                Self { rot, bias }
            }
        }
    }

    pub fn log(&self, law: BiasLaw) -> Result<Vector6<f64>> {
        match law {
            BiasLaw::Direct => Ok(se3::join(&so3::log(&self.rot)?, &self.bias)),
            BiasLaw::Semidirect => se3::log(&self.rot, &self.bias),
        }
    }

    /// Matrix embedding: 4×4 SE(3) form, or diag(R, [[I, β], [0, 1]]) for
    /// the direct product.
    pub fn matrix(&self, law: BiasLaw) -> nalgebra::DMatrix<f64> {
        match law {
            BiasLaw::Semidirect => {
                let m = se3::matrix(&self.rot, &self.bias);
                nalgebra::DMatrix::from_column_slice(4, 4, m.as_slice())
            }
            BiasLaw::Direct => {
                let mut m = nalgebra::DMatrix::identity(7, 7);
                m.view_mut((0, 0), (3, 3)).copy_from(&self.rot);
                m.view_mut((3, 6), (3, 1)).copy_from(&self.bias);
                m
            }
        }
    }

    /// (R₁, β₁) ∘_t (R₂, β₂) = (R₁R₂, t⁻¹·BCH(t R₁β₂, t β₁)), which reduces
    /// to the semidirect law as t → 0.
    pub fn compose_timed(&self, rhs: &Self, t: f64) -> Result<Self> {
        let rot = so3::reorthonormalize(&(self.rot * rhs.rot));
        let moved = self.rot * rhs.bias;
        if t == 0.0 {
            return Ok(Self { rot, bias: self.bias + moved });
        }
        let c = so3::bch(&(moved * t), &(self.bias * t))?;
        Ok(Self { rot, bias: c / t })
    }
}

pub fn adbar(xi: &Vector6<f64>, law: BiasLaw) -> Matrix6<f64> {
    match law {
        BiasLaw::Semidirect => se3::adbar(xi),
        BiasLaw::Direct => {
            let (d, _) = se3::split(xi);
            let z = Matrix3::zeros();
            se3::blocks(&so3::skew(&d), &z, &z, &z)
        }
    }
}

pub fn jbar(xi: &Vector6<f64>, law: BiasLaw) -> Matrix6<f64> {
    match law {
        BiasLaw::Semidirect => se3::jbar(xi),
        BiasLaw::Direct => {
            let (d, _) = se3::split(xi);
            let z = Matrix3::zeros();
            se3::blocks(&so3::jbar(&d), &z, &z, &Matrix3::identity())
        }
    }
}

pub fn wbar(xi: &Vector6<f64>, law: BiasLaw) -> Matrix6<f64> {
    match law {
        BiasLaw::Semidirect => se3::wbar(xi),
        BiasLaw::Direct => {
            let (d, _) = se3::split(xi);
            let z = Matrix3::zeros();
            se3::blocks(&so3::wbar(&d), &z, &z, &Matrix3::identity())
        }
    }
}

/// Algebra matrix in the embedding returned by [`AttitudeBias::matrix`].
pub fn algebra_matrix(xi: &Vector6<f64>, law: BiasLaw) -> nalgebra::DMatrix<f64> {
    match law {
        BiasLaw::Semidirect => {
            let m: SMatrix<f64, 4, 4> = se3::algebra_matrix(xi);
            nalgebra::DMatrix::from_column_slice(4, 4, m.as_slice())
        }
        BiasLaw::Direct => {
            let (d, u) = se3::split(xi);
            let mut m = nalgebra::DMatrix::zeros(7, 7);
            m.view_mut((0, 0), (3, 3)).copy_from(&so3::skew(&d));
            m.view_mut((3, 6), (3, 1)).copy_from(&u);
            m
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(a: f64) -> AttitudeBias {
        AttitudeBias {
            rot: so3::exp(&Vector3::new(0.3 * a, -0.2, 0.5 * a.cos())),
            bias: Vector3::new(a, 1.0 - a, 0.5 * a * a),
        }
    }

    #[test]
    fn semidirect_with_identity_rotation_adds_biases() {
        let a = AttitudeBias { rot: Matrix3::identity(), bias: Vector3::new(1.0, 2.0, 3.0) };
        let b = el(0.7);
        let c = a.compose(&b, BiasLaw::Semidirect);
        assert!((c.bias - (a.bias + b.bias)).norm() < 1e-15);
    }

    #[test]
    fn timed_law_with_zero_second_bias_keeps_first_bias() {
        let a = el(0.4);
        let b = AttitudeBias { rot: el(1.1).rot, bias: Vector3::zeros() };
        for t in [0.1, 0.5, 2.0] {
            let c = a.compose_timed(&b, t).unwrap();
            assert!((c.bias - a.bias).norm() < 1e-14);
        }
    }

    #[test]
    fn timed_law_approaches_semidirect() {
        let (a, b) = (el(0.4), el(-0.9));
        let sd = a.compose(&b, BiasLaw::Semidirect);
        let tl = a.compose_timed(&b, 1e-6).unwrap();
        assert!((sd.bias - tl.bias).norm() < 1e-5);
    }

    #[test]
    fn both_laws_satisfy_group_axioms() {
        for law in [BiasLaw::Direct, BiasLaw::Semidirect] {
            let (a, b, c) = (el(0.2), el(-0.5), el(1.3));
            let l = a.compose(&b, law).compose(&c, law);
            let r = a.compose(&b.compose(&c, law), law);
            assert!((l.rot - r.rot).abs().max() < 1e-12 && (l.bias - r.bias).norm() < 1e-12);
            let e = a.compose(&a.inverse(law), law);
            assert!((e.rot - Matrix3::identity()).abs().max() < 1e-12 && e.bias.norm() < 1e-12);
            let m = a.compose(&b, law).matrix(law) - a.matrix(law) * b.matrix(law);
            assert!(m.abs().max() < 1e-12);
        }
    }

    #[test]
    fn exp_log_round_trip_both_laws() {
        let xi = Vector6::new(0.2, -0.4, 0.1, 1e-4, 2e-4, -3e-4);
        for law in [BiasLaw::Direct, BiasLaw::Semidirect] {
            let back = AttitudeBias::exp(&xi, law).log(law).unwrap();
            assert!((back - xi).norm() < 1e-14);
        }
    }
}

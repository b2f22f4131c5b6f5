//! Concrete matrix Lie groups behind one tagged interface.
//!
//! Each group has a fixed-size module with its closed forms; [`GroupKind`]
//! and [`GroupElement`] dispatch to them through dynamically sized vectors
//! so that generic code (whitening, sampling, χ²) can stay group-agnostic.

pub mod bias;
pub mod coeffs;
pub mod quaternion;
pub mod se23;
pub mod se3;
pub mod so3;

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, Matrix3, Vector3, Vector6};

use crate::error::{Result, TsfError};
use crate::lie::LieAlgebraBasis;
pub use bias::{AttitudeBias, BiasLaw};
pub use quaternion::Quaternion;
pub use se23::Se23;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Unit quaternions, acting on R⁴ by left multiplication.
    S3,
    So3,
    Se3,
    Se23,
    AttitudeBias(BiasLaw),
}

impl GroupKind {
    /// Tangent dimension.
    pub fn dim(&self) -> usize {
        match self {
            GroupKind::S3 | GroupKind::So3 => 3,
            GroupKind::Se3 | GroupKind::AttitudeBias(_) => 6,
            GroupKind::Se23 => 9,
        }
    }

    /// Size of the square matrices representing elements.
    pub fn embedding_dim(&self) -> usize {
        match self {
            GroupKind::So3 => 3,
            GroupKind::S3 | GroupKind::Se3 | GroupKind::AttitudeBias(BiasLaw::Semidirect) => 4,
            GroupKind::Se23 => 5,
            GroupKind::AttitudeBias(BiasLaw::Direct) => 7,
        }
    }

    /// Norm of the rotational part of ξ; principal logs keep it below π.
    pub fn rotation_norm(&self, xi: &[f64]) -> f64 {
        Vector3::new(xi[0], xi[1], xi[2]).norm()
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupKind::S3 => GroupElement::S3(Quaternion::identity()),
            GroupKind::So3 => GroupElement::So3(Matrix3::identity()),
            GroupKind::Se3 => GroupElement::Se3 { rot: Matrix3::identity(), trans: Vector3::zeros() },
            GroupKind::Se23 => GroupElement::Se23(Se23::identity()),
            GroupKind::AttitudeBias(law) => GroupElement::AttitudeBias(*law, AttitudeBias::identity()),
        }
    }

    fn check(&self, xi: &DVector<f64>) -> Result<()> {
        if xi.len() != self.dim() {
            return Err(TsfError::DimensionMismatch { expected: self.dim(), found: xi.len() });
        }
        Ok(())
    }

    /// Algebra matrix M(ξ) in the element embedding.
    pub fn matrize(&self, xi: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check(xi)?;
        let d = self.embedding_dim();
        Ok(match self {
            GroupKind::S3 => {
                let m = quaternion::algebra_matrix(&v3(xi, 0));
                DMatrix::from_column_slice(d, d, m.as_slice())
            }
            GroupKind::So3 => DMatrix::from_column_slice(d, d, so3::skew(&v3(xi, 0)).as_slice()),
            GroupKind::Se3 => DMatrix::from_column_slice(d, d, se3::algebra_matrix(&v6(xi)).as_slice()),
            GroupKind::Se23 => {
                DMatrix::from_column_slice(d, d, se23::algebra_matrix(&v9(xi)).as_slice())
            }
            GroupKind::AttitudeBias(law) => bias::algebra_matrix(&v6(xi), *law),
        })
    }

    /// Basis E₁..Eₙ with E_i = M(e_i).
    pub fn basis(&self) -> LieAlgebraBasis {
        let n = self.dim();
        let mats: Vec<DMatrix<f64>> = (0..n)
            .map(|i| {
                let mut e = DVector::zeros(n);
                e[i] = 1.0;
                self.matrize(&e).expect("basis vector has the group dimension")
            })
            .collect();
        LieAlgebraBasis::new(mats).expect("group bases are valid")
    }

    pub fn exp(&self, xi: &DVector<f64>) -> Result<GroupElement> {
        self.check(xi)?;
        Ok(match self {
            GroupKind::S3 => GroupElement::S3(Quaternion::exp(&v3(xi, 0))),
            GroupKind::So3 => GroupElement::So3(so3::exp(&v3(xi, 0))),
            GroupKind::Se3 => {
                let (rot, trans) = se3::exp(&v6(xi));
                GroupElement::Se3 { rot, trans }
            }
            GroupKind::Se23 => GroupElement::Se23(Se23::exp(&v9(xi))),
            GroupKind::AttitudeBias(law) => {
                GroupElement::AttitudeBias(*law, AttitudeBias::exp(&v6(xi), *law))
            }
        })
    }

    pub fn adbar(&self, xi: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check(xi)?;
        Ok(match self {
            GroupKind::S3 => dm3(&(so3::skew(&v3(xi, 0)) * -2.0)),
            GroupKind::So3 => dm3(&so3::skew(&v3(xi, 0))),
            GroupKind::Se3 => dm(6, se3::adbar(&v6(xi)).as_slice()),
            GroupKind::Se23 => dm(9, se23::adbar(&v9(xi)).as_slice()),
            GroupKind::AttitudeBias(law) => dm(6, bias::adbar(&v6(xi), *law).as_slice()),
        })
    }

    /// J̄(ξ) = ∫₀¹ e^{−s·adbar_ξ} ds from the closed forms.
    pub fn jbar(&self, xi: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check(xi)?;
        Ok(match self {
            GroupKind::S3 => dm3(&so3::jbar(&(v3(xi, 0) * -2.0))),
            GroupKind::So3 => dm3(&so3::jbar(&v3(xi, 0))),
            GroupKind::Se3 => dm(6, se3::jbar(&v6(xi)).as_slice()),
            GroupKind::Se23 => dm(9, se23::jbar(&v9(xi)).as_slice()),
            GroupKind::AttitudeBias(law) => dm(6, bias::jbar(&v6(xi), *law).as_slice()),
        })
    }

    /// W̄(ξ) = (∫₀¹ e^{s·adbar_ξ} ds)⁻¹ from the closed forms.
    pub fn wbar(&self, xi: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check(xi)?;
        let rot = self.rotation_norm(xi.as_slice());
        let limit = match self {
            GroupKind::S3 => core::f64::consts::PI,
            _ => 2.0 * core::f64::consts::PI,
        };
        if rot >= limit - 1e-9 {
            return Err(TsfError::Singular);
        }
        Ok(match self {
            GroupKind::S3 => dm3(&so3::wbar(&(v3(xi, 0) * -2.0))),
            GroupKind::So3 => dm3(&so3::wbar(&v3(xi, 0))),
            GroupKind::Se3 => dm(6, se3::wbar(&v6(xi)).as_slice()),
            GroupKind::Se23 => dm(9, se23::wbar(&v9(xi)).as_slice()),
            GroupKind::AttitudeBias(law) => dm(6, bias::wbar(&v6(xi), *law).as_slice()),
        })
    }

    /// c with exp(c) = exp(a)·exp(b), on the principal branch.
    pub fn bch(&self, a: &DVector<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
        self.check(a)?;
        self.check(b)?;
        match self {
            GroupKind::S3 => {
                let c = so3::bch_s(&v3(a, 0), &v3(b, 0))?;
                Ok(DVector::from_column_slice(c.as_slice()))
            }
            GroupKind::So3 => {
                let c = so3::bch(&v3(a, 0), &v3(b, 0))?;
                Ok(DVector::from_column_slice(c.as_slice()))
            }
            _ => self.exp(a)?.compose(&self.exp(b)?)?.log(),
        }
    }
}

/// An element of one of the supported groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupElement {
    S3(Quaternion),
    So3(Matrix3<f64>),
    Se3 { rot: Matrix3<f64>, trans: Vector3<f64> },
    Se23(Se23),
    AttitudeBias(BiasLaw, AttitudeBias),
}

impl GroupElement {
    pub fn kind(&self) -> GroupKind {
        match self {
            GroupElement::S3(_) => GroupKind::S3,
            GroupElement::So3(_) => GroupKind::So3,
            GroupElement::Se3 { .. } => GroupKind::Se3,
            GroupElement::Se23(_) => GroupKind::Se23,
            GroupElement::AttitudeBias(law, _) => GroupKind::AttitudeBias(*law),
        }
    }

    /// The rotation carried by the element. For S³ this is R(q).
    pub fn rotation(&self) -> Matrix3<f64> {
        match self {
            GroupElement::S3(q) => q.to_rotation(),
            GroupElement::So3(r) => *r,
            GroupElement::Se3 { rot, .. } => *rot,
            GroupElement::Se23(g) => g.rot,
            GroupElement::AttitudeBias(_, g) => g.rot,
        }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        match self {
            GroupElement::S3(q) => dm(4, q.left_matrix().as_slice()),
            GroupElement::So3(r) => dm3(r),
            GroupElement::Se3 { rot, trans } => dm(4, se3::matrix(rot, trans).as_slice()),
            GroupElement::Se23(g) => dm(5, g.matrix().as_slice()),
            GroupElement::AttitudeBias(law, g) => g.matrix(*law),
        }
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        Ok(match (self, rhs) {
            (GroupElement::S3(a), GroupElement::S3(b)) => GroupElement::S3(a.mul(b)),
            (GroupElement::So3(a), GroupElement::So3(b)) => {
                GroupElement::So3(so3::reorthonormalize(&(a * b)))
            }
            (GroupElement::Se3 { rot: ra, trans: ta }, GroupElement::Se3 { rot: rb, trans: tb }) => {
                let (rot, trans) = se3::compose((ra, ta), (rb, tb));
                GroupElement::Se3 { rot, trans }
            }
            (GroupElement::Se23(a), GroupElement::Se23(b)) => GroupElement::Se23(a.compose(b)),
            (GroupElement::AttitudeBias(la, a), GroupElement::AttitudeBias(lb, b)) if la == lb => {
                GroupElement::AttitudeBias(*la, a.compose(b, *la))
            }
            _ => return Err(TsfError::TagMismatch),
        })
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::S3(q) => GroupElement::S3(q.conjugate()),
            GroupElement::So3(r) => GroupElement::So3(r.transpose()),
            GroupElement::Se3 { rot, trans } => {
                let (rot, trans) = se3::inverse(rot, trans);
                GroupElement::Se3 { rot, trans }
            }
            GroupElement::Se23(g) => GroupElement::Se23(g.inverse()),
            GroupElement::AttitudeBias(law, g) => GroupElement::AttitudeBias(*law, g.inverse(*law)),
        }
    }

    /// Principal logarithm.
    pub fn log(&self) -> Result<DVector<f64>> {
        let v: Vec<f64> = match self {
            GroupElement::S3(q) => {
                let a = q.log();
                let n = a.norm();
                if n > core::f64::consts::PI - so3::CUT_LOCUS_MARGIN {
                    return Err(TsfError::CutLocus { angle: n });
                }
                a.as_slice().to_vec()
            }
            GroupElement::So3(r) => so3::log(r)?.as_slice().to_vec(),
            GroupElement::Se3 { rot, trans } => se3::log(rot, trans)?.as_slice().to_vec(),
            GroupElement::Se23(g) => g.log()?.as_slice().to_vec(),
            GroupElement::AttitudeBias(law, g) => g.log(*law)?.as_slice().to_vec(),
        };
        Ok(DVector::from_vec(v))
    }

    /// Largest deviation from the group's membership constraints.
    pub fn membership_residual(&self) -> f64 {
        let r = self.rotation();
        let ortho = (r * r.transpose() - Matrix3::identity()).abs().max();
        let det = (r.determinant() - 1.0).abs();
        let extra = match self {
            GroupElement::S3(q) => (q.norm() - 1.0).abs(),
            _ => 0.0,
        };
        ortho.max(det).max(extra)
    }
}

fn v3(x: &DVector<f64>, at: usize) -> Vector3<f64> {
    Vector3::new(x[at], x[at + 1], x[at + 2])
}

fn v6(x: &DVector<f64>) -> Vector6<f64> {
    Vector6::from_column_slice(x.as_slice())
}

fn v9(x: &DVector<f64>) -> se23::Vector9 {
    se23::Vector9::from_column_slice(x.as_slice())
}

fn dm(n: usize, s: &[f64]) -> DMatrix<f64> {
    DMatrix::from_column_slice(n, n, s)
}

fn dm3(m: &Matrix3<f64>) -> DMatrix<f64> {
    dm(3, m.as_slice())
}

//! Group-agnostic Lie machinery on matrix algebras given by an explicit
//! basis: coordinates, adjoint matrices, exponential-map Jacobians by
//! series, affinity defects of vector fields, characterised group-affine
//! fields, and the pseudo-inverse integral identities.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Result, TsfError};

/// Projection residual above which a matrix is considered outside the span.
pub const ALGEBRA_TOL: f64 = 1e-9;

/// Matrix exponential by scaling and squaring around a Taylor series.
/// (nalgebra's own `exp` needs `std`.)
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.abs().row_sum().max();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m * scale;
    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..30 {
        term = &term * &a / k as f64;
        sum += &term;
        if term.abs().max() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

/// A basis E₁..Eₙ of d×d matrices, with coordinates recovered by least
/// squares against the Gram matrix.
#[derive(Debug, Clone)]
pub struct LieAlgebraBasis {
    basis: Vec<DMatrix<f64>>,
    gram_inv: DMatrix<f64>,
}

impl LieAlgebraBasis {
    pub fn new(basis: Vec<DMatrix<f64>>) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(TsfError::InvalidBasis);
        }
        let d = basis[0].nrows();
        if basis.iter().any(|e| e.nrows() != d || e.ncols() != d) {
            return Err(TsfError::InvalidBasis);
        }
        let gram = DMatrix::from_fn(n, n, |i, j| basis[i].dot(&basis[j]));
        let gram_inv = gram.try_inverse().ok_or(TsfError::InvalidBasis)?;
        let out = Self { basis, gram_inv };
        for i in 0..n {
            for j in 0..n {
                out.vectorize(&commutator(&out.basis[i], &out.basis[j]))
                    .map_err(|_| TsfError::InvalidBasis)?;
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn embedding_dim(&self) -> usize {
        self.basis[0].nrows()
    }

    pub fn element(&self, i: usize) -> &DMatrix<f64> {
        &self.basis[i]
    }

    pub fn matrize(&self, xi: &DVector<f64>) -> DMatrix<f64> {
        let d = self.embedding_dim();
        self.basis
            .iter()
            .zip(xi.iter())
            .fold(DMatrix::zeros(d, d), |acc, (e, c)| acc + e * *c)
    }

    pub fn vectorize(&self, x: &DMatrix<f64>) -> Result<DVector<f64>> {
        let n = self.dim();
        if x.nrows() != self.embedding_dim() || x.ncols() != self.embedding_dim() {
            return Err(TsfError::DimensionMismatch {
                expected: self.embedding_dim(),
                found: x.nrows(),
            });
        }
        let rhs = DVector::from_fn(n, |i, _| self.basis[i].dot(x));
        let xi = &self.gram_inv * rhs;
        let residual = (self.matrize(&xi) - x).abs().max();
        if residual > ALGEBRA_TOL * (1.0 + x.abs().max()) {
            return Err(TsfError::NotInAlgebra { residual });
        }
        Ok(xi)
    }

    /// adbar_ξ with columns V([M(ξ), E_j]).
    pub fn adbar(&self, xi: &DVector<f64>) -> DMatrix<f64> {
        let x = self.matrize(xi);
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for j in 0..n {
            let col = self
                .vectorize(&commutator(&x, &self.basis[j]))
                .expect("bracket closure was checked at construction");
            out.set_column(j, &col);
        }
        out
    }
}

/// Σ_k (−A)^k/(k+1)! = ∫₀¹ e^{−sA} ds, summed until terms fall below 1e-16.
pub fn series_jbar(adbar: &DMatrix<f64>) -> DMatrix<f64> {
    phi1_series(&(-adbar))
}

/// (Σ_k A^k/(k+1)!)⁻¹ = (∫₀¹ e^{sA} ds)⁻¹.
pub fn series_wbar(adbar: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    phi1_series(adbar).try_inverse().ok_or(TsfError::Singular)
}

fn phi1_series(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..200 {
        term = &term * a / (k as f64 + 1.0);
        sum += &term;
        if term.abs().max() < 1e-16 {
            break;
        }
    }
    sum
}

/// ‖f(g₁g₂) − f(g₁)g₂ − g₁f(g₂) + g₁f(I)g₂‖_max for a vector field given in
/// matrix form f(g) ∈ T_gG.
pub fn group_affine_defect<F>(f: F, g1: &DMatrix<f64>, g2: &DMatrix<f64>) -> f64
where
    F: Fn(&DMatrix<f64>) -> DMatrix<f64>,
{
    let id = DMatrix::identity(g1.nrows(), g1.ncols());
    let d = f(&(g1 * g2)) - f(g1) * g2 - g1 * f(g2) + g1 * f(&id) * g2;
    d.abs().max()
}

/// A group-affine field in the characterised form
/// f(e^X) = e^X J(X) D X + e^X Y₁ + Y₂ e^X with D a derivation of the algebra.
#[derive(Debug, Clone)]
pub struct CharacterizedField {
    pub derivation: DMatrix<f64>,
    pub y1: DVector<f64>,
    pub y2: DVector<f64>,
}

impl CharacterizedField {
    /// Checks D[E_i, E_j] = [DE_i, E_j] + [E_i, DE_j] on all basis pairs.
    pub fn new(
        basis: &LieAlgebraBasis,
        derivation: DMatrix<f64>,
        y1: DVector<f64>,
        y2: DVector<f64>,
    ) -> Result<Self> {
        let n = basis.dim();
        if derivation.nrows() != n || derivation.ncols() != n {
            return Err(TsfError::DimensionMismatch { expected: n, found: derivation.nrows() });
        }
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (ei, ej) = (unit(n, i), unit(n, j));
                let bracket = basis.vectorize(&commutator(basis.element(i), basis.element(j)))?;
                let lhs = &derivation * bracket;
                let dei = basis.matrize(&(&derivation * &ei));
                let dej = basis.matrize(&(&derivation * &ej));
                let rhs = basis.vectorize(
                    &(commutator(&dei, basis.element(j)) + commutator(basis.element(i), &dej)),
                )?;
                defect = defect.max((lhs - rhs).abs().max());
            }
        }
        if defect > 1e-9 {
            return Err(TsfError::NotADerivation { defect });
        }
        Ok(Self { derivation, y1, y2 })
    }

    /// The field evaluated at g = e^{M(ξ)}.
    pub fn evaluate(&self, basis: &LieAlgebraBasis, xi: &DVector<f64>) -> DMatrix<f64> {
        let x = basis.matrize(xi);
        let g = expm(&x);
        let jd = series_jbar(&basis.adbar(xi)) * (&self.derivation * xi);
        &g * basis.matrize(&jd) + &g * basis.matrize(&self.y1) + basis.matrize(&self.y2) * &g
    }

    /// D̄ + adbar(Y₂), the generator of the linear tangent flow.
    pub fn generator(&self, basis: &LieAlgebraBasis) -> DMatrix<f64> {
        &self.derivation + basis.adbar(&self.y2)
    }
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut e = DVector::zeros(n);
    e[i] = 1.0;
    e
}

fn pinv_checked(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    let pinv = a
        .clone()
        .pseudo_inverse(1e-12 * (1.0 + a.abs().max()))
        .map_err(|_| TsfError::Singular)?;
    let residual = commutator(a, &pinv).abs().max();
    if residual > 1e-9 {
        return Err(TsfError::NotNormalCommuting { residual });
    }
    let proj_ker = DMatrix::identity(n, n) - &pinv * a;
    Ok((pinv, proj_ker))
}

/// ∫₀¹ e^{−sA} ds = P_ker + (I − e^{−A})A^# for A commuting with A^#.
pub fn int_exp(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let (pinv, proj) = pinv_checked(a)?;
    Ok(proj + (DMatrix::identity(n, n) - expm(&(-a))) * pinv)
}

/// ∫₀¹ s e^{−sA} ds = ½P_ker + (I − (I + A)e^{−A})(A^#)².
pub fn int_s_exp(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let id = DMatrix::identity(n, n);
    let (pinv, proj) = pinv_checked(a)?;
    Ok(proj * 0.5 + (&id - (&id + a) * expm(&(-a))) * &pinv * &pinv)
}

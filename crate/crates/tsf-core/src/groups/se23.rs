//! SE(2,3): rotation with velocity and position columns, tangent
//! coordinates (δ, u, w) for rotation, velocity and position.

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

use super::so3;
use crate::error::Result;

pub type Vector9 = SVector<f64, 9>;
pub type Matrix9 = SMatrix<f64, 9, 9>;

/// A (R, v, r) triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Se23 {
    pub rot: Matrix3<f64>,
    pub vel: Vector3<f64>,
    pub pos: Vector3<f64>,
}

pub fn split(xi: &Vector9) -> [Vector3<f64>; 3] {
    [
        xi.fixed_rows::<3>(0).into(),
        xi.fixed_rows::<3>(3).into(),
        xi.fixed_rows::<3>(6).into(),
    ]
}

pub fn join(d: &Vector3<f64>, u: &Vector3<f64>, w: &Vector3<f64>) -> Vector9 {
    let mut x = Vector9::zeros();
    x.fixed_rows_mut::<3>(0).copy_from(d);
    x.fixed_rows_mut::<3>(3).copy_from(u);
    x.fixed_rows_mut::<3>(6).copy_from(w);
    x
}

pub fn set_block(m: &mut Matrix9, row: usize, col: usize, b: &Matrix3<f64>) {
    m.fixed_view_mut::<3, 3>(3 * row, 3 * col).copy_from(b);
}

pub fn block_lower(diag: &Matrix3<f64>, c1: &Matrix3<f64>, c2: &Matrix3<f64>) -> Matrix9 {
    let mut m = Matrix9::zeros();
    for k in 0..3 {
        set_block(&mut m, k, k, diag);
    }
    set_block(&mut m, 1, 0, c1);
    set_block(&mut m, 2, 0, c2);
    m
}

impl Se23 {
    pub fn identity() -> Self {
        Self { rot: Matrix3::identity(), vel: Vector3::zeros(), pos: Vector3::zeros() }
    }

    pub fn matrix(&self) -> SMatrix<f64, 5, 5> {
        let mut m = SMatrix::<f64, 5, 5>::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rot);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.vel);
        m.fixed_view_mut::<3, 1>(0, 4).copy_from(&self.pos);
        m
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            rot: so3::reorthonormalize(&(self.rot * rhs.rot)),
            vel: self.vel + self.rot * rhs.vel,
            pos: self.pos + self.rot * rhs.pos,
        }
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rot.transpose();
        Self { rot: rt, vel: -(rt * self.vel), pos: -(rt * self.pos) }
    }

    /// (e^{[δ]×}, J̄(−δ)u, J̄(−δ)w).
    pub fn exp(xi: &Vector9) -> Self {
        let [d, u, w] = split(xi);
        let j = so3::jbar(&-d);
        Self { rot: so3::exp(&d), vel: j * u, pos: j * w }
    }

    pub fn log(&self) -> Result<Vector9> {
        let d = so3::log(&self.rot)?;
        let wb = so3::wbar(&d);
        Ok(join(&d, &(wb * self.vel), &(wb * self.pos)))
    }
}

/// Algebra matrix with rotation block [δ]× and columns (u, w).
pub fn algebra_matrix(xi: &Vector9) -> SMatrix<f64, 5, 5> {
    let [d, u, w] = split(xi);
    let mut m = SMatrix::<f64, 5, 5>::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&so3::skew(&d));
    m.fixed_view_mut::<3, 1>(0, 3).copy_from(&u);
    m.fixed_view_mut::<3, 1>(0, 4).copy_from(&w);
    m
}

pub fn adbar(xi: &Vector9) -> Matrix9 {
    let [d, u, w] = split(xi);
    block_lower(&so3::skew(&d), &so3::skew(&u), &so3::skew(&w))
}

pub fn jbar(xi: &Vector9) -> Matrix9 {
    let [d, u, w] = split(xi);
    block_lower(&so3::jbar(&d), &so3::n_matrix(&-d, &-u), &so3::n_matrix(&-d, &-w))
}

pub fn wbar(xi: &Vector9) -> Matrix9 {
    let [d, u, w] = split(xi);
    let wb = so3::wbar(&d);
    block_lower(
        &wb,
        &(-wb * so3::n_matrix(&d, &u) * wb),
        &(-wb * so3::n_matrix(&d, &w) * wb),
    )
}

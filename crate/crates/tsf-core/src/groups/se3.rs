//! SE(3) in (rotation, translation) form with tangent coordinates (ω, v).

use nalgebra::{Matrix3, Matrix4, Matrix6, Vector3, Vector6};

use super::so3;
use crate::error::Result;

pub fn split(xi: &Vector6<f64>) -> (Vector3<f64>, Vector3<f64>) {
    (xi.fixed_rows::<3>(0).into(), xi.fixed_rows::<3>(3).into())
}

pub fn join(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector6<f64> {
    Vector6::new(a.x, a.y, a.z, b.x, b.y, b.z)
}

pub fn blocks(a: &Matrix3<f64>, b: &Matrix3<f64>, c: &Matrix3<f64>, d: &Matrix3<f64>) -> Matrix6<f64> {
    let mut m = Matrix6::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(a);
    m.fixed_view_mut::<3, 3>(0, 3).copy_from(b);
    m.fixed_view_mut::<3, 3>(3, 0).copy_from(c);
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(d);
    m
}

/// Algebra matrix [[ [ω]×, v ], [0, 0]].
pub fn algebra_matrix(xi: &Vector6<f64>) -> Matrix4<f64> {
    let (w, v) = split(xi);
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&so3::skew(&w));
    m.fixed_view_mut::<3, 1>(0, 3).copy_from(&v);
    m
}

pub fn matrix(rot: &Matrix3<f64>, trans: &Vector3<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(rot);
    m.fixed_view_mut::<3, 1>(0, 3).copy_from(trans);
    m
}

/// (e^{[ω]×}, J̄(−ω)v).
pub fn exp(xi: &Vector6<f64>) -> (Matrix3<f64>, Vector3<f64>) {
    let (w, v) = split(xi);
    (so3::exp(&w), so3::jbar(&-w) * v)
}

pub fn log(rot: &Matrix3<f64>, trans: &Vector3<f64>) -> Result<Vector6<f64>> {
    let w = so3::log(rot)?;
    Ok(join(&w, &(so3::wbar(&w) * trans)))
}

/// [[ [ω]×, 0 ], [ [v]×, [ω]× ]].
pub fn adbar(xi: &Vector6<f64>) -> Matrix6<f64> {
    let (w, v) = split(xi);
    let dw = so3::skew(&w);
    blocks(&dw, &Matrix3::zeros(), &so3::skew(&v), &dw)
}

/// ∫₀¹ e^{−s·adbar} ds = [[J̄(ω), 0], [N(−ω, −v), J̄(ω)]].
pub fn jbar(xi: &Vector6<f64>) -> Matrix6<f64> {
    let (w, v) = split(xi);
    let j = so3::jbar(&w);
    blocks(&j, &Matrix3::zeros(), &so3::n_matrix(&-w, &-v), &j)
}

/// (∫₀¹ e^{s·adbar} ds)⁻¹ = [[W, 0], [−W N(ω, v) W, W]].
pub fn wbar(xi: &Vector6<f64>) -> Matrix6<f64> {
    let (w, v) = split(xi);
    let wb = so3::wbar(&w);
    let lower = -wb * so3::n_matrix(&w, &v) * wb;
    blocks(&wb, &Matrix3::zeros(), &lower, &wb)
}

pub fn compose(
    a: (&Matrix3<f64>, &Vector3<f64>),
    b: (&Matrix3<f64>, &Vector3<f64>),
) -> (Matrix3<f64>, Vector3<f64>) {
    (so3::reorthonormalize(&(a.0 * b.0)), a.1 + a.0 * b.1)
}

pub fn inverse(rot: &Matrix3<f64>, trans: &Vector3<f64>) -> (Matrix3<f64>, Vector3<f64>) {
    let rt = rot.transpose();
    (rt, -(rt * trans))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_translation_exp() {
        let xi = Vector6::new(0.0, 0.0, 0.0, 1.0, -2.0, 0.5);
        let (r, t) = exp(&xi);
        assert_eq!(r, Matrix3::identity());
        assert!((t - Vector3::new(1.0, -2.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn wbar_inverts_jbar_of_negated_argument() {
        let xi = Vector6::new(0.4, -0.9, 1.2, 0.3, 0.8, -1.1);
        let prod = wbar(&xi) * jbar(&-xi);
        assert!((prod - Matrix6::identity()).abs().max() < 1e-13);
    }

    #[test]
    fn wbar_at_zero_rotation_has_half_skew_coupling() {
        let v = Vector3::new(0.2, -0.4, 0.9);
        let w = wbar(&join(&Vector3::zeros(), &v));
        let expected = blocks(
            &Matrix3::identity(),
            &Matrix3::zeros(),
            &(-so3::skew(&v) * 0.5),
            &Matrix3::identity(),
        );
        assert!((w - expected).abs().max() < 1e-15);
    }

    #[test]
    fn log_inverts_exp() {
        let xi = Vector6::new(-0.5, 0.2, 2.0, 3.0, 0.1, -0.7);
        let (r, t) = exp(&xi);
        assert!((log(&r, &t).unwrap() - xi).norm() < 1e-12);
    }
}

//! Unit quaternions stored as (v, s) with Shuster's multiplication
//! convention, so that R(q ⊗ q′) = R(q)R(q′).

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
#[allow(unused_imports)]
use num_traits::Float;

use super::so3::skew;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub v: Vector3<f64>,
    pub s: f64,
}

impl Quaternion {
    pub fn identity() -> Self {
        Self { v: Vector3::zeros(), s: 1.0 }
    }

    /// Builds a quaternion from (v, s) and scales it to unit norm.
    pub fn new(v: Vector3<f64>, s: f64) -> Self {
        Self { v, s }.normalized()
    }

    /// Components in (v₁, v₂, v₃, s) order.
    pub fn from_vec4(c: &Vector4<f64>) -> Self {
        Self::new(Vector3::new(c[0], c[1], c[2]), c[3])
    }

    pub fn to_vec4(&self) -> Vector4<f64> {
        Vector4::new(self.v.x, self.v.y, self.v.z, self.s)
    }

    pub fn norm(&self) -> f64 {
        (self.v.norm_squared() + self.s * self.s).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self { v: self.v / n, s: self.s / n }
    }

    pub fn conjugate(&self) -> Self {
        Self { v: -self.v, s: self.s }
    }

    /// q ⊗ q′ = (s v′ + s′ v − v × v′, s s′ − ⟨v, v′⟩), renormalised.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            v: rhs.v * self.s + self.v * rhs.s - self.v.cross(&rhs.v),
            s: self.s * rhs.s - self.v.dot(&rhs.v),
        }
        .normalized()
    }

    /// R(q) = I − 2s[v]× + 2[v]×².
    pub fn to_rotation(&self) -> Matrix3<f64> {
        let d = skew(&self.v);
        Matrix3::identity() - d * (2.0 * self.s) + d * d * 2.0
    }

    /// [q⊗] = sI₄ + M_s(v), the matrix of left multiplication by q.
    pub fn left_matrix(&self) -> Matrix4<f64> {
        Matrix4::identity() * self.s + algebra_matrix(&self.v)
    }

    /// e^{M_s(a)} applied to the identity: (sin‖a‖ â, cos‖a‖).
    pub fn exp(a: &Vector3<f64>) -> Self {
        let n = a.norm();
        let sinc = if n < 1e-8 { 1.0 - n * n / 6.0 } else { n.sin() / n };
        Self { v: a * sinc, s: n.cos() }
    }

    /// Inverse of [`Quaternion::exp`] with ‖a‖ ∈ [0, π).
    pub fn log(&self) -> Vector3<f64> {
        let vn = self.v.norm();
        let angle = vn.atan2(self.s);
        if vn < 1e-12 {
            // s > 0 near the identity; s < 0 only at the cut locus.
            return self.v * (1.0 / self.s.max(f64::MIN_POSITIVE));
        }
        self.v * (angle / vn)
    }
}

/// M_s(v) = [[−[v]×, v], [−vᵀ, 0]].
pub fn algebra_matrix(v: &Vector3<f64>) -> Matrix4<f64> {
    let d = skew(v);
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&(-d));
    m.fixed_view_mut::<3, 1>(0, 3).copy_from(v);
    m.fixed_view_mut::<1, 3>(3, 0).copy_from(&(-v.transpose()));
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::so3;
    use core::f64::consts::FRAC_PI_2;

    fn sample(seed: u32) -> Quaternion {
        let x = seed as f64;
        Quaternion::new(
            Vector3::new((1.3 * x).sin(), (2.1 * x + 0.4).cos(), (0.7 * x - 1.0).sin()),
            (3.3 * x).cos(),
        )
    }

    #[test]
    fn identity_is_neutral_and_imaginary_unit_squares_to_minus_one() {
        let q = sample(3);
        assert!((q.mul(&Quaternion::identity()).to_vec4() - q.to_vec4()).norm() < 1e-15);
        let i = Quaternion::new(Vector3::x(), 0.0);
        let sq = i.mul(&i);
        assert!((sq.to_vec4() - Vector4::new(0.0, 0.0, 0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn product_matches_left_matrix_and_is_a_homomorphism() {
        for k in 0..50 {
            let (a, b) = (sample(k), sample(k + 100));
            let via_matrix = a.left_matrix() * b.to_vec4();
            assert!((a.mul(&b).to_vec4() - via_matrix).norm() < 1e-14);
            let lhs = a.mul(&b).to_rotation();
            let rhs = a.to_rotation() * b.to_rotation();
            assert!((lhs - rhs).abs().max() < 1e-12);
        }
    }

    #[test]
    fn rotation_is_orthonormal_and_even() {
        for k in 0..100 {
            let q = sample(k);
            let r = q.to_rotation();
            assert!((r * r.transpose() - Matrix3::identity()).abs().max() < 1e-12);
            assert!((r.determinant() - 1.0).abs() < 1e-12);
            let neg = Quaternion { v: -q.v, s: -q.s };
            assert!((neg.to_rotation() - r).abs().max() < 1e-15);
        }
    }

    #[test]
    fn quarter_turn_about_x_matches_rodrigues() {
        let th = FRAC_PI_2;
        let q = Quaternion::new(Vector3::new((th / 2.0).sin(), 0.0, 0.0), (th / 2.0).cos());
        // R(q) = e^{−θ[x]×} under this convention.
        let rod = so3::exp(&Vector3::new(-th, 0.0, 0.0));
        assert!((q.to_rotation() - rod).abs().max() < 1e-15);
    }

    #[test]
    fn exp_log_round_trip() {
        for a in [Vector3::zeros(), Vector3::new(0.3, -0.2, 1.0), Vector3::new(0.0, 3.0, 0.0)] {
            assert!((Quaternion::exp(&a).log() - a).norm() < 1e-13);
        }
    }
}

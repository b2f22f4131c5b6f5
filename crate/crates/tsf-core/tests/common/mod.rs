//! Independent reference computations shared by the integration tests and
//! the acceptance suite: Gauss–Legendre quadrature of matrix exponentials
//! built from the algebra basis, and random tangent samples.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, Matrix3, Rotation3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsf_core::groups::{GroupElement, GroupKind, Se23};
use tsf_core::quadrature::GaussLegendre;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction; the norm is log-uniform on (lo, 1) for half the
/// draws and uniform on (1, hi) otherwise, or log-uniform on (lo, hi)
/// when hi ≤ 1.
pub fn random_vector3(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Vector3<f64> {
    let dir = loop {
        let v = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n: f64 = v.norm();
        if n > 1e-3 && n <= 1.0 {
            break v / n;
        }
    };
    let norm = if hi <= 1.0 {
        rng.random_range(lo.ln()..hi.ln()).exp()
    } else if rng.random_bool(0.5) {
        (rng.random_range(lo.ln()..0.0f64)).exp()
    } else {
        rng.random_range(1.0..hi)
    };
    dir * norm
}

/// Tangent vector whose rotational block is drawn by [`random_vector3`]
/// and whose remaining coordinates are uniform on (−2, 2).
pub fn random_tangent(rng: &mut ChaCha8Rng, kind: GroupKind, lo: f64, hi: f64) -> DVector<f64> {
    let n = kind.dim();
    let rot = random_vector3(rng, lo, hi);
    DVector::from_fn(n, |i, _| if i < 3 { rot[i] } else { rng.random_range(-2.0..2.0) })
}

/// ∫₀¹ e^{s·sign·A} ds with a 64-node rule and nalgebra's exponential.
fn integral_of_exp(a: &DMatrix<f64>, sign: f64) -> DMatrix<f64> {
    let rule = GaussLegendre::new(64);
    let n = a.nrows();
    rule.on_interval(0.0, 1.0)
        .fold(DMatrix::zeros(n, n), |acc, (s, w)| acc + (a * (sign * s)).exp() * w)
}

/// adbar from commutators of the basis matrices, independent of the
/// per-group closed forms.
pub fn adbar_from_basis(kind: GroupKind, xi: &DVector<f64>) -> DMatrix<f64> {
    kind.basis().adbar(xi)
}

pub fn jbar_oracle(kind: GroupKind, xi: &DVector<f64>) -> DMatrix<f64> {
    integral_of_exp(&adbar_from_basis(kind, xi), -1.0)
}

pub fn wbar_oracle(kind: GroupKind, xi: &DVector<f64>) -> DMatrix<f64> {
    integral_of_exp(&adbar_from_basis(kind, xi), 1.0).try_inverse().expect("invertible below the cut")
}

fn rot(v: &Vector3<f64>) -> Matrix3<f64> {
    *Rotation3::new(*v).matrix()
}

pub fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// N(δ, u) = ∫₀¹ e^{t[δ]×}[∫₀ᵗ e^{−s[δ]×}u ds]× dt by nested 64-node rules.
pub fn n_oracle(delta: &Vector3<f64>, u: &Vector3<f64>) -> Matrix3<f64> {
    let rule = GaussLegendre::new(64);
    let mut out = Matrix3::zeros();
    for (t, wt) in rule.on_interval(0.0, 1.0) {
        let inner = rule
            .on_interval(0.0, t)
            .fold(Vector3::zeros(), |acc, (s, ws)| acc + rot(&(-delta * s)) * u * ws);
        out += rot(&(delta * t)) * skew(&inner) * wt;
    }
    out
}

/// Exact exponential of a group's algebra element, via nalgebra.
pub fn exp_oracle(kind: GroupKind, xi: &DVector<f64>) -> DMatrix<f64> {
    kind.matrize(xi).expect("dimension").exp()
}

fn se23_parts(x: &DMatrix<f64>) -> (Matrix3<f64>, Vector3<f64>, Vector3<f64>) {
    let r = Matrix3::from_fn(|i, j| x[(i, j)]);
    (r, Vector3::from_fn(|i, _| x[(i, 3)]), Vector3::from_fn(|i, _| x[(i, 4)]))
}

/// Ṙ = ΩR, v̇ = Ωv + a + Rg, ṙ = Ωr + v, written in the 5×5 embedding.
pub fn inertial_field(rate: Vector3<f64>, accel: Vector3<f64>, gravity: Vector3<f64>) -> impl Fn(&DMatrix<f64>) -> DMatrix<f64> {
    move |x| {
        let (r, v, p) = se23_parts(x);
        let om = skew(&rate);
        let mut out = DMatrix::zeros(5, 5);
        out.view_mut((0, 0), (3, 3)).copy_from(&(om * r));
        out.view_mut((0, 3), (3, 1)).copy_from(&(om * v + accel + r * gravity));
        out.view_mut((0, 4), (3, 1)).copy_from(&(om * p + v));
        out
    }
}

/// exp of a unit-scale Gaussian tangent draw.
pub fn random_se23(r: &mut ChaCha8Rng) -> DMatrix<f64> {
    let xi = nalgebra::SVector::<f64, 9>::from_fn(|_, _| r.sample(rand_distr::StandardNormal));
    GroupElement::Se23(Se23::exp(&xi)).matrix()
}

/// (R, β) as diag(R, [[I, β], [0, 1]]), so matrix products follow the
/// direct-product law.
pub fn direct_product_embedding(rot: Matrix3<f64>, b: Vector3<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::identity(7, 7);
    m.view_mut((0, 0), (3, 3)).copy_from(&rot);
    m.view_mut((3, 6), (3, 1)).copy_from(&b);
    m
}

/// Ṙ = [ω − β]×R, β̇ = 0 in the direct-product embedding.
pub fn direct_product_gyro_field(rate: Vector3<f64>) -> impl Fn(&DMatrix<f64>) -> DMatrix<f64> {
    move |x| {
        let rot = Matrix3::from_fn(|i, j| x[(i, j)]);
        let b = Vector3::from_fn(|i, _| x[(i + 3, 6)]);
        let mut out = DMatrix::zeros(7, 7);
        out.view_mut((0, 0), (3, 3)).copy_from(&(skew(&(rate - b)) * rot));
        out
    }
}

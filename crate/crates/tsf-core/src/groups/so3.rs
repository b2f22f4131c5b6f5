//! so(3) and SO(3) closed forms: hat/vee, Rodrigues exponential, principal
//! logarithm, the exponential-map Jacobians, the coupling matrix N(δ, u) of
//! the SE(3)-type Jacobians, and closed-form BCH.

use core::f64::consts::{FRAC_PI_2, PI};
use nalgebra::{Matrix3, Vector3};
#[allow(unused_imports)]
use num_traits::Float;

use super::coeffs::{half_cot_coeff, Coeffs};
use crate::error::{Result, TsfError};

/// Rotation angles closer than this to π have no reliable principal log.
pub const CUT_LOCUS_MARGIN: f64 = 1e-9;

/// Below this rotation norm N(δ, u) is evaluated from its Taylor series.
pub const N_SERIES_SWITCH: f64 = 1e-4;

/// Cross-product matrix [v]×.
pub fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`skew`] applied to the skew part of `m`.
pub fn vee(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// Rodrigues formula for e^{[ω]×}.
pub fn exp(omega: &Vector3<f64>) -> Matrix3<f64> {
    let c = Coeffs::new(omega.norm_squared());
    let d = skew(omega);
    Matrix3::identity() + d * c.sinc + d * d * c.cosc
}

/// Principal logarithm of a rotation matrix.
pub fn log(r: &Matrix3<f64>) -> Result<Vector3<f64>> {
    let w = vee(r);
    let cos = ((r.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let sin = w.norm();
    let angle = sin.atan2(cos);
    if angle > PI - CUT_LOCUS_MARGIN {
        return Err(TsfError::CutLocus { angle });
    }
    if cos > -0.9 {
        let scale = if sin < 1e-7 {
            1.0 + angle * angle / 6.0
        } else {
            angle / sin
        };
        return Ok(w * scale);
    }
    // Near π the skew part is small; read the axis off the symmetric part.
    let sym = (r + r.transpose()) * 0.5 - Matrix3::identity() * cos;
    let mut col = 0;
    for k in 1..3 {
        if sym[(k, k)] > sym[(col, col)] {
            col = k;
        }
    }
    let mut axis: Vector3<f64> = sym.column(col).into();
    axis /= axis.norm();
    if axis.dot(&w) < 0.0 {
        axis = -axis;
    }
    Ok(axis * angle)
}

/// J̄(δ) = ∫₀¹ e^{−s[δ]×} ds in the explicit form
/// δδᵀ/‖δ‖² − (I − e^{−[δ]×})[δ]×/‖δ‖².
pub fn jbar(delta: &Vector3<f64>) -> Matrix3<f64> {
    let q = delta.norm_squared();
    let c = Coeffs::new(q);
    let d = skew(delta);
    if q.sqrt() < N_SERIES_SWITCH {
        return Matrix3::identity() * c.sinc + delta * delta.transpose() * c.a1 - d * c.cosc;
    }
    let one_minus_exp = d * c.sinc - d * d * c.cosc;
    (delta * delta.transpose() - one_minus_exp * d) / q
}

/// Derivative of [`jbar`] at δ along the direction `dir`.
pub fn jbar_directional(delta: &Vector3<f64>, dir: &Vector3<f64>) -> Matrix3<f64> {
    let q = delta.norm_squared();
    let c = Coeffs::new(q);
    let dc = c.derivs();
    let dq = 2.0 * delta.dot(dir);
    Matrix3::identity() * (dc.sinc * dq)
        + delta * delta.transpose() * (dc.a1 * dq)
        + (dir * delta.transpose() + delta * dir.transpose()) * c.a1
        - skew(delta) * (dc.cosc * dq)
        - skew(dir) * c.cosc
}

/// W̄(δ) = (∫₀¹ e^{s[δ]×} ds)⁻¹ = P + (‖δ‖/2)cot(‖δ‖/2)(I − P) − ½[δ]×.
pub fn wbar(delta: &Vector3<f64>) -> Matrix3<f64> {
    let q = delta.norm_squared();
    let k = half_cot_coeff(q);
    Matrix3::identity() * (1.0 - k * q) + delta * delta.transpose() * k - skew(delta) * 0.5
}

/// Derivative of [`wbar`] along `dir`, from d(A⁻¹) = −A⁻¹ dA A⁻¹.
pub fn wbar_directional(delta: &Vector3<f64>, dir: &Vector3<f64>) -> Matrix3<f64> {
    let w = wbar(delta);
    -w * jbar_directional(&-delta, &-dir) * w
}

/// Derivative of e^{[δ]×} along `dir`: e^{[δ]×}[J̄(δ)·dir]×.
pub fn exp_directional(delta: &Vector3<f64>, dir: &Vector3<f64>) -> Matrix3<f64> {
    exp(delta) * skew(&(jbar(delta) * dir))
}

/// N(δ, u) = ∫₀¹ e^{t[δ]×}[∫₀ᵗ e^{−s[δ]×}u ds]× dt via the explicit formula
/// ‖δ‖⁻²[[[δ]×u]×, J̄(−δ)] − ⟨δ,u⟩‖δ‖⁻⁴(I − (I − [δ]×)e^{[δ]×})[δ]×,
/// with a degree-4 Taylor series near δ = 0.
pub fn n_matrix(delta: &Vector3<f64>, u: &Vector3<f64>) -> Matrix3<f64> {
    let q = delta.norm_squared();
    if q.sqrt() < N_SERIES_SWITCH {
        return n_matrix_series(delta, u);
    }
    let c = Coeffs::new(q);
    let d = skew(delta);
    let cu = skew(&(d * u));
    let jm = jbar(&-delta);
    // I − (I − D)e^{D} = (cos θ − sin θ/θ) D + (sin θ/θ − (1 − cos θ)/θ²) D²
    let bracket = d * (q * c.f1) + d * d * (c.sinc - c.cosc);
    (cu * jm - jm * cu) / q - bracket * d * (delta.dot(u) / (q * q))
}

/// Σ_{k+m≤4} (−1)^m D^k [D^m u]× / (k!(m+1)!(k+m+2)), D = [δ]×.
fn n_matrix_series(delta: &Vector3<f64>, u: &Vector3<f64>) -> Matrix3<f64> {
    const ORDER: usize = 4;
    let d = skew(delta);
    let mut dm_u = [Vector3::zeros(); ORDER + 1];
    dm_u[0] = *u;
    for m in 1..=ORDER {
        dm_u[m] = d * dm_u[m - 1];
    }
    let mut dk = [Matrix3::identity(); ORDER + 1];
    for k in 1..=ORDER {
        dk[k] = d * dk[k - 1];
    }
    let fact = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0];
    let mut out = Matrix3::zeros();
    for k in 0..=ORDER {
        for m in 0..=ORDER - k {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let w = sign / (fact[k] * fact[m + 1] * (k + m + 2) as f64);
            out += dk[k] * skew(&dm_u[m]) * w;
        }
    }
    out
}

/// N expanded into smooth coefficient functions of ‖δ‖²:
/// N = b[u]× + a₁(uδᵀ + δuᵀ) + ⟨δ,u⟩(f₁I − f₂δδᵀ + f₃[δ]×).
pub fn n_matrix_expanded(delta: &Vector3<f64>, u: &Vector3<f64>) -> Matrix3<f64> {
    let c = Coeffs::new(delta.norm_squared());
    let s = delta.dot(u);
    skew(u) * c.cosc
        + (u * delta.transpose() + delta * u.transpose()) * c.a1
        + (Matrix3::identity() * c.f1 - delta * delta.transpose() * c.f2 + skew(delta) * c.f3) * s
}

/// Directional derivative of N at (δ, u) along (dδ, du), obtained by
/// differentiating [`n_matrix_expanded`].
pub fn n_matrix_directional(
    delta: &Vector3<f64>,
    u: &Vector3<f64>,
    d_delta: &Vector3<f64>,
    d_u: &Vector3<f64>,
) -> Matrix3<f64> {
    let c = Coeffs::new(delta.norm_squared());
    let dc = c.derivs();
    let dq = 2.0 * delta.dot(d_delta);
    let s = delta.dot(u);
    let ds = d_delta.dot(u) + delta.dot(d_u);
    let ddt = delta * delta.transpose();
    let d_ddt = d_delta * delta.transpose() + delta * d_delta.transpose();
    let sym = u * delta.transpose() + delta * u.transpose();
    let d_sym = d_u * delta.transpose()
        + u * d_delta.transpose()
        + d_delta * u.transpose()
        + delta * d_u.transpose();
    let tail = Matrix3::identity() * c.f1 - ddt * c.f2 + skew(delta) * c.f3;
    let d_tail = Matrix3::identity() * (dc.f1 * dq) - ddt * (dc.f2 * dq) - d_ddt * c.f2
        + skew(delta) * (dc.f3 * dq)
        + skew(d_delta) * c.f3;
    skew(u) * (dc.cosc * dq)
        + skew(d_u) * c.cosc
        + sym * (dc.a1 * dq)
        + d_sym * c.a1
        + tail * ds
        + d_tail * s
}

/// BCH on the quaternion algebra s (brackets [M_s a, M_s b] = −2M_s(a×b)):
/// the c with e^{M_s(c)} = e^{M_s(a)}e^{M_s(b)}, from the closed form
/// cos‖c‖ = cos‖a‖cos‖b‖ − sin‖a‖sin‖b‖⟨â,b̂⟩ and
/// sin‖c‖ĉ = sin‖a‖cos‖b‖â + sin‖b‖cos‖a‖b̂ − sin‖a‖sin‖b‖ â×b̂.
pub fn bch_s(a: &Vector3<f64>, b: &Vector3<f64>) -> Result<Vector3<f64>> {
    let c = bch_s_unchecked(a, b);
    let angle = c.norm();
    if angle > PI - CUT_LOCUS_MARGIN {
        return Err(TsfError::CutLocus { angle });
    }
    Ok(c)
}

/// [`bch_s`] without the cut-locus check; the result has norm in [0, π].
pub fn bch_s_unchecked(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    let ca = Coeffs::new(a.norm_squared());
    let cb = Coeffs::new(b.norm_squared());
    let (cos_a, cos_b) = (a.norm().cos(), b.norm().cos());
    let cos_c = cos_a * cos_b - ca.sinc * cb.sinc * a.dot(b);
    let sin_dir = a * (ca.sinc * cos_b) + b * (cb.sinc * cos_a) - a.cross(b) * (ca.sinc * cb.sinc);
    let sin_c = sin_dir.norm();
    let angle = sin_c.atan2(cos_c);
    let scale = if sin_c < 1e-7 {
        1.0 + angle * angle / 6.0
    } else {
        angle / sin_c
    };
    sin_dir * scale
}

/// BCH on so(3): the principal c with e^{[c]×} = e^{[a]×}e^{[b]×}. Uses the
/// algebra isomorphism a ↦ M_s(−a/2) onto s and [`bch_s`].
pub fn bch(a: &Vector3<f64>, b: &Vector3<f64>) -> Result<Vector3<f64>> {
    let mut half = bch_s_unchecked(&(-a * 0.5), &(-b * 0.5));
    let n = half.norm();
    if n > FRAC_PI_2 {
        // −q represents the same rotation with the complementary half-angle.
        half -= half * (PI / n);
    }
    let c = half * -2.0;
    let angle = c.norm();
    if angle > PI - CUT_LOCUS_MARGIN {
        return Err(TsfError::CutLocus { angle });
    }
    Ok(c)
}

/// Closed-form norm ‖c‖ of the s-algebra BCH, the arccos expression.
pub fn bch_s_norm(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    let cross = if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        na.sin() * nb.sin() * a.dot(b) / (na * nb)
    };
    (na.cos() * nb.cos() - cross).clamp(-1.0, 1.0).acos()
}

/// One Gram–Schmidt pass when RRᵀ drifts from I by more than 1e-9.
pub fn reorthonormalize(r: &Matrix3<f64>) -> Matrix3<f64> {
    let resid = (r * r.transpose() - Matrix3::identity()).abs().max();
    if resid <= 1e-9 {
        return *r;
    }
    let c0 = r.column(0).normalize();
    let c1 = (r.column(1) - c0 * c0.dot(&r.column(1))).normalize();
    let c2 = c0.cross(&c1);
    Matrix3::from_columns(&[c0, c1, c2])
}

//! Noise-free propagation of the group mean in closed form.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use crate::error::{Result, TsfError};
use crate::groups::{so3, AttitudeBias, GroupElement, Se23};
use crate::lie::{int_exp, int_s_exp};

#[derive(Debug, Clone, PartialEq)]
pub enum MapDynamics {
    /// A constant right-invariant field: μ(t) = e^{tM(ξ)}μ₀. On S³ a body
    /// rate ω corresponds to ξ = ω/2.
    Constant(DVector<f64>),
    /// SE(2,3) with rate ω, specific force a and inertial gravity g.
    Inertial { rate: Vector3<f64>, accel: Vector3<f64>, gravity: Vector3<f64> },
    /// Attitude and bias under a measured rate, bias held constant.
    GyroBias { rate: Vector3<f64> },
}

pub fn map_propagate(mu: &GroupElement, dynamics: &MapDynamics, t: f64) -> Result<GroupElement> {
    match (dynamics, mu) {
        (MapDynamics::Constant(xi), _) => mu.kind().exp(&(xi * t))?.compose(mu),
        (MapDynamics::Inertial { rate, accel, gravity }, GroupElement::Se23(g)) => {
            Ok(GroupElement::Se23(inertial_flow(g, rate, accel, gravity, t)?))
        }
        (MapDynamics::GyroBias { rate }, GroupElement::AttitudeBias(law, g)) => {
            let turn = so3::exp(&((rate - g.bias) * t));
            // Under either law the bias is a fixed point; under the semidirect
            // law this is e^{tM(ω − β, −[ω]×β)} acting on (R, β).
            let out = AttitudeBias { rot: so3::reorthonormalize(&(turn * g.rot)), bias: g.bias };
            Ok(GroupElement::AttitudeBias(*law, out))
        }
        _ => Err(TsfError::TagMismatch),
    }
}

fn to_dm(m: &Matrix3<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(3, 3, m.as_slice())
}

fn to_m3(m: &DMatrix<f64>) -> Matrix3<f64> {
    Matrix3::from_column_slice(m.as_slice())
}

/// R(t) = e^{tΩ}R₀,
/// v(t) = e^{tΩ}(v₀ + tR₀g) + t∫₀¹e^{stΩ}ds·a,
/// r(t) = e^{tΩ}(r₀ + tv₀ + ½t²R₀g) + t²∫₀¹s e^{stΩ}ds·a.
fn inertial_flow(
    g: &Se23,
    rate: &Vector3<f64>,
    accel: &Vector3<f64>,
    gravity: &Vector3<f64>,
    t: f64,
) -> Result<Se23> {
    let turn = so3::exp(&(rate * t));
    let neg_gen = to_dm(&so3::skew(&(rate * -t)));
    let phi1 = to_m3(&int_exp(&neg_gen)?);
    let phi2 = to_m3(&int_s_exp(&neg_gen)?);
    let rg = g.rot * gravity;
    Ok(Se23 {
        rot: so3::reorthonormalize(&(turn * g.rot)),
        vel: turn * (g.vel + rg * t) + phi1 * accel * t,
        pos: turn * (g.pos + g.vel * t + rg * (0.5 * t * t)) + phi2 * accel * (t * t),
    })
}

//! Circular-orbit geometry, the tilted-dipole field and the true attitude.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use tsf_core::groups::{so3, Quaternion};

pub const ORBIT_PERIOD_S: f64 = 5550.0;
pub const INCLINATION_DEG: f64 = 35.0;
pub const DIPOLE_TILT_DEG: f64 = 168.6;
pub const DIPOLE_RATE_DEG_S: f64 = 4.178e-3;
/// Dipole strength at the orbit radius, μT.
pub const DIPOLE_SCALE_UT: f64 = 25.54;

/// True attitude quaternion at t = 0 in (v, s) order.
pub const INITIAL_QUATERNION: [f64; 4] = [-0.6744, -0.2126, -0.2126, 0.6744];

pub fn orbit_rate() -> f64 {
    2.0 * PI / ORBIT_PERIOD_S
}

/// Body-frame angular velocity of the nadir-pointing spacecraft.
pub fn body_rate() -> Vector3<f64> {
    Vector3::new(0.0, -orbit_rate(), 0.0)
}

pub fn initial_attitude() -> Quaternion {
    let [a, b, c, s] = INITIAL_QUATERNION;
    Quaternion::new(Vector3::new(a, b, c), s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitState {
    pub r_unit: Vector3<f64>,
    pub attitude: Quaternion,
    pub body_rate: Vector3<f64>,
}

/// Position direction, true attitude q(t) = e^{tM_s(ω)/2}q(0) and body rate.
pub fn orbit_state(t: f64) -> OrbitState {
    let incl = INCLINATION_DEG.to_radians();
    let phase = orbit_rate() * t;
    let r_unit = Vector3::new(incl.cos() * phase.sin(), -phase.cos(), incl.sin() * phase.sin());
    let w = body_rate();
    let attitude = Quaternion::exp(&(w * (0.5 * t))).mul(&initial_attitude());
    OrbitState { r_unit, attitude, body_rate: w }
}

/// Inertial-to-body rotation at `t`, as R(q(t)) = e^{−t[ω]×}R(q(0)).
pub fn true_rotation(t: f64) -> Matrix3<f64> {
    so3::reorthonormalize(&(so3::exp(&(body_rate() * -t)) * initial_attitude().to_rotation()))
}

/// Earth dipole direction m(t).
pub fn dipole_axis(t: f64) -> Vector3<f64> {
    let tilt = DIPOLE_TILT_DEG.to_radians();
    let phase = DIPOLE_RATE_DEG_S.to_radians() * t;
    Vector3::new(tilt.sin() * phase.sin(), tilt.sin() * phase.cos(), tilt.cos())
}

/// Inertial magnetic field along the orbit, μT.
pub fn dipole_field(t: f64) -> Vector3<f64> {
    let r = orbit_state(t).r_unit;
    let m = dipole_axis(t);
    (r * (3.0 * m.dot(&r)) - m) * DIPOLE_SCALE_UT
}

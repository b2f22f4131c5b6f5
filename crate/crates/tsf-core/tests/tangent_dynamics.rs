mod common;

use common::{
    direct_product_embedding, direct_product_gyro_field, inertial_field, random_se23, random_vector3, rng, skew,
};
use nalgebra::{DMatrix, DVector, Matrix3, SMatrix, SVector, Vector3, Vector6};
use rand::Rng;
use rand_distr::StandardNormal;
use tsf_core::fpe::jackknife_moments;
use tsf_core::groups::{so3, AttitudeBias, BiasLaw, GroupElement, GroupKind, Quaternion, Se23};
use tsf_core::lie::{group_affine_defect, CharacterizedField};
use tsf_core::propagation::{
    ctut_propagate, map_propagate, GyroBiasDp, GyroBiasSe3, LinearModel, MapDynamics, Moments, Se23Model,
    TangentSde,
};

type Matrix9 = SMatrix<f64, 9, 9>;
type Vector9 = SVector<f64, 9>;

#[test]
fn inertial_field_with_gravity_is_group_affine() {
    let mut r = rng(21);
    let f = inertial_field(Vector3::new(0.1, -0.3, 0.2), Vector3::new(0.5, 0.0, -1.0), Vector3::new(0.0, 0.0, -9.81));
    for _ in 0..200 {
        let d = group_affine_defect(&f, &random_se23(&mut r), &random_se23(&mut r));
        assert!(d <= 1e-10, "{d:e}");
    }
}

#[test]
fn direct_product_gyro_field_is_not_group_affine() {
    let rate = Vector3::new(0.0, -1.1e-3, 0.2);
    let embed = direct_product_embedding;
    let f = direct_product_gyro_field(rate);
    let mut r = rng(22);
    for _ in 0..100 {
        let g1 = embed(so3::exp(&random_vector3(&mut r, 0.1, 3.0)), random_vector3(&mut r, 0.1, 2.0));
        let g2 = embed(so3::exp(&random_vector3(&mut r, 0.1, 3.0)), random_vector3(&mut r, 0.1, 2.0));
        assert!(group_affine_defect(&f, &g1, &g2) > 1e-3);
    }
}

#[test]
fn se23_drift_matrix_is_the_derivation_of_the_field() {
    let rate = Vector3::new(0.1, -0.3, 0.2);
    let accel = Vector3::new(0.5, 0.0, -1.0);
    // The error g·μ⁻¹ of f(X) = AX + XB evolves by ė = [A, e].
    let mut a = DMatrix::zeros(5, 5);
    a.view_mut((0, 0), (3, 3)).copy_from(&skew(&rate));
    a.view_mut((0, 3), (3, 1)).copy_from(&accel);
    a[(3, 4)] = -1.0;
    let basis = GroupKind::Se23.basis();
    let d = DMatrix::from_fn(9, 9, |_, _| 0.0);
    let d = (0..9).fold(d, |mut acc, i| {
        let e = basis.element(i);
        let col = basis.vectorize(&(&a * e - e * &a)).unwrap();
        acc.set_column(i, &col);
        acc
    });
    let field = CharacterizedField::new(&basis, d, DVector::zeros(9), DVector::zeros(9)).unwrap();
    let gen = field.generator(&basis);
    let model = Se23Model::new(rate, accel, Matrix3::identity(), Matrix3::identity());
    let f = model.drift_matrix();
    for i in 0..9 {
        for j in 0..9 {
            assert!((gen[(i, j)] - f[(i, j)]).abs() <= 1e-12);
        }
    }
}

fn expm9(m: &Matrix9) -> Matrix9 {
    let d = DMatrix::from_column_slice(9, 9, m.as_slice()).exp();
    Matrix9::from_column_slice(d.as_slice())
}

#[test]
fn pointwise_inertial_flow_preserves_concentrated_gaussians() {
    let rate = Vector3::new(0.05, -0.1, 0.08);
    let accel = Vector3::new(0.3, 0.1, -0.2);
    let gravity = Vector3::new(0.0, 0.0, -9.81);
    let dynamics = MapDynamics::Inertial { rate, accel, gravity };
    let mu0 = GroupElement::Se23(Se23::exp(&Vector9::from_fn(|i, _| 0.1 * (i as f64 - 4.0))));
    let sd = [0.05, 0.05, 0.05, 0.2, 0.2, 0.2, 1.0, 1.0, 1.0];
    let sigma0 = Matrix9::from_fn(|i, j| if i == j { sd[i] * sd[i] } else { 0.0 });
    let f = Se23Model::new(rate, accel, Matrix3::identity(), Matrix3::identity()).drift_matrix();
    let mut r = rng(23);
    let n = 10_000;
    let xi0: Vec<Vector9> = (0..n)
        .map(|_| Vector9::from_fn(|i, _| sd[i] * r.sample::<f64, _>(StandardNormal)))
        .collect();
    for t in [1.0, 10.0] {
        let mu_t = map_propagate(&mu0, &dynamics, t).unwrap();
        let mu_t_inv = mu_t.inverse();
        let samples: Vec<Vector9> = xi0
            .iter()
            .map(|x| {
                let g = GroupKind::Se23.exp(&DVector::from_column_slice(x.as_slice())).unwrap().compose(&mu0).unwrap();
                let gt = map_propagate(&g, &dynamics, t).unwrap();
                Vector9::from_column_slice(gt.compose(&mu_t_inv).unwrap().log().unwrap().as_slice())
            })
            .collect();
        let report = jackknife_moments(&samples);
        let phi = expm9(&(f * t));
        let predicted = phi * sigma0 * phi.transpose();
        for i in 0..9 {
            assert!(report.moments.mean[i].abs() < 4.0 * report.mean_se[i], "t={t} mean[{i}]");
            for j in 0..9 {
                let z = (report.moments.cov[(i, j)] - predicted[(i, j)]) / report.cov_se[(i, j)];
                assert!(z.abs() < 4.0, "t={t} cov[{i},{j}] z={z}");
            }
        }
    }
}

#[test]
fn half_turn_on_the_quaternion_group_negates() {
    let q = Quaternion::new(Vector3::new(0.3, -0.1, 0.5), 0.8).normalized();
    let turn = MapDynamics::Constant(DVector::from_vec(vec![0.0, 0.0, std::f64::consts::PI]));
    let out = map_propagate(&GroupElement::S3(q), &turn, 1.0).unwrap();
    let GroupElement::S3(p) = out else { panic!() };
    assert!((p.to_vec4() + q.to_vec4()).norm() < 1e-15);
}

#[test]
fn non_rotating_inertial_flow_is_ballistic() {
    let r0 = so3::exp(&Vector3::new(0.2, -0.4, 0.1));
    let v0 = Vector3::new(1.0, 2.0, 3.0);
    let p0 = Vector3::new(-1.0, 0.0, 4.0);
    let accel = Vector3::new(0.1, -0.2, 0.3);
    let gravity = Vector3::new(0.0, 0.0, -9.81);
    let mu = GroupElement::Se23(Se23 { rot: r0, vel: v0, pos: p0 });
    let dynamics = MapDynamics::Inertial { rate: Vector3::zeros(), accel, gravity };
    let t = 2.5;
    let GroupElement::Se23(g) = map_propagate(&mu, &dynamics, t).unwrap() else { panic!() };
    let acc = accel + r0 * gravity;
    assert!((g.vel - (v0 + acc * t)).norm() < 1e-12);
    assert!((g.pos - (p0 + v0 * t + acc * (0.5 * t * t))).norm() < 1e-12);
    assert!((g.rot - r0).abs().max() < 1e-15);
}

/// ξ̇ from a five-point stencil on log(g(t)μ(t)⁻¹) with both states driven
/// by the noise-free gyro dynamics, each with its own constant bias.
fn error_rate(law: BiasLaw, rate: Vector3<f64>, mu: AttitudeBias, xi: &Vector6<f64>) -> Vector6<f64> {
    let g = AttitudeBias::exp(xi, law).compose(&mu, law);
    let dynamics = MapDynamics::GyroBias { rate };
    let at = |s: f64| {
        let gs = map_propagate(&GroupElement::AttitudeBias(law, g), &dynamics, s).unwrap();
        let ms = map_propagate(&GroupElement::AttitudeBias(law, mu), &dynamics, s).unwrap();
        let l = gs.compose(&ms.inverse()).unwrap().log().unwrap();
        Vector6::from_column_slice(l.as_slice())
    };
    let h = 1e-3;
    (at(-2.0 * h) - at(-h) * 8.0 + at(h) * 8.0 - at(2.0 * h)) / (12.0 * h)
}

#[test]
fn gyro_bias_drifts_match_differentiated_error_flow() {
    let mut r = rng(24);
    for _ in 0..50 {
        let rate = random_vector3(&mut r, 1e-2, 1.0);
        let mu = AttitudeBias {
            rot: so3::exp(&random_vector3(&mut r, 0.1, 3.0)),
            bias: random_vector3(&mut r, 1e-3, 0.5),
        };
        let d = random_vector3(&mut r, 1e-4, 1.5);
        let u = random_vector3(&mut r, 1e-4, 0.5);
        let xi = Vector6::new(d.x, d.y, d.z, u.x, u.y, u.z);
        let q = Matrix3::identity();
        let se3 = GyroBiasSe3::new(rate, mu.bias, q, q);
        let fd = error_rate(BiasLaw::Semidirect, rate, mu, &xi);
        assert!((se3.drift(&xi) - fd).norm() < 1e-9 * (1.0 + fd.norm()), "{} {}", se3.drift(&xi), fd);
        let dp = GyroBiasDp::new(rate, mu.bias, q, q);
        let fd = error_rate(BiasLaw::Direct, rate, mu, &xi);
        assert!((dp.drift(&xi) - fd).norm() < 1e-9 * (1.0 + fd.norm()), "{} {}", dp.drift(&xi), fd);
    }
}

#[test]
fn ctut_on_a_linear_model_matches_the_closed_form() {
    let a = SMatrix::<f64, 4, 4>::new(
        -0.2, 1.0, 0.0, 0.0, //
        -1.0, -0.1, 0.3, 0.0, //
        0.0, 0.0, -0.5, 0.2, //
        0.0, 0.1, 0.0, 0.0,
    );
    let b = SMatrix::<f64, 4, 2>::new(1.0, 0.0, 0.0, 1.0, 0.5, 0.5, 0.0, 1.0);
    let q = SMatrix::<f64, 2, 2>::new(0.04, 0.01, 0.01, 0.09);
    let model = LinearModel::<4, 2> { generator: a, input: b, noise: q };
    let m0 = Moments::new(SVector::<f64, 4>::new(1.0, -0.5, 0.2, 0.0), SMatrix::<f64, 4, 4>::identity() * 0.1);
    let t = 2.0;
    let out = ctut_propagate(&m0, &model, t, 0.01, 0.0).unwrap();
    // Van Loan: exp([[−A, BQBᵀ], [0, Aᵀ]]t) gives Φ and the noise Gramian.
    let bqb = b * q * b.transpose();
    let mut big = DMatrix::zeros(8, 8);
    big.view_mut((0, 0), (4, 4)).copy_from(&(-a * t));
    big.view_mut((0, 4), (4, 4)).copy_from(&(bqb * t));
    big.view_mut((4, 4), (4, 4)).copy_from(&(a.transpose() * t));
    let e = big.exp();
    let phi_t = e.view((4, 4), (4, 4)).into_owned();
    let phi = SMatrix::<f64, 4, 4>::from_column_slice(phi_t.transpose().as_slice());
    let gram = SMatrix::<f64, 4, 4>::from_column_slice((phi_t.transpose() * e.view((0, 4), (4, 4))).as_slice());
    let mean = phi * m0.mean;
    let cov = phi * m0.cov * phi.transpose() + gram;
    assert!((out.mean - mean).abs().max() < 1e-8);
    assert!((out.cov - cov).abs().max() < 1e-8);
}

#[test]
fn noiseless_ctut_follows_the_linear_tangent_flow() {
    let rate = Vector3::new(0.1, -0.3, 0.2);
    let accel = Vector3::new(0.5, 0.0, -1.0);
    let model = Se23Model::new(rate, accel, Matrix3::zeros(), Matrix3::zeros());
    let x0 = Vector9::from_fn(|i, _| 0.01 * (i as f64 + 1.0));
    let out = ctut_propagate(&Moments::new(x0, Matrix9::zeros()), &model, 3.0, 0.01, 0.0).unwrap();
    let expected = expm9(&(model.drift_matrix() * 3.0)) * x0;
    assert!((out.mean - expected).norm() < 1e-8);
    assert_eq!(model.diffusion(&x0) * SVector::<f64, 6>::zeros(), Vector9::zeros());
}

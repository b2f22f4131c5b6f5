mod common;

use common::{jbar_oracle, n_oracle, random_tangent, random_vector3, rng, wbar_oracle};
use nalgebra::{DMatrix, DVector, Vector3};
use tsf_core::groups::{so3, BiasLaw, GroupKind};

fn max_abs(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

#[test]
fn wbar_matches_quadrature_on_every_group() {
    let kinds = [
        GroupKind::S3,
        GroupKind::So3,
        GroupKind::Se3,
        GroupKind::Se23,
        GroupKind::AttitudeBias(BiasLaw::Direct),
        GroupKind::AttitudeBias(BiasLaw::Semidirect),
    ];
    let mut r = rng(11);
    for kind in kinds {
        let mut worst: f64 = 0.0;
        for _ in 0..300 {
            let xi = random_tangent(&mut r, kind, 1e-6, 3.0);
            worst = worst.max(max_abs(&kind.wbar(&xi).unwrap(), &wbar_oracle(kind, &xi)));
            worst = worst.max(max_abs(&kind.jbar(&xi).unwrap(), &jbar_oracle(kind, &xi)));
        }
        assert!(worst < 1e-10, "{kind:?}: {worst:e}");
    }
}

#[test]
fn wbar_at_quarter_turn_on_quaternion_algebra() {
    let xi = DVector::from_vec(vec![std::f64::consts::FRAC_PI_2, 0.0, 0.0]);
    let g = GroupKind::S3.wbar(&xi).unwrap() * 0.5;
    let h = std::f64::consts::FRAC_PI_4;
    let expected = DMatrix::from_row_slice(3, 3, &[0.5, 0.0, 0.0, 0.0, 0.0, -h, 0.0, h, 0.0]);
    assert!(max_abs(&g, &expected) < 1e-14);
    assert!(max_abs(&g, &(wbar_oracle(GroupKind::S3, &xi) * 0.5)) < 1e-12);
}

#[test]
fn n_matrix_matches_nested_quadrature() {
    let mut r = rng(12);
    for _ in 0..300 {
        let d = random_vector3(&mut r, 1e-6, 3.0);
        let u = random_vector3(&mut r, 1e-2, 3.0);
        let oracle = n_oracle(&d, &u);
        assert!((so3::n_matrix(&d, &u) - oracle).abs().max() < 1e-8);
        assert!((so3::n_matrix_expanded(&d, &u) - oracle).abs().max() < 1e-8);
    }
}

#[test]
fn n_matrix_reference_point() {
    let d = Vector3::new(0.7, 0.1, -0.2);
    let u = Vector3::new(1.0, 2.0, 3.0);
    let frozen = nalgebra::Matrix3::new(
        0.13002292, -1.1955309, 1.26229892,
        1.68152097, -0.0298622, -0.47714703,
        -0.64448297, 0.44489713, -0.28956693,
    );
    assert!((so3::n_matrix(&d, &u) - frozen).abs().max() < 1e-8);
}

#[test]
fn bch_agrees_with_composed_exponentials() {
    let mut r = rng(13);
    for kind in [GroupKind::S3, GroupKind::So3] {
        for _ in 0..200 {
            let a = random_tangent(&mut r, kind, 1e-6, 1.2);
            let b = random_tangent(&mut r, kind, 1e-6, 1.2);
            let c = kind.bch(&a, &b).unwrap();
            let lhs = common::exp_oracle(kind, &c);
            let rhs = common::exp_oracle(kind, &a) * common::exp_oracle(kind, &b);
            assert!(max_abs(&lhs, &rhs) < 1e-12);
        }
    }
}

//! One Monte-Carlo realisation of the attitude and gyro-bias filter.

use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix3, Matrix6, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tsf_core::cg::{transport_law, whiten, ConcentratedGaussian, OffsetGaussian, DEFAULT_WHITEN_MAX_ITER};
use tsf_core::groups::{so3, AttitudeBias, BiasLaw, GroupElement};
use tsf_core::measurement::{ut_update, CovarianceForm, Magnetometer};
use tsf_core::propagation::{ctut_propagate, map_propagate, GyroBiasDp, GyroBiasSe3, MapDynamics, Moments};
use tsf_core::TsfError;

use crate::config::ScenarioConfig;
use crate::error::{Result, SimError};
use crate::gyro::{simulate_gyro, GyroSample};
use crate::scenario::{body_rate, dipole_field, true_rotation};

/// Group law used by the filter on SO(3) × R³.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterLaw {
    Se3,
    Dp,
}

impl FilterLaw {
    pub fn bias_law(self) -> BiasLaw {
        match self {
            FilterLaw::Se3 => BiasLaw::Semidirect,
            FilterLaw::Dp => BiasLaw::Direct,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FilterLaw::Se3 => "TSF-SE3",
            FilterLaw::Dp => "TSF-DP",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "TSF-SE3" => Some(FilterLaw::Se3),
            "TSF-DP" => Some(FilterLaw::Dp),
            _ => None,
        }
    }
}

impl fmt::Display for FilterLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Independent random streams of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Init = 0,
    Gyro = 1,
    Mag = 2,
}

/// ChaCha8 keyed by the master seed, on a stream fixed by (run, channel).
pub fn channel_rng(master_seed: u64, run_id: u64, channel: Channel) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(run_id * 4 + channel as u64);
    rng
}

/// Filter state against truth at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub filter: FilterLaw,
    pub run_id: u64,
    pub t_s: f64,
    pub chi2: f64,
    /// Roll, pitch and yaw components of log(R_true R_estᵀ), rad.
    pub err: [f64; 3],
    /// 3√Σᵢᵢ for the attitude coordinates.
    pub sig3: [f64; 3],
    /// ‖β_true − β̂‖, rad/s.
    pub bias_err: f64,
    /// 3√λ_max of the bias block.
    pub bias_sig3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<RunRecord>,
    /// Smallest eigenvalue of Σ − Σ₊ over all measurement updates.
    pub min_update_gap: f64,
    pub max_whiten_iterations: usize,
    pub updates: usize,
}

/// Per-axis errors from the rotation error log(R_true R_estᵀ).
pub fn attitude_errors(r_true: &Matrix3<f64>, r_est: &Matrix3<f64>) -> std::result::Result<Vector3<f64>, TsfError> {
    so3::log(&(r_true * r_est.transpose()))
}

fn block6(m: &DMatrix<f64>) -> Matrix6<f64> {
    Matrix6::from_column_slice(m.as_slice())
}

fn record(
    law: FilterLaw,
    run_id: u64,
    t: f64,
    cg: &ConcentratedGaussian,
    truth: &AttitudeBias,
) -> std::result::Result<RunRecord, TsfError> {
    let GroupElement::AttitudeBias(_, est) = cg.mean else {
        return Err(TsfError::TagMismatch);
    };
    let chi2 = cg.chi2(&GroupElement::AttitudeBias(law.bias_law(), *truth))?;
    let err = attitude_errors(&truth.rot, &est.rot)?;
    let sig3 = [0, 1, 2].map(|i| 3.0 * cg.cov[(i, i)].sqrt());
    let bias_block = cg.cov.view((3, 3), (3, 3)).into_owned();
    let lmax = bias_block.symmetric_eigenvalues().max();
    Ok(RunRecord {
        filter: law,
        run_id,
        t_s: t,
        chi2,
        err: [err.x, err.y, err.z],
        sig3,
        bias_err: (truth.bias - est.bias).norm(),
        bias_sig3: 3.0 * lmax.max(0.0).sqrt(),
    })
}

/// Propagation over one gyro interval with the rate held constant: the MAP
/// moves in closed form and the tangent moments follow the CTUT.
pub fn propagate(
    cg: &ConcentratedGaussian,
    law: FilterLaw,
    rate: &Vector3<f64>,
    cfg: &ScenarioConfig,
) -> std::result::Result<(ConcentratedGaussian, usize), TsfError> {
    let GroupElement::AttitudeBias(_, mu) = cg.mean else {
        return Err(TsfError::TagMismatch);
    };
    let dt = cfg.gyro_dt();
    let q_eta = Matrix3::identity() * (cfg.arw * cfg.arw);
    let q_zeta = Matrix3::identity() * (cfg.rrw * cfg.rrw);
    let m0 = Moments::centred(block6(&cg.cov));
    let m1 = match law {
        FilterLaw::Se3 => ctut_propagate(&m0, &GyroBiasSe3::new(*rate, mu.bias, q_eta, q_zeta), dt, dt, cfg.ut_lambda)?,
        FilterLaw::Dp => ctut_propagate(&m0, &GyroBiasDp::new(*rate, mu.bias, q_eta, q_zeta), dt, dt, cfg.ut_lambda)?,
    };
    let mean = map_propagate(&cg.mean, &MapDynamics::GyroBias { rate: *rate }, dt)?;
    let og = OffsetGaussian::new(
        mean,
        DVector::from_column_slice(m1.mean.as_slice()),
        DMatrix::from_column_slice(6, 6, m1.cov.as_slice()),
    )?;
    let w = whiten(&og, cfg.whiten_tol, DEFAULT_WHITEN_MAX_ITER)?;
    Ok((w.cg, w.iterations))
}

/// Initial estimate: attitude drawn from the prior about the truth, bias at
/// its configured estimate, covariance given in SE(3)-law coordinates and
/// transported to the filter's law.
pub fn initial_estimate(cfg: &ScenarioConfig, law: FilterLaw, rng: &mut ChaCha8Rng) -> std::result::Result<ConcentratedGaussian, TsfError> {
    let delta = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal)) * cfg.init_att_var.sqrt();
    let rot = so3::reorthonormalize(&(so3::exp(&delta) * true_rotation(0.0)));
    let mean = AttitudeBias { rot, bias: cfg.init_bias_est };
    let mut cov = DMatrix::zeros(6, 6);
    for i in 0..3 {
        cov[(i, i)] = cfg.init_att_var;
        cov[(i + 3, i + 3)] = cfg.init_bias_var;
    }
    let cg = ConcentratedGaussian::new(GroupElement::AttitudeBias(BiasLaw::Semidirect, mean), cov)?;
    transport_law(&cg, law.bias_law())
}

/// Runs the filter over the whole scenario for one realisation.
pub fn run_filter(cfg: &ScenarioConfig, law: FilterLaw, run_id: u64) -> Result<RunOutput> {
    cfg.validate()?;
    let abort = |step: usize| move |source: TsfError| SimError::RunAborted { run_id, step, source };
    let steps = cfg.total_steps();
    let dt = cfg.gyro_dt();
    let per_meas = cfg.steps_per_measurement();
    let per_record = cfg.steps_per_record();
    let rates = vec![-body_rate(); steps + 1];
    let gyro: Vec<GyroSample> = simulate_gyro(&rates, cfg, &mut channel_rng(cfg.master_seed, run_id, Channel::Gyro));
    let mut mag_rng = channel_rng(cfg.master_seed, run_id, Channel::Mag);
    let mut cg = initial_estimate(cfg, law, &mut channel_rng(cfg.master_seed, run_id, Channel::Init)).map_err(abort(0))?;
    let truth_at = |k: usize| AttitudeBias { rot: true_rotation(k as f64 * dt), bias: gyro[k].bias };

    let mut out = RunOutput {
        records: Vec::with_capacity(steps / per_record + 1),
        min_update_gap: f64::INFINITY,
        max_whiten_iterations: 0,
        updates: 0,
    };
    out.records.push(record(law, run_id, 0.0, &cg, &truth_at(0)).map_err(abort(0))?);
    let sigma = cfg.mag_noise_ut();
    for (k, sample) in gyro.iter().take(steps).enumerate() {
        let (next, iters) = propagate(&cg, law, &sample.rate, cfg).map_err(abort(k))?;
        cg = next;
        out.max_whiten_iterations = out.max_whiten_iterations.max(iters);
        let step = k + 1;
        let t = step as f64 * dt;
        if step % per_meas == 0 {
            let field = dipole_field(t);
            let noise = Vector3::from_fn(|_, _| mag_rng.sample::<f64, _>(StandardNormal)) * sigma;
            let z = true_rotation(t) * field + noise;
            let mm = Magnetometer::isotropic(field, sigma);
            let post = ut_update(&cg, &DVector::from_column_slice(z.as_slice()), &mm, cfg.ut_lambda, CovarianceForm::Subtractive)
                .map_err(abort(step))?;
            let gap = (&cg.cov - &post.cov).symmetric_eigenvalues().min();
            out.min_update_gap = out.min_update_gap.min(gap);
            out.updates += 1;
            let w = whiten(&post, cfg.whiten_tol, DEFAULT_WHITEN_MAX_ITER).map_err(abort(step))?;
            out.max_whiten_iterations = out.max_whiten_iterations.max(w.iterations);
            cg = w.cg;
        }
        if step % per_record == 0 {
            out.records.push(record(law, run_id, t, &cg, &truth_at(step)).map_err(abort(step))?);
        }
    }
    Ok(out)
}

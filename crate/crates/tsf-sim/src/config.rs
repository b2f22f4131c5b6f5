//! Scenario parameters and the flat `key = value` configuration format.

use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::error::{Result, SimError};

/// One degree per hour in rad/s.
pub const DEG_PER_HOUR: f64 = PI / (180.0 * 3600.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub sim_length_s: f64,
    pub gyro_rate_hz: f64,
    pub mag_rate_hz: f64,
    /// Angle random walk σ_η in rad/s^½.
    pub arw: f64,
    /// Rate random walk σ_ζ in rad/s^{3/2}.
    pub rrw: f64,
    /// True bias at t = 0 in rad/s, in the filter's rate convention.
    pub true_initial_bias: Vector3<f64>,
    /// Magnetometer 1σ in tesla.
    pub mag_noise_t: f64,
    /// Initial attitude variance per axis in rad².
    pub init_att_var: f64,
    /// Initial bias variance per axis in rad²/s².
    pub init_bias_var: f64,
    pub init_bias_est: Vector3<f64>,
    pub whiten_tol: f64,
    pub ut_lambda: f64,
    pub mc_runs: usize,
    pub master_seed: u64,
    /// Records are written every this many seconds.
    pub record_every_s: f64,
}

impl ScenarioConfig {
    /// The four-hour, 200-run experiment.
    pub fn full() -> Self {
        Self {
            sim_length_s: 14_400.0,
            gyro_rate_hz: 10.0,
            mag_rate_hz: 1.0,
            arw: 3.1623e-7,
            rrw: 3.1623e-10,
            true_initial_bias: Vector3::repeat(20.0 * DEG_PER_HOUR),
            mag_noise_t: 50e-9,
            init_att_var: (10.0 * PI / 180.0).powi(2),
            init_bias_var: (20.0 * DEG_PER_HOUR).powi(2),
            init_bias_est: Vector3::zeros(),
            whiten_tol: 1e-15,
            ut_lambda: 0.0,
            mc_runs: 200,
            master_seed: 1,
            record_every_s: 1.0,
        }
    }

    /// One hour and 50 runs.
    pub fn desk() -> Self {
        Self { sim_length_s: 3600.0, mc_runs: 50, ..Self::full() }
    }

    pub fn gyro_dt(&self) -> f64 {
        1.0 / self.gyro_rate_hz
    }

    /// Gyro samples per magnetometer sample.
    pub fn steps_per_measurement(&self) -> usize {
        (self.gyro_rate_hz / self.mag_rate_hz).round() as usize
    }

    pub fn total_steps(&self) -> usize {
        (self.sim_length_s * self.gyro_rate_hz).round() as usize
    }

    pub fn steps_per_record(&self) -> usize {
        (self.record_every_s * self.gyro_rate_hz).round().max(1.0) as usize
    }

    /// Magnetometer 1σ in μT, the field unit used throughout.
    pub fn mag_noise_ut(&self) -> f64 {
        self.mag_noise_t * 1e6
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("sim_length_s", self.sim_length_s),
            ("gyro_rate_hz", self.gyro_rate_hz),
            ("mag_rate_hz", self.mag_rate_hz),
            ("mag_noise_t", self.mag_noise_t),
            ("init_att_var", self.init_att_var),
            ("init_bias_var", self.init_bias_var),
            ("record_every_s", self.record_every_s),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SimError::Scenario(format!("{name} must be positive")));
            }
        }
        if self.arw < 0.0 || self.rrw < 0.0 {
            return Err(SimError::Scenario("noise densities must be nonnegative".into()));
        }
        let ratio = self.gyro_rate_hz / self.mag_rate_hz;
        if (ratio - ratio.round()).abs() > 1e-9 || ratio < 1.0 {
            return Err(SimError::Scenario("gyro rate must be a multiple of the magnetometer rate".into()));
        }
        let rec = self.record_every_s * self.mag_rate_hz;
        if (rec - rec.round()).abs() > 1e-9 || rec < 1.0 {
            return Err(SimError::Scenario("records must fall on magnetometer samples".into()));
        }
        if self.mc_runs == 0 {
            return Err(SimError::Scenario("mc_runs must be at least 1".into()));
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. Blank lines and text
    /// after `#` are ignored; vectors are comma-separated.
    pub fn apply(mut self, text: &str) -> Result<Self> {
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| SimError::Config { line: line_no, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || value.parse::<f64>().map_err(|e| err(format!("{key}: {e}")));
            let int = || value.parse::<u64>().map_err(|e| err(format!("{key}: {e}")));
            let vec3 = || -> Result<Vector3<f64>> {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(err(format!("{key}: expected three comma-separated numbers")));
                }
                let mut v = Vector3::zeros();
                for (k, p) in parts.iter().enumerate() {
                    v[k] = p.parse().map_err(|e| err(format!("{key}: {e}")))?;
                }
                Ok(v)
            };
            match key {
                "sim_length_s" => self.sim_length_s = num()?,
                "gyro_rate_hz" => self.gyro_rate_hz = num()?,
                "mag_rate_hz" => self.mag_rate_hz = num()?,
                "arw" => self.arw = num()?,
                "rrw" => self.rrw = num()?,
                "true_initial_bias" => self.true_initial_bias = vec3()?,
                "mag_noise_t" => self.mag_noise_t = num()?,
                "init_att_var" => self.init_att_var = num()?,
                "init_bias_var" => self.init_bias_var = num()?,
                "init_bias_est" => self.init_bias_est = vec3()?,
                "whiten_tol" => self.whiten_tol = num()?,
                "ut_lambda" => self.ut_lambda = num()?,
                "mc_runs" => self.mc_runs = int()? as usize,
                "master_seed" => self.master_seed = int()?,
                "record_every_s" => self.record_every_s = num()?,
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        self.validate()?;
        Ok(self)
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::desk()
    }
}

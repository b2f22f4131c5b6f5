//! CSV output for per-run records and aggregates. Floats are written with
//! 17 significant digits so that reading them back is exact.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Result, SimError};
use crate::filter::{FilterLaw, RunRecord};
use crate::monte_carlo::AggregateRow;

pub const RUNS_HEADER: [&str; 12] = [
    "filter_name",
    "run_id",
    "t_s",
    "chi2",
    "err_roll_rad",
    "err_pitch_rad",
    "err_yaw_rad",
    "sig3_roll",
    "sig3_pitch",
    "sig3_yaw",
    "bias_err_rads",
    "bias_sig3",
];

pub const AGGREGATE_HEADER: [&str; 14] = [
    "filter_name",
    "t_s",
    "rms_chi2",
    "rms_err_roll",
    "rms_err_pitch",
    "rms_err_yaw",
    "rms_sig3_roll",
    "rms_sig3_pitch",
    "rms_sig3_yaw",
    "rms_bias_err",
    "rms_bias_sig3",
    "chi2_band_lo",
    "chi2_band_hi",
    "runs",
];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse().map_err(|e| SimError::Config { line, message: format!("bad number `{s}`: {e}") })
}

fn parse_law(s: &str, line: usize) -> Result<FilterLaw> {
    FilterLaw::from_name(s).ok_or_else(|| SimError::Config { line, message: format!("unknown filter `{s}`") })
}

fn open_out(path: &Path) -> Result<File> {
    File::create(path).map_err(|source| SimError::Io { path: path.to_path_buf(), source })
}

pub fn write_runs<W: Write>(out: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RUNS_HEADER)?;
    for r in records {
        let mut row = vec![r.filter.name().to_string(), r.run_id.to_string(), fmt_f64(r.t_s), fmt_f64(r.chi2)];
        row.extend(r.err.iter().chain(&r.sig3).map(|v| fmt_f64(*v)));
        row.push(fmt_f64(r.bias_err));
        row.push(fmt_f64(r.bias_sig3));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| SimError::Csv(e.into()))?;
    Ok(())
}

pub fn read_runs<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let f = |k: usize| parse_f64(&row[k], line);
        out.push(RunRecord {
            filter: parse_law(&row[0], line)?,
            run_id: row[1].parse().map_err(|e| SimError::Config { line, message: format!("run_id: {e}") })?,
            t_s: f(2)?,
            chi2: f(3)?,
            err: [f(4)?, f(5)?, f(6)?],
            sig3: [f(7)?, f(8)?, f(9)?],
            bias_err: f(10)?,
            bias_sig3: f(11)?,
        });
    }
    Ok(out)
}

pub fn write_aggregate<W: Write>(out: W, rows: &[AggregateRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGGREGATE_HEADER)?;
    for r in rows {
        let mut row = vec![r.filter.name().to_string(), fmt_f64(r.t_s), fmt_f64(r.rms_chi2)];
        row.extend(r.rms_err.iter().chain(&r.rms_sig3).map(|v| fmt_f64(*v)));
        row.push(fmt_f64(r.rms_bias_err));
        row.push(fmt_f64(r.rms_bias_sig3));
        row.push(fmt_f64(r.chi2_band[0]));
        row.push(fmt_f64(r.chi2_band[1]));
        row.push(r.runs.to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| SimError::Csv(e.into()))?;
    Ok(())
}

pub fn read_aggregate<R: Read>(input: R) -> Result<Vec<AggregateRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let f = |k: usize| parse_f64(&row[k], line);
        out.push(AggregateRow {
            filter: parse_law(&row[0], line)?,
            t_s: f(1)?,
            rms_chi2: f(2)?,
            rms_err: [f(3)?, f(4)?, f(5)?],
            rms_sig3: [f(6)?, f(7)?, f(8)?],
            rms_bias_err: f(9)?,
            rms_bias_sig3: f(10)?,
            chi2_band: [f(11)?, f(12)?],
            runs: row[13].parse().map_err(|e| SimError::Config { line, message: format!("runs: {e}") })?,
        });
    }
    Ok(out)
}

pub fn write_runs_file(path: &Path, records: &[RunRecord]) -> Result<()> {
    write_runs(open_out(path)?, records)
}

pub fn write_aggregate_file(path: &Path, rows: &[AggregateRow]) -> Result<()> {
    write_aggregate(open_out(path)?, rows)
}

/// (r, K(t, r)) pairs on a uniform radial grid over [0, π).
pub fn write_heat_kernel<W: Write>(out: W, t: f64, points: usize) -> Result<()> {
    let n = tsf_core::fpe::winding_cutoff(t);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r_rad", "density"])?;
    for k in 0..points {
        let r = std::f64::consts::PI * k as f64 / points as f64;
        w.write_record([fmt_f64(r), fmt_f64(tsf_core::fpe::heat_kernel_radial(t, r, n))])?;
    }
    w.flush().map_err(|e| SimError::Csv(e.into()))?;
    Ok(())
}

pub fn write_heat_kernel_file(path: &Path, t: f64, points: usize) -> Result<()> {
    write_heat_kernel(open_out(path)?, t, points)
}

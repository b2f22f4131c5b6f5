//! Parallel Monte-Carlo batches and their RMS aggregates.

use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::SimError;
use crate::filter::{run_filter, FilterLaw, RunOutput};

/// Dimension of the state, used by the χ² reference band.
pub const STATE_DIM: usize = 6;

/// RMS over runs of every record column at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub filter: FilterLaw,
    pub t_s: f64,
    pub rms_chi2: f64,
    pub rms_err: [f64; 3],
    pub rms_sig3: [f64; 3],
    pub rms_bias_err: f64,
    pub rms_bias_sig3: f64,
    /// Expected χ² of 1 ± √(2/(n·runs)).
    pub chi2_band: [f64; 2],
    pub runs: usize,
}

#[derive(Debug)]
pub struct BatchOutcome {
    pub filter: FilterLaw,
    pub runs: Vec<RunOutput>,
    pub aborted: Vec<SimError>,
    pub aggregate: Vec<AggregateRow>,
}

/// ±1σ band of the mean of `runs` normalised χ² values with n = 6.
pub fn chi2_band(runs: usize) -> [f64; 2] {
    let sd = (2.0 / (STATE_DIM * runs) as f64).sqrt();
    [1.0 - sd, 1.0 + sd]
}

fn rms<I: Iterator<Item = f64>>(values: I) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v * v, n + 1));
    (sum / n as f64).sqrt()
}

/// Aggregates runs record by record; runs must share their time grid.
pub fn aggregate(filter: FilterLaw, runs: &[RunOutput]) -> Vec<AggregateRow> {
    let Some(first) = runs.first() else {
        return Vec::new();
    };
    let n = runs.len();
    (0..first.records.len())
        .map(|i| {
            let at = |f: &dyn Fn(&crate::filter::RunRecord) -> f64| rms(runs.iter().map(|r| f(&r.records[i])));
            AggregateRow {
                filter,
                t_s: first.records[i].t_s,
                rms_chi2: at(&|r| r.chi2),
                rms_err: [0, 1, 2].map(|k| at(&|r| r.err[k])),
                rms_sig3: [0, 1, 2].map(|k| at(&|r| r.sig3[k])),
                rms_bias_err: at(&|r| r.bias_err),
                rms_bias_sig3: at(&|r| r.bias_sig3),
                chi2_band: chi2_band(n),
                runs: n,
            }
        })
        .collect()
}

/// Runs `cfg.mc_runs` realisations in parallel. Aborted runs are reported
/// and left out of the aggregate.
pub fn monte_carlo(cfg: &ScenarioConfig, filter: FilterLaw) -> BatchOutcome {
    let results: Vec<Result<RunOutput, SimError>> =
        (0..cfg.mc_runs as u64).into_par_iter().map(|id| run_filter(cfg, filter, id)).collect();
    let mut runs = Vec::with_capacity(results.len());
    let mut aborted = Vec::new();
    for r in results {
        match r {
            Ok(out) => runs.push(out),
            Err(e) => aborted.push(e),
        }
    }
    let aggregate = aggregate(filter, &runs);
    BatchOutcome { filter, runs, aborted, aggregate }
}

/// Mean of a column over records with t_s in (from, to].
pub fn time_average<F: Fn(&AggregateRow) -> f64>(rows: &[AggregateRow], from: f64, to: f64, f: F) -> f64 {
    let sel: Vec<f64> = rows.iter().filter(|r| r.t_s > from && r.t_s <= to).map(f).collect();
    sel.iter().sum::<f64>() / sel.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_is_positive_and_narrows() {
        let mut prev = f64::INFINITY;
        for runs in [1, 2, 10, 50, 200] {
            let [lo, hi] = chi2_band(runs);
            assert!(lo > 0.0 && hi > 1.0);
            assert!(hi - lo < prev);
            prev = hi - lo;
        }
    }
}

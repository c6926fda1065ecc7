use serde::{Deserialize, Serialize};

use super::PathSample;
use crate::error::{Error, Result};

/// Time-averaged first and second moments of a pair of noise paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErgodicStats {
    pub mean1: f64,
    pub mean2: f64,
    /// Estimate of `E[xi_1^2]`.
    pub c1: f64,
    /// Estimate of `E[xi_2^2]`.
    pub c2: f64,
    /// Estimate of `E[xi_1 xi_2]`.
    pub c12: f64,
    pub se_mean1: f64,
    pub se_mean2: f64,
    pub se_c1: f64,
    pub se_c2: f64,
    pub se_c12: f64,
    pub burn_in_periods: usize,
    pub avg_periods: usize,
}

impl ErgodicStats {
    /// Exact moments, e.g. from a closed form; standard errors are zero.
    pub fn exact(c1: f64, c2: f64, c12: f64) -> Self {
        Self {
            mean1: 0.0,
            mean2: 0.0,
            c1,
            c2,
            c12,
            se_mean1: 0.0,
            se_mean2: 0.0,
            se_c1: 0.0,
            se_c2: 0.0,
            se_c12: 0.0,
            burn_in_periods: 0,
            avg_periods: 0,
        }
    }
}

/// Mean and batch-means standard error of `f` over `nodes`, split into
/// `batches` consecutive equal blocks.
fn batch_mean<F: Fn(usize) -> f64>(start: usize, per_batch: usize, batches: usize, f: F) -> (f64, f64) {
    let means: Vec<f64> = (0..batches)
        .map(|b| {
            let lo = start + b * per_batch;
            (lo..lo + per_batch).map(&f).sum::<f64>() / per_batch as f64
        })
        .collect();
    let mean = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}

/// Time averages of `xi_i`, `xi_i^2` and `xi_1 xi_2` after discarding
/// `burn_in_periods` periods. The window is the largest whole number of
/// periods divisible into `batches` blocks; node values are averaged with the
/// left-point rule.
pub fn estimate_ergodic_stats(
    pair: (&PathSample, &PathSample),
    tau: f64,
    burn_in_periods: usize,
    batches: usize,
) -> Result<ErgodicStats> {
    let (a, b) = pair;
    if a.grid != b.grid {
        return Err(Error::config("paths must share one grid"));
    }
    if batches < 8 {
        return Err(Error::config(format!("need at least 8 batches, got {batches}")));
    }
    let spp = a.grid.steps_per(tau)?;
    let burn = burn_in_periods * spp;
    let needed = burn + batches * spp;
    if a.grid.n < needed {
        return Err(Error::Length { needed, available: a.grid.n });
    }
    let avail_periods = (a.grid.n - burn) / spp;
    let periods_per_batch = avail_periods / batches;
    let per_batch = periods_per_batch * spp;
    let (x, y) = (&a.values, &b.values);

    let (mean1, se_mean1) = batch_mean(burn, per_batch, batches, |k| x[k]);
    let (mean2, se_mean2) = batch_mean(burn, per_batch, batches, |k| y[k]);
    let (c1, se_c1) = batch_mean(burn, per_batch, batches, |k| x[k] * x[k]);
    let (c2, se_c2) = batch_mean(burn, per_batch, batches, |k| y[k] * y[k]);
    let (c12, se_c12) = batch_mean(burn, per_batch, batches, |k| x[k] * y[k]);

    Ok(ErgodicStats {
        mean1,
        mean2,
        c1,
        c2,
        c12,
        se_mean1,
        se_mean2,
        se_c1,
        se_c2,
        se_c12,
        burn_in_periods,
        avg_periods: periods_per_batch * batches,
    })
}

//! Random periodic noise paths.
//!
//! Each noise channel solves `dX = b(t, X) dt + beta dW` with the periodically
//! forced relaxation drift `b(t, x) = -alpha (x - A sin(2 pi t / tau + phi))`,
//! which is `tau`-periodic in `t` and Lipschitz in `x` with constant `alpha`.

mod law;
mod stats;

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, NoiseStream, COMMON_CHANNEL};

pub use law::{ks_critical_value, ks_two_sample, law_periodicity_check, KsReport, LawPeriodicityReport};
pub use stats::{estimate_ergodic_stats, ErgodicStats};

/// Relative tolerance used when checking that a period is a whole number of steps.
pub(crate) const COMMENSURATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicDriftSpec {
    pub tau: f64,
    pub alpha: f64,
    pub forcing_amp: f64,
    #[serde(default)]
    pub forcing_phase: f64,
}

impl PeriodicDriftSpec {
    pub fn new(tau: f64, alpha: f64, forcing_amp: f64, forcing_phase: f64) -> Result<Self> {
        let spec = Self { tau, alpha, forcing_amp, forcing_phase };
        spec.validate()?;
        Ok(spec)
    }

    /// Pure relaxation towards zero with period one.
    pub fn relaxation(alpha: f64) -> Self {
        Self { tau: 1.0, alpha, forcing_amp: 0.0, forcing_phase: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::config(format!("drift tau must be finite and > 0, got {}", self.tau)));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::config(format!("drift alpha must be finite and > 0, got {}", self.alpha)));
        }
        if !(self.forcing_amp.is_finite() && self.forcing_amp >= 0.0) {
            return Err(Error::config(format!("forcing amplitude must be finite and >= 0, got {}", self.forcing_amp)));
        }
        if !self.forcing_phase.is_finite() {
            return Err(Error::config("forcing phase must be finite"));
        }
        Ok(())
    }

    /// The periodic target `A sin(2 pi t / tau + phi)` the drift relaxes towards.
    pub fn forcing(&self, t: f64) -> f64 {
        self.forcing_amp * (TAU * t / self.tau + self.forcing_phase).sin()
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        -self.alpha * (x - self.forcing(t))
    }

    pub fn lipschitz_constant(&self) -> f64 {
        self.alpha
    }

    /// Period-averaged stationary second moment of the exact SDE:
    /// `beta^2 / (2 alpha) + A^2 alpha^2 / (2 (alpha^2 + omega^2))`.
    pub fn stationary_second_moment(&self, beta: f64) -> f64 {
        let omega = TAU / self.tau;
        let a2 = self.alpha * self.alpha;
        beta * beta / (2.0 * self.alpha) + self.forcing_amp.powi(2) * a2 / (2.0 * (a2 + omega * omega))
    }
}

pub fn drift_eval(spec: &PeriodicDriftSpec, t: f64, x: f64) -> f64 {
    spec.eval(t, x)
}

/// Which Wiener process a channel is driven by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Driver {
    /// The common Wiener process shared by all `Shared` channels.
    #[default]
    Shared,
    /// A private Wiener process per channel index.
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseChannelConfig {
    pub drift: PeriodicDriftSpec,
    pub beta: f64,
    #[serde(default)]
    pub z0: f64,
    #[serde(default)]
    pub driver: Driver,
}

impl NoiseChannelConfig {
    pub fn validate(&self) -> Result<()> {
        self.drift.validate()?;
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::config(format!("beta must be finite and > 0, got {}", self.beta)));
        }
        if !self.z0.is_finite() {
            return Err(Error::config("z0 must be finite"));
        }
        Ok(())
    }

    fn channel_id(&self, index: u64) -> u64 {
        match self.driver {
            Driver::Shared => COMMON_CHANNEL,
            Driver::Independent => index + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathGrid {
    pub t0: f64,
    pub h: f64,
    pub n: usize,
}

impl PathGrid {
    pub fn new(t0: f64, h: f64, n: usize) -> Result<Self> {
        let grid = Self { t0, h, n };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t0.is_finite() {
            return Err(Error::config("grid t0 must be finite"));
        }
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::config(format!("grid step h must be finite and > 0, got {}", self.h)));
        }
        if self.n < 1 {
            return Err(Error::config("grid needs at least one step"));
        }
        Ok(())
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.h
    }

    /// Number of grid nodes (`n + 1`).
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(|k| self.time(k))
    }

    /// Number of steps in one period `tau`; errors unless `tau` is a whole
    /// multiple of `h`.
    pub fn steps_per(&self, tau: f64) -> Result<usize> {
        steps_per_period(tau, self.h)
    }
}

pub(crate) fn steps_per_period(tau: f64, h: f64) -> Result<usize> {
    let ratio = tau / h;
    let k = ratio.round();
    if k < 1.0 || (ratio - k).abs() > COMMENSURATE_TOL * ratio.max(1.0) {
        return Err(Error::config(format!(
            "period tau = {tau} must be a whole multiple of the step h = {h} (tau/h = {ratio})"
        )));
    }
    Ok(k as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub grid: PathGrid,
    pub values: Vec<f64>,
    pub seed: u64,
}

impl PathSample {
    /// Constant path, mostly useful for switching noise off.
    pub fn constant(grid: PathGrid, value: f64) -> Self {
        Self { grid, values: vec![value; grid.len()], seed: 0 }
    }

    /// Trapezoidal running integral `int_{t0}^{t_k} xi ds` at every node.
    pub fn running_integral(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len());
        let mut acc = 0.0;
        out.push(0.0);
        for w in self.values.windows(2) {
            acc += 0.5 * self.grid.h * (w[0] + w[1]);
            out.push(acc);
        }
        out
    }
}

/// Euler-Maruyama realisation of one channel; `channel` selects the private
/// substream for `Driver::Independent` channels and is ignored otherwise.
pub fn simulate_channel(config: &NoiseChannelConfig, grid: &PathGrid, seed: u64, channel: u64) -> Result<PathSample> {
    config.validate()?;
    grid.validate()?;
    let mut stream = NoiseStream::new(seed, config.channel_id(channel), 0);
    let sqrt_h = grid.h.sqrt();
    let mut values = Vec::with_capacity(grid.len());
    let mut x = config.z0;
    values.push(x);
    for k in 0..grid.n {
        let t = grid.time(k);
        x += config.drift.eval(t, x) * grid.h + config.beta * sqrt_h * stream.gaussian();
        if !x.is_finite() {
            return Err(Error::BlowUp { index: k + 1, time: grid.time(k + 1) });
        }
        values.push(x);
    }
    Ok(PathSample { grid: *grid, values, seed })
}

pub fn simulate_path(config: &NoiseChannelConfig, grid: &PathGrid, seed: u64) -> Result<PathSample> {
    simulate_channel(config, grid, seed, 0)
}

/// Joint realisation of the two channels: channel indices 0 and 1.
pub fn simulate_pair(
    cfg1: &NoiseChannelConfig,
    cfg2: &NoiseChannelConfig,
    grid: &PathGrid,
    seed: u64,
) -> Result<(PathSample, PathSample)> {
    Ok((simulate_channel(cfg1, grid, seed, 0)?, simulate_channel(cfg2, grid, seed, 1)?))
}

/// The pair of noise channels together with the integration step; the noise
/// period is the common `tau` of both drifts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSource {
    pub channel1: NoiseChannelConfig,
    pub channel2: NoiseChannelConfig,
    pub h: f64,
}

impl NoiseSource {
    pub fn validate(&self) -> Result<()> {
        self.channel1.validate()?;
        self.channel2.validate()?;
        let (t1, t2) = (self.channel1.drift.tau, self.channel2.drift.tau);
        if (t1 - t2).abs() > COMMENSURATE_TOL * t1.max(t2) {
            return Err(Error::config(format!("both channels must share one period, got {t1} and {t2}")));
        }
        steps_per_period(self.tau(), self.h)?;
        Ok(())
    }

    pub fn tau(&self) -> f64 {
        self.channel1.drift.tau
    }

    pub fn steps_per_period(&self) -> Result<usize> {
        steps_per_period(self.tau(), self.h)
    }

    /// Grid from `t = 0` covering a whole number of periods.
    pub fn grid(&self, periods: usize) -> Result<PathGrid> {
        PathGrid::new(0.0, self.h, periods * self.steps_per_period()?)
    }

    pub fn simulate(&self, grid: &PathGrid, seed: u64) -> Result<(PathSample, PathSample)> {
        simulate_pair(&self.channel1, &self.channel2, grid, seed)
    }

    /// Long single-seed run followed by time averaging.
    pub fn reference_stats(
        &self,
        seed: u64,
        burn_in_periods: usize,
        avg_periods: usize,
        batches: usize,
    ) -> Result<ErgodicStats> {
        self.validate()?;
        let grid = self.grid(burn_in_periods + avg_periods)?;
        let (a, b) = self.simulate(&grid, seed)?;
        estimate_ergodic_stats((&a, &b), self.tau(), burn_in_periods, batches)
    }

    /// Paths for `n` ensemble members, in member order.
    pub fn ensemble(&self, grid: &PathGrid, master_seed: u64, n: usize) -> Result<Vec<(PathSample, PathSample)>> {
        (0..n as u64).into_par_iter().map(|k| self.simulate(grid, rng::member_seed(master_seed, k))).collect()
    }
}

impl Default for NoiseSource {
    /// Unit-period forced OU pair on a common driver, a quarter period apart,
    /// with a thousand steps per period.
    fn default() -> Self {
        let channel = |phase: f64| NoiseChannelConfig {
            drift: PeriodicDriftSpec { tau: 1.0, alpha: 1.0, forcing_amp: 1.0, forcing_phase: phase },
            beta: 1.0,
            z0: 0.0,
            driver: Driver::Shared,
        };
        Self { channel1: channel(0.0), channel2: channel(std::f64::consts::FRAC_PI_2), h: 1e-3 }
    }
}

/// Size and seeding of a Monte Carlo ensemble; member `k` uses
/// [`rng::member_seed`]`(master_seed, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub master_seed: u64,
    pub ensemble_n: usize,
    pub horizon_periods: usize,
}

impl EnsembleSpec {
    pub fn seeds(&self) -> Vec<u64> {
        (0..self.ensemble_n as u64).map(|k| rng::member_seed(self.master_seed, k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ou(alpha: f64, beta: f64, z0: f64) -> NoiseChannelConfig {
        NoiseChannelConfig { drift: PeriodicDriftSpec::relaxation(alpha), beta, z0, driver: Driver::Shared }
    }

    #[test]
    fn drift_examples() {
        let relax = PeriodicDriftSpec::relaxation(1.0);
        assert_eq!(drift_eval(&relax, 0.5, 2.0), -2.0);
        let forced = PeriodicDriftSpec::new(1.0, 2.0, 1.0, 0.0).unwrap();
        assert!((drift_eval(&forced, 0.25, 0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn drift_rejects_bad_specs() {
        assert!(PeriodicDriftSpec::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(PeriodicDriftSpec::new(1.0, -1.0, 0.0, 0.0).is_err());
        assert!(PeriodicDriftSpec::new(1.0, 1.0, -0.5, 0.0).is_err());
        assert!(PeriodicDriftSpec::new(1.0, 1.0, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn vanishing_noise_follows_exponential_decay() {
        let grid = PathGrid::new(0.0, 1e-3, 1000).unwrap();
        let path = simulate_path(&ou(1.0, 1e-12, 1.0), &grid, 9).unwrap();
        assert_eq!(path.values[0], 1.0);
        let end = *path.values.last().unwrap();
        // Euler error for x' = -x is about h/2 * t e^{-t}.
        assert!((end - (-1.0f64).exp()).abs() < 1e-3, "end = {end}");
    }

    #[test]
    fn deterministic_per_seed() {
        let grid = PathGrid::new(0.0, 0.01, 500).unwrap();
        let a = simulate_path(&ou(1.0, 1.0, 0.0), &grid, 42).unwrap();
        let b = simulate_path(&ou(1.0, 1.0, 0.0), &grid, 42).unwrap();
        let c = simulate_path(&ou(1.0, 1.0, 0.0), &grid, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn shared_driver_identical_configs_identical_paths() {
        let grid = PathGrid::new(0.0, 0.01, 500).unwrap();
        let cfg = ou(1.0, 0.7, 0.3);
        let (a, b) = simulate_pair(&cfg, &cfg, &grid, 5).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn independent_increments_uncorrelated() {
        let n = 100_000;
        let grid = PathGrid::new(0.0, 0.01, n).unwrap();
        let cfg = NoiseChannelConfig { driver: Driver::Independent, ..ou(1.0, 1.0, 0.0) };
        let (a, b) = simulate_pair(&cfg, &cfg, &grid, 11).unwrap();
        // Increments minus the drift part recover beta * dW.
        let dw = |p: &PathSample| -> Vec<f64> {
            p.values
                .windows(2)
                .enumerate()
                .map(|(k, w)| w[1] - w[0] - cfg.drift.eval(grid.time(k), w[0]) * grid.h)
                .collect()
        };
        let (da, db) = (dw(&a), dw(&b));
        let corr = correlation(&da, &db);
        assert!(corr.abs() < 3.0 / (n as f64).sqrt(), "corr = {corr}");
    }

    #[test]
    fn shared_driver_paths_synchronise() {
        let grid = PathGrid::new(0.0, 0.01, 20_000).unwrap();
        let (a, b) = simulate_pair(&ou(1.0, 1.0, 3.0), &ou(1.0, 1.0, -3.0), &grid, 2).unwrap();
        let gap0 = (a.values[0] - b.values[0]).abs();
        let gap_end = (a.values[grid.n] - b.values[grid.n]).abs();
        assert!(gap_end < 1e-12 * gap0.max(1.0), "gap {gap_end}");
        let late = 10_000..=grid.n;
        let corr = correlation(&a.values[late.clone()], &b.values[late]);
        assert!(corr > 0.999_999);
    }

    #[test]
    fn running_integral_of_constant_is_exact() {
        let grid = PathGrid::new(0.0, 0.1, 50).unwrap();
        let path = PathSample::constant(grid, 2.5);
        let integral = path.running_integral();
        for (k, v) in integral.iter().enumerate() {
            assert!((v - 2.5 * grid.time(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn steps_per_period_requires_commensurate_step() {
        assert_eq!(steps_per_period(1.0, 1e-3).unwrap(), 1000);
        assert!(steps_per_period(1.0, 0.0003).is_err());
        assert!(steps_per_period(1.0, 2.0).is_err());
    }

    #[test]
    fn source_rejects_mismatched_periods() {
        let mut c2 = ou(1.0, 1.0, 0.0);
        c2.drift.tau = 2.0;
        let src = NoiseSource { channel1: ou(1.0, 1.0, 0.0), channel2: c2, h: 1e-3 };
        assert!(matches!(src.validate(), Err(Error::Config(_))));
    }

    pub(crate) fn correlation(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let ma = a.iter().sum::<f64>() / n;
        let mb = b.iter().sum::<f64>() / n;
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        cov / (va * vb).sqrt()
    }
}

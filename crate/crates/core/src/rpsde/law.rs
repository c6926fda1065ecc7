//! Empirical check that the law of the noise repeats with the period.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{NoiseSource, PathGrid, COMMENSURATE_TOL};
use crate::error::{Error, Result};

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value `sqrt(-ln(alpha/2) (n + m) / (2 n m))`.
pub fn ks_critical_value(n: usize, m: usize, alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    (-(alpha / 2.0).ln() * (n + m) / (2.0 * n * m)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub statistic: f64,
    pub critical_value: f64,
    pub n: usize,
    pub passed: bool,
}

impl KsReport {
    fn new(a: &[f64], b: &[f64]) -> Self {
        let statistic = ks_two_sample(a, b);
        let critical_value = ks_critical_value(a.len(), b.len(), 0.05);
        Self { statistic, critical_value, n: a.len(), passed: statistic < critical_value }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LawPeriodicityReport {
    pub s: f64,
    pub lag: f64,
    pub channel1: KsReport,
    pub channel2: KsReport,
}

impl LawPeriodicityReport {
    pub fn passed(&self) -> bool {
        self.channel1.passed && self.channel2.passed
    }
}

fn node_index(t: f64, h: f64) -> Result<usize> {
    let r = t / h;
    let k = r.round();
    if k < 0.0 || (r - k).abs() > COMMENSURATE_TOL * r.max(1.0) {
        return Err(Error::config(format!("time {t} is not on the grid with step {h}")));
    }
    Ok(k as usize)
}

/// Compares the ensemble law of each channel at `s` and at `s + lag` with a
/// two-sample KS test at the 5% level. Each seed contributes one value to each
/// sample.
pub fn law_periodicity_check(source: &NoiseSource, seeds: &[u64], s: f64, lag: f64) -> Result<LawPeriodicityReport> {
    source.validate()?;
    if seeds.len() < 2 {
        return Err(Error::config(format!("need at least 2 ensemble members, got {}", seeds.len())));
    }
    if !(s >= 0.0 && lag >= 0.0) {
        return Err(Error::config("s and lag must be non-negative"));
    }
    let i0 = node_index(s, source.h)?;
    let i1 = node_index(s + lag, source.h)?;
    let grid = PathGrid::new(0.0, source.h, i1.max(1))?;

    let values: Vec<[f64; 4]> = seeds
        .par_iter()
        .map(|&seed| {
            let (a, b) = source.simulate(&grid, seed)?;
            Ok([a.values[i0], a.values[i1], b.values[i0], b.values[i1]])
        })
        .collect::<Result<_>>()?;
    let column = |c: usize| values.iter().map(|v| v[c]).collect::<Vec<_>>();

    Ok(LawPeriodicityReport {
        s,
        lag,
        channel1: KsReport::new(&column(0), &column(1)),
        channel2: KsReport::new(&column(2), &column(3)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rpsde::{Driver, NoiseChannelConfig, PeriodicDriftSpec};

    /// Brute-force statistic: evaluate both empirical CDFs at every sample point.
    fn ks_brute(a: &[f64], b: &[f64]) -> f64 {
        let cdf = |xs: &[f64], t: f64| xs.iter().filter(|&&x| x <= t).count() as f64 / xs.len() as f64;
        a.iter().chain(b).map(|&t| (cdf(a, t) - cdf(b, t)).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn statistic_matches_brute_force_with_ties() {
        let a = [0.1, 0.5, 0.5, 0.9, 1.3, 2.0, 2.0];
        let b = [0.5, 0.7, 1.1, 2.0, 3.0];
        assert!((ks_two_sample(&a, &b) - ks_brute(&a, &b)).abs() < 1e-15);
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        assert_eq!(ks_two_sample(&[0.0, 1.0], &[2.0, 3.0]), 1.0);
    }

    #[test]
    fn critical_value_standard_constant() {
        // c(0.05) = 1.3581 for the two-sample test.
        let c = ks_critical_value(1000, 1000, 0.05) / (2.0f64 / 1000.0).sqrt();
        assert!((c - 1.358_1).abs() < 1e-4);
    }

    fn source(amp: f64, alpha: f64, beta: f64) -> NoiseSource {
        let ch = |phase| NoiseChannelConfig {
            drift: PeriodicDriftSpec::new(1.0, alpha, amp, phase).unwrap(),
            beta,
            z0: 0.0,
            driver: Driver::Shared,
        };
        NoiseSource { channel1: ch(0.0), channel2: ch(1.0), h: 0.01 }
    }

    #[test]
    fn zero_lag_gives_zero_statistic() {
        let seeds: Vec<u64> = (0..50).collect();
        let r = law_periodicity_check(&source(1.0, 1.0, 1.0), &seeds, 3.0, 0.0).unwrap();
        assert_eq!(r.channel1.statistic, 0.0);
        assert_eq!(r.channel2.statistic, 0.0);
    }

    #[test]
    fn half_period_lag_detects_strong_forcing() {
        let seeds: Vec<u64> = (0..500).collect();
        // sin(2 pi s) = 1 at s = 10.25: forcing peak.
        let r = law_periodicity_check(&source(5.0, 2.0, 0.1), &seeds, 10.25, 0.5).unwrap();
        assert!(!r.channel1.passed, "{r:?}");
        assert!(r.channel1.statistic > r.channel1.critical_value);
    }

    #[test]
    fn rejects_tiny_ensembles_and_off_grid_times() {
        let src = source(1.0, 1.0, 1.0);
        assert!(law_periodicity_check(&src, &[1], 1.0, 1.0).is_err());
        assert!(law_periodicity_check(&src, &[1, 2], 1.0005, 1.0).is_err());
    }
}

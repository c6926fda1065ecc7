//! Monte Carlo checks of how close the exact and averaged systems are.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    averaged_hamiltonian, averaging_offset, effective_potential, effective_potential_d1, effective_potential_d2,
    exact_hamiltonian, instantaneous_lambda, lambda_from_stats, rk4_step, velocity_from_momentum, Convention,
    LambdaPoint, NoiseAmplitudes, PendulumParams, PhaseState, Trajectory,
};
use crate::error::{Error, Result};
use crate::rpsde::{EnsembleSpec, ErgodicStats, NoiseSource, PathSample};

/// `|H - Hbar|` at every node of an exact-flow trajectory.
pub fn hamiltonian_gap(
    traj: &Trajectory,
    pair: (&PathSample, &PathSample),
    lambda: LambdaPoint,
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
) -> Result<Vec<f64>> {
    if pair.0.grid != traj.grid || pair.1.grid != traj.grid {
        return Err(Error::config("trajectory and noise paths must share one grid"));
    }
    Ok(traj
        .states
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let h = exact_hamiltonian(s, pair.0.values[k], pair.1.values[k], params, amps);
            (h - averaged_hamiltonian(s, lambda, params)).abs()
        })
        .collect())
}

/// `sup_t |H - Hbar|` along the exact flow, without storing the trajectory.
fn sup_gap(
    initial: PhaseState,
    pair: (&PathSample, &PathSample),
    lambda: LambdaPoint,
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
) -> Result<f64> {
    let grid = pair.0.grid;
    let (x1, x2) = (&pair.0.values, &pair.1.values);
    let ab = |k: usize| (amps.sigma1 * x1[k], amps.sigma2 * x2[k]);
    let gap = |s: PhaseState, k: usize| {
        (exact_hamiltonian(s, x1[k], x2[k], params, amps) - averaged_hamiltonian(s, lambda, params)).abs()
    };
    let mut s = initial;
    let mut sup = gap(s, 0);
    for k in 0..grid.n {
        s = rk4_step(s, grid.h, ab(k), ab(k + 1), params);
        if !s.is_finite() {
            return Err(Error::BlowUp { index: k + 1, time: grid.time(k + 1) });
        }
        sup = sup.max(gap(s, k + 1));
    }
    Ok(sup)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceedanceReport {
    pub delta: f64,
    pub sigma_levels: Vec<NoiseAmplitudes>,
    pub lambdas: Vec<LambdaPoint>,
    /// Fraction of members with `sup_t |H - Hbar| > delta`, per level.
    pub probs: Vec<f64>,
    /// `1.96 sqrt(p (1 - p) / n)`.
    pub ci_half_widths: Vec<f64>,
    pub mean_sup_gap: Vec<f64>,
    pub ensemble_n: usize,
    pub horizon_periods: usize,
}

impl ExceedanceReport {
    /// Probabilities ordered by decreasing `max sigma` are non-increasing, up to
    /// at most one adjacent inversion whose 95% intervals overlap.
    pub fn decays_with_sigma(&self) -> bool {
        let mut idx: Vec<usize> = (0..self.probs.len()).collect();
        idx.sort_by(|&a, &b| self.sigma_levels[b].max().total_cmp(&self.sigma_levels[a].max()));
        let mut inversions = 0;
        for w in idx.windows(2) {
            let (hi, lo) = (w[0], w[1]);
            if self.probs[lo] > self.probs[hi] {
                inversions += 1;
                let overlap = self.probs[lo] - self.ci_half_widths[lo] <= self.probs[hi] + self.ci_half_widths[hi];
                if !overlap {
                    return false;
                }
            }
        }
        inversions <= 1
    }
}

/// Empirical `P(sup_t |H - Hbar| > delta)` for each noise level over a common
/// set of noise realisations. `Hbar` uses the `Derived` coefficients built
/// from `stats`.
#[allow(clippy::too_many_arguments)]
pub fn exceedance_probability(
    delta: f64,
    sigma_levels: &[NoiseAmplitudes],
    ensemble: &EnsembleSpec,
    source: &NoiseSource,
    stats: &ErgodicStats,
    initial: PhaseState,
    params: &PendulumParams,
) -> Result<ExceedanceReport> {
    if !(delta > 0.0) {
        return Err(Error::config(format!("delta must be > 0, got {delta}")));
    }
    if ensemble.ensemble_n < 100 {
        return Err(Error::config(format!("exceedance needs ensemble_n >= 100, got {}", ensemble.ensemble_n)));
    }
    for a in sigma_levels {
        a.validate()?;
    }
    params.validate()?;
    source.validate()?;
    let grid = source.grid(ensemble.horizon_periods)?;
    let lambdas: Vec<LambdaPoint> =
        sigma_levels.iter().map(|a| lambda_from_stats(a, stats, Convention::Derived)).collect();

    let sups: Vec<Vec<f64>> = ensemble
        .seeds()
        .into_par_iter()
        .map(|seed| {
            let (a, b) = source.simulate(&grid, seed)?;
            sigma_levels
                .iter()
                .zip(&lambdas)
                .map(|(amps, &lam)| sup_gap(initial, (&a, &b), lam, params, amps))
                .collect()
        })
        .collect::<Result<_>>()?;

    let n = sups.len() as f64;
    let mut probs = Vec::new();
    let mut ci = Vec::new();
    let mut mean_sup_gap = Vec::new();
    for level in 0..sigma_levels.len() {
        let hits = sups.iter().filter(|s| s[level] > delta).count() as f64;
        let p = hits / n;
        probs.push(p);
        ci.push(1.96 * (p * (1.0 - p) / n).sqrt());
        mean_sup_gap.push(sups.iter().map(|s| s[level]).sum::<f64>() / n);
    }
    Ok(ExceedanceReport {
        delta,
        sigma_levels: sigma_levels.to_vec(),
        lambdas,
        probs,
        ci_half_widths: ci,
        mean_sup_gap,
        ensemble_n: ensemble.ensemble_n,
        horizon_periods: ensemble.horizon_periods,
    })
}

/// One observation of the noise and the angular velocity along an exact orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapSample {
    pub xi1: f64,
    pub xi2: f64,
    pub theta_dot: f64,
}

/// Runs the exact flow for every ensemble member and records `(xi1, xi2,
/// theta_dot)` at the end of each of the last `per_member` periods.
pub fn collect_gap_samples(
    ensemble: &EnsembleSpec,
    source: &NoiseSource,
    initial: PhaseState,
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
    per_member: usize,
) -> Result<Vec<GapSample>> {
    if per_member == 0 || per_member > ensemble.horizon_periods {
        return Err(Error::config("per_member must be in 1..=horizon_periods"));
    }
    let spp = source.steps_per_period()?;
    let grid = source.grid(ensemble.horizon_periods)?;
    let per: Vec<Vec<GapSample>> = ensemble
        .seeds()
        .into_par_iter()
        .map(|seed| {
            let (a, b) = source.simulate(&grid, seed)?;
            let traj = crate::dynamics::exact_flow(initial, (&a, &b), params, amps)?;
            Ok((ensemble.horizon_periods - per_member + 1..=ensemble.horizon_periods)
                .map(|period| {
                    let k = period * spp;
                    let s = traj.states[k];
                    let (xi1, xi2) = (a.values[k], b.values[k]);
                    GapSample { xi1, xi2, theta_dot: velocity_from_momentum(s.theta, s.p, xi1, xi2, params, amps) }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct M1M2Decomposition {
    pub delta: f64,
    /// `M1 = |s1 xi1|^2 + 2 |s1 s2 xi1 xi2| + |s2 xi2|^2` per sample.
    pub m1_samples: Vec<f64>,
    /// `M2 = |s1^2 C1| / 2 + 2 |s1 s2 C12| + |s2^2 C2|`.
    pub m2: f64,
    /// `delta - |l theta_dot| - M2` per sample.
    pub delta_hat: Vec<f64>,
}

pub fn m1m2_decomposition(
    samples: &[GapSample],
    delta: f64,
    amps: &NoiseAmplitudes,
    stats: &ErgodicStats,
    params: &PendulumParams,
) -> M1M2Decomposition {
    let (s1, s2) = (amps.sigma1, amps.sigma2);
    let m2 = 0.5 * (s1 * s1 * stats.c1).abs() + 2.0 * (s1 * s2 * stats.c12).abs() + (s2 * s2 * stats.c2).abs();
    let m1_samples = samples
        .iter()
        .map(|g| {
            let (a, b) = ((s1 * g.xi1).abs(), (s2 * g.xi2).abs());
            a * a + 2.0 * a * b + b * b
        })
        .collect();
    let delta_hat = samples.iter().map(|g| delta - (params.l * g.theta_dot).abs() - m2).collect();
    M1M2Decomposition { delta, m1_samples, m2, delta_hat }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevReport {
    pub admissible_n: usize,
    /// Samples with `delta_hat <= 0`, where the inequality says nothing.
    pub excluded_n: usize,
    /// Fraction of admissible samples with `M1 > delta_hat`.
    pub empirical: f64,
    /// Sample mean of `M1^2 / delta_hat^2`; equals `E[M1^2] / delta_hat^2`
    /// when `delta_hat` is the same for every sample.
    pub bound: f64,
    pub passed: bool,
    pub no_admissible_samples: bool,
}

pub fn chebyshev_consistency(m: &M1M2Decomposition) -> ChebyshevReport {
    let admissible: Vec<(f64, f64)> =
        m.m1_samples.iter().zip(&m.delta_hat).filter(|(_, &d)| d > 0.0).map(|(&m1, &d)| (m1, d)).collect();
    let n = admissible.len();
    let excluded_n = m.m1_samples.len() - n;
    if n == 0 {
        return ChebyshevReport {
            admissible_n: 0,
            excluded_n,
            empirical: f64::NAN,
            bound: f64::NAN,
            passed: false,
            no_admissible_samples: true,
        };
    }
    let nf = n as f64;
    let empirical = admissible.iter().filter(|(m1, d)| m1 > d).count() as f64 / nf;
    let bound = admissible.iter().map(|(m1, d)| (m1 / d).powi(2)).sum::<f64>() / nf;
    ChebyshevReport {
        admissible_n: n,
        excluded_n,
        empirical,
        bound,
        passed: empirical <= bound * (1.0 + 3.0 / nf.sqrt()),
        no_admissible_samples: false,
    }
}

/// One empirical moment curve `m(t)` against the bound form
/// `factor (t C + initial_term)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSeries {
    pub name: String,
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Power of the noise amplitudes in front of the bound.
    pub factor: f64,
    /// Initial-value term of the bound (a power of `|z|`).
    pub initial_term: f64,
    /// Least-squares constant of `m / factor - initial_term ~ t C` over `t > 0`.
    pub ls_constant: f64,
    /// Smallest `C >= 0` for which the bound dominates every `t > 0`.
    pub dominating_constant: f64,
    /// `factor (t C_dom + initial_term) - m(t)`.
    pub residuals: Vec<f64>,
    /// Every residual is `>= -3` standard errors, up to rounding.
    pub dominated: bool,
}

impl MomentSeries {
    fn fit(name: &str, times: &[f64], values: Vec<f64>, std_errors: Vec<f64>, factor: f64, initial_term: f64) -> Self {
        let (mut ls_constant, mut dominating_constant) = (0.0, 0.0);
        if factor > 0.0 {
            let excess: Vec<(f64, f64)> = times
                .iter()
                .zip(&values)
                .filter(|(t, _)| **t > 0.0)
                .map(|(&t, &m)| (t, m / factor - initial_term))
                .collect();
            let stt: f64 = excess.iter().map(|(t, _)| t * t).sum();
            if stt > 0.0 {
                ls_constant = excess.iter().map(|(t, y)| t * y).sum::<f64>() / stt;
            }
            dominating_constant = excess.iter().map(|(t, y)| y / t).fold(0.0, f64::max);
        }
        let residuals: Vec<f64> =
            times.iter().zip(&values).map(|(&t, &m)| factor * (t * dominating_constant + initial_term) - m).collect();
        let dominated =
            residuals.iter().zip(&std_errors).zip(&values).all(|((r, se), m)| *r >= -3.0 * se - 1e-12 * m.abs());
        Self {
            name: name.to_string(),
            values,
            std_errors,
            factor,
            initial_term,
            ls_constant,
            dominating_constant,
            residuals,
            dominated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentBoundReport {
    pub times: Vec<f64>,
    pub ensemble_n: usize,
    /// `E|s1 xi1|^4`, `E|s2 xi2|^4`, `E(s1^2 s2^2 xi1^2 xi2^2)`,
    /// `E|s1^3 s2 xi1^3 xi2|`, `E|s1 s2^3 xi1 xi2^3|`.
    pub series: Vec<MomentSeries>,
}

impl MomentBoundReport {
    pub fn all_dominated(&self) -> bool {
        self.series.iter().all(|s| s.dominated)
    }
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// Empirical fourth-order moments of the scaled noise on `[0, tau]` and the
/// affine-in-`t` bounds they are compared against.
pub fn moment_growth(
    source: &NoiseSource,
    amps: &NoiseAmplitudes,
    t_samples: &[f64],
    ensemble_n: usize,
    master_seed: u64,
) -> Result<MomentBoundReport> {
    source.validate()?;
    amps.validate()?;
    if ensemble_n < 1000 {
        return Err(Error::config(format!("moment estimation needs at least 1000 members, got {ensemble_n}")));
    }
    let tau = source.tau();
    let spp = source.steps_per_period()?;
    let mut idx = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        if !(0.0..=tau * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::config(format!("moment sample time {t} outside [0, tau]")));
        }
        let k = (t / source.h).round();
        if (k * source.h - t).abs() > 1e-9 * tau {
            return Err(Error::config(format!("moment sample time {t} is not a grid time")));
        }
        idx.push(k as usize);
    }
    let grid = crate::rpsde::PathGrid::new(0.0, source.h, spp)?;
    let spec = EnsembleSpec { master_seed, ensemble_n, horizon_periods: 1 };
    let obs: Vec<Vec<(f64, f64)>> = spec
        .seeds()
        .into_par_iter()
        .map(|seed| {
            let (a, b) = source.simulate(&grid, seed)?;
            Ok(idx.iter().map(|&k| (a.values[k], b.values[k])).collect())
        })
        .collect::<Result<_>>()?;

    let (s1, s2) = (amps.sigma1, amps.sigma2);
    let (z1, z2) = (source.channel1.z0.abs(), source.channel2.z0.abs());
    type Moment = fn(f64, f64) -> f64;
    let defs: [(&str, Moment, f64, f64); 5] = [
        ("fourth_1", |a, _| a.powi(4), s1.powi(4), z1.powi(4)),
        ("fourth_2", |_, b| b.powi(4), s2.powi(4), z2.powi(4)),
        ("cross_2_2", |a, b| a * a * b * b, s1 * s1 * s2 * s2, (z1 * z2).powi(2)),
        ("cross_3_1", |a, b| (a.powi(3) * b).abs(), 3.0 * s1.powi(3) * s2, z1.powi(3) * z2),
        ("cross_1_3", |a, b| (a * b.powi(3)).abs(), 3.0 * s1 * s2.powi(3), z2.powi(3) * z1),
    ];
    let series = defs
        .iter()
        .map(|&(name, f, factor, initial)| {
            let (values, ses): (Vec<f64>, Vec<f64>) = (0..idx.len())
                .map(|j| {
                    let xs: Vec<f64> = obs.iter().map(|o| f(s1 * o[j].0, s2 * o[j].1)).collect();
                    mean_se(&xs)
                })
                .unzip();
            MomentSeries::fit(name, t_samples, values, ses, factor, initial)
        })
        .collect();
    Ok(MomentBoundReport { times: t_samples.to_vec(), ensemble_n, series })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationScaling {
    pub sigma_levels: Vec<NoiseAmplitudes>,
    /// Ensemble-and-grid mean of `|Ubar - U~|` per level.
    pub mean_abs_dev: Vec<f64>,
    pub mean_abs_dev_d1: Vec<f64>,
    pub mean_abs_dev_d2: Vec<f64>,
    /// Log-log slopes against `max sigma` for the three deviations.
    pub loglog_slope: [f64; 3],
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Mean deviation of the instantaneous potential from the averaged one (and of
/// their first two angle derivatives) across noise levels. Noise values are
/// taken at the end of the ensemble horizon; the averaged coefficients use the
/// ensemble moments of those same values, so `Ubar` is the ensemble mean of
/// `U~` (plus the retained constant under `Derived`).
pub fn potential_deviation(
    theta_grid: &[f64],
    sigma_levels: &[NoiseAmplitudes],
    ensemble: &EnsembleSpec,
    source: &NoiseSource,
    convention: Convention,
    params: &PendulumParams,
) -> Result<DeviationScaling> {
    let positive = sigma_levels.iter().filter(|a| a.max() > 0.0).count();
    if positive < 3 {
        return Err(Error::config(format!("slope needs at least 3 nonzero noise levels, got {positive}")));
    }
    if theta_grid.is_empty() {
        return Err(Error::config("theta grid is empty"));
    }
    source.validate()?;
    let grid = source.grid(ensemble.horizon_periods.max(1))?;
    let xi: Vec<(f64, f64)> = ensemble
        .seeds()
        .into_par_iter()
        .map(|seed| {
            let (a, b) = source.simulate(&grid, seed)?;
            Ok((a.values[grid.n], b.values[grid.n]))
        })
        .collect::<Result<_>>()?;
    let n = xi.len() as f64;
    let stats = ErgodicStats::exact(
        xi.iter().map(|v| v.0 * v.0).sum::<f64>() / n,
        xi.iter().map(|v| v.1 * v.1).sum::<f64>() / n,
        xi.iter().map(|v| v.0 * v.1).sum::<f64>() / n,
    );

    let mut out = DeviationScaling {
        sigma_levels: sigma_levels.to_vec(),
        mean_abs_dev: Vec::new(),
        mean_abs_dev_d1: Vec::new(),
        mean_abs_dev_d2: Vec::new(),
        loglog_slope: [f64::NAN; 3],
    };
    let cells = n * theta_grid.len() as f64;
    for amps in sigma_levels {
        amps.validate()?;
        let lam = lambda_from_stats(amps, &stats, convention);
        let offset = match convention {
            Convention::Derived => averaging_offset(amps, &stats),
            Convention::Paper => 0.0,
        };
        let (mut d0, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &(x1, x2) in &xi {
            let inst = instantaneous_lambda(amps.sigma1 * x1, amps.sigma2 * x2, convention);
            let inst_offset = match convention {
                Convention::Derived => 0.25 * ((amps.sigma1 * x1).powi(2) + (amps.sigma2 * x2).powi(2)),
                Convention::Paper => 0.0,
            };
            for &th in theta_grid {
                d0 += (effective_potential(th, lam, params) + offset
                    - effective_potential(th, inst, params)
                    - inst_offset)
                    .abs();
                d1 += (effective_potential_d1(th, lam, params) - effective_potential_d1(th, inst, params)).abs();
                d2 += (effective_potential_d2(th, lam, params) - effective_potential_d2(th, inst, params)).abs();
            }
        }
        out.mean_abs_dev.push(d0 / cells);
        out.mean_abs_dev_d1.push(d1 / cells);
        out.mean_abs_dev_d2.push(d2 / cells);
    }
    let xs: Vec<f64> = sigma_levels.iter().map(|a| a.max()).collect();
    out.loglog_slope = [
        loglog_slope(&xs, &out.mean_abs_dev),
        loglog_slope(&xs, &out.mean_abs_dev_d1),
        loglog_slope(&xs, &out.mean_abs_dev_d2),
    ];
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_constant_samples() {
        let above = M1M2Decomposition { delta: 1.0, m1_samples: vec![0.5; 10], m2: 0.0, delta_hat: vec![0.8; 10] };
        let r = chebyshev_consistency(&above);
        assert_eq!(r.empirical, 0.0);
        assert!(r.passed);

        let half = M1M2Decomposition { delta: 1.0, m1_samples: vec![0.5; 10], m2: 0.0, delta_hat: vec![0.25; 10] };
        let r = chebyshev_consistency(&half);
        assert_eq!(r.empirical, 1.0);
        assert!((r.bound - 4.0).abs() < 1e-12);
        assert!(r.passed);
    }

    #[test]
    fn chebyshev_without_admissible_samples_flags() {
        let m = M1M2Decomposition { delta: 0.1, m1_samples: vec![0.5; 3], m2: 0.2, delta_hat: vec![-0.1; 3] };
        let r = chebyshev_consistency(&m);
        assert!(r.no_admissible_samples);
        assert_eq!(r.excluded_n, 3);
    }

    #[test]
    fn decomposition_formulas() {
        let stats = ErgodicStats::exact(2.0, 3.0, -1.0);
        let amps = NoiseAmplitudes::new(0.5, 0.2).unwrap();
        let samples = [GapSample { xi1: 1.0, xi2: -2.0, theta_dot: 0.3 }];
        let params = PendulumParams::new(2.0, 1.0).unwrap();
        let m = m1m2_decomposition(&samples, 1.0, &amps, &stats, &params);
        // M1 = (0.5 + 0.4)^2, M2 = 0.25 + 0.2 + 0.12.
        assert!((m.m1_samples[0] - 0.81).abs() < 1e-15);
        assert!((m.m2 - 0.57).abs() < 1e-15);
        assert!((m.delta_hat[0] - (1.0 - 0.6 - 0.57)).abs() < 1e-15);
    }

    #[test]
    fn slope_needs_three_levels() {
        let src = NoiseSource::default();
        let ens = EnsembleSpec { master_seed: 1, ensemble_n: 10, horizon_periods: 1 };
        let err = potential_deviation(
            &[0.0, 1.0],
            &[NoiseAmplitudes::uniform(0.1)],
            &ens,
            &src,
            Convention::Derived,
            &PendulumParams::default(),
        );
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn loglog_slope_of_power_law() {
        let xs = [0.2, 0.1, 0.05];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(2)).collect();
        assert!((loglog_slope(&xs, &ys) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn decay_check_tolerates_one_overlapping_inversion() {
        let mk = |probs: Vec<f64>, ci: Vec<f64>| ExceedanceReport {
            delta: 0.1,
            sigma_levels: [0.4, 0.2, 0.1].iter().map(|&s| NoiseAmplitudes::uniform(s)).collect(),
            lambdas: vec![LambdaPoint::ZERO; 3],
            probs,
            ci_half_widths: ci,
            mean_sup_gap: vec![0.0; 3],
            ensemble_n: 100,
            horizon_periods: 1,
        };
        assert!(mk(vec![0.9, 0.5, 0.1], vec![0.01; 3]).decays_with_sigma());
        assert!(mk(vec![0.9, 0.5, 0.52], vec![0.02; 3]).decays_with_sigma());
        assert!(!mk(vec![0.9, 0.5, 0.7], vec![0.02; 3]).decays_with_sigma());
    }
}

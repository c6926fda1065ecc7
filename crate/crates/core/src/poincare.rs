//! Stroboscopic sections of the exact flow at multiples of the noise period.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bifurcation::{equilibria, Equilibrium, EquilibriumKind};
use crate::dynamics::{
    averaged_hamiltonian, effective_potential, exact_flow_strobed, lambda_from_stats, Convention, LambdaPoint,
    NoiseAmplitudes, PendulumParams, PhaseState, Trajectory,
};
use crate::error::{Error, Result};
use crate::rpsde::{EnsembleSpec, ErgodicStats, NoiseSource};

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StroboscopicSection {
    pub tau: f64,
    pub seed: u64,
    pub source_id: usize,
    pub times: Vec<f64>,
    /// Section states with the raw (unwrapped) angle.
    pub states: Vec<PhaseState>,
}

impl StroboscopicSection {
    pub fn with_source(mut self, seed: u64, source_id: usize) -> Self {
        self.seed = seed;
        self.source_id = source_id;
        self
    }

    /// Section points with `theta` wrapped into `(-pi, pi]`.
    pub fn wrapped(&self) -> Vec<PhaseState> {
        self.states.iter().map(|s| PhaseState::new(wrap_angle(s.theta), s.p)).collect()
    }
}

/// Samples a trajectory at `t0 + n tau`. The step must divide `tau`.
pub fn stroboscope(traj: &Trajectory, tau: f64) -> Result<StroboscopicSection> {
    let spp = traj.grid.steps_per(tau)?;
    let idx: Vec<usize> = (0..=traj.grid.n / spp).map(|n| n * spp).collect();
    Ok(StroboscopicSection {
        tau,
        seed: 0,
        source_id: 0,
        times: idx.iter().map(|&k| traj.grid.time(k)).collect(),
        states: idx.iter().map(|&k| traj.states[k]).collect(),
    })
}

/// Section of the exact flow for one noise realisation, without keeping the
/// full trajectory.
pub fn section_for_seed(
    source: &NoiseSource,
    periods: usize,
    seed: u64,
    initial: PhaseState,
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
) -> Result<StroboscopicSection> {
    let spp = source.steps_per_period()?;
    let grid = source.grid(periods)?;
    let (a, b) = source.simulate(&grid, seed)?;
    let states = exact_flow_strobed(initial, (&a, &b), params, amps, spp)?;
    Ok(StroboscopicSection {
        tau: source.tau(),
        seed,
        source_id: 0,
        times: (0..states.len()).map(|n| grid.time(n * spp)).collect(),
        states,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseBox {
    pub theta_min: f64,
    pub theta_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_theta: usize,
    pub n_p: usize,
}

impl PhaseBox {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 16 || self.n_p < 16 {
            return Err(Error::config("occupancy grid must be at least 16 x 16"));
        }
        if !(self.theta_max > self.theta_min && self.p_max > self.p_min) {
            return Err(Error::config("occupancy box has empty extent"));
        }
        Ok(())
    }

    fn cell(&self, s: PhaseState) -> Option<(usize, usize)> {
        let fi = (s.theta - self.theta_min) / (self.theta_max - self.theta_min);
        let fj = (s.p - self.p_min) / (self.p_max - self.p_min);
        if !(0.0..1.0).contains(&fi) || !(0.0..1.0).contains(&fj) {
            return None;
        }
        Some(((fi * self.n_theta as f64) as usize, (fj * self.n_p as f64) as usize))
    }

    fn centre(&self, i: usize, j: usize) -> PhaseState {
        PhaseState::new(
            self.theta_min + (i as f64 + 0.5) * (self.theta_max - self.theta_min) / self.n_theta as f64,
            self.p_min + (j as f64 + 0.5) * (self.p_max - self.p_min) / self.n_p as f64,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandOccupancy {
    pub hbar_min: f64,
    pub hbar_max: f64,
    pub cells: usize,
    pub visited: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyHistogram {
    pub bounds: PhaseBox,
    /// Hits per cell, `theta` index fastest.
    pub counts: Vec<u64>,
    pub outside: u64,
    pub visited_fraction: f64,
    /// Occupancy split by the averaged energy of each cell centre.
    pub bands: Vec<BandOccupancy>,
}

impl OccupancyHistogram {
    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[j * self.bounds.n_theta + i]
    }
}

/// Occupancy of wrapped section points on a `theta`-`p` grid, with per-band
/// visited fractions for the averaged-energy bands `[edges[k], edges[k+1])`.
pub fn plane_fill_density(
    sections: &[StroboscopicSection],
    bounds: &PhaseBox,
    lambda: LambdaPoint,
    params: &PendulumParams,
    band_edges: &[f64],
) -> Result<OccupancyHistogram> {
    bounds.validate()?;
    if band_edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::config("energy band edges must be strictly increasing"));
    }
    let mut counts = vec![0u64; bounds.n_theta * bounds.n_p];
    let mut outside = 0;
    for s in sections.iter().flat_map(|sec| sec.wrapped()) {
        match bounds.cell(s) {
            Some((i, j)) => counts[j * bounds.n_theta + i] += 1,
            None => outside += 1,
        }
    }
    let visited = counts.iter().filter(|&&c| c > 0).count();
    let mut bands: Vec<BandOccupancy> = band_edges
        .windows(2)
        .map(|w| BandOccupancy { hbar_min: w[0], hbar_max: w[1], cells: 0, visited: 0, fraction: 0.0 })
        .collect();
    for j in 0..bounds.n_p {
        for i in 0..bounds.n_theta {
            let e = averaged_hamiltonian(bounds.centre(i, j), lambda, params);
            if let Some(b) = bands.iter_mut().find(|b| e >= b.hbar_min && e < b.hbar_max) {
                b.cells += 1;
                if counts[j * bounds.n_theta + i] > 0 {
                    b.visited += 1;
                }
            }
        }
    }
    for b in &mut bands {
        b.fraction = if b.cells > 0 { b.visited as f64 / b.cells as f64 } else { 0.0 };
    }
    Ok(OccupancyHistogram {
        bounds: *bounds,
        counts,
        outside,
        visited_fraction: visited as f64 / (bounds.n_theta * bounds.n_p) as f64,
        bands,
    })
}

/// Distance on the cylinder: the angle difference is taken modulo `2 pi`.
pub fn cylinder_distance(a: PhaseState, b: PhaseState) -> f64 {
    wrap_angle(a.theta - b.theta).hypot(a.p - b.p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationLevel {
    pub amps: NoiseAmplitudes,
    pub lambda: LambdaPoint,
    /// The stable equilibrium of the averaged system tracked at this level.
    pub equilibrium_theta: f64,
    /// 95th percentile of the section-point distance to the equilibrium.
    pub radius: f64,
    pub max_distance: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub ensemble_n: usize,
    pub horizon_periods: usize,
    pub levels: Vec<ConcentrationLevel>,
}

impl ConcentrationReport {
    /// Radii ordered by decreasing `max sigma` are non-increasing.
    pub fn shrinks_with_sigma(&self) -> bool {
        let mut lv: Vec<&ConcentrationLevel> = self.levels.iter().collect();
        lv.sort_by(|a, b| b.amps.max().total_cmp(&a.amps.max()));
        lv.windows(2).all(|w| w[1].radius <= w[0].radius)
    }
}

fn percentile_95(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = ((0.95 * xs.len() as f64).ceil() as usize).clamp(1, xs.len());
    xs[k - 1]
}

fn nearest_stable(eqs: &[Equilibrium], theta: f64) -> Option<&Equilibrium> {
    eqs.iter()
        .filter(|e| e.kind == EquilibriumKind::Stable)
        .min_by(|a, b| wrap_angle(a.theta - theta).abs().total_cmp(&wrap_angle(b.theta - theta).abs()))
}

/// Launches the exact flow at the stable equilibrium of the averaged system
/// for each noise level (the one nearest `e0`) and measures how tightly the
/// section points stay around it.
#[allow(clippy::too_many_arguments)]
pub fn equilibrium_concentration(
    e0: &Equilibrium,
    sigma_levels: &[NoiseAmplitudes],
    ensemble: &EnsembleSpec,
    source: &NoiseSource,
    stats: &ErgodicStats,
    convention: Convention,
    params: &PendulumParams,
) -> Result<ConcentrationReport> {
    if e0.kind != EquilibriumKind::Stable {
        return Err(Error::Domain(format!("equilibrium at theta = {} is not stable", e0.theta)));
    }
    if ensemble.ensemble_n == 0 || ensemble.horizon_periods == 0 {
        return Err(Error::config("concentration needs a non-empty ensemble and horizon"));
    }
    source.validate()?;
    let seeds = ensemble.seeds();
    let mut levels = Vec::with_capacity(sigma_levels.len());
    for amps in sigma_levels {
        amps.validate()?;
        let lambda = lambda_from_stats(amps, stats, convention);
        let eqs = equilibria(lambda, params)?;
        let eq = nearest_stable(&eqs, e0.theta).ok_or_else(|| {
            Error::Domain(format!("no stable equilibrium at Lambda = ({}, {})", lambda.lambda1, lambda.lambda2))
        })?;
        let centre = PhaseState::new(eq.theta, 0.0);
        let dists: Vec<Vec<f64>> = seeds
            .par_iter()
            .map(|&seed| {
                let sec = section_for_seed(source, ensemble.horizon_periods, seed, centre, params, amps)?;
                Ok(sec.states[1..].iter().map(|&s| cylinder_distance(s, centre)).collect())
            })
            .collect::<Result<_>>()?;
        let all: Vec<f64> = dists.into_iter().flatten().collect();
        levels.push(ConcentrationLevel {
            amps: *amps,
            lambda,
            equilibrium_theta: eq.theta,
            radius: percentile_95(all.clone()),
            max_distance: all.iter().copied().fold(0.0, f64::max),
            points: all.len(),
        });
    }
    Ok(ConcentrationReport { ensemble_n: ensemble.ensemble_n, horizon_periods: ensemble.horizon_periods, levels })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingLevel {
    pub amps: NoiseAmplitudes,
    pub lambda: LambdaPoint,
    pub saddle_theta: f64,
    pub separatrix_energy: f64,
    /// RMS and maximum of `|Hbar - H_sep|` over all section points.
    pub spread_rms: f64,
    pub spread_max: f64,
    pub points: usize,
}

/// Launches `n_points` orbits on the outer separatrix of the averaged system
/// (the level of its highest saddle) and records how far the exact flow's
/// section points drift from that energy level. Point `j` uses ensemble seed
/// `j`.
#[allow(clippy::too_many_arguments)]
pub fn separatrix_splitting_probe(
    sigma_levels: &[NoiseAmplitudes],
    n_points: usize,
    ensemble: &EnsembleSpec,
    source: &NoiseSource,
    stats: &ErgodicStats,
    convention: Convention,
    params: &PendulumParams,
) -> Result<Vec<SplittingLevel>> {
    if n_points == 0 {
        return Err(Error::config("separatrix probe needs at least one point"));
    }
    source.validate()?;
    let spec = EnsembleSpec { ensemble_n: n_points, ..*ensemble };
    let seeds = spec.seeds();
    let mut out = Vec::with_capacity(sigma_levels.len());
    for amps in sigma_levels {
        amps.validate()?;
        let lambda = lambda_from_stats(amps, stats, convention);
        let saddle = equilibria(lambda, params)?
            .into_iter()
            .filter(|e| e.kind == EquilibriumKind::Unstable)
            .max_by(|a, b| a.potential.total_cmp(&b.potential))
            .ok_or_else(|| Error::Domain(format!("no saddle at Lambda = ({}, {})", lambda.lambda1, lambda.lambda2)))?;
        let h_sep = saddle.potential;
        let spreads: Vec<Vec<f64>> = seeds
            .par_iter()
            .enumerate()
            .map(|(j, &seed)| {
                let theta = saddle.theta + (j as f64 + 0.5) * TAU / n_points as f64;
                let mag = params.l * (2.0 * (h_sep - effective_potential(theta, lambda, params))).max(0.0).sqrt();
                let p = if j % 2 == 0 { mag } else { -mag };
                let sec =
                    section_for_seed(source, ensemble.horizon_periods, seed, PhaseState::new(theta, p), params, amps)?;
                Ok(sec.states[1..].iter().map(|&s| (averaged_hamiltonian(s, lambda, params) - h_sep).abs()).collect())
            })
            .collect::<Result<_>>()?;
        let all: Vec<f64> = spreads.into_iter().flatten().collect();
        let n = all.len().max(1) as f64;
        out.push(SplittingLevel {
            amps: *amps,
            lambda,
            saddle_theta: saddle.theta,
            separatrix_energy: h_sep,
            spread_rms: (all.iter().map(|d| d * d).sum::<f64>() / n).sqrt(),
            spread_max: all.iter().copied().fold(0.0, f64::max),
            points: all.len(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::exact_flow;
    use crate::rpsde::PathSample;

    #[test]
    fn wrap_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_angle(0.25), 0.25);
        for k in -5..5 {
            let th = 0.3 + k as f64 * TAU;
            let w = wrap_angle(th);
            assert!(w > -PI && w <= PI);
            assert!(((th - w) / TAU - k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn section_states_are_trajectory_states() {
        let src = NoiseSource { h: 0.01, ..NoiseSource::default() };
        let grid = src.grid(5).unwrap();
        let (a, b) = src.simulate(&grid, 3).unwrap();
        let amps = NoiseAmplitudes::uniform(0.3);
        let params = PendulumParams::default();
        let traj = exact_flow(PhaseState::new(1.0, 0.0), (&a, &b), &params, &amps).unwrap();
        let sec = stroboscope(&traj, 1.0).unwrap();
        assert_eq!(sec.states.len(), 6);
        for (n, s) in sec.states.iter().enumerate() {
            assert_eq!(*s, traj.states[n * 100]);
        }
        let fast = section_for_seed(&src, 5, 3, PhaseState::new(1.0, 0.0), &params, &amps).unwrap();
        assert_eq!(fast.states, sec.states);
    }

    #[test]
    fn stroboscope_rejects_incommensurate_step() {
        let grid = crate::rpsde::PathGrid::new(0.0, 0.3, 10).unwrap();
        let z = PathSample::constant(grid, 0.0);
        let traj =
            exact_flow(PhaseState::new(0.1, 0.0), (&z, &z), &PendulumParams::default(), &NoiseAmplitudes::default())
                .unwrap();
        assert!(matches!(stroboscope(&traj, 1.0), Err(Error::Config(_))));
    }

    #[test]
    fn histogram_counts_points() {
        let sec = StroboscopicSection {
            tau: 1.0,
            seed: 0,
            source_id: 0,
            times: vec![0.0, 1.0, 2.0],
            states: vec![PhaseState::new(0.01, 0.01), PhaseState::new(0.01 + TAU, 0.01), PhaseState::new(0.0, 10.0)],
        };
        let bx = PhaseBox { theta_min: -PI, theta_max: PI, p_min: -1.0, p_max: 1.0, n_theta: 16, n_p: 16 };
        let h =
            plane_fill_density(&[sec], &bx, LambdaPoint::ZERO, &PendulumParams::default(), &[-2.0, 0.0, 2.0]).unwrap();
        assert_eq!(h.count(8, 8), 2);
        assert_eq!(h.outside, 1);
        assert!((h.visited_fraction - 1.0 / 256.0).abs() < 1e-15);
        assert_eq!(h.bands[0].visited, 1);
        assert_eq!(h.bands[1].visited, 0);
    }

    #[test]
    fn percentile_picks_order_statistic() {
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(percentile_95(xs), 95.0);
        assert_eq!(percentile_95(vec![2.0]), 2.0);
    }
}

//! Exact and averaged pendulum Hamiltonians.
//!
//! With `a = sigma1 xi1`, `b = sigma2 xi2` and the coupling
//! `q(theta) = a cos(theta) + b sin(theta)` the exact Hamiltonian is
//!
//! ```text
//! H = p^2 / (2 l^2) - p q / l + q^2 / 2 - g l cos(theta)
//! ```
//!
//! (unit bob mass, pivot-height potential dropped). Averaging the noise gives
//! `Hbar = p^2 / (2 l^2) + Lambda1 cos(2 theta) + Lambda2 sin(2 theta) - g l cos(theta)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rpsde::{ErgodicStats, PathGrid, PathSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PendulumParams {
    pub l: f64,
    pub g: f64,
}

impl Default for PendulumParams {
    fn default() -> Self {
        Self { l: 1.0, g: 1.0 }
    }
}

impl PendulumParams {
    pub fn new(l: f64, g: f64) -> Result<Self> {
        let p = Self { l, g };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l.is_finite() && self.l > 0.0) {
            return Err(Error::config(format!("rod length l must be finite and > 0, got {}", self.l)));
        }
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(Error::config(format!("gravity g must be finite and > 0, got {}", self.g)));
        }
        Ok(())
    }

    pub fn gl(&self) -> f64 {
        self.g * self.l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseAmplitudes {
    pub sigma1: f64,
    pub sigma2: f64,
}

impl NoiseAmplitudes {
    pub fn new(sigma1: f64, sigma2: f64) -> Result<Self> {
        let a = Self { sigma1, sigma2 };
        a.validate()?;
        Ok(a)
    }

    pub fn uniform(sigma: f64) -> Self {
        Self { sigma1: sigma, sigma2: sigma }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma1.is_finite() && self.sigma1 >= 0.0 && self.sigma2.is_finite() && self.sigma2 >= 0.0) {
            return Err(Error::config(format!(
                "noise amplitudes must be finite and >= 0, got ({}, {})",
                self.sigma1, self.sigma2
            )));
        }
        Ok(())
    }

    pub fn max(&self) -> f64 {
        self.sigma1.max(self.sigma2)
    }

    pub fn is_zero(&self) -> bool {
        self.sigma1 == 0.0 && self.sigma2 == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseState {
    pub theta: f64,
    pub p: f64,
}

impl PhaseState {
    pub fn new(theta: f64, p: f64) -> Self {
        Self { theta, p }
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.p.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaPoint {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl LambdaPoint {
    pub const ZERO: LambdaPoint = LambdaPoint { lambda1: 0.0, lambda2: 0.0 };

    pub fn new(lambda1: f64, lambda2: f64) -> Self {
        Self { lambda1, lambda2 }
    }

    pub fn mirrored(&self) -> Self {
        Self { lambda1: self.lambda1, lambda2: -self.lambda2 }
    }
}

/// How the `cos(2 theta)` coefficient is formed from the squared noise.
///
/// `Derived` expands `a^2 cos^2 + b^2 sin^2` exactly, giving `(a^2 - b^2) / 4`.
/// `Paper` uses `(a^2 - b^2) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Derived,
    Paper,
}

impl Convention {
    fn cos2_factor(self) -> f64 {
        match self {
            Convention::Derived => 0.25,
            Convention::Paper => 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub grid: PathGrid,
    pub states: Vec<PhaseState>,
    pub energy: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn final_state(&self) -> PhaseState {
        *self.states.last().expect("trajectory is never empty")
    }
}

#[inline]
fn coupling(theta: f64, a: f64, b: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (a * c + b * s, -a * s + b * c)
}

#[inline]
fn scaled(xi1: f64, xi2: f64, amps: &NoiseAmplitudes) -> (f64, f64) {
    (amps.sigma1 * xi1, amps.sigma2 * xi2)
}

pub fn momentum_from_velocity(
    theta: f64,
    theta_dot: f64,
    xi1: f64,
    xi2: f64,
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
) -> f64 {
    let (a, b) = scaled(xi1, xi2, amps);
    let (q, _) = coupling(theta, a, b);
    params.l * params.l * theta_dot + params.l * q
}

pub fn velocity_from_momentum(
    theta: f64,
    p: f64,
    xi1: f64,
    xi2: f64,
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
) -> f64 {
    let (a, b) = scaled(xi1, xi2, amps);
    let (q, _) = coupling(theta, a, b);
    p / (params.l * params.l) - q / params.l
}

pub fn exact_hamiltonian(
    state: PhaseState,
    xi1: f64,
    xi2: f64,
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
) -> f64 {
    let (a, b) = scaled(xi1, xi2, amps);
    hamiltonian_ab(state, a, b, params)
}

#[inline]
fn hamiltonian_ab(state: PhaseState, a: f64, b: f64, params: &PendulumParams) -> f64 {
    let l = params.l;
    let (q, _) = coupling(state.theta, a, b);
    state.p * state.p / (2.0 * l * l) - state.p * q / l + 0.5 * q * q - params.gl() * state.theta.cos()
}

/// `(dH/dtheta, dH/dp)` in closed form.
pub fn hamiltonian_partials(
    state: PhaseState,
    xi1: f64,
    xi2: f64,
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
) -> (f64, f64) {
    let (a, b) = scaled(xi1, xi2, amps);
    partials_ab(state, a, b, params)
}

#[inline]
fn partials_ab(state: PhaseState, a: f64, b: f64, params: &PendulumParams) -> (f64, f64) {
    let l = params.l;
    let (s, c) = state.theta.sin_cos();
    let q = a * c + b * s;
    let dq = -a * s + b * c;
    let dh_dtheta = -state.p * dq / l + q * dq + params.gl() * s;
    let dh_dp = state.p / (l * l) - q / l;
    (dh_dtheta, dh_dp)
}

/// Hamilton's equations `(theta', p') = (dH/dp, -dH/dtheta)`.
#[inline]
fn exact_rhs(state: PhaseState, a: f64, b: f64, params: &PendulumParams) -> PhaseState {
    let (dth, dp) = partials_ab(state, a, b, params);
    PhaseState { theta: dp, p: -dth }
}

#[inline]
fn axpy(s: PhaseState, h: f64, d: PhaseState) -> PhaseState {
    PhaseState { theta: s.theta + h * d.theta, p: s.p + h * d.p }
}

/// One classical RK4 step with the scaled noise linearly interpolated across
/// the step: `(a0, b0)` at the left node, `(a1, b1)` at the right node.
#[inline]
pub(crate) fn rk4_step(
    s: PhaseState,
    h: f64,
    (a0, b0): (f64, f64),
    (a1, b1): (f64, f64),
    params: &PendulumParams,
) -> PhaseState {
    let (am, bm) = (0.5 * (a0 + a1), 0.5 * (b0 + b1));
    let k1 = exact_rhs(s, a0, b0, params);
    let k2 = exact_rhs(axpy(s, 0.5 * h, k1), am, bm, params);
    let k3 = exact_rhs(axpy(s, 0.5 * h, k2), am, bm, params);
    let k4 = exact_rhs(axpy(s, h, k3), a1, b1, params);
    PhaseState {
        theta: s.theta + h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta),
        p: s.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
    }
}

fn check_pair(pair: (&PathSample, &PathSample)) -> Result<PathGrid> {
    if pair.0.grid != pair.1.grid {
        return Err(Error::config("noise paths must share one grid"));
    }
    Ok(pair.0.grid)
}

/// Integrates the exact Hamiltonian system driven by the noise pair (treated
/// as a piecewise-linear signal) with fixed-step RK4 on the noise grid, and
/// records `H` at every node.
pub fn exact_flow(
    initial: PhaseState,
    pair: (&PathSample, &PathSample),
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
) -> Result<Trajectory> {
    let grid = check_pair(pair)?;
    let (x1, x2) = (&pair.0.values, &pair.1.values);
    let ab = |k: usize| (amps.sigma1 * x1[k], amps.sigma2 * x2[k]);
    let mut states = Vec::with_capacity(grid.len());
    let mut energy = Vec::with_capacity(grid.len());
    let mut s = initial;
    if !s.is_finite() {
        return Err(Error::BlowUp { index: 0, time: grid.t0 });
    }
    states.push(s);
    let (a, b) = ab(0);
    energy.push(hamiltonian_ab(s, a, b, params));
    for k in 0..grid.n {
        s = rk4_step(s, grid.h, ab(k), ab(k + 1), params);
        if !s.is_finite() {
            return Err(Error::BlowUp { index: k + 1, time: grid.time(k + 1) });
        }
        let (a, b) = ab(k + 1);
        states.push(s);
        energy.push(hamiltonian_ab(s, a, b, params));
    }
    Ok(Trajectory { grid, states, energy: Some(energy) })
}

/// Same integration as [`exact_flow`], keeping only every `every`-th state
/// (starting with the initial one).
pub(crate) fn exact_flow_strobed(
    initial: PhaseState,
    pair: (&PathSample, &PathSample),
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
    every: usize,
) -> Result<Vec<PhaseState>> {
    let grid = check_pair(pair)?;
    let (x1, x2) = (&pair.0.values, &pair.1.values);
    let ab = |k: usize| (amps.sigma1 * x1[k], amps.sigma2 * x2[k]);
    let mut s = initial;
    if !s.is_finite() {
        return Err(Error::BlowUp { index: 0, time: grid.t0 });
    }
    let mut out = Vec::with_capacity(grid.n / every.max(1) + 1);
    out.push(s);
    for k in 0..grid.n {
        s = rk4_step(s, grid.h, ab(k), ab(k + 1), params);
        if !s.is_finite() {
            return Err(Error::BlowUp { index: k + 1, time: grid.time(k + 1) });
        }
        if (k + 1) % every == 0 {
            out.push(s);
        }
    }
    Ok(out)
}

/// Noise-dependent part of the potential at one instant.
///
/// `Derived` keeps the constant `(a^2 + b^2) / 4`, so it equals
/// `q^2 / 2 - g l cos(theta)` exactly.
pub fn instantaneous_potential(
    theta: f64,
    xi1: f64,
    xi2: f64,
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
    convention: Convention,
) -> f64 {
    let (a, b) = scaled(xi1, xi2, amps);
    let lam = instantaneous_lambda(a, b, convention);
    let constant = match convention {
        Convention::Derived => 0.25 * (a * a + b * b),
        Convention::Paper => 0.0,
    };
    effective_potential(theta, lam, params) + constant
}

/// `(Lambda1, Lambda2)` built from one instant's scaled noise values.
pub(crate) fn instantaneous_lambda(a: f64, b: f64, convention: Convention) -> LambdaPoint {
    LambdaPoint { lambda1: convention.cos2_factor() * (a * a - b * b), lambda2: 0.5 * a * b }
}

/// `Ubar(theta) = Lambda1 cos 2theta + Lambda2 sin 2theta - g l cos theta`.
pub fn effective_potential(theta: f64, lambda: LambdaPoint, params: &PendulumParams) -> f64 {
    let (s2, c2) = (2.0 * theta).sin_cos();
    lambda.lambda1 * c2 + lambda.lambda2 * s2 - params.gl() * theta.cos()
}

pub fn effective_potential_d1(theta: f64, lambda: LambdaPoint, params: &PendulumParams) -> f64 {
    let (s2, c2) = (2.0 * theta).sin_cos();
    -2.0 * lambda.lambda1 * s2 + 2.0 * lambda.lambda2 * c2 + params.gl() * theta.sin()
}

pub fn effective_potential_d2(theta: f64, lambda: LambdaPoint, params: &PendulumParams) -> f64 {
    let (s2, c2) = (2.0 * theta).sin_cos();
    -4.0 * lambda.lambda1 * c2 - 4.0 * lambda.lambda2 * s2 + params.gl() * theta.cos()
}

pub fn averaged_hamiltonian(state: PhaseState, lambda: LambdaPoint, params: &PendulumParams) -> f64 {
    state.p * state.p / (2.0 * params.l * params.l) + effective_potential(state.theta, lambda, params)
}

pub fn lambda_from_stats(amps: &NoiseAmplitudes, stats: &ErgodicStats, convention: Convention) -> LambdaPoint {
    let (s1, s2) = (amps.sigma1, amps.sigma2);
    LambdaPoint {
        lambda1: convention.cos2_factor() * (s1 * s1 * stats.c1 - s2 * s2 * stats.c2),
        lambda2: 0.5 * s1 * s2 * stats.c12,
    }
}

/// Additive constant separating the noise average of `H` from `Hbar` under
/// the `Derived` convention: `(sigma1^2 C1 + sigma2^2 C2) / 4`.
pub fn averaging_offset(amps: &NoiseAmplitudes, stats: &ErgodicStats) -> f64 {
    0.25 * (amps.sigma1.powi(2) * stats.c1 + amps.sigma2.powi(2) * stats.c2)
}

/// Kick-drift-kick leapfrog for the averaged system, recording `Hbar`.
pub fn averaged_flow(
    initial: PhaseState,
    lambda: LambdaPoint,
    params: &PendulumParams,
    h: f64,
    n: usize,
) -> Result<Trajectory> {
    let grid = PathGrid::new(0.0, h, n)?;
    let inv_ml2 = 1.0 / (params.l * params.l);
    let mut s = initial;
    if !s.is_finite() {
        return Err(Error::BlowUp { index: 0, time: 0.0 });
    }
    let mut states = Vec::with_capacity(grid.len());
    let mut energy = Vec::with_capacity(grid.len());
    states.push(s);
    energy.push(averaged_hamiltonian(s, lambda, params));
    let mut force = -effective_potential_d1(s.theta, lambda, params);
    for k in 0..n {
        s.p += 0.5 * h * force;
        s.theta += h * s.p * inv_ml2;
        force = -effective_potential_d1(s.theta, lambda, params);
        s.p += 0.5 * h * force;
        if !s.is_finite() {
            return Err(Error::BlowUp { index: k + 1, time: grid.time(k + 1) });
        }
        states.push(s);
        energy.push(averaged_hamiltonian(s, lambda, params));
    }
    Ok(Trajectory { grid, states, energy: Some(energy) })
}

/// Bob position and velocity in the fixed frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BobEmbedding {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub vx: Vec<f64>,
    pub vy: Vec<f64>,
}

/// `w = (l sin theta, -l cos theta) + (sigma1 int xi1, sigma2 int xi2)` with
/// trapezoidal integrals, and `v = l theta_dot (cos theta, sin theta) + (sigma1 xi1, sigma2 xi2)`.
pub fn bob_embedding(
    traj: &Trajectory,
    pair: (&PathSample, &PathSample),
    params: &PendulumParams,
    amps: &NoiseAmplitudes,
) -> Result<BobEmbedding> {
    let grid = check_pair(pair)?;
    if grid != traj.grid {
        return Err(Error::config("trajectory and noise paths must share one grid"));
    }
    let (int1, int2) = (pair.0.running_integral(), pair.1.running_integral());
    let n = traj.states.len();
    let mut out = BobEmbedding {
        t: Vec::with_capacity(n),
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        vx: Vec::with_capacity(n),
        vy: Vec::with_capacity(n),
    };
    let l = params.l;
    for (k, st) in traj.states.iter().enumerate() {
        let (xi1, xi2) = (pair.0.values[k], pair.1.values[k]);
        let (s, c) = st.theta.sin_cos();
        let theta_dot = velocity_from_momentum(st.theta, st.p, xi1, xi2, params, amps);
        out.t.push(grid.time(k));
        out.x.push(l * s + amps.sigma1 * int1[k]);
        out.y.push(-l * c + amps.sigma2 * int2[k]);
        out.vx.push(l * theta_dot * c + amps.sigma1 * xi1);
        out.vy.push(l * theta_dot * s + amps.sigma2 * xi2);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const UNIT: PendulumParams = PendulumParams { l: 1.0, g: 1.0 };
    const QUIET: NoiseAmplitudes = NoiseAmplitudes { sigma1: 0.0, sigma2: 0.0 };

    #[test]
    fn momentum_examples() {
        assert_eq!(momentum_from_velocity(0.3, 0.0, 0.0, 0.0, &UNIT, &NoiseAmplitudes::uniform(0.2)), 0.0);
        assert_eq!(momentum_from_velocity(0.3, 1.0, 0.0, 0.0, &UNIT, &NoiseAmplitudes::uniform(0.2)), 1.0);
        let amps = NoiseAmplitudes::new(0.3, 1.0).unwrap();
        assert!((momentum_from_velocity(0.0, 0.0, 1.0, 7.0, &UNIT, &amps) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn velocity_examples() {
        assert_eq!(velocity_from_momentum(0.4, 0.0, 0.0, 0.0, &UNIT, &QUIET), 0.0);
        let long = PendulumParams::new(2.0, 1.0).unwrap();
        assert_eq!(velocity_from_momentum(0.4, 4.0, 0.0, 0.0, &long, &QUIET), 1.0);
    }

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(exact_hamiltonian(PhaseState::new(0.0, 0.0), 0.0, 0.0, &UNIT, &QUIET), -1.0);
        let amps = NoiseAmplitudes::new(0.2, 0.5).unwrap();
        let h = exact_hamiltonian(PhaseState::new(0.0, 1.0), 1.0, 3.7, &UNIT, &amps);
        assert!((h - -0.68).abs() < 1e-15);
        for &(th, p) in &[(0.3, -1.2), (2.0, 0.5), (-4.0, 3.0)] {
            let h = exact_hamiltonian(PhaseState::new(th, p), 1.3, -0.4, &UNIT, &QUIET);
            assert!((h - (p * p / 2.0 - th.cos())).abs() < 1e-15);
        }
    }

    #[test]
    fn partials_quiet_and_symmetric_cases() {
        let (dth, dp) = hamiltonian_partials(PhaseState::new(0.7, 1.5), 2.0, 3.0, &UNIT, &QUIET);
        assert_eq!((dth, dp), (0.7f64.sin(), 1.5));
        let amps = NoiseAmplitudes::new(0.4, 0.0).unwrap();
        let (dth, _) = hamiltonian_partials(PhaseState::new(0.0, 0.0), 1.0, 0.0, &UNIT, &amps);
        assert_eq!(dth, 0.0);
    }

    #[test]
    fn potentials_reduce_to_gravity_without_noise() {
        for &th in &[0.0, 0.4, 2.5] {
            for conv in [Convention::Derived, Convention::Paper] {
                let u = instantaneous_potential(th, 1.0, -2.0, &UNIT, &QUIET, conv);
                assert!((u + th.cos()).abs() < 1e-15);
            }
            assert!((effective_potential(th, LambdaPoint::ZERO, &UNIT) + th.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn lambda_conventions() {
        let stats = ErgodicStats::exact(1.0, 1.0, 0.0);
        let amps = NoiseAmplitudes::new(0.2, 0.0).unwrap();
        let d = lambda_from_stats(&amps, &stats, Convention::Derived);
        let p = lambda_from_stats(&amps, &stats, Convention::Paper);
        assert!((d.lambda1 - 0.01).abs() < 1e-15);
        assert!((p.lambda1 - 0.02).abs() < 1e-15);
        assert_eq!(d.lambda2, 0.0);
        let sym =
            lambda_from_stats(&NoiseAmplitudes::uniform(0.3), &ErgodicStats::exact(0.8, 0.8, 0.5), Convention::Paper);
        assert_eq!(sym.lambda1, 0.0);
    }

    #[test]
    fn averaged_hamiltonian_origin() {
        let lam = LambdaPoint::new(0.37, -0.2);
        assert!((averaged_hamiltonian(PhaseState::default(), lam, &UNIT) - (0.37 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn upside_down_rest_is_fixed_without_noise() {
        let grid = PathGrid::new(0.0, 1e-3, 5000).unwrap();
        let z = PathSample::constant(grid, 0.0);
        let traj = exact_flow(PhaseState::new(PI, 0.0), (&z, &z), &UNIT, &QUIET).unwrap();
        // sin(pi) is not exactly zero in floating point, so "fixed" means to rounding.
        let end = traj.final_state();
        assert!((end.theta - PI).abs() < 1e-9 && end.p.abs() < 1e-9, "{end:?}");
    }

    #[test]
    fn averaged_flow_rests_at_stable_equilibrium() {
        let traj = averaged_flow(PhaseState::new(0.0, 0.0), LambdaPoint::ZERO, &UNIT, 1e-2, 1000).unwrap();
        assert!(traj.states.iter().all(|s| s.theta == 0.0 && s.p == 0.0));
    }

    #[test]
    fn embedding_hangs_straight_down() {
        let grid = PathGrid::new(0.0, 0.1, 3).unwrap();
        let z = PathSample::constant(grid, 1.0);
        let traj = Trajectory { grid, states: vec![PhaseState::default(); 4], energy: None };
        let emb = bob_embedding(&traj, (&z, &z), &UNIT, &QUIET).unwrap();
        assert!(emb.x.iter().all(|&x| x == 0.0) && emb.y.iter().all(|&y| y == -1.0));
        let traj = Trajectory { grid, states: vec![PhaseState::new(FRAC_PI_2, 0.0); 4], energy: None };
        let emb = bob_embedding(&traj, (&z, &z), &UNIT, &QUIET).unwrap();
        assert!((emb.x[2] - 1.0).abs() < 1e-15 && emb.y[2].abs() < 1e-15);
    }

    #[test]
    fn embedding_adds_pivot_displacement() {
        let grid = PathGrid::new(0.0, 0.5, 4).unwrap();
        let c = PathSample::constant(grid, 0.8);
        let traj = Trajectory { grid, states: vec![PhaseState::default(); 5], energy: None };
        let amps = NoiseAmplitudes::new(0.5, 0.25).unwrap();
        let emb = bob_embedding(&traj, (&c, &c), &UNIT, &amps).unwrap();
        assert!((emb.x[4] - 0.5 * 0.8 * 2.0).abs() < 1e-15);
        assert!((emb.y[4] - (-1.0 + 0.25 * 0.8 * 2.0)).abs() < 1e-15);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let g1 = PathGrid::new(0.0, 0.1, 3).unwrap();
        let g2 = PathGrid::new(0.0, 0.1, 4).unwrap();
        let (a, b) = (PathSample::constant(g1, 0.0), PathSample::constant(g2, 0.0));
        assert!(exact_flow(PhaseState::default(), (&a, &b), &UNIT, &QUIET).is_err());
    }

    #[test]
    fn nonfinite_start_reports_blow_up() {
        let g = PathGrid::new(0.0, 0.1, 3).unwrap();
        let z = PathSample::constant(g, 0.0);
        let err = exact_flow(PhaseState::new(f64::NAN, 0.0), (&z, &z), &UNIT, &QUIET).unwrap_err();
        assert!(matches!(err, Error::BlowUp { index: 0, .. }));
    }
}

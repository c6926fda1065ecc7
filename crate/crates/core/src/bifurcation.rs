//! Equilibria of the effective potential and the bifurcation atlas in the
//! `(Lambda1, Lambda2)` plane.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    averaged_hamiltonian, effective_potential, effective_potential_d1, effective_potential_d2, instantaneous_lambda,
    Convention, LambdaPoint, NoiseAmplitudes, PendulumParams, PhaseState,
};
use crate::error::{Error, Result};
use crate::rpsde::PathSample;

pub const DEFAULT_GRID_N: usize = 4096;
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Two equilibria of the same kind closer than this in potential count as level.
pub const EQUAL_LEVEL_TOL: f64 = 1e-9;
/// Lower end of the ray `Lambda1 > 1/4, Lambda2 = 0` (unit `g l`).
pub const GAMMA2_MIN_LAMBDA1: f64 = 0.25;
pub const GAMMA2_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Stable,
    Unstable,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    /// Angle in `[0, 2 pi)`.
    pub theta: f64,
    pub kind: EquilibriumKind,
    pub potential: f64,
    pub second_derivative: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionLabel {
    /// Two equilibria.
    #[serde(rename = "Pi1")]
    Pi1,
    /// Four equilibria.
    #[serde(rename = "Pi2")]
    Pi2,
    #[serde(rename = "boundary")]
    Boundary,
}

impl RegionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::Pi1 => "Pi1",
            RegionLabel::Pi2 => "Pi2",
            RegionLabel::Boundary => "boundary",
        }
    }
}

/// `|Ubar''|` below this marks an equilibrium as degenerate.
pub fn degeneracy_tolerance(lambda: LambdaPoint, params: &PendulumParams) -> f64 {
    1e-9 * (lambda.lambda1.abs() + lambda.lambda2.abs() + params.gl()).max(1.0)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 || ((hi - lo) <= tol && fm.abs() <= tol) {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let (fl, fh) = (f(lo).abs(), f(hi).abs());
    if fl <= fh {
        lo
    } else {
        hi
    }
}

fn wrap_0_tau(theta: f64, tol: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if TAU - t < 10.0 * tol {
        0.0
    } else {
        t
    }
}

/// All critical points of `Ubar` on `[0, 2 pi)`.
///
/// `Ubar'` is sampled on `grid_n` uniform cells. Inside each cell `Ubar''` is
/// checked for a sign change; if there is one the cell is split at the
/// extremum of `Ubar'`, so two roots sharing a cell and tangential (double)
/// roots are both found. Monotone pieces with a sign change are bisected to
/// `tol`.
pub fn find_equilibria(
    lambda: LambdaPoint,
    params: &PendulumParams,
    grid_n: usize,
    tol: f64,
) -> Result<Vec<Equilibrium>> {
    if grid_n < 64 {
        return Err(Error::config(format!("grid_n must be >= 64, got {grid_n}")));
    }
    let d1 = |t: f64| effective_potential_d1(t, lambda, params);
    let d2 = |t: f64| effective_potential_d2(t, lambda, params);
    let degen = degeneracy_tolerance(lambda, params);
    let step = TAU / grid_n as f64;

    let mut roots: Vec<f64> = Vec::new();
    let scale = (lambda.lambda1.abs() + lambda.lambda2.abs() + params.gl()).max(1.0);
    let bracket = |lo: f64, hi: f64, flo: f64, fhi: f64, roots: &mut Vec<f64>| {
        if flo == 0.0 {
            roots.push(lo);
        } else if fhi == 0.0 {
            roots.push(hi);
        } else if (flo < 0.0) != (fhi < 0.0) {
            roots.push(bisect(d1, lo, hi, tol));
        }
    };
    for k in 0..grid_n {
        let (a, b) = (k as f64 * step, (k + 1) as f64 * step);
        let (fa, fb) = (d1(a), d1(b));
        let (ga, gb) = (d2(a), d2(b));
        if ga == 0.0 || gb == 0.0 || (ga < 0.0) != (gb < 0.0) {
            let e = if ga == 0.0 {
                a
            } else if gb == 0.0 {
                b
            } else {
                bisect(d2, a, b, tol)
            };
            let fe = d1(e);
            let before = roots.len();
            bracket(a, e, fa, fe, &mut roots);
            bracket(e, b, fe, fb, &mut roots);
            if roots.len() == before && fe.abs() <= tol * scale {
                roots.push(e);
            }
        } else {
            bracket(a, b, fa, fb, &mut roots);
        }
    }

    let mut thetas: Vec<f64> = roots.into_iter().map(|t| wrap_0_tau(t, tol)).collect();
    thetas.sort_by(f64::total_cmp);
    let mut unique: Vec<f64> = Vec::with_capacity(thetas.len());
    for t in thetas {
        match unique.last() {
            Some(&last) if t - last <= 10.0 * tol => {}
            _ => unique.push(t),
        }
    }
    if unique.len() > 1 && TAU - unique[unique.len() - 1] + unique[0] <= 10.0 * tol {
        unique.pop();
    }
    if unique.len() < 2 {
        return Err(Error::Internal(format!(
            "found {} equilibria at {lambda:?}; a periodic potential has at least two",
            unique.len()
        )));
    }

    Ok(unique
        .into_iter()
        .map(|theta| {
            let u2 = d2(theta);
            let kind = if u2.abs() < degen {
                EquilibriumKind::Degenerate
            } else if u2 > 0.0 {
                EquilibriumKind::Stable
            } else {
                EquilibriumKind::Unstable
            };
            Equilibrium { theta, kind, potential: effective_potential(theta, lambda, params), second_derivative: u2 }
        })
        .collect())
}

pub fn equilibria(lambda: LambdaPoint, params: &PendulumParams) -> Result<Vec<Equilibrium>> {
    find_equilibria(lambda, params, DEFAULT_GRID_N, DEFAULT_ROOT_TOL)
}

/// Pairs of same-kind equilibria whose potentials agree within
/// [`EQUAL_LEVEL_TOL`], as index pairs into `eqs`.
pub fn equal_level_pairs(eqs: &[Equilibrium], kind: EquilibriumKind) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..eqs.len() {
        for j in i + 1..eqs.len() {
            if eqs[i].kind == kind
                && eqs[j].kind == kind
                && (eqs[i].potential - eqs[j].potential).abs() <= EQUAL_LEVEL_TOL
            {
                out.push((i, j));
            }
        }
    }
    out
}

/// Region of the atlas containing `lambda`.
///
/// Two non-degenerate equilibria give `Pi1`; four give `Pi2` unless the two
/// potential wells are level, which is the `Lambda2 = 0, Lambda1 > 1/4` ray.
/// Everything else (degenerate points, odd counts) is `Boundary`.
pub fn classify_region(lambda: LambdaPoint, params: &PendulumParams) -> RegionLabel {
    let eqs = match equilibria(lambda, params) {
        Ok(e) => e,
        Err(_) => return RegionLabel::Boundary,
    };
    if eqs.iter().any(|e| e.kind == EquilibriumKind::Degenerate) {
        return RegionLabel::Boundary;
    }
    match eqs.len() {
        2 => RegionLabel::Pi1,
        4 if equal_level_pairs(&eqs, EquilibriumKind::Stable).is_empty() => RegionLabel::Pi2,
        _ => RegionLabel::Boundary,
    }
}

/// Point of the degenerate-equilibrium curve for `g l = 1` at parameter `theta`.
pub fn gamma1_point(theta: f64) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    [c.powi(3) / 2.0 - 0.75 * c, s.powi(3) / 2.0]
}

pub fn gamma1_curve(samples: usize) -> Result<Vec<[f64; 2]>> {
    if samples < 16 {
        return Err(Error::config(format!("gamma1 needs at least 16 samples, got {samples}")));
    }
    let step = TAU / samples as f64;
    Ok((0..samples).map(|k| gamma1_point(k as f64 * step)).collect())
}

/// The open ray `Lambda1 > min_lambda1, Lambda2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gamma2Ray {
    pub min_lambda1: f64,
}

impl Gamma2Ray {
    pub fn contains(&self, lambda: LambdaPoint) -> bool {
        lambda.lambda1 > self.min_lambda1 && lambda.lambda2.abs() <= GAMMA2_TOL
    }
}

pub fn gamma2_ray() -> Gamma2Ray {
    Gamma2Ray { min_lambda1: GAMMA2_MIN_LAMBDA1 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasCurves {
    pub gamma1: Vec<[f64; 2]>,
    pub gamma2: Gamma2Ray,
}

pub fn atlas(samples: usize) -> Result<AtlasCurves> {
    Ok(AtlasCurves { gamma1: gamma1_curve(samples)?, gamma2: gamma2_ray() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaBox {
    pub lambda1_min: f64,
    pub lambda1_max: f64,
    pub lambda2_min: f64,
    pub lambda2_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationScan {
    pub step: f64,
    pub n1: usize,
    pub n2: usize,
    /// Corner labels, row-major with `Lambda1` varying fastest:
    /// node `(i, j)` sits at `(lambda1_min + i step, lambda2_min + j step)`.
    pub nodes: Vec<(LambdaPoint, RegionLabel)>,
    /// Centres of cells whose four corners do not share one label.
    pub boundary_cells: Vec<LambdaPoint>,
}

pub fn numeric_bifurcation_scan(bx: &LambdaBox, step: f64, params: &PendulumParams) -> Result<BifurcationScan> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::config(format!("scan step must be > 0, got {step}")));
    }
    if !(bx.lambda1_max > bx.lambda1_min && bx.lambda2_max > bx.lambda2_min) {
        return Err(Error::config("scan box must have positive extent"));
    }
    let n1 = ((bx.lambda1_max - bx.lambda1_min) / step).round().max(1.0) as usize;
    let n2 = ((bx.lambda2_max - bx.lambda2_min) / step).round().max(1.0) as usize;
    let node =
        |i: usize, j: usize| LambdaPoint::new(bx.lambda1_min + i as f64 * step, bx.lambda2_min + j as f64 * step);

    let nodes: Vec<(LambdaPoint, RegionLabel)> = (0..(n1 + 1) * (n2 + 1))
        .into_par_iter()
        .map(|idx| {
            let lam = node(idx % (n1 + 1), idx / (n1 + 1));
            (lam, classify_region(lam, params))
        })
        .collect();
    let label = |i: usize, j: usize| nodes[j * (n1 + 1) + i].1;

    let mut boundary_cells = Vec::new();
    for j in 0..n2 {
        for i in 0..n1 {
            let corners = [label(i, j), label(i + 1, j), label(i, j + 1), label(i + 1, j + 1)];
            if corners.iter().any(|&c| c != corners[0]) {
                let lo = node(i, j);
                boundary_cells.push(LambdaPoint::new(lo.lambda1 + 0.5 * step, lo.lambda2 + 0.5 * step));
            }
        }
    }
    Ok(BifurcationScan { step, n1, n2, nodes, boundary_cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortraitGrid {
    pub theta_min: f64,
    pub theta_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_theta: usize,
    pub n_p: usize,
}

impl PortraitGrid {
    pub fn centred(p_extent: f64, n: usize) -> Self {
        Self { theta_min: -PI, theta_max: PI, p_min: -p_extent, p_max: p_extent, n_theta: n, n_p: n }
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let d = (hi - lo) / (n - 1) as f64;
        (0..n).map(|k| if k == n - 1 { hi } else { lo + k as f64 * d }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePortrait {
    pub lambda: LambdaPoint,
    pub thetas: Vec<f64>,
    pub ps: Vec<f64>,
    /// `Hbar` with `theta` varying fastest: `hbar[j * n_theta + i]` at `(thetas[i], ps[j])`.
    pub hbar: Vec<f64>,
    pub equilibria: Vec<Equilibrium>,
    /// `Hbar` at every unstable equilibrium (the separatrix energies), in equilibrium order.
    pub separatrix_levels: Vec<f64>,
}

impl PhasePortrait {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.hbar[j * self.thetas.len() + i]
    }
}

pub fn phase_portrait(lambda: LambdaPoint, params: &PendulumParams, grid: &PortraitGrid) -> Result<PhasePortrait> {
    if grid.n_theta < 32 || grid.n_p < 32 {
        return Err(Error::config(format!("portrait grid must be at least 32x32, got {}x{}", grid.n_theta, grid.n_p)));
    }
    if !(grid.theta_max > grid.theta_min && grid.p_max > grid.p_min) {
        return Err(Error::config("portrait ranges must have positive extent"));
    }
    let thetas = PortraitGrid::axis(grid.theta_min, grid.theta_max, grid.n_theta);
    let ps = PortraitGrid::axis(grid.p_min, grid.p_max, grid.n_p);
    let hbar = ps
        .iter()
        .flat_map(|&p| thetas.iter().map(move |&theta| averaged_hamiltonian(PhaseState::new(theta, p), lambda, params)))
        .collect();
    let equilibria = equilibria(lambda, params)?;
    let separatrix_levels =
        equilibria.iter().filter(|e| e.kind == EquilibriumKind::Unstable).map(|e| e.potential).collect();
    Ok(PhasePortrait { lambda, thetas, ps, hbar, equilibria, separatrix_levels })
}

/// Instantaneous coefficients `(Lambda1~(t), Lambda2~(t))` along a noise pair.
pub fn perturbed_lambda_trace(
    pair: (&PathSample, &PathSample),
    amps: &NoiseAmplitudes,
    convention: Convention,
) -> Result<Vec<(f64, LambdaPoint)>> {
    let (x, y) = pair;
    if x.grid != y.grid {
        return Err(Error::config("noise paths must share one grid"));
    }
    Ok(x.values
        .iter()
        .zip(&y.values)
        .enumerate()
        .map(|(k, (&a, &b))| (x.grid.time(k), instantaneous_lambda(amps.sigma1 * a, amps.sigma2 * b, convention)))
        .collect())
}

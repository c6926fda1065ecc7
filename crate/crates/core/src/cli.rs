//! Command-line front end: one JSON config in, one output directory out.
//!
//! Every run writes its files into `<out>/.staging` first and moves them into
//! `<out>` only when the command succeeds, together with a `manifest.json`
//! echoing the effective configuration.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bifurcation::{
    atlas, classify_region, equilibria, numeric_bifurcation_scan, phase_portrait, EquilibriumKind, LambdaBox,
    PortraitGrid,
};
use crate::dynamics::{
    bob_embedding, exact_flow, lambda_from_stats, Convention, LambdaPoint, NoiseAmplitudes, PendulumParams, PhaseState,
};
use crate::error::{Error, Result};
use crate::io;
use crate::poincare::{
    equilibrium_concentration, plane_fill_density, section_for_seed, separatrix_splitting_probe, stroboscope, PhaseBox,
};
use crate::rng::member_seed;
use crate::rpsde::{
    simulate_pair, Driver, EnsembleSpec, NoiseChannelConfig, NoiseSource, PathGrid, PeriodicDriftSpec, COMMENSURATE_TOL,
};
use crate::verification::{
    chebyshev_consistency, collect_gap_samples, exceedance_probability, hamiltonian_gap, m1m2_decomposition,
    moment_growth, potential_deviation,
};

#[derive(Debug, Parser)]
#[command(name = "stochpend", version, about = "Pendulum with a randomly vibrating suspension point")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration; omitted fields take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "stochpend-out")]
    pub out: PathBuf,
    /// Overrides `seeds.master_seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// One noise realisation: paths, exact trajectory, bob embedding.
    Simulate,
    /// Time-averaged noise statistics from one long run.
    Average,
    /// Analytic bifurcation curves and a numeric scan of the Lambda plane.
    Atlas,
    /// Averaged-energy grid and equilibria at one Lambda.
    Portrait,
    /// Monte Carlo checks of the averaging approximation.
    Verify,
    /// Stroboscopic sections, plane filling and concentration near equilibria.
    Poincare,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Average => "average",
            Command::Atlas => "atlas",
            Command::Portrait => "portrait",
            Command::Verify => "verify",
            Command::Poincare => "poincare",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub tau: f64,
    pub alpha: f64,
    pub beta: f64,
    pub forcing_amp: f64,
    #[serde(default)]
    pub forcing_phase: f64,
    #[serde(default)]
    pub z0: f64,
}

impl ChannelConfig {
    fn with_phase(forcing_phase: f64) -> Self {
        Self { tau: 1.0, alpha: 1.0, beta: 1.0, forcing_amp: 1.0, forcing_phase, z0: 0.0 }
    }

    fn to_channel(&self, driver: Driver) -> NoiseChannelConfig {
        NoiseChannelConfig {
            drift: PeriodicDriftSpec {
                tau: self.tau,
                alpha: self.alpha,
                forcing_amp: self.forcing_amp,
                forcing_phase: self.forcing_phase,
            },
            beta: self.beta,
            z0: self.z0,
            driver,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub channel1: ChannelConfig,
    pub channel2: ChannelConfig,
    pub driver: Driver,
    pub sigma1: f64,
    pub sigma2: f64,
    pub convention: Convention,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            channel1: ChannelConfig::with_phase(0.0),
            channel2: ChannelConfig::with_phase(FRAC_PI_2),
            driver: Driver::Shared,
            sigma1: 0.1,
            sigma2: 0.1,
            convention: Convention::Derived,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Integration step; `tau / 1000` when absent.
    pub h: Option<f64>,
    pub horizon_periods: usize,
    pub burn_in_periods: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { h: None, horizon_periods: 10, burn_in_periods: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeedConfig {
    pub master_seed: u64,
    pub ensemble_n: usize,
}

impl Default for SeedConfig {
    fn default() -> Self {
        Self { master_seed: 0, ensemble_n: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StatsConfig {
    pub avg_periods: usize,
    pub batches: usize,
}

impl Default for StatsConfig {
    fn default() -> Self {
        Self { avg_periods: 1000, batches: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AtlasConfig {
    pub samples: usize,
    pub scan_box: LambdaBox,
    pub step: f64,
}

impl Default for AtlasConfig {
    fn default() -> Self {
        Self {
            samples: 256,
            scan_box: LambdaBox { lambda1_min: -1.0, lambda1_max: 1.0, lambda2_min: 0.0, lambda2_max: 1.2 },
            step: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PortraitConfig {
    pub lambda: LambdaPoint,
    pub grid: PortraitGrid,
}

impl Default for PortraitConfig {
    fn default() -> Self {
        Self { lambda: LambdaPoint::new(0.5, 1.0), grid: PortraitGrid::centred(3.0, 201) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub delta: f64,
    pub sigma_levels: Vec<f64>,
    /// Fit the deviation-scaling slope; needs at least three nonzero levels.
    pub slope: bool,
    pub theta_samples: usize,
    pub chebyshev_sigma: f64,
    pub chebyshev_delta: f64,
    pub samples_per_member: usize,
    pub moment_times: Vec<f64>,
    /// Ensemble size for the one-period moment estimates (at least 1000).
    pub moment_ensemble_n: usize,
    /// Members whose `t,gap` series are written under `runs/`.
    pub gap_series_members: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            delta: 0.05,
            sigma_levels: vec![0.4, 0.2, 0.1, 0.05],
            slope: true,
            theta_samples: 64,
            chebyshev_sigma: 0.1,
            chebyshev_delta: 0.5,
            samples_per_member: 5,
            moment_times: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            moment_ensemble_n: 1000,
            gap_series_members: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PoincareConfig {
    pub sigma_levels: Vec<f64>,
    pub plane_box: PhaseBox,
    pub band_edges: Vec<f64>,
    pub splitting_points: usize,
    /// Members whose sections are written as CSV.
    pub export_sections: usize,
}

impl Default for PoincareConfig {
    fn default() -> Self {
        Self {
            sigma_levels: vec![0.0, 0.2, 0.1, 0.05],
            plane_box: PhaseBox { theta_min: -PI, theta_max: PI, p_min: -3.0, p_max: 3.0, n_theta: 64, n_p: 64 },
            band_edges: vec![-1.5, -0.5, 0.5, 1.5, 3.0],
            splitting_points: 16,
            export_sections: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub pendulum: PendulumParams,
    pub noise: NoiseConfig,
    pub grid: GridConfig,
    pub seeds: SeedConfig,
    pub initial: PhaseState,
    pub stats: StatsConfig,
    pub atlas: AtlasConfig,
    pub portrait: PortraitConfig,
    pub verify: VerifyConfig,
    /// Present: sections are requested, so `h` must divide `tau`.
    pub poincare: Option<PoincareConfig>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn tau(&self) -> f64 {
        self.noise.channel1.tau
    }

    pub fn h(&self) -> f64 {
        self.grid.h.unwrap_or(self.tau() / 1000.0)
    }

    pub fn amps(&self) -> NoiseAmplitudes {
        NoiseAmplitudes { sigma1: self.noise.sigma1, sigma2: self.noise.sigma2 }
    }

    pub fn source(&self) -> NoiseSource {
        NoiseSource {
            channel1: self.noise.channel1.to_channel(self.noise.driver),
            channel2: self.noise.channel2.to_channel(self.noise.driver),
            h: self.h(),
        }
    }

    pub fn ensemble(&self) -> EnsembleSpec {
        EnsembleSpec {
            master_seed: self.seeds.master_seed,
            ensemble_n: self.seeds.ensemble_n,
            horizon_periods: self.grid.horizon_periods,
        }
    }

    /// Fills in derived defaults so the manifest records the values in use.
    fn resolved(mut self) -> Self {
        self.grid.h = Some(self.h());
        self
    }

    /// Checks everything a command depends on before any work is done.
    pub fn validate(&self, command: Command) -> Result<()> {
        self.pendulum.validate()?;
        self.amps().validate()?;
        let src = self.source();
        src.channel1.validate()?;
        src.channel2.validate()?;
        let (t1, t2) = (src.channel1.drift.tau, src.channel2.drift.tau);
        if (t1 - t2).abs() > COMMENSURATE_TOL * t1.max(t2) {
            return Err(Error::Config(format!("both channels must share one period, got {t1} and {t2}")));
        }
        let h = self.h();
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Config(format!("step h must be finite and > 0, got {h}")));
        }
        let needs_sections = match command {
            Command::Simulate => self.poincare.is_some(),
            Command::Average | Command::Verify | Command::Poincare => true,
            Command::Atlas | Command::Portrait => false,
        };
        if needs_sections {
            src.steps_per_period().map_err(|e| match e {
                Error::Config(msg) => Error::Config(format!("{msg}; stroboscopic sampling needs h to divide tau")),
                other => other,
            })?;
        }
        if self.grid.horizon_periods == 0 {
            return Err(Error::config("grid.horizon_periods must be >= 1"));
        }
        for (name, levels) in [("verify", &self.verify.sigma_levels)]
            .into_iter()
            .chain(self.poincare.as_ref().map(|p| ("poincare", &p.sigma_levels)))
        {
            if levels.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
                return Err(Error::Config(format!("{name}.sigma_levels must be finite and >= 0")));
            }
        }
        match command {
            Command::Verify => {
                if self.verify.sigma_levels.is_empty() {
                    return Err(Error::config("verify.sigma_levels is empty"));
                }
                let nonzero = self.verify.sigma_levels.iter().filter(|s| **s > 0.0).count();
                if self.verify.slope && nonzero < 3 {
                    return Err(Error::Config(format!(
                        "the deviation slope needs at least 3 nonzero sigma levels, got {nonzero}"
                    )));
                }
                if self.verify.moment_ensemble_n < 1000 {
                    return Err(Error::Config(format!(
                        "verify.moment_ensemble_n must be at least 1000, got {}",
                        self.verify.moment_ensemble_n
                    )));
                }
            }
            Command::Poincare => {
                if self.poincare.as_ref().is_some_and(|p| p.sigma_levels.is_empty()) {
                    return Err(Error::config("poincare.sigma_levels is empty"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(summary) => {
            println!("{}", serde_json::to_string_pretty(&summary).unwrap_or_default());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command and returns its summary record.
pub fn execute(cli: &Cli) -> Result<serde_json::Value> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seeds.master_seed = seed;
    }
    let cfg = cfg.resolved();
    cfg.validate(cli.command)?;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            b = b.num_threads(n.max(1));
        }
        b.build().map_err(|e| Error::Internal(format!("thread pool: {e}")))?
    };
    pool.install(|| staged(&cli.out, cli.command, &cfg))
}

fn staged(out: &Path, command: Command, cfg: &RunConfig) -> Result<serde_json::Value> {
    std::fs::create_dir_all(out)?;
    let stage = out.join(".staging");
    if stage.exists() {
        std::fs::remove_dir_all(&stage)?;
    }
    std::fs::create_dir_all(&stage)?;
    let result = dispatch(command, cfg, &stage).and_then(|summary| {
        let mut files = Vec::new();
        list_files(&stage, &stage, &mut files)?;
        files.sort();
        io::write_json(
            &stage.join("manifest.json"),
            &json!({ "command": command.name(), "config": cfg, "files": files }),
        )?;
        Ok(summary)
    });
    match result {
        Ok(summary) => {
            for entry in std::fs::read_dir(&stage)? {
                let entry = entry?;
                let target = out.join(entry.file_name());
                if target.is_dir() {
                    std::fs::remove_dir_all(&target)?;
                } else if target.exists() {
                    std::fs::remove_file(&target)?;
                }
                std::fs::rename(entry.path(), target)?;
            }
            std::fs::remove_dir_all(&stage)?;
            Ok(summary)
        }
        Err(e) => {
            let _ = std::fs::remove_dir_all(&stage);
            Err(e)
        }
    }
}

fn list_files(root: &Path, dir: &Path, out: &mut Vec<String>) -> Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            list_files(root, &path, out)?;
        } else if let Ok(rel) = path.strip_prefix(root) {
            out.push(rel.to_string_lossy().replace('\\', "/"));
        }
    }
    Ok(())
}

fn dispatch(command: Command, cfg: &RunConfig, dir: &Path) -> Result<serde_json::Value> {
    match command {
        Command::Simulate => cmd_simulate(cfg, dir),
        Command::Average => cmd_average(cfg, dir),
        Command::Atlas => cmd_atlas(cfg, dir),
        Command::Portrait => cmd_portrait(cfg, dir),
        Command::Verify => cmd_verify(cfg, dir),
        Command::Poincare => cmd_poincare(cfg, dir),
    }
}

fn sigma_levels(levels: &[f64]) -> Vec<NoiseAmplitudes> {
    levels.iter().map(|&s| NoiseAmplitudes::uniform(s)).collect()
}

fn reference_stats(cfg: &RunConfig) -> Result<crate::rpsde::ErgodicStats> {
    cfg.source().reference_stats(
        cfg.seeds.master_seed,
        cfg.grid.burn_in_periods,
        cfg.stats.avg_periods,
        cfg.stats.batches,
    )
}

/// Files: `paths.csv`, `trajectory.csv`, `embedding.csv`, and `section.csv`
/// when a `poincare` block is present.
pub fn cmd_simulate(cfg: &RunConfig, dir: &Path) -> Result<serde_json::Value> {
    let src = cfg.source();
    let n = (cfg.grid.horizon_periods as f64 * cfg.tau() / src.h).round() as usize;
    let grid = PathGrid::new(0.0, src.h, n)?;
    let (a, b) = simulate_pair(&src.channel1, &src.channel2, &grid, cfg.seeds.master_seed)?;
    let amps = cfg.amps();
    let traj = exact_flow(cfg.initial, (&a, &b), &cfg.pendulum, &amps)?;
    let emb = bob_embedding(&traj, (&a, &b), &cfg.pendulum, &amps)?;
    io::write_paths_csv(&dir.join("paths.csv"), (&a, &b))?;
    io::write_trajectory_csv(&dir.join("trajectory.csv"), &traj, "H")?;
    io::write_embedding_csv(&dir.join("embedding.csv"), &emb)?;
    if cfg.poincare.is_some() {
        io::write_section_csv(&dir.join("section.csv"), &stroboscope(&traj, cfg.tau())?)?;
    }
    let energy = traj.energy.as_deref().unwrap_or(&[]);
    let e0 = energy.first().copied().unwrap_or(0.0);
    Ok(json!({
        "command": "simulate",
        "seed": cfg.seeds.master_seed,
        "steps": n,
        "final_state": traj.final_state(),
        "max_energy_change": energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max),
    }))
}

/// Files: `stats.json`.
pub fn cmd_average(cfg: &RunConfig, dir: &Path) -> Result<serde_json::Value> {
    let stats = reference_stats(cfg)?;
    io::write_json(&dir.join("stats.json"), &stats)?;
    Ok(serde_json::to_value(stats)?)
}

/// Files: `atlas.json`, `scan.csv` (node labels), `boundary_cells.csv`.
pub fn cmd_atlas(cfg: &RunConfig, dir: &Path) -> Result<serde_json::Value> {
    let curves = atlas(cfg.atlas.samples)?;
    let scan = numeric_bifurcation_scan(&cfg.atlas.scan_box, cfg.atlas.step, &cfg.pendulum)?;
    io::write_atlas_json(&dir.join("atlas.json"), &curves)?;
    io::write_scan_csv(&dir.join("scan.csv"), &scan)?;
    io::write_boundary_cells_csv(&dir.join("boundary_cells.csv"), &scan)?;
    Ok(json!({
        "command": "atlas",
        "gamma1_samples": curves.gamma1.len(),
        "scan_nodes": scan.nodes.len(),
        "boundary_cells": scan.boundary_cells.len(),
    }))
}

/// Files: `portrait.csv`, `portrait.json`.
pub fn cmd_portrait(cfg: &RunConfig, dir: &Path) -> Result<serde_json::Value> {
    let lambda = cfg.portrait.lambda;
    let portrait = phase_portrait(lambda, &cfg.pendulum, &cfg.portrait.grid)?;
    io::write_portrait(&dir.join("portrait.csv"), &dir.join("portrait.json"), &portrait)?;
    Ok(json!({
        "command": "portrait",
        "lambda": lambda,
        "region": classify_region(lambda, &cfg.pendulum).as_str(),
        "equilibria": portrait.equilibria.len(),
        "separatrix_levels": portrait.separatrix_levels,
    }))
}

/// Files: `stats.json`, `exceedance.json`, `chebyshev.json`, `moments.json`,
/// `deviation.json` (when `slope` is set) and `runs/sigma-<s>/seed-<k>.csv`
/// for the first `gap_series_members` members.
pub fn cmd_verify(cfg: &RunConfig, dir: &Path) -> Result<serde_json::Value> {
    let v = &cfg.verify;
    let src = cfg.source();
    let ens = cfg.ensemble();
    let stats = reference_stats(cfg)?;
    io::write_json(&dir.join("stats.json"), &stats)?;
    let levels = sigma_levels(&v.sigma_levels);

    let exceed = exceedance_probability(v.delta, &levels, &ens, &src, &stats, cfg.initial, &cfg.pendulum)?;
    io::write_json(&dir.join("exceedance.json"), &exceed)?;

    let cheb_amps = NoiseAmplitudes::uniform(v.chebyshev_sigma);
    let per_member = v.samples_per_member.min(cfg.grid.horizon_periods).max(1);
    let samples = collect_gap_samples(&ens, &src, cfg.initial, &cfg.pendulum, &cheb_amps, per_member)?;
    let decomposition = m1m2_decomposition(&samples, v.chebyshev_delta, &cheb_amps, &stats, &cfg.pendulum);
    let cheb = chebyshev_consistency(&decomposition);
    io::write_json(&dir.join("chebyshev.json"), &cheb)?;

    let moments = moment_growth(&src, &cfg.amps(), &v.moment_times, v.moment_ensemble_n, ens.master_seed)?;
    io::write_json(&dir.join("moments.json"), &moments)?;

    let mut summary = json!({
        "command": "verify",
        "exceedance_probs": exceed.probs,
        "exceedance_decays": exceed.decays_with_sigma(),
        "chebyshev_passed": cheb.passed,
        "moments_dominated": moments.all_dominated(),
    });
    if v.slope {
        let thetas: Vec<f64> = (0..v.theta_samples).map(|i| i as f64 * 2.0 * PI / v.theta_samples as f64).collect();
        let dev = potential_deviation(&thetas, &levels, &ens, &src, cfg.noise.convention, &cfg.pendulum)?;
        io::write_json(&dir.join("deviation.json"), &dev)?;
        summary["deviation_slopes"] = json!(dev.loglog_slope);
    }

    let members = v.gap_series_members.min(ens.ensemble_n);
    if members > 0 {
        let grid = src.grid(ens.horizon_periods)?;
        for (amps, lambda) in levels.iter().zip(&exceed.lambdas) {
            let label = format!("sigma-{}", amps.sigma1);
            for k in 0..members {
                let (a, b) = src.simulate(&grid, member_seed(ens.master_seed, k as u64))?;
                let traj = exact_flow(cfg.initial, (&a, &b), &cfg.pendulum, amps)?;
                let gap = hamiltonian_gap(&traj, (&a, &b), *lambda, &cfg.pendulum, amps)?;
                io::write_gap_csv(&dir.join("runs").join(&label).join(format!("seed-{k}.csv")), grid.times(), &gap)?;
            }
        }
    }
    Ok(summary)
}

/// Files: `stats.json`, `sections/member-<k>.csv`, `histogram.csv`,
/// `histogram.json`, `concentration.json`, `splitting.json`.
pub fn cmd_poincare(cfg: &RunConfig, dir: &Path) -> Result<serde_json::Value> {
    let pc = cfg.poincare.clone().unwrap_or_default();
    let src = cfg.source();
    let ens = cfg.ensemble();
    let stats = reference_stats(cfg)?;
    io::write_json(&dir.join("stats.json"), &stats)?;
    let amps = cfg.amps();
    let lambda = lambda_from_stats(&amps, &stats, cfg.noise.convention);

    let sections = {
        use rayon::prelude::*;
        ens.seeds()
            .into_par_iter()
            .enumerate()
            .map(|(k, seed)| {
                Ok(section_for_seed(&src, ens.horizon_periods, seed, cfg.initial, &cfg.pendulum, &amps)?
                    .with_source(seed, k))
            })
            .collect::<Result<Vec<_>>>()?
    };
    for sec in sections.iter().take(pc.export_sections) {
        io::write_section_csv(&dir.join("sections").join(format!("member-{}.csv", sec.source_id)), sec)?;
    }
    let hist = plane_fill_density(&sections, &pc.plane_box, lambda, &cfg.pendulum, &pc.band_edges)?;
    io::write_histogram_csv(&dir.join("histogram.csv"), &hist)?;
    io::write_json(
        &dir.join("histogram.json"),
        &json!({ "lambda": lambda, "visited_fraction": hist.visited_fraction, "outside": hist.outside, "bands": hist.bands }),
    )?;

    let levels = sigma_levels(&pc.sigma_levels);
    let e0 = equilibria(lambda, &cfg.pendulum)?
        .into_iter()
        .filter(|e| e.kind == EquilibriumKind::Stable)
        .min_by(|a, b| a.potential.total_cmp(&b.potential))
        .ok_or_else(|| Error::Domain("averaged system has no stable equilibrium".into()))?;
    let conc = equilibrium_concentration(&e0, &levels, &ens, &src, &stats, cfg.noise.convention, &cfg.pendulum)?;
    io::write_json(&dir.join("concentration.json"), &conc)?;

    let split = separatrix_splitting_probe(
        &levels,
        pc.splitting_points,
        &ens,
        &src,
        &stats,
        cfg.noise.convention,
        &cfg.pendulum,
    )?;
    io::write_json(&dir.join("splitting.json"), &split)?;

    Ok(json!({
        "command": "poincare",
        "lambda": lambda,
        "visited_fraction": hist.visited_fraction,
        "concentration_radii": conc.levels.iter().map(|l| l.radius).collect::<Vec<_>>(),
        "concentration_shrinks": conc.shrinks_with_sigma(),
        "splitting_rms": split.iter().map(|s| s.spread_rms).collect::<Vec<_>>(),
    }))
}

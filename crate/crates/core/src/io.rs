//! CSV and JSON export. Floats are written with 17 significant digits so the
//! files round-trip exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::bifurcation::{AtlasCurves, BifurcationScan, PhasePortrait};
use crate::dynamics::{BobEmbedding, Trajectory};
use crate::error::{Error, Result};
use crate::poincare::{OccupancyHistogram, StroboscopicSection};
use crate::rpsde::PathSample;

struct F(f64);

impl std::fmt::Display for F {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.16e}", self.0)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_paths_csv(path: &Path, pair: (&PathSample, &PathSample)) -> Result<()> {
    if pair.0.grid != pair.1.grid {
        return Err(Error::config("noise paths must share one grid"));
    }
    let mut w = create(path)?;
    writeln!(w, "t,xi1,xi2")?;
    for (k, t) in pair.0.grid.times().enumerate() {
        writeln!(w, "{},{},{}", F(t), F(pair.0.values[k]), F(pair.1.values[k]))?;
    }
    w.flush()?;
    Ok(())
}

/// `t,theta,p,H` for exact-flow trajectories, `t,theta,p,Hbar` for averaged ones.
pub fn write_trajectory_csv(path: &Path, traj: &Trajectory, energy_column: &str) -> Result<()> {
    let energy = traj.energy.as_deref().ok_or_else(|| Error::config("trajectory has no energy record"))?;
    let mut w = create(path)?;
    writeln!(w, "t,theta,p,{energy_column}")?;
    for (k, t) in traj.grid.times().enumerate() {
        let s = traj.states[k];
        writeln!(w, "{},{},{},{}", F(t), F(s.theta), F(s.p), F(energy[k]))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_embedding_csv(path: &Path, emb: &BobEmbedding) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "t,x,y")?;
    for k in 0..emb.t.len() {
        writeln!(w, "{},{},{}", F(emb.t[k]), F(emb.x[k]), F(emb.y[k]))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_scan_csv(path: &Path, scan: &BifurcationScan) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "lambda1,lambda2,label")?;
    for (lam, label) in &scan.nodes {
        writeln!(w, "{},{},{}", F(lam.lambda1), F(lam.lambda2), label.as_str())?;
    }
    w.flush()?;
    Ok(())
}

/// Centres of the cells whose corners carry different labels.
pub fn write_boundary_cells_csv(path: &Path, scan: &BifurcationScan) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "lambda1,lambda2,label")?;
    for lam in &scan.boundary_cells {
        writeln!(w, "{},{},boundary", F(lam.lambda1), F(lam.lambda2))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct AtlasJson<'a> {
    gamma1: &'a [[f64; 2]],
    gamma2: &'a crate::bifurcation::Gamma2Ray,
}

pub fn write_atlas_json(path: &Path, atlas: &AtlasCurves) -> Result<()> {
    write_json(path, &AtlasJson { gamma1: &atlas.gamma1, gamma2: &atlas.gamma2 })
}

#[derive(Serialize)]
struct PortraitSidecar<'a> {
    lambda: &'a crate::dynamics::LambdaPoint,
    equilibria: &'a [crate::bifurcation::Equilibrium],
    separatrix_levels: &'a [f64],
}

/// Writes the `theta,p,Hbar` grid to `csv_path` and the equilibria with the
/// separatrix levels to `json_path`.
pub fn write_portrait(csv_path: &Path, json_path: &Path, portrait: &PhasePortrait) -> Result<()> {
    let mut w = create(csv_path)?;
    writeln!(w, "theta,p,Hbar")?;
    for (j, &p) in portrait.ps.iter().enumerate() {
        for (i, &theta) in portrait.thetas.iter().enumerate() {
            writeln!(w, "{},{},{}", F(theta), F(p), F(portrait.value(i, j)))?;
        }
    }
    w.flush()?;
    write_json(
        json_path,
        &PortraitSidecar {
            lambda: &portrait.lambda,
            equilibria: &portrait.equilibria,
            separatrix_levels: &portrait.separatrix_levels,
        },
    )
}

pub fn write_section_csv(path: &Path, section: &StroboscopicSection) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "n,theta_wrapped,p")?;
    for (n, s) in section.wrapped().iter().enumerate() {
        writeln!(w, "{n},{},{}", F(s.theta), F(s.p))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_histogram_csv(path: &Path, hist: &OccupancyHistogram) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "theta_bin,p_bin,count")?;
    for j in 0..hist.bounds.n_p {
        for i in 0..hist.bounds.n_theta {
            writeln!(w, "{i},{j},{}", hist.count(i, j))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_gap_csv(path: &Path, times: impl Iterator<Item = f64>, gap: &[f64]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "t,gap")?;
    for (t, g) in times.zip(gap) {
        writeln!(w, "{},{}", F(t), F(*g))?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rpsde::PathGrid;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::f64::consts::PI] {
            let s = F(x).to_string();
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn path_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let grid = PathGrid::new(0.0, 0.5, 2).unwrap();
        let a = PathSample::constant(grid, 1.0);
        let b = PathSample::constant(grid, -1.0);
        let p = dir.path().join("p.csv");
        write_paths_csv(&p, (&a, &b)).unwrap();
        let text = std::fs::read_to_string(p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "t,xi1,xi2");
        let row: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row, vec![0.5, 1.0, -1.0]);
    }
}

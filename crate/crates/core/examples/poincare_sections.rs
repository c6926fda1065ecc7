//! Stroboscopic sections of the exact flow: plane filling, concentration
//! around the stable equilibrium and spreading off the separatrix.

use std::f64::consts::PI;

use stochastic_pendulum::bifurcation::{equilibria, EquilibriumKind};
use stochastic_pendulum::dynamics::{lambda_from_stats, Convention, NoiseAmplitudes, PendulumParams, PhaseState};
use stochastic_pendulum::poincare::{
    equilibrium_concentration, plane_fill_density, section_for_seed, separatrix_splitting_probe, PhaseBox,
};
use stochastic_pendulum::rpsde::{EnsembleSpec, NoiseSource};

fn main() -> stochastic_pendulum::Result<()> {
    let source = NoiseSource::default();
    let params = PendulumParams::default();
    let stats = source.reference_stats(1, 100, 2000, 20)?;
    let amps = NoiseAmplitudes::uniform(0.3);
    let lambda = lambda_from_stats(&amps, &stats, Convention::Derived);

    let sections = (0..20)
        .map(|seed| section_for_seed(&source, 200, seed, PhaseState::new(1.0, 0.0), &params, &amps))
        .collect::<Result<Vec<_>, _>>()?;
    let bx = PhaseBox { theta_min: -PI, theta_max: PI, p_min: -3.0, p_max: 3.0, n_theta: 32, n_p: 32 };
    let hist = plane_fill_density(&sections, &bx, lambda, &params, &[-1.5, -0.5, 0.5, 1.5])?;
    println!("visited fraction of the plane: {:.3}", hist.visited_fraction);
    for b in &hist.bands {
        println!("  Hbar in [{:>4}, {:>4}): {}/{} cells", b.hbar_min, b.hbar_max, b.visited, b.cells);
    }

    let levels: Vec<NoiseAmplitudes> = [0.0, 0.2, 0.1, 0.05].iter().map(|&s| NoiseAmplitudes::uniform(s)).collect();
    let e0 = equilibria(lambda, &params)?
        .into_iter()
        .find(|e| e.kind == EquilibriumKind::Stable)
        .expect("a stable equilibrium");
    let ens = EnsembleSpec { master_seed: 9, ensemble_n: 200, horizon_periods: 20 };
    let conc = equilibrium_concentration(&e0, &levels, &ens, &source, &stats, Convention::Derived, &params)?;
    for l in &conc.levels {
        println!(
            "sigma = {:<5} 95% of section points within {:.4} of theta = {:.4}",
            l.amps.sigma1, l.radius, l.equilibrium_theta
        );
    }

    let split = separatrix_splitting_probe(&levels, 8, &ens, &source, &stats, Convention::Derived, &params)?;
    for s in &split {
        println!("sigma = {:<5} separatrix energy spread rms {:.2e}", s.amps.sigma1, s.spread_rms);
    }
    Ok(())
}

//! Level sets of the averaged Hamiltonian, drawn as a coarse character map.

use stochastic_pendulum::bifurcation::{phase_portrait, PortraitGrid};
use stochastic_pendulum::dynamics::{LambdaPoint, PendulumParams};

fn main() -> stochastic_pendulum::Result<()> {
    let lam = LambdaPoint::new(0.5, 1.0);
    let portrait = phase_portrait(lam, &PendulumParams::default(), &PortraitGrid::centred(3.0, 64))?;
    println!("equilibria:");
    for e in &portrait.equilibria {
        println!("  theta = {:.4}  {:?}", e.theta, e.kind);
    }
    println!("separatrix levels: {:?}", portrait.separatrix_levels);

    let top = portrait.separatrix_levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#'];
    for j in (0..portrait.ps.len()).rev().step_by(3) {
        let row: String = (0..portrait.thetas.len())
            .map(|i| {
                let h = portrait.value(i, j);
                if (h - top).abs() < 0.08 {
                    'o'
                } else {
                    shades[(((h + 3.0) / 1.5).max(0.0) as usize).min(shades.len() - 1)]
                }
            })
            .collect();
        println!("{row}");
    }
    Ok(())
}

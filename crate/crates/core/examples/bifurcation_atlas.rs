//! Equilibria of the averaged potential across the (Lambda1, Lambda2) plane.

use stochastic_pendulum::bifurcation::{
    atlas, classify_region, equilibria, numeric_bifurcation_scan, LambdaBox, RegionLabel,
};
use stochastic_pendulum::dynamics::{LambdaPoint, PendulumParams};

fn main() -> stochastic_pendulum::Result<()> {
    let params = PendulumParams::default();

    for (l1, l2) in [(0.0, 0.0), (0.2, 0.1), (0.5, 1.0), (0.5, -1.0), (0.5, 0.0), (-0.5, 0.0)] {
        let lam = LambdaPoint::new(l1, l2);
        let eqs = equilibria(lam, &params)?;
        print!("({l1:>5}, {l2:>5}) {:<8}", classify_region(lam, &params).as_str());
        for e in &eqs {
            print!("  {:?} at {:.4} (U = {:.4})", e.kind, e.theta, e.potential);
        }
        println!();
    }

    let curves = atlas(16)?;
    println!("\ndegenerate-equilibrium curve, 16 samples:");
    for [a, b] in &curves.gamma1 {
        println!("  ({a:>8.4}, {b:>8.4})");
    }
    println!("equal-level ray: Lambda1 > {}, Lambda2 = 0", curves.gamma2.min_lambda1);

    let bx = LambdaBox { lambda1_min: -1.0, lambda1_max: 1.0, lambda2_min: -1.0, lambda2_max: 1.0 };
    let scan = numeric_bifurcation_scan(&bx, 0.05, &params)?;
    let four = scan.nodes.iter().filter(|(_, l)| *l == RegionLabel::Pi2).count();
    println!(
        "\nscan: {} nodes, {four} with four equilibria, {} boundary cells",
        scan.nodes.len(),
        scan.boundary_cells.len()
    );
    Ok(())
}

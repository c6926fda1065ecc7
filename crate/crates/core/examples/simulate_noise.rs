//! One realisation of the forced OU pair, the pendulum it drives, and a
//! check that the law of the noise repeats every period.
//!
//! ```text
//! cargo run --release --example simulate_noise
//! ```

use stochastic_pendulum::dynamics::{bob_embedding, exact_flow, NoiseAmplitudes, PendulumParams, PhaseState};
use stochastic_pendulum::rng::member_seed;
use stochastic_pendulum::rpsde::{law_periodicity_check, NoiseSource};

fn main() -> stochastic_pendulum::Result<()> {
    let source = NoiseSource::default();
    let grid = source.grid(5)?;
    let (xi1, xi2) = source.simulate(&grid, 42)?;

    println!("t       xi1       xi2");
    for k in (0..grid.len()).step_by(500) {
        println!("{:<7.3} {:>8.4}  {:>8.4}", grid.time(k), xi1.values[k], xi2.values[k]);
    }

    let params = PendulumParams::default();
    let amps = NoiseAmplitudes::uniform(0.3);
    let traj = exact_flow(PhaseState::new(0.5, 0.0), (&xi1, &xi2), &params, &amps)?;
    let bob = bob_embedding(&traj, (&xi1, &xi2), &params, &amps)?;
    let end = traj.final_state();
    println!("\nafter {} periods: theta = {:.4}, p = {:.4}", 5, end.theta, end.p);
    println!("bob at ({:.4}, {:.4})", bob.x[grid.n], bob.y[grid.n]);

    let seeds: Vec<u64> = (0..1000).map(|k| member_seed(7, k)).collect();
    let report = law_periodicity_check(&source, &seeds, 20.3, source.tau())?;
    println!(
        "\nKS at t and t + tau: {:.4} and {:.4} (5% critical value {:.4})",
        report.channel1.statistic, report.channel2.statistic, report.channel1.critical_value
    );
    Ok(())
}

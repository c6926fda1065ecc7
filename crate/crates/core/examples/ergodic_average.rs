//! Time-averaged noise moments from one long path, compared with the
//! closed-form stationary second moment.

use stochastic_pendulum::dynamics::{lambda_from_stats, Convention, NoiseAmplitudes};
use stochastic_pendulum::rpsde::NoiseSource;

fn main() -> stochastic_pendulum::Result<()> {
    let source = NoiseSource::default();
    let stats = source.reference_stats(1, 100, 4000, 20)?;

    let c = &source.channel1;
    println!(
        "C1  = {:.4} +- {:.4}  (stationary: {:.4})",
        stats.c1,
        stats.se_c1,
        c.drift.stationary_second_moment(c.beta)
    );
    println!("C2  = {:.4} +- {:.4}", stats.c2, stats.se_c2);
    println!("C12 = {:.4} +- {:.4}", stats.c12, stats.se_c12);
    println!("means {:.4}, {:.4}", stats.mean1, stats.mean2);

    for sigma in [0.5, 1.0, 2.0] {
        let amps = NoiseAmplitudes::uniform(sigma);
        let d = lambda_from_stats(&amps, &stats, Convention::Derived);
        let p = lambda_from_stats(&amps, &stats, Convention::Paper);
        println!(
            "sigma = {sigma}: Lambda = ({:.5}, {:.5}), with the doubled cos coefficient ({:.5}, {:.5})",
            d.lambda1, d.lambda2, p.lambda1, p.lambda2
        );
    }
    Ok(())
}

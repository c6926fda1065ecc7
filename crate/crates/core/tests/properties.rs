use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use stochastic_pendulum::bifurcation::equilibria;
use stochastic_pendulum::dynamics::{
    effective_potential, effective_potential_d1, exact_hamiltonian, hamiltonian_partials, instantaneous_potential,
    momentum_from_velocity, velocity_from_momentum, Convention, LambdaPoint, NoiseAmplitudes, PendulumParams,
    PhaseState,
};
use stochastic_pendulum::poincare::wrap_angle;
use stochastic_pendulum::rpsde::{drift_eval, PeriodicDriftSpec};

fn params() -> impl Strategy<Value = PendulumParams> {
    (0.2f64..3.0, 0.2f64..3.0).prop_map(|(l, g)| PendulumParams { l, g })
}

proptest! {
    #[test]
    fn drift_is_periodic_and_lipschitz(
        tau in 0.1f64..5.0, alpha in 0.1f64..5.0, amp in -3.0f64..3.0, phase in -PI..PI,
        t in -10.0f64..10.0, x in -5.0f64..5.0, y in -5.0f64..5.0,
    ) {
        let spec = PeriodicDriftSpec { tau, alpha, forcing_amp: amp, forcing_phase: phase };
        let a = drift_eval(&spec, t, x);
        prop_assert!((drift_eval(&spec, t + tau, x) - a).abs() <= 1e-9 * (1.0 + a.abs()));
        let b = drift_eval(&spec, t, y);
        prop_assert!((a - b).abs() <= spec.lipschitz_constant() * (x - y).abs() * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn momentum_round_trip(
        p in params(), s1 in 0.0f64..1.0, s2 in 0.0f64..1.0,
        theta in -PI..PI, v in -5.0f64..5.0, x1 in -3.0f64..3.0, x2 in -3.0f64..3.0,
    ) {
        let amps = NoiseAmplitudes { sigma1: s1, sigma2: s2 };
        let mom = momentum_from_velocity(theta, v, x1, x2, &p, &amps);
        prop_assert!((velocity_from_momentum(theta, mom, x1, x2, &p, &amps) - v).abs() <= 1e-12 * (1.0 + v.abs()));
    }

    #[test]
    fn partials_match_finite_differences(
        p in params(), s1 in 0.0f64..1.0, s2 in 0.0f64..1.0,
        theta in -PI..PI, mom in -3.0f64..3.0, x1 in -3.0f64..3.0, x2 in -3.0f64..3.0,
    ) {
        let amps = NoiseAmplitudes { sigma1: s1, sigma2: s2 };
        let h = |t: f64, q: f64| exact_hamiltonian(PhaseState::new(t, q), x1, x2, &p, &amps);
        let (dth, dp) = hamiltonian_partials(PhaseState::new(theta, mom), x1, x2, &p, &amps);
        let e = 1e-6;
        let fd_th = (h(theta + e, mom) - h(theta - e, mom)) / (2.0 * e);
        let fd_p = (h(theta, mom + e) - h(theta, mom - e)) / (2.0 * e);
        prop_assert!((dth - fd_th).abs() <= 1e-6 * dth.abs().max(1.0));
        prop_assert!((dp - fd_p).abs() <= 1e-6 * dp.abs().max(1.0));
    }

    #[test]
    fn potential_reflection_in_theta(theta in -10.0f64..10.0, l1 in -2.0f64..2.0, l2 in -2.0f64..2.0, p in params()) {
        let u = effective_potential(theta, LambdaPoint::new(l1, l2), &p);
        prop_assert!((effective_potential(-theta, LambdaPoint::new(l1, -l2), &p) - u).abs() <= 1e-13 * (1.0 + u.abs()));
    }

    #[test]
    fn potential_antisymmetry_about_quarter_turn(theta in -10.0f64..10.0, l1 in -2.0f64..2.0, l2 in -2.0f64..2.0, p in params()) {
        let u = effective_potential(theta, LambdaPoint::new(l1, l2), &p);
        let r = effective_potential(PI - theta, LambdaPoint::new(-l1, l2), &p);
        prop_assert!((r + u).abs() <= 1e-13 * (1.0 + u.abs()));
    }

    #[test]
    fn derivative_matches_finite_difference(theta in -PI..PI, l1 in -2.0f64..2.0, l2 in -2.0f64..2.0, p in params()) {
        let lam = LambdaPoint::new(l1, l2);
        let e = 1e-6;
        let fd = (effective_potential(theta + e, lam, &p) - effective_potential(theta - e, lam, &p)) / (2.0 * e);
        prop_assert!((effective_potential_d1(theta, lam, &p) - fd).abs() <= 1e-6);
    }

    #[test]
    fn instantaneous_potential_is_exact_potential(theta in -PI..PI, x1 in -3.0f64..3.0, x2 in -3.0f64..3.0, s in 0.0f64..1.0) {
        let p = PendulumParams::default();
        let amps = NoiseAmplitudes::uniform(s);
        let (a, b) = (s * x1, s * x2);
        let q = a * theta.cos() + b * theta.sin();
        let want = 0.5 * q * q - theta.cos();
        prop_assert!((instantaneous_potential(theta, x1, x2, &p, &amps, Convention::Derived) - want).abs() <= 1e-12);
    }

    #[test]
    fn equilibria_mirror_under_lambda2_flip(l1 in -1.5f64..1.5, l2 in -1.5f64..1.5) {
        let p = PendulumParams::default();
        let lam = LambdaPoint::new(l1, l2);
        let a = equilibria(lam, &p).unwrap();
        let b = equilibria(lam.mirrored(), &p).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for e in &a {
            let hit = b.iter().any(|f| {
                let d = (e.theta + f.theta).rem_euclid(TAU);
                d.min(TAU - d) < 1e-9 && e.kind == f.kind
            });
            prop_assert!(hit, "no mirror for {:?}", e);
        }
    }

    #[test]
    fn equilibria_are_critical_points(l1 in -1.5f64..1.5, l2 in -1.5f64..1.5) {
        let p = PendulumParams::default();
        let lam = LambdaPoint::new(l1, l2);
        let eqs = equilibria(lam, &p).unwrap();
        prop_assert!(eqs.len() == 2 || eqs.len() == 4 || eqs.len() == 3);
        for e in eqs {
            prop_assert!(effective_potential_d1(e.theta, lam, &p).abs() < 1e-9);
            prop_assert!((0.0..TAU).contains(&e.theta));
        }
    }

    #[test]
    fn wrapped_angle_differs_by_whole_turns(theta in -100.0f64..100.0) {
        let w = wrap_angle(theta);
        prop_assert!(w > -PI && w <= PI);
        let turns = (theta - w) / TAU;
        prop_assert!((turns - turns.round()).abs() < 1e-12);
    }
}

use std::f64::consts::FRAC_PI_4;

use lambda_sta::adiabatic::dark_states;
use lambda_sta::metrics::fidelity;
use lambda_sta::propagator::{convergence_check, evolve, propagate, Scheme, TimeGrid};
use lambda_sta::protocols::{perfect_epsilon, protocol1, protocol2, protocol3};
use lambda_sta::{invariant_eigenstates, protocol3_fidelity_closed, StateVector};

#[test]
fn protocol1_fidelity_is_cos_epsilon() {
    for eps in [0.05f64, 0.1, 0.2, 0.3] {
        let (_, pulses) = protocol1(eps, 4.0).unwrap();
        let psi0 = invariant_eigenstates(eps, 0.0).0;
        let f = fidelity(&evolve(&pulses, &psi0, 4000).unwrap());
        assert!(
            (f.norm() - eps.cos()).abs() <= 1e-6,
            "eps {eps}: {}",
            f.norm()
        );
    }
}

#[test]
fn protocol3_perfect_transfer_with_transient_p2() {
    let (pulses, psi0) = protocol3(perfect_epsilon(1).unwrap(), 4.0).unwrap();
    let traj = propagate(&pulses, &psi0, &TimeGrid::new(4000, 4.0, 10).unwrap()).unwrap();
    let last = traj.populations.last().unwrap();
    assert!((last[2] - 1.0).abs() <= 1e-6);
    assert!(traj.populations.iter().map(|p| p[1]).fold(0.0, f64::max) > 1e-3);
}

#[test]
fn norm_is_conserved() {
    for (pulses, psi0) in [
        protocol3(0.02, 4.0).unwrap(),
        (protocol2(0.002, 0.05, 4.0).unwrap().1, StateVector::bare(1)),
    ] {
        let traj = propagate(&pulses, &psi0, &TimeGrid::new(4000, 4.0, 1).unwrap()).unwrap();
        assert!(traj.max_norm_drift() <= 1e-8);
    }
}

#[test]
fn detuned_norm_is_conserved() {
    let (pulses, psi0) = protocol3(0.2, 4.0).unwrap();
    let pulses = pulses.with_detunings(0.8, -0.3);
    let traj = propagate(&pulses, &psi0, &TimeGrid::new(4000, 4.0, 1).unwrap()).unwrap();
    assert!(traj.max_norm_drift() <= 1e-8);
}

#[test]
fn convergence_check_levels() {
    let (pulses, psi0) = protocol3(0.2, 4.0).unwrap();
    let fine = convergence_check(&pulses, &psi0, &TimeGrid::new(2000, 4.0, 100).unwrap()).unwrap();
    let coarse = convergence_check(&pulses, &psi0, &TimeGrid::new(100, 4.0, 5).unwrap()).unwrap();
    assert!(fine <= 1e-8, "{fine}");
    assert!(coarse > fine);
}

#[test]
fn step_halving_gains_at_least_second_order() {
    let (_, pulses) = protocol2(0.2, FRAC_PI_4, 4.0).unwrap();
    let psi0 = StateVector::bare(1);
    for scheme in [Scheme::Midpoint, Scheme::Magnus4] {
        let grid = |n| TimeGrid::new(n, 4.0, n).unwrap().with_scheme(scheme);
        let e1 = convergence_check(&pulses, &psi0, &grid(200)).unwrap();
        let e2 = convergence_check(&pulses, &psi0, &grid(400)).unwrap();
        assert!(e1 / e2 >= 3.5, "{scheme:?}: ratio {}", e1 / e2);
    }
}

#[test]
fn adiabatic_limit_follows_dark_state() {
    let (_, pulses) = protocol1(0.2, 4.0).unwrap();
    let slow = pulses.time_stretched(100.0).unwrap();
    let psi0 = lambda_sta::adiabatic_frame(slow.omega_p(0.0), slow.omega_s(0.0))
        .unwrap()
        .n0;
    let traj = propagate(&slow, &psi0, &TimeGrid::new(400_000, 400.0, 1000).unwrap()).unwrap();
    let dark = dark_states(&slow, &traj.times);
    let worst = dark
        .iter()
        .zip(&traj.states)
        .map(|(n0, psi)| n0.inner(psi).norm())
        .fold(1.0, f64::min);
    assert!(worst >= 0.999, "{worst}");
}

#[test]
fn multimode_fidelity_matches_closed_form() {
    for eps in [0.07f64, 0.15, 0.2, 0.33] {
        let (pulses, psi0) = protocol3(eps, 4.0).unwrap();
        let f = fidelity(&evolve(&pulses, &psi0, 4000).unwrap());
        assert!((f - protocol3_fidelity_closed(eps)).norm() <= 1e-4);
    }
}

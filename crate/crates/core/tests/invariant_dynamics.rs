use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use lambda_sta::invariant::{angle_rates, invariance_defect, lr_phase, DEFAULT_OMEGA_0};
use lambda_sta::operators::hamiltonian_resonant;
use lambda_sta::propagator::{propagate, TimeGrid};
use lambda_sta::protocols::{protocol1, protocol2, rabi_from_angles};
use lambda_sta::{
    commutator_defect, decompose, invariant_matrix, synthesize_pulses, AngleTrajectory, Angles,
    Mode, ModeDecomposition, StateVector,
};
use num_complex::Complex64;
use proptest::prelude::*;

/// Smooth trajectory with gamma bounded inside (0.05, 1.45).
#[derive(Clone, Debug)]
struct Wavy {
    t_f: f64,
    g0: f64,
    g1: f64,
    wg: f64,
    pg: f64,
    b0: f64,
    b1: f64,
    b2: f64,
    wb: f64,
}

impl AngleTrajectory for Wavy {
    fn t_f(&self) -> f64 {
        self.t_f
    }

    fn angles(&self, t: f64) -> Angles {
        Angles {
            gamma: self.g0 + self.g1 * (self.wg * t + self.pg).sin(),
            beta: self.b0 + self.b1 * t + self.b2 * (self.wb * t).sin(),
            gamma_dot: self.g1 * self.wg * (self.wg * t + self.pg).cos(),
            beta_dot: self.b1 + self.b2 * self.wb * (self.wb * t).cos(),
        }
    }
}

fn wavy() -> impl Strategy<Value = Wavy> {
    (
        1.0..8.0f64,
        0.3..1.2f64,
        -0.25..0.25f64,
        0.1..3.0f64,
        0.0..6.3f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
        -0.5..0.5f64,
        0.1..3.0f64,
    )
        .prop_map(|(t_f, g0, g1, wg, pg, b0, b1, b2, wb)| Wavy {
            t_f,
            g0,
            g1,
            wg,
            pg,
            b0,
            b1,
            b2,
            wb,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn synthesis_round_trip(traj in wavy()) {
        let pulses = synthesize_pulses(&traj).unwrap();
        for k in 0..=100 {
            let t = traj.t_f * k as f64 / 100.0;
            let a = traj.angles(t);
            let (op, os) = pulses.rabi(t);
            let (gd, bd) = angle_rates(a.gamma, a.beta, op, os);
            let scale = a.gamma_dot.abs() + a.beta_dot.abs();
            prop_assert!((gd - a.gamma_dot).abs() <= 1e-9 * scale.max(1e-3));
            prop_assert!((bd - a.beta_dot).abs() <= 1e-9 * scale.max(1e-3));
        }
    }

    #[test]
    fn invariant_is_conserved_for_synthesized_pulses(traj in wavy()) {
        let pulses = synthesize_pulses(&traj).unwrap();
        let step = 1e-6 * traj.t_f;
        for k in 0..1000 {
            let t = traj.t_f * (k as f64 + 0.5) / 1000.0;
            let d = invariance_defect(&traj, &pulses, DEFAULT_OMEGA_0, t, step);
            prop_assert!(d <= 1e-8 * DEFAULT_OMEGA_0, "t = {}: {}", t, d);
        }
    }
}

#[test]
fn invariance_fails_for_mismatched_pulses() {
    let (angles, pulses) = protocol1(0.2, 4.0).unwrap();
    let wrong = pulses.time_stretched(1.0).unwrap();
    let doubled = lambda_sta::PulseSchedule::new(4.0, move |t| {
        let (p, s) = wrong.rabi(t);
        (2.0 * p, 2.0 * s)
    })
    .unwrap();
    assert!(invariance_defect(&angles, &doubled, 1.0, 2.0, 4e-6) > 1e-2);
}

#[test]
fn endpoint_commutation_at_ideal_boundary_angles() {
    // [H, I] = 0 at the endpoints for gamma = 0, beta(0) = 0, beta(t_f) = pi/2,
    // which is what forces Omega_p(0) = 0 and Omega_s(t_f) = 0.
    for (tf, pulses) in [
        (4.0, protocol1(0.2, 4.0).unwrap().1),
        (4.0, protocol2(0.2, FRAC_PI_4, 4.0).unwrap().1),
    ] {
        let h0 = hamiltonian_resonant(pulses.omega_p(0.0), pulses.omega_s(0.0));
        let hf = hamiltonian_resonant(pulses.omega_p(tf), pulses.omega_s(tf));
        assert!(commutator_defect(&h0, &invariant_matrix(0.0, 0.0, 1.0)) <= 1e-12);
        assert!(commutator_defect(&hf, &invariant_matrix(0.0, FRAC_PI_2, 1.0)) <= 1e-12);
    }
}

#[test]
fn endpoint_commutation_at_actual_angles() {
    let eps = 0.2f64;
    let (angles, pulses) = protocol1(eps, 4.0).unwrap();
    // with gamma = eps the K3 component survives: [K2, K3] = i K1, so
    // |[H(0), I(0)]|_F = (Omega_s(0) / 2)(Omega_0 / 2) sin(eps) sqrt(2)
    let a0 = angles.angles(0.0);
    let h0 = pulses.hamiltonian(0.0);
    let d0 = commutator_defect(&h0, &invariant_matrix(a0.gamma, a0.beta, 1.0));
    let expect = 0.25 * pulses.omega_s(0.0) * eps.sin() * 2f64.sqrt();
    assert!((d0 - expect).abs() < 1e-12);

    // Protocol 2 switches both fields off at the ends, so H = 0 commutes.
    let (angles, pulses) = protocol2(eps, FRAC_PI_4, 4.0).unwrap();
    for t in [0.0, 4.0] {
        let a = angles.angles(t);
        let d = commutator_defect(
            &pulses.hamiltonian(t),
            &invariant_matrix(a.gamma, a.beta, 1.0),
        );
        assert!(d <= 1e-12);
    }
}

#[test]
fn commutator_nonzero_inside_protocol1() {
    let (angles, pulses) = protocol1(0.2, 4.0).unwrap();
    let a = angles.angles(1.3);
    assert!(
        commutator_defect(
            &pulses.hamiltonian(1.3),
            &invariant_matrix(a.gamma, a.beta, 1.0)
        ) > 1e-3
    );
}

#[test]
fn lr_phases_protocol1() {
    for eps in [0.1f64, 0.2, 0.3] {
        let (angles, pulses) = protocol1(eps, 4.0).unwrap();
        let plus = lr_phase(Mode::Plus, &angles, &pulses, 4.0).unwrap();
        let minus = lr_phase(Mode::Minus, &angles, &pulses, 4.0).unwrap();
        let expect = PI / (2.0 * eps.sin());
        assert!((plus + expect).abs() <= 1e-8);
        assert!((minus - expect).abs() <= 1e-8);
        assert_eq!(lr_phase(Mode::Zero, &angles, &pulses, 4.0).unwrap(), 0.0);
    }
    let (angles, pulses) = protocol1(0.2, 4.0).unwrap();
    assert!((lr_phase(Mode::Plus, &angles, &pulses, 4.0).unwrap() + 7.9066).abs() < 1e-4);
}

#[test]
fn phase_antisymmetry_protocol2() {
    let (angles, pulses) = protocol2(0.3, 1.2, 3.0).unwrap();
    for k in 0..=12 {
        let t = 3.0 * k as f64 / 12.0;
        let p = lr_phase(Mode::Plus, &angles, &pulses, t).unwrap();
        let m = lr_phase(Mode::Minus, &angles, &pulses, t).unwrap();
        assert!((p + m).abs() <= 1e-10);
    }
}

fn mode_amplitude_drift<A: AngleTrajectory>(
    angles: &A,
    pulses: &lambda_sta::PulseSchedule,
    psi0: StateVector,
) -> f64 {
    let grid = TimeGrid::new(4000, angles.t_f(), 20).unwrap();
    let traj = propagate(pulses, &psi0, &grid).unwrap();
    let a0 = angles.angles(0.0);
    let c0 = decompose(&psi0, a0.gamma, a0.beta);
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, psi)| {
            let a = angles.angles(t);
            let c = decompose(psi, a.gamma, a.beta);
            Mode::ALL
                .iter()
                .map(|&m| (c.get(m).norm() - c0.get(m).norm()).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

#[test]
fn mode_amplitudes_are_constants_of_motion() {
    let generic = StateVector::new(
        Complex64::new(0.6, 0.1),
        Complex64::new(0.0, -0.5),
        Complex64::new(0.3, (1.0f64 - 0.36 - 0.01 - 0.25 - 0.09).sqrt()),
    )
    .unwrap();
    let (a1, p1) = protocol1(0.2, 4.0).unwrap();
    let (a2, p2) = protocol2(0.2, FRAC_PI_4, 4.0).unwrap();
    for psi in [StateVector::bare(1), generic] {
        assert!(mode_amplitude_drift(&a1, &p1, psi) <= 1e-6);
        assert!(mode_amplitude_drift(&a2, &p2, psi) <= 1e-6);
    }
}

#[test]
fn phase_tracking_matches_quadrature() {
    let (angles, pulses) = protocol1(0.2, 4.0).unwrap();
    let psi0 = StateVector::bare(1);
    let grid = TimeGrid::new(4000, 4.0, 40).unwrap();
    let traj = propagate(&pulses, &psi0, &grid).unwrap();
    let arg0 = decompose(&psi0, 0.2, 0.0).get(Mode::Plus).arg();
    let mut unwrapped = Vec::new();
    for (&t, psi) in traj.times.iter().zip(&traj.states) {
        let a = angles.angles(t);
        unwrapped.push(decompose(psi, a.gamma, a.beta).get(Mode::Plus).arg() - arg0);
    }
    lambda_sta::adiabatic::unwrap_angles(&mut unwrapped);
    for (&t, phase) in traj.times.iter().zip(&unwrapped) {
        let alpha = lr_phase(Mode::Plus, &angles, &pulses, t).unwrap();
        assert!((phase - alpha).abs() <= 1e-4, "t = {t}: {phase} vs {alpha}");
    }
}

#[test]
fn lewis_riesenfeld_solution_matches_propagation() {
    let (angles, pulses) = protocol2(0.25, 1.0, 4.0).unwrap();
    let psi0 = StateVector::bare(1);
    let grid = TimeGrid::new(8000, 4.0, 800).unwrap();
    let traj = propagate(&pulses, &psi0, &grid).unwrap();
    for (&t, psi) in traj.times.iter().zip(&traj.states) {
        let lr = ModeDecomposition::at(&psi0, &angles, &pulses, t).unwrap();
        let a = angles.angles(t);
        assert!(
            lr.state(a.gamma, a.beta).max_deviation(psi) < 1e-6,
            "t = {t}"
        );
    }
}

#[test]
fn rabi_from_angles_matches_synthesis() {
    let (angles, pulses) = protocol2(0.2, 0.9, 4.0).unwrap();
    for k in 0..=10 {
        let t = 0.4 * k as f64;
        assert_eq!(rabi_from_angles(angles.angles(t)), pulses.rabi(t));
    }
}

//! Instantaneous eigensystem of the resonant Hamiltonian.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::pulse::PulseSchedule;
use crate::state::StateVector;

/// Eigensystem of `H = (Omega_p K1 + Omega_s K2)/2` at one instant.
///
/// `n0` is the dark state with eigenvalue 0; `n_plus` and `n_minus` carry
/// `+Omega/2` and `-Omega/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticFrame {
    /// Mixing angle with `tan(theta) = Omega_p / Omega_s`.
    pub theta: f64,
    pub omega_rms: f64,
    /// Eigenvalues ordered as `(0, +Omega/2, -Omega/2)`.
    pub eigenvalues: [f64; 3],
    pub n0: StateVector,
    pub n_plus: StateVector,
    pub n_minus: StateVector,
}

pub fn adiabatic_frame(omega_p: f64, omega_s: f64) -> Result<AdiabaticFrame> {
    if omega_p == 0.0 && omega_s == 0.0 {
        return Err(Error::DegeneratePulse);
    }
    let theta = omega_p.atan2(omega_s);
    Ok(frame_at_angle(theta, omega_p.hypot(omega_s)))
}

fn frame_at_angle(theta: f64, omega_rms: f64) -> AdiabaticFrame {
    let (s, c) = theta.sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    AdiabaticFrame {
        theta,
        omega_rms,
        eigenvalues: [0.0, 0.5 * omega_rms, -0.5 * omega_rms],
        n0: StateVector::from_amplitudes([c.into(), 0.0.into(), (-s).into()]),
        n_plus: StateVector::from_amplitudes([(r * s).into(), r.into(), (r * c).into()]),
        n_minus: StateVector::from_amplitudes([(r * s).into(), (-r).into(), (r * c).into()]),
    }
}

/// `|theta_dot| / |Omega|`; small values mean adiabatic following.
pub fn adiabaticity_ratio(theta_dot: f64, omega_rms: f64) -> Result<f64> {
    if omega_rms == 0.0 {
        return Err(Error::DegeneratePulse);
    }
    Ok(theta_dot.abs() / omega_rms.abs())
}

/// Removes `2*pi` jumps so that consecutive angles differ by less than `pi`.
pub fn unwrap_angles(angles: &mut [f64]) {
    for k in 1..angles.len() {
        let mut d = angles[k] - angles[k - 1];
        while d > PI {
            angles[k] -= 2.0 * PI;
            d -= 2.0 * PI;
        }
        while d < -PI {
            angles[k] += 2.0 * PI;
            d += 2.0 * PI;
        }
    }
}

/// Mixing angle along `times`, continuous across branch cuts.
///
/// Instants where both fields vanish reuse the previous angle (or 0 at the
/// start), since the dark state is not defined there.
pub fn mixing_angle_trajectory(pulses: &PulseSchedule, times: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(times.len());
    let mut last = 0.0;
    for &t in times {
        let (p, s) = pulses.rabi(t);
        let theta = if p == 0.0 && s == 0.0 {
            last
        } else {
            p.atan2(s)
        };
        out.push(theta);
        last = theta;
    }
    unwrap_angles(&mut out);
    out
}

/// Dark state along a sampled trajectory, following the unwrapped angle.
pub fn dark_states(pulses: &PulseSchedule, times: &[f64]) -> Vec<StateVector> {
    mixing_angle_trajectory(pulses, times)
        .into_iter()
        .map(|theta| frame_at_angle(theta, 0.0).n0)
        .collect()
}

//! Figures of merit for a run and the closed-form predictions they are
//! checked against.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::propagator::Trajectory;
use crate::pulse::PulseSchedule;
use crate::quadrature::{integrate, Tolerance};
use crate::state::StateVector;
use crate::units::to_two_pi_mhz;

const AVERAGE_TOLERANCE: Tolerance = Tolerance::new(1e-10, 1e-12);
const PEAK_SCAN: usize = 10_000;

/// `<-3|psi>` with `|-3> = (0, 0, -1)`.
pub fn fidelity(state: &StateVector) -> Complex64 {
    StateVector::target().inner(state)
}

/// Time-averaged Rabi frequency `(1/t_f) int sqrt(Omega_s^2 + Omega_p^2) dt`.
pub fn avg_rabi(pulses: &PulseSchedule) -> Result<f64> {
    let t_f = pulses.t_f();
    Ok(integrate(|t| pulses.omega_rms(t), 0.0, t_f, AVERAGE_TOLERANCE)?.value / t_f)
}

/// Energy cost `int (Omega_s^2 + Omega_p^2) dt`, with no `1/t_f` factor.
pub fn energy_cost(pulses: &PulseSchedule) -> Result<f64> {
    let integrand = |t: f64| {
        let (p, s) = pulses.rabi(t);
        p * p + s * s
    };
    Ok(integrate(integrand, 0.0, pulses.t_f(), AVERAGE_TOLERANCE)?.value)
}

/// `max_t sqrt(Omega_p^2 + Omega_s^2)` on a uniform scan.
pub fn peak_rabi(pulses: &PulseSchedule) -> f64 {
    pulses
        .sample(PEAK_SCAN)
        .into_iter()
        .map(|(_, p, s)| p.hypot(s))
        .fold(0.0, f64::max)
}

/// `pi cot(eps) / t_f`
pub fn protocol1_avg_rabi_closed(epsilon: f64, t_f: f64) -> f64 {
    PI / epsilon.tan() / t_f
}

/// `pi^2 cot^2(eps) / t_f`
pub fn protocol1_energy_closed(epsilon: f64, t_f: f64) -> f64 {
    (PI / epsilon.tan()).powi(2) / t_f
}

/// Fidelity of Protocol-1 pulses started from `|1>`:
/// `1 - sin^2(eps) (1 - cos(pi / (2 sin eps)))`.
pub fn protocol3_fidelity_closed(epsilon: f64) -> f64 {
    let s = epsilon.sin();
    1.0 - s * s * (1.0 - (PI / (2.0 * s)).cos())
}

/// Epsilon-derivatives of the Protocol-1 fields and of `F = cos eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sensitivity {
    pub d_omega_s: f64,
    pub d_omega_p: f64,
    pub d_fidelity: f64,
}

pub fn sensitivity_closed(epsilon: f64, t: f64, t_f: f64) -> Sensitivity {
    let arg = PI * t / (2.0 * t_f);
    let scale = -PI / (t_f * epsilon.sin().powi(2));
    Sensitivity {
        d_omega_s: scale * arg.cos(),
        d_omega_p: scale * arg.sin(),
        d_fidelity: -epsilon.sin(),
    }
}

/// Scalar outcome of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub fidelity_complex: Complex64,
    pub fidelity_mag: f64,
    /// Ω̄, rad/us.
    pub avg_rabi: f64,
    /// Ē/ħ, rad/us.
    pub energy_cost: f64,
    pub peak_p2: f64,
    /// rad/us.
    pub peak_rabi: f64,
    pub final_populations: [f64; 3],
    pub max_norm_drift: f64,
}

impl RunMetrics {
    pub fn evaluate(pulses: &PulseSchedule, trajectory: &Trajectory) -> Result<Self> {
        let f = fidelity(&trajectory.final_state());
        Ok(RunMetrics {
            fidelity_complex: f,
            fidelity_mag: f.norm(),
            avg_rabi: avg_rabi(pulses)?,
            energy_cost: energy_cost(pulses)?,
            peak_p2: trajectory
                .populations
                .iter()
                .map(|p| p[1])
                .fold(0.0, f64::max),
            peak_rabi: peak_rabi(pulses),
            final_populations: trajectory.final_state().populations(),
            max_norm_drift: trajectory.max_norm_drift(),
        })
    }

    /// Flat view with frequency-like values in both rad/us and 2*pi x MHz.
    pub fn report(&self) -> MetricsReport {
        MetricsReport {
            fidelity_re: self.fidelity_complex.re,
            fidelity_im: self.fidelity_complex.im,
            fidelity_mag: self.fidelity_mag,
            fidelity_phase: self.fidelity_complex.arg(),
            avg_rabi_rad_per_us: self.avg_rabi,
            avg_rabi_two_pi_mhz: to_two_pi_mhz(self.avg_rabi),
            energy_cost_rad_per_us: self.energy_cost,
            energy_cost_two_pi_mhz: to_two_pi_mhz(self.energy_cost),
            peak_rabi_rad_per_us: self.peak_rabi,
            peak_rabi_two_pi_mhz: to_two_pi_mhz(self.peak_rabi),
            peak_p2: self.peak_p2,
            p1_final: self.final_populations[0],
            p2_final: self.final_populations[1],
            p3_final: self.final_populations[2],
            max_norm_drift: self.max_norm_drift,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub fidelity_re: f64,
    pub fidelity_im: f64,
    pub fidelity_mag: f64,
    pub fidelity_phase: f64,
    pub avg_rabi_rad_per_us: f64,
    pub avg_rabi_two_pi_mhz: f64,
    pub energy_cost_rad_per_us: f64,
    pub energy_cost_two_pi_mhz: f64,
    pub peak_rabi_rad_per_us: f64,
    pub peak_rabi_two_pi_mhz: f64,
    pub peak_p2: f64,
    pub p1_final: f64,
    pub p2_final: f64,
    pub p3_final: f64,
    pub max_norm_drift: f64,
}

impl MetricsReport {
    pub const COLUMNS: [&'static str; 15] = [
        "fidelity_re",
        "fidelity_im",
        "fidelity_mag",
        "fidelity_phase",
        "avg_rabi_rad_per_us",
        "avg_rabi_two_pi_mhz",
        "energy_cost_rad_per_us",
        "energy_cost_two_pi_mhz",
        "peak_rabi_rad_per_us",
        "peak_rabi_two_pi_mhz",
        "peak_p2",
        "p1_final",
        "p2_final",
        "p3_final",
        "max_norm_drift",
    ];

    pub fn values(&self) -> [f64; 15] {
        [
            self.fidelity_re,
            self.fidelity_im,
            self.fidelity_mag,
            self.fidelity_phase,
            self.avg_rabi_rad_per_us,
            self.avg_rabi_two_pi_mhz,
            self.energy_cost_rad_per_us,
            self.energy_cost_two_pi_mhz,
            self.peak_rabi_rad_per_us,
            self.peak_rabi_two_pi_mhz,
            self.peak_p2,
            self.p1_final,
            self.p2_final,
            self.p3_final,
            self.max_norm_drift,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::protocol1;
    use crate::units::from_two_pi_mhz;

    #[test]
    fn fidelity_sign_convention() {
        assert_eq!(fidelity(&StateVector::target()), Complex64::new(1.0, 0.0));
        let f = fidelity(&StateVector::bare(3));
        assert_eq!(f, Complex64::new(-1.0, 0.0));
        assert!((f.arg() - PI).abs() < 1e-15);
    }

    #[test]
    fn averages_match_closed_forms() {
        for eps in [0.02, 0.1, 0.2, 0.2527, 0.5] {
            let (_, p) = protocol1(eps, 4.0).unwrap();
            let a = avg_rabi(&p).unwrap();
            let e = energy_cost(&p).unwrap();
            let ac = protocol1_avg_rabi_closed(eps, 4.0);
            let ec = protocol1_energy_closed(eps, 4.0);
            assert!(((a - ac) / ac).abs() < 1e-9, "eps {eps}: {a} vs {ac}");
            assert!(((e - ec) / ec).abs() < 1e-9, "eps {eps}: {e} vs {ec}");
        }
    }

    #[test]
    fn quoted_values_protocol1() {
        // (eps, avg in 2 pi MHz, energy in 2 pi MHz) at t_f = 4 us
        for (eps, avg, energy) in [(0.2527, 0.48, 5.89), (0.2, 0.62, 9.56)] {
            let (_, p) = protocol1(eps, 4.0).unwrap();
            assert!((to_two_pi_mhz(avg_rabi(&p).unwrap()) - avg).abs() < 0.01);
            assert!((to_two_pi_mhz(energy_cost(&p).unwrap()) - energy).abs() < 0.01);
        }
        let (_, p) = protocol1(0.02, 4.0).unwrap();
        let a = avg_rabi(&p).unwrap();
        let e = energy_cost(&p).unwrap();
        assert!((a / from_two_pi_mhz(6.25) - 1.0).abs() < 5e-3);
        assert!((e / from_two_pi_mhz(981.49) - 1.0).abs() < 5e-3);
    }

    #[test]
    fn protocol3_closed_form_peaks() {
        assert!((protocol3_fidelity_closed(0.2527) - 1.0).abs() < 1e-4);
        assert!((protocol3_fidelity_closed(0.1253) - 1.0).abs() < 1e-4);
        let eps = 0.2f64;
        let expect = 1.0 - eps.sin().powi(2) * (1.0 - (PI / (2.0 * eps.sin())).cos());
        assert_eq!(protocol3_fidelity_closed(eps), expect);
        assert!(expect < 1.0);
    }

    fn omega_s_closed(eps: f64, t: f64, tf: f64) -> f64 {
        PI / tf / eps.tan() * (PI * t / (2.0 * tf)).cos()
    }

    fn omega_p_closed(eps: f64, t: f64, tf: f64) -> f64 {
        PI / tf / eps.tan() * (PI * t / (2.0 * tf)).sin()
    }

    #[test]
    fn sensitivities_against_finite_differences() {
        let tf = 4.0;
        let h = 1e-6;
        for eps in [0.05, 0.2, 0.6] {
            for t in [0.0, 1.0, 2.5, 4.0] {
                let s = sensitivity_closed(eps, t, tf);
                let fd_s =
                    (omega_s_closed(eps + h, t, tf) - omega_s_closed(eps - h, t, tf)) / (2.0 * h);
                let fd_p =
                    (omega_p_closed(eps + h, t, tf) - omega_p_closed(eps - h, t, tf)) / (2.0 * h);
                let scale = s.d_omega_s.abs().max(s.d_omega_p.abs());
                assert!((s.d_omega_s - fd_s).abs() <= 1e-6 * scale);
                assert!((s.d_omega_p - fd_p).abs() <= 1e-6 * scale);
                let fd_f = ((eps + h).cos() - (eps - h).cos()) / (2.0 * h);
                assert!((s.d_fidelity - fd_f).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn sensitivity_examples() {
        let s = sensitivity_closed(0.2, 4.0, 4.0);
        assert!(s.d_omega_s.abs() < 1e-12);
        let s = sensitivity_closed(0.2, 0.0, 4.0);
        assert!((s.d_fidelity + 0.1987).abs() < 1e-4);
        assert!((s.d_omega_s + PI / (4.0 * 0.2f64.sin().powi(2))).abs() < 1e-12);
        // the pump derivative follows sin(pi t / 2 t_f), not the Stokes profile
        assert_eq!(s.d_omega_p, 0.0);
    }
}

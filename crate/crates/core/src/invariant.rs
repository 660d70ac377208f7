//! Lewis-Riesenfeld invariant of the resonant Lambda Hamiltonian.
//!
//! The invariant is parametrised by two auxiliary angles `gamma(t)` and
//! `beta(t)`:
//!
//! ```text
//! I(t) = (Omega_0 / 2) (cos g sin b K1 + cos g cos b K2 + sin g K3)
//! ```
//!
//! and stays invariant whenever the angles obey
//! `g' = (Omega_p cos b - Omega_s sin b) / 2` and
//! `b' = tan g (Omega_s cos b + Omega_p sin b) / 2`.
//! Its eigenvectors `phi_0`, `phi_+`, `phi_-` are the dynamical modes; each
//! picks up a phase `alpha_n` and `Psi(t) = sum_n C_n e^{i alpha_n} phi_n(t)`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{frobenius_norm, spin1_operators, HermitianOperator3};
use crate::pulse::PulseSchedule;
use crate::quadrature::{integrate, Tolerance};
use crate::state::StateVector;

/// Default scale of the invariant, rad/us.
pub const DEFAULT_OMEGA_0: f64 = 1.0;

const PHASE_TOLERANCE: Tolerance = Tolerance::absolute(1e-10);

/// Auxiliary angles and their time derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub gamma: f64,
    pub beta: f64,
    pub gamma_dot: f64,
    pub beta_dot: f64,
}

/// A time-parametrised pair `(gamma(t), beta(t))` on `[0, t_f]` with
/// analytic first derivatives.
pub trait AngleTrajectory: Send + Sync {
    fn t_f(&self) -> f64;

    fn angles(&self, t: f64) -> Angles;
}

impl<T: AngleTrajectory + ?Sized> AngleTrajectory for Arc<T> {
    fn t_f(&self) -> f64 {
        (**self).t_f()
    }

    fn angles(&self, t: f64) -> Angles {
        (**self).angles(t)
    }
}

impl<T: AngleTrajectory + ?Sized> AngleTrajectory for &T {
    fn t_f(&self) -> f64 {
        (**self).t_f()
    }

    fn angles(&self, t: f64) -> Angles {
        (**self).angles(t)
    }
}

/// Invariant eigenmode label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Zero,
    Plus,
    Minus,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Zero, Mode::Plus, Mode::Minus];

    pub fn index(self) -> usize {
        match self {
            Mode::Zero => 0,
            Mode::Plus => 1,
            Mode::Minus => 2,
        }
    }

    /// Normalised eigenvalue label (0, +1, -1).
    pub fn label(self) -> f64 {
        match self {
            Mode::Zero => 0.0,
            Mode::Plus => 1.0,
            Mode::Minus => -1.0,
        }
    }
}

pub fn invariant_matrix(gamma: f64, beta: f64, omega_0: f64) -> HermitianOperator3 {
    let (k1, k2, k3) = spin1_operators();
    let (sg, cg) = gamma.sin_cos();
    let (sb, cb) = beta.sin_cos();
    (0.5 * omega_0) * ((cg * sb) * k1 + (cg * cb) * k2 + sg * k3)
}

/// Eigenvectors `(phi_0, phi_+, phi_-)` in their closed-form phase convention.
pub fn invariant_eigenstates(gamma: f64, beta: f64) -> (StateVector, StateVector, StateVector) {
    let (sg, cg) = gamma.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let i = Complex64::i();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let phi_0 = StateVector::from_amplitudes([(cg * cb).into(), -i * sg, (-cg * sb).into()]);
    let mode = |sign: f64| {
        StateVector::from_amplitudes([
            r * (sg * cb + sign * i * sb),
            r * i * cg,
            r * (-sg * sb + sign * i * cb),
        ])
    };
    (phi_0, mode(1.0), mode(-1.0))
}

/// The invariant and its eigenbasis at fixed angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantFrame {
    pub matrix: HermitianOperator3,
    pub phi_0: StateVector,
    pub phi_plus: StateVector,
    pub phi_minus: StateVector,
    pub omega_0: f64,
}

impl InvariantFrame {
    pub fn new(gamma: f64, beta: f64, omega_0: f64) -> Self {
        let (phi_0, phi_plus, phi_minus) = invariant_eigenstates(gamma, beta);
        InvariantFrame {
            matrix: invariant_matrix(gamma, beta, omega_0),
            phi_0,
            phi_plus,
            phi_minus,
            omega_0,
        }
    }

    pub fn mode(&self, mode: Mode) -> StateVector {
        match mode {
            Mode::Zero => self.phi_0,
            Mode::Plus => self.phi_plus,
            Mode::Minus => self.phi_minus,
        }
    }

    /// Eigenvalue of `mode` for the constructed matrix, `label * Omega_0 / 2`.
    pub fn eigenvalue(&self, mode: Mode) -> f64 {
        mode.label() * 0.5 * self.omega_0
    }
}

/// Frobenius norm of `[H, I]`.
pub fn commutator_defect(h: &HermitianOperator3, i: &HermitianOperator3) -> f64 {
    frobenius_norm(&h.commutator(i))
}

/// Angle rates `(gamma_dot, beta_dot)` implied by the given Rabi frequencies.
pub fn angle_rates(gamma: f64, beta: f64, omega_p: f64, omega_s: f64) -> (f64, f64) {
    let (sb, cb) = beta.sin_cos();
    let gamma_dot = 0.5 * (omega_p * cb - omega_s * sb);
    let beta_dot = 0.5 * gamma.tan() * (omega_s * cb + omega_p * sb);
    (gamma_dot, beta_dot)
}

/// Norm of `dI/dt = dI/dt|_explicit - i [I, H]` at time `t`, with the
/// explicit derivative taken by central differences of step `step`.
pub fn invariance_defect<A: AngleTrajectory + ?Sized>(
    angles: &A,
    pulses: &PulseSchedule,
    omega_0: f64,
    t: f64,
    step: f64,
) -> f64 {
    let fwd = angles.angles(t + step);
    let bwd = angles.angles(t - step);
    let now = angles.angles(t);
    let di = (invariant_matrix(fwd.gamma, fwd.beta, omega_0).matrix()
        - invariant_matrix(bwd.gamma, bwd.beta, omega_0).matrix())
        / Complex64::new(2.0 * step, 0.0);
    let inv = invariant_matrix(now.gamma, now.beta, omega_0);
    let total = di - inv.commutator(&pulses.hamiltonian(t)) * Complex64::i();
    frobenius_norm(&total)
}

/// Lewis-Riesenfeld phase `alpha_mode(t)`.
///
/// `alpha_0 = 0`; `alpha_+- = -+ int_0^t [b' sin g + (Omega_p sin b + Omega_s cos b) cos g / 2]`.
pub fn lr_phase<A: AngleTrajectory + ?Sized>(
    mode: Mode,
    angles: &A,
    pulses: &PulseSchedule,
    t: f64,
) -> Result<f64> {
    if !(0.0..=angles.t_f()).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "phase time {t} outside [0, {}]",
            angles.t_f()
        )));
    }
    lr_phase_between(mode, angles, pulses, 0.0, t)
}

/// Phase `alpha_mode` accumulated over `[t0, t1]`.
pub fn lr_phase_between<A: AngleTrajectory + ?Sized>(
    mode: Mode,
    angles: &A,
    pulses: &PulseSchedule,
    t0: f64,
    t1: f64,
) -> Result<f64> {
    if mode == Mode::Zero {
        return Ok(0.0);
    }
    let integrand = |s: f64| {
        let a = angles.angles(s);
        let (op, os) = pulses.rabi(s);
        let (sb, cb) = a.beta.sin_cos();
        let (sg, cg) = a.gamma.sin_cos();
        a.beta_dot * sg + 0.5 * (op * sb + os * cb) * cg
    };
    let integral = integrate(integrand, t0, t1, PHASE_TOLERANCE)?.value;
    Ok(-mode.label() * integral)
}

/// Mode amplitudes `c_n = <phi_n(gamma, beta)|state>`, indexed by [`Mode::index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAmplitudes(pub [Complex64; 3]);

impl ModeAmplitudes {
    pub fn get(&self, mode: Mode) -> Complex64 {
        self.0[mode.index()]
    }

    pub fn total_weight(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }
}

pub fn decompose(state: &StateVector, gamma: f64, beta: f64) -> ModeAmplitudes {
    let (p0, pp, pm) = invariant_eigenstates(gamma, beta);
    ModeAmplitudes([p0.inner(state), pp.inner(state), pm.inner(state)])
}

/// Constant mode amplitudes of an initial state plus the phases accumulated
/// up to some time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeDecomposition {
    pub amplitudes: ModeAmplitudes,
    pub phases: [f64; 3],
}

impl ModeDecomposition {
    /// Decomposes `initial` at `t = 0` and accumulates phases to `t`.
    pub fn at<A: AngleTrajectory + ?Sized>(
        initial: &StateVector,
        angles: &A,
        pulses: &PulseSchedule,
        t: f64,
    ) -> Result<Self> {
        let a0 = angles.angles(0.0);
        let amplitudes = decompose(initial, a0.gamma, a0.beta);
        let mut phases = [0.0; 3];
        for mode in Mode::ALL {
            phases[mode.index()] = lr_phase(mode, angles, pulses, t)?;
        }
        Ok(ModeDecomposition { amplitudes, phases })
    }

    /// `sum_n C_n e^{i alpha_n} phi_n(gamma, beta)`.
    pub fn state(&self, gamma: f64, beta: f64) -> StateVector {
        let (p0, pp, pm) = invariant_eigenstates(gamma, beta);
        [p0, pp, pm]
            .into_iter()
            .zip(self.amplitudes.0.iter().zip(self.phases))
            .map(|(phi, (c, alpha))| (c * Complex64::from_polar(1.0, alpha)) * phi)
            .fold(StateVector::from_amplitudes([0.0.into(); 3]), |acc, v| {
                acc + v
            })
    }
}

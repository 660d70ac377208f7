//! Inverse engineering: choose `(gamma, beta)` first, then read off the
//! pump and Stokes fields that make them an invariant trajectory.
//!
//! ```text
//! Omega_s = 2 (b' cot g cos b - g' sin b)
//! Omega_p = 2 (b' cot g sin b + g' cos b)
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariant::{invariant_eigenstates, AngleTrajectory, Angles};
use crate::pulse::PulseSchedule;
use crate::state::StateVector;

/// Minimum admissible `|sin gamma|` during synthesis.
pub const SIN_GAMMA_FLOOR: f64 = 1e-6;
/// Number of intervals in the singularity scan.
pub const SINGULARITY_SCAN: usize = 10_000;
/// Boundary residuals above this are reported as failures.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolKind {
    /// Constant `gamma = eps`, linear `beta`, started in the invariant mode.
    One,
    /// Polynomial ansatz populating level 2 up to `sin^2(delta)`.
    Two,
    /// Protocol-1 pulses started from the bare state `|1>`.
    Three,
}

impl ProtocolKind {
    pub fn number(self) -> u8 {
        match self {
            ProtocolKind::One => 1,
            ProtocolKind::Two => 2,
            ProtocolKind::Three => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(ProtocolKind::One),
            2 => Some(ProtocolKind::Two),
            3 => Some(ProtocolKind::Three),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitialState {
    /// `phi_0(0)`, the zero-eigenvalue invariant mode at `t = 0`.
    InvariantMode0,
    /// Bare state `|1>`.
    Bare1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    pub kind: ProtocolKind,
    pub epsilon: f64,
    pub t_f: f64,
    /// Peak of `gamma` at `t_f / 2`; Protocol 2 only.
    pub delta: Option<f64>,
    pub initial: InitialState,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidDelta(delta))
    }
}

fn check_duration(t_f: f64) -> Result<()> {
    if t_f.is_finite() && t_f > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDuration(t_f))
    }
}

impl ProtocolSpec {
    pub fn protocol1(epsilon: f64, t_f: f64) -> Result<Self> {
        let spec = ProtocolSpec {
            kind: ProtocolKind::One,
            epsilon,
            t_f,
            delta: None,
            initial: InitialState::InvariantMode0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn protocol2(epsilon: f64, delta: f64, t_f: f64) -> Result<Self> {
        let spec = ProtocolSpec {
            kind: ProtocolKind::Two,
            epsilon,
            t_f,
            delta: Some(delta),
            initial: InitialState::InvariantMode0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn protocol3(epsilon: f64, t_f: f64) -> Result<Self> {
        let spec = ProtocolSpec {
            kind: ProtocolKind::Three,
            epsilon,
            t_f,
            delta: None,
            initial: InitialState::Bare1,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_initial(mut self, initial: InitialState) -> Result<Self> {
        self.initial = initial;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        check_duration(self.t_f)?;
        match self.kind {
            ProtocolKind::Two => match self.delta {
                Some(d) => check_delta(d),
                None => Err(Error::InvalidParameter("protocol 2 requires delta".into())),
            },
            ProtocolKind::One | ProtocolKind::Three => {
                if self.delta.is_some() {
                    return Err(Error::InvalidParameter(format!(
                        "delta only applies to protocol 2, not protocol {}",
                        self.kind.number()
                    )));
                }
                if self.kind == ProtocolKind::Three && self.initial != InitialState::Bare1 {
                    return Err(Error::InvalidParameter(
                        "protocol 3 always starts from the bare state |1>".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn design(&self) -> Result<Design> {
        self.validate()?;
        let angles = match self.kind {
            ProtocolKind::One | ProtocolKind::Three => {
                ProtocolAngles::Linear(LinearSweep::new(self.epsilon, self.t_f)?)
            }
            ProtocolKind::Two => ProtocolAngles::Polynomial(PolynomialAnsatz::solve(
                self.epsilon,
                self.delta.expect("validated"),
                self.t_f,
            )?),
        };
        let pulses = synthesize_pulses(&angles)?;
        let initial_state = match self.initial {
            InitialState::Bare1 => StateVector::bare(1),
            InitialState::InvariantMode0 => {
                let a = angles.angles(0.0);
                invariant_eigenstates(a.gamma, a.beta).0
            }
        };
        Ok(Design {
            spec: *self,
            angles,
            pulses,
            initial_state,
        })
    }
}

/// `gamma = eps`, `beta = pi t / (2 t_f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSweep {
    pub epsilon: f64,
    pub t_f: f64,
}

impl LinearSweep {
    pub fn new(epsilon: f64, t_f: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        check_duration(t_f)?;
        Ok(LinearSweep { epsilon, t_f })
    }
}

impl AngleTrajectory for LinearSweep {
    fn t_f(&self) -> f64 {
        self.t_f
    }

    fn angles(&self, t: f64) -> Angles {
        let rate = PI / (2.0 * self.t_f);
        Angles {
            gamma: self.epsilon,
            beta: rate * t,
            gamma_dot: 0.0,
            beta_dot: rate,
        }
    }
}

/// Quartic `gamma(t) = sum a_j t^j` and cubic `beta(t) = sum b_j t^j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolynomialAnsatz {
    pub gamma_coeffs: [f64; 5],
    pub beta_coeffs: [f64; 4],
    pub t_f: f64,
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

fn horner_derivative(coeffs: &[f64], t: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (j, &c)| acc * t + j as f64 * c)
}

impl PolynomialAnsatz {
    /// Solves the boundary problem
    /// `gamma(0) = gamma(t_f) = eps`, `gamma'(0) = gamma'(t_f) = 0`,
    /// `gamma(t_f/2) = delta`, `beta(0) = 0`, `beta(t_f) = pi/2`,
    /// `beta'(0) = beta'(t_f) = 0`.
    pub fn solve(epsilon: f64, delta: f64, t_f: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        check_delta(delta)?;
        check_duration(t_f)?;

        // Rows are value/derivative conditions in the monomial basis of s = t / t_f.
        let value = |s: f64, n: usize| (0..n).map(|j| s.powi(j as i32)).collect::<Vec<_>>();
        let slope = |s: f64, n: usize| {
            (0..n)
                .map(|j| {
                    if j == 0 {
                        0.0
                    } else {
                        j as f64 * s.powi(j as i32 - 1)
                    }
                })
                .collect::<Vec<_>>()
        };

        let gamma_rows = [
            value(0.0, 5),
            slope(0.0, 5),
            value(1.0, 5),
            slope(1.0, 5),
            value(0.5, 5),
        ];
        let gamma_matrix = SMatrix::<f64, 5, 5>::from_fn(|r, c| gamma_rows[r][c]);
        let gamma_rhs = SVector::<f64, 5>::from([epsilon, 0.0, epsilon, 0.0, delta]);
        let gamma_s = gamma_matrix
            .lu()
            .solve(&gamma_rhs)
            .ok_or_else(|| Error::InvalidParameter("singular gamma boundary system".into()))?;

        let beta_rows = [value(0.0, 4), slope(0.0, 4), value(1.0, 4), slope(1.0, 4)];
        let beta_matrix = SMatrix::<f64, 4, 4>::from_fn(|r, c| beta_rows[r][c]);
        let beta_rhs = SVector::<f64, 4>::from([0.0, 0.0, FRAC_PI_2, 0.0]);
        let beta_s = beta_matrix
            .lu()
            .solve(&beta_rhs)
            .ok_or_else(|| Error::InvalidParameter("singular beta boundary system".into()))?;

        let mut gamma_coeffs = [0.0; 5];
        for (j, c) in gamma_coeffs.iter_mut().enumerate() {
            *c = gamma_s[j] / t_f.powi(j as i32);
        }
        let mut beta_coeffs = [0.0; 4];
        for (j, c) in beta_coeffs.iter_mut().enumerate() {
            *c = beta_s[j] / t_f.powi(j as i32);
        }
        Ok(PolynomialAnsatz {
            gamma_coeffs,
            beta_coeffs,
            t_f,
        })
    }
}

impl AngleTrajectory for PolynomialAnsatz {
    fn t_f(&self) -> f64 {
        self.t_f
    }

    fn angles(&self, t: f64) -> Angles {
        Angles {
            gamma: horner(&self.gamma_coeffs, t),
            beta: horner(&self.beta_coeffs, t),
            gamma_dot: horner_derivative(&self.gamma_coeffs, t),
            beta_dot: horner_derivative(&self.beta_coeffs, t),
        }
    }
}

/// Angle trajectory of one of the built-in protocols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProtocolAngles {
    Linear(LinearSweep),
    Polynomial(PolynomialAnsatz),
}

impl AngleTrajectory for ProtocolAngles {
    fn t_f(&self) -> f64 {
        match self {
            ProtocolAngles::Linear(a) => a.t_f(),
            ProtocolAngles::Polynomial(a) => a.t_f(),
        }
    }

    fn angles(&self, t: f64) -> Angles {
        match self {
            ProtocolAngles::Linear(a) => a.angles(t),
            ProtocolAngles::Polynomial(a) => a.angles(t),
        }
    }
}

/// A designed protocol: angles, the fields synthesised from them, and the
/// state the run starts in.
#[derive(Debug, Clone)]
pub struct Design {
    pub spec: ProtocolSpec,
    pub angles: ProtocolAngles,
    pub pulses: PulseSchedule,
    pub initial_state: StateVector,
}

/// `(Omega_p, Omega_s)` required to drive the given angles.
pub fn rabi_from_angles(a: Angles) -> (f64, f64) {
    let cot = a.gamma.cos() / a.gamma.sin();
    let (sb, cb) = a.beta.sin_cos();
    let omega_s = 2.0 * (a.beta_dot * cot * cb - a.gamma_dot * sb);
    let omega_p = 2.0 * (a.beta_dot * cot * sb + a.gamma_dot * cb);
    (omega_p, omega_s)
}

/// Synthesises the pump/Stokes schedule for an angle trajectory.
///
/// Fails with [`Error::SingularAngle`] if `|sin gamma|` drops below
/// [`SIN_GAMMA_FLOOR`] anywhere on a [`SINGULARITY_SCAN`]-interval scan.
pub fn synthesize_pulses<A>(angles: &A) -> Result<PulseSchedule>
where
    A: AngleTrajectory + Clone + 'static,
{
    let t_f = angles.t_f();
    check_duration(t_f)?;
    for k in 0..=SINGULARITY_SCAN {
        let t = t_f * k as f64 / SINGULARITY_SCAN as f64;
        let sin_gamma = angles.angles(t).gamma.sin();
        if sin_gamma.is_nan() || sin_gamma.abs() < SIN_GAMMA_FLOOR {
            return Err(Error::SingularAngle { t, sin_gamma });
        }
    }
    let owned = angles.clone();
    PulseSchedule::new(t_f, move |t| rabi_from_angles(owned.angles(t)))
}

pub fn protocol1(epsilon: f64, t_f: f64) -> Result<(LinearSweep, PulseSchedule)> {
    let angles = LinearSweep::new(epsilon, t_f)?;
    let pulses = synthesize_pulses(&angles)?;
    Ok((angles, pulses))
}

pub fn protocol2(epsilon: f64, delta: f64, t_f: f64) -> Result<(PolynomialAnsatz, PulseSchedule)> {
    let ansatz = PolynomialAnsatz::solve(epsilon, delta, t_f)?;
    let pulses = synthesize_pulses(&ansatz)?;
    Ok((ansatz, pulses))
}

/// Protocol-1 pulses with the bare initial state `|1>`.
pub fn protocol3(epsilon: f64, t_f: f64) -> Result<(PulseSchedule, StateVector)> {
    let (_, pulses) = protocol1(epsilon, t_f)?;
    Ok((pulses, StateVector::bare(1)))
}

/// `arcsin(1 / (4N))`: the N-th epsilon at which the three invariant modes
/// recombine into perfect transfer from `|1>`.
pub fn perfect_epsilon(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "perfect-transfer order N must be >= 1".into(),
        ));
    }
    Ok((1.0 / (4.0 * n as f64)).asin())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub checks: Vec<BoundaryCheck>,
}

impl BoundaryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundaryCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Residuals of every boundary condition that applies to `spec.kind`.
pub fn validate_boundary_conditions<A: AngleTrajectory + ?Sized>(
    angles: &A,
    spec: &ProtocolSpec,
) -> BoundaryReport {
    let t_f = angles.t_f();
    let start = angles.angles(0.0);
    let end = angles.angles(t_f);
    let eps = spec.epsilon;
    let mut items = vec![
        ("gamma(0)", eps, start.gamma),
        ("gamma_dot(0)", 0.0, start.gamma_dot),
        ("gamma(t_f)", eps, end.gamma),
        ("gamma_dot(t_f)", 0.0, end.gamma_dot),
        ("beta(0)", 0.0, start.beta),
        ("beta(t_f)", FRAC_PI_2, end.beta),
    ];
    if spec.kind == ProtocolKind::Two {
        let mid = angles.angles(0.5 * t_f);
        items.push(("gamma(t_f/2)", spec.delta.unwrap_or(f64::NAN), mid.gamma));
        items.push(("beta_dot(0)", 0.0, start.beta_dot));
        items.push(("beta_dot(t_f)", 0.0, end.beta_dot));
    }
    let checks = items
        .into_iter()
        .map(|(name, expected, actual)| {
            let residual = (actual - expected).abs();
            BoundaryCheck {
                name: name.to_string(),
                expected,
                actual,
                residual,
                passed: residual <= BOUNDARY_TOLERANCE,
            }
        })
        .collect();
    BoundaryReport { checks }
}

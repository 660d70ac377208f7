//! Time-dependent Schrodinger propagation, `i dPsi/dt = H(t) Psi`.
//!
//! Every step is a product of exponentials of Hermitian combinations of
//! sampled Hamiltonians, so it is unitary for any step size. Two schemes:
//!
//! * [`Scheme::Midpoint`]: `exp(-i H(t + dt/2) dt)`, second order;
//! * [`Scheme::Magnus4`] (default): the fourth-order commutator-free Magnus
//!   integrator `exp(-i dt (a2 H1 + a1 H2)) exp(-i dt (a1 H1 + a2 H2))` with
//!   `H1, H2` sampled at the two Gauss-Legendre nodes.
//!
//! On resonance every exponent is `(Omega/2) M` with `M = a K1 + b K2`,
//! `a^2 + b^2 = 1`, and `M^3 = M`, so the exponential has the closed form
//! `1 - i sin(phi) M + (cos(phi) - 1) M^2`, `phi = Omega dt / 2`. Detuned
//! steps fall back to a Hermitian eigendecomposition.

use std::io::{self, Write};

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pulse::{fmt_float, PulseSchedule};
use crate::state::StateVector;

/// Default step is 1 ns.
pub const DEFAULT_STEP_US: f64 = 1e-3;
pub const MIN_STEPS: usize = 100;

/// Default step count for a run of duration `t_f`: 4000 at 4 us.
pub fn default_steps(t_f: f64) -> usize {
    ((t_f / DEFAULT_STEP_US).ceil() as usize).max(MIN_STEPS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    Midpoint,
    #[default]
    Magnus4,
}

const SQRT3_6: f64 = 0.288_675_134_594_812_9;
// Gauss-Legendre nodes 1/2 -+ sqrt(3)/6 and the matching exponent weights.
const GL_NODES: [f64; 2] = [0.5 - SQRT3_6, 0.5 + SQRT3_6];
const CF4_A1: f64 = 0.25 - SQRT3_6;
const CF4_A2: f64 = 0.25 + SQRT3_6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    n_steps: usize,
    t_f: f64,
    sample_stride: usize,
    scheme: Scheme,
}

impl TimeGrid {
    pub fn new(n_steps: usize, t_f: f64, sample_stride: usize) -> Result<Self> {
        if n_steps < MIN_STEPS {
            return Err(Error::InvalidParameter(format!(
                "n_steps = {n_steps} is below the minimum of {MIN_STEPS}"
            )));
        }
        if sample_stride == 0 {
            return Err(Error::InvalidParameter(
                "sample_stride must be positive".into(),
            ));
        }
        if !(t_f.is_finite() && t_f > 0.0) {
            return Err(Error::InvalidDuration(t_f));
        }
        Ok(TimeGrid {
            n_steps,
            t_f,
            sample_stride,
            scheme: Scheme::default(),
        })
    }

    /// Grid that records only the two endpoints.
    pub fn endpoints(n_steps: usize, t_f: f64) -> Result<Self> {
        Self::new(n_steps, t_f, n_steps)
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn t_f(&self) -> f64 {
        self.t_f
    }

    pub fn sample_stride(&self) -> usize {
        self.sample_stride
    }

    pub fn dt(&self) -> f64 {
        self.t_f() / self.n_steps as f64
    }

    pub fn time(&self, step: usize) -> f64 {
        if step == self.n_steps {
            self.t_f()
        } else {
            self.t_f() * step as f64 / self.n_steps as f64
        }
    }

    fn is_sample(&self, step: usize) -> bool {
        step.is_multiple_of(self.sample_stride) || step == self.n_steps
    }

    /// Same sample times with twice as many steps.
    pub fn refined(&self) -> Self {
        TimeGrid {
            n_steps: 2 * self.n_steps,
            t_f: self.t_f,
            sample_stride: 2 * self.sample_stride,
            scheme: self.scheme,
        }
    }
}

/// States and populations at the sampled times of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub populations: Vec<[f64; 3]>,
}

impl Trajectory {
    pub fn final_state(&self) -> StateVector {
        *self
            .states
            .last()
            .expect("trajectory has at least two samples")
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm_sqr().sqrt() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Population of `level` (1-based) at the sample nearest `t`.
    pub fn population_near(&self, level: usize, t: f64) -> f64 {
        let k = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(k, _)| k)
            .expect("non-empty trajectory");
        self.populations[k][level - 1]
    }

    /// CSV with columns
    /// `t_us,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,p1,p2,p3`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t_us,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,p1,p2,p3")?;
        for ((t, s), p) in self.times.iter().zip(&self.states).zip(&self.populations) {
            let a = s.amplitudes();
            write!(out, "{}", fmt_float(*t))?;
            for c in a {
                write!(out, ",{},{}", fmt_float(c.re), fmt_float(c.im))?;
            }
            writeln!(
                out,
                ",{},{},{}",
                fmt_float(p[0]),
                fmt_float(p[1]),
                fmt_float(p[2])
            )?;
        }
        Ok(())
    }
}

fn resonant_step(omega_p: f64, omega_s: f64, dt: f64) -> Matrix3<Complex64> {
    let omega = omega_p.hypot(omega_s);
    if omega == 0.0 {
        return Matrix3::identity();
    }
    let (a, b) = (omega_p / omega, omega_s / omega);
    let phi = 0.5 * omega * dt;
    let (sin, cos) = phi.sin_cos();
    let m = Matrix3::new(0.0, a, 0.0, a, 0.0, b, 0.0, b, 0.0);
    let m2 = m * m;
    let mut u = Matrix3::<Complex64>::identity();
    for r in 0..3 {
        for c in 0..3 {
            u[(r, c)] += Complex64::new((cos - 1.0) * m2[(r, c)], -sin * m[(r, c)]);
        }
    }
    u
}

fn hermitian_step(h: &Matrix3<Complex64>, dt: f64) -> Matrix3<Complex64> {
    let eig = SymmetricEigen::new(*h);
    let v = eig.eigenvectors;
    let phases =
        Matrix3::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * dt)));
    v * phases * v.adjoint()
}

fn rabi_checked(pulses: &PulseSchedule, t: f64) -> Result<(f64, f64)> {
    let (op, os) = pulses.rabi(t);
    if op.is_finite() && os.is_finite() {
        Ok((op, os))
    } else {
        Err(Error::InvalidParameter(format!(
            "non-finite Rabi frequency at t = {t} us"
        )))
    }
}

/// `exp(-i dt H)` for `H` with the given Rabi frequencies and the schedule's detunings.
fn exponential(pulses: &PulseSchedule, omega_p: f64, omega_s: f64, dt: f64) -> Matrix3<Complex64> {
    if pulses.is_resonant() {
        resonant_step(omega_p, omega_s, dt)
    } else {
        let h = crate::operators::hamiltonian_detuned(
            omega_p,
            omega_s,
            pulses.delta_p(),
            pulses.delta_3(),
        );
        hermitian_step(h.matrix(), dt)
    }
}

fn step_operator(
    pulses: &PulseSchedule,
    scheme: Scheme,
    t0: f64,
    dt: f64,
) -> Result<Matrix3<Complex64>> {
    match scheme {
        Scheme::Midpoint => {
            let (op, os) = rabi_checked(pulses, t0 + 0.5 * dt)?;
            Ok(exponential(pulses, op, os, dt))
        }
        Scheme::Magnus4 => {
            let (p1, s1) = rabi_checked(pulses, t0 + GL_NODES[0] * dt)?;
            let (p2, s2) = rabi_checked(pulses, t0 + GL_NODES[1] * dt)?;
            // a1 + a2 = 1/2, so each factor is a half step of H with
            // fields 2 (a f1 + b f2); constant detunings keep weight 1/2.
            let first = exponential(
                pulses,
                2.0 * (CF4_A2 * p1 + CF4_A1 * p2),
                2.0 * (CF4_A2 * s1 + CF4_A1 * s2),
                0.5 * dt,
            );
            let second = exponential(
                pulses,
                2.0 * (CF4_A1 * p1 + CF4_A2 * p2),
                2.0 * (CF4_A1 * s1 + CF4_A2 * s2),
                0.5 * dt,
            );
            Ok(second * first)
        }
    }
}

fn check_inputs(pulses: &PulseSchedule, initial: &StateVector, grid: &TimeGrid) -> Result<()> {
    let n = initial.norm_sqr();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(n));
    }
    if (grid.t_f() - pulses.t_f()).abs() > 1e-12 * pulses.t_f() {
        return Err(Error::InvalidParameter(format!(
            "grid duration {} does not match pulse duration {}",
            grid.t_f(),
            pulses.t_f()
        )));
    }
    Ok(())
}

/// Integrates from `initial` over `[0, t_f]`, recording every
/// `sample_stride`-th step plus both endpoints. No renormalisation.
pub fn propagate(
    pulses: &PulseSchedule,
    initial: &StateVector,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    check_inputs(pulses, initial, grid)?;
    let dt = grid.dt();
    let a = initial.amplitudes();
    let mut psi = Vector3::new(a[0], a[1], a[2]);
    let capacity = grid.n_steps() / grid.sample_stride() + 2;
    let mut traj = Trajectory {
        times: Vec::with_capacity(capacity),
        states: Vec::with_capacity(capacity),
        populations: Vec::with_capacity(capacity),
    };
    let mut record = |step: usize, psi: &Vector3<Complex64>| {
        let s = StateVector::from_amplitudes([psi[0], psi[1], psi[2]]);
        traj.times.push(grid.time(step));
        traj.populations.push(s.populations());
        traj.states.push(s);
    };
    record(0, &psi);
    for k in 0..grid.n_steps() {
        let t0 = k as f64 * dt;
        psi = step_operator(pulses, grid.scheme(), t0, dt)? * psi;
        if grid.is_sample(k + 1) {
            record(k + 1, &psi);
        }
    }
    Ok(traj)
}

/// Final state only.
pub fn evolve(
    pulses: &PulseSchedule,
    initial: &StateVector,
    n_steps: usize,
) -> Result<StateVector> {
    let grid = TimeGrid::endpoints(n_steps, pulses.t_f())?;
    Ok(propagate(pulses, initial, &grid)?.final_state())
}

/// Largest amplitude deviation between runs with `n_steps` and `2 n_steps`
/// at their common sample times.
pub fn convergence_check(
    pulses: &PulseSchedule,
    initial: &StateVector,
    grid: &TimeGrid,
) -> Result<f64> {
    let coarse = propagate(pulses, initial, grid)?;
    let fine = propagate(pulses, initial, &grid.refined())?;
    Ok(coarse
        .states
        .iter()
        .zip(&fine.states)
        .map(|(a, b)| a.max_deviation(b))
        .fold(0.0, f64::max))
}

/// [`propagate`] preceded by a step-halving check at `tolerance`.
pub fn propagate_checked(
    pulses: &PulseSchedule,
    initial: &StateVector,
    grid: &TimeGrid,
    tolerance: f64,
) -> Result<Trajectory> {
    let deviation = convergence_check(pulses, initial, grid)?;
    if deviation.is_nan() || deviation > tolerance {
        return Err(Error::StepSizeError {
            n_steps: grid.n_steps(),
            deviation,
            tolerance,
        });
    }
    propagate(pulses, initial, grid)
}

//! Design, propagate and score a single protocol run.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::invariant::{decompose, lr_phase_between, AngleTrajectory, Mode, ModeAmplitudes};
use crate::metrics::RunMetrics;
use crate::propagator::{default_steps, propagate, TimeGrid, Trajectory};
use crate::protocols::{Design, ProtocolSpec};
use crate::pulse::fmt_float;

/// Approximate number of recorded samples when no stride is given.
const DEFAULT_SAMPLES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub protocol: ProtocolSpec,
    /// One-photon detuning, rad/us.
    pub delta_p: f64,
    /// Two-photon detuning, rad/us.
    pub delta_3: f64,
    /// `None` selects [`default_steps`] for the protocol duration.
    pub n_steps: Option<usize>,
    pub sample_stride: Option<usize>,
}

impl RunSpec {
    pub fn new(protocol: ProtocolSpec) -> Self {
        RunSpec {
            protocol,
            delta_p: 0.0,
            delta_3: 0.0,
            n_steps: None,
            sample_stride: None,
        }
    }

    pub fn steps(&self) -> usize {
        self.n_steps
            .unwrap_or_else(|| default_steps(self.protocol.t_f))
    }

    pub fn stride(&self) -> usize {
        self.sample_stride
            .unwrap_or_else(|| (self.steps() / DEFAULT_SAMPLES).max(1))
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.steps(), self.protocol.t_f, self.stride())
    }

    /// Designs the protocol and applies the detunings to its pulses.
    pub fn design(&self) -> Result<Design> {
        let mut design = self.protocol.design()?;
        design.pulses = design.pulses.with_detunings(self.delta_p, self.delta_3);
        Ok(design)
    }
}

/// A full run: the design, the sampled evolution, the invariant-mode
/// amplitudes `<phi_n(t)|Psi(t)>` and accumulated Lewis-Riesenfeld phases at
/// each sample, and the scalar metrics.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub spec: RunSpec,
    pub design: Design,
    pub trajectory: Trajectory,
    pub modes: Vec<ModeAmplitudes>,
    pub phases: Vec<[f64; 3]>,
    pub metrics: RunMetrics,
}

impl RunResult {
    /// CSV with columns
    /// `t_us,abs_c0,abs_cplus,abs_cminus,arg_cplus,alpha_plus,alpha_minus`.
    pub fn write_modes_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "t_us,abs_c0,abs_cplus,abs_cminus,arg_cplus,alpha_plus,alpha_minus"
        )?;
        for ((t, m), a) in self
            .trajectory
            .times
            .iter()
            .zip(&self.modes)
            .zip(&self.phases)
        {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                fmt_float(*t),
                fmt_float(m.get(Mode::Zero).norm()),
                fmt_float(m.get(Mode::Plus).norm()),
                fmt_float(m.get(Mode::Minus).norm()),
                fmt_float(m.get(Mode::Plus).arg()),
                fmt_float(a[1]),
                fmt_float(a[2]),
            )?;
        }
        Ok(())
    }
}

pub fn simulate(spec: &RunSpec) -> Result<RunResult> {
    let design = spec.design()?;
    let trajectory = propagate(&design.pulses, &design.initial_state, &spec.grid()?)?;
    let metrics = RunMetrics::evaluate(&design.pulses, &trajectory)?;

    let modes = trajectory
        .times
        .iter()
        .zip(&trajectory.states)
        .map(|(&t, psi)| {
            let a = design.angles.angles(t);
            decompose(psi, a.gamma, a.beta)
        })
        .collect();

    let mut phases = Vec::with_capacity(trajectory.times.len());
    let mut acc = [0.0; 3];
    phases.push(acc);
    for w in trajectory.times.windows(2) {
        for mode in Mode::ALL {
            acc[mode.index()] +=
                lr_phase_between(mode, &design.angles, &design.pulses, w[0], w[1])?;
        }
        phases.push(acc);
    }

    Ok(RunResult {
        spec: *spec,
        design,
        trajectory,
        modes,
        phases,
        metrics,
    })
}

/// Metrics only, recording just the endpoints plus `stride` samples for the
/// peak-population estimate. Used by sweeps.
pub fn simulate_metrics(spec: &RunSpec) -> Result<RunMetrics> {
    let design = spec.design()?;
    let trajectory = propagate(&design.pulses, &design.initial_state, &spec.grid()?)?;
    RunMetrics::evaluate(&design.pulses, &trajectory)
}

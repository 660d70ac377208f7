//! Parameter sets for the reference figures (t_f = 4 us throughout).

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::Result;
use crate::protocols::{perfect_epsilon, InitialState, ProtocolSpec};
use crate::run::RunSpec;
use crate::sweep::linspace;

pub const T_F: f64 = 4.0;

/// Protocol 1, eps = 0.2, started in `phi_0(0)`.
pub fn figure2() -> Result<RunSpec> {
    Ok(RunSpec::new(ProtocolSpec::protocol1(0.2, T_F)?))
}

/// Protocol 2, eps = 0.2, delta = pi/4.
pub fn figure3() -> Result<RunSpec> {
    Ok(RunSpec::new(ProtocolSpec::protocol2(0.2, FRAC_PI_4, T_F)?))
}

/// The three epsilon curves of the delta sweep.
pub const FIGURE4_EPSILONS: [f64; 3] = [0.2, 0.02, 0.002];

/// delta = 0.05 followed by k pi/16, k = 1..=8.
pub fn figure4_deltas() -> Vec<f64> {
    std::iter::once(0.05)
        .chain((1..=8).map(|k| k as f64 * PI / 16.0))
        .collect()
}

pub fn figure4_template(epsilon: f64) -> Result<RunSpec> {
    Ok(RunSpec::new(ProtocolSpec::protocol2(
        epsilon, FRAC_PI_4, T_F,
    )?))
}

/// 50 points on `[0.05, 0.4]`.
pub fn figure5_epsilons() -> Vec<f64> {
    linspace(0.05, 0.4, 50)
}

/// Fidelity-vs-epsilon templates, both started in `|1>`: Protocol-1 pulses
/// (i.e. Protocol 3) and Protocol-2 pulses with delta = pi/4.
pub fn figure5_templates() -> Result<(RunSpec, RunSpec)> {
    let p3 = RunSpec::new(ProtocolSpec::protocol3(0.2, T_F)?);
    let p2 = RunSpec::new(
        ProtocolSpec::protocol2(0.2, FRAC_PI_4, T_F)?.with_initial(InitialState::Bare1)?,
    );
    Ok((p3, p2))
}

/// Protocol 3 at the first perfect-transfer point `arcsin(1/4)`.
pub fn figure6() -> Result<RunSpec> {
    Ok(RunSpec::new(ProtocolSpec::protocol3(
        perfect_epsilon(1)?,
        T_F,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure4_grid_contains_endpoints() {
        let d = figure4_deltas();
        assert_eq!(d[0], 0.05);
        assert_eq!(*d.last().unwrap(), PI / 2.0);
        assert!(d.windows(2).all(|w| w[1] > w[0]));
    }
}

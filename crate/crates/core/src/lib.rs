//! Fast population transfer in three-level Lambda systems by
//! invariant-based inverse engineering.
//!
//! The pump/Stokes fields are not guessed and then simulated; instead the
//! two angles parametrising a Lewis-Riesenfeld invariant are prescribed with
//! the right boundary values, and the fields are derived from them. Three
//! protocols are provided:
//!
//! 1. constant `gamma = eps` with linear `beta`, giving fidelity `cos eps`;
//! 2. a polynomial ansatz that transiently populates level 2;
//! 3. Protocol-1 pulses started from `|1>`, where the three invariant modes
//!    recombine into perfect transfer at `sin eps = 1/(4N)`.
//!
//! Units: time in us, angular frequencies in rad/us, hbar = 1.

pub mod adiabatic;
pub mod error;
pub mod invariant;
pub mod metrics;
pub mod operators;
pub mod presets;
pub mod propagator;
pub mod protocols;
pub mod pulse;
pub mod quadrature;
pub mod run;
pub mod state;
pub mod sweep;
pub mod units;

pub use adiabatic::{adiabatic_frame, adiabaticity_ratio, AdiabaticFrame};
pub use error::{Error, Result};
pub use invariant::{
    commutator_defect, decompose, invariant_eigenstates, invariant_matrix, lr_phase,
    AngleTrajectory, Angles, InvariantFrame, Mode, ModeAmplitudes, ModeDecomposition,
};
pub use metrics::{
    avg_rabi, energy_cost, fidelity, protocol3_fidelity_closed, sensitivity_closed, RunMetrics,
};
pub use operators::{
    hamiltonian_detuned, hamiltonian_resonant, spin1_operators, HermitianOperator3,
};
pub use propagator::{convergence_check, propagate, TimeGrid, Trajectory};
pub use protocols::{
    perfect_epsilon, protocol1, protocol2, protocol3, synthesize_pulses,
    validate_boundary_conditions, Design, InitialState, PolynomialAnsatz, ProtocolKind,
    ProtocolSpec,
};
pub use pulse::PulseSchedule;
pub use run::{simulate, RunResult, RunSpec};
pub use state::StateVector;
pub use sweep::{sweep, SweepAxis, SweepTable};

//! Time evolution, band-state preparation and pump trajectories.

mod evolve;
mod prepare;
pub mod propagator;
mod pump;
mod state;

pub use evolve::{
    converged_final_state, evolve, propagate, sample_times, EvolutionStats, IntegratorPolicy,
    Observables, Trajectory,
};
pub use prepare::{best_eigenstate, prepare_initial_state, Prepared, AMBIGUITY_TOL, PREPARATION_THRESHOLD};
pub use propagator::Method;
pub use pump::{pump_run, InitialState, PumpConfig, ResultRecord, SCHEMA_VERSION};
pub use state::{expectation, fidelity, StateVector};

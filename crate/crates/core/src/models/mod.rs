//! The driven spin-flip, kink, cluster and higher-order Hamiltonians.

mod drive;
mod hamiltonian;
pub mod operators;
mod spec;

pub use drive::{drive, DriveParams, Rational};
pub use hamiltonian::{
    build_model, effective_rwa_model, CoefficientLayout, DrivenTerm, TimeDependentHamiltonian,
};
pub use operators::{
    bond_op, chain_to_spin_flip, driving_op, excitation_number_op, interaction_op,
    search_chain_to_spin_flip,
    occupation_op, position_op,
};
pub use spec::{apply_disorder, Disorder, DisorderTarget, ModelKind, ModelSpec};

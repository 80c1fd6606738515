//! Hofstadter and Aubry-Andre band topology and the instantaneous spectra
//! of the driven chains.

mod bloch;
mod chern;
mod spectrum;

pub use bloch::{aa_bloch_hamiltonian, aa_real_space, hh_bloch_hamiltonian, AubryAndre, BlochFamily};
pub use chern::{band_data, chern_number, plaquette_flux, BandData, ChernNumber, DEFAULT_GRID, DEGENERACY_TOL};
pub use spectrum::{anti_crossings, default_band_size, instantaneous_band_spectrum, AntiCrossing, SectorSpectrum};

//! Configuration files, experiment drivers, seeding and result files.

mod checks;
mod config;
mod output;
mod seed;
mod sweep;

pub use crate::dynamics::PumpConfig;
pub use checks::{run_interaction_band_check, table1_check, BandCheck, Table1Report, Table1Row, TABLE1_THRESHOLD};
pub use config::{
    log_grid, ChernConfig, DisorderSweepConfig, FrequencySweepConfig, HarnessConfig, OutputConfig,
    SpectrumConfig,
};
pub use output::{config_hash, write_json, write_sweep_csv, write_trajectory_csv};
pub use seed::{derive_seed, splitmix64};
pub use sweep::{
    pump_fidelity, run_disorder_sweep, run_frequency_sweep, Realization, SweepAxis, SweepPoint,
    SweepResult, WORKERS_ENV,
};

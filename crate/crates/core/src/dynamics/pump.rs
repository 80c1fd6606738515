use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::models::{build_model, DriveParams, ModelKind, ModelSpec};
use crate::quantum_info::{band_reference, pattern_state, Partition};

use super::{evolve, fidelity, prepare_initial_state, IntegratorPolicy, Observables, StateVector, Trajectory};

/// Current version of the configuration schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Which eigenstate of `H(0)` starts the pump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum InitialState {
    /// One excitation per unit cell on the most strongly driven site.
    LowestBand,
    /// Excitations on the listed sites (0-based) of every unit cell.
    Cells { sites: Vec<usize> },
}

/// Everything that determines a single pump run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub model: ModelSpec,
    pub drive: DriveParams,
    #[serde(default)]
    pub integrator: IntegratorPolicy,
    #[serde(default = "default_periods")]
    pub n_periods: usize,
    #[serde(default = "default_samples")]
    pub samples_per_period: usize,
    #[serde(default = "default_initial")]
    pub initial: InitialState,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Sites (0-based) of the subsystem `A` of each recorded entropy;
    /// empty selects the first trimer and the trimer heads.
    #[serde(default)]
    pub partitions: Vec<Vec<usize>>,
    #[serde(default)]
    pub seed: u64,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

fn default_periods() -> usize {
    3
}

fn default_samples() -> usize {
    200
}

fn default_initial() -> InitialState {
    InitialState::LowestBand
}

fn default_threshold() -> f64 {
    super::PREPARATION_THRESHOLD
}

impl PumpConfig {
    /// Clean pump of `kind` at the reference drive.
    pub fn reference(kind: ModelKind) -> Self {
        PumpConfig {
            schema_version: SCHEMA_VERSION,
            model: ModelSpec::new(kind, 1.0),
            drive: DriveParams::reference(),
            integrator: IntegratorPolicy::default(),
            n_periods: default_periods(),
            samples_per_period: default_samples(),
            initial: default_initial(),
            threshold: default_threshold(),
            partitions: Vec::new(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.drive.validate()?;
        self.integrator.validate()?;
        if self.n_periods == 0 {
            return Err(Error::Config("n_periods must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::Config(format!("threshold {} outside [0, 1]", self.threshold)));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(json.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn reference_state(&self) -> Result<StateVector> {
        let p = &self.drive;
        match &self.initial {
            InitialState::LowestBand => band_reference(self.model.kind, p, 0.0),
            InitialState::Cells { sites } => {
                let q = p.b.denom() as usize;
                if sites.iter().any(|&s| s >= q) {
                    return Err(Error::Config(format!("cell sites {sites:?} exceed the cell size {q}")));
                }
                let excited: Vec<bool> = (0..p.n).map(|j| sites.contains(&(j % q))).collect();
                pattern_state(self.model.kind, p.n, &excited)
            }
        }
    }
}

/// Outcome of [`pump_run`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResultRecord {
    pub config: PumpConfig,
    pub config_hash: String,
    pub preparation_overlap: f64,
    pub initial_energy: f64,
    pub x_parity: Option<i8>,
    /// `|<psi(0)|psi(n T)>|^2` for the final period.
    pub fidelity: f64,
    /// Displacement per unit cell after each whole period.
    pub displacement_per_period: Vec<f64>,
    pub trajectory: Trajectory,
    pub initial_state: StateVector,
}

/// Prepares the configured band state, pumps it for `n_periods` and
/// records the trajectory.
pub fn pump_run(config: &PumpConfig) -> Result<ResultRecord> {
    config.validate()?;
    let h = build_model(&config.model, &config.drive)?;
    let reference = config.reference_state()?;
    let prepared = prepare_initial_state(&h.at(0.0), &reference, config.threshold)?;
    let mut obs = Observables::for_kind(config.model.kind, config.drive.n)?;
    if !config.partitions.is_empty() {
        obs.partitions = config
            .partitions
            .iter()
            .map(|a| Partition::new(config.drive.n, a))
            .collect::<Result<_>>()?;
    }
    let t_final = config.n_periods as f64 * h.period();
    let trajectory = evolve(
        &h,
        &prepared.state,
        t_final,
        &config.integrator,
        &obs,
        config.samples_per_period,
    )?;
    let displacement_per_period = (1..=config.n_periods)
        .map(|k| trajectory.displacement_after(k).unwrap_or(f64::NAN))
        .collect();
    Ok(ResultRecord {
        config_hash: config.hash(),
        config: config.clone(),
        preparation_overlap: prepared.overlap,
        initial_energy: prepared.energy,
        x_parity: prepared.x_parity,
        fidelity: fidelity(&prepared.state, &trajectory.final_state)?,
        displacement_per_period,
        trajectory,
        initial_state: prepared.state,
    })
}

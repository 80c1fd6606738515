use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{PumpConfig, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::models::{DisorderTarget, ModelKind, Rational};

/// Output location for a command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("out") }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisorderSweepConfig {
    pub deltas: Vec<f64>,
    pub targets: Vec<DisorderTarget>,
    pub interactions: Vec<f64>,
    pub realizations: usize,
    pub n_periods: usize,
}

impl Default for DisorderSweepConfig {
    fn default() -> Self {
        DisorderSweepConfig {
            deltas: (0..=12).map(|k| 0.25 * k as f64).collect(),
            targets: vec![DisorderTarget::G, DisorderTarget::J],
            interactions: vec![0.0, 1.0],
            realizations: 20,
            n_periods: 3,
        }
    }
}

/// `count` points spaced evenly in `ln omega` from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|k| (lo.ln() + (hi / lo).ln() * k as f64 / (count - 1) as f64).exp())
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrequencySweepConfig {
    pub omegas: Vec<f64>,
    pub interactions: Vec<f64>,
    pub n_periods: usize,
}

impl Default for FrequencySweepConfig {
    fn default() -> Self {
        FrequencySweepConfig {
            omegas: log_grid(0.01, 0.6, 25),
            interactions: vec![0.0, 1.0],
            n_periods: 9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChernConfig {
    pub b: Rational,
    pub band: Option<usize>,
    pub grid: usize,
    pub jx: f64,
    pub jy: f64,
}

impl Default for ChernConfig {
    fn default() -> Self {
        ChernConfig {
            b: Rational::new(1, 3).expect("1/3"),
            band: None,
            grid: crate::topology::DEFAULT_GRID,
            jx: 1.0,
            jy: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub excitations: usize,
    pub samples: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            excitations: 1,
            samples: 200,
        }
    }
}

/// Contents of a configuration file. Only `[pump]` is required.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    #[serde(default = "current_schema")]
    pub schema_version: u32,
    pub pump: PumpConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub disorder: DisorderSweepConfig,
    #[serde(default)]
    pub frequency: FrequencySweepConfig,
    #[serde(default)]
    pub chern: ChernConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
}

fn current_schema() -> u32 {
    SCHEMA_VERSION
}

impl HarnessConfig {
    /// Clean spin-flip pump at the reference drive with default sweeps.
    pub fn reference(kind: ModelKind) -> Self {
        HarnessConfig {
            schema_version: SCHEMA_VERSION,
            pump: PumpConfig::reference(kind),
            output: OutputConfig::default(),
            disorder: DisorderSweepConfig::default(),
            frequency: FrequencySweepConfig::default(),
            chern: ChernConfig::default(),
            spectrum: SpectrumConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.pump.validate()?;
        if self.disorder.realizations == 0 {
            return Err(Error::Config("disorder.realizations must be at least 1".into()));
        }
        if self.disorder.deltas.iter().any(|d| !(*d >= 0.0)) {
            return Err(Error::Config("disorder.deltas must be nonnegative".into()));
        }
        if self.frequency.omegas.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Config("frequency.omegas must be positive".into()));
        }
        Ok(())
    }

    /// Parses TOML, or JSON when `path` ends in `.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: HarnessConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let text = r#"
            [pump]
            seed = 3
            [pump.model]
            kind = "cluster"
            J = 1.0
            [pump.drive]
            n = 9
            g0 = 10.0
            g1 = 3.0
            omega = 0.02
            phi0 = 0.0
            b = "1/3"
        "#;
        let c = HarnessConfig::from_toml(text).unwrap();
        c.validate().unwrap();
        assert_eq!(c.pump.model.kind, ModelKind::Cluster);
        assert_eq!(c.pump.n_periods, 3);
        assert_eq!(c.disorder.realizations, 20);
        assert_eq!(c.frequency.omegas.len(), 25);
        assert!((c.frequency.omegas[24] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn round_trip_and_rejections() {
        let c = HarnessConfig::reference(ModelKind::Kink);
        let back = HarnessConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
        let text = c.to_toml().unwrap().replace("[pump]", "[pump]\nbogus = 1");
        assert!(HarnessConfig::from_toml(&text).is_err());
        let mut old = c.clone();
        old.schema_version = 0;
        assert!(old.validate().is_err());
    }
}

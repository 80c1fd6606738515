use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The dual family of models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ModelKind {
    SpinFlip,
    Kink,
    Cluster,
    /// `r` consecutive `X` letters beyond the cluster term; `r = 0` is the
    /// cluster model itself.
    HigherR(usize),
}

impl ModelKind {
    pub const DUAL_TRIPLE: [ModelKind; 3] = [ModelKind::SpinFlip, ModelKind::Kink, ModelKind::Cluster];

    pub fn name(&self) -> String {
        match self {
            ModelKind::SpinFlip => "spin_flip".into(),
            ModelKind::Kink => "kink".into(),
            ModelKind::Cluster => "cluster".into(),
            ModelKind::HigherR(r) => format!("higher_r:{r}"),
        }
    }
}

impl TryFrom<String> for ModelKind {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ModelKind> for String {
    fn from(k: ModelKind) -> String {
        k.name()
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spin_flip" | "flip" => Ok(ModelKind::SpinFlip),
            "kink" => Ok(ModelKind::Kink),
            "cluster" => Ok(ModelKind::Cluster),
            other => other
                .strip_prefix("higher_r:")
                .and_then(|r| r.parse().ok())
                .map(ModelKind::HigherR)
                .ok_or_else(|| {
                    Error::Config(format!(
                        "unknown model `{other}` (spin_flip, kink, cluster, higher_r:<r>)"
                    ))
                }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DisorderTarget {
    G,
    J,
}

impl FromStr for DisorderTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G" | "g" => Ok(DisorderTarget::G),
            "J" | "j" => Ok(DisorderTarget::J),
            other => Err(Error::Config(format!("disorder target `{other}` is not G or J"))),
        }
    }
}

impl fmt::Display for DisorderTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisorderTarget::G => "G",
            DisorderTarget::J => "J",
        })
    }
}

/// One quenched realization `Delta_j`, uniform on `[-delta, delta]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disorder {
    pub target: DisorderTarget,
    pub delta: f64,
    pub seed: u64,
    pub values: Vec<f64>,
}

impl Disorder {
    pub fn draw(target: DisorderTarget, delta: f64, seed: u64, n: usize) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::Config(format!("disorder strength {delta} must be >= 0")));
        }
        let values = if delta == 0.0 {
            vec![0.0; n]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| rng.random_range(-delta..=delta)).collect()
        };
        Ok(Disorder {
            target,
            delta,
            seed,
            values,
        })
    }

    pub fn offset(&self, target: DisorderTarget, j: usize) -> f64 {
        if self.target == target {
            self.values.get(j).copied().unwrap_or(0.0)
        } else {
            0.0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "K", default)]
    pub k: f64,
    #[serde(default)]
    pub disorder: Option<Disorder>,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, j: f64) -> Self {
        ModelSpec {
            kind,
            j,
            k: 0.0,
            disorder: None,
        }
    }

    pub fn with_interaction(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    fn offset(&self, target: DisorderTarget, j: usize) -> f64 {
        self.disorder.as_ref().map_or(0.0, |d| d.offset(target, j))
    }

    /// `G`-disorder shift at 0-based site `j`.
    pub fn g_offset(&self, j: usize) -> f64 {
        self.offset(DisorderTarget::G, j)
    }

    /// Coupling of the `j`-th bond term, including disorder.
    pub fn coupling(&self, j: usize) -> f64 {
        self.j + self.offset(DisorderTarget::J, j)
    }
}

/// Returns `spec` with a fresh disorder realization on `n` sites.
pub fn apply_disorder(
    spec: &ModelSpec,
    target: DisorderTarget,
    delta: f64,
    seed: u64,
    n: usize,
) -> Result<ModelSpec> {
    let mut out = spec.clone();
    out.disorder = Some(Disorder::draw(target, delta, seed, n)?);
    Ok(out)
}

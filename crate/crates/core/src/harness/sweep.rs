use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{fidelity, prepare_initial_state, propagate, PumpConfig};
use crate::error::{Error, Result};
use crate::models::{apply_disorder, build_model, DisorderTarget};

use super::seed::derive_seed;

/// Environment variable holding the number of sweep workers.
pub const WORKERS_ENV: &str = "DUALPUMP_WORKERS";

/// `|<psi(0)|psi(n T)>|^2` of one configured pump, without recording
/// observables, and the preparation overlap.
pub fn pump_fidelity(config: &PumpConfig) -> Result<(f64, f64)> {
    config.validate()?;
    let h = build_model(&config.model, &config.drive)?;
    let prepared = prepare_initial_state(&h.at(0.0), &config.reference_state()?, config.threshold)?;
    let t_final = config.n_periods as f64 * h.period();
    let (psi, _) = propagate(&h, &prepared.state, &[t_final], &config.integrator, |_, _, _| Ok(()))?;
    Ok((fidelity(&prepared.state, &psi)?, prepared.overlap))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub index: usize,
    pub seed: u64,
    pub fidelity: Option<f64>,
    pub preparation_overlap: Option<f64>,
    /// Set when this realization failed; the sweep carries on.
    pub error: Option<String>,
}

/// Statistics of one axis value over its successful realizations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub mean: f64,
    /// Sample standard deviation, 0 for a single realization.
    pub std: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub failures: usize,
    pub realizations: Vec<Realization>,
}

impl SweepPoint {
    fn from_realizations(value: f64, realizations: Vec<Realization>) -> Self {
        let f: Vec<f64> = realizations.iter().filter_map(|r| r.fidelity).collect();
        let count = f.len();
        let mean = if count > 0 { f.iter().sum::<f64>() / count as f64 } else { f64::NAN };
        let std = if count > 1 {
            (f.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        SweepPoint {
            value,
            mean,
            std,
            stderr: if count > 0 { std / (count as f64).sqrt() } else { f64::NAN },
            min: f.iter().copied().fold(f64::INFINITY, f64::min),
            max: f.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            count,
            failures: realizations.len() - count,
            realizations,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Delta,
    Omega,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub target: Option<DisorderTarget>,
    #[serde(rename = "K")]
    pub k: f64,
    pub n_periods: usize,
    pub config_hash: String,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    /// First axis value where the mean fidelity falls below `level`,
    /// linearly interpolated between grid points.
    pub fn crossing(&self, level: f64) -> Option<f64> {
        self.points.windows(2).find_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            (a.mean >= level && b.mean < level)
                .then(|| a.value + (b.value - a.value) * (a.mean - level) / (a.mean - b.mean))
        })
    }
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Config(format!("{WORKERS_ENV}={v} is not a worker count")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::Resource(e.to_string()))
}

/// Runs `jobs` on the worker pool; results come back in job order.
fn run_jobs<J, F>(jobs: Vec<J>, f: F) -> Result<Vec<Realization>>
where
    J: Send + Sync,
    F: Fn(&J) -> Realization + Send + Sync,
{
    Ok(worker_pool()?.install(|| jobs.par_iter().map(&f).collect()))
}

fn realization(index: usize, seed: u64, outcome: std::result::Result<(f64, f64), String>) -> Realization {
    match outcome {
        Ok((f, overlap)) => Realization {
            index,
            seed,
            fidelity: Some(f),
            preparation_overlap: Some(overlap),
            error: None,
        },
        Err(e) => Realization {
            index,
            seed,
            fidelity: None,
            preparation_overlap: None,
            error: Some(e),
        },
    }
}

fn group(values: &[f64], per_point: usize, flat: Vec<Realization>) -> Vec<SweepPoint> {
    let mut it = flat.into_iter();
    values
        .iter()
        .map(|&v| SweepPoint::from_realizations(v, it.by_ref().take(per_point).collect()))
        .collect()
}

/// Fidelity after `config.n_periods` for `n_realizations` disorder draws at
/// each strength in `deltas`, with interaction `k`.
///
/// Realization `r` at grid point `i` is seeded with
/// `derive_seed(config.seed, i, r)`, so runs differing only in `k` or
/// `target` see the same draws.
pub fn run_disorder_sweep(
    config: &PumpConfig,
    deltas: &[f64],
    target: DisorderTarget,
    k: f64,
    n_realizations: usize,
) -> Result<SweepResult> {
    config.validate()?;
    if n_realizations == 0 {
        return Err(Error::Config("need at least one realization".into()));
    }
    let mut base = config.clone();
    base.model.k = k;
    base.model.disorder = None;
    let jobs: Vec<(usize, f64, usize)> = deltas
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| (0..n_realizations).map(move |r| (i, d, r)))
        .collect();
    // every draw at zero strength is the clean chain
    let clean = deltas
        .contains(&0.0)
        .then(|| pump_fidelity(&base).map_err(|e| e.to_string()));
    let flat = run_jobs(jobs, |&(i, delta, r)| {
        let seed = derive_seed(config.seed, i as u64, r as u64);
        if let (0.0, Some(c)) = (delta, &clean) {
            return realization(r, seed, c.clone());
        }
        let outcome = apply_disorder(&base.model, target, delta, seed, base.drive.n).and_then(|model| {
            let mut c = base.clone();
            c.model = model;
            pump_fidelity(&c)
        });
        let outcome = outcome.map_err(|e| e.to_string());
        realization(r, seed, outcome)
    })?;
    Ok(SweepResult {
        axis: SweepAxis::Delta,
        target: Some(target),
        k,
        n_periods: config.n_periods,
        config_hash: base.hash(),
        points: group(deltas, n_realizations, flat),
    })
}

/// Fidelity after `config.n_periods` at each drive frequency, with
/// interaction `k` and no disorder.
pub fn run_frequency_sweep(config: &PumpConfig, omegas: &[f64], k: f64) -> Result<SweepResult> {
    config.validate()?;
    let mut base = config.clone();
    base.model.k = k;
    base.model.disorder = None;
    let jobs: Vec<f64> = omegas.to_vec();
    let flat = run_jobs(jobs, |&omega| {
        let mut c = base.clone();
        c.drive.omega = omega;
        realization(0, config.seed, pump_fidelity(&c).map_err(|e| e.to_string()))
    })?;
    Ok(SweepResult {
        axis: SweepAxis::Omega,
        target: None,
        k,
        n_periods: config.n_periods,
        config_hash: base.hash(),
        points: group(omegas, 1, flat),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(f: Option<f64>) -> Realization {
        Realization {
            index: 0,
            seed: 0,
            fidelity: f,
            preparation_overlap: None,
            error: f.is_none().then(|| "failed".into()),
        }
    }

    #[test]
    fn point_statistics() {
        let p = SweepPoint::from_realizations(0.5, vec![real(Some(1.0)), real(Some(0.5)), real(None)]);
        assert_eq!((p.count, p.failures), (2, 1));
        assert!((p.mean - 0.75).abs() < 1e-15);
        assert!((p.std - 0.125f64.sqrt()).abs() < 1e-15);
        assert!(p.min <= p.mean && p.mean <= p.max);
    }

    #[test]
    fn crossing_interpolates() {
        let mk = |v: f64, m: f64| SweepPoint {
            mean: m,
            ..SweepPoint::from_realizations(v, vec![real(Some(m))])
        };
        let s = SweepResult {
            axis: SweepAxis::Delta,
            target: None,
            k: 0.0,
            n_periods: 3,
            config_hash: String::new(),
            points: vec![mk(0.0, 1.0), mk(1.0, 0.8), mk(2.0, 0.2)],
        };
        assert!((s.crossing(0.5).unwrap() - 1.5).abs() < 1e-12);
        assert!(s.crossing(0.1).is_none());
    }
}

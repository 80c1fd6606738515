use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::operators::{bond_op, driving_op, occupation_op};
use crate::models::{ModelKind, TimeDependentHamiltonian};
use crate::pauli::OperatorSum;
use crate::quantum_info::{entanglement_entropy, Partition};

use super::propagator::{Method, Propagator};
use super::{expectation, fidelity, StateVector};

/// Stepping scheme and step size for [`evolve`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorPolicy {
    pub method: Method,
    /// Largest step; actual steps divide each sampling interval evenly.
    pub dt: f64,
    /// Truncation threshold of the Chebyshev series.
    pub tolerance: f64,
    /// Renormalize every this many steps; 0 disables.
    pub renormalize_every: usize,
}

impl Default for IntegratorPolicy {
    fn default() -> Self {
        IntegratorPolicy {
            method: Method::Cf4,
            dt: 0.5,
            tolerance: 1e-14,
            renormalize_every: 0,
        }
    }
}

impl IntegratorPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("integrator dt must be positive, got {}", self.dt)));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1e-3) {
            return Err(Error::Config(format!(
                "integrator tolerance must lie in (0, 1e-3), got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    pub fn halved(&self) -> Self {
        IntegratorPolicy {
            dt: 0.5 * self.dt,
            ..*self
        }
    }
}

/// Operators recorded along a trajectory.
#[derive(Clone, Debug)]
pub struct Observables {
    pub kind: ModelKind,
    /// `D_j`, the operator the drive couples to.
    pub driving: Vec<OperatorSum>,
    /// The static bond operators.
    pub bond: Vec<OperatorSum>,
    pub occupation: Vec<OperatorSum>,
    pub partitions: Vec<Partition>,
}

impl Observables {
    /// Trimer partitions are included when `n` is a multiple of 3.
    pub fn for_kind(kind: ModelKind, n: usize) -> Result<Self> {
        let partitions = if n % 3 == 0 && n > 3 {
            vec![Partition::first_trimer(n)?, Partition::trimer_heads(n)?]
        } else {
            Vec::new()
        };
        Ok(Observables {
            kind,
            driving: (0..n).map(|j| driving_op(kind, n, j)).collect::<Result<_>>()?,
            bond: (0..n).map(|j| bond_op(kind, n, j)).collect::<Result<_>>()?,
            occupation: (0..n).map(|j| occupation_op(kind, n, j)).collect::<Result<_>>()?,
            partitions,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.driving.len()
    }

    /// `<prod_j (1 + (w^{j+1} - 1) n_j)>` with `w = exp(2 pi i / n)`, which is
    /// `<exp(2 pi i x / n)>` for the commuting projectors `n_j`.
    pub fn twist(&self, psi: &StateVector) -> Result<Complex64> {
        let n = self.n_sites();
        let mut v = psi.amplitudes().to_vec();
        for (j, occ) in self.occupation.iter().enumerate() {
            let w = Complex64::from_polar(1.0, TAU * (j + 1) as f64 / n as f64) - 1.0;
            let nv = occ.apply(&v)?;
            for (a, b) in v.iter_mut().zip(&nv) {
                *a += w * b;
            }
        }
        Ok(psi.amplitudes().iter().zip(&v).map(|(a, b)| a.conj() * b).sum())
    }
}

/// Work done by one call of [`evolve`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvolutionStats {
    pub steps: usize,
    pub matvecs: usize,
    pub max_norm_drift: f64,
    /// Smallest `|twist|` seen; the displacement is unreliable near zero.
    pub min_twist_modulus: f64,
}

/// Sampled observables of one evolution. Series are indexed by sample; the
/// site-resolved ones hold `n` values per sample.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub kind: ModelKind,
    pub period: f64,
    pub times: Vec<f64>,
    /// `<D_j>`.
    pub x_j: Vec<Vec<f64>>,
    /// `<bond_j>`.
    pub y_j: Vec<Vec<f64>>,
    /// `<x>` with 1-based site weights.
    pub position: Vec<f64>,
    /// `<N>`.
    pub excitations: Vec<f64>,
    /// Shift of the total position `sum_j j n_j` since `t = 0`, from the
    /// unwrapped twist phase, divided by the number of unit cells.
    pub displacement: Vec<f64>,
    pub energy: Vec<f64>,
    pub norm: Vec<f64>,
    /// Normalized entropies, one series per partition.
    pub entropy: Vec<Vec<f64>>,
    pub partitions: Vec<Partition>,
    /// States at whole periods.
    pub snapshots: Vec<(f64, StateVector)>,
    pub final_state: StateVector,
    pub stats: EvolutionStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Sample index closest to `t`.
    pub fn index_at(&self, t: f64) -> usize {
        let mut best = 0;
        for (k, &s) in self.times.iter().enumerate() {
            if (s - t).abs() < (self.times[best] - t).abs() {
                best = k;
            }
        }
        best
    }

    /// Displacement per unit cell after `periods` whole periods.
    pub fn displacement_after(&self, periods: usize) -> Option<f64> {
        let k = self.index_at(periods as f64 * self.period);
        ((self.times[k] - periods as f64 * self.period).abs() < 1e-9).then(|| self.displacement[k])
    }

    /// `|<psi(0)|psi(t_final)>|^2`.
    pub fn return_fidelity(&self, psi0: &StateVector) -> Result<f64> {
        fidelity(psi0, &self.final_state)
    }
}

/// Sample times: `samples_per_period` per period plus `t_final`.
pub fn sample_times(period: f64, t_final: f64, samples_per_period: usize) -> Vec<f64> {
    let mut times = vec![0.0];
    if samples_per_period > 0 {
        let dt = period / samples_per_period as f64;
        let count = (t_final / dt + 1e-9).floor() as usize;
        times.extend((1..=count).map(|k| k as f64 * dt));
    }
    if times.last().is_some_and(|&t| t_final - t > 1e-9 * t_final.max(1.0)) {
        times.push(t_final);
    }
    times
}

/// Evolves `psi0` from `t = 0` to each of `times` in turn and calls
/// `observe` with the state there.
pub fn propagate<F>(
    h: &TimeDependentHamiltonian,
    psi0: &StateVector,
    times: &[f64],
    policy: &IntegratorPolicy,
    mut observe: F,
) -> Result<(StateVector, EvolutionStats)>
where
    F: FnMut(usize, f64, &StateVector) -> Result<()>,
{
    policy.validate()?;
    if psi0.n_sites() != h.n_sites() {
        return Err(Error::Dimension(format!(
            "{}-site state for a {}-site Hamiltonian",
            psi0.n_sites(),
            h.n_sites()
        )));
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::Contract("initial state is not normalized".into()));
    }
    if times.first().is_some_and(|&t| t < 0.0) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Contract("sample times must be nonnegative and increasing".into()));
    }
    let mut prop = Propagator::new(h, policy.method, policy.tolerance);
    let mut psi = psi0.clone();
    let mut stats = EvolutionStats::default();
    let mut t = 0.0;
    for (k, &target) in times.iter().enumerate() {
        let span = target - t;
        if span > 0.0 {
            let n_steps = (span / policy.dt - 1e-9).ceil().max(1.0) as usize;
            let step = span / n_steps as f64;
            for s in 0..n_steps {
                prop.step(psi.amplitudes_mut(), t + s as f64 * step, step)?;
                stats.steps += 1;
                if policy.renormalize_every > 0 && stats.steps % policy.renormalize_every == 0 {
                    stats.max_norm_drift = stats.max_norm_drift.max((psi.norm() - 1.0).abs());
                    psi.renormalize();
                }
            }
        }
        t = target;
        stats.max_norm_drift = stats.max_norm_drift.max((psi.norm() - 1.0).abs());
        observe(k, t, &psi)?;
    }
    stats.matvecs = prop.matvecs;
    Ok((psi, stats))
}

/// Evolves `psi0` over `[0, t_final]` recording `obs` at
/// `samples_per_period` points per period.
pub fn evolve(
    h: &TimeDependentHamiltonian,
    psi0: &StateVector,
    t_final: f64,
    policy: &IntegratorPolicy,
    obs: &Observables,
    samples_per_period: usize,
) -> Result<Trajectory> {
    if obs.n_sites() != h.n_sites() {
        return Err(Error::Dimension("observables and Hamiltonian differ in size".into()));
    }
    let period = h.period();
    let times = sample_times(period, t_final, samples_per_period);
    let n = obs.n_sites();
    let mut tr = Trajectory {
        kind: obs.kind,
        period,
        times: times.clone(),
        x_j: Vec::with_capacity(times.len()),
        y_j: Vec::with_capacity(times.len()),
        position: Vec::with_capacity(times.len()),
        excitations: Vec::with_capacity(times.len()),
        displacement: Vec::with_capacity(times.len()),
        energy: Vec::with_capacity(times.len()),
        norm: Vec::with_capacity(times.len()),
        entropy: vec![Vec::with_capacity(times.len()); obs.partitions.len()],
        partitions: obs.partitions.clone(),
        snapshots: Vec::new(),
        final_state: psi0.clone(),
        stats: EvolutionStats::default(),
    };
    let mut phase = 0.0;
    let mut last_arg = 0.0;
    let cells = (n / h.params().b.denom() as usize).max(1) as f64;
    let mut min_twist = f64::INFINITY;
    let (psi, mut stats) = propagate(h, psi0, &times, policy, |k, t, psi| {
        let xs: Vec<f64> = obs.driving.iter().map(|o| expectation(o, psi)).collect::<Result<_>>()?;
        let ys: Vec<f64> = obs.bond.iter().map(|o| expectation(o, psi)).collect::<Result<_>>()?;
        let occ: Vec<f64> = xs.iter().map(|x| 0.5 * (1.0 + x)).collect();
        let count: f64 = occ.iter().sum();
        tr.position.push(occ.iter().enumerate().map(|(j, o)| (j + 1) as f64 * o).sum());
        tr.excitations.push(count);
        let z = obs.twist(psi)?;
        min_twist = min_twist.min(z.norm());
        let arg = z.arg();
        if k > 0 {
            let mut d = arg - last_arg;
            d -= TAU * ((d + PI) / TAU).floor();
            phase += d;
        }
        last_arg = arg;
        tr.displacement.push(phase * n as f64 / (TAU * cells));
        tr.energy.push(expectation(&h.at(t), psi)?);
        tr.norm.push(psi.norm());
        for (series, part) in tr.entropy.iter_mut().zip(&obs.partitions) {
            series.push(entanglement_entropy(psi, part, true)?);
        }
        tr.x_j.push(xs);
        tr.y_j.push(ys);
        let cycles = t / period;
        if (cycles - cycles.round()).abs() < 1e-9 {
            tr.snapshots.push((t, psi.clone()));
        }
        Ok(())
    })?;
    stats.min_twist_modulus = min_twist;
    tr.final_state = psi;
    tr.stats = stats;
    Ok(tr)
}

/// Final state at `t_final` under `policy` and under the halved step;
/// fails when they differ in fidelity by more than `tol`.
pub fn converged_final_state(
    h: &TimeDependentHamiltonian,
    psi0: &StateVector,
    t_final: f64,
    policy: &IntegratorPolicy,
    tol: f64,
) -> Result<(StateVector, f64)> {
    let (coarse, _) = propagate(h, psi0, &[t_final], policy, |_, _, _| Ok(()))?;
    let (fine, _) = propagate(h, psi0, &[t_final], &policy.halved(), |_, _, _| Ok(()))?;
    let defect = 1.0 - fidelity(&coarse, &fine)?;
    if defect > tol {
        return Err(Error::Integrator(format!(
            "halving dt = {} changes the final state by 1 - F = {defect:e} > {tol:e}",
            policy.dt
        )));
    }
    Ok((fine, defect))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_model, DriveParams, ModelSpec};

    #[test]
    fn sample_grid() {
        let t = sample_times(10.0, 25.0, 4);
        assert_eq!(t.len(), 11);
        assert_eq!(t[4], 10.0);
        assert_eq!(*t.last().unwrap(), 25.0);
        assert_eq!(sample_times(10.0, 30.0, 0), vec![0.0, 30.0]);
    }

    #[test]
    fn static_drive_phase() {
        // g1 = 0 and J = 0: H = -g0 (X0 + X1), so |++> only picks up a phase
        let p = DriveParams::new(2, 2.0, 0.0, 0.1, 0.0, "1/1".parse().unwrap()).unwrap();
        let h = build_model(&ModelSpec::new(ModelKind::SpinFlip, 0.0), &p).unwrap();
        let plus = StateVector::new(2, vec![Complex64::new(0.5, 0.0); 4]).unwrap();
        let t_end = 13.7;
        for method in [Method::Cf4, Method::MidpointEigen] {
            let policy = IntegratorPolicy {
                method,
                ..IntegratorPolicy::default()
            };
            let (psi, _) = propagate(&h, &plus, &[t_end], &policy, |_, _, _| Ok(())).unwrap();
            let expected = Complex64::from_polar(0.5, 4.0 * t_end);
            for a in psi.amplitudes() {
                assert!((a - expected).norm() < 1e-9, "{method:?}");
            }
        }
    }

    #[test]
    fn bad_sample_times() {
        let p = DriveParams {
            n: 3,
            ..DriveParams::reference()
        };
        let h = build_model(&ModelSpec::new(ModelKind::SpinFlip, 1.0), &p).unwrap();
        let psi = StateVector::basis(3, 0).unwrap();
        let policy = IntegratorPolicy::default();
        assert!(propagate(&h, &psi, &[2.0, 1.0], &policy, |_, _, _| Ok(())).is_err());
        let bad = IntegratorPolicy {
            dt: 0.0,
            ..policy
        };
        assert!(propagate(&h, &psi, &[1.0], &bad, |_, _, _| Ok(())).is_err());
    }
}

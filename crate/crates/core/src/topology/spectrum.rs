use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, CMatrix, SectorBasis};
use crate::models::operators::{driving_op, excitation_number_op};
use crate::models::{ModelKind, TimeDependentHamiltonian};
use crate::pauli::OperatorSum;

/// Instantaneous energies of one excitation-number sector.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectorSpectrum {
    pub excitations: usize,
    pub times: Vec<f64>,
    /// Ascending levels at each time.
    pub levels: Vec<Vec<f64>>,
}

/// A local minimum of the gap above the lowest band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntiCrossing {
    pub time: f64,
    pub gap: f64,
}

impl SectorSpectrum {
    /// Gap between level `band_size - 1` and level `band_size` at each time.
    pub fn gaps(&self, band_size: usize) -> Result<Vec<f64>> {
        self.levels
            .iter()
            .map(|l| {
                if band_size == 0 || band_size >= l.len() {
                    Err(Error::Config(format!(
                        "band of {band_size} levels in a sector of {}",
                        l.len()
                    )))
                } else {
                    Ok(l[band_size] - l[band_size - 1])
                }
            })
            .collect()
    }

    pub fn min_gap(&self, band_size: usize) -> Result<AntiCrossing> {
        let gaps = self.gaps(band_size)?;
        let (k, &gap) = gaps
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .ok_or_else(|| Error::Config("empty spectrum".into()))?;
        Ok(AntiCrossing { time: self.times[k], gap })
    }

    /// Strict local minima of the gap on the sampled times, treating the
    /// samples as one closed period when `periodic`.
    pub fn gap_minima(&self, band_size: usize, periodic: bool) -> Result<Vec<AntiCrossing>> {
        let g = self.gaps(band_size)?;
        let n = g.len();
        let mut out = Vec::new();
        for k in 0..n {
            let (prev, next) = if periodic {
                (g[(k + n - 1) % n], g[(k + 1) % n])
            } else if k == 0 || k + 1 == n {
                continue;
            } else {
                (g[k - 1], g[k + 1])
            };
            if g[k] < prev && g[k] <= next {
                out.push(AntiCrossing {
                    time: self.times[k],
                    gap: g[k],
                });
            }
        }
        Ok(out)
    }
}

/// Number of levels in the lowest band of the sector: a single excitation
/// has one level per unit cell, one excitation per cell fills a unique state.
pub fn default_band_size(n: usize, q: usize, excitations: usize) -> Result<usize> {
    if excitations == 1 {
        Ok(n / q)
    } else if excitations * q == n {
        Ok(1)
    } else {
        Err(Error::Config(format!(
            "no default band for {excitations} excitations on {n} sites"
        )))
    }
}

struct SectorSolver {
    sectors: Vec<(SectorBasis, CMatrix)>,
    excitations: usize,
}

impl SectorSolver {
    /// Parity sectors whose states can hold `excitations`. When every
    /// configuration has both parities (kinks) the even sector, which is the
    /// image of the spin-flip chain, is used.
    fn new(kind: ModelKind, n: usize, excitations: usize) -> Result<Self> {
        if excitations > n {
            return Err(Error::Config(format!("{excitations} excitations on {n} sites")));
        }
        let mut product = OperatorSum::identity(n, 1.0)?;
        for j in 0..n {
            product = &product * &driving_op(kind, n, j)?;
        }
        let term = product
            .terms()
            .first()
            .ok_or_else(|| Error::Contract("vanishing product of drive operators".into()))?;
        let c = term.effective_coeff().re.signum() as i8;
        let holes = if (n - excitations) % 2 == 0 { 1 } else { -1 };
        let parities: Vec<i8> = if term.string.is_identity_letters() {
            if c != holes {
                return Err(Error::IncompatibleParams(format!(
                    "{kind} on {n} sites cannot hold {excitations} excitations"
                )));
            }
            vec![1]
        } else if term.string.x_bits().count_ones() as usize == n && term.string.z_bits() == 0 {
            vec![c * holes]
        } else {
            vec![1, -1]
        };
        let number = excitation_number_op(kind, n)?;
        let sectors = parities
            .into_iter()
            .map(|p| {
                let basis = SectorBasis::x_parity(n, p)?;
                let nm = basis.restrict(&number)?;
                Ok((basis, nm))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SectorSolver { sectors, excitations })
    }

    fn levels(&self, h: &OperatorSum) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for (basis, nm) in &self.sectors {
            let (vals, vecs) = eigh(&basis.restrict(h)?);
            let nv = nm * &vecs;
            for (k, &e) in vals.iter().enumerate() {
                let count = vecs.column(k).dotc(&nv.column(k)).re;
                if (count - self.excitations as f64).abs() < 0.5 {
                    out.push(e);
                }
            }
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }
}

/// Eigenvalues of `h(t)` whose eigenvectors carry `excitations` excitations
/// of `kind`, classified by rounding `<N>`.
pub fn instantaneous_band_spectrum(
    h: &TimeDependentHamiltonian,
    kind: ModelKind,
    excitations: usize,
    times: &[f64],
) -> Result<SectorSpectrum> {
    let n = h.n_sites();
    let solver = SectorSolver::new(kind, n, excitations)?;
    let levels = times
        .iter()
        .map(|&t| solver.levels(&h.at(t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SectorSpectrum {
        excitations,
        times: times.to_vec(),
        levels,
    })
}

/// Gap minima above the lowest band over one period, located on a grid of
/// `samples` points and refined by golden-section search to `1e-6 T`.
pub fn anti_crossings(
    h: &TimeDependentHamiltonian,
    kind: ModelKind,
    excitations: usize,
    band_size: usize,
    samples: usize,
) -> Result<Vec<AntiCrossing>> {
    if samples < 3 {
        return Err(Error::Config("need at least 3 samples per period".into()));
    }
    let period = h.period();
    let dt = period / samples as f64;
    let times: Vec<f64> = (0..samples).map(|k| k as f64 * dt).collect();
    let coarse = instantaneous_band_spectrum(h, kind, excitations, &times)?;
    let n = h.n_sites();
    let solver = SectorSolver::new(kind, n, excitations)?;
    let gap_at = |t: f64| -> Result<f64> {
        let l = solver.levels(&h.at(t))?;
        Ok(l[band_size] - l[band_size - 1])
    };
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut out = Vec::new();
    for m in coarse.gap_minima(band_size, true)? {
        let (mut a, mut b) = (m.time - dt, m.time + dt);
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut fc, mut fd) = (gap_at(c)?, gap_at(d)?);
        while b - a > 1e-6 * period {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = gap_at(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = gap_at(d)?;
            }
        }
        let time = (0.5 * (a + b)).rem_euclid(period);
        out.push(AntiCrossing { time, gap: gap_at(time)? });
    }
    out.sort_by(|x, y| x.time.total_cmp(&y.time));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;
    use crate::linalg::eigvalsh;
    use crate::models::{build_model, effective_rwa_model, DriveParams, ModelSpec};
    use crate::topology::{aa_bloch_hamiltonian, aa_real_space, AubryAndre};

    fn small() -> DriveParams {
        DriveParams {
            n: 6,
            ..DriveParams::reference()
        }
    }

    #[test]
    fn band_sizes() {
        assert_eq!(default_band_size(9, 3, 1).unwrap(), 3);
        assert_eq!(default_band_size(9, 3, 3).unwrap(), 1);
        assert!(default_band_size(9, 3, 2).is_err());
    }

    #[test]
    fn gap_minima_on_a_periodic_grid() {
        let s = SectorSpectrum {
            excitations: 1,
            times: vec![0.0, 1.0, 2.0, 3.0],
            levels: vec![vec![0.0, 1.0], vec![0.0, 3.0], vec![0.0, 2.0], vec![0.0, 4.0]],
        };
        let periodic: Vec<f64> = s.gap_minima(1, true).unwrap().iter().map(|a| a.time).collect();
        assert_eq!(periodic, vec![0.0, 2.0]);
        let open: Vec<f64> = s.gap_minima(1, false).unwrap().iter().map(|a| a.time).collect();
        assert_eq!(open, vec![2.0]);
        assert_eq!(s.min_gap(1).unwrap().time, 0.0);
    }

    #[test]
    fn xy_chain_single_excitation_is_the_aubry_andre_ring() {
        let p = small();
        let h = effective_rwa_model(&p, 1.0).unwrap();
        let aa = AubryAndre::from_drive(&p, 1.0);
        let times = [0.0, 40.0, 133.0];
        let spec = instantaneous_band_spectrum(&h, ModelKind::SpinFlip, 1, &times).unwrap();
        for (t, levels) in times.iter().zip(&spec.levels) {
            let ring = eigvalsh(&aa_real_space(p.n, *t, &aa).unwrap());
            assert_eq!(levels.len(), ring.len());
            for (a, b) in levels.iter().zip(&ring) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn ring_spectrum_is_the_union_of_bloch_spectra() {
        let p = DriveParams::reference();
        let aa = AubryAndre::from_drive(&p, 1.0);
        let t = 71.0;
        let ring = eigvalsh(&aa_real_space(p.n, t, &aa).unwrap());
        let mut bloch: Vec<f64> = (0..3)
            .flat_map(|m| eigvalsh(&aa_bloch_hamiltonian(TAU * m as f64 / p.n as f64, t, &aa).unwrap()))
            .collect();
        bloch.sort_by(f64::total_cmp);
        for (a, b) in ring.iter().zip(&bloch) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn uncoupled_flips_sit_at_twice_the_drive() {
        let p = small();
        let h = build_model(&ModelSpec::new(ModelKind::SpinFlip, 0.0), &p).unwrap();
        let t = 25.0;
        let spec = instantaneous_band_spectrum(&h, ModelKind::SpinFlip, 1, &[t]).unwrap();
        let vacuum: f64 = (0..p.n).map(|j| p.g(j, t)).sum();
        let mut expected: Vec<f64> = (0..p.n).map(|j| vacuum - 2.0 * p.g(j, t)).collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in spec.levels[0].iter().zip(&expected) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn anti_crossings_of_the_reference_ring() {
        let p = small();
        let h = build_model(&ModelSpec::new(ModelKind::SpinFlip, 1.0), &p).unwrap();
        let found = anti_crossings(&h, ModelKind::SpinFlip, 1, 2, 24).unwrap();
        assert_eq!(found.len(), 3);
        for (a, expected) in found.iter().zip([1.0, 3.0, 5.0]) {
            assert!((a.time / h.period() - expected / 6.0).abs() < 1e-3, "{}", a.time);
            assert!(a.gap > 1.0 && a.gap < 2.5);
        }
    }
}

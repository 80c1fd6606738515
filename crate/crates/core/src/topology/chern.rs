use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, CVector};

use super::BlochFamily;

/// Gap below which two bands count as touching.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Default number of grid points along each torus direction.
pub const DEFAULT_GRID: usize = 51;

/// Chern number of one band with the raw plaquette sum it was rounded from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernNumber {
    pub band: usize,
    pub chern: i64,
    /// Total plaquette flux divided by `2 pi` before rounding.
    pub raw: f64,
    pub residual: f64,
    /// Smallest gap to a neighbouring band on the grid.
    pub min_gap: f64,
}

/// Bands of a [`BlochFamily`] sampled on a periodic `grid x grid` mesh.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BandData {
    pub grid: usize,
    /// `energies[i * grid + j][n]` at `(k_i, s_j)`, ascending in `n`.
    pub energies: Vec<Vec<f64>>,
    #[serde(skip)]
    pub states: Vec<Vec<CVector>>,
    pub chern: Vec<ChernNumber>,
    /// Berry curvature per band, flux through each plaquette divided by its area.
    pub curvature: Vec<Vec<f64>>,
    pub k_extent: f64,
    pub s_extent: f64,
}

impl BandData {
    pub fn n_bands(&self) -> usize {
        self.chern.len()
    }

    pub fn chern_sum(&self) -> i64 {
        self.chern.iter().map(|c| c.chern).sum()
    }
}

fn link(a: &CVector, b: &CVector) -> Complex64 {
    let z = a.dotc(b);
    if z.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / z.norm()
    }
}

/// Plaquette fluxes of one band from its eigenvectors on a periodic mesh,
/// row-major in `(k, s)`, circulating `s` before `k`.
///
/// The result does not depend on the phase of the vectors.
pub fn plaquette_flux(states: &[CVector], nk: usize, ns: usize) -> Vec<f64> {
    let at = |i: usize, j: usize| &states[(i % nk) * ns + (j % ns)];
    let mut flux = Vec::with_capacity(nk * ns);
    for i in 0..nk {
        for j in 0..ns {
            let w = link(at(i, j), at(i, j + 1))
                * link(at(i, j + 1), at(i + 1, j + 1))
                * link(at(i + 1, j + 1), at(i + 1, j))
                * link(at(i + 1, j), at(i, j));
            flux.push(w.arg());
        }
    }
    flux
}

fn round_flux(flux: &[f64]) -> (i64, f64, f64) {
    // fixed summation order keeps the result bitwise reproducible
    let raw = flux.iter().sum::<f64>() / TAU;
    let chern = raw.round();
    (chern as i64, raw, (raw - chern).abs())
}

struct Mesh {
    energies: Vec<Vec<f64>>,
    states: Vec<Vec<CVector>>,
    gaps: Vec<f64>,
    touching: Vec<Option<Error>>,
}

fn mesh(family: &BlochFamily, grid: usize) -> Result<Mesh> {
    if grid < 3 {
        return Err(Error::Config(format!("Chern grid must have at least 3 points, got {grid}")));
    }
    let q = family.dim()?;
    let (lk, ls) = family.extent()?;
    let mut energies = Vec::with_capacity(grid * grid);
    let mut states = vec![Vec::with_capacity(grid * grid); q];
    let mut gaps = vec![f64::INFINITY; q];
    let mut touching: Vec<Option<Error>> = (0..q).map(|_| None).collect();
    for i in 0..grid {
        let k = lk * i as f64 / grid as f64;
        for j in 0..grid {
            let s = ls * j as f64 / grid as f64;
            let (vals, vecs) = eigh(&family.matrix(k, s)?);
            for n in 0..q {
                for m in [n.wrapping_sub(1), n + 1] {
                    if m >= q {
                        continue;
                    }
                    let gap = (vals[n] - vals[m]).abs();
                    gaps[n] = gaps[n].min(gap);
                    if gap < DEGENERACY_TOL && touching[n].is_none() {
                        touching[n] = Some(Error::Degeneracy {
                            band: n,
                            neighbor: m,
                            i,
                            j,
                            gap,
                        });
                    }
                }
                states[n].push(vecs.column(n).into_owned());
            }
            energies.push(vals);
        }
    }
    Ok(Mesh {
        energies,
        states,
        gaps,
        touching,
    })
}

fn band_chern(m: &Mesh, band: usize, grid: usize) -> (ChernNumber, Vec<f64>) {
    let flux = plaquette_flux(&m.states[band], grid, grid);
    let (chern, raw, residual) = round_flux(&flux);
    let c = ChernNumber {
        band,
        chern,
        raw,
        residual,
        min_gap: m.gaps[band],
    };
    (c, flux)
}

/// Eigen-decomposes `family` on the mesh and computes every band's Chern
/// number with the link-variable plaquette method.
///
/// Orientation: the plaquettes circulate `s` before `k`. With it the lowest
/// Hofstadter band at flux `1/3` has `C = -1`, and a filled band of the
/// driven chain moves by `C` unit cells per period.
pub fn band_data(family: &BlochFamily, grid: usize) -> Result<BandData> {
    let mut m = mesh(family, grid)?;
    if let Some(e) = m.touching.iter_mut().find_map(Option::take) {
        return Err(e);
    }
    let (lk, ls) = family.extent()?;
    let area = lk * ls / (grid * grid) as f64;
    let mut chern = Vec::new();
    let mut curvature = Vec::new();
    for band in 0..m.states.len() {
        let (c, flux) = band_chern(&m, band, grid);
        chern.push(c);
        curvature.push(flux.iter().map(|f| f / area).collect());
    }
    Ok(BandData {
        grid,
        energies: m.energies,
        states: m.states,
        chern,
        curvature,
        k_extent: lk,
        s_extent: ls,
    })
}

/// Chern number of `band` on a `grid x grid` mesh; only this band needs
/// to be isolated.
pub fn chern_number(family: &BlochFamily, band: usize, grid: usize) -> Result<ChernNumber> {
    let q = family.dim()?;
    if band >= q {
        return Err(Error::Config(format!("band {band} out of range for {q} bands")));
    }
    let mut m = mesh(family, grid)?;
    if let Some(e) = m.touching[band].take() {
        return Err(e);
    }
    Ok(band_chern(&m, band, grid).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Rational;

    fn hofstadter(p: i64, q: i64) -> BlochFamily {
        BlochFamily::Hofstadter {
            jx: 1.0,
            jy: 1.0,
            b: Rational::new(p, q).unwrap(),
        }
    }

    #[test]
    fn flux_one_third() {
        let data = band_data(&hofstadter(1, 3), DEFAULT_GRID).unwrap();
        let c: Vec<i64> = data.chern.iter().map(|c| c.chern).collect();
        assert_eq!(c, vec![-1, 2, -1]);
        assert_eq!(data.chern_sum(), 0);
        assert!(data.chern.iter().all(|c| c.residual < 0.01));
    }

    #[test]
    fn diophantine_values_for_other_fluxes() {
        // lowest band of flux p/q carries -t with 1 = q s + p t, |t| <= q/2
        for (p, q, expected) in [(1, 4, -1), (1, 5, -1), (2, 5, 2)] {
            let c = chern_number(&hofstadter(p, q), 0, 41).unwrap();
            assert_eq!(c.chern, expected, "flux {p}/{q}");
        }
    }

    #[test]
    fn gap_closure_is_reported() {
        // flux 1/2 bands touch at Dirac points on the grid
        let family = hofstadter(1, 2);
        assert!(matches!(band_data(&family, 4), Err(Error::Degeneracy { .. })));
    }
}

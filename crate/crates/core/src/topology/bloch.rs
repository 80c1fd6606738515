use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::models::{DriveParams, Rational};

fn cell_size(b: Rational) -> Result<usize> {
    let q = b.denom();
    if q > 64 {
        return Err(Error::IncompatibleParams(format!("flux {b} has a magnetic cell of {q} sites")));
    }
    Ok(q as usize)
}

/// `q x q` chain with onsite `diag[m]`, hopping `-hop` between neighbours and
/// the Bloch phase `exp(i q k)` on the bond closing the cell.
fn bloch_chain(diag: &[f64], hop: f64, k: f64) -> CMatrix {
    let q = diag.len();
    let mut h = CMatrix::zeros(q, q);
    for (m, &d) in diag.iter().enumerate() {
        h[(m, m)] += Complex64::new(d, 0.0);
    }
    for m in 0..q {
        let next = (m + 1) % q;
        let phase = if next == 0 {
            Complex64::from_polar(1.0, q as f64 * k)
        } else {
            Complex64::new(1.0, 0.0)
        };
        // h[next, m] is the amplitude to hop from m to m + 1
        h[(next, m)] -= hop * phase;
        h[(m, next)] -= hop * phase.conj();
    }
    h
}

/// Harper-Hofstadter Bloch matrix in the Landau gauge with flux `b` per
/// plaquette: `-2 jy cos(ky + 2 pi b m)` on site `m` of the magnetic cell
/// and hopping `-jx` along `x`.
///
/// `kx` is the per-site quasimomentum, so the magnetic zone is
/// `[0, 2 pi / q) x [0, 2 pi)`.
pub fn hh_bloch_hamiltonian(kx: f64, ky: f64, jx: f64, jy: f64, b: Rational) -> Result<CMatrix> {
    let q = cell_size(b)?;
    let beta = b.to_f64();
    let diag: Vec<f64> = (0..q).map(|m| -2.0 * jy * (ky + TAU * beta * m as f64).cos()).collect();
    Ok(bloch_chain(&diag, jx, kx))
}

/// Aubry-Andre chain driven through its phase `theta = omega t + phi0`:
/// onsite `offset - 2 modulation cos(2 pi b m + theta)`, hopping `-hopping`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AubryAndre {
    pub hopping: f64,
    pub modulation: f64,
    pub offset: f64,
    pub b: Rational,
    pub omega: f64,
    pub phi0: f64,
}

impl AubryAndre {
    /// One spin flip on the driven ring: the flip at `j` costs `-2 G_j`
    /// relative to the vacuum energy `sum_j G_j` and hops with amplitude `j_coupling`.
    pub fn from_drive(p: &DriveParams, j_coupling: f64) -> Self {
        AubryAndre {
            hopping: -j_coupling,
            modulation: p.g1,
            offset: (p.n as f64 - 2.0) * p.g0,
            b: p.b,
            omega: p.omega,
            phi0: p.phi0,
        }
    }

    pub fn theta(&self, t: f64) -> f64 {
        self.omega * t + self.phi0
    }

    pub fn onsite(&self, m: usize, t: f64) -> f64 {
        self.offset - 2.0 * self.modulation * (TAU * self.b.to_f64() * m as f64 + self.theta(t)).cos()
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }
}

/// Bloch matrix of [`AubryAndre`] at per-site quasimomentum `k` and time `t`.
/// Up to `offset` this is [`hh_bloch_hamiltonian`] with `ky = omega t + phi0`.
pub fn aa_bloch_hamiltonian(k: f64, t: f64, aa: &AubryAndre) -> Result<CMatrix> {
    let q = cell_size(aa.b)?;
    let diag: Vec<f64> = (0..q).map(|m| aa.onsite(m, t)).collect();
    Ok(bloch_chain(&diag, aa.hopping, k))
}

/// The periodic `n`-site Aubry-Andre chain in real space.
pub fn aa_real_space(n: usize, t: f64, aa: &AubryAndre) -> Result<CMatrix> {
    let q = cell_size(aa.b)?;
    if n == 0 || n % q != 0 {
        return Err(Error::IncompatibleParams(format!("{n} sites do not tile cells of {q}")));
    }
    let diag: Vec<f64> = (0..n).map(|m| aa.onsite(m, t)).collect();
    Ok(bloch_chain(&diag, aa.hopping, 0.0))
}

/// A `q x q` Hermitian family on a torus of parameters `(k, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BlochFamily {
    /// `s = ky`.
    Hofstadter { jx: f64, jy: f64, b: Rational },
    /// `s = t` over one drive period.
    AubryAndre(AubryAndre),
}

impl BlochFamily {
    pub fn dim(&self) -> Result<usize> {
        cell_size(self.flux())
    }

    pub fn flux(&self) -> Rational {
        match self {
            BlochFamily::Hofstadter { b, .. } => *b,
            BlochFamily::AubryAndre(aa) => aa.b,
        }
    }

    /// Lengths of the `k` and `s` cycles.
    pub fn extent(&self) -> Result<(f64, f64)> {
        let q = self.dim()? as f64;
        Ok(match self {
            BlochFamily::Hofstadter { .. } => (TAU / q, TAU),
            BlochFamily::AubryAndre(aa) => (TAU / q, aa.period()),
        })
    }

    pub fn matrix(&self, k: f64, s: f64) -> Result<CMatrix> {
        match self {
            BlochFamily::Hofstadter { jx, jy, b } => hh_bloch_hamiltonian(k, s, *jx, *jy, *b),
            BlochFamily::AubryAndre(aa) => aa_bloch_hamiltonian(k, s, aa),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigvalsh, hermiticity_defect};

    fn third() -> Rational {
        Rational::new(1, 3).unwrap()
    }

    #[test]
    fn single_site_cell_is_the_square_lattice() {
        let b = Rational::new(0, 1).unwrap();
        let h = hh_bloch_hamiltonian(0.3, 1.1, 1.0, 0.5, b).unwrap();
        let expected = -2.0 * 0.3f64.cos() - 1.1f64.cos();
        assert!((h[(0, 0)].re - expected).abs() < 1e-14);
    }

    #[test]
    fn hermitian_and_periodic() {
        let (jx, jy) = (1.0, 0.7);
        for &(kx, ky) in &[(0.1, 0.2), (1.3, -2.0), (2.0, 4.0)] {
            let h = hh_bloch_hamiltonian(kx, ky, jx, jy, third()).unwrap();
            assert!(hermiticity_defect(&h) < 1e-15);
            let kx_shift = hh_bloch_hamiltonian(kx + TAU / 3.0, ky, jx, jy, third()).unwrap();
            let ky_shift = hh_bloch_hamiltonian(kx, ky + TAU, jx, jy, third()).unwrap();
            assert!((&h - kx_shift).iter().all(|z| z.norm() < 1e-12));
            assert!((&h - ky_shift).iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn aa_matches_hh_at_the_drive_phase() {
        let p = DriveParams::reference();
        let aa = AubryAndre {
            offset: 0.0,
            ..AubryAndre::from_drive(&p, 1.0)
        };
        for &(k, t) in &[(0.2, 0.0), (1.7, 55.0), (0.9, 300.0)] {
            let a = eigvalsh(&aa_bloch_hamiltonian(k, t, &aa).unwrap());
            let h = eigvalsh(&hh_bloch_hamiltonian(k, aa.theta(t), aa.hopping, aa.modulation, aa.b).unwrap());
            for (x, y) in a.iter().zip(&h) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn flat_bands_without_hopping() {
        let p = DriveParams::reference();
        let aa = AubryAndre::from_drive(&p, 0.0);
        let vals = eigvalsh(&aa_bloch_hamiltonian(0.4, 12.0, &aa).unwrap());
        let mut onsite: Vec<f64> = (0..3).map(|m| aa.onsite(m, 12.0)).collect();
        onsite.sort_by(f64::total_cmp);
        for (x, y) in vals.iter().zip(&onsite) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

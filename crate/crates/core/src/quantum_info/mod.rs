//! Bipartite entanglement and the analytic one-excitation-per-trimer states.

mod analytic;

pub use analytic::{analytic_state, band_reference, drive_maximum, pattern_state, regime_time, Regime};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dynamics::{fidelity, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, CMatrix};

/// Subsystem `A` of a ring of `n` sites given by 0-based site indices;
/// `B` is the complement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    n: usize,
    a: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, sites: &[usize]) -> Result<Self> {
        let mut a = sites.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != sites.len() {
            return Err(Error::InvalidPartition(format!("repeated site in {sites:?}")));
        }
        if a.is_empty() || a.len() >= n {
            return Err(Error::InvalidPartition(format!(
                "{sites:?} is not a nonempty proper subset of {n} sites"
            )));
        }
        if let Some(&s) = a.iter().find(|&&s| s >= n) {
            return Err(Error::InvalidPartition(format!("site {s} outside the ring of {n}")));
        }
        Ok(Partition { n, a })
    }

    /// `A` is the first trimer.
    pub fn first_trimer(n: usize) -> Result<Self> {
        Self::new(n, &[0, 1, 2])
    }

    /// `A` is the first site of every trimer.
    pub fn trimer_heads(n: usize) -> Result<Self> {
        if n % 3 != 0 {
            return Err(Error::InvalidPartition(format!("{n} sites do not form trimers")));
        }
        Self::new(n, &(0..n).step_by(3).collect::<Vec<_>>())
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> Vec<usize> {
        (0..self.n).filter(|s| !self.a.contains(s)).collect()
    }

    pub fn complement(&self) -> Partition {
        Partition {
            n: self.n,
            a: self.b(),
        }
    }

    /// `min(|A|, |B|)`, the largest possible entropy in bits.
    pub fn max_entropy(&self) -> f64 {
        self.a.len().min(self.n - self.a.len()) as f64
    }
}

/// Reduced state of the sites `kept` of an `n`-site ring.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    kept: Vec<usize>,
    matrix: CMatrix,
}

const VALIDITY_TOL: f64 = 1e-10;

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and the eigenvalue range.
    pub fn new(n: usize, kept: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let dim = 1usize << kept.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {} sites",
                matrix.nrows(),
                matrix.ncols(),
                kept.len()
            )));
        }
        if crate::linalg::hermiticity_defect(&matrix) > VALIDITY_TOL {
            return Err(Error::NumericalValidity("density matrix is not Hermitian".into()));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > VALIDITY_TOL || trace.im.abs() > VALIDITY_TOL {
            return Err(Error::NumericalValidity(format!("density matrix trace {trace}")));
        }
        let rho = DensityMatrix { n, kept, matrix };
        let vals = rho.eigenvalues();
        if vals.first().is_some_and(|&v| v < -VALIDITY_TOL) || vals.last().is_some_and(|&v| v > 1.0 + VALIDITY_TOL) {
            return Err(Error::NumericalValidity(format!(
                "density matrix eigenvalues span [{}, {}]",
                vals[0],
                vals[vals.len() - 1]
            )));
        }
        Ok(rho)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn kept_sites(&self) -> &[usize] {
        &self.kept
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.matrix)
    }

    /// `min(|kept|, n - |kept|)`.
    pub fn max_entropy(&self) -> f64 {
        self.kept.len().min(self.n - self.kept.len()) as f64
    }
}

/// Amplitudes arranged as a `2^|kept| x 2^|rest|` matrix.
fn regroup(psi: &StateVector, kept: &[usize]) -> CMatrix {
    let n = psi.n_sites();
    let rest: Vec<usize> = (0..n).filter(|s| !kept.contains(s)).collect();
    let bit = |site: usize| n - 1 - site;
    let mut m = DMatrix::zeros(1usize << kept.len(), 1usize << rest.len());
    for (b, &amp) in psi.amplitudes().iter().enumerate() {
        let gather = |sites: &[usize]| {
            sites
                .iter()
                .fold(0usize, |acc, &s| (acc << 1) | ((b >> bit(s)) & 1))
        };
        m[(gather(kept), gather(&rest))] = amp;
    }
    m
}

/// `rho_B = Tr_A |psi><psi|`, with `B` in increasing site order.
pub fn partial_trace(psi: &StateVector, part: &Partition) -> Result<DensityMatrix> {
    if psi.n_sites() != part.n {
        return Err(Error::InvalidPartition(format!(
            "partition of {} sites applied to a {}-site state",
            part.n,
            psi.n_sites()
        )));
    }
    let kept = part.b();
    let m = regroup(psi, &kept);
    let rho = &m * m.adjoint();
    DensityMatrix::new(part.n, kept, rho)
}

fn entropy_of(vals: &[f64]) -> f64 {
    -vals
        .iter()
        .filter(|&&p| p > 1e-12)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// Von Neumann entropy in bits; `normalized` divides by `min(|A|, |B|)`.
pub fn von_neumann_entropy(rho: &DensityMatrix, normalized: bool) -> Result<f64> {
    let vals = rho.eigenvalues();
    if vals.iter().any(|&v| v < -VALIDITY_TOL) {
        return Err(Error::NumericalValidity("negative density matrix eigenvalue".into()));
    }
    let s = entropy_of(&vals);
    Ok(if normalized { s / rho.max_entropy() } else { s })
}

/// Entanglement entropy of a pure state across `part`, computed from the
/// smaller of the two reduced states.
pub fn entanglement_entropy(psi: &StateVector, part: &Partition, normalized: bool) -> Result<f64> {
    if psi.n_sites() != part.n {
        return Err(Error::InvalidPartition(format!(
            "partition of {} sites applied to a {}-site state",
            part.n,
            psi.n_sites()
        )));
    }
    let small = if part.a.len() <= part.n - part.a.len() {
        part.a.clone()
    } else {
        part.b()
    };
    let m = regroup(psi, &small);
    let vals = eigvalsh(&(&m * m.adjoint()));
    let s = entropy_of(&vals);
    Ok(if normalized { s / part.max_entropy() } else { s })
}

/// `|<a|b>|^2`.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<f64> {
    fidelity(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> StateVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(2, vec![c(h), c(0.0), c(0.0), c(h)]).unwrap()
    }

    #[test]
    fn product_state_trace() {
        let psi = StateVector::basis(2, 0).unwrap();
        let rho = partial_trace(&psi, &Partition::new(2, &[0]).unwrap()).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert_eq!(von_neumann_entropy(&rho, false).unwrap(), 0.0);
    }

    #[test]
    fn bell_state_is_maximally_mixed() {
        let rho = partial_trace(&bell(), &Partition::new(2, &[1]).unwrap()).unwrap();
        assert!((rho.matrix() - CMatrix::identity(2, 2) * c(0.5)).norm() < 1e-15);
        assert!((von_neumann_entropy(&rho, false).unwrap() - 1.0).abs() < 1e-12);
        assert!((von_neumann_entropy(&rho, true).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kept_sites_follow_site_order() {
        // |0>|1>|0> with site 0 most significant: index 0b010
        let psi = StateVector::basis(3, 0b010).unwrap();
        let rho = partial_trace(&psi, &Partition::new(3, &[0]).unwrap()).unwrap();
        assert_eq!(rho.kept_sites(), &[1, 2]);
        assert!((rho.matrix()[(0b10, 0b10)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_partitions() {
        assert!(Partition::new(3, &[]).is_err());
        assert!(Partition::new(3, &[0, 1, 2]).is_err());
        assert!(Partition::new(3, &[3]).is_err());
        assert!(Partition::new(3, &[1, 1]).is_err());
        assert!(Partition::trimer_heads(8).is_err());
        assert_eq!(Partition::trimer_heads(9).unwrap().a(), &[0, 3, 6]);
        let psi = StateVector::basis(2, 0).unwrap();
        assert!(partial_trace(&psi, &Partition::first_trimer(9).unwrap()).is_err());
    }

    #[test]
    fn invalid_density_matrix() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.5), c(-0.5)]));
        assert!(DensityMatrix::new(2, vec![0], m).is_err());
    }
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{OperatorSum, MAX_SITES};

/// Normalized amplitudes over the `2^n` z-basis states. Site 0 (site 1 in
/// output files) is the most significant bit of the basis index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

const NORM_TOL: f64 = 1e-10;

impl StateVector {
    /// Wraps `amps`, which must already be normalized.
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        let s = Self::unchecked(n, amps)?;
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NumericalValidity(format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(s)
    }

    /// Normalizes `amps`; fails on a zero vector.
    pub fn normalized(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        let mut s = Self::unchecked(n, amps)?;
        let norm = s.norm();
        if !(norm > 1e-300) {
            return Err(Error::NumericalValidity("cannot normalize a zero vector".into()));
        }
        s.scale(1.0 / norm);
        Ok(s)
    }

    fn unchecked(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_SITES || amps.len() != 1usize << n {
            return Err(Error::Dimension(format!(
                "{} amplitudes do not describe {n} qubits",
                amps.len()
            )));
        }
        Ok(StateVector { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n];
        if index >= amps.len() {
            return Err(Error::Dimension(format!("basis index {index} out of range")));
        }
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn scale(&mut self, f: f64) {
        for a in &mut self.amps {
            *a *= f;
        }
    }

    pub fn renormalize(&mut self) {
        let n = self.norm();
        self.scale(1.0 / n);
    }

    /// Moves the content of site `j` to site `j + shift` around the ring.
    pub fn translate(&self, shift: isize) -> StateVector {
        let n = self.n;
        let s = shift.rem_euclid(n as isize) as usize;
        if s == 0 {
            return self.clone();
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        // site j is bit n-1-j, so moving sites up is a right rotation of the bits
        let mask = self.dim() - 1;
        for (b, a) in self.amps.iter().enumerate() {
            let rotated = ((b >> s) | (b << (n - s))) & mask;
            amps[rotated] = *a;
        }
        StateVector { n, amps }
    }

    fn check_dim(&self, other: &StateVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "states of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// `<psi|op|psi>` for Hermitian `op`.
pub fn expectation(op: &OperatorSum, psi: &StateVector) -> Result<f64> {
    if !op.is_hermitian(1e-14) {
        return Err(Error::Contract(format!("expectation of non-Hermitian `{op}`")));
    }
    let v = op.apply(psi.amplitudes())?;
    let e: Complex64 = psi.amps.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
    let scale = 1.0 + op.terms().iter().map(|t| t.coeff.norm()).sum::<f64>();
    if e.im.abs() > 1e-10 * scale {
        return Err(Error::NumericalValidity(format!(
            "expectation has imaginary residual {:e}",
            e.im
        )));
    }
    Ok(e.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse;

    #[test]
    fn z_and_x_on_zero() {
        let zero = StateVector::basis(1, 0).unwrap();
        assert_eq!(expectation(&parse("Z0", 1).unwrap(), &zero).unwrap(), 1.0);
        assert_eq!(expectation(&parse("X0", 1).unwrap(), &zero).unwrap(), 0.0);
    }

    #[test]
    fn non_hermitian_expectation_is_rejected() {
        let zero = StateVector::basis(1, 0).unwrap();
        let op = parse("(0.0, 1.0) * Z0", 1).unwrap();
        assert!(matches!(expectation(&op, &zero), Err(Error::Contract(_))));
    }

    #[test]
    fn fidelity_properties() {
        let amps = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let psi = StateVector::new(1, amps.clone()).unwrap();
        assert!((fidelity(&psi, &psi).unwrap() - 1.0).abs() < 1e-15);
        let phase = Complex64::from_polar(1.0, 0.7);
        let rotated = StateVector::normalized(1, amps.iter().map(|a| a * phase).collect()).unwrap();
        assert!((fidelity(&psi, &rotated).unwrap() - 1.0).abs() < 1e-15);
        let a = StateVector::basis(2, 1).unwrap();
        let b = StateVector::basis(2, 2).unwrap();
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        assert!(fidelity(&a, &psi).is_err());
    }

    #[test]
    fn translation_moves_sites() {
        // |100> -> |010> -> |001> -> |100>
        let psi = StateVector::basis(3, 0b100).unwrap();
        assert_eq!(psi.translate(1), StateVector::basis(3, 0b010).unwrap());
        assert_eq!(psi.translate(2), StateVector::basis(3, 0b001).unwrap());
        assert_eq!(psi.translate(-1), psi.translate(2));
        assert_eq!(psi.translate(3), psi);
    }

    #[test]
    fn normalization_is_checked() {
        let v = vec![Complex64::new(1.0, 0.0); 2];
        assert!(StateVector::new(1, v.clone()).is_err());
        assert!((StateVector::normalized(1, v).unwrap().norm() - 1.0).abs() < 1e-15);
        assert!(StateVector::normalized(1, vec![Complex64::new(0.0, 0.0); 2]).is_err());
    }
}

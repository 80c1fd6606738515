use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{BasisMasks, OperatorSum};
use crate::error::{Error, Result};

/// Largest ring realized densely unless a caller raises the cap.
pub const DEFAULT_MATRIX_CAP: usize = 14;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Resource(format!(
            "dense realization of {n} sites exceeds the cap of {cap}"
        )));
    }
    Ok(())
}

impl OperatorSum {
    /// Dense matrix in the z basis with site 0 as the most significant bit.
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        self.to_matrix_capped(DEFAULT_MATRIX_CAP)
    }

    pub fn to_matrix_capped(&self, cap: usize) -> Result<DMatrix<Complex64>> {
        let n = self.n_sites();
        check_cap(n, cap)?;
        let dim = 1usize << n;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for t in self.terms() {
            let masks = BasisMasks::from(&t.string);
            for col in 0..dim {
                let (row, ph) = masks.apply(col);
                m[(row, col)] += ph.apply(t.coeff);
            }
        }
        Ok(m)
    }

    /// `op |psi>` without forming the matrix.
    pub fn apply(&self, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = 1usize << self.n_sites();
        if psi.len() != dim {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} sites",
                psi.len(),
                self.n_sites()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for t in self.terms() {
            let masks = BasisMasks::from(&t.string);
            for (b, amp) in psi.iter().enumerate() {
                let (row, ph) = masks.apply(b);
                out[row] += ph.apply(t.coeff * amp);
            }
        }
        Ok(out)
    }

    /// Diagonal of the matrix when every term is a product of `Z` letters.
    pub fn diagonal(&self) -> Option<DVector<f64>> {
        if self.terms().iter().any(|t| t.string.x_bits() != 0) {
            return None;
        }
        let dim = 1usize << self.n_sites();
        let mut d = DVector::zeros(dim);
        for t in self.terms() {
            let masks = BasisMasks::from(&t.string);
            for b in 0..dim {
                d[b] += masks.apply(b).1.apply(t.coeff).re;
            }
        }
        Some(d)
    }
}

//! Dense Hermitian eigensolves and symmetry-sector bases.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{BasisMasks, OperatorSum, PauliString};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

fn real_part(m: &CMatrix) -> Option<DMatrix<f64>> {
    m.iter().all(|c| c.im == 0.0).then(|| m.map(|c| c.re))
}

/// Eigenvalues in ascending order with matching eigenvector columns.
///
/// Real symmetric input takes the real solver.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let (raw_values, raw_vectors) = match real_part(m) {
        Some(r) => {
            let eig = r.symmetric_eigen();
            (eig.eigenvalues, eig.eigenvectors.map(|x| Complex64::new(x, 0.0)))
        }
        None => {
            let eig = m.clone().symmetric_eigen();
            (eig.eigenvalues, eig.eigenvectors)
        }
    };
    let mut order: Vec<usize> = (0..raw_values.len()).collect();
    order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]));
    let values = order.iter().map(|&k| raw_values[k]).collect();
    let mut vectors = CMatrix::zeros(m.nrows(), m.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &raw_vectors.column(src));
    }
    (values, vectors)
}

pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = match real_part(m) {
        Some(r) => r.symmetric_eigenvalues().iter().copied().collect(),
        None => m.clone().symmetric_eigenvalues().iter().copied().collect(),
    };
    v.sort_by(f64::total_cmp);
    v
}

/// Largest entry-wise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Orthonormal basis of the `eigenvalue` eigenspace of a Pauli string
/// symmetry, each vector supported on at most two basis states.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    n: usize,
    vectors: Vec<Vec<(usize, Complex64)>>,
    /// For each full basis index: the sector vector containing it and the
    /// amplitude it carries there.
    slot: Vec<Option<(usize, Complex64)>>,
}

impl SectorBasis {
    pub fn full(n: usize) -> Self {
        let dim = 1usize << n;
        let one = Complex64::new(1.0, 0.0);
        SectorBasis {
            n,
            vectors: (0..dim).map(|b| vec![(b, one)]).collect(),
            slot: (0..dim).map(|b| Some((b, one))).collect(),
        }
    }

    /// `symmetry` must be Hermitian; `eigenvalue` is `+1` or `-1`.
    pub fn new(symmetry: &PauliString, eigenvalue: i8) -> Result<Self> {
        if !symmetry.is_hermitian() || symmetry.is_identity_letters() {
            return Err(Error::Contract(format!(
                "`{symmetry}` is not a nontrivial Hermitian Pauli symmetry"
            )));
        }
        if eigenvalue != 1 && eigenvalue != -1 {
            return Err(Error::Contract("sector eigenvalue must be +1 or -1".into()));
        }
        let n = symmetry.n_sites();
        let dim = 1usize << n;
        let lambda = eigenvalue as f64;
        let masks = BasisMasks::from(symmetry);
        let mut vectors = Vec::new();
        let mut slot = vec![None; dim];
        if masks.flip == 0 {
            let one = Complex64::new(1.0, 0.0);
            for b in 0..dim {
                if masks.apply(b).1.to_complex().re == lambda {
                    slot[b] = Some((vectors.len(), one));
                    vectors.push(vec![(b, one)]);
                }
            }
        } else {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            for b in 0..dim {
                let (partner, ph) = masks.apply(b);
                if partner < b {
                    continue;
                }
                // S(|b> + c|b'>) = lambda (|b> + c|b'>) fixes c = lambda * ph(b)
                let c = ph.to_complex() * lambda;
                let k = vectors.len();
                slot[b] = Some((k, Complex64::new(h, 0.0)));
                slot[partner] = Some((k, c * h));
                vectors.push(vec![(b, Complex64::new(h, 0.0)), (partner, c * h)]);
            }
        }
        Ok(SectorBasis { n, vectors, slot })
    }

    /// Parity `prod_j X_j` sector.
    pub fn x_parity(n: usize, eigenvalue: i8) -> Result<Self> {
        let all: Vec<_> = (0..n as isize).map(|j| (j, crate::pauli::Pauli::X)).collect();
        Self::new(&PauliString::from_sites(n, &all)?, eigenvalue)
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// `V^dag op V` for the isometry `V` whose columns are the sector vectors.
    pub fn restrict(&self, op: &OperatorSum) -> Result<CMatrix> {
        if op.n_sites() != self.n {
            return Err(Error::Dimension(format!(
                "operator on {} sites, sector on {}",
                op.n_sites(),
                self.n
            )));
        }
        let d = self.dim();
        let compiled: Vec<(BasisMasks, Complex64)> = op
            .terms()
            .iter()
            .map(|t| (BasisMasks::from(&t.string), t.coeff))
            .collect();
        let mut m = CMatrix::zeros(d, d);
        for (a, vec_a) in self.vectors.iter().enumerate() {
            for &(p, amp) in vec_a {
                for (masks, coeff) in &compiled {
                    let (q, ph) = masks.apply(p);
                    if let Some((row, amp_q)) = self.slot[q] {
                        m[(row, a)] += amp_q.conj() * ph.apply(*coeff) * amp;
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn embed(&self, v: &CVector) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        for (k, vec_k) in self.vectors.iter().enumerate() {
            for &(p, amp) in vec_k {
                out[p] += amp * v[k];
            }
        }
        out
    }

    pub fn project(&self, psi: &[Complex64]) -> CVector {
        CVector::from_iterator(
            self.dim(),
            self.vectors
                .iter()
                .map(|vec_k| vec_k.iter().map(|&(p, amp)| amp.conj() * psi[p]).sum()),
        )
    }
}

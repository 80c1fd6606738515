use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, SectorBasis};
use crate::pauli::{OperatorSum, Pauli, PauliString};

use super::StateVector;

/// Default minimum `|<reference|eigenvector>|^2` accepted by
/// [`prepare_initial_state`].
pub const PREPARATION_THRESHOLD: f64 = 0.8;

/// Gap below which the two best overlaps count as a tie.
pub const AMBIGUITY_TOL: f64 = 1e-9;

/// The eigenvector selected by [`best_eigenstate`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Prepared {
    pub state: StateVector,
    /// `|<reference|state>|^2`.
    pub overlap: f64,
    /// Best overlap among the remaining eigenvectors.
    pub runner_up: f64,
    pub energy: f64,
    /// `prod X` eigenvalue when the search ran sector by sector.
    pub x_parity: Option<i8>,
}

fn x_parity_string(n: usize) -> Result<PauliString> {
    let letters: Vec<(isize, Pauli)> = (0..n as isize).map(|j| (j, Pauli::X)).collect();
    PauliString::from_sites(n, &letters)
}

/// Eigenvector of `h` with the largest overlap with `reference`.
///
/// When `h` commutes with `prod X` each parity sector is diagonalized
/// separately, skipping sectors where `reference` has no weight.
pub fn best_eigenstate(h: &OperatorSum, reference: &StateVector) -> Result<Prepared> {
    let n = h.n_sites();
    if reference.n_sites() != n {
        return Err(Error::Dimension(format!(
            "reference on {} sites for a {n}-site Hamiltonian",
            reference.n_sites()
        )));
    }
    let parity = OperatorSum::from_string(1.0, x_parity_string(n)?);
    let sectors: Vec<(SectorBasis, Option<i8>)> = if h.commutator(&parity)?.prune(1e-13).is_empty() {
        vec![
            (SectorBasis::x_parity(n, 1)?, Some(1)),
            (SectorBasis::x_parity(n, -1)?, Some(-1)),
        ]
    } else {
        vec![(SectorBasis::full(n), None)]
    };
    let mut best: Option<Prepared> = None;
    let mut runner_up = 0.0f64;
    for (basis, label) in sectors {
        let projected = basis.project(reference.amplitudes());
        if projected.norm_squared() < 1e-14 {
            continue;
        }
        let (vals, vecs) = eigh(&basis.restrict(h)?);
        for (k, &e) in vals.iter().enumerate() {
            let v = vecs.column(k);
            let amp: Complex64 = v.dotc(&projected);
            let ov = amp.norm_sqr();
            let better = best.as_ref().is_none_or(|b| ov > b.overlap);
            if better {
                if let Some(b) = &best {
                    runner_up = runner_up.max(b.overlap);
                }
                // global phase chosen so that <reference|state> is real positive
                let phase = if amp.norm() > 0.0 { amp / amp.norm() } else { Complex64::new(1.0, 0.0) };
                let col = v.into_owned() * phase;
                let state = StateVector::normalized(n, basis.embed(&col))?;
                best = Some(Prepared {
                    state,
                    overlap: ov,
                    runner_up: 0.0,
                    energy: e,
                    x_parity: label,
                });
            } else {
                runner_up = runner_up.max(ov);
            }
        }
    }
    let mut best = best.ok_or_else(|| Error::NumericalValidity("reference state has no weight".into()))?;
    best.runner_up = runner_up;
    Ok(best)
}

/// [`best_eigenstate`] with the uniqueness and threshold checks applied.
pub fn prepare_initial_state(h0: &OperatorSum, reference: &StateVector, threshold: f64) -> Result<Prepared> {
    let p = best_eigenstate(h0, reference)?;
    if p.overlap - p.runner_up < AMBIGUITY_TOL {
        return Err(Error::Ambiguity {
            first: p.overlap,
            second: p.runner_up,
        });
    }
    if p.overlap < threshold {
        return Err(Error::Preparation {
            overlap: p.overlap,
            threshold,
        });
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse;

    #[test]
    fn picks_the_matching_eigenvector() {
        let h = parse("-1.0 * X0 - 2.0 * X1 + 0.1 * Z0 Z1", 2).unwrap();
        let plus = Complex64::new(0.5, 0.0);
        let reference = StateVector::new(2, vec![plus; 4]).unwrap();
        let p = prepare_initial_state(&h, &reference, 0.8).unwrap();
        assert!(p.overlap > 0.99);
        assert_eq!(p.x_parity, Some(1));
        let amp = reference.inner(&p.state).unwrap();
        assert!(amp.im.abs() < 1e-14 && amp.re > 0.0);
    }

    #[test]
    fn ties_are_ambiguous() {
        let h = parse("1.0 * Z0", 1).unwrap();
        let h2 = std::f64::consts::FRAC_1_SQRT_2;
        let reference = StateVector::new(1, vec![Complex64::new(h2, 0.0); 2]).unwrap();
        assert!(matches!(
            prepare_initial_state(&h, &reference, 0.4),
            Err(Error::Ambiguity { .. })
        ));
    }

    #[test]
    fn low_overlap_is_rejected() {
        let h = parse("1.0 * Z0", 1).unwrap();
        let amps = vec![Complex64::new(0.7f64.sqrt(), 0.0), Complex64::new(0.0, 0.3f64.sqrt())];
        let reference = StateVector::new(1, amps).unwrap();
        assert!(matches!(
            prepare_initial_state(&h, &reference, 0.8),
            Err(Error::Preparation { .. })
        ));
    }
}

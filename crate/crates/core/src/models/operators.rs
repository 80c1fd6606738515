//! Site-resolved operators of each model kind.
//!
//! For every kind the drive is `-sum_j G_j D_j` with `D_j` from
//! [`driving_op`]; an excitation at `j` is the `D_j = +1` eigenstate, the one
//! lowered in energy by the drive.

use crate::error::{Error, Result};
use crate::pauli::{
    default_search_depth, reduce_to_single, OperatorSum, Pauli, PauliString, Transform,
    TransformChain,
};

use super::ModelKind;

fn string(n: usize, letters: &[(isize, Pauli)]) -> Result<PauliString> {
    PauliString::from_sites(n, letters)
}

fn sum(n: usize, coeff: f64, letters: &[(isize, Pauli)]) -> Result<OperatorSum> {
    Ok(OperatorSum::from_string(coeff, string(n, letters)?))
}

fn r_sign(r: usize) -> f64 {
    if r % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Smallest ring on which the kind's terms are well defined.
pub fn min_sites(kind: ModelKind) -> usize {
    match kind {
        ModelKind::SpinFlip | ModelKind::Kink => 2,
        ModelKind::Cluster => 3,
        ModelKind::HigherR(r) => r + 3,
    }
}

pub(crate) fn check_sites(kind: ModelKind, n: usize) -> Result<()> {
    if n < min_sites(kind) {
        return Err(Error::IncompatibleParams(format!(
            "{kind} needs at least {} sites, got {n}",
            min_sites(kind)
        )));
    }
    Ok(())
}

/// `D_j`: the operator multiplied by `-G_j`.
pub fn driving_op(kind: ModelKind, n: usize, j: usize) -> Result<OperatorSum> {
    check_sites(kind, n)?;
    let j = j as isize;
    use Pauli::*;
    match kind {
        ModelKind::SpinFlip => sum(n, 1.0, &[(j, X)]),
        ModelKind::Kink => sum(n, 1.0, &[(j, Z), (j + 1, Z)]),
        ModelKind::Cluster => sum(n, 1.0, &[(j - 1, Z), (j, X), (j + 1, Z)]),
        ModelKind::HigherR(r) => {
            let mut letters = vec![(j - 1, Z)];
            letters.extend((0..=r as isize).map(|m| (j + m, X)));
            letters.push((j + r as isize + 1, Z));
            sum(n, r_sign(r), &letters)
        }
    }
}

/// Static bond term per unit coupling; its expectation is the `Y_j` series.
pub fn bond_op(kind: ModelKind, n: usize, j: usize) -> Result<OperatorSum> {
    check_sites(kind, n)?;
    let j = j as isize;
    use Pauli::*;
    match kind {
        ModelKind::SpinFlip | ModelKind::Cluster => sum(n, 1.0, &[(j, Z), (j + 1, Z)]),
        ModelKind::Kink => sum(n, 1.0, &[(j, X)]),
        // Indexed so that r = 0 coincides with the cluster bond term.
        ModelKind::HigherR(r) => {
            let mut letters = vec![(j, Z)];
            letters.extend((1..=r as isize).map(|m| (j + m, X)));
            letters.push((j + r as isize + 1, Z));
            sum(n, r_sign(r), &letters)
        }
    }
}

/// Interaction term per unit `K`, the image of `X_j X_{j+1}` in the kind's
/// own variables.
pub fn interaction_op(kind: ModelKind, n: usize, j: usize) -> Result<OperatorSum> {
    check_sites(kind, n)?;
    let ji = j as isize;
    use Pauli::*;
    match kind {
        ModelKind::SpinFlip => sum(n, 1.0, &[(ji, X), (ji + 1, X)]),
        ModelKind::Kink => sum(n, 1.0, &[(ji, Z), (ji + 2, Z)]),
        ModelKind::Cluster => sum(n, 1.0, &[(ji, Z), (ji + 1, Y), (ji + 2, Y), (ji + 3, Z)]),
        ModelKind::HigherR(_) => {
            let chain = chain_to_spin_flip(kind, n)?;
            chain
                .inverse()
                .apply(&interaction_op(ModelKind::SpinFlip, n, j)?)
        }
    }
}

/// Chain of rewrites taking the kind's Hamiltonian to the spin-flip one.
pub fn chain_to_spin_flip(kind: ModelKind, n: usize) -> Result<TransformChain> {
    check_sites(kind, n)?;
    match kind {
        ModelKind::SpinFlip => Ok(TransformChain::identity()),
        ModelKind::Kink => Ok(TransformChain::new(vec![Transform::KwDuality])),
        ModelKind::Cluster => Ok(TransformChain::new(vec![
            Transform::KwDuality,
            Transform::RotateX,
            Transform::KwDualityInverse,
            Transform::ZFlip,
        ])),
        ModelKind::HigherR(r) => {
            if n < 2 * r + 5 {
                return Err(Error::IncompatibleParams(format!(
                    "the duality chain of {kind} wraps around a ring of {n} sites; need at least {}",
                    2 * r + 5
                )));
            }
            // Each (kw, rx) round strips one X: Z X^{m+1} Z -> -Z X^m Z.
            let mut steps = Vec::with_capacity(2 * r + 4);
            for _ in 0..r {
                steps.push(Transform::KwDuality);
                steps.push(Transform::RotateX);
            }
            steps.extend(chain_to_spin_flip(ModelKind::Cluster, n)?.steps().iter().copied());
            Ok(TransformChain::new(steps))
        }
    }
}

/// Breadth-first reduction of the kind's drive family; may find a shorter
/// chain than [`chain_to_spin_flip`] when the ring is small.
pub fn search_chain_to_spin_flip(kind: ModelKind, n: usize) -> Result<TransformChain> {
    let family = drive_family(kind, n)?;
    let depth = default_search_depth(family[0].max_weight());
    Ok(reduce_to_single(&family, depth)?.chain)
}

/// The per-site drive operators `-D_j` for `j = 0..n`.
pub fn drive_family(kind: ModelKind, n: usize) -> Result<Vec<OperatorSum>> {
    (0..n).map(|j| Ok(driving_op(kind, n, j)?.scale(-1.0))).collect()
}

/// Local excitation number `(1 + D_j) / 2`.
pub fn occupation_op(kind: ModelKind, n: usize, j: usize) -> Result<OperatorSum> {
    let id = OperatorSum::identity(n, 0.5)?;
    Ok(&id + &driving_op(kind, n, j)?.scale(0.5))
}

/// `N = sum_j (1 + D_j) / 2`.
pub fn excitation_number_op(kind: ModelKind, n: usize) -> Result<OperatorSum> {
    let mut out = OperatorSum::zero(n)?;
    for j in 0..n {
        out = &out + &occupation_op(kind, n, j)?;
    }
    Ok(out)
}

/// `x = sum_j j (1 + D_j) / 2` with 1-based `j`.
pub fn position_op(kind: ModelKind, n: usize) -> Result<OperatorSum> {
    let mut out = OperatorSum::zero(n)?;
    for j in 0..n {
        out = &out + &occupation_op(kind, n, j)?.scale((j + 1) as f64);
    }
    Ok(out)
}

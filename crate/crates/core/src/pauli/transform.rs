//! Duality and rotation rewrites of Pauli strings on a periodic ring.
//!
//! The duality `D` acts on the bond algebra generated by `X_j` and
//! `Z_j Z_{j+1}`:
//!
//! ```text
//! D(X_j)         = Z_{j-1} Z_j        D^-1(X_j)         = Z_j Z_{j+1}
//! D(Z_j Z_{j+1}) = X_j                D^-1(Z_j Z_{j+1}) = X_{j+1}
//! ```
//!
//! A string is split as `i^{nY} X^x Z^z`; the `Z^z` part is factored into
//! bonds by pairing its sites in increasing order. On a ring the bond set and
//! its complement give the same operator, so the smaller one is used. Strings
//! with an odd number of `Z`-type letters have no bond factorization.
//!
//! The rotation is conjugation by `exp(-i pi/4 sum X)`, taking `X -> X`,
//! `Z -> Y`, `Y -> -Z`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{OperatorSum, Pauli, PauliString, Phase};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Transform {
    KwDuality,
    KwDualityInverse,
    RotateX,
    RotateXInverse,
    /// Conjugation by the product of all `Z`: flips the sign of `X` and `Y`.
    ZFlip,
    Translate(isize),
}

impl Transform {
    pub fn inverse(self) -> Transform {
        match self {
            Transform::KwDuality => Transform::KwDualityInverse,
            Transform::KwDualityInverse => Transform::KwDuality,
            Transform::RotateX => Transform::RotateXInverse,
            Transform::RotateXInverse => Transform::RotateX,
            Transform::ZFlip => Transform::ZFlip,
            Transform::Translate(k) => Transform::Translate(-k),
        }
    }

    pub fn apply_string(self, s: &PauliString) -> Result<PauliString> {
        match self {
            Transform::KwDuality => dualize_string(s, false),
            Transform::KwDualityInverse => dualize_string(s, true),
            Transform::RotateX => Ok(rotate_string(s, false)),
            Transform::RotateXInverse => Ok(rotate_string(s, true)),
            Transform::ZFlip => Ok(z_flip_string(s)),
            Transform::Translate(k) => Ok(s.translate(k)),
        }
    }

    pub fn apply(self, op: &OperatorSum) -> Result<OperatorSum> {
        op.try_map_strings(|s| self.apply_string(s))
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::KwDuality => f.write_str("kw"),
            Transform::KwDualityInverse => f.write_str("kw^-1"),
            Transform::RotateX => f.write_str("rx"),
            Transform::RotateXInverse => f.write_str("rx^-1"),
            Transform::ZFlip => f.write_str("zflip"),
            Transform::Translate(k) => write!(f, "shift({k})"),
        }
    }
}

/// Rotation of a whole ring by one site, as a bit mask operation.
fn rotate_mask(mask: u64, n: usize, shift: isize) -> u64 {
    let s = shift.rem_euclid(n as isize) as u32;
    if s == 0 {
        return mask;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    ((mask << s) | (mask >> (n as u32 - s))) & full
}

fn dualize_string(s: &PauliString, inverse: bool) -> Result<PauliString> {
    let n = s.n_sites();
    let x = s.x_bits();
    let z = s.z_bits();
    if z.count_ones() % 2 == 1 {
        return Err(Error::NonDualizable {
            term: s.to_string(),
        });
    }
    // Bond k is Z_k Z_{k+1}; Z_a Z_b (a < b) is the product of bonds a..b-1.
    let mut bonds = 0u64;
    let sites: Vec<usize> = (0..n).filter(|j| (z >> j) & 1 == 1).collect();
    for pair in sites.chunks(2) {
        for k in pair[0]..pair[1] {
            bonds |= 1u64 << k;
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let complement = !bonds & full;
    if complement.count_ones() < bonds.count_ones() {
        bonds = complement;
    }
    let (z_image, x_image) = if inverse {
        // X_j -> Z_j Z_{j+1}, bond k -> X_{k+1}
        (x ^ rotate_mask(x, n, 1), rotate_mask(bonds, n, 1))
    } else {
        // X_j -> Z_{j-1} Z_j, bond k -> X_k
        (x ^ rotate_mask(x, n, -1), bonds)
    };
    let prefactor = s.phase() * Phase::from_exponent(s.count_y() as i64);
    let zs = PauliString::from_raw(n, 0, z_image, prefactor);
    let xs = PauliString::from_raw(n, x_image, 0, Phase::ONE);
    zs.product(&xs)
}

fn rotate_string(s: &PauliString, inverse: bool) -> PauliString {
    let x = s.x_bits();
    let z = s.z_bits();
    // forward: Y -> -Z; inverse: Z -> -Y
    let negated = if inverse { z & !x } else { z & x };
    let sign = Phase::from_exponent(2 * negated.count_ones() as i64);
    PauliString::from_raw(s.n_sites(), x ^ z, z, s.phase() * sign)
}

fn z_flip_string(s: &PauliString) -> PauliString {
    let sign = Phase::from_exponent(2 * s.x_bits().count_ones() as i64);
    s.with_phase(s.phase() * sign)
}

pub fn kw_dualize(op: &OperatorSum) -> Result<OperatorSum> {
    Transform::KwDuality.apply(op)
}

pub fn kw_dualize_inverse(op: &OperatorSum) -> Result<OperatorSum> {
    Transform::KwDualityInverse.apply(op)
}

pub fn rotate_x(op: &OperatorSum) -> OperatorSum {
    Transform::RotateX.apply(op).expect("rotation is total")
}

pub fn rotate_x_inverse(op: &OperatorSum) -> OperatorSum {
    Transform::RotateXInverse.apply(op).expect("rotation is total")
}

/// Ordered sequence of transforms, applied first to last.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformChain {
    steps: Vec<Transform>,
}

impl TransformChain {
    pub fn new(steps: Vec<Transform>) -> Self {
        TransformChain { steps }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[Transform] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn then(mut self, t: Transform) -> Self {
        self.steps.push(t);
        self
    }

    pub fn inverse(&self) -> TransformChain {
        TransformChain {
            steps: self.steps.iter().rev().map(|t| t.inverse()).collect(),
        }
    }

    pub fn apply(&self, op: &OperatorSum) -> Result<OperatorSum> {
        let mut out = op.clone();
        for t in &self.steps {
            out = t.apply(&out)?;
        }
        Ok(out)
    }

    pub fn apply_string(&self, s: &PauliString) -> Result<PauliString> {
        let mut out = *s;
        for t in &self.steps {
            out = t.apply_string(&out)?;
        }
        Ok(out)
    }
}

impl fmt::Display for TransformChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self.steps.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(" -> "))
    }
}

/// Outcome of [`reduce_to_single`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Image of each family member; member `j` maps to `-X_j`.
    pub reduced: Vec<OperatorSum>,
    pub chain: TransformChain,
}

/// Default search depth of [`reduce_to_single`] for a family of the given
/// maximum weight.
pub fn default_search_depth(max_weight: usize) -> usize {
    2 * max_weight + 2
}

/// Searches for a chain of dualities and rotations taking every member of a
/// site-indexed family `O_j` to `-X_j`, so that `-sum_j G_j O_j` style drives
/// become single spin flips.
///
/// The search is breadth first over `{kw, kw^-1, rx, rx^-1}`; the shortest
/// chain whose images are all single-site `X` wins. A trailing `zflip` fixes
/// the overall sign and a trailing shift aligns the sites.
pub fn reduce_to_single(family: &[OperatorSum], max_depth: usize) -> Result<Reduction> {
    if family.is_empty() {
        return Err(Error::ReductionFailure("empty operator family".into()));
    }
    let n = family[0].n_sites();
    if family.iter().any(|o| o.n_sites() != n) {
        return Err(Error::Dimension("family members on different rings".into()));
    }
    const MOVES: [Transform; 4] = [
        Transform::KwDuality,
        Transform::KwDualityInverse,
        Transform::RotateX,
        Transform::RotateXInverse,
    ];

    let start: Vec<OperatorSum> = family.iter().map(|o| o.canonicalize()).collect();
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(state_key(&start));
    let mut queue: VecDeque<(Vec<OperatorSum>, Vec<Transform>)> = VecDeque::new();
    queue.push_back((start, Vec::new()));

    while let Some((state, path)) = queue.pop_front() {
        if let Some(fix) = normalization(&state) {
            let mut steps = path;
            steps.extend(fix);
            let chain = TransformChain::new(steps);
            let reduced = family
                .iter()
                .map(|o| chain.apply(o))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Reduction { reduced, chain });
        }
        if path.len() >= max_depth {
            continue;
        }
        for mv in MOVES {
            if path.last() == Some(&mv.inverse()) {
                continue;
            }
            let Ok(next) = state.iter().map(|o| mv.apply(o)).collect::<Result<Vec<_>>>() else {
                continue;
            };
            if seen.insert(state_key(&next)) {
                let mut p = path.clone();
                p.push(mv);
                queue.push_back((next, p));
            }
        }
    }
    Err(Error::ReductionFailure(format!(
        "no chain of depth <= {max_depth} maps the family to single spin flips"
    )))
}

fn state_key(state: &[OperatorSum]) -> String {
    state
        .iter()
        .map(|o| o.to_string())
        .collect::<Vec<_>>()
        .join(" | ")
}

/// If every member `j` is `c X_{j+s}` with a common `c = +-1` and shift `s`,
/// returns the transforms taking it to `-X_j`.
fn normalization(state: &[OperatorSum]) -> Option<Vec<Transform>> {
    let mut common: Option<(Complex64, isize)> = None;
    for (j, o) in state.iter().enumerate() {
        if o.len() != 1 {
            return None;
        }
        let t = o.terms()[0];
        let support = t.string.support();
        if support.len() != 1 || support[0].1 != Pauli::X {
            return None;
        }
        let n = o.n_sites() as isize;
        let shift = (support[0].0 as isize - j as isize).rem_euclid(n);
        match common {
            None => common = Some((t.coeff, shift)),
            Some((c, s)) if c == t.coeff && s == shift => {}
            _ => return None,
        }
    }
    let (c, shift) = common?;
    let mut fix = Vec::new();
    if c == Complex64::new(1.0, 0.0) {
        fix.push(Transform::ZFlip);
    } else if c != Complex64::new(-1.0, 0.0) {
        return None;
    }
    if shift != 0 {
        fix.push(Transform::Translate(-shift));
    }
    Some(fix)
}

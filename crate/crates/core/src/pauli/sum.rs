use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{PauliString, Phase};
use crate::error::{Error, Result};

/// One weighted Pauli string. In canonical form the string phase is `+1`
/// and the phase lives in `coeff`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Complex64,
    pub string: PauliString,
}

impl Term {
    /// Coefficient with the string phase folded in.
    pub fn effective_coeff(&self) -> Complex64 {
        self.string.phase().apply(self.coeff)
    }
}

/// Weighted sum of Pauli strings on a common ring.
///
/// Constructors return canonical sums: one term per distinct letter word,
/// string phases folded into the coefficients, exact zeros removed, terms
/// kept in order of first appearance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSum {
    n: usize,
    terms: Vec<Term>,
}

impl OperatorSum {
    pub fn zero(n: usize) -> Result<Self> {
        PauliString::identity(n)?;
        Ok(OperatorSum { n, terms: Vec::new() })
    }

    pub fn identity(n: usize, coeff: f64) -> Result<Self> {
        Ok(Self::from_string(coeff, PauliString::identity(n)?))
    }

    pub fn from_string(coeff: impl Into<Complex64>, string: PauliString) -> Self {
        OperatorSum {
            n: string.n_sites(),
            terms: vec![Term {
                coeff: coeff.into(),
                string,
            }],
        }
        .canonicalize()
    }

    /// Builds a sum from terms without canonicalizing.
    pub fn raw(n: usize, terms: Vec<Term>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.string.n_sites() != n) {
            return Err(Error::Dimension(format!(
                "term `{}` has {} sites, sum has {n}",
                t.string,
                t.string.n_sites()
            )));
        }
        Ok(OperatorSum { n, terms })
    }

    pub fn from_terms(n: usize, terms: Vec<Term>) -> Result<Self> {
        Ok(Self::raw(n, terms)?.canonicalize())
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn canonicalize(&self) -> Self {
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let c = t.effective_coeff();
            let s = t.string.letters_only();
            match index.get(&s.key()) {
                Some(&k) => out[k].coeff += c,
                None => {
                    index.insert(s.key(), out.len());
                    out.push(Term { coeff: c, string: s });
                }
            }
        }
        out.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        OperatorSum { n: self.n, terms: out }
    }

    /// Drops terms whose coefficient magnitude is at most `eps`.
    pub fn prune(&self, eps: f64) -> Self {
        let mut out = self.canonicalize();
        out.terms.retain(|t| t.coeff.norm() > eps);
        out
    }

    fn check_same(&self, rhs: &OperatorSum) -> Result<()> {
        if self.n != rhs.n {
            return Err(Error::Dimension(format!(
                "operator sums on {} and {} sites",
                self.n, rhs.n
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &OperatorSum) -> Result<Self> {
        self.check_same(rhs)?;
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&rhs.terms);
        Ok(OperatorSum { n: self.n, terms }.canonicalize())
    }

    pub fn push(&mut self, coeff: impl Into<Complex64>, string: PauliString) -> Result<()> {
        if string.n_sites() != self.n {
            return Err(Error::Dimension(format!(
                "string on {} sites pushed to a sum on {}",
                string.n_sites(),
                self.n
            )));
        }
        self.terms.push(Term {
            coeff: coeff.into(),
            string,
        });
        *self = self.canonicalize();
        Ok(())
    }

    pub fn scale(&self, factor: impl Into<Complex64>) -> Self {
        let f = factor.into();
        OperatorSum {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * f,
                    string: t.string,
                })
                .collect(),
        }
        .canonicalize()
    }

    pub fn try_mul(&self, rhs: &OperatorSum) -> Result<Self> {
        self.check_same(rhs)?;
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(Term {
                    coeff: a.coeff * b.coeff,
                    string: a.string.product(&b.string)?,
                });
            }
        }
        Ok(OperatorSum { n: self.n, terms }.canonicalize())
    }

    pub fn commutator(&self, rhs: &OperatorSum) -> Result<Self> {
        let ab = self.try_mul(rhs)?;
        let ba = rhs.try_mul(self)?;
        ab.try_add(&ba.scale(-1.0))
    }

    pub fn adjoint(&self) -> Self {
        OperatorSum {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.conj(),
                    string: t.string.adjoint(),
                })
                .collect(),
        }
        .canonicalize()
    }

    /// Hermitian iff every canonical coefficient is real (within `tol`).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.canonicalize()
            .terms
            .iter()
            .all(|t| t.coeff.im.abs() <= tol)
    }

    pub fn max_weight(&self) -> usize {
        self.terms.iter().map(|t| t.string.weight()).max().unwrap_or(0)
    }

    pub fn is_single_site(&self) -> bool {
        self.terms.iter().all(|t| t.string.weight() == 1)
    }

    /// Applies `f` to every string and re-canonicalizes.
    pub fn try_map_strings<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&PauliString) -> Result<PauliString>,
    {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(Term {
                coeff: t.coeff,
                string: f(&t.string)?,
            });
        }
        Ok(OperatorSum { n: self.n, terms }.canonicalize())
    }

    pub fn translate(&self, shift: isize) -> Self {
        self.try_map_strings(|s| Ok(s.translate(shift)))
            .expect("translation cannot fail")
    }

    /// Order-independent comparison of canonical forms.
    pub fn approx_eq(&self, rhs: &OperatorSum, tol: f64) -> bool {
        if self.n != rhs.n {
            return false;
        }
        let a = self.canonicalize();
        let b = rhs.canonicalize();
        let map_b: HashMap<(u64, u64), Complex64> =
            b.terms.iter().map(|t| (t.string.key(), t.coeff)).collect();
        let map_a: HashMap<(u64, u64), Complex64> =
            a.terms.iter().map(|t| (t.string.key(), t.coeff)).collect();
        let zero = Complex64::new(0.0, 0.0);
        map_a
            .keys()
            .chain(map_b.keys())
            .all(|k| (map_a.get(k).unwrap_or(&zero) - map_b.get(k).unwrap_or(&zero)).norm() <= tol)
    }

    /// Sum of coefficient magnitudes excluding the identity term; bounds the
    /// spectral radius of the traceless part.
    pub fn norm_bound(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| !t.string.is_identity_letters())
            .map(|t| t.coeff.norm())
            .sum()
    }

    pub fn identity_coeff(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.string.is_identity_letters())
            .map(|t| t.effective_coeff())
            .sum()
    }

    /// `Phase`-exact scaling by a fourth root of unity.
    pub fn times_phase(&self, p: Phase) -> Self {
        OperatorSum {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: p.apply(t.coeff),
                    string: t.string,
                })
                .collect(),
        }
    }
}

impl Add for &OperatorSum {
    type Output = OperatorSum;
    fn add(self, rhs: &OperatorSum) -> OperatorSum {
        self.try_add(rhs).expect("operator sums on different rings")
    }
}

impl Sub for &OperatorSum {
    type Output = OperatorSum;
    fn sub(self, rhs: &OperatorSum) -> OperatorSum {
        self.try_add(&rhs.scale(-1.0))
            .expect("operator sums on different rings")
    }
}

impl Mul for &OperatorSum {
    type Output = OperatorSum;
    fn mul(self, rhs: &OperatorSum) -> OperatorSum {
        self.try_mul(rhs).expect("operator sums on different rings")
    }
}

impl Neg for &OperatorSum {
    type Output = OperatorSum;
    fn neg(self) -> OperatorSum {
        self.scale(-1.0)
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_sum(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;

    fn s(word: &str) -> PauliString {
        PauliString::from_word(word).unwrap()
    }

    #[test]
    fn canonical_form_merges_and_folds_phases() {
        let raw = OperatorSum::raw(
            2,
            vec![
                Term { coeff: 1.0.into(), string: s("ZZ") },
                Term { coeff: 2.0.into(), string: s("XI").with_phase(Phase::MINUS_ONE) },
                Term { coeff: 0.5.into(), string: s("ZZ") },
                Term { coeff: 2.0.into(), string: s("XI") },
            ],
        )
        .unwrap();
        let c = raw.canonicalize();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms()[0].coeff, Complex64::new(1.5, 0.0));
        assert_eq!(c.terms()[0].string.phase(), Phase::ONE);
    }

    #[test]
    fn hermiticity_check() {
        let h = OperatorSum::from_string(1.0, s("XY"));
        assert!(h.is_hermitian(0.0));
        let a = OperatorSum::from_string(1.0, s("XY").with_phase(Phase::I));
        assert!(!a.is_hermitian(1e-12));
    }

    #[test]
    fn commutator_of_anticommuting_strings() {
        // [X, Z] = -2i Y
        let x = OperatorSum::from_string(1.0, PauliString::single(1, 0, Pauli::X).unwrap());
        let z = OperatorSum::from_string(1.0, PauliString::single(1, 0, Pauli::Z).unwrap());
        let c = x.commutator(&z).unwrap();
        let expected = OperatorSum::from_string(Complex64::new(0.0, -2.0), s("Y"));
        assert!(c.approx_eq(&expected, 0.0));
    }

    #[test]
    fn approx_eq_ignores_order() {
        let a = &OperatorSum::from_string(1.0, s("ZI")) + &OperatorSum::from_string(2.0, s("IZ"));
        let b = &OperatorSum::from_string(2.0, s("IZ")) + &OperatorSum::from_string(1.0, s("ZI"));
        assert!(a.approx_eq(&b, 0.0));
        assert!(!a.approx_eq(&a.scale(2.0), 1e-9));
    }
}

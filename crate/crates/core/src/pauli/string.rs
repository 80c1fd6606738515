use std::fmt;

use serde::{Deserialize, Serialize};

use super::Phase;
use crate::error::{Error, Result};

/// Largest ring supported by the bit-packed representation.
pub const MAX_SITES: usize = 64;

/// Single-site Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Product `self * rhs` as `(i^k, letter)`.
    pub fn product(self, rhs: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, X) => (Phase::MINUS_I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, Y) => (Phase::MINUS_I, X),
            (Z, X) => (Phase::I, Y),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }
}

/// Tensor product of single-site Pauli letters on a ring of `n` sites,
/// carrying an exact phase in `{+1, -1, +i, -i}`.
///
/// Site `j` is stored in bit `j` of the `x`/`z` masks; `Y` sets both bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_SITES {
            return Err(Error::Dimension(format!(
                "ring size {n} outside 1..={MAX_SITES}"
            )));
        }
        Ok(PauliString {
            n,
            x: 0,
            z: 0,
            phase: Phase::ONE,
        })
    }

    /// Builds a string from `(site, letter)` pairs. Sites wrap around the ring,
    /// so `-1` addresses the last site. Repeated sites are multiplied in order.
    pub fn from_sites(n: usize, letters: &[(isize, Pauli)]) -> Result<Self> {
        let mut s = Self::identity(n)?;
        for &(site, letter) in letters {
            let single = Self::single(n, site, letter)?;
            s = s.product(&single)?;
        }
        Ok(s)
    }

    pub fn single(n: usize, site: isize, letter: Pauli) -> Result<Self> {
        let mut s = Self::identity(n)?;
        let j = s.wrap(site);
        s.set_letter(j, letter);
        Ok(s)
    }

    /// Parses a dense word such as `"ZXZII"`; site 0 is the first character.
    pub fn from_word(word: &str) -> Result<Self> {
        let letters: Vec<Pauli> = word
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse(format!("unknown Pauli letter `{other}`"))),
            })
            .collect::<Result<_>>()?;
        let mut s = Self::identity(letters.len())?;
        for (j, l) in letters.into_iter().enumerate() {
            s.set_letter(j, l);
        }
        Ok(s)
    }

    pub(crate) fn from_raw(n: usize, x: u64, z: u64, phase: Phase) -> Self {
        debug_assert!(n <= MAX_SITES);
        let mask = full_mask(n);
        PauliString {
            n,
            x: x & mask,
            z: z & mask,
            phase,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// The letters with the phase reset to `+1`.
    pub fn letters_only(&self) -> Self {
        self.with_phase(Phase::ONE)
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    /// Key identifying the letters irrespective of phase.
    pub fn key(&self) -> (u64, u64) {
        (self.x, self.z)
    }

    pub fn wrap(&self, site: isize) -> usize {
        site.rem_euclid(self.n as isize) as usize
    }

    pub fn letter(&self, site: usize) -> Pauli {
        Pauli::from_bits((self.x >> site) & 1 == 1, (self.z >> site) & 1 == 1)
    }

    fn set_letter(&mut self, site: usize, letter: Pauli) {
        let (bx, bz) = letter.bits();
        let bit = 1u64 << site;
        self.x = (self.x & !bit) | if bx { bit } else { 0 };
        self.z = (self.z & !bit) | if bz { bit } else { 0 };
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n).map(|j| self.letter(j)).collect()
    }

    /// Non-identity `(site, letter)` pairs in site order.
    pub fn support(&self) -> Vec<(usize, Pauli)> {
        (0..self.n)
            .map(|j| (j, self.letter(j)))
            .filter(|(_, l)| *l != Pauli::I)
            .collect()
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity_letters(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn count_y(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Site-wise product with the exact accumulated phase.
    pub fn product(&self, rhs: &PauliString) -> Result<PauliString> {
        if self.n != rhs.n {
            return Err(Error::Dimension(format!(
                "Pauli strings on {} and {} sites",
                self.n, rhs.n
            )));
        }
        let mut phase = self.phase * rhs.phase;
        let mut out = PauliString::identity(self.n)?;
        for j in 0..self.n {
            let (p, l) = self.letter(j).product(rhs.letter(j));
            phase *= p;
            out.set_letter(j, l);
        }
        out.phase = phase;
        Ok(out)
    }

    pub fn commutes_with(&self, rhs: &PauliString) -> bool {
        let anti = (self.x & rhs.z) ^ (self.z & rhs.x);
        anti.count_ones() % 2 == 0
    }

    pub fn adjoint(&self) -> PauliString {
        self.with_phase(self.phase.conj())
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Cyclic translation of every letter by `shift` sites.
    pub fn translate(&self, shift: isize) -> PauliString {
        let mut out = PauliString::from_raw(self.n, 0, 0, self.phase);
        for (j, l) in self.support() {
            let dest = out.wrap(j as isize + shift);
            out.set_letter(dest, l);
        }
        out
    }

    /// Action on a computational basis state (site 0 is the most
    /// significant bit): returns the image index and its amplitude phase.
    pub fn apply_to_basis(&self, basis: usize) -> (usize, Phase) {
        let masks = BasisMasks::from(self);
        masks.apply(basis)
    }
}

/// A Pauli string compiled to basis-index bit positions for fast application.
#[derive(Clone, Copy, Debug)]
pub struct BasisMasks {
    pub flip: usize,
    pub sign: usize,
    pub phase: Phase,
}

impl BasisMasks {
    #[inline]
    pub fn apply(&self, basis: usize) -> (usize, Phase) {
        let minus = (basis & self.sign).count_ones() % 2 == 1;
        let phase = if minus { -self.phase } else { self.phase };
        (basis ^ self.flip, phase)
    }
}

impl From<&PauliString> for BasisMasks {
    fn from(s: &PauliString) -> Self {
        let mut flip = 0usize;
        let mut sign = 0usize;
        for j in 0..s.n {
            let bit = 1usize << (s.n - 1 - j);
            if (s.x >> j) & 1 == 1 {
                flip |= bit;
            }
            if (s.z >> j) & 1 == 1 {
                sign |= bit;
            }
        }
        // Y = i X Z acting on |b>: Z first gives (-1)^b, then X flips, times i.
        let phase = s.phase * Phase::from_exponent(s.count_y() as i64);
        BasisMasks { flip, sign, phase }
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Display for PauliString {
    /// Sparse form, e.g. `-i*Z0 X1 Z2`; the phase prefix is omitted for `+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase.exponent() {
            0 => {}
            1 => f.write_str("i*")?,
            2 => f.write_str("-")?,
            _ => f.write_str("-i*")?,
        }
        let support = self.support();
        if support.is_empty() {
            return f.write_str("I");
        }
        let words: Vec<String> = support
            .iter()
            .map(|(j, l)| format!("{}{}", l.symbol(), j))
            .collect();
        f.write_str(&words.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Pauli::*;

    #[test]
    fn xx_is_identity() {
        let x = PauliString::single(1, 0, X).unwrap();
        let p = x.product(&x).unwrap();
        assert!(p.is_identity_letters());
        assert_eq!(p.phase(), Phase::ONE);
    }

    #[test]
    fn xz_is_minus_i_y() {
        let x = PauliString::single(1, 0, X).unwrap();
        let z = PauliString::single(1, 0, Z).unwrap();
        let p = x.product(&z).unwrap();
        assert_eq!(p.letter(0), Y);
        assert_eq!(p.phase(), Phase::MINUS_I);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let a = PauliString::identity(2).unwrap();
        let b = PauliString::identity(3).unwrap();
        assert!(matches!(a.product(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn sites_wrap_around_the_ring() {
        let s = PauliString::from_sites(4, &[(-1, Z), (0, X), (1, Z)]).unwrap();
        assert_eq!(s.to_string(), "X0 Z1 Z3");
        assert_eq!(s.translate(1).to_string(), "Z0 X1 Z2");
    }

    #[test]
    fn commutation() {
        let zz = PauliString::from_word("ZZI").unwrap();
        let xii = PauliString::from_word("XII").unwrap();
        let xxi = PauliString::from_word("XXI").unwrap();
        assert!(!zz.commutes_with(&xii));
        assert!(zz.commutes_with(&xxi));
    }

    #[test]
    fn basis_action_of_y() {
        // Y|0> = i|1>, Y|1> = -i|0>
        let y = PauliString::single(1, 0, Y).unwrap();
        assert_eq!(y.apply_to_basis(0), (1, Phase::I));
        assert_eq!(y.apply_to_basis(1), (0, Phase::MINUS_I));
    }
}

//! Plain-text form of an [`OperatorSum`].
//!
//! ```text
//! sum     := "0" | signed (("+" | "-") term)*
//! signed  := ["-" | "+"] term
//! term    := [coeff "*"] word
//! coeff   := real | "(" real "," real ")"
//! word    := "I" | factor (factor)*
//! factor  := ("X" | "Y" | "Z") site
//! ```
//!
//! Sites are 0-based. Whitespace between tokens is optional. A repeated site
//! in one word multiplies left to right, so `X0 Z0` reads as `-i Y0`.

use num_complex::Complex64;

use super::{OperatorSum, Pauli, PauliString, Term};
use crate::error::{Error, Result};

/// Parses `text` into a canonical sum on `n_sites` sites.
pub fn parse(text: &str, n_sites: usize) -> Result<OperatorSum> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        n: n_sites,
    };
    let sum = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(sum)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<OperatorSum> {
        let mut out = OperatorSum::zero(self.n)?;
        if self.peek() == Some(b'0') && self.is_lone_zero() {
            self.pos += 1;
            return Ok(out);
        }
        let mut sign = 1.0;
        if self.eat(b'-') {
            sign = -1.0;
        } else {
            self.eat(b'+');
        }
        loop {
            let (c, s) = self.term()?;
            out.push(c * sign, s)?;
            if self.eat(b'+') {
                sign = 1.0;
            } else if self.eat(b'-') {
                sign = -1.0;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn is_lone_zero(&self) -> bool {
        self.src[self.pos + 1..].iter().all(|b| b.is_ascii_whitespace())
    }

    fn term(&mut self) -> Result<(Complex64, PauliString)> {
        let coeff = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let re = self.real()?;
                if !self.eat(b',') {
                    return Err(self.error("expected `,` in complex coefficient"));
                }
                let im = self.real()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Some(Complex64::new(re, im))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Some(Complex64::new(self.real()?, 0.0)),
            _ => None,
        };
        if coeff.is_some() && !self.eat(b'*') {
            return Err(self.error("expected `*` after coefficient"));
        }
        let word = self.word()?;
        Ok((coeff.unwrap_or(Complex64::new(1.0, 0.0)), word))
    }

    fn real(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let mut prev = b' ';
        while let Some(&c) = self.src.get(self.pos) {
            let sign_ok = (c == b'-' || c == b'+')
                && (self.pos == start || prev == b'e' || prev == b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || sign_ok {
                prev = c;
                self.pos += 1;
            } else {
                break;
            }
        }
        let tok = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        tok.parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number `{tok}` at byte {start}")))
    }

    fn word(&mut self) -> Result<PauliString> {
        let mut s = PauliString::identity(self.n)?;
        if self.peek() == Some(b'I') {
            self.pos += 1;
            return Ok(s);
        }
        let mut factors = 0;
        while let Some(c) = self.peek() {
            let letter = match c {
                b'X' => Pauli::X,
                b'Y' => Pauli::Y,
                b'Z' => Pauli::Z,
                _ => break,
            };
            self.pos += 1;
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected site index after Pauli letter"));
            }
            let site: usize = std::str::from_utf8(&self.src[start..self.pos])
                .expect("ascii")
                .parse()
                .map_err(|_| self.error("site index out of range"))?;
            if site >= self.n {
                return Err(Error::Parse(format!(
                    "site {site} outside a ring of {} sites",
                    self.n
                )));
            }
            s = s.product(&PauliString::single(self.n, site as isize, letter)?)?;
            factors += 1;
        }
        if factors == 0 {
            return Err(self.error("expected a Pauli word"));
        }
        Ok(s)
    }
}

fn format_real(x: f64) -> String {
    format!("{x:?}")
}

/// Renders a sum in the grammar accepted by [`parse`]. Real coefficients are
/// written in shortest round-trip form, so `parse(format_sum(op))` is exact.
pub fn format_sum(op: &OperatorSum) -> String {
    let c = op.canonicalize();
    if c.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, Term { coeff, string }) in c.terms().iter().enumerate() {
        let word = string.to_string();
        if coeff.im == 0.0 {
            let neg = coeff.re.is_sign_negative();
            let mag = format_real(coeff.re.abs());
            match (k, neg) {
                (0, false) => out.push_str(&format!("{mag} * {word}")),
                (0, true) => out.push_str(&format!("-{mag} * {word}")),
                (_, false) => out.push_str(&format!(" + {mag} * {word}")),
                (_, true) => out.push_str(&format!(" - {mag} * {word}")),
            }
        } else {
            if k > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format!(
                "({}, {}) * {word}",
                format_real(coeff.re),
                format_real(coeff.im)
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_example() {
        let op = parse("-1.0 * Z0 X1 Z2 + 1.0 * Z1 Z2", 3).unwrap();
        assert_eq!(op.len(), 2);
        assert_eq!(op.to_string(), "-1.0 * Z0 X1 Z2 + 1.0 * Z1 Z2");
    }

    #[test]
    fn repeated_sites_multiply() {
        let op = parse("X0 Z0", 1).unwrap();
        assert_eq!(op.terms()[0].coeff, Complex64::new(0.0, -1.0));
        assert_eq!(op.to_string(), "(0.0, -1.0) * Y0");
    }

    #[test]
    fn identity_zero_and_exponents() {
        assert!(parse("0", 2).unwrap().is_empty());
        let op = parse("2.5e-1 * I - Z1", 2).unwrap();
        assert_eq!(op.identity_coeff(), Complex64::new(0.25, 0.0));
        assert_eq!(op.len(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("Z3", 3), Err(Error::Parse(_))));
        assert!(matches!(parse("1.0 Z0", 3), Err(Error::Parse(_))));
        assert!(matches!(parse("Q0", 3), Err(Error::Parse(_))));
        assert!(matches!(parse("Z0 +", 3), Err(Error::Parse(_))));
    }

    #[test]
    fn round_trip_is_exact() {
        let op = parse("0.1 * X0 X1 + (0.3, -0.7) * Y2 - 1e-17 * Z0", 3).unwrap();
        let again = parse(&op.to_string(), 3).unwrap();
        assert_eq!(op, again);
    }
}

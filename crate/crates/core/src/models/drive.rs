use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced fraction `p/q` with `q > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Rational {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Rational {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Config("zero denominator".into()));
        }
        let g = gcd(p, q).max(1);
        let s = q.signum();
        Ok(Rational {
            p: s * p / g,
            q: s * q / g,
        })
    }

    pub fn numer(&self) -> i64 {
        self.p
    }

    pub fn denom(&self) -> i64 {
        self.q
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("`{s}` is not a fraction p/q"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        Rational::new(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
    }
}

impl TryFrom<String> for Rational {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Rational> for String {
    fn from(r: Rational) -> String {
        r.to_string()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Parameters of the modulated field `G_j(t) = g0 + g1 cos(2 pi (j-1) b + omega t + phi0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    pub n: usize,
    pub g0: f64,
    pub g1: f64,
    pub omega: f64,
    pub phi0: f64,
    pub b: Rational,
}

impl DriveParams {
    pub fn new(n: usize, g0: f64, g1: f64, omega: f64, phi0: f64, b: Rational) -> Result<Self> {
        let p = DriveParams {
            n,
            g0,
            g1,
            omega,
            phi0,
            b,
        };
        p.validate()?;
        Ok(p)
    }

    /// The ring and drive used throughout the figures: nine sites,
    /// `g0 = 10`, `g1 = 3`, `omega = 0.02`, `phi0 = 0`, `b = 1/3`.
    pub fn reference() -> Self {
        DriveParams {
            n: 9,
            g0: 10.0,
            g1: 3.0,
            omega: 0.02,
            phi0: 0.0,
            b: Rational { p: 1, q: 3 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.b.denom() as usize;
        if self.n == 0 || self.n % q != 0 {
            return Err(Error::IncompatibleParams(format!(
                "N = {} is not a multiple of the modulation period {q}",
                self.n
            )));
        }
        if !(self.g1 >= 0.0) || !self.g0.is_finite() || !self.g1.is_finite() {
            return Err(Error::IncompatibleParams(format!(
                "need finite g0 and g1 >= 0, got g0 = {}, g1 = {}",
                self.g0, self.g1
            )));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() || !self.phi0.is_finite() {
            return Err(Error::IncompatibleParams(format!(
                "need finite omega > 0 and phi0, got omega = {}, phi0 = {}",
                self.omega, self.phi0
            )));
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// Sublattice of 0-based site `j` within one modulation period.
    pub fn sublattice(&self, j: usize) -> usize {
        j % self.b.denom() as usize
    }

    /// Spatial phase `2 pi j b`, reduced exactly so it is periodic in `j`.
    pub fn site_phase(&self, j: usize) -> f64 {
        let q = self.b.denom();
        let k = (j as i64 * self.b.numer()).rem_euclid(q);
        TAU * k as f64 / q as f64
    }

    /// `G` at 0-based site `j`.
    pub fn g(&self, j: usize, t: f64) -> f64 {
        let wt = (self.omega * t).rem_euclid(TAU);
        self.g0 + self.g1 * (self.site_phase(j) + wt + self.phi0).cos()
    }
}

/// `G_j(t)` with the 1-based site index used in output files.
pub fn drive(j: usize, t: f64, p: &DriveParams) -> Result<f64> {
    if j == 0 || j > p.n {
        return Err(Error::Dimension(format!("site {j} outside 1..={}", p.n)));
    }
    Ok(p.g(j - 1, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce() {
        let r: Rational = "2/6".parse().unwrap();
        assert_eq!((r.numer(), r.denom()), (1, 3));
        assert_eq!(r.to_string(), "1/3");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn drive_examples() {
        let p = DriveParams::reference();
        assert_eq!(drive(1, 0.0, &p).unwrap(), 13.0);
        assert!((drive(2, 0.0, &p).unwrap() - 8.5).abs() < 1e-12);
        assert!((drive(1, p.period(), &p).unwrap() - 13.0).abs() < 1e-12);
        assert_eq!(drive(4, 0.3, &p).unwrap(), drive(1, 0.3, &p).unwrap());
        assert!(drive(0, 0.0, &p).is_err());
    }

    #[test]
    fn validation() {
        let b = Rational::new(1, 3).unwrap();
        assert!(DriveParams::new(8, 10.0, 3.0, 0.02, 0.0, b).is_err());
        assert!(DriveParams::new(9, 10.0, -1.0, 0.02, 0.0, b).is_err());
        assert!(DriveParams::new(9, 10.0, 3.0, 0.0, 0.0, b).is_err());
        assert!(DriveParams::new(9, 10.0, 3.0, 0.02, 0.0, b).is_ok());
    }
}

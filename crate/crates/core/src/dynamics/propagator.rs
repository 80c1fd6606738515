//! Short-time propagators for `H(t) = sum_k c_k(t) P_k` with real `c_k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigh, CVector};
use crate::models::{CoefficientLayout, TimeDependentHamiltonian};
use crate::pauli::{BasisMasks, OperatorSum, Term};

type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Pauli strings compiled to basis masks, grouped by their bit-flip pattern.
#[derive(Clone, Debug)]
pub struct TermTable {
    dim: usize,
    identity: Vec<usize>,
    groups: Vec<(usize, Vec<(usize, BasisMasks)>)>,
}

/// Per-basis-state multipliers of one flip group: real when every string in
/// the group carries a real phase.
#[derive(Clone, Debug)]
enum Diagonal {
    Real(Vec<f64>),
    Complex(Vec<C64>),
}

/// One Hermitian operator with its per-group diagonal multipliers.
#[derive(Clone, Debug)]
pub struct PreparedOperator {
    shift: f64,
    radius: f64,
    groups: Vec<(usize, Diagonal)>,
}

impl TermTable {
    pub fn new(layout: &CoefficientLayout) -> Self {
        let n = layout.strings.first().map_or(1, |s| s.n_sites());
        let mut identity = Vec::new();
        let mut groups: Vec<(usize, Vec<(usize, BasisMasks)>)> = Vec::new();
        for (k, s) in layout.strings.iter().enumerate() {
            if s.is_identity_letters() {
                identity.push(k);
                continue;
            }
            let m = BasisMasks::from(s);
            match groups.iter_mut().find(|(f, _)| *f == m.flip) {
                Some((_, v)) => v.push((k, m)),
                None => groups.push((m.flip, vec![(k, m)])),
            }
        }
        TermTable {
            dim: 1usize << n,
            identity,
            groups,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Realizes `sum_k coeffs[k] P_k`.
    pub fn prepare(&self, coeffs: &[f64]) -> PreparedOperator {
        let shift = self.identity.iter().map(|&k| coeffs[k]).sum();
        let mut radius = 0.0;
        let groups = self
            .groups
            .iter()
            .map(|(flip, terms)| {
                let mut diag = vec![ZERO; self.dim];
                for &(k, m) in terms {
                    let c = coeffs[k];
                    if c == 0.0 {
                        continue;
                    }
                    radius += c.abs();
                    let base = m.phase.apply(C64::new(c, 0.0));
                    for (b, d) in diag.iter_mut().enumerate() {
                        if (b & m.sign).count_ones() % 2 == 1 {
                            *d -= base;
                        } else {
                            *d += base;
                        }
                    }
                }
                let diag = if terms.iter().all(|(_, m)| m.phase.is_real()) {
                    Diagonal::Real(diag.iter().map(|d| d.re).collect())
                } else {
                    Diagonal::Complex(diag)
                };
                (*flip, diag)
            })
            .collect();
        PreparedOperator {
            shift,
            radius,
            groups,
        }
    }
}

impl PreparedOperator {
    /// Bound on the spectral radius of the non-identity part.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `out += scale * (A - shift) psi`.
    fn accumulate(&self, psi: &[C64], out: &mut [C64], scale: f64) {
        for (flip, diag) in &self.groups {
            let flip = *flip;
            match diag {
                Diagonal::Real(d) if flip == 0 => {
                    for ((o, &d), &a) in out.iter_mut().zip(d).zip(psi) {
                        *o += a * (d * scale);
                    }
                }
                Diagonal::Real(d) => {
                    // b -> b ^ flip is contiguous on blocks of the lowest flipped bit
                    let run = flip & flip.wrapping_neg();
                    for base in (0..psi.len()).step_by(run) {
                        let target = base ^ flip;
                        let src = base..base + run;
                        for ((o, &d), &a) in out[target..target + run].iter_mut().zip(&d[src.clone()]).zip(&psi[src]) {
                            *o += a * (d * scale);
                        }
                    }
                }
                Diagonal::Complex(d) => {
                    for (b, (&d, &a)) in d.iter().zip(psi).enumerate() {
                        out[b ^ flip] += d * a * scale;
                    }
                }
            }
        }
    }

    /// `A psi`.
    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let mut out: Vec<C64> = psi.iter().map(|a| a * self.shift).collect();
        self.accumulate(psi, &mut out, 1.0);
        out
    }

    /// `psi <- exp(-i tau A) psi` by a Chebyshev series truncated once the
    /// Bessel weights fall below `tol`. Returns the number of products.
    pub fn expi(&self, tau: f64, psi: &mut [C64], tol: f64) -> Result<usize> {
        let global = C64::from_polar(1.0, -tau * self.shift);
        let x = tau * self.radius;
        if x.abs() < 1e-300 {
            psi.iter_mut().for_each(|a| *a *= global);
            return Ok(0);
        }
        let sgn = x.signum();
        let x = x.abs();
        let order = chebyshev_order(x, tol);
        let bessel = bessel_j_sequence(x, order);
        let inv_r = 1.0 / self.radius;
        let dim = psi.len();
        let mut prev = psi.to_vec();
        let mut cur = vec![ZERO; dim];
        let mut next = vec![ZERO; dim];
        self.accumulate(&prev, &mut cur, inv_r);
        // exp(-i x s A~) = J0 + 2 sum_k (-i s)^k J_k T_k(A~)
        let mut ik = C64::new(0.0, -sgn);
        let w1 = ik * 2.0 * bessel[1];
        let mut acc: Vec<C64> = prev
            .iter()
            .zip(&cur)
            .map(|(p, c)| p * bessel[0] + c * w1)
            .collect();
        for &jk in &bessel[2..=order] {
            // T_{k+1} = 2 A~ T_k - T_{k-1}
            for (nx, p) in next.iter_mut().zip(&prev) {
                *nx = -p;
            }
            self.accumulate(&cur, &mut next, 2.0 * inv_r);
            ik *= C64::new(0.0, -sgn);
            let w = ik * 2.0 * jk;
            for (a, nx) in acc.iter_mut().zip(&next) {
                *a += nx * w;
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
        for (p, a) in psi.iter_mut().zip(&acc) {
            *p = a * global;
        }
        if psi.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NumericalValidity("non-finite amplitude in propagator".into()));
        }
        Ok(order)
    }
}

/// Truncation order for argument `x`: the Bessel tail decays
/// superexponentially past `k = x`.
fn chebyshev_order(x: f64, tol: f64) -> usize {
    let mut k = (x.ceil() as usize).max(1);
    // log J_k(x) ~ k log(e x / 2k) for k > x
    loop {
        let kf = k as f64;
        let log_jk = kf * (std::f64::consts::E * x / (2.0 * kf)).ln() - 0.5 * (2.0 * std::f64::consts::PI * kf).ln();
        if kf > x && log_jk < tol.ln() {
            return k.max(2);
        }
        k += 1;
    }
}

/// `J_0(x) .. J_order(x)` for `x > 0` by downward recurrence normalized with
/// `J_0 + 2 sum J_2k = 1`.
pub fn bessel_j_sequence(x: f64, order: usize) -> Vec<f64> {
    let start = order + 20 + x.ceil() as usize + (10.0 * x.sqrt()) as usize;
    let start = start + start % 2;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    for k in (1..=start).rev() {
        vals[k - 1] = 2.0 * k as f64 / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let norm: f64 = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    vals.truncate(order + 1);
    vals.iter_mut().for_each(|v| *v /= norm);
    vals
}

/// Stepping scheme of [`Propagator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Fourth-order commutator-free Magnus step with Chebyshev exponentials.
    Cf4,
    /// Exact exponential of the midpoint Hamiltonian by dense diagonalization.
    MidpointEigen,
}

/// Advances a state under a [`TimeDependentHamiltonian`].
#[derive(Clone, Debug)]
pub struct Propagator {
    method: Method,
    layout: CoefficientLayout,
    table: TermTable,
    tol: f64,
    buf: [Vec<f64>; 3],
    pub matvecs: usize,
}

const SQRT3_6: f64 = 0.288_675_134_594_812_9;

impl Propagator {
    pub fn new(h: &TimeDependentHamiltonian, method: Method, tol: f64) -> Self {
        let layout = h.layout();
        let table = TermTable::new(&layout);
        let len = layout.len();
        Propagator {
            method,
            layout,
            table,
            tol,
            buf: [vec![0.0; len], vec![0.0; len], vec![0.0; len]],
            matvecs: 0,
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Advances `psi` from `t` to `t + h`.
    pub fn step(&mut self, psi: &mut [C64], t: f64, h: f64) -> Result<()> {
        match self.method {
            Method::Cf4 => self.step_cf4(psi, t, h),
            Method::MidpointEigen => self.step_midpoint(psi, t, h),
        }
    }

    fn step_cf4(&mut self, psi: &mut [C64], t: f64, h: f64) -> Result<()> {
        let a1 = 0.25 + SQRT3_6;
        let a2 = 0.25 - SQRT3_6;
        let [c1, c2, mix] = &mut self.buf;
        self.layout.coefficients(t + (0.5 - SQRT3_6) * h, c1);
        self.layout.coefficients(t + (0.5 + SQRT3_6) * h, c2);
        for (m, (x, y)) in mix.iter_mut().zip(c1.iter().zip(c2.iter())) {
            *m = a1 * x + a2 * y;
        }
        self.matvecs += self.table.prepare(mix).expi(h, psi, self.tol)?;
        for (m, (x, y)) in mix.iter_mut().zip(c1.iter().zip(c2.iter())) {
            *m = a2 * x + a1 * y;
        }
        self.matvecs += self.table.prepare(mix).expi(h, psi, self.tol)?;
        Ok(())
    }

    fn step_midpoint(&mut self, psi: &mut [C64], t: f64, h: f64) -> Result<()> {
        let c = &mut self.buf[0];
        self.layout.coefficients(t + 0.5 * h, c);
        let n = self.layout.strings.first().map_or(1, |s| s.n_sites());
        let terms = self
            .layout
            .strings
            .iter()
            .zip(c.iter())
            .map(|(s, &v)| Term {
                coeff: v.into(),
                string: *s,
            })
            .collect();
        let m = OperatorSum::raw(n, terms)?.to_matrix()?;
        let (vals, vecs) = eigh(&m);
        let v = CVector::from_column_slice(psi);
        let mut w = vecs.adjoint() * v;
        for (x, e) in w.iter_mut().zip(&vals) {
            *x *= C64::from_polar(1.0, -h * e);
        }
        let out = vecs * w;
        psi.copy_from_slice(out.as_slice());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_model, DriveParams, ModelKind, ModelSpec};

    #[test]
    fn bessel_values() {
        // J_n(1) and J_n(10) from tables
        let j = bessel_j_sequence(1.0, 3);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((j[3] - 0.019_563_353_982_668_4).abs() < 1e-14);
        let j = bessel_j_sequence(10.0, 12);
        assert!((j[0] + 0.245_935_764_451_348_3).abs() < 1e-13);
        assert!((j[5] + 0.234_061_528_186_793_7).abs() < 1e-13);
        let j = bessel_j_sequence(60.0, chebyshev_order(60.0, 1e-16));
        let sum: f64 = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prepared_operator_matches_matrix() {
        let p = DriveParams {
            n: 6,
            ..DriveParams::reference()
        };
        let h = build_model(&ModelSpec::new(ModelKind::Cluster, 0.8).with_interaction(0.3), &p).unwrap();
        let layout = h.layout();
        let mut c = vec![0.0; layout.len()];
        layout.coefficients(7.0, &mut c);
        let op = TermTable::new(&layout).prepare(&c);
        let psi: Vec<C64> = (0..64).map(|k| C64::new((k as f64).sin(), (k as f64 * 0.3).cos())).collect();
        let expected = h.at(7.0).apply(&psi).unwrap();
        let got = op.apply(&psi);
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn chebyshev_exponential_matches_diagonalization() {
        let p = DriveParams {
            n: 6,
            ..DriveParams::reference()
        };
        let h = build_model(&ModelSpec::new(ModelKind::SpinFlip, 1.0).with_interaction(0.5), &p).unwrap();
        let layout = h.layout();
        let mut c = vec![0.0; layout.len()];
        layout.coefficients(3.0, &mut c);
        let op = TermTable::new(&layout).prepare(&c);
        let psi0: Vec<C64> = (0..64).map(|k| C64::new(1.0 + k as f64, -(k as f64)).unscale(100.0)).collect();
        let (vals, vecs) = eigh(&h.matrix_at(3.0).unwrap());
        for tau in [0.01, 0.3, 1.7, -0.4] {
            let mut psi = psi0.clone();
            op.expi(tau, &mut psi, 1e-15).unwrap();
            let mut w = vecs.adjoint() * CVector::from_column_slice(&psi0);
            for (x, e) in w.iter_mut().zip(&vals) {
                *x *= C64::from_polar(1.0, -tau * e);
            }
            let exact = &vecs * w;
            for (a, b) in psi.iter().zip(exact.iter()) {
                assert!((a - b).norm() < 1e-12, "tau = {tau}");
            }
        }
    }
}

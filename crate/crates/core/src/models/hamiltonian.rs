use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::{OperatorSum, Pauli, PauliString, Term};

use super::operators::{bond_op, check_sites, driving_op, interaction_op};
use super::{DriveParams, ModelKind, ModelSpec};

/// `(G_site(t) + offset) * op`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrivenTerm {
    pub site: usize,
    pub op: OperatorSum,
    pub offset: f64,
}

/// Affine reparametrization `H'(t) = sign * H(origin + scale * t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
struct TimeMap {
    sign: f64,
    origin: f64,
    scale: f64,
}

impl TimeMap {
    const IDENTITY: TimeMap = TimeMap {
        sign: 1.0,
        origin: 0.0,
        scale: 1.0,
    };
}

/// Static part plus drive-modulated terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeDependentHamiltonian {
    params: DriveParams,
    static_part: OperatorSum,
    driven: Vec<DrivenTerm>,
    map: TimeMap,
}

impl TimeDependentHamiltonian {
    pub fn new(params: DriveParams, static_part: OperatorSum, driven: Vec<DrivenTerm>) -> Result<Self> {
        params.validate()?;
        let n = params.n;
        if static_part.n_sites() != n || driven.iter().any(|d| d.op.n_sites() != n || d.site >= n) {
            return Err(Error::Dimension(format!(
                "Hamiltonian terms do not all live on the {n}-site ring"
            )));
        }
        let h = TimeDependentHamiltonian {
            params,
            static_part,
            driven,
            map: TimeMap::IDENTITY,
        };
        if !h.static_part.is_hermitian(0.0) || h.driven.iter().any(|d| !d.op.is_hermitian(0.0)) {
            return Err(Error::Contract("Hamiltonian terms must be Hermitian".into()));
        }
        Ok(h)
    }

    pub fn n_sites(&self) -> usize {
        self.params.n
    }

    pub fn params(&self) -> &DriveParams {
        &self.params
    }

    pub fn period(&self) -> f64 {
        self.params.period()
    }

    pub fn static_part(&self) -> &OperatorSum {
        &self.static_part
    }

    pub fn driven_terms(&self) -> &[DrivenTerm] {
        &self.driven
    }

    fn mapped_time(&self, t: f64) -> f64 {
        self.map.origin + self.map.scale * t
    }

    /// The operator `H(t)`.
    pub fn at(&self, t: f64) -> OperatorSum {
        let tau = self.mapped_time(t);
        let mut terms = self.static_part.terms().to_vec();
        for d in &self.driven {
            let g = self.params.g(d.site, tau) + d.offset;
            terms.extend(d.op.scale(g).terms().iter().copied());
        }
        OperatorSum::from_terms(self.n_sites(), terms)
            .expect("terms share the ring")
            .scale(self.map.sign)
    }

    pub fn matrix_at(&self, t: f64) -> Result<CMatrix> {
        self.at(t).to_matrix()
    }

    /// `s -> -H(t_end - s)`, which undoes evolution over `[0, t_end]`.
    pub fn reversed(&self, t_end: f64) -> Self {
        let mut out = self.clone();
        out.map = TimeMap {
            sign: -self.map.sign,
            origin: self.mapped_time(t_end),
            scale: -self.map.scale,
        };
        out
    }

    /// Flattened coefficient law for fast evaluation.
    pub fn layout(&self) -> CoefficientLayout {
        let mut strings: Vec<PauliString> = Vec::new();
        let mut base: Vec<f64> = Vec::new();
        let mut rows = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut slot = |s: PauliString, strings: &mut Vec<PauliString>, base: &mut Vec<f64>| {
            *index.entry(s.key()).or_insert_with(|| {
                strings.push(s.letters_only());
                base.push(0.0);
                strings.len() - 1
            })
        };
        for t in self.static_part.terms() {
            let k = slot(t.string, &mut strings, &mut base);
            base[k] += t.coeff.re;
        }
        for d in &self.driven {
            for t in d.op.terms() {
                let k = slot(t.string, &mut strings, &mut base);
                base[k] += t.coeff.re * d.offset;
                rows.push((k, d.site, t.coeff.re));
            }
        }
        CoefficientLayout {
            strings,
            base,
            rows,
            params: self.params,
            map: self.map,
        }
    }
}

/// `H(t) = sum_k c_k(t) P_k` with `c_k(t) = sign * (base_k + sum w G_site(tau))`.
#[derive(Clone, Debug)]
pub struct CoefficientLayout {
    pub strings: Vec<PauliString>,
    base: Vec<f64>,
    rows: Vec<(usize, usize, f64)>,
    params: DriveParams,
    map: TimeMap,
}

impl CoefficientLayout {
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn coefficients(&self, t: f64, out: &mut [f64]) {
        let tau = self.map.origin + self.map.scale * t;
        out.copy_from_slice(&self.base);
        let g: Vec<f64> = (0..self.params.n).map(|j| self.params.g(j, tau)).collect();
        for &(k, site, w) in &self.rows {
            out[k] += w * g[site];
        }
        if self.map.sign != 1.0 {
            for c in out.iter_mut() {
                *c *= self.map.sign;
            }
        }
    }
}

/// Builds the driven Hamiltonian of `spec.kind` on the ring of `p.n` sites.
pub fn build_model(spec: &ModelSpec, p: &DriveParams) -> Result<TimeDependentHamiltonian> {
    p.validate()?;
    let n = p.n;
    check_sites(spec.kind, n)?;
    if let Some(d) = &spec.disorder {
        if d.values.len() != n {
            return Err(Error::Dimension(format!(
                "disorder realization has {} values for {n} sites",
                d.values.len()
            )));
        }
    }
    let mut static_terms = Vec::new();
    for j in 0..n {
        let c = spec.coupling(j);
        if c != 0.0 {
            static_terms.extend(bond_op(spec.kind, n, j)?.scale(c).terms().iter().copied());
        }
    }
    if spec.k != 0.0 {
        for j in 0..n {
            static_terms.extend(
                interaction_op(spec.kind, n, j)?
                    .scale(spec.k)
                    .terms()
                    .iter()
                    .copied(),
            );
        }
    }
    let static_part = OperatorSum::from_terms(n, static_terms)?;
    let driven = (0..n)
        .map(|j| {
            Ok(DrivenTerm {
                site: j,
                op: driving_op(spec.kind, n, j)?.scale(-1.0),
                offset: spec.g_offset(j),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TimeDependentHamiltonian::new(*p, static_part, driven)
}

/// Number-conserving approximation of the spin-flip model for `g0 >> J`:
/// `sum_j [-G_j X_j + (J/2)(Z_j Z_{j+1} + Y_j Y_{j+1})]`, whose one-excitation
/// sector hops with amplitude `J` like the exact model.
pub fn effective_rwa_model(p: &DriveParams, j: f64) -> Result<TimeDependentHamiltonian> {
    let flip = build_model(&ModelSpec::new(ModelKind::SpinFlip, 0.0), p)?;
    let n = p.n;
    let mut terms = Vec::new();
    for site in 0..n {
        let s = site as isize;
        let zz = PauliString::from_sites(n, &[(s, Pauli::Z), (s + 1, Pauli::Z)])?;
        let yy = PauliString::from_sites(n, &[(s, Pauli::Y), (s + 1, Pauli::Y)])?;
        terms.push(Term { coeff: (0.5 * j).into(), string: zz });
        terms.push(Term { coeff: (0.5 * j).into(), string: yy });
    }
    TimeDependentHamiltonian::new(*p, OperatorSum::from_terms(n, terms)?, flip.driven)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigvalsh, hermiticity_defect};

    #[test]
    fn uncoupled_flip_spectrum_is_all_sign_choices() {
        let p = DriveParams::new(3, 10.0, 3.0, 0.02, 0.0, "1/3".parse().unwrap()).unwrap();
        let h = build_model(&ModelSpec::new(ModelKind::SpinFlip, 0.0), &p).unwrap();
        let vals = eigvalsh(&h.matrix_at(0.0).unwrap());
        let g: Vec<f64> = (0..3).map(|j| p.g(j, 0.0)).collect();
        let mut expected = Vec::new();
        for mask in 0..8 {
            let e: f64 = (0..3)
                .map(|j| if (mask >> j) & 1 == 1 { g[j] } else { -g[j] })
                .sum();
            expected.push(e);
        }
        expected.sort_by(f64::total_cmp);
        for (a, b) in vals.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn layout_matches_operator() {
        let p = DriveParams::reference();
        let spec = super::super::apply_disorder(
            &ModelSpec::new(ModelKind::Cluster, 1.0).with_interaction(0.7),
            super::super::DisorderTarget::G,
            0.4,
            5,
            9,
        )
        .unwrap();
        let h = build_model(&spec, &p).unwrap().reversed(33.0);
        let layout = h.layout();
        let mut c = vec![0.0; layout.len()];
        layout.coefficients(12.5, &mut c);
        let terms: Vec<_> = layout
            .strings
            .iter()
            .zip(&c)
            .map(|(s, &v)| Term { coeff: v.into(), string: *s })
            .collect();
        let rebuilt = OperatorSum::from_terms(9, terms).unwrap();
        assert!(rebuilt.approx_eq(&h.at(12.5), 1e-12));
    }

    #[test]
    fn reversal_negates_and_reflects_time() {
        let p = DriveParams::reference();
        let h = build_model(&ModelSpec::new(ModelKind::SpinFlip, 1.0), &p).unwrap();
        let r = h.reversed(40.0);
        assert!(r.at(15.0).approx_eq(&h.at(25.0).scale(-1.0), 1e-12));
    }

    #[test]
    fn hermitian_matrices() {
        let p = DriveParams::reference();
        let p6 = DriveParams { n: 6, ..p };
        for kind in ModelKind::DUAL_TRIPLE {
            let h = build_model(&ModelSpec::new(kind, 1.0).with_interaction(1.0), &p6).unwrap();
            assert!(hermiticity_defect(&h.matrix_at(3.7).unwrap()) < 1e-12);
        }
    }
}

//! Chart-level manifold declarations: metric (coordinate or orthonormal-frame
//! mode), optional almost-contact structure fields, potential fields, sample
//! domain, and tolerance profile.

use crate::error::{CoreError, Result};
use crate::expr::Expr;
use crate::jet::{Jet, EPS_DIV};
use crate::sample::{Interval, Sampler};
use crate::tensor::TensorValue;

/// Residual tolerances used by the check suites. Values can be overridden
/// per manifold file.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Structural / curvature identity residual bound.
    pub identity: f64,
    /// Tight bound for exact algebraic relations (tables, fits).
    pub exact: f64,
    /// Division guard scale.
    pub eps_div: f64,
    /// Positive-definiteness floor for metric eigenvalues.
    pub eps_pd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-8,
            exact: 1e-9,
            eps_div: EPS_DIV,
            eps_pd: 1e-10,
        }
    }
}

/// Either explicit metric coefficients g_ij or d vector fields declared
/// orthonormal, from which the metric is induced.
#[derive(Clone, Debug)]
pub enum MetricSource {
    /// `components[i][j]` = g_ij as a scalar field; symmetric.
    Components(Vec<Vec<Expr>>),
    /// `frame[a][i]` = i-th coordinate component of the vector field e_a.
    Frame(Vec<Vec<Expr>>),
}

/// Almost-contact structure fields (φ, ξ, η).
#[derive(Clone, Debug)]
pub struct StructureFields {
    /// `phi[i][j]` = component i of φ(∂_j).
    pub phi: Vec<Vec<Expr>>,
    pub xi: Vec<Expr>,
    pub eta: Vec<Expr>,
}

/// A chart: dimension, coordinates, metric, optional structure and potential
/// fields, sample domain, tolerance profile. Immutable after construction.
#[derive(Clone, Debug)]
pub struct ManifoldSpec {
    pub name: String,
    pub dim: usize,
    pub coords: Vec<String>,
    pub metric: MetricSource,
    pub structure: Option<StructureFields>,
    pub potential_vector: Option<Vec<Expr>>,
    pub potential_fn: Option<Expr>,
    pub domain: Vec<Interval>,
    pub tol: Tolerances,
}

impl ManifoldSpec {
    pub fn sampler(&self, seed: u64) -> Sampler {
        Sampler::new(&self.domain, seed)
    }

    /// 2n+1 = dim for the odd-dimensional structures of interest.
    pub fn n(&self) -> usize {
        self.dim / 2
    }

    /// Evaluate metric coefficient jets at a point (order 3). In frame mode
    /// the metric is induced from the frame: g = E^{-T} E^{-1} where E has
    /// the frame vectors as columns.
    pub fn metric_jets(&self, p: &[f64]) -> Result<Vec<Jet>> {
        let d = self.dim;
        match &self.metric {
            MetricSource::Components(gij) => {
                let mut out = Vec::with_capacity(d * d);
                for i in 0..d {
                    for j in 0..d {
                        out.push(gij[i][j].eval(p, 3, self.tol.eps_div)?);
                    }
                }
                Ok(out)
            }
            MetricSource::Frame(frame) => {
                // E[i][a] = component i of e_a (columns are frame vectors)
                let mut e = vec![Jet::constant(d, 3, 0.0); d * d];
                for a in 0..d {
                    for i in 0..d {
                        e[i * d + a] = frame[a][i].eval(p, 3, self.tol.eps_div)?;
                    }
                }
                let einv = invert_jet_matrix(&e, d, self.tol.eps_div).map_err(|err| {
                    CoreError::DegenerateMetric {
                        point: p.to_vec(),
                        detail: format!("frame is not invertible: {err}"),
                    }
                })?;
                let mut g = vec![Jet::constant(d, 3, 0.0); d * d];
                for i in 0..d {
                    for j in i..d {
                        let mut s = Jet::constant(d, 3, 0.0);
                        for k in 0..d {
                            s = s.add(&einv[k * d + i].mul(&einv[k * d + j]));
                        }
                        g[i * d + j] = s.clone();
                        g[j * d + i] = s;
                    }
                }
                Ok(g)
            }
        }
    }

    /// Coordinate components of the declared frame vectors at `p`
    /// (frame mode only).
    pub fn frame_vectors_at(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        match &self.metric {
            MetricSource::Frame(frame) => frame
                .iter()
                .map(|f| f.iter().map(|c| c.value(p, self.tol.eps_div)).collect())
                .collect(),
            MetricSource::Components(_) => Err(CoreError::MissingField(
                "manifold is not in frame mode".into(),
            )),
        }
    }

    /// Evaluate a vector field given by component expressions (order-3 jets).
    pub fn vector_jets(&self, comps: &[Expr], p: &[f64]) -> Result<Vec<Jet>> {
        comps.iter().map(|c| c.eval(p, 3, self.tol.eps_div)).collect()
    }

    pub fn structure(&self) -> Result<&StructureFields> {
        self.structure
            .as_ref()
            .ok_or_else(|| CoreError::MissingField("structure fields (phi, xi, eta)".into()))
    }

    pub fn potential_vector(&self) -> Result<&Vec<Expr>> {
        self.potential_vector
            .as_ref()
            .ok_or_else(|| CoreError::MissingField("potential vector field V".into()))
    }

    pub fn potential_fn(&self) -> Result<&Expr> {
        self.potential_fn
            .as_ref()
            .ok_or_else(|| CoreError::MissingField("potential function u".into()))
    }

    /// Check chart invariants at `n_probe` sample points: metric symmetry,
    /// positive definiteness, and (frame mode) orthonormality of the induced
    /// metric on the declared frame.
    pub fn validate(&self, n_probe: usize) -> Result<()> {
        if self.coords.len() != self.dim || self.domain.len() != self.dim {
            return Err(CoreError::ManifoldFile(format!(
                "dimension {} does not match coordinates/domain",
                self.dim
            )));
        }
        let sampler = self.sampler(0);
        for p in sampler.points(n_probe) {
            let g = self.metric_jets(&p)?;
            let d = self.dim;
            for i in 0..d {
                for j in 0..d {
                    if (g[i * d + j].v - g[j * d + i].v).abs() > 1e-10 {
                        return Err(CoreError::Invariant(format!(
                            "metric asymmetric at probe point {p:?} (g[{i}][{j}] != g[{j}][{i}])"
                        )));
                    }
                }
            }
            let vals: Vec<f64> = g.iter().map(|j| j.v).collect();
            if !is_positive_definite(&vals, d, self.tol.eps_pd) {
                return Err(CoreError::DegenerateMetric {
                    point: p.clone(),
                    detail: "metric is not positive definite".into(),
                });
            }
            if let MetricSource::Frame(_) = self.metric {
                // induced metric must make the declared frame orthonormal
                let frame = self.frame_vectors_at(&p)?;
                let mut gt = TensorValue::zeros(d, 0, 2);
                for i in 0..d {
                    for j in 0..d {
                        gt.set(&[i, j], vals[i * d + j]);
                    }
                }
                for a in 0..d {
                    for b in 0..d {
                        let mut s = 0.0;
                        for i in 0..d {
                            for j in 0..d {
                                s += gt.get(&[i, j]) * frame[a][i] * frame[b][j];
                            }
                        }
                        let expect = if a == b { 1.0 } else { 0.0 };
                        if (s - expect).abs() > 1e-12 {
                            return Err(CoreError::Invariant(format!(
                                "induced metric fails g(e{a},e{b})=δ at {p:?}: {s}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Gauss–Jordan inversion of a matrix of jets with partial pivoting on the
/// value part.
pub fn invert_jet_matrix(m: &[Jet], d: usize, eps_div: f64) -> Result<Vec<Jet>> {
    assert_eq!(m.len(), d * d);
    let order = m[0].order();
    let dim = m[0].dim();
    let mut a = m.to_vec();
    let mut inv: Vec<Jet> = (0..d * d)
        .map(|k| Jet::constant(dim, order, if k / d == k % d { 1.0 } else { 0.0 }))
        .collect();
    for col in 0..d {
        let pivot_row = (col..d)
            .max_by(|&r1, &r2| {
                a[r1 * d + col]
                    .v
                    .abs()
                    .partial_cmp(&a[r2 * d + col].v.abs())
                    .unwrap()
            })
            .unwrap();
        if a[pivot_row * d + col].v.abs() < eps_div {
            return Err(CoreError::DivisionNearZero {
                value: a[pivot_row * d + col].v,
                guard: eps_div,
            });
        }
        if pivot_row != col {
            for k in 0..d {
                a.swap(col * d + k, pivot_row * d + k);
                inv.swap(col * d + k, pivot_row * d + k);
            }
        }
        let pinv = a[col * d + col].recip(eps_div)?;
        for k in 0..d {
            a[col * d + k] = a[col * d + k].mul(&pinv);
            inv[col * d + k] = inv[col * d + k].mul(&pinv);
        }
        for r in 0..d {
            if r == col {
                continue;
            }
            let f = a[r * d + col].clone();
            if f.max_abs() == 0.0 {
                continue;
            }
            for k in 0..d {
                a[r * d + k] = a[r * d + k].sub(&f.mul(&a[col * d + k]));
                inv[r * d + k] = inv[r * d + k].sub(&f.mul(&inv[col * d + k]));
            }
        }
    }
    Ok(inv)
}

/// Positive definiteness via Cholesky with a pivot floor.
pub fn is_positive_definite(m: &[f64], d: usize, floor: f64) -> bool {
    let mut l = vec![0.0f64; d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut s = m[i * d + j];
            for k in 0..j {
                s -= l[i * d + k] * l[j * d + k];
            }
            if i == j {
                if s <= floor {
                    return false;
                }
                l[i * d + i] = s.sqrt();
            } else {
                l[i * d + j] = s / l[j * d + j];
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn coords3() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    fn ex(text: &str) -> Expr {
        parse_expression(text, &coords3()).unwrap()
    }

    /// Frame-mode chart with a shear term, used throughout the tests.
    fn frame_spec() -> ManifoldSpec {
        ManifoldSpec {
            name: "frame-test".into(),
            dim: 3,
            coords: coords3(),
            metric: MetricSource::Frame(vec![
                vec![ex("-1"), ex("2*y"), ex("-1")],
                vec![ex("0"), ex("1"), ex("0")],
                vec![ex("0"), ex("0"), ex("1")],
            ]),
            structure: None,
            potential_vector: None,
            potential_fn: None,
            domain: vec![
                Interval::new(-1.0, 1.0),
                Interval::new(-1.0, 1.0),
                Interval::new(0.1, 1.0),
            ],
            tol: Tolerances::default(),
        }
    }

    #[test]
    fn frame_mode_induces_expected_metric() {
        let m = frame_spec();
        let p = [0.3, 0.7, 0.5];
        let g = m.metric_jets(&p).unwrap();
        let y = p[1];
        // g = [[2+4y^2, 2y, -1], [2y, 1, 0], [-1, 0, 1]]
        let expect = [
            [2.0 + 4.0 * y * y, 2.0 * y, -1.0],
            [2.0 * y, 1.0, 0.0],
            [-1.0, 0.0, 1.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (g[i * 3 + j].v - expect[i][j]).abs() < 1e-12,
                    "g[{i}][{j}] = {} expected {}",
                    g[i * 3 + j].v,
                    expect[i][j]
                );
            }
        }
        m.validate(10).unwrap();
    }

    #[test]
    fn jet_matrix_inverse_roundtrip() {
        let d = 3;
        let p = [0.4, -0.2, 0.9];
        let m = frame_spec();
        let g = m.metric_jets(&p).unwrap();
        let ginv = invert_jet_matrix(&g, d, 1e-12).unwrap();
        for i in 0..d {
            for j in 0..d {
                let mut s = Jet::constant(d, 3, 0.0);
                for k in 0..d {
                    s = s.add(&g[i * d + k].mul(&ginv[k * d + j]));
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s.v - expect).abs() < 1e-12);
                // derivative of identity vanishes
                assert!(s.max_abs() - expect.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cholesky_pd_check() {
        assert!(is_positive_definite(&[2.0, 0.5, 0.5, 1.0], 2, 1e-12));
        assert!(!is_positive_definite(&[1.0, 2.0, 2.0, 1.0], 2, 1e-12));
    }
}

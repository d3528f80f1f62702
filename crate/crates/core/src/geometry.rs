//! Pointwise Riemannian geometry of a declared chart: Levi-Civita
//! connection, curvature, Lie derivatives, Hessians, and exterior calculus.
//!
//! Conventions (fixed; see the README):
//!   R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}
//!   R₄(X,Y,Z,W) = g(R(X,Y)W, Z)
//!   S(Y,Z) = Σ_a g(R(e_a,Y)Z, e_a) over an orthonormal frame.

use crate::error::{CoreError, Result};
use crate::expr::Expr;
use crate::jet::Jet;
use crate::manifold::{invert_jet_matrix, ManifoldSpec};
use crate::tensor::{multi_indices, OrthoFrame, TensorJets, TensorValue};

/// All jet-level geometric data of a manifold at one chart point.
/// Construction is pure; evaluating many points concurrently is safe.
pub struct Geometry<'m> {
    pub m: &'m ManifoldSpec,
    pub p: Vec<f64>,
    d: usize,
    /// g_ij, order-3 jets.
    pub g: Vec<Jet>,
    /// g^ij, order-3 jets.
    pub ginv: Vec<Jet>,
    /// Γ^k_ij, order-2 jets, index [k][i][j].
    pub gamma: Vec<Jet>,
    /// (R(∂i,∂j)∂k)^l, order-1 jets, index [l][i][j][k].
    pub riem: Vec<Jet>,
}

impl<'m> Geometry<'m> {
    pub fn at(m: &'m ManifoldSpec, p: &[f64]) -> Result<Self> {
        let d = m.dim;
        let g = m.metric_jets(p)?;
        let cond_guard = m.tol.eps_div;
        let ginv = invert_jet_matrix(&g, d, cond_guard).map_err(|e| {
            CoreError::DegenerateMetric {
                point: p.to_vec(),
                detail: e.to_string(),
            }
        })?;

        // Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
        let mut gamma = vec![Jet::constant(d, 2, 0.0); d * d * d];
        for k in 0..d {
            for i in 0..d {
                for j in i..d {
                    let mut s = Jet::constant(d, 2, 0.0);
                    for l in 0..d {
                        let term = g[j * d + l]
                            .deriv(i)
                            .add(&g[i * d + l].deriv(j))
                            .sub(&g[i * d + j].deriv(l));
                        s = s.add(&ginv[k * d + l].mul(&term));
                    }
                    let s = s.scale(0.5);
                    gamma[(k * d + i) * d + j] = s.clone();
                    gamma[(k * d + j) * d + i] = s;
                }
            }
        }

        // R^l_ijk = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik
        let gm = |l: usize, i: usize, j: usize| &gamma[(l * d + i) * d + j];
        let mut riem = vec![Jet::constant(d, 1, 0.0); d * d * d * d];
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let mut s = gm(l, j, k).deriv(i).sub(&gm(l, i, k).deriv(j));
                        for mm in 0..d {
                            s = s.add(&gm(l, i, mm).mul(gm(mm, j, k)));
                            s = s.sub(&gm(l, j, mm).mul(gm(mm, i, k)));
                        }
                        riem[((l * d + i) * d + j) * d + k] = s;
                    }
                }
            }
        }

        Ok(Geometry {
            m,
            p: p.to_vec(),
            d,
            g,
            ginv,
            gamma,
            riem,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn gamma_jet(&self, k: usize, i: usize, j: usize) -> &Jet {
        &self.gamma[(k * self.d + i) * self.d + j]
    }

    #[inline]
    pub fn riem_jet(&self, l: usize, i: usize, j: usize, k: usize) -> &Jet {
        &self.riem[((l * self.d + i) * self.d + j) * self.d + k]
    }

    pub fn metric_value(&self) -> TensorValue {
        TensorValue {
            dim: self.d,
            contra: 0,
            cova: 2,
            data: self.g.iter().map(|j| j.v).collect(),
        }
    }

    pub fn metric_inverse_value(&self) -> TensorValue {
        TensorValue {
            dim: self.d,
            contra: 2,
            cova: 0,
            data: self.ginv.iter().map(|j| j.v).collect(),
        }
    }

    /// g(v, w) for coordinate-component vectors at this point.
    pub fn inner(&self, v: &[f64], w: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.d {
            for j in 0..self.d {
                s += self.g[i * self.d + j].v * v[i] * w[j];
            }
        }
        s
    }

    /// Connection coefficients Γ^k_ij as a (1,2) tensor value, index [k][i][j].
    pub fn christoffel(&self) -> TensorValue {
        TensorValue {
            dim: self.d,
            contra: 1,
            cova: 2,
            data: self.gamma.iter().map(|j| j.v).collect(),
        }
    }

    /// Curvature operator value R(X,Y)Z for constant coordinate vectors.
    pub fn riemann_vec(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let d = self.d;
        let mut out = vec![0.0; d];
        for l in 0..d {
            let mut s = 0.0;
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        s += self.riem_jet(l, i, j, k).v * x[i] * y[j] * z[k];
                    }
                }
            }
            out[l] = s;
        }
        out
    }

    /// R₄(X,Y,Z,W) = g(R(X,Y)W, Z).
    pub fn riemann_04(&self, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
        self.inner(&self.riemann_vec(x, y, w), z)
    }

    /// Full (0,4) curvature R₄_{ijkl} = g_km R^m_{ijl}, slots (X,Y,Z,W).
    pub fn riemann_04_full(&self) -> TensorValue {
        let d = self.d;
        let mut out = TensorValue::zeros(d, 0, 4);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = 0.0;
                        for mm in 0..d {
                            s += self.g[k * d + mm].v * self.riem_jet(mm, i, j, l).v;
                        }
                        out.set(&[i, j, k, l], s);
                    }
                }
            }
        }
        out
    }

    /// Ricci tensor jets S_jk = Σ_i R^i_{ijk} (order 1).
    pub fn ricci_jets(&self) -> TensorJets {
        let d = self.d;
        let mut out = TensorJets::filled(d, 0, 2, 1);
        for j in 0..d {
            for k in 0..d {
                let mut s = Jet::constant(d, 1, 0.0);
                for i in 0..d {
                    s = s.add(self.riem_jet(i, i, j, k));
                }
                out.set(&[j, k], s);
            }
        }
        out
    }

    pub fn ricci(&self) -> TensorValue {
        self.ricci_jets().values()
    }

    /// Ricci operator jets Q^a_j = g^{ab} S_bj (order 1).
    pub fn ricci_operator_jets(&self) -> TensorJets {
        let d = self.d;
        let s = self.ricci_jets();
        let mut out = TensorJets::filled(d, 1, 1, 1);
        for a in 0..d {
            for j in 0..d {
                let mut acc = Jet::constant(d, 1, 0.0);
                for b in 0..d {
                    acc = acc.add(&self.ginv[a * d + b].mul(s.get(&[b, j])));
                }
                out.set(&[a, j], acc);
            }
        }
        out
    }

    pub fn ricci_operator(&self) -> TensorValue {
        self.ricci_operator_jets().values()
    }

    pub fn scalar_curvature(&self) -> f64 {
        let d = self.d;
        let s = self.ricci();
        let mut r = 0.0;
        for j in 0..d {
            for k in 0..d {
                r += self.ginv[j * d + k].v * s.get(&[j, k]);
            }
        }
        r
    }

    /// Sectional curvature of span{x, y} after Gram–Schmidt.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let d = self.d;
        let nx = self.inner(x, x).sqrt();
        if nx < 1e-12 {
            return Err(CoreError::Invariant("degenerate plane".into()));
        }
        let ex: Vec<f64> = x.iter().map(|v| v / nx).collect();
        let c = self.inner(y, &ex);
        let mut ey: Vec<f64> = (0..d).map(|i| y[i] - c * ex[i]).collect();
        let ny = self.inner(&ey, &ey).sqrt();
        if ny < 1e-12 {
            return Err(CoreError::Invariant("degenerate plane".into()));
        }
        for v in ey.iter_mut() {
            *v /= ny;
        }
        Ok(self.inner(&self.riemann_vec(&ex, &ey, &ey), &ex))
    }

    /// Orthonormal frame by Gram–Schmidt on the coordinate basis.
    pub fn frame(&self) -> Result<OrthoFrame> {
        OrthoFrame::gram_schmidt(&self.metric_value())
    }

    /// Covariant derivative of a tensor-of-jets: adds one covariant slot,
    /// placed first within the covariant block, and lowers the jet order by
    /// one. Index layout of the result: [contra..., i, cov...].
    pub fn cov_deriv(&self, t: &TensorJets) -> TensorJets {
        let d = self.d;
        let in_order = t.data[0].order();
        assert!(in_order >= 1, "covariant derivative needs jets of order >= 1");
        let mut out = TensorJets::filled(d, t.contra, t.cova + 1, in_order - 1);
        for idx_out in multi_indices(d, t.rank() + 1) {
            let i = idx_out[t.contra];
            let mut orig: Vec<usize> = Vec::with_capacity(t.rank());
            orig.extend_from_slice(&idx_out[..t.contra]);
            orig.extend_from_slice(&idx_out[t.contra + 1..]);
            let mut s = t.get(&orig).deriv(i);
            for a in 0..t.contra {
                let up = orig[a];
                for mm in 0..d {
                    let mut alt = orig.clone();
                    alt[a] = mm;
                    s = s.add(&self.gamma_jet(up, i, mm).mul(t.get(&alt)));
                }
            }
            for b in 0..t.cova {
                let low = orig[t.contra + b];
                for mm in 0..d {
                    let mut alt = orig.clone();
                    alt[t.contra + b] = mm;
                    s = s.sub(&self.gamma_jet(mm, i, low).mul(t.get(&alt)));
                }
            }
            out.set(&idx_out, s);
        }
        out
    }

    /// ∇_X T for a constant coordinate direction X: contracts the derivative
    /// slot of [`cov_deriv`] with X and returns point values.
    pub fn cov_deriv_along(&self, t: &TensorJets, x: &[f64]) -> TensorValue {
        let d = self.d;
        let full = self.cov_deriv(t);
        let mut out = TensorValue::zeros(d, t.contra, t.cova);
        for idx in multi_indices(d, t.rank()) {
            let mut s = 0.0;
            for i in 0..d {
                let mut fi: Vec<usize> = Vec::with_capacity(t.rank() + 1);
                fi.extend_from_slice(&idx[..t.contra]);
                fi.push(i);
                fi.extend_from_slice(&idx[t.contra..]);
                s += x[i] * full.get(&fi).v;
            }
            out.set(&idx, s);
        }
        out
    }

    /// Lie bracket [X, Y] of two vector fields given as component jets;
    /// result jets have one order less.
    pub fn lie_bracket_jets(&self, x: &[Jet], y: &[Jet]) -> Vec<Jet> {
        let d = self.d;
        (0..d)
            .map(|i| {
                let mut s = Jet::constant(d, x[0].order().min(y[0].order()) - 1, 0.0);
                for mm in 0..d {
                    s = s.add(&x[mm].mul(&y[i].deriv(mm)));
                    s = s.sub(&y[mm].mul(&x[i].deriv(mm)));
                }
                s
            })
            .collect()
    }

    pub fn lie_bracket(&self, x: &[Jet], y: &[Jet]) -> Vec<f64> {
        self.lie_bracket_jets(x, y).iter().map(|j| j.v).collect()
    }

    /// (£_V g)_ij = V^m ∂_m g_ij + g_mj ∂_i V^m + g_im ∂_j V^m (order-2 jets).
    pub fn lie_metric_jets(&self, v: &[Jet]) -> TensorJets {
        let d = self.d;
        let mut out = TensorJets::filled(d, 0, 2, 2);
        for i in 0..d {
            for j in 0..d {
                let mut s = Jet::constant(d, 2, 0.0);
                for mm in 0..d {
                    s = s.add(&v[mm].mul(&self.g[i * d + j].deriv(mm)));
                    s = s.add(&self.g[mm * d + j].mul(&v[mm].deriv(i)));
                    s = s.add(&self.g[i * d + mm].mul(&v[mm].deriv(j)));
                }
                out.set(&[i, j], s);
            }
        }
        out
    }

    pub fn lie_metric(&self, v: &[Jet]) -> TensorValue {
        self.lie_metric_jets(v).values()
    }

    /// div V = ∂_i V^i + Γ^i_im V^m.
    pub fn divergence(&self, v: &[Jet]) -> f64 {
        let d = self.d;
        let mut s = 0.0;
        for i in 0..d {
            s += v[i].g1(i);
            for mm in 0..d {
                s += self.gamma_jet(i, i, mm).v * v[mm].v;
            }
        }
        s
    }

    /// (£_V ∇) via the commutation formula
    /// 2 g((£_V∇)(X,Y), Z) = (∇_X £_Vg)(Y,Z) + (∇_Y £_Vg)(Z,X) − (∇_Z £_Vg)(X,Y).
    /// Result: order-1 jets, index [k][i][j], symmetric in (i,j).
    pub fn lie_connection_via_formula(&self, v: &[Jet]) -> TensorJets {
        let d = self.d;
        let lg = self.lie_metric_jets(v);
        let n = self.cov_deriv(&lg); // slots [x][y][z]
        let mut out = TensorJets::filled(d, 1, 2, 1);
        for i in 0..d {
            for j in 0..d {
                let mut rhs = vec![Jet::constant(d, 1, 0.0); d];
                for (z, r) in rhs.iter_mut().enumerate() {
                    *r = n
                        .get(&[i, j, z])
                        .add(n.get(&[j, z, i]))
                        .sub(n.get(&[z, i, j]));
                }
                for k in 0..d {
                    let mut s = Jet::constant(d, 1, 0.0);
                    for (z, r) in rhs.iter().enumerate() {
                        s = s.add(&self.ginv[k * d + z].mul(r));
                    }
                    out.set(&[k, i, j], s.scale(0.5));
                }
            }
        }
        out
    }

    /// (£_V ∇) by the direct definition
    /// (£_V∇)(X,Y) = £_V(∇_X Y) − ∇_X(£_V Y) − ∇_{[V,X]}Y
    /// for coordinate-extended X, Y. Order-1 jets, index [k][i][j].
    pub fn lie_connection_direct(&self, v: &[Jet]) -> TensorJets {
        let d = self.d;
        let mut out = TensorJets::filled(d, 1, 2, 1);
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let mut s = v[k].deriv(i).deriv(j);
                    for mm in 0..d {
                        s = s.add(&v[mm].mul(&self.gamma_jet(k, i, j).deriv(mm)));
                        s = s.add(&self.gamma_jet(k, mm, j).mul(&v[mm].deriv(i)));
                        s = s.add(&self.gamma_jet(k, i, mm).mul(&v[mm].deriv(j)));
                        s = s.sub(&self.gamma_jet(mm, i, j).mul(&v[k].deriv(mm)));
                    }
                    out.set(&[k, i, j], s);
                }
            }
        }
        out
    }

    /// (£_V R)(X,Y)Z via (∇_X £_V∇)(Y,Z) − (∇_Y £_V∇)(X,Z).
    /// Index [l][i][j][k] for ((£_V R)(∂i,∂j)∂k)^l.
    pub fn lie_curvature_via_formula(&self, v: &[Jet]) -> TensorValue {
        let d = self.d;
        let p = self.lie_connection_via_formula(v);
        let m = self.cov_deriv(&p); // slots [l][x][i][j]
        let mut out = TensorValue::zeros(d, 1, 3);
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let val = m.get(&[l, i, j, k]).v - m.get(&[l, j, i, k]).v;
                        out.set(&[l, i, j, k], val);
                    }
                }
            }
        }
        out
    }

    /// (£_V R) by the direct Leibniz rule on coordinate-extended arguments.
    pub fn lie_curvature_direct(&self, v: &[Jet]) -> TensorValue {
        let d = self.d;
        let mut out = TensorValue::zeros(d, 1, 3);
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let mut s = 0.0;
                        for mm in 0..d {
                            s += v[mm].v * self.riem_jet(l, i, j, k).g1(mm);
                            s -= self.riem_jet(mm, i, j, k).v * v[l].g1(mm);
                            s += self.riem_jet(l, mm, j, k).v * v[mm].g1(i);
                            s += self.riem_jet(l, i, mm, k).v * v[mm].g1(j);
                            s += self.riem_jet(l, i, j, mm).v * v[mm].g1(k);
                        }
                        out.set(&[l, i, j, k], s);
                    }
                }
            }
        }
        out
    }

    /// Gradient Du^i = g^{ij} ∂_j u (order-2 jets).
    pub fn gradient_jets(&self, u: &Jet) -> Vec<Jet> {
        let d = self.d;
        (0..d)
            .map(|i| {
                let mut s = Jet::constant(d, 2, 0.0);
                for j in 0..d {
                    s = s.add(&self.ginv[i * d + j].mul(&u.deriv(j)));
                }
                s
            })
            .collect()
    }

    /// Hess u_ij = ∂_i∂_j u − Γ^k_ij ∂_k u (order-1 jets).
    pub fn hessian_jets(&self, u: &Jet) -> TensorJets {
        let d = self.d;
        let mut out = TensorJets::filled(d, 0, 2, 1);
        for i in 0..d {
            for j in 0..d {
                let mut s = u.deriv(i).deriv(j);
                for k in 0..d {
                    s = s.sub(&self.gamma_jet(k, i, j).mul(&u.deriv(k)));
                }
                out.set(&[i, j], s);
            }
        }
        out
    }

    pub fn hessian(&self, u: &Jet) -> TensorValue {
        self.hessian_jets(u).values()
    }

    pub fn laplacian(&self, u: &Jet) -> f64 {
        let d = self.d;
        let h = self.hessian(u);
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                s += self.ginv[i * d + j].v * h.get(&[i, j]);
            }
        }
        s
    }

    /// Exterior derivative of a 1-form: (dω)_ij = ∂_i ω_j − ∂_j ω_i.
    pub fn ext_deriv_1form(&self, omega: &[Jet]) -> TensorJets {
        let d = self.d;
        let order = omega[0].order() - 1;
        let mut out = TensorJets::filled(d, 0, 2, order);
        for i in 0..d {
            for j in 0..d {
                out.set(&[i, j], omega[j].deriv(i).sub(&omega[i].deriv(j)));
            }
        }
        out
    }

    /// Exterior derivative of a 2-form:
    /// (dΦ)_ijk = ∂_i Φ_jk − ∂_j Φ_ik + ∂_k Φ_ij.
    pub fn ext_deriv_2form(&self, phi: &TensorJets) -> TensorValue {
        let d = self.d;
        let mut out = TensorValue::zeros(d, 0, 3);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = phi.get(&[j, k]).g1(i) - phi.get(&[i, k]).g1(j)
                        + phi.get(&[i, j]).g1(k);
                    out.set(&[i, j, k], v);
                }
            }
        }
        out
    }

    /// Evaluate a scalar field expression as an order-3 jet at this point.
    pub fn scalar_jet(&self, e: &Expr) -> Result<Jet> {
        e.eval(&self.p, 3, self.m.tol.eps_div)
    }

    /// Evaluate vector-field component expressions as order-3 jets.
    pub fn vector_field(&self, comps: &[Expr]) -> Result<Vec<Jet>> {
        self.m.vector_jets(comps, &self.p)
    }
}

/// Wedge of a 1-form and a 2-form:
/// (η ∧ Φ)(X,Y,Z) = η(X)Φ(Y,Z) − η(Y)Φ(X,Z) + η(Z)Φ(X,Y).
pub fn wedge_1_2(eta: &[f64], phi: &TensorValue) -> TensorValue {
    let d = eta.len();
    let mut out = TensorValue::zeros(d, 0, 3);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let v = eta[i] * phi.get(&[j, k]) - eta[j] * phi.get(&[i, k])
                    + eta[k] * phi.get(&[i, j]);
                out.set(&[i, j, k], v);
            }
        }
    }
    out
}

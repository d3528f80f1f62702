//! Almost-contact metric structures: axioms, the almost-Kenmotsu and
//! Kenmotsu conditions, the structure operators h, h′, ℓ, nullity and
//! η-Einstein fits, and infinitesimal contact transformations.

use crate::error::{CoreError, Result};
use crate::expr::Expr;
use crate::geometry::{wedge_1_2, Geometry};
use crate::jet::Jet;
use crate::manifold::ManifoldSpec;
use crate::report::Check;
use crate::tensor::{TensorJets, TensorValue};

/// Structure fields (φ, ξ, η) evaluated as jets at one chart point.
pub struct StructureAt<'a, 'm> {
    pub geo: &'a Geometry<'m>,
    /// φ^i_j as order-3 jets, index [i][j] (component i of φ(∂_j)).
    pub phi: TensorJets,
    pub xi: Vec<Jet>,
    pub eta: Vec<Jet>,
}

/// The structure operators at a point: 2h = £_ξφ, h′ = h∘φ, ℓ = R(·,ξ)ξ.
pub struct HTensors {
    /// h^i_j, order-2 jets.
    pub h: TensorJets,
    /// h′^i_j, order-2 jets.
    pub hp: TensorJets,
    /// ℓ^l_i = (R(∂_i, ξ)ξ)^l.
    pub ell: TensorValue,
}

impl<'a, 'm> StructureAt<'a, 'm> {
    pub fn new(geo: &'a Geometry<'m>) -> Result<Self> {
        let st = geo.m.structure()?;
        let d = geo.dim();
        let mut phi = TensorJets::filled(d, 1, 1, 3);
        for i in 0..d {
            for j in 0..d {
                phi.set(&[i, j], st.phi[i][j].eval(&geo.p, 3, geo.m.tol.eps_div)?);
            }
        }
        let xi = geo.vector_field(&st.xi)?;
        let eta = st
            .eta
            .iter()
            .map(|e| e.eval(&geo.p, 3, geo.m.tol.eps_div))
            .collect::<Result<Vec<_>>>()?;
        Ok(StructureAt { geo, phi, xi, eta })
    }

    fn d(&self) -> usize {
        self.geo.dim()
    }

    pub fn xi_vals(&self) -> Vec<f64> {
        self.xi.iter().map(|j| j.v).collect()
    }

    pub fn eta_vals(&self) -> Vec<f64> {
        self.eta.iter().map(|j| j.v).collect()
    }

    #[inline]
    pub fn phi_v(&self, i: usize, j: usize) -> f64 {
        self.phi.get(&[i, j]).v
    }

    pub fn eta_of(&self, v: &[f64]) -> f64 {
        self.eta.iter().zip(v).map(|(e, x)| e.v * x).sum()
    }

    pub fn phi_apply(&self, v: &[f64]) -> Vec<f64> {
        let d = self.d();
        (0..d)
            .map(|i| (0..d).map(|j| self.phi_v(i, j) * v[j]).sum())
            .collect()
    }

    /// Almost-contact axiom residuals at this point, as (name, residual).
    pub fn axiom_residuals(&self) -> Vec<(&'static str, f64)> {
        let d = self.d();
        let g = &self.geo.g;
        let mut phi_sq = 0.0f64;
        let mut compat = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for m in 0..d {
                    s += self.phi_v(i, m) * self.phi_v(m, j);
                }
                let delta = if i == j { 1.0 } else { 0.0 };
                phi_sq = phi_sq.max((s + delta - self.xi[i].v * self.eta[j].v).abs());

                let mut gphi = 0.0;
                for a in 0..d {
                    for b in 0..d {
                        gphi += self.phi_v(a, i) * self.phi_v(b, j) * g[a * d + b].v;
                    }
                }
                compat = compat
                    .max((gphi - g[i * d + j].v + self.eta[i].v * self.eta[j].v).abs());
            }
        }
        let eta_xi = (self.eta_of(&self.xi_vals()) - 1.0).abs();
        let phi_xi = self
            .phi_apply(&self.xi_vals())
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()));
        let mut eta_phi = 0.0f64;
        let mut dual = 0.0f64;
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                s += self.eta[k].v * self.phi_v(k, j);
            }
            eta_phi = eta_phi.max(s.abs());
            let mut gx = 0.0;
            for k in 0..d {
                gx += g[j * d + k].v * self.xi[k].v;
            }
            dual = dual.max((self.eta[j].v - gx).abs());
        }
        vec![
            ("phi-square", phi_sq),
            ("eta-xi-unit", eta_xi),
            ("phi-xi-zero", phi_xi),
            ("eta-phi-zero", eta_phi),
            ("compatibility", compat),
            ("eta-metric-dual", dual),
        ]
    }

    /// Fundamental 2-form Φ_ij = g(∂_i, φ∂_j), order-3 jets.
    pub fn fundamental_form(&self) -> TensorJets {
        let d = self.d();
        let mut out = TensorJets::filled(d, 0, 2, 3);
        for i in 0..d {
            for j in 0..d {
                let mut s = Jet::constant(d, 3, 0.0);
                for m in 0..d {
                    s = s.add(&self.geo.g[i * d + m].mul(self.phi.get(&[m, j])));
                }
                out.set(&[i, j], s);
            }
        }
        out
    }

    /// Residuals of the almost-Kenmotsu conditions dη = 0 and dΦ = 2η∧Φ.
    pub fn almost_kenmotsu_residuals(&self) -> (f64, f64) {
        let d_eta = self.geo.ext_deriv_1form(&self.eta).values().max_abs();
        let ff = self.fundamental_form();
        let d_phi = self.geo.ext_deriv_2form(&ff);
        let wedge = wedge_1_2(&self.eta_vals(), &ff.values());
        (d_eta, d_phi.sub(&wedge.scale(2.0)).max_abs())
    }

    /// Max component of the normality tensor N_φ = [φ,φ] + 2dη⊗ξ over
    /// coordinate pairs.
    pub fn normality_residual(&self) -> f64 {
        let d = self.d();
        let d_eta = self.geo.ext_deriv_1form(&self.eta).values();
        // coordinate fields as constant jets
        let coord_field = |j: usize| -> Vec<Jet> {
            (0..d)
                .map(|i| Jet::constant(d, 3, if i == j { 1.0 } else { 0.0 }))
                .collect()
        };
        let phi_field = |j: usize| -> Vec<Jet> {
            (0..d).map(|i| self.phi.get(&[i, j]).clone()).collect()
        };
        let mut max = 0.0f64;
        for i in 0..d {
            for j in (i + 1)..d {
                // [∂i,∂j] = 0, so φ²[∂i,∂j] drops out
                let b1 = self.geo.lie_bracket(&phi_field(i), &phi_field(j));
                let b2 = self.geo.lie_bracket(&phi_field(i), &coord_field(j));
                let b3 = self.geo.lie_bracket(&coord_field(i), &phi_field(j));
                let pb2 = self.phi_apply(&b2);
                let pb3 = self.phi_apply(&b3);
                for k in 0..d {
                    let n = b1[k] - pb2[k] - pb3[k]
                        + 2.0 * d_eta.get(&[i, j]) * self.xi[k].v;
                    max = max.max(n.abs());
                }
            }
        }
        max
    }

    /// Residual of the Kenmotsu characterization
    /// (∇_Xφ)Y = g(φX,Y)ξ − η(Y)φX.
    pub fn kenmotsu_residual(&self) -> f64 {
        let d = self.d();
        let g = &self.geo.g;
        let np = self.geo.cov_deriv(&self.phi); // [k][x][j]
        let mut max = 0.0f64;
        for k in 0..d {
            for x in 0..d {
                for j in 0..d {
                    let mut gphixy = 0.0;
                    for a in 0..d {
                        gphixy += self.phi_v(a, x) * g[a * d + j].v;
                    }
                    let target =
                        gphixy * self.xi[k].v - self.eta[j].v * self.phi_v(k, x);
                    max = max.max((np.get(&[k, x, j]).v - target).abs());
                }
            }
        }
        max
    }

    /// Structure operators h, h′, ℓ at this point.
    pub fn h_tensors(&self) -> HTensors {
        let d = self.d();
        // (£_ξφ)^i_j = ξ^m ∂_m φ^i_j − φ^m_j ∂_m ξ^i + φ^i_m ∂_j ξ^m
        let mut h = TensorJets::filled(d, 1, 1, 2);
        for i in 0..d {
            for j in 0..d {
                let mut s = Jet::constant(d, 2, 0.0);
                for m in 0..d {
                    s = s.add(&self.xi[m].mul(&self.phi.get(&[i, j]).deriv(m)));
                    s = s.sub(&self.phi.get(&[m, j]).mul(&self.xi[i].deriv(m)));
                    s = s.add(&self.phi.get(&[i, m]).mul(&self.xi[m].deriv(j)));
                }
                h.set(&[i, j], s.scale(0.5));
            }
        }
        let mut hp = TensorJets::filled(d, 1, 1, 2);
        for i in 0..d {
            for j in 0..d {
                let mut s = Jet::constant(d, 2, 0.0);
                for m in 0..d {
                    s = s.add(&h.get(&[i, m]).mul(self.phi.get(&[m, j])));
                }
                hp.set(&[i, j], s);
            }
        }
        let mut ell = TensorValue::zeros(d, 1, 1);
        for l in 0..d {
            for i in 0..d {
                let mut s = 0.0;
                for j in 0..d {
                    for k in 0..d {
                        s += self.geo.riem_jet(l, i, j, k).v
                            * self.xi[j].v
                            * self.xi[k].v;
                    }
                }
                ell.set(&[l, i], s);
            }
        }
        HTensors { h, hp, ell }
    }

    /// Residual of ∇_Xξ = X − η(X)ξ + h′X over coordinate directions.
    pub fn reeb_derivative_residual(&self, ht: &HTensors) -> f64 {
        let d = self.d();
        let xi_t = TensorJets {
            dim: d,
            contra: 1,
            cova: 0,
            data: self.xi.clone(),
        };
        let nxi = self.geo.cov_deriv(&xi_t); // [k][i]
        let mut max = 0.0f64;
        for k in 0..d {
            for i in 0..d {
                let delta = if k == i { 1.0 } else { 0.0 };
                let target =
                    delta - self.eta[i].v * self.xi[k].v + ht.hp.get(&[k, i]).v;
                max = max.max((nxi.get(&[k, i]).v - target).abs());
            }
        }
        max
    }

    /// Residuals of the algebraic h-identities: hξ = ℓξ = 0, tr h = tr h′ = 0,
    /// hφ + φh = 0, η∘h = 0, and self-adjointness of h and h′.
    pub fn h_algebra_residuals(&self, ht: &HTensors) -> Vec<(&'static str, f64)> {
        let d = self.d();
        let g = &self.geo.g;
        let xi = self.xi_vals();
        let apply = |t: &TensorJets, v: &[f64]| -> Vec<f64> {
            (0..d)
                .map(|i| (0..d).map(|j| t.get(&[i, j]).v * v[j]).sum())
                .collect()
        };
        let h_xi = apply(&ht.h, &xi)
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()));
        let mut ell_xi = 0.0f64;
        for l in 0..d {
            let mut s = 0.0;
            for i in 0..d {
                s += ell_at(&ht.ell, l, i) * xi[i];
            }
            ell_xi = ell_xi.max(s.abs());
        }
        let tr = |t: &TensorJets| -> f64 { (0..d).map(|i| t.get(&[i, i]).v).sum() };
        let mut anti = 0.0f64;
        let mut eta_h = 0.0f64;
        let mut sym_h = 0.0f64;
        let mut sym_hp = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for m in 0..d {
                    s += ht.h.get(&[i, m]).v * self.phi_v(m, j)
                        + self.phi_v(i, m) * ht.h.get(&[m, j]).v;
                }
                anti = anti.max(s.abs());
                // self-adjointness: g(T∂i,∂j) = g(∂i,T∂j)
                let low = |t: &TensorJets, a: usize, b: usize| -> f64 {
                    (0..d).map(|m| g[m * d + a].v * t.get(&[m, b]).v).sum()
                };
                sym_h = sym_h.max((low(&ht.h, i, j) - low(&ht.h, j, i)).abs());
                sym_hp = sym_hp.max((low(&ht.hp, i, j) - low(&ht.hp, j, i)).abs());
            }
            let mut s = 0.0;
            for k in 0..d {
                s += self.eta[k].v * ht.h.get(&[k, i]).v;
            }
            eta_h = eta_h.max(s.abs());
        }
        vec![
            ("h-xi-zero", h_xi),
            ("ell-xi-zero", ell_xi),
            ("trace-h", tr(&ht.h).abs()),
            ("trace-h-prime", tr(&ht.hp).abs()),
            ("h-phi-anticommute", anti),
            ("eta-h-zero", eta_h),
            ("h-self-adjoint", sym_h),
            ("h-prime-self-adjoint", sym_hp),
        ]
    }

    /// Residual of tr ℓ = −2n − tr h².
    pub fn trace_ell_residual(&self, ht: &HTensors) -> f64 {
        let d = self.d();
        let n = self.geo.m.n() as f64;
        let tr_ell: f64 = (0..d).map(|i| ell_at(&ht.ell, i, i)).sum();
        let mut tr_h2 = 0.0;
        for i in 0..d {
            for m in 0..d {
                tr_h2 += ht.h.get(&[i, m]).v * ht.h.get(&[m, i]).v;
            }
        }
        (tr_ell + 2.0 * n + tr_h2).abs()
    }
}

#[inline]
fn ell_at(ell: &TensorValue, l: usize, i: usize) -> f64 {
    ell.get(&[l, i])
}

/// Aggregate the almost-contact axiom residuals over sample points.
pub fn verify_almost_contact(m: &ManifoldSpec, seed: u64, npts: usize) -> Result<Vec<Check>> {
    let mut maxima: Vec<(&'static str, f64)> = Vec::new();
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let st = StructureAt::new(&geo)?;
        let res = st.axiom_residuals();
        if maxima.is_empty() {
            maxima = res;
        } else {
            for (acc, cur) in maxima.iter_mut().zip(res) {
                acc.1 = acc.1.max(cur.1);
            }
        }
    }
    Ok(maxima
        .into_iter()
        .map(|(name, r)| Check::new(format!("almost-contact/{name}"), r, m.tol.identity))
        .collect())
}

/// dη = 0 and dΦ = 2η∧Φ residuals, plus the normality residual (reported,
/// not asserted — normality distinguishes Kenmotsu from merely almost).
pub fn almost_kenmotsu_check(m: &ManifoldSpec, seed: u64, npts: usize) -> Result<Vec<Check>> {
    let (mut d_eta, mut d_phi, mut norm) = (0.0f64, 0.0f64, 0.0f64);
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let st = StructureAt::new(&geo)?;
        let (a, b) = st.almost_kenmotsu_residuals();
        d_eta = d_eta.max(a);
        d_phi = d_phi.max(b);
        norm = norm.max(st.normality_residual());
    }
    Ok(vec![
        Check::new("almost-kenmotsu/d-eta", d_eta, m.tol.identity),
        Check::new("almost-kenmotsu/d-Phi-2eta-wedge-Phi", d_phi, m.tol.identity),
        Check::new("almost-kenmotsu/normality", norm, f64::INFINITY)
            .with_note("informational: ~0 iff Kenmotsu"),
    ])
}

/// Max residual of the Kenmotsu characterization over sample points.
pub fn kenmotsu_residual(m: &ManifoldSpec, seed: u64, npts: usize) -> Result<f64> {
    let mut max = 0.0f64;
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let st = StructureAt::new(&geo)?;
        max = max.max(st.kenmotsu_residual());
    }
    Ok(max)
}

/// Structure-operator identities (∇ξ, the h algebra, tr ℓ) over samples.
pub fn h_identity_checks(m: &ManifoldSpec, seed: u64, npts: usize) -> Result<Vec<Check>> {
    let mut reeb = 0.0f64;
    let mut tr_ell = 0.0f64;
    let mut algebra: Vec<(&'static str, f64)> = Vec::new();
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let st = StructureAt::new(&geo)?;
        let ht = st.h_tensors();
        reeb = reeb.max(st.reeb_derivative_residual(&ht));
        tr_ell = tr_ell.max(st.trace_ell_residual(&ht));
        let res = st.h_algebra_residuals(&ht);
        if algebra.is_empty() {
            algebra = res;
        } else {
            for (acc, cur) in algebra.iter_mut().zip(res) {
                acc.1 = acc.1.max(cur.1);
            }
        }
    }
    let mut out = vec![Check::new("structure/reeb-derivative", reeb, m.tol.identity)];
    out.extend(
        algebra
            .into_iter()
            .map(|(n, r)| Check::new(format!("structure/{n}"), r, m.tol.identity)),
    );
    out.push(Check::new("structure/trace-ell", tr_ell, m.tol.identity));
    Ok(out)
}

/// Least-squares nullity constants: R(X,Y)ξ ≈ κ{η(Y)X−η(X)Y} + μ{η(Y)h′X−η(X)h′Y}.
#[derive(Clone, Copy, Debug)]
pub struct NullityFit {
    pub kappa: f64,
    /// `None` when the h′ regressor is rank-deficient (h′ ≈ 0).
    pub mu: Option<f64>,
    pub residual: f64,
}

/// Rank threshold on the h′ regressor column (RMS) below which μ is
/// declared undetermined.
pub const NULLITY_RANK_THRESHOLD: f64 = 1e-10;

pub fn nullity_fit(m: &ManifoldSpec, seed: u64, npts: usize) -> Result<NullityFit> {
    let d = m.dim;
    // regression rows (a, b, t): t = κ·a + μ·b
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let st = StructureAt::new(&geo)?;
        let ht = st.h_tensors();
        let xi = st.xi_vals();
        // candidates: ξ itself plus coordinate directions projected ⊥ ξ
        let mut cands: Vec<Vec<f64>> = vec![xi.clone()];
        for a in 0..d {
            let ea: Vec<f64> = (0..d).map(|i| if i == a { 1.0 } else { 0.0 }).collect();
            let c = st.eta_of(&ea);
            let v: Vec<f64> = (0..d).map(|i| ea[i] - c * xi[i]).collect();
            if geo.inner(&v, &v).sqrt() > 1e-8 {
                cands.push(v);
            }
        }
        let hp_apply = |v: &[f64]| -> Vec<f64> {
            (0..d)
                .map(|i| (0..d).map(|j| ht.hp.get(&[i, j]).v * v[j]).sum())
                .collect()
        };
        for a in 0..cands.len() {
            for b in (a + 1)..cands.len() {
                let (x, y) = (&cands[a], &cands[b]);
                let t = geo.riemann_vec(x, y, &xi);
                let (ex, ey) = (st.eta_of(x), st.eta_of(y));
                let hx = hp_apply(x);
                let hy = hp_apply(y);
                for l in 0..d {
                    let ra = ey * x[l] - ex * y[l];
                    let rb = ey * hx[l] - ex * hy[l];
                    rows.push((ra, rb, t[l]));
                }
            }
        }
    }
    let (mut saa, mut sab, mut sbb, mut sat, mut sbt) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(a, b, t) in &rows {
        saa += a * a;
        sab += a * b;
        sbb += b * b;
        sat += a * t;
        sbt += b * t;
    }
    if saa == 0.0 {
        return Err(CoreError::Invariant(
            "nullity fit has no usable regressor data".into(),
        ));
    }
    let b_rms = (sbb / rows.len() as f64).sqrt();
    let (kappa, mu) = if b_rms < NULLITY_RANK_THRESHOLD {
        (sat / saa, None)
    } else {
        let det = saa * sbb - sab * sab;
        if det.abs() < 1e-14 * saa * sbb.max(1.0) {
            (sat / saa, None)
        } else {
            (
                (sat * sbb - sbt * sab) / det,
                Some((sbt * saa - sat * sab) / det),
            )
        }
    };
    let mu_v = mu.unwrap_or(0.0);
    let residual = rows
        .iter()
        .fold(0.0f64, |m, &(a, b, t)| m.max((t - kappa * a - mu_v * b).abs()));
    Ok(NullityFit { kappa, mu, residual })
}

/// Outcome of a gated identity suite.
pub struct Suite {
    pub skipped: Option<String>,
    pub checks: Vec<Check>,
}

impl Suite {
    /// Flatten to checks; a skip becomes a single passing check with a note.
    pub fn into_checks(self, suite_name: &str) -> Vec<Check> {
        match self.skipped {
            Some(reason) => vec![Check::skipped(suite_name, reason)],
            None => self.checks,
        }
    }
}

/// Kenmotsu-only curvature identities: ∇_Xξ = X−η(X)ξ, R(X,Y)ξ = η(X)Y−η(Y)X,
/// Qξ = −2nξ, (∇_XQ)ξ = −QX−2nX, (∇_ξQ)X = −2QX−4nX.
pub fn kenmotsu_identity_suite(m: &ManifoldSpec, seed: u64, npts: usize) -> Result<Suite> {
    let gate = kenmotsu_residual(m, seed, npts.min(20))?;
    if gate > m.tol.identity {
        return Ok(Suite {
            skipped: Some(format!(
                "manifold is not Kenmotsu (characterization residual {gate:.3e})"
            )),
            checks: Vec::new(),
        });
    }
    let d = m.dim;
    let n = m.n() as f64;
    let mut r31 = 0.0f64;
    let mut r32 = 0.0f64;
    let mut r33 = 0.0f64;
    let mut r34 = 0.0f64;
    let mut r311 = 0.0f64;
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let st = StructureAt::new(&geo)?;
        let xi = st.xi_vals();
        let xi_t = TensorJets {
            dim: d,
            contra: 1,
            cova: 0,
            data: st.xi.clone(),
        };
        let nxi = geo.cov_deriv(&xi_t);
        for k in 0..d {
            for i in 0..d {
                let delta = if k == i { 1.0 } else { 0.0 };
                let target = delta - st.eta[i].v * xi[k];
                r31 = r31.max((nxi.get(&[k, i]).v - target).abs());
            }
        }
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    let mut s = 0.0;
                    for k in 0..d {
                        s += geo.riem_jet(l, i, j, k).v * xi[k];
                    }
                    let di = if l == j { 1.0 } else { 0.0 };
                    let dj = if l == i { 1.0 } else { 0.0 };
                    let target = st.eta[i].v * di - st.eta[j].v * dj;
                    r32 = r32.max((s - target).abs());
                }
            }
        }
        let q = geo.ricci_operator_jets();
        let nq = geo.cov_deriv(&q); // [k][x][j]
        for k in 0..d {
            let mut qxi = 0.0;
            for j in 0..d {
                qxi += q.get(&[k, j]).v * xi[j];
            }
            r33 = r33.max((qxi + 2.0 * n * xi[k]).abs());
            for x in 0..d {
                let mut nq_xi = 0.0;
                for j in 0..d {
                    nq_xi += nq.get(&[k, x, j]).v * xi[j];
                }
                let delta = if k == x { 1.0 } else { 0.0 };
                r34 = r34.max((nq_xi + q.get(&[k, x]).v + 2.0 * n * delta).abs());
            }
            for j in 0..d {
                let mut s = 0.0;
                for x in 0..d {
                    s += xi[x] * nq.get(&[k, x, j]).v;
                }
                let delta = if k == j { 1.0 } else { 0.0 };
                r311 = r311.max((s + 2.0 * q.get(&[k, j]).v + 4.0 * n * delta).abs());
            }
        }
    }
    let tol = m.tol.identity;
    Ok(Suite {
        skipped: None,
        checks: vec![
            Check::new("kenmotsu/reeb-derivative", r31, tol),
            Check::new("kenmotsu/curvature-xi", r32, tol),
            Check::new("kenmotsu/q-xi", r33, tol),
            Check::new("kenmotsu/nabla-q-xi", r34, tol),
            Check::new("kenmotsu/nabla-xi-q", r311, tol),
        ],
    })
}

/// Nullity-case identities (require fitted κ < −1, h′ ≠ 0): h′² = (κ+1)φ²,
/// Qξ = 2nκξ, the Ricci-operator form, r = 2n(κ−2n), the ∇h′ formula,
/// div h′ = 2n(κ+1)η, and tr(∇_X h′) = 0.
pub fn kappa_mu_identity_suite(m: &ManifoldSpec, seed: u64, npts: usize) -> Result<Suite> {
    let fit = nullity_fit(m, seed, npts.min(20))?;
    if fit.mu.is_none() || fit.kappa >= -1.0 {
        return Ok(Suite {
            skipped: Some(format!(
                "nullity identities need kappa < -1 with h' != 0 (fit: kappa {:.6}, mu {:?})",
                fit.kappa, fit.mu
            )),
            checks: Vec::new(),
        });
    }
    let kappa = fit.kappa;
    let d = m.dim;
    let n = m.n() as f64;
    let mut r_hp2 = 0.0f64;
    let mut r_qxi = 0.0f64;
    let mut r_q = 0.0f64;
    let mut r_scal = 0.0f64;
    let mut r_nhp = 0.0f64;
    let mut r_div = 0.0f64;
    let mut r_tr = 0.0f64;
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let st = StructureAt::new(&geo)?;
        let ht = st.h_tensors();
        let xi = st.xi_vals();
        let g = &geo.g;
        for i in 0..d {
            for j in 0..d {
                let mut hp2 = 0.0;
                let mut phi2 = 0.0;
                for mm in 0..d {
                    hp2 += ht.hp.get(&[i, mm]).v * ht.hp.get(&[mm, j]).v;
                    phi2 += st.phi_v(i, mm) * st.phi_v(mm, j);
                }
                r_hp2 = r_hp2.max((hp2 - (kappa + 1.0) * phi2).abs());
            }
        }
        let q = geo.ricci_operator_jets();
        for k in 0..d {
            let mut qxi = 0.0;
            for j in 0..d {
                qxi += q.get(&[k, j]).v * xi[j];
            }
            r_qxi = r_qxi.max((qxi - 2.0 * n * kappa * xi[k]).abs());
            for j in 0..d {
                let delta = if k == j { 1.0 } else { 0.0 };
                let target = -2.0 * n * delta
                    + 2.0 * n * (kappa + 1.0) * xi[k] * st.eta[j].v
                    - 2.0 * n * ht.hp.get(&[k, j]).v;
                r_q = r_q.max((q.get(&[k, j]).v - target).abs());
            }
        }
        r_scal = r_scal.max(
            (geo.scalar_curvature() - 2.0 * n * (kappa - 2.0 * n)).abs(),
        );
        let nhp = geo.cov_deriv(&ht.hp); // [k][x][j]
        // lower the output slot: g((∇_Xh')Y, Z)
        for x in 0..d {
            // w = (κ+1)∂x − h'∂x, lowered: g(w, ·)
            let mut w_low = vec![0.0; d];
            for a in 0..d {
                let wa = if a == x { kappa + 1.0 } else { 0.0 } - ht.hp.get(&[a, x]).v;
                for j in 0..d {
                    w_low[j] += wa * g[a * d + j].v;
                }
            }
            let mut tr = 0.0;
            for j in 0..d {
                for z in 0..d {
                    let mut lhs = 0.0;
                    for k in 0..d {
                        lhs += g[k * d + z].v * nhp.get(&[k, x, j]).v;
                    }
                    let target = w_low[j] * st.eta[z].v + st.eta[j].v * w_low[z]
                        - 2.0 * (kappa + 1.0)
                            * st.eta[x].v
                            * st.eta[j].v
                            * st.eta[z].v;
                    r_nhp = r_nhp.max((lhs - target).abs());
                }
                tr += nhp.get(&[j, x, j]).v;
            }
            r_tr = r_tr.max(tr.abs());
        }
        for j in 0..d {
            let mut div = 0.0;
            for i in 0..d {
                div += nhp.get(&[i, i, j]).v;
            }
            r_div = r_div.max((div - 2.0 * n * (kappa + 1.0) * st.eta[j].v).abs());
        }
    }
    let tol = m.tol.identity;
    Ok(Suite {
        skipped: None,
        checks: vec![
            Check::new("nullity/h-prime-square", r_hp2, tol),
            Check::new("nullity/q-xi", r_qxi, tol),
            Check::new("nullity/ricci-operator-form", r_q, tol),
            Check::new("nullity/scalar-curvature", r_scal, tol),
            Check::new("nullity/nabla-h-prime", r_nhp, tol),
            Check::new("nullity/div-h-prime", r_div, tol),
            Check::new("nullity/trace-nabla-h-prime", r_tr, tol),
        ],
    })
}

/// Least-squares η-Einstein coefficients with S ≈ a·g + b·η⊗η.
#[derive(Clone, Copy, Debug)]
pub struct EtaEinsteinFit {
    pub a: f64,
    pub b: f64,
    pub residual: f64,
}

pub fn eta_einstein_fit(m: &ManifoldSpec, seed: u64, npts: usize) -> Result<EtaEinsteinFit> {
    let d = m.dim;
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let st = StructureAt::new(&geo)?;
        let s = geo.ricci();
        for i in 0..d {
            for j in 0..d {
                rows.push((
                    geo.g[i * d + j].v,
                    st.eta[i].v * st.eta[j].v,
                    s.get(&[i, j]),
                ));
            }
        }
    }
    let (mut saa, mut sab, mut sbb, mut sat, mut sbt) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(a, b, t) in &rows {
        saa += a * a;
        sab += a * b;
        sbb += b * b;
        sat += a * t;
        sbt += b * t;
    }
    let det = saa * sbb - sab * sab;
    if det.abs() < 1e-12 * (saa * sbb).max(1.0) {
        return Err(CoreError::Invariant(
            "eta-Einstein regressors are degenerate".into(),
        ));
    }
    let a = (sat * sbb - sbt * sab) / det;
    let b = (sbt * saa - sat * sab) / det;
    let residual = rows
        .iter()
        .fold(0.0f64, |mx, &(x, y, t)| mx.max((t - a * x - b * y).abs()));
    Ok(EtaEinsteinFit { a, b, residual })
}

/// Infinitesimal-contact-transformation test for a potential field:
/// £_Vη = ση pointwise; strict when σ ≡ 0.
#[derive(Clone, Copy, Debug)]
pub struct ContactTransform {
    /// £_Vη is pointwise proportional to η.
    pub conformal: bool,
    /// £_Vη ≡ 0.
    pub strict: bool,
    pub sigma_max_abs: f64,
    /// Max norm of the component of £_Vη orthogonal to η.
    pub max_orthogonal: f64,
}

pub fn contact_transformation_check(
    m: &ManifoldSpec,
    v: &[Expr],
    seed: u64,
    npts: usize,
) -> Result<ContactTransform> {
    let d = m.dim;
    let mut sigma_max = 0.0f64;
    let mut orth_max = 0.0f64;
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let st = StructureAt::new(&geo)?;
        let vj = geo.vector_field(v)?;
        // (£_Vη)_i = V^m ∂_m η_i + η_m ∂_i V^m
        let mut om = vec![0.0; d];
        for i in 0..d {
            for mm in 0..d {
                om[i] += vj[mm].v * st.eta[i].g1(mm) + st.eta[mm].v * vj[mm].g1(i);
            }
        }
        let sigma: f64 = om.iter().zip(st.xi_vals()).map(|(a, b)| a * b).sum();
        sigma_max = sigma_max.max(sigma.abs());
        let mut norm2 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let oi = om[i] - sigma * st.eta[i].v;
                let oj = om[j] - sigma * st.eta[j].v;
                norm2 += geo.ginv[i * d + j].v * oi * oj;
            }
        }
        orth_max = orth_max.max(norm2.max(0.0).sqrt());
    }
    let tol = m.tol.identity;
    Ok(ContactTransform {
        conformal: orth_max < tol,
        strict: orth_max < tol && sigma_max < tol,
        sigma_max_abs: sigma_max,
        max_orthogonal: orth_max,
    })
}

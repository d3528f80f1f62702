//! Riemann-soliton residuals, λ fitting, contraction bridge, divergence
//! relations, classification, and numeric theorem audits.
//!
//! Soliton residual (vector potential): T = 2R₄ + λ(g⊼g) + (g⊼£_Vg).
//! Gradient variant: T = R₄ + ½λ(g⊼g) + (g⊼Hess u).

use crate::contact::{
    contact_transformation_check, eta_einstein_fit, kenmotsu_residual, nullity_fit,
    StructureAt,
};
use crate::error::{CoreError, Result};
use crate::expr::Expr;
use crate::geometry::Geometry;
use crate::jet::Jet;
use crate::manifold::ManifoldSpec;
use crate::report::Check;
use crate::tensor::kulkarni_nomizu;
use crate::tensor::TensorValue;

/// The declared potential of a soliton problem.
#[derive(Clone, Debug)]
pub enum Potential {
    Vector(Vec<Expr>),
    Gradient(Expr),
}

/// Pick the potential declared on the manifold (vector preferred).
pub fn declared_potential(m: &ManifoldSpec) -> Result<Potential> {
    if let Some(v) = &m.potential_vector {
        Ok(Potential::Vector(v.clone()))
    } else if let Some(u) = &m.potential_fn {
        Ok(Potential::Gradient(u.clone()))
    } else {
        Err(CoreError::MissingField(
            "potential field (vector or function)".into(),
        ))
    }
}

/// T = 2R₄ + λ(g⊼g) + (g⊼£_Vg) at one point, for V given as component jets.
pub fn soliton_residual_point(geo: &Geometry, v: &[Jet], lambda: f64) -> Result<TensorValue> {
    let g = geo.metric_value();
    let lg = geo.lie_metric(v);
    let tol = geo.m.tol.exact;
    let gg = kulkarni_nomizu(&g, &g, tol)?;
    let glg = kulkarni_nomizu(&g, &lg, tol)?;
    Ok(geo
        .riemann_04_full()
        .scale(2.0)
        .add(&gg.scale(lambda))
        .add(&glg))
}

/// T = R₄ + ½λ(g⊼g) + (g⊼Hess u) at one point.
pub fn gradient_residual_point(geo: &Geometry, u: &Jet, lambda: f64) -> Result<TensorValue> {
    let g = geo.metric_value();
    let hess = geo.hessian(u);
    let tol = geo.m.tol.exact;
    let gg = kulkarni_nomizu(&g, &g, tol)?;
    let gh = kulkarni_nomizu(&g, &hess, tol)?;
    Ok(geo
        .riemann_04_full()
        .add(&gg.scale(0.5 * lambda))
        .add(&gh))
}

/// g^{ik}-contraction of a (0,4) tensor over slots 1 and 3 (the Ricci-type
/// trace: an orthonormal frame in the first and third slots).
pub fn trace_13(geo: &Geometry, t: &TensorValue) -> TensorValue {
    let d = geo.dim();
    assert_eq!((t.contra, t.cova), (0, 4));
    let mut out = TensorValue::zeros(d, 0, 2);
    for j in 0..d {
        for l in 0..d {
            let mut s = 0.0;
            for i in 0..d {
                for k in 0..d {
                    s += geo.ginv[i * d + k].v * t.get(&[i, j, k, l]);
                }
            }
            out.set(&[j, l], s);
        }
    }
    out
}

/// Contracted soliton equation left side:
/// £_Vg + 2/(2n−1)·S + 2/(2n−1)·(2nλ + div V)·g. Odd dimension ≥ 3 only.
pub fn contracted_residual_point(geo: &Geometry, v: &[Jet], lambda: f64) -> Result<TensorValue> {
    let d = geo.dim();
    if d % 2 == 0 || d < 3 {
        return Err(CoreError::Invariant(format!(
            "contracted soliton equation needs odd dimension >= 3, got {d}"
        )));
    }
    let n = (d / 2) as f64;
    let c = 2.0 / (2.0 * n - 1.0);
    let div_v = geo.divergence(v);
    Ok(geo
        .lie_metric(v)
        .add(&geo.ricci().scale(c))
        .add(&geo.metric_value().scale(c * (2.0 * n * lambda + div_v))))
}

/// Closed-form λ minimizing Σ‖A + λB‖² in orthonormal-frame components,
/// with the per-point minimizer range as an almost-soliton diagnostic.
#[derive(Clone, Copy, Debug)]
pub struct LambdaFit {
    pub lambda: f64,
    /// Max frame-Frobenius residual at the fitted λ.
    pub residual: f64,
    /// Range of per-point best λ(p) (equal endpoints ⇒ genuine soliton).
    pub pointwise: (f64, f64),
}

pub fn fit_lambda(m: &ManifoldSpec, pot: &Potential, seed: u64, npts: usize) -> Result<LambdaFit> {
    let pts = m.sampler(seed).points(npts);
    let mut sab = 0.0f64;
    let mut sbb = 0.0f64;
    let mut per_point: Vec<f64> = Vec::with_capacity(pts.len());
    // cache frame components of (A, B) per point for the residual pass
    let mut cached: Vec<(TensorValue, TensorValue)> = Vec::with_capacity(pts.len());
    for p in &pts {
        let geo = Geometry::at(m, p)?;
        let (a, b) = lambda_affine_parts(&geo, pot)?;
        let frame = geo.frame()?;
        let af = frame.components(&a);
        let bf = frame.components(&b);
        let dot: f64 = af.data.iter().zip(&bf.data).map(|(x, y)| x * y).sum();
        let nb: f64 = bf.data.iter().map(|x| x * x).sum();
        sab += dot;
        sbb += nb;
        if nb > 0.0 {
            per_point.push(-dot / nb);
        }
        cached.push((af, bf));
    }
    if sbb == 0.0 {
        return Err(CoreError::Invariant(
            "lambda is unidentifiable: the (g⊼g) regressor vanished".into(),
        ));
    }
    let lambda = -sab / sbb;
    let mut residual = 0.0f64;
    for (af, bf) in &cached {
        let fro: f64 = af
            .data
            .iter()
            .zip(&bf.data)
            .map(|(x, y)| {
                let r = x + lambda * y;
                r * r
            })
            .sum::<f64>()
            .sqrt();
        residual = residual.max(fro);
    }
    let lo = per_point.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = per_point.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(LambdaFit {
        lambda,
        residual,
        pointwise: (lo, hi),
    })
}

/// The affine decomposition residual(λ) = A + λ·B at one point.
fn lambda_affine_parts(geo: &Geometry, pot: &Potential) -> Result<(TensorValue, TensorValue)> {
    let g = geo.metric_value();
    let tol = geo.m.tol.exact;
    let gg = kulkarni_nomizu(&g, &g, tol)?;
    match pot {
        Potential::Vector(v) => {
            let vj = geo.vector_field(v)?;
            let lg = geo.lie_metric(&vj);
            let a = geo
                .riemann_04_full()
                .scale(2.0)
                .add(&kulkarni_nomizu(&g, &lg, tol)?);
            Ok((a, gg))
        }
        Potential::Gradient(u) => {
            let uj = geo.scalar_jet(u)?;
            let hess = geo.hessian(&uj);
            let a = geo
                .riemann_04_full()
                .add(&kulkarni_nomizu(&g, &hess, tol)?);
            Ok((a, gg.scale(0.5)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Shrinking,
    Steady,
    Expanding,
    Trivial,
}

/// Full soliton evaluation over the sample set.
#[derive(Clone, Debug)]
pub struct SolitonReport {
    pub lambda: f64,
    pub fitted: bool,
    pub max_residual: f64,
    pub rms_residual: f64,
    pub pointwise_lambda: (f64, f64),
    /// (mean, std) of div V (vector mode) or Δu (gradient mode).
    pub divergence: (f64, f64),
    pub classification: Classification,
    pub checks: Vec<Check>,
}

pub fn soliton_report(
    m: &ManifoldSpec,
    pot: &Potential,
    lambda: Option<f64>,
    seed: u64,
    npts: usize,
) -> Result<SolitonReport> {
    let fit = fit_lambda(m, pot, seed, npts)?;
    let (lambda, fitted) = match lambda {
        Some(l) => (l, false),
        None => (fit.lambda, true),
    };
    let pts = m.sampler(seed).points(npts);
    let mut max_res = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut bridge = 0.0f64;
    let mut divs: Vec<f64> = Vec::with_capacity(pts.len());
    let mut sup_pot = 0.0f64;
    for p in &pts {
        let geo = Geometry::at(m, p)?;
        let t = match pot {
            Potential::Vector(v) => {
                let vj = geo.vector_field(v)?;
                divs.push(geo.divergence(&vj));
                let vv: Vec<f64> = vj.iter().map(|j| j.v).collect();
                sup_pot = sup_pot.max(geo.inner(&vv, &vv).max(0.0).sqrt());
                let t = soliton_residual_point(&geo, &vj, lambda)?;
                // contraction bridge: trace13(T) = (2n-1) x contracted equation
                if geo.dim() % 2 == 1 && geo.dim() >= 3 {
                    let n = (geo.dim() / 2) as f64;
                    let lhs = trace_13(&geo, &t);
                    let rhs =
                        contracted_residual_point(&geo, &vj, lambda)?.scale(2.0 * n - 1.0);
                    bridge = bridge.max(lhs.sub(&rhs).max_abs());
                }
                t
            }
            Potential::Gradient(u) => {
                let uj = geo.scalar_jet(u)?;
                divs.push(geo.laplacian(&uj));
                let du = geo.gradient_jets(&uj);
                let dv: Vec<f64> = du.iter().map(|j| j.v).collect();
                sup_pot = sup_pot.max(geo.inner(&dv, &dv).max(0.0).sqrt());
                gradient_residual_point(&geo, &uj, lambda)?
            }
        };
        let frame = geo.frame()?;
        let fro = frame.components(&t).frobenius();
        max_res = max_res.max(fro);
        sum_sq += fro * fro;
    }
    let rms = (sum_sq / pts.len() as f64).sqrt();
    let mean = divs.iter().sum::<f64>() / divs.len() as f64;
    let std = (divs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
        / divs.len() as f64)
        .sqrt();
    let mut checks = vec![
        Check::new("soliton/residual-max", max_res, m.tol.identity)
            .with_note(format!("lambda {lambda:.16e} ({})", if fitted { "fitted" } else { "given" })),
    ];
    if let Potential::Vector(_) = pot {
        checks.push(Check::new("soliton/contraction-bridge", bridge, m.tol.exact));
    }
    let classification = if sup_pot < m.tol.identity {
        // trivial solitons force constant sectional curvature; verify it
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in &pts {
            let geo = Geometry::at(m, p)?;
            let frame = geo.frame()?;
            for a in 0..geo.dim() {
                for b in (a + 1)..geo.dim() {
                    let k = geo.sectional(&frame.frame[a], &frame.frame[b])?;
                    lo = lo.min(k);
                    hi = hi.max(k);
                }
            }
        }
        checks.push(Check::new(
            "soliton/trivial-constant-curvature",
            hi - lo,
            m.tol.identity,
        ));
        Classification::Trivial
    } else if lambda < 0.0 {
        Classification::Shrinking
    } else if lambda == 0.0 {
        Classification::Steady
    } else {
        Classification::Expanding
    };
    Ok(SolitonReport {
        lambda,
        fitted,
        max_residual: max_res,
        rms_residual: rms,
        pointwise_lambda: fit.pointwise,
        divergence: (mean, std),
        classification,
        checks,
    })
}

/// Divergence relations gated by the detected structure class.
pub fn divergence_relations(
    m: &ManifoldSpec,
    pot: &Potential,
    lambda: f64,
    seed: u64,
    npts: usize,
) -> Result<Vec<Check>> {
    let n = (m.dim / 2) as f64;
    let tol = m.tol.identity;
    let pts = m.sampler(seed).points(npts);
    let mut divs: Vec<f64> = Vec::with_capacity(pts.len());
    for p in &pts {
        let geo = Geometry::at(m, p)?;
        match pot {
            Potential::Vector(v) => divs.push(geo.divergence(&geo.vector_field(v)?)),
            Potential::Gradient(u) => divs.push(geo.laplacian(&geo.scalar_jet(u)?)),
        }
    }
    let mean = divs.iter().sum::<f64>() / divs.len() as f64;
    let std = (divs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
        / divs.len() as f64)
        .sqrt();
    let mut out = vec![Check::new(
        "divergence/constant",
        std / (1.0 + mean.abs()),
        tol,
    )
    .with_note(format!("mean {mean:.16e}"))];
    if m.structure.is_none() {
        out.push(Check::skipped(
            "divergence/structure-relations",
            "no contact structure declared",
        ));
        return Ok(out);
    }
    let gate_n = npts.min(20);
    let kres = kenmotsu_residual(m, seed, gate_n)?;
    if kres <= tol {
        out.push(Check::new(
            "divergence/kenmotsu-div-v",
            (mean - 2.0 * n * (1.0 - lambda)).abs(),
            tol,
        ));
    } else {
        let fit = nullity_fit(m, seed, gate_n)?;
        if fit.mu.is_some() && fit.kappa < -1.0 {
            out.push(Check::new(
                "divergence/nullity-relation",
                (2.0 * n * lambda + mean + 2.0 * n * fit.kappa).abs(),
                tol,
            ));
            if let Potential::Gradient(_) = pot {
                if (fit.kappa + 2.0).abs() <= 1e-6 {
                    out.push(Check::new(
                        "divergence/gradient-laplacian",
                        (2.0 * n * lambda + mean - 4.0 * n).abs(),
                        tol,
                    ));
                }
            }
        } else {
            out.push(Check::skipped(
                "divergence/structure-relations",
                "neither Kenmotsu nor strict nullity case",
            ));
        }
    }
    Ok(out)
}

/// A theorem audit: hypothesis residuals and conclusion residuals evaluated
/// independently — never chained by logical inference.
#[derive(Clone, Debug)]
pub struct AuditRecord {
    pub theorem: String,
    pub hypotheses: Vec<Check>,
    pub hypotheses_met: bool,
    pub conclusions: Vec<Check>,
}

impl AuditRecord {
    pub fn into_checks(self) -> Vec<Check> {
        let mut out: Vec<Check> = self
            .hypotheses
            .into_iter()
            .map(|mut c| {
                c.name = format!("hypothesis/{}", c.name);
                c
            })
            .collect();
        if self.hypotheses_met {
            out.extend(self.conclusions.into_iter().map(|mut c| {
                c.name = format!("conclusion/{}", c.name);
                c
            }));
        } else {
            out.push(Check::skipped("conclusions", "hypotheses unmet"));
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.hypotheses_met && self.conclusions.iter().all(|c| c.passed)
    }
}

fn boolean_check(name: &str, ok: bool, note: String) -> Check {
    Check::new(name, if ok { 0.0 } else { 1.0 }, 0.5).with_note(note)
}

/// Max deviation of sampled sectional curvatures from `k0`.
fn sectional_deviation(m: &ManifoldSpec, k0: f64, seed: u64, npts: usize) -> Result<f64> {
    let mut max = 0.0f64;
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let frame = geo.frame()?;
        for a in 0..geo.dim() {
            for b in (a + 1)..geo.dim() {
                max = max.max((geo.sectional(&frame.frame[a], &frame.frame[b])? - k0).abs());
            }
        }
    }
    Ok(max)
}

/// Max residual of the Einstein condition S = (r/dim)·g.
fn einstein_deviation(m: &ManifoldSpec, seed: u64, npts: usize) -> Result<f64> {
    let mut max = 0.0f64;
    for p in m.sampler(seed).points(npts) {
        let geo = Geometry::at(m, &p)?;
        let r = geo.scalar_curvature();
        let dev = geo
            .ricci()
            .sub(&geo.metric_value().scale(r / geo.dim() as f64))
            .max_abs();
        max = max.max(dev);
    }
    Ok(max)
}

/// Numeric audit of one of the supported theorems: "3.2", "3.3", "3.5",
/// "4.2", "4.3".
pub fn theorem_audit(m: &ManifoldSpec, id: &str, seed: u64, npts: usize) -> Result<AuditRecord> {
    let tol = m.tol.identity;
    let n = (m.dim / 2) as f64;
    match id {
        "3.2" | "3.3" => {
            let mut hyp = Vec::new();
            if id == "3.2" {
                hyp.push(boolean_check(
                    "dimension-above-3",
                    m.dim > 3,
                    format!("dim {}", m.dim),
                ));
            } else {
                hyp.push(boolean_check(
                    "dimension-3",
                    m.dim == 3,
                    format!("dim {}", m.dim),
                ));
            }
            let kres = if m.structure.is_some() {
                kenmotsu_residual(m, seed, npts.min(20))?
            } else {
                f64::INFINITY
            };
            hyp.push(Check::new("kenmotsu", kres, tol));
            if id == "3.2" {
                let ee = eta_einstein_fit(m, seed, npts.min(20))?;
                hyp.push(Check::new("eta-einstein", ee.residual, tol).with_note(format!(
                    "fit a {:.6e}, b {:.6e}",
                    ee.a, ee.b
                )));
            }
            let pot = declared_potential(m)?;
            let fit = fit_lambda(m, &pot, seed, npts)?;
            hyp.push(
                Check::new("riemann-soliton", fit.residual, tol)
                    .with_note(format!("fitted lambda {:.16e}", fit.lambda)),
            );
            let dr = divergence_relations(m, &pot, fit.lambda, seed, npts)?;
            hyp.push(dr.into_iter().next().unwrap()); // divergence/constant
            let hypotheses_met = hyp.iter().all(|c| c.passed);
            let conclusions = if hypotheses_met {
                if id == "3.2" {
                    vec![Check::new("einstein", einstein_deviation(m, seed, npts)?, tol)]
                } else {
                    vec![Check::new(
                        "constant-curvature-minus-1",
                        sectional_deviation(m, -1.0, seed, npts)?,
                        tol,
                    )]
                }
            } else {
                Vec::new()
            };
            Ok(AuditRecord {
                theorem: id.into(),
                hypotheses: hyp,
                hypotheses_met,
                conclusions,
            })
        }
        "3.5" => {
            let mut hyp = Vec::new();
            let kres = if m.structure.is_some() {
                kenmotsu_residual(m, seed, npts.min(20))?
            } else {
                f64::INFINITY
            };
            hyp.push(Check::new("kenmotsu", kres, tol));
            let u = match m.potential_fn.as_ref() {
                Some(u) => u.clone(),
                None => {
                    hyp.push(boolean_check(
                        "gradient-potential",
                        false,
                        "no potential function declared".into(),
                    ));
                    return Ok(AuditRecord {
                        theorem: id.into(),
                        hypotheses: hyp,
                        hypotheses_met: false,
                        conclusions: Vec::new(),
                    });
                }
            };
            let pot = Potential::Gradient(u.clone());
            let fit = fit_lambda(m, &pot, seed, npts)?;
            hyp.push(
                Check::new("gradient-riemann-soliton", fit.residual, tol)
                    .with_note(format!("fitted lambda {:.16e}", fit.lambda)),
            );
            let hypotheses_met = hyp.iter().all(|c| c.passed);
            let mut conclusions = Vec::new();
            if hypotheses_met {
                let einstein = einstein_deviation(m, seed, npts)?;
                // collinearity: component of Du orthogonal to xi
                let mut coll = 0.0f64;
                for p in m.sampler(seed).points(npts) {
                    let geo = Geometry::at(m, &p)?;
                    let st = StructureAt::new(&geo)?;
                    let du = geo.gradient_jets(&geo.scalar_jet(&u)?);
                    let dv: Vec<f64> = du.iter().map(|j| j.v).collect();
                    let c = st.eta_of(&dv);
                    let xi = st.xi_vals();
                    let orth: Vec<f64> = (0..m.dim).map(|i| dv[i] - c * xi[i]).collect();
                    coll = coll.max(geo.inner(&orth, &orth).max(0.0).sqrt());
                }
                let either = einstein.min(coll);
                conclusions.push(
                    Check::new("einstein-or-collinear", either, tol).with_note(format!(
                        "einstein {einstein:.6e}, collinearity {coll:.6e}"
                    )),
                );
            }
            Ok(AuditRecord {
                theorem: id.into(),
                hypotheses: hyp,
                hypotheses_met,
                conclusions,
            })
        }
        "4.2" | "4.3" => {
            let mut hyp = Vec::new();
            let (kres, fit) = if m.structure.is_some() {
                (
                    kenmotsu_residual(m, seed, npts.min(20))?,
                    Some(nullity_fit(m, seed, npts.min(20))?),
                )
            } else {
                (f64::NEG_INFINITY, None)
            };
            hyp.push(boolean_check(
                "non-kenmotsu",
                m.structure.is_some() && kres > tol,
                format!("kenmotsu characterization residual {kres:.3e}"),
            ));
            let nf = match fit {
                Some(f) if f.mu.is_some() && f.kappa < -1.0 => {
                    hyp.push(
                        Check::new("nullity-condition", f.residual, tol).with_note(format!(
                            "kappa {:.16e}, mu {:.16e}",
                            f.kappa,
                            f.mu.unwrap()
                        )),
                    );
                    Some(f)
                }
                _ => {
                    hyp.push(boolean_check(
                        "nullity-condition",
                        false,
                        "no strict nullity structure (kappa < -1, h' != 0)".into(),
                    ));
                    None
                }
            };
            let pot = declared_potential(m)?;
            let lfit = fit_lambda(m, &pot, seed, npts)?;
            hyp.push(
                Check::new("riemann-soliton", lfit.residual, tol)
                    .with_note(format!("fitted lambda {:.16e}", lfit.lambda)),
            );
            if id == "4.2" {
                let dr = divergence_relations(m, &pot, lfit.lambda, seed, npts)?;
                hyp.push(dr.into_iter().next().unwrap());
            }
            let hypotheses_met = hyp.iter().all(|c| c.passed);
            let mut conclusions = Vec::new();
            if hypotheses_met {
                let nf = nf.expect("nullity fit present when hypotheses met");
                if id == "4.2" {
                    // either kappa = -2 (product model) or V strict contact transformation
                    let kappa_dev = (nf.kappa + 2.0).abs();
                    let strict = match &pot {
                        Potential::Vector(v) => {
                            let ct = contact_transformation_check(m, v, seed, npts)?;
                            ct.max_orthogonal.max(ct.sigma_max_abs)
                        }
                        Potential::Gradient(_) => f64::INFINITY,
                    };
                    conclusions.push(
                        Check::new("product-model-or-strict", kappa_dev.min(strict), tol)
                            .with_note(format!(
                                "|kappa+2| {kappa_dev:.6e}, strict-contact {strict:.6e}"
                            )),
                    );
                } else {
                    let lam_expect = (6.0 * n - 2.0) / (2.0 * n - 1.0);
                    conclusions.push(Check::new(
                        "lambda-value",
                        (lfit.lambda - lam_expect).abs(),
                        1e-6,
                    )
                    .with_note(format!("expected {lam_expect:.16e}")));
                    conclusions.push(boolean_check(
                        "expanding",
                        lfit.lambda > 0.0,
                        format!("lambda {:.6e}", lfit.lambda),
                    ));
                    conclusions.push(Check::new(
                        "product-model",
                        (nf.kappa + 2.0).abs(),
                        tol,
                    ));
                }
            }
            Ok(AuditRecord {
                theorem: id.into(),
                hypotheses: hyp,
                hypotheses_met,
                conclusions,
            })
        }
        other => Err(CoreError::UnknownTheorem(other.to_string())),
    }
}

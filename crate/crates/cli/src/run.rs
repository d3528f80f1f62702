//! Check assembly: turn a manifold spec into a report for each CLI verb.

use solitonlab_core::contact::{
    almost_kenmotsu_check, h_identity_checks, kappa_mu_identity_suite, kenmotsu_identity_suite,
    nullity_fit, verify_almost_contact,
};
use solitonlab_core::soliton::{
    declared_potential, divergence_relations, fit_lambda, soliton_report, theorem_audit,
    Potential,
};
use solitonlab_core::{Check, Geometry, ManifoldSpec, Report, Result};

/// All structure suites: axioms, almost-Kenmotsu defining equations, tensor
/// identities, then the Kenmotsu or nullity suite (whichever applies).
pub fn structure_checks(m: &ManifoldSpec, seed: u64, npts: usize) -> Result<Vec<Check>> {
    if m.structure.is_none() {
        return Ok(vec![Check::skipped(
            "structure",
            "no contact structure declared",
        )]);
    }
    let mut checks = verify_almost_contact(m, seed, npts)?;
    checks.extend(almost_kenmotsu_check(m, seed, npts)?);
    checks.extend(h_identity_checks(m, seed, npts)?);
    checks.extend(kenmotsu_identity_suite(m, seed, npts)?.into_checks("kenmotsu-suite"));
    checks.extend(kappa_mu_identity_suite(m, seed, npts)?.into_checks("nullity-suite"));
    Ok(checks)
}

/// Select the potential: `--gradient` forces the scalar potential.
pub fn select_potential(m: &ManifoldSpec, gradient: bool) -> Result<Potential> {
    if gradient {
        Ok(Potential::Gradient(m.potential_fn()?.clone()))
    } else {
        declared_potential(m)
    }
}

/// Soliton evaluation: residual at a given λ or at the fitted λ, the
/// contraction-bridge identity, divergence relations, and classification.
pub fn soliton_checks(
    m: &ManifoldSpec,
    pot: &Potential,
    lambda: Option<f64>,
    seed: u64,
    npts: usize,
) -> Result<Vec<Check>> {
    let rep = soliton_report(m, pot, lambda, seed, npts)?;
    let mut checks = rep.checks.clone();
    checks.push(
        Check::new("soliton/lambda", 0.0, f64::INFINITY).with_note(format!(
            "lambda {:.16e} ({}), pointwise best lambda in [{:.6e}, {:.6e}], \
             rms residual {:.6e}, classification {:?}",
            rep.lambda,
            if rep.fitted { "fitted" } else { "given" },
            rep.pointwise_lambda.0,
            rep.pointwise_lambda.1,
            rep.rms_residual,
            rep.classification,
        )),
    );
    checks.extend(divergence_relations(m, pot, rep.lambda, seed, npts)?);
    Ok(checks)
}

/// Theorem audit as a flat check list (hypotheses prefixed, conclusions
/// skipped when hypotheses fail).
pub fn audit_checks(m: &ManifoldSpec, theorem: &str, seed: u64, npts: usize) -> Result<Vec<Check>> {
    Ok(theorem_audit(m, theorem, seed, npts)?.into_checks())
}

/// Zoo regression run: structure suites, soliton checks, and comparison of
/// measured invariants against the entry's expected values.
pub fn zoo_checks(name: &str, lambda: Option<f64>, seed: u64, npts: usize) -> Result<Report> {
    let entry = solitonlab_core::zoo::get(name)?;
    let m = &entry.spec;
    let mut checks = structure_checks(m, seed, npts)?;
    let tol = m.tol.identity;

    if m.potential_vector.is_some() || m.potential_fn.is_some() {
        let pot = declared_potential(m)?;
        checks.extend(soliton_checks(m, &pot, lambda, seed, npts)?);
        if let Some(expected) = entry.expect.lambda {
            let fit = fit_lambda(m, &pot, seed, npts)?;
            checks.push(
                Check::new("expect/lambda", (fit.lambda - expected).abs(), 1e-6)
                    .with_note(format!("fitted {:.16e}, expected {expected}", fit.lambda)),
            );
        }
    }

    if let Some(r0) = entry.expect.scalar_curvature {
        let mut dev = 0.0f64;
        for p in m.sampler(seed).points(npts) {
            dev = dev.max((Geometry::at(m, &p)?.scalar_curvature() - r0).abs());
        }
        checks.push(Check::new("expect/scalar-curvature", dev, tol));
    }
    if let Some(k0) = entry.expect.sectional {
        let mut dev = 0.0f64;
        for p in m.sampler(seed).points(npts.min(20)) {
            let geo = Geometry::at(m, &p)?;
            let frame = geo.frame()?;
            for a in 0..geo.dim() {
                for b in (a + 1)..geo.dim() {
                    dev = dev
                        .max((geo.sectional(&frame.frame[a], &frame.frame[b])? - k0).abs());
                }
            }
        }
        checks.push(Check::new("expect/sectional", dev, tol));
    }
    if let (Some((k0, mu0)), Some(_)) = (entry.expect.kappa_mu, &m.structure) {
        let fit = nullity_fit(m, seed, npts.min(20))?;
        let mut dev = (fit.kappa - k0).abs();
        if let (Some(mu0), Some(mu)) = (mu0, fit.mu) {
            dev = dev.max((mu - mu0).abs());
        }
        checks.push(Check::new("expect/kappa-mu", dev, 1e-6).with_note(format!(
            "fit kappa {:.16e}, mu {:?}",
            fit.kappa, fit.mu
        )));
    }
    Ok(Report::new(name, seed, checks))
}

/// Read a manifold file (extension-agnostic TOML).
pub fn load(path: &std::path::Path) -> Result<ManifoldSpec> {
    solitonlab_core::load_manifold(path)
}

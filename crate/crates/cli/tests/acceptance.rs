//! Acceptance suite: one test per release criterion. Each test prints a
//! single PASS line on success; a failing criterion fails its test.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solitonlab_core::contact::{
    self, h_identity_checks, kappa_mu_identity_suite, kenmotsu_identity_suite, nullity_fit,
    verify_almost_contact,
};
use solitonlab_core::soliton::{
    contracted_residual_point, declared_potential, fit_lambda, soliton_report,
    soliton_residual_point, trace_13,
};
use solitonlab_core::{parse_expression, zoo, Expr, Geometry, Jet, TensorJets};

const SEED: u64 = 42;

fn pass(n: usize, what: &str) {
    println!("[ACCEPTANCE {n}] {what}: PASS");
}

/// ∇_{e_a} w for a vector field w given as order-3 jets, with e_a numeric.
fn cov_deriv_along_vec(geo: &Geometry, x: &[f64], w: &[Jet]) -> Vec<f64> {
    let d = geo.dim();
    let mut t = TensorJets::filled(d, 1, 0, 3);
    for (k, jet) in w.iter().enumerate() {
        t.set(&[k], jet.clone());
    }
    let dt = geo.cov_deriv(&t); // layout [k][i]
    (0..d)
        .map(|k| (0..d).map(|i| dt.get(&[k, i]).v * x[i]).sum())
        .collect()
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn criterion_1_warped_chart_connection_and_curvature_tables() {
    let start = Instant::now();
    let m = zoo::example_3_6(1.0).unwrap().spec;
    let mut max_err = 0.0f64;
    for p in m.sampler(SEED).points(100) {
        let geo = Geometry::at(&m, &p).unwrap();
        let w = 0.5 * (2.0 * p[2]).exp();
        // connection table: nabla_{d_i} d_j = Gamma^k_{ij} d_k
        let mut expected = vec![vec![vec![0.0; 3]; 3]; 3]; // [i][j][k]
        expected[0][0][2] = -w; // nabla_x d_x = -w d_z
        expected[1][1][2] = -w; // nabla_y d_y = -w d_z
        expected[0][2][0] = 1.0; // nabla_x d_z = d_x
        expected[2][0][0] = 1.0;
        expected[1][2][1] = 1.0; // nabla_y d_z = d_y
        expected[2][1][1] = 1.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    max_err =
                        max_err.max((geo.gamma_jet(k, i, j).v - expected[i][j][k]).abs());
                }
            }
        }
        // curvature table: the nine listed values of R(d_i, d_j) d_k
        let id = [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ];
        let cases: [(usize, usize, usize, [f64; 3]); 9] = [
            (0, 1, 2, [0.0, 0.0, 0.0]),
            (0, 2, 1, [0.0, 0.0, 0.0]),
            (0, 2, 2, [-1.0, 0.0, 0.0]),
            (0, 1, 0, [0.0, w, 0.0]),
            (0, 1, 1, [-w, 0.0, 0.0]),
            (0, 2, 0, [0.0, 0.0, w]),
            (1, 2, 0, [0.0, 0.0, 0.0]),
            (1, 2, 1, [0.0, 0.0, w]),
            (1, 2, 2, [0.0, -1.0, 0.0]),
        ];
        for (i, j, k, want) in cases {
            let got = geo.riemann_vec(&id[i], &id[j], &id[k]);
            for c in 0..3 {
                max_err = max_err.max((got[c] - want[c]).abs());
            }
        }
        // Ricci diagonal: S(d_x,d_x) = S(d_y,d_y) = -e^{2z}, S(d_z,d_z) = -2
        let s = geo.ricci();
        max_err = max_err.max((s.get(&[0, 0]) + 2.0 * w).abs());
        max_err = max_err.max((s.get(&[1, 1]) + 2.0 * w).abs());
        max_err = max_err.max((s.get(&[2, 2]) + 2.0).abs());
    }
    assert!(max_err < 1e-9, "table error {max_err}");
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 5.0, "runtime {dt:?} exceeds 5 s");
    pass(1, "warped-chart connection/curvature/Ricci tables at 100 points");
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn criterion_2_warped_chart_soliton() {
    let m = zoo::example_3_6(1.0).unwrap().spec;
    let pot = declared_potential(&m).unwrap();
    let v_exprs = m.potential_vector.clone().unwrap();
    let mut lie_max = 0.0f64;
    let mut sect_max = 0.0f64;
    let mut div_max = 0.0f64;
    for p in m.sampler(SEED).points(100) {
        let geo = Geometry::at(&m, &p).unwrap();
        let vj = geo.vector_field(&v_exprs).unwrap();
        lie_max = lie_max.max(geo.lie_metric(&vj).max_abs());
        div_max = div_max.max(geo.divergence(&vj).abs());
        let frame = geo.frame().unwrap();
        for a in 0..3 {
            for b in (a + 1)..3 {
                let k = geo.sectional(&frame.frame[a], &frame.frame[b]).unwrap();
                sect_max = sect_max.max((k + 1.0).abs());
            }
        }
    }
    assert!(lie_max < 1e-9, "lie_vg {lie_max}");
    assert!(sect_max < 1e-8, "sectional {sect_max}");
    // div V = 0 = 2n(1-lambda) at lambda = 1
    assert!(div_max < 1e-9, "div V {div_max}");
    let rep = soliton_report(&m, &pot, Some(1.0), SEED, 100).unwrap();
    assert!(rep.max_residual < 1e-8, "residual {}", rep.max_residual);
    let fit = fit_lambda(&m, &pot, SEED, 100).unwrap();
    assert!((fit.lambda - 1.0).abs() < 1e-8, "fit {}", fit.lambda);
    pass(2, "warped-chart soliton: Killing potential, residual, fitted constant 1");
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn criterion_3_frame_chart_tables_and_soliton() {
    let m = zoo::example_4_5().spec;
    let frame_exprs: Vec<Vec<Expr>> = match &m.metric {
        solitonlab_core::MetricSource::Frame(f) => f.clone(),
        _ => unreachable!(),
    };
    let mut max_err = 0.0f64;
    for p in m.sampler(SEED).points(100) {
        let geo = Geometry::at(&m, &p).unwrap();
        let e: Vec<Vec<Jet>> = frame_exprs
            .iter()
            .map(|f| geo.vector_field(f).unwrap())
            .collect();
        let ev: Vec<Vec<f64>> = e
            .iter()
            .map(|f| f.iter().map(|j| j.v).collect())
            .collect();
        let comp = |w: &[f64], b: usize| geo.inner(w, &ev[b]);
        // bracket table: [e1,e2] = -2 e2, others vanish
        let br12 = geo.lie_bracket(&e[0], &e[1]);
        let br13 = geo.lie_bracket(&e[0], &e[2]);
        let br23 = geo.lie_bracket(&e[1], &e[2]);
        for b in 0..3 {
            let want = if b == 1 { -2.0 } else { 0.0 };
            max_err = max_err.max((comp(&br12, b) - want).abs());
            max_err = max_err.max(comp(&br13, b).abs());
            max_err = max_err.max(comp(&br23, b).abs());
        }
        // connection table: nabla_{e2}e1 = 2e2, nabla_{e2}e2 = -2e1, rest 0
        for a in 0..3 {
            for bb in 0..3 {
                let got = cov_deriv_along_vec(&geo, &ev[a], &e[bb]);
                for c in 0..3 {
                    let want = match (a, bb, c) {
                        (1, 0, 1) => 2.0,
                        (1, 1, 0) => -2.0,
                        _ => 0.0,
                    };
                    max_err = max_err.max((comp(&got, c) - want).abs());
                }
            }
        }
        // curvature table: R(e1,e2)e1 = 4e2, R(e1,e2)e2 = -4e1, rest 0
        for a in 0..3 {
            for bb in (a + 1)..3 {
                for cc in 0..3 {
                    let got = geo.riemann_vec(&ev[a], &ev[bb], &ev[cc]);
                    for c in 0..3 {
                        let want = match (a, bb, cc, c) {
                            (0, 1, 0, 1) => 4.0,
                            (0, 1, 1, 0) => -4.0,
                            _ => 0.0,
                        };
                        max_err = max_err.max((comp(&got, c) - want).abs());
                    }
                }
            }
        }
        // h' action: h'e1 = 0, h'e2 = e2, h'e3 = -e3
        let st = contact::StructureAt::new(&geo).unwrap();
        let ht = st.h_tensors();
        for a in 0..3 {
            let mut hpe = vec![0.0; 3];
            for i in 0..3 {
                for j in 0..3 {
                    hpe[i] += ht.hp.get(&[i, j]).v * ev[a][j];
                }
            }
            for c in 0..3 {
                let want = match (a, c) {
                    (1, 1) => 1.0,
                    (2, 2) => -1.0,
                    _ => 0.0,
                };
                max_err = max_err.max((comp(&hpe, c) - want).abs());
            }
        }
        // Lie-derivative table: (lie_V g)(e3,e3) = -8, all other entries 0
        let vj = geo.vector_field(m.potential_vector.as_ref().unwrap()).unwrap();
        let lg = geo.lie_metric(&vj);
        for a in 0..3 {
            for b in 0..3 {
                let mut s = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        s += lg.get(&[i, j]) * ev[a][i] * ev[b][j];
                    }
                }
                let want = if (a, b) == (2, 2) { -8.0 } else { 0.0 };
                max_err = max_err.max((s - want).abs());
            }
        }
        // scalar curvature r = -8
        max_err = max_err.max((geo.scalar_curvature() + 8.0).abs());
    }
    assert!(max_err < 1e-9, "table error {max_err}");
    let nf = nullity_fit(&m, SEED, 20).unwrap();
    assert!((nf.kappa + 2.0).abs() < 1e-8, "kappa {}", nf.kappa);
    assert!((nf.mu.unwrap() + 2.0).abs() < 1e-8, "mu {:?}", nf.mu);
    let pot = declared_potential(&m).unwrap();
    let rep = soliton_report(&m, &pot, Some(4.0), SEED, 100).unwrap();
    assert!(rep.max_residual < 1e-8, "residual {}", rep.max_residual);
    // 2n lambda + div V + 2n kappa = 0 with n = 1
    let relation = 2.0 * 4.0 + rep.divergence.0 + 2.0 * nf.kappa;
    assert!(relation.abs() < 1e-9, "divergence relation {relation}");
    // fitted lambda matches (6n-2)/(2n-1) = 4 at n = 1
    let fit = fit_lambda(&m, &pot, SEED, 100).unwrap();
    assert!((fit.lambda - 4.0).abs() < 1e-8, "fit {}", fit.lambda);
    pass(3, "frame-chart bracket/connection/curvature/h'/Lie tables and soliton constant 4");
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn criterion_4_identity_suites_across_zoo() {
    for z in zoo::entries() {
        let m = &z.spec;
        if m.structure.is_none() {
            continue;
        }
        let mut checks = verify_almost_contact(m, SEED, 40).unwrap();
        checks.extend(contact::almost_kenmotsu_check(m, SEED, 40).unwrap());
        checks.extend(h_identity_checks(m, SEED, 40).unwrap());
        let ken = kenmotsu_identity_suite(m, SEED, 40).unwrap();
        let nul = kappa_mu_identity_suite(m, SEED, 40).unwrap();
        match z.expect.kenmotsu {
            Some(true) => assert!(ken.skipped.is_none(), "{}: kenmotsu suite skipped", z.name),
            Some(false) => {
                assert!(ken.skipped.is_some(), "{}: kenmotsu suite should skip", z.name);
                assert!(nul.skipped.is_none(), "{}: nullity suite skipped", z.name);
            }
            None => {}
        }
        checks.extend(ken.into_checks("kenmotsu-suite"));
        checks.extend(nul.into_checks("nullity-suite"));
        for c in checks {
            assert!(c.passed, "{}: {} residual {}", z.name, c.name, c.residual);
        }
    }
    pass(4, "structure and curvature identity suites on every zoo entry");
}

// ---------------------------------------------------------------- criterion 5

fn random_potential(rng: &mut ChaCha8Rng, coords: &[String]) -> Vec<Expr> {
    coords
        .iter()
        .map(|_| {
            let mut terms: Vec<String> = Vec::new();
            for c in coords {
                let a: f64 = rng.gen_range(-1.0..1.0);
                terms.push(format!("({a:.3})*{c}"));
            }
            let c = &coords[rng.gen_range(0..coords.len())];
            match rng.gen_range(0..3) {
                0 => terms.push(format!("({:.3})*sin({c})", rng.gen_range(-1.0..1.0f64))),
                1 => terms.push(format!("({:.3})*exp(0.3*{c})", rng.gen_range(-1.0..1.0f64))),
                _ => terms.push(format!("({:.3})*{c}^2", rng.gen_range(-1.0..1.0f64))),
            }
            parse_expression(&terms.join("+"), coords).unwrap()
        })
        .collect()
}

#[test]
fn criterion_5_commutation_formula_cross_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for z in zoo::entries() {
        let m = &z.spec;
        for _ in 0..10 {
            let v = random_potential(&mut rng, &m.coords);
            for p in m.sampler(SEED).points(4) {
                let geo = Geometry::at(m, &p).unwrap();
                let vj = geo.vector_field(&v).unwrap();
                // Lie derivative of the connection: identity path vs Leibniz path
                let a = geo.lie_connection_via_formula(&vj).values();
                let b = geo.lie_connection_direct(&vj).values();
                let d_conn = a.sub(&b).max_abs();
                assert!(d_conn < 1e-8, "{}: lie-connection {}", z.name, d_conn);
                // Lie derivative of the curvature: same comparison
                let a = geo.lie_curvature_via_formula(&vj);
                let b = geo.lie_curvature_direct(&vj);
                let d_curv = a.sub(&b).max_abs();
                assert!(d_curv < 1e-8, "{}: lie-curvature {}", z.name, d_curv);
            }
        }
    }
    pass(5, "dual-path Lie-derivative agreement for 10 random potentials per entry");
}

// ---------------------------------------------------------------- criterion 6

#[test]
fn criterion_6_contraction_bridge() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for z in zoo::entries() {
        let m = &z.spec;
        let n = (m.dim / 2) as f64;
        for _ in 0..3 {
            let v = random_potential(&mut rng, &m.coords);
            let lambda: f64 = rng.gen_range(-3.0..3.0);
            for p in m.sampler(SEED).points(5) {
                let geo = Geometry::at(m, &p).unwrap();
                let vj = geo.vector_field(&v).unwrap();
                let t = soliton_residual_point(&geo, &vj, lambda).unwrap();
                let lhs = trace_13(&geo, &t);
                let rhs = contracted_residual_point(&geo, &vj, lambda)
                    .unwrap()
                    .scale(2.0 * n - 1.0);
                let dev = lhs.sub(&rhs).max_abs();
                assert!(dev < 1e-9, "{}: bridge {}", z.name, dev);
            }
        }
    }
    pass(6, "contracted-equation bridge with random potentials and constants");
}

// ---------------------------------------------------------------- criterion 7

/// Two-level Richardson extrapolation of the O(h²) central-difference
/// estimate, cancelling the h² and h⁴ error terms.
fn fd_richardson(f: &dyn Fn(&[f64]) -> f64, p: &[f64], idx: &[usize], h: f64) -> f64 {
    let d = |h: f64| fd_central(f, p, idx, h);
    let (d0, d1, d2) = (d(h), d(h / 2.0), d(h / 4.0));
    let (r0, r1) = ((4.0 * d1 - d0) / 3.0, (4.0 * d2 - d1) / 3.0);
    (16.0 * r1 - r0) / 15.0
}

/// Nested central differences: one index per differentiation.
fn fd_central(f: &dyn Fn(&[f64]) -> f64, p: &[f64], idx: &[usize], h: f64) -> f64 {
    match idx {
        [] => f(p),
        [i, rest @ ..] => {
            let mut a = p.to_vec();
            let mut b = p.to_vec();
            a[*i] += h;
            b[*i] -= h;
            (fd_central(f, &a, rest, h) - fd_central(f, &b, rest, h)) / (2.0 * h)
        }
    }
}

#[test]
fn criterion_7_jets_vs_finite_differences() {
    let coords: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    let exprs = [
        "x^2*y+z",
        "sin(x)*cos(y)+z^3",
        "exp(0.5*x+0.2*y*z)",
        "1/(2+sin(z))+x*y*z",
        "sqrt(4+x^2+y^2)",
        "tanh(x)+sinh(0.3*y)*cosh(0.2*z)",
        "log(3+x+0.5*y^2)",
        "x^3-2*x*y^2+0.25*z^4",
        "cos(x*y)+sin(y*z)",
        "(1+x^2)^1.5+z*y",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut cases = 0usize;
    for text in exprs {
        let e = parse_expression(text, &coords).unwrap();
        let f = |p: &[f64]| e.eval(p, 0, 1e-12).unwrap().v;
        for _ in 0..10 {
            let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.8..0.8)).collect();
            let jet = e.eval(&p, 3, 1e-12).unwrap();
            // first derivatives
            for i in 0..3 {
                let fd = fd_richardson(&f, &p, &[i], 1e-2);
                let an = jet.g1(i);
                assert!(
                    (an - fd).abs() <= 1e-6 * (1.0 + an.abs()),
                    "{text} d{i}: jet {an} fd {fd}"
                );
                cases += 1;
            }
            // second derivatives (all pairs)
            for i in 0..3 {
                for j in i..3 {
                    let fd = fd_richardson(&f, &p, &[i, j], 2e-2);
                    let an = jet.g2(i, j);
                    assert!(
                        (an - fd).abs() <= 1e-6 * (1.0 + an.abs()),
                        "{text} d{i}{j}: jet {an} fd {fd}"
                    );
                    // mixed-partial symmetry must be exact (bitwise)
                    assert_eq!(jet.g2(i, j).to_bits(), jet.g2(j, i).to_bits());
                    cases += 1;
                }
            }
            // third derivatives (representative triples)
            for (i, j, k) in [(0, 0, 0), (0, 1, 2), (1, 1, 2), (2, 2, 2)] {
                let fd = fd_richardson(&f, &p, &[i, j, k], 8e-2);
                let an = jet.g3(i, j, k);
                assert!(
                    (an - fd).abs() <= 1e-6 * (1.0 + an.abs()),
                    "{text} d{i}{j}{k}: jet {an} fd {fd}"
                );
                assert_eq!(jet.g3(i, j, k).to_bits(), jet.g3(k, j, i).to_bits());
                cases += 1;
            }
        }
    }
    assert!(cases >= 1000, "only {cases} comparisons");
    pass(7, "jet derivatives vs Richardson finite differences (>= 1000 cases)");
}

// ---------------------------------------------------------------- criterion 8

#[test]
fn criterion_8_cli_end_to_end() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_solitonlab");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .expect("binary must run")
    };
    let out = run(&["zoo", "run", "example-3-6"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(out.status.success(), "example-3-6 failed:\n{text}");
    assert!(
        text.contains("lambda 1.0000000000000000e0 (fitted)"),
        "missing fitted constant 1:\n{text}"
    );
    let out = run(&["zoo", "run", "example-4-5"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(out.status.success(), "example-4-5 failed:\n{text}");
    assert!(
        text.contains("e0 (fitted)") && text.contains("expected 4"),
        "missing fitted constant 4:\n{text}"
    );
    let out = run(&["zoo", "run", "example-3-6", "--lambda", "0"]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "negative control must exit 1:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 60.0, "runtime {dt:?} exceeds 60 s");
    pass(8, "CLI zoo runs pass, negative control fails, within budget");
}

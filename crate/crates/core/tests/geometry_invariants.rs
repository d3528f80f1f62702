//! Coordinate-free invariants that must hold on every declared chart:
//! metric compatibility, Bianchi identities, and the algebraic symmetries of
//! the (0,4) curvature tensor.

use solitonlab_core::{zoo, Geometry, TensorJets};

fn points_for(dim: usize) -> usize {
    if dim <= 3 {
        100
    } else {
        25
    }
}

#[test]
fn metric_compatibility() {
    for z in zoo::entries() {
        let m = &z.spec;
        let d = m.dim;
        for p in m.sampler(11).points(points_for(d)) {
            let geo = Geometry::at(m, &p).unwrap();
            let mut gt = TensorJets::filled(d, 0, 2, 3);
            for i in 0..d {
                for j in 0..d {
                    gt.set(&[i, j], geo.g[i * d + j].clone());
                }
            }
            let nabla_g = geo.cov_deriv(&gt).values();
            assert!(
                nabla_g.max_abs() < 1e-9,
                "{}: |nabla g| = {}",
                z.name,
                nabla_g.max_abs()
            );
        }
    }
}

#[test]
fn first_bianchi_identity() {
    for z in zoo::entries() {
        let m = &z.spec;
        let d = m.dim;
        for p in m.sampler(12).points(points_for(d)) {
            let geo = Geometry::at(m, &p).unwrap();
            let mut max = 0.0f64;
            for l in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            let cyc = geo.riem_jet(l, i, j, k).v
                                + geo.riem_jet(l, j, k, i).v
                                + geo.riem_jet(l, k, i, j).v;
                            max = max.max(cyc.abs());
                        }
                    }
                }
            }
            assert!(max < 1e-8, "{}: first Bianchi {}", z.name, max);
        }
    }
}

#[test]
fn second_bianchi_identity() {
    for z in zoo::entries() {
        let m = &z.spec;
        let d = m.dim;
        for p in m.sampler(13).points(points_for(d).min(40)) {
            let geo = Geometry::at(m, &p).unwrap();
            let mut rt = TensorJets::filled(d, 1, 3, 1);
            for l in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            rt.set(&[l, i, j, k], geo.riem_jet(l, i, j, k).clone());
                        }
                    }
                }
            }
            // layout after cov_deriv: [l][m][i][j][k] with m the new index
            let dr = geo.cov_deriv(&rt).values();
            let mut max = 0.0f64;
            for l in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            for mm in 0..d {
                                let cyc = dr.get(&[l, mm, i, j, k])
                                    + dr.get(&[l, i, j, mm, k])
                                    + dr.get(&[l, j, mm, i, k]);
                                max = max.max(cyc.abs());
                            }
                        }
                    }
                }
            }
            assert!(max < 1e-8, "{}: second Bianchi {}", z.name, max);
        }
    }
}

#[test]
fn curvature_04_symmetries() {
    for z in zoo::entries() {
        let m = &z.spec;
        let d = m.dim;
        for p in m.sampler(14).points(points_for(d)) {
            let geo = Geometry::at(m, &p).unwrap();
            let r4 = geo.riemann_04_full();
            let mut max = 0.0f64;
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        for l in 0..d {
                            let v = r4.get(&[i, j, k, l]);
                            // antisymmetry in the first pair
                            max = max.max((v + r4.get(&[j, i, k, l])).abs());
                            // antisymmetry in the second pair
                            max = max.max((v + r4.get(&[i, j, l, k])).abs());
                            // pair-interchange symmetry
                            max = max.max((v - r4.get(&[k, l, i, j])).abs());
                        }
                    }
                }
            }
            assert!(max < 1e-9, "{}: R4 symmetry {}", z.name, max);
        }
    }
}

#[test]
fn ricci_symmetric_and_traces_consistent() {
    for z in zoo::entries() {
        let m = &z.spec;
        let d = m.dim;
        for p in m.sampler(15).points(points_for(d)) {
            let geo = Geometry::at(m, &p).unwrap();
            let s = geo.ricci();
            let mut max = 0.0f64;
            for i in 0..d {
                for j in 0..d {
                    max = max.max((s.get(&[i, j]) - s.get(&[j, i])).abs());
                }
            }
            assert!(max < 1e-9, "{}: Ricci asymmetry {}", z.name, max);
            // scalar curvature equals the g-trace of the Ricci operator
            let q = geo.ricci_operator();
            let tr: f64 = (0..d).map(|i| q.get(&[i, i])).sum();
            assert!(
                (tr - geo.scalar_curvature()).abs() < 1e-9,
                "{}: trace mismatch",
                z.name
            );
        }
    }
}

//! Built-in reference manifolds with expected invariants: the regression
//! corpus for the verification suites.

use crate::error::{CoreError, Result};
use crate::expr::{parse_expression, Expr};
use crate::manifold::{ManifoldSpec, MetricSource, StructureFields, Tolerances};
use crate::sample::Interval;

/// Expected invariant values for a zoo entry; `None` means not applicable.
#[derive(Clone, Debug, Default)]
pub struct Expected {
    /// Soliton constant for the declared potential.
    pub lambda: Option<f64>,
    pub scalar_curvature: Option<f64>,
    /// Constant sectional curvature across all planes.
    pub sectional: Option<f64>,
    /// Nullity constants (κ, μ); μ `None` when undetermined (h′ = 0).
    pub kappa_mu: Option<(f64, Option<f64>)>,
    pub div_v: Option<f64>,
    /// Einstein constant c with S = c·g.
    pub einstein: Option<f64>,
    /// Expected frame components of £_Vg (declared frame in frame mode).
    pub lie_g_frame: Option<Vec<Vec<f64>>>,
    /// Whether the entry carries a Kenmotsu structure.
    pub kenmotsu: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub name: String,
    /// Human description of the construction.
    pub note: &'static str,
    pub spec: ManifoldSpec,
    pub expect: Expected,
}

fn ex(text: &str, coords: &[String]) -> Expr {
    parse_expression(text, coords).expect("built-in expression must parse")
}

/// Warped rotationally-symmetric chart: g = ½e^{2z}(dx²+dy²) + dz² with the
/// contact structure φ∂x = ∂y, φ∂y = −∂x, ξ = ∂z, η = dz and rotational
/// potential V = a(y∂x − x∂y). The parameter a must be nonzero.
pub fn example_3_6(a: f64) -> Result<ZooEntry> {
    if a == 0.0 {
        return Err(CoreError::Invariant(
            "example-3-6 requires a nonzero rotation constant a".into(),
        ));
    }
    let coords: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    let e = |t: &str| ex(t, &coords);
    let spec = ManifoldSpec {
        name: "example-3-6".into(),
        dim: 3,
        coords: coords.clone(),
        metric: MetricSource::Components(vec![
            vec![e("0.5*exp(2*z)"), e("0"), e("0")],
            vec![e("0"), e("0.5*exp(2*z)"), e("0")],
            vec![e("0"), e("0"), e("1")],
        ]),
        structure: Some(StructureFields {
            // columns: φ(∂x) = ∂y, φ(∂y) = −∂x, φ(∂z) = 0
            phi: vec![
                vec![e("0"), e("-1"), e("0")],
                vec![e("1"), e("0"), e("0")],
                vec![e("0"), e("0"), e("0")],
            ],
            xi: vec![e("0"), e("0"), e("1")],
            eta: vec![e("0"), e("0"), e("1")],
        }),
        potential_vector: Some(vec![
            ex(&format!("({a})*y"), &coords),
            ex(&format!("-({a})*x"), &coords),
            e("0"),
        ]),
        potential_fn: None,
        domain: vec![
            Interval::new(-2.0, 2.0),
            Interval::new(-2.0, 2.0),
            Interval::new(0.1, 2.0),
        ],
        tol: Tolerances::default(),
    };
    Ok(ZooEntry {
        name: "example-3-6".into(),
        note: "warped chart of constant curvature -1 with a Killing rotational potential",
        spec,
        expect: Expected {
            lambda: Some(1.0),
            scalar_curvature: Some(-6.0),
            sectional: Some(-1.0),
            kappa_mu: Some((-1.0, None)),
            div_v: Some(0.0),
            einstein: Some(-2.0),
            lie_g_frame: Some(vec![vec![0.0; 3]; 3]),
            kenmotsu: Some(true),
        },
    })
}

/// Frame-mode chart with frame e1 = −∂x + 2y∂y − ∂z, e2 = ∂y, e3 = ∂z
/// declared orthonormal; structure φe1 = 0, φe2 = e3, φe3 = −e2, ξ = e1;
/// potential V = e^{−2x}∂y + 4(x−z)∂z.
pub fn example_4_5() -> ZooEntry {
    let coords: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    let e = |t: &str| ex(t, &coords);
    let mut lie = vec![vec![0.0; 3]; 3];
    lie[2][2] = -8.0;
    let spec = ManifoldSpec {
        name: "example-4-5".into(),
        dim: 3,
        coords: coords.clone(),
        metric: MetricSource::Frame(vec![
            vec![e("-1"), e("2*y"), e("-1")],
            vec![e("0"), e("1"), e("0")],
            vec![e("0"), e("0"), e("1")],
        ]),
        structure: Some(StructureFields {
            // columns: φ(∂x) = (0,1,2y), φ(∂y) = (0,0,1), φ(∂z) = (0,−1,0)
            phi: vec![
                vec![e("0"), e("0"), e("0")],
                vec![e("1"), e("0"), e("-1")],
                vec![e("2*y"), e("1"), e("0")],
            ],
            xi: vec![e("-1"), e("2*y"), e("-1")],
            eta: vec![e("-1"), e("0"), e("0")],
        }),
        potential_vector: Some(vec![e("0"), e("exp(-2*x)"), e("4*(x-z)")]),
        potential_fn: None,
        domain: vec![
            Interval::new(-1.0, 1.0),
            Interval::new(-1.0, 1.0),
            Interval::new(0.1, 1.0),
        ],
        tol: Tolerances::default(),
    };
    ZooEntry {
        name: "example-4-5".into(),
        note: "non-Kenmotsu nullity chart with kappa = mu = -2",
        spec,
        expect: Expected {
            lambda: Some(4.0),
            scalar_curvature: Some(-8.0),
            sectional: None,
            kappa_mu: Some((-2.0, Some(-2.0))),
            div_v: Some(-4.0),
            einstein: None,
            lie_g_frame: Some(lie),
            kenmotsu: Some(false),
        },
    }
}

/// Hyperbolic space H^{2n+1} of curvature −1 as the warped chart
/// g = dt² + e^{2t}·(flat metric on 2n fiber coordinates), with the standard
/// complex structure on the fiber; trivial soliton (V = 0) at λ = 1.
pub fn hyperbolic(n: usize) -> Result<ZooEntry> {
    let dim = 2 * n + 1;
    if n == 0 || dim > 7 {
        return Err(CoreError::Invariant(format!(
            "hyperbolic entry requires 1 <= n <= 3, got n = {n}"
        )));
    }
    let mut coords: Vec<String> = vec!["t".into()];
    for i in 1..=n {
        coords.push(format!("x{i}"));
        coords.push(format!("y{i}"));
    }
    let e = |t: &str| ex(t, &coords);
    let mut gij = vec![vec![e("0"); dim]; dim];
    gij[0][0] = e("1");
    for i in 1..dim {
        gij[i][i] = e("exp(2*t)");
    }
    // φ(∂xi) = ∂yi, φ(∂yi) = −∂xi, φ(∂t) = 0
    let mut phi = vec![vec![e("0"); dim]; dim];
    for i in 0..n {
        let (xi_col, yi_col) = (1 + 2 * i, 2 + 2 * i);
        phi[yi_col][xi_col] = e("1");
        phi[xi_col][yi_col] = e("-1");
    }
    let mut xi = vec![e("0"); dim];
    xi[0] = e("1");
    let mut eta = vec![e("0"); dim];
    eta[0] = e("1");
    let mut domain = vec![Interval::new(0.0, 1.0)];
    for _ in 1..dim {
        domain.push(Interval::new(-1.0, 1.0));
    }
    let spec = ManifoldSpec {
        name: format!("hyperbolic-{dim}"),
        dim,
        coords,
        metric: MetricSource::Components(gij),
        structure: Some(StructureFields { phi, xi, eta }),
        potential_vector: Some(vec![Expr::num(0.0); dim]),
        potential_fn: None,
        domain,
        tol: Tolerances::default(),
    };
    Ok(ZooEntry {
        name: format!("hyperbolic-{dim}"),
        note: "hyperbolic space of curvature -1 as an exponentially warped chart; trivial soliton",
        spec,
        expect: Expected {
            lambda: Some(1.0),
            scalar_curvature: Some(-(dim as f64) * (dim as f64 - 1.0)),
            sectional: Some(-1.0),
            kappa_mu: Some((-1.0, None)),
            div_v: Some(0.0),
            einstein: Some(-2.0 * n as f64),
            lie_g_frame: Some(vec![vec![0.0; dim]; dim]),
            kenmotsu: Some(true),
        },
    })
}

/// Riemannian product H²(−4) × R: g = dt² + e^{4t}dx² + dy². Carries no
/// contact structure; exercises product curvature (mixed planes flat).
pub fn product_h2xr() -> ZooEntry {
    let coords: Vec<String> = vec!["t".into(), "x".into(), "y".into()];
    let e = |t: &str| ex(t, &coords);
    let spec = ManifoldSpec {
        name: "product-h2xr".into(),
        dim: 3,
        coords: coords.clone(),
        metric: MetricSource::Components(vec![
            vec![e("1"), e("0"), e("0")],
            vec![e("0"), e("exp(4*t)"), e("0")],
            vec![e("0"), e("0"), e("1")],
        ]),
        structure: None,
        potential_vector: None,
        potential_fn: None,
        domain: vec![
            Interval::new(0.0, 1.0),
            Interval::new(-1.0, 1.0),
            Interval::new(-1.0, 1.0),
        ],
        tol: Tolerances::default(),
    };
    ZooEntry {
        name: "product-h2xr".into(),
        note: "product of a curvature -4 hyperbolic plane with a flat line",
        spec,
        expect: Expected {
            scalar_curvature: Some(-8.0),
            ..Expected::default()
        },
    }
}

/// All built-in entries, in stable order.
pub fn entries() -> Vec<ZooEntry> {
    vec![
        example_3_6(1.0).unwrap(),
        example_4_5(),
        hyperbolic(1).unwrap(),
        hyperbolic(2).unwrap(),
        product_h2xr(),
    ]
}

pub fn names() -> Vec<String> {
    entries().into_iter().map(|z| z.name).collect()
}

pub fn get(name: &str) -> Result<ZooEntry> {
    entries()
        .into_iter()
        .find(|z| z.name == name)
        .ok_or_else(|| CoreError::UnknownZooEntry(name.to_string()))
}

//! TOML manifold files: load, validate, and save chart declarations.
//!
//! Layout:
//!
//! ```toml
//! [manifold]
//! name = "example"
//! dimension = 3
//! coordinates = ["x", "y", "z"]
//!
//! [metric.g.x]          # coordinate mode: g.<i>.<j> = "expr"
//! x = "0.5*exp(2*z)"    # symmetric closure: g.y.x defaults to g.x.y;
//!                       # if both appear they must agree
//! [frame]               # or frame mode: e1..ed declared orthonormal
//! e1 = ["-1", "2*y", "-1"]
//!
//! [structure.phi]       # optional phi columns: phi.<j> = phi(d/d<j>)
//! x = ["0", "1", "2*y"]
//! [structure]
//! xi  = ["-1", "2*y", "-1"]
//! eta = ["-1", "0", "0"]
//!
//! [potential]
//! vector = ["0", "exp(-2*x)", "4*(x-z)"]   # or: function = "expr"
//!
//! [domain]
//! x = [-1.0, 1.0]
//!
//! [tolerances]          # optional overrides
//! identity = 1e-8
//! ```

use std::path::Path;

use toml::Value;

use crate::error::{CoreError, Result};
use crate::expr::{parse_expression, Expr};
use crate::manifold::{ManifoldSpec, MetricSource, StructureFields, Tolerances};
use crate::sample::Interval;

fn file_err(msg: impl Into<String>) -> CoreError {
    CoreError::ManifoldFile(msg.into())
}

fn table<'a>(v: &'a Value, what: &str) -> Result<&'a toml::Table> {
    v.as_table()
        .ok_or_else(|| file_err(format!("{what} must be a table")))
}

fn str_of<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| file_err(format!("{what} must be a string")))
}

fn expr_of(v: &Value, what: &str, coords: &[String]) -> Result<Expr> {
    parse_expression(str_of(v, what)?, coords)
        .map_err(|e| file_err(format!("{what}: {e}")))
}

fn expr_list(v: &Value, what: &str, coords: &[String], dim: usize) -> Result<Vec<Expr>> {
    let arr = v
        .as_array()
        .ok_or_else(|| file_err(format!("{what} must be an array of {dim} expressions")))?;
    if arr.len() != dim {
        return Err(file_err(format!(
            "{what} must have {dim} entries, got {}",
            arr.len()
        )));
    }
    arr.iter()
        .enumerate()
        .map(|(i, e)| expr_of(e, &format!("{what}[{i}]"), coords))
        .collect()
}

/// Parse a manifold file from TOML text and validate it at 10 probe points.
pub fn parse_manifold(text: &str) -> Result<ManifoldSpec> {
    let doc: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| file_err(format!("TOML syntax: {e}")))?;

    let man = table(
        doc.get("manifold")
            .ok_or_else(|| file_err("missing [manifold] section"))?,
        "[manifold]",
    )?;
    let name = str_of(
        man.get("name").ok_or_else(|| file_err("missing manifold.name"))?,
        "manifold.name",
    )?
    .to_string();
    let dim = man
        .get("dimension")
        .and_then(Value::as_integer)
        .ok_or_else(|| file_err("missing integer manifold.dimension"))? as usize;
    let coords: Vec<String> = man
        .get("coordinates")
        .and_then(Value::as_array)
        .ok_or_else(|| file_err("missing array manifold.coordinates"))?
        .iter()
        .map(|v| str_of(v, "coordinate name").map(str::to_string))
        .collect::<Result<_>>()?;
    if coords.len() != dim {
        return Err(file_err(format!(
            "dimension {dim} does not match {} coordinates",
            coords.len()
        )));
    }

    let metric = match (doc.get("metric"), doc.get("frame")) {
        (Some(_), Some(_)) => {
            return Err(file_err("declare either [metric] or [frame], not both"))
        }
        (Some(mt), None) => {
            let g = table(
                table(mt, "[metric]")?
                    .get("g")
                    .ok_or_else(|| file_err("missing metric.g table"))?,
                "metric.g",
            )?;
            MetricSource::Components(read_metric_table(g, &coords)?)
        }
        (None, Some(fr)) => MetricSource::Frame(read_frame_table(table(fr, "[frame]")?, &coords)?),
        (None, None) => return Err(file_err("missing [metric] or [frame] section")),
    };

    let structure = match doc.get("structure") {
        None => None,
        Some(st) => {
            let st = table(st, "[structure]")?;
            let phi_tbl = table(
                st.get("phi")
                    .ok_or_else(|| file_err("missing structure.phi"))?,
                "structure.phi",
            )?;
            // phi stored as phi[i][j] = component i of phi(d/dj); file gives columns
            let mut phi = vec![vec![Expr::num(0.0); dim]; dim];
            for (j, cj) in coords.iter().enumerate() {
                let col = phi_tbl
                    .get(cj)
                    .ok_or_else(|| file_err(format!("missing structure.phi.{cj}")))?;
                let col = expr_list(col, &format!("structure.phi.{cj}"), &coords, dim)?;
                for (i, e) in col.into_iter().enumerate() {
                    phi[i][j] = e;
                }
            }
            let xi = expr_list(
                st.get("xi").ok_or_else(|| file_err("missing structure.xi"))?,
                "structure.xi",
                &coords,
                dim,
            )?;
            let eta = expr_list(
                st.get("eta").ok_or_else(|| file_err("missing structure.eta"))?,
                "structure.eta",
                &coords,
                dim,
            )?;
            Some(StructureFields { phi, xi, eta })
        }
    };

    let (potential_vector, potential_fn) = match doc.get("potential") {
        None => (None, None),
        Some(pt) => {
            let pt = table(pt, "[potential]")?;
            let v = pt
                .get("vector")
                .map(|v| expr_list(v, "potential.vector", &coords, dim))
                .transpose()?;
            let u = pt
                .get("function")
                .map(|v| expr_of(v, "potential.function", &coords))
                .transpose()?;
            (v, u)
        }
    };

    let dom_tbl = table(
        doc.get("domain")
            .ok_or_else(|| file_err("missing [domain] section"))?,
        "[domain]",
    )?;
    let mut domain = Vec::with_capacity(dim);
    for c in &coords {
        let pair = dom_tbl
            .get(c)
            .and_then(Value::as_array)
            .ok_or_else(|| file_err(format!("missing domain.{c} = [lo, hi]")))?;
        let lo = pair.first().and_then(Value::as_float);
        let hi = pair.get(1).and_then(Value::as_float);
        match (pair.len(), lo, hi) {
            (2, Some(lo), Some(hi)) if lo < hi => domain.push(Interval::new(lo, hi)),
            _ => {
                return Err(file_err(format!(
                    "domain.{c} must be [lo, hi] floats with lo < hi"
                )))
            }
        }
    }

    let mut tol = Tolerances::default();
    if let Some(tt) = doc.get("tolerances") {
        let tt = table(tt, "[tolerances]")?;
        for (key, v) in tt {
            let f = v
                .as_float()
                .ok_or_else(|| file_err(format!("tolerances.{key} must be a float")))?;
            if !(f.is_finite() && f > 0.0) {
                return Err(file_err(format!("tolerances.{key} must be positive")));
            }
            match key.as_str() {
                "identity" => tol.identity = f,
                "exact" => tol.exact = f,
                "eps_div" => tol.eps_div = f,
                "eps_pd" => tol.eps_pd = f,
                other => {
                    return Err(file_err(format!("unknown tolerances key: {other}")))
                }
            }
        }
    }

    let spec = ManifoldSpec {
        name,
        dim,
        coords,
        metric,
        structure,
        potential_vector,
        potential_fn,
        domain,
        tol,
    };
    spec.validate(10)?;
    Ok(spec)
}

fn read_metric_table(g: &toml::Table, coords: &[String]) -> Result<Vec<Vec<Expr>>> {
    let dim = coords.len();
    // collect declared entries first so symmetric closure can detect conflicts
    let mut declared: Vec<Vec<Option<Expr>>> = vec![vec![None; dim]; dim];
    for (ci, row) in g {
        let i = coords
            .iter()
            .position(|c| c == ci)
            .ok_or_else(|| file_err(format!("metric.g.{ci}: unknown coordinate")))?;
        for (cj, cell) in table(row, &format!("metric.g.{ci}"))? {
            let j = coords
                .iter()
                .position(|c| c == cj)
                .ok_or_else(|| file_err(format!("metric.g.{ci}.{cj}: unknown coordinate")))?;
            declared[i][j] = Some(expr_of(cell, &format!("metric.g.{ci}.{cj}"), coords)?);
        }
    }
    let mut out = vec![vec![Expr::num(0.0); dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            match (&declared[i][j], &declared[j][i]) {
                (Some(a), Some(b)) if i != j => {
                    if format!("{a}") != format!("{b}") {
                        return Err(file_err(format!(
                            "metric.g.{0}.{1} and metric.g.{1}.{0} disagree: \
                             \"{a}\" vs \"{b}\"",
                            coords[i], coords[j]
                        )));
                    }
                    out[i][j] = a.clone();
                    out[j][i] = a.clone();
                }
                (Some(a), _) => {
                    out[i][j] = a.clone();
                    out[j][i] = a.clone();
                }
                (None, Some(b)) => {
                    out[i][j] = b.clone();
                    out[j][i] = b.clone();
                }
                (None, None) => {} // stays zero
            }
        }
    }
    Ok(out)
}

fn read_frame_table(fr: &toml::Table, coords: &[String]) -> Result<Vec<Vec<Expr>>> {
    let dim = coords.len();
    let mut out = Vec::with_capacity(dim);
    for a in 1..=dim {
        let key = format!("e{a}");
        let v = fr
            .get(&key)
            .ok_or_else(|| file_err(format!("missing frame.{key}")))?;
        out.push(expr_list(v, &format!("frame.{key}"), coords, dim)?);
    }
    if fr.len() != dim {
        return Err(file_err(format!(
            "[frame] must declare exactly e1..e{dim}, found {} entries",
            fr.len()
        )));
    }
    Ok(out)
}

/// Render a spec back to TOML. Symmetric metric entries are emitted once
/// (upper triangle); zero entries are omitted.
pub fn to_toml(m: &ManifoldSpec) -> String {
    let mut out = String::new();
    out.push_str("[manifold]\n");
    out.push_str(&format!("name = {:?}\n", m.name));
    out.push_str(&format!("dimension = {}\n", m.dim));
    let coord_list: Vec<String> = m.coords.iter().map(|c| format!("{c:?}")).collect();
    out.push_str(&format!("coordinates = [{}]\n", coord_list.join(", ")));

    match &m.metric {
        MetricSource::Components(gij) => {
            for i in 0..m.dim {
                let mut cells = Vec::new();
                for j in i..m.dim {
                    let text = format!("{}", gij[i][j]);
                    if text != "0" {
                        cells.push(format!("{} = {:?}", m.coords[j], text));
                    }
                }
                if !cells.is_empty() {
                    out.push_str(&format!("\n[metric.g.{}]\n", m.coords[i]));
                    for c in cells {
                        out.push_str(&c);
                        out.push('\n');
                    }
                }
            }
        }
        MetricSource::Frame(frame) => {
            out.push_str("\n[frame]\n");
            for (a, e) in frame.iter().enumerate() {
                out.push_str(&format!("e{} = {}\n", a + 1, expr_array(e)));
            }
        }
    }

    if let Some(st) = &m.structure {
        out.push_str("\n[structure]\n");
        out.push_str(&format!("xi = {}\n", expr_array(&st.xi)));
        out.push_str(&format!("eta = {}\n", expr_array(&st.eta)));
        out.push_str("\n[structure.phi]\n");
        for j in 0..m.dim {
            let col: Vec<Expr> = (0..m.dim).map(|i| st.phi[i][j].clone()).collect();
            out.push_str(&format!("{} = {}\n", m.coords[j], expr_array(&col)));
        }
    }

    if m.potential_vector.is_some() || m.potential_fn.is_some() {
        out.push_str("\n[potential]\n");
        if let Some(v) = &m.potential_vector {
            out.push_str(&format!("vector = {}\n", expr_array(v)));
        }
        if let Some(u) = &m.potential_fn {
            out.push_str(&format!("function = {:?}\n", format!("{u}")));
        }
    }

    out.push_str("\n[domain]\n");
    for (c, iv) in m.coords.iter().zip(&m.domain) {
        out.push_str(&format!("{c} = [{:?}, {:?}]\n", iv.lo, iv.hi));
    }

    let d = Tolerances::default();
    if m.tol != d {
        out.push_str("\n[tolerances]\n");
        if m.tol.identity != d.identity {
            out.push_str(&format!("identity = {:?}\n", m.tol.identity));
        }
        if m.tol.exact != d.exact {
            out.push_str(&format!("exact = {:?}\n", m.tol.exact));
        }
        if m.tol.eps_div != d.eps_div {
            out.push_str(&format!("eps_div = {:?}\n", m.tol.eps_div));
        }
        if m.tol.eps_pd != d.eps_pd {
            out.push_str(&format!("eps_pd = {:?}\n", m.tol.eps_pd));
        }
    }
    out
}

fn expr_array(list: &[Expr]) -> String {
    let cells: Vec<String> = list.iter().map(|e| format!("{:?}", format!("{e}"))).collect();
    format!("[{}]", cells.join(", "))
}

pub fn load_manifold(path: impl AsRef<Path>) -> Result<ManifoldSpec> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
        file_err(format!("cannot read {}: {e}", path.as_ref().display()))
    })?;
    parse_manifold(&text)
}

pub fn save_manifold(m: &ManifoldSpec, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path.as_ref(), to_toml(m))?;
    Ok(())
}

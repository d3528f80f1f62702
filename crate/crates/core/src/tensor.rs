//! Point-evaluated tensors: dense multilinear arrays tagged with valence,
//! plus the Kulkarni–Nomizu product and orthonormal-frame utilities.

use crate::error::{CoreError, Result};
use crate::jet::Jet;

/// A point value of a tensor with `p` contravariant and `q` covariant slots.
/// Contravariant slots come first in the index order.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorValue {
    pub dim: usize,
    pub contra: usize,
    pub cova: usize,
    pub data: Vec<f64>,
}

impl TensorValue {
    pub fn zeros(dim: usize, contra: usize, cova: usize) -> Self {
        TensorValue {
            dim,
            contra,
            cova,
            data: vec![0.0; dim.pow((contra + cova) as u32)],
        }
    }

    pub fn rank(&self) -> usize {
        self.contra + self.cova
    }

    #[inline]
    pub fn idx(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.rank());
        let mut i = 0;
        for &m in multi {
            i = i * self.dim + m;
        }
        i
    }

    pub fn get(&self, multi: &[usize]) -> f64 {
        self.data[self.idx(multi)]
    }

    pub fn set(&mut self, multi: &[usize], v: f64) {
        let i = self.idx(multi);
        self.data[i] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn sub(&self, rhs: &TensorValue) -> TensorValue {
        assert_eq!(self.data.len(), rhs.data.len());
        TensorValue {
            dim: self.dim,
            contra: self.contra,
            cova: self.cova,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, rhs: &TensorValue) -> TensorValue {
        assert_eq!(self.data.len(), rhs.data.len());
        TensorValue {
            dim: self.dim,
            contra: self.contra,
            cova: self.cova,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> TensorValue {
        TensorValue {
            dim: self.dim,
            contra: self.contra,
            cova: self.cova,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Frobenius norm over all components.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Tensor of jets at a point; same layout as [`TensorValue`].
#[derive(Clone, Debug)]
pub struct TensorJets {
    pub dim: usize,
    pub contra: usize,
    pub cova: usize,
    pub data: Vec<Jet>,
}

impl TensorJets {
    pub fn filled(dim: usize, contra: usize, cova: usize, order: u8) -> Self {
        TensorJets {
            dim,
            contra,
            cova,
            data: vec![Jet::constant(dim, order, 0.0); dim.pow((contra + cova) as u32)],
        }
    }

    pub fn rank(&self) -> usize {
        self.contra + self.cova
    }

    #[inline]
    pub fn idx(&self, multi: &[usize]) -> usize {
        let mut i = 0;
        for &m in multi {
            i = i * self.dim + m;
        }
        i
    }

    pub fn get(&self, multi: &[usize]) -> &Jet {
        &self.data[self.idx(multi)]
    }

    pub fn set(&mut self, multi: &[usize], j: Jet) {
        let i = self.idx(multi);
        self.data[i] = j;
    }

    pub fn values(&self) -> TensorValue {
        TensorValue {
            dim: self.dim,
            contra: self.contra,
            cova: self.cova,
            data: self.data.iter().map(|j| j.v).collect(),
        }
    }
}

/// Iterate all multi-indices of the given rank over `dim` values.
pub fn multi_indices(dim: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(rank as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0usize; rank];
        for slot in (0..rank).rev() {
            idx[slot] = flat % dim;
            flat /= dim;
        }
        idx
    })
}

/// Kulkarni–Nomizu product of two symmetric (0,2) tensors:
/// (A ⊼ B)(X1,X2,X3,X4) = A(X1,X3)B(X2,X4) + A(X2,X4)B(X1,X3)
///                       − A(X1,X4)B(X2,X3) − A(X2,X3)B(X1,X4).
pub fn kulkarni_nomizu(a: &TensorValue, b: &TensorValue, sym_tol: f64) -> Result<TensorValue> {
    let d = a.dim;
    assert_eq!((a.contra, a.cova), (0, 2));
    assert_eq!((b.contra, b.cova), (0, 2));
    for t in [a, b] {
        for i in 0..d {
            for j in 0..d {
                if (t.get(&[i, j]) - t.get(&[j, i])).abs() > sym_tol {
                    return Err(CoreError::Invariant(format!(
                        "Kulkarni-Nomizu factor is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
    }
    let mut out = TensorValue::zeros(d, 0, 4);
    for i1 in 0..d {
        for i2 in 0..d {
            for i3 in 0..d {
                for i4 in 0..d {
                    let v = a.get(&[i1, i3]) * b.get(&[i2, i4])
                        + a.get(&[i2, i4]) * b.get(&[i1, i3])
                        - a.get(&[i1, i4]) * b.get(&[i2, i3])
                        - a.get(&[i2, i3]) * b.get(&[i1, i4]);
                    out.set(&[i1, i2, i3, i4], v);
                }
            }
        }
    }
    Ok(out)
}

/// Orthonormal frame at a point: Gram–Schmidt on the coordinate basis in
/// deterministic coordinate order. `frame[a]` holds the coordinate components
/// of e_a; `coframe[a]` holds g(e_a, ·) as a covector.
#[derive(Clone, Debug)]
pub struct OrthoFrame {
    pub frame: Vec<Vec<f64>>,
    pub coframe: Vec<Vec<f64>>,
}

impl OrthoFrame {
    pub fn gram_schmidt(g: &TensorValue) -> Result<OrthoFrame> {
        let d = g.dim;
        let inner = |u: &[f64], w: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..d {
                for j in 0..d {
                    s += g.get(&[i, j]) * u[i] * w[j];
                }
            }
            s
        };
        let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d);
        for a in 0..d {
            let mut v = vec![0.0; d];
            v[a] = 1.0;
            for e in &frame {
                let c = inner(&v, e);
                for i in 0..d {
                    v[i] -= c * e[i];
                }
            }
            let n2 = inner(&v, &v);
            if n2 <= 1e-20 {
                return Err(CoreError::Invariant(
                    "Gram-Schmidt breakdown: metric is degenerate".into(),
                ));
            }
            let n = n2.sqrt();
            for x in v.iter_mut() {
                *x /= n;
            }
            frame.push(v);
        }
        let coframe = frame
            .iter()
            .map(|e| {
                (0..d)
                    .map(|i| (0..d).map(|j| g.get(&[i, j]) * e[j]).sum())
                    .collect()
            })
            .collect();
        Ok(OrthoFrame { frame, coframe })
    }

    /// All components of `t` in this frame: contravariant slots contract with
    /// the coframe, covariant slots with the frame vectors.
    pub fn components(&self, t: &TensorValue) -> TensorValue {
        let d = t.dim;
        let rank = t.rank();
        let mut out = TensorValue::zeros(d, t.contra, t.cova);
        for labels in multi_indices(d, rank) {
            let mut sum = 0.0;
            for coord_idx in multi_indices(d, rank) {
                let mut w = t.get(&coord_idx);
                if w == 0.0 {
                    continue;
                }
                for (slot, (&lab, &ci)) in labels.iter().zip(coord_idx.iter()).enumerate() {
                    w *= if slot < t.contra {
                        self.coframe[lab][ci]
                    } else {
                        self.frame[lab][ci]
                    };
                }
                sum += w;
            }
            out.set(&labels, sum);
        }
        out
    }

    /// Frame components of a single vector.
    pub fn vector_components(&self, v: &[f64]) -> Vec<f64> {
        self.coframe
            .iter()
            .map(|th| th.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclidean(d: usize) -> TensorValue {
        let mut g = TensorValue::zeros(d, 0, 2);
        for i in 0..d {
            g.set(&[i, i], 1.0);
        }
        g
    }

    #[test]
    fn kn_orthonormal_plane() {
        let g = euclidean(3);
        let gg = kulkarni_nomizu(&g, &g, 1e-12).unwrap();
        // (g ⊼ g)(e1,e2,e1,e2) = 2
        assert_eq!(gg.get(&[0, 1, 0, 1]), 2.0);
        // antisymmetry: (g ⊼ g)(X,X,Z,W) = 0
        for z in 0..3 {
            for w in 0..3 {
                assert_eq!(gg.get(&[1, 1, z, w]), 0.0);
            }
        }
    }

    #[test]
    fn kn_rejects_asymmetric() {
        let g = euclidean(2);
        let mut b = TensorValue::zeros(2, 0, 2);
        b.set(&[0, 1], 1.0);
        assert!(kulkarni_nomizu(&g, &b, 1e-12).is_err());
    }

    #[test]
    fn kn_curvature_symmetries() {
        // random symmetric A, B
        let mut a = euclidean(3);
        let mut b = euclidean(3);
        for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].iter().enumerate() {
            let va = 0.3 + 0.1 * k as f64;
            let vb = -0.2 + 0.25 * k as f64;
            a.set(&[*i, *j], va);
            a.set(&[*j, *i], va);
            b.set(&[*i, *j], vb);
            b.set(&[*j, *i], vb);
        }
        let t = kulkarni_nomizu(&a, &b, 1e-12).unwrap();
        for idx in multi_indices(3, 4) {
            let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
            let v = t.get(&[i, j, k, l]);
            assert!((v + t.get(&[j, i, k, l])).abs() < 1e-14);
            assert!((v + t.get(&[i, j, l, k])).abs() < 1e-14);
            assert!((v - t.get(&[k, l, i, j])).abs() < 1e-14);
            // first Bianchi
            let bianchi =
                t.get(&[i, j, k, l]) + t.get(&[j, k, i, l]) + t.get(&[k, i, j, l]);
            assert!(bianchi.abs() < 1e-14);
        }
    }

    #[test]
    fn gram_schmidt_orthonormal() {
        let mut g = TensorValue::zeros(3, 0, 2);
        g.set(&[0, 0], 2.0);
        g.set(&[1, 1], 3.0);
        g.set(&[2, 2], 1.0);
        g.set(&[0, 1], 0.5);
        g.set(&[1, 0], 0.5);
        let f = OrthoFrame::gram_schmidt(&g).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let mut s = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        s += g.get(&[i, j]) * f.frame[a][i] * f.frame[b][j];
                    }
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12);
            }
        }
        // frame components of g are the identity
        let comps = f.components(&g);
        for a in 0..3 {
            for b in 0..3 {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((comps.get(&[a, b]) - expect).abs() < 1e-12);
            }
        }
    }
}

//! Truncated Taylor jets: a scalar value together with all mixed partial
//! derivatives up to third order with respect to the chart coordinates.
//!
//! Arithmetic propagates derivatives by the Leibniz and Faà di Bruno rules.
//! Mixed partials are computed once per canonical (sorted) index tuple and
//! mirrored, so symmetry holds bitwise by construction.

use crate::error::{CoreError, Result};

/// Default relative guard for division and reciprocal.
pub const EPS_DIV: f64 = 1e-12;

/// A scalar jet of order `order` (0..=3) over `dim` chart coordinates.
///
/// `d2` and `d3` are dense row-major arrays of extent `dim^2` and `dim^3`;
/// both are fully symmetric in their indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    dim: usize,
    order: u8,
    pub v: f64,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub d3: Vec<f64>,
}

impl Jet {
    pub fn constant(dim: usize, order: u8, v: f64) -> Self {
        debug_assert!(order <= 3);
        Jet {
            dim,
            order,
            v,
            d1: vec![0.0; if order >= 1 { dim } else { 0 }],
            d2: vec![0.0; if order >= 2 { dim * dim } else { 0 }],
            d3: vec![0.0; if order >= 3 { dim * dim * dim } else { 0 }],
        }
    }

    /// Lift of the i-th coordinate function at value `x`.
    pub fn coordinate(dim: usize, order: u8, i: usize, x: f64) -> Result<Self> {
        if i >= dim {
            return Err(CoreError::IndexOutOfRange { index: i, dim });
        }
        let mut j = Jet::constant(dim, order, x);
        if order >= 1 {
            j.d1[i] = 1.0;
        }
        Ok(j)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    #[inline]
    pub fn g1(&self, i: usize) -> f64 {
        self.d1[i]
    }

    #[inline]
    pub fn g2(&self, i: usize, j: usize) -> f64 {
        self.d2[i * self.dim + j]
    }

    #[inline]
    pub fn g3(&self, i: usize, j: usize, k: usize) -> f64 {
        self.d3[(i * self.dim + j) * self.dim + k]
    }

    fn set2(&mut self, i: usize, j: usize, x: f64) {
        let d = self.dim;
        self.d2[i * d + j] = x;
        self.d2[j * d + i] = x;
    }

    fn set3(&mut self, i: usize, j: usize, k: usize, x: f64) {
        let d = self.dim;
        for (a, b, c) in [
            (i, j, k),
            (i, k, j),
            (j, i, k),
            (j, k, i),
            (k, i, j),
            (k, j, i),
        ] {
            self.d3[(a * d + b) * d + c] = x;
        }
    }

    /// Truncate to a lower order (no-op if already at or below it).
    pub fn truncated(&self, order: u8) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        let mut out = Jet::constant(self.dim, order, self.v);
        if order >= 1 {
            out.d1.copy_from_slice(&self.d1);
        }
        if order >= 2 {
            out.d2.copy_from_slice(&self.d2);
        }
        out
    }

    /// Jet of the partial derivative with respect to coordinate `i`.
    /// The result has one order less than `self`.
    pub fn deriv(&self, i: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let d = self.dim;
        let order = self.order - 1;
        let mut out = Jet::constant(d, order, self.d1[i]);
        if order >= 1 {
            for j in 0..d {
                out.d1[j] = self.g2(i, j);
            }
        }
        if order >= 2 {
            for j in 0..d {
                for k in 0..d {
                    out.d2[j * d + k] = self.g3(i, j, k);
                }
            }
        }
        out
    }

    fn joint_order(&self, rhs: &Jet) -> u8 {
        debug_assert_eq!(self.dim, rhs.dim);
        self.order.min(rhs.order)
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        let order = self.joint_order(rhs);
        let d = self.dim;
        let mut out = Jet::constant(d, order, self.v + rhs.v);
        if order >= 1 {
            for i in 0..d {
                out.d1[i] = self.d1[i] + rhs.d1[i];
            }
        }
        if order >= 2 {
            for i in 0..d * d {
                out.d2[i] = self.d2[i] + rhs.d2[i];
            }
        }
        if order >= 3 {
            for i in 0..d * d * d {
                out.d3[i] = self.d3[i] + rhs.d3[i];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Jet) -> Jet {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Jet {
        let mut out = self.clone();
        out.v = -out.v;
        for x in out
            .d1
            .iter_mut()
            .chain(out.d2.iter_mut())
            .chain(out.d3.iter_mut())
        {
            *x = -*x;
        }
        out
    }

    pub fn scale(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.v *= c;
        for x in out
            .d1
            .iter_mut()
            .chain(out.d2.iter_mut())
            .chain(out.d3.iter_mut())
        {
            *x *= c;
        }
        out
    }

    pub fn mul(&self, rhs: &Jet) -> Jet {
        let order = self.joint_order(rhs);
        let d = self.dim;
        let (a, b) = (self, rhs);
        let mut out = Jet::constant(d, order, a.v * b.v);
        if order >= 1 {
            for i in 0..d {
                out.d1[i] = a.d1[i] * b.v + a.v * b.d1[i];
            }
        }
        if order >= 2 {
            for i in 0..d {
                for j in i..d {
                    let t = a.g2(i, j) * b.v + a.d1[i] * b.d1[j] + a.d1[j] * b.d1[i]
                        + a.v * b.g2(i, j);
                    out.set2(i, j, t);
                }
            }
        }
        if order >= 3 {
            for i in 0..d {
                for j in i..d {
                    for k in j..d {
                        let t = a.g3(i, j, k) * b.v
                            + a.g2(i, j) * b.d1[k]
                            + a.g2(i, k) * b.d1[j]
                            + a.g2(j, k) * b.d1[i]
                            + a.d1[i] * b.g2(j, k)
                            + a.d1[j] * b.g2(i, k)
                            + a.d1[k] * b.g2(i, j)
                            + a.v * b.g3(i, j, k);
                        out.set3(i, j, k, t);
                    }
                }
            }
        }
        out
    }

    /// Composition with a univariate function given by its derivative ladder
    /// `f[k]` = k-th derivative of the outer function at `self.v`.
    pub fn compose(&self, f: [f64; 4]) -> Jet {
        let d = self.dim;
        let order = self.order;
        let a = self;
        let mut out = Jet::constant(d, order, f[0]);
        if order >= 1 {
            for i in 0..d {
                out.d1[i] = f[1] * a.d1[i];
            }
        }
        if order >= 2 {
            for i in 0..d {
                for j in i..d {
                    let t = f[2] * a.d1[i] * a.d1[j] + f[1] * a.g2(i, j);
                    out.set2(i, j, t);
                }
            }
        }
        if order >= 3 {
            for i in 0..d {
                for j in i..d {
                    for k in j..d {
                        let t = f[3] * a.d1[i] * a.d1[j] * a.d1[k]
                            + f[2]
                                * (a.g2(i, j) * a.d1[k]
                                    + a.g2(i, k) * a.d1[j]
                                    + a.g2(j, k) * a.d1[i])
                            + f[1] * a.g3(i, j, k);
                        out.set3(i, j, k, t);
                    }
                }
            }
        }
        out
    }

    pub fn recip(&self, guard: f64) -> Result<Jet> {
        if self.v.abs() < guard {
            return Err(CoreError::DivisionNearZero {
                value: self.v,
                guard,
            });
        }
        let r = 1.0 / self.v;
        Ok(self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]))
    }

    pub fn div(&self, rhs: &Jet, guard: f64) -> Result<Jet> {
        Ok(self.mul(&rhs.recip(guard)?))
    }

    pub fn exp(&self) -> Jet {
        let e = self.v.exp();
        self.compose([e, e, e, e])
    }

    pub fn ln(&self) -> Result<Jet> {
        if self.v <= 0.0 {
            return Err(CoreError::DomainViolation {
                func: "log",
                value: self.v,
            });
        }
        let r = 1.0 / self.v;
        Ok(self.compose([self.v.ln(), r, -r * r, 2.0 * r * r * r]))
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.v.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.v.sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn sinh(&self) -> Jet {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.compose([s, c, s, c])
    }

    pub fn cosh(&self) -> Jet {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.compose([c, s, c, s])
    }

    pub fn tanh(&self) -> Jet {
        let t = self.v.tanh();
        let s = 1.0 - t * t;
        self.compose([t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0)])
    }

    pub fn sqrt(&self) -> Result<Jet> {
        if self.v <= 0.0 {
            return Err(CoreError::DomainViolation {
                func: "sqrt",
                value: self.v,
            });
        }
        let s = self.v.sqrt();
        let f1 = 0.5 / s;
        let f2 = -0.25 / (self.v * s);
        let f3 = 0.375 / (self.v * self.v * s);
        Ok(self.compose([s, f1, f2, f3]))
    }

    /// Integer power by repeated multiplication (supports negative exponents).
    pub fn powi(&self, n: i32, guard: f64) -> Result<Jet> {
        if n < 0 {
            return self.powi(-n, guard)?.recip(guard);
        }
        let mut out = Jet::constant(self.dim, self.order, 1.0);
        let mut base = self.clone();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(out)
    }

    /// Constant real power. Falls back to the integer route when the exponent
    /// is (numerically) an integer, which also covers non-positive bases.
    pub fn powf(&self, a: f64, guard: f64) -> Result<Jet> {
        if a.fract() == 0.0 && a.abs() < 1e9 {
            return self.powi(a as i32, guard);
        }
        if self.v <= 0.0 {
            return Err(CoreError::DomainViolation {
                func: "pow",
                value: self.v,
            });
        }
        let v = self.v;
        let f0 = v.powf(a);
        let f1 = a * v.powf(a - 1.0);
        let f2 = a * (a - 1.0) * v.powf(a - 2.0);
        let f3 = a * (a - 1.0) * (a - 2.0) * v.powf(a - 3.0);
        Ok(self.compose([f0, f1, f2, f3]))
    }

    /// Maximum absolute entry across all stored derivative orders.
    pub fn max_abs(&self) -> f64 {
        let mut m = self.v.abs();
        for x in self.d1.iter().chain(self.d2.iter()).chain(self.d3.iter()) {
            m = m.max(x.abs());
        }
        m
    }
}

impl std::ops::Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet::add(self, rhs)
    }
}

impl std::ops::Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet::sub(self, rhs)
    }
}

impl std::ops::Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        Jet::mul(self, rhs)
    }
}

impl std::ops::Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::neg(self)
    }
}

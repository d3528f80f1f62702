//! A small expression language for metric coefficients and field components.
//!
//! Grammar (ASCII, byte-offset error reporting):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?          -- right associative,
//!                                          exponent must fold to a constant
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Precedence: `^` > unary `-` > `*` `/` > `+` `-`.

use crate::error::{CoreError, Result};
use crate::jet::Jet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Expression AST. Coordinates are stored by index into the chart's
/// coordinate list together with their name for printing.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Coord { index: usize, name: String },
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    Pow(Box<Expr>, f64),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn coord(index: usize, name: &str) -> Expr {
        Expr::Coord {
            index,
            name: name.to_string(),
        }
    }

    /// Evaluate to a jet of the requested order at chart point `coords`.
    pub fn eval(&self, coords: &[f64], order: u8, eps_div: f64) -> Result<Jet> {
        let dim = coords.len();
        match self {
            Expr::Num(v) => Ok(Jet::constant(dim, order, *v)),
            Expr::Coord { index, .. } => Jet::coordinate(dim, order, *index, coords[*index]),
            Expr::Neg(e) => Ok(e.eval(coords, order, eps_div)?.neg()),
            Expr::Bin(op, a, b) => {
                let ja = a.eval(coords, order, eps_div)?;
                let jb = b.eval(coords, order, eps_div)?;
                match op {
                    BinOp::Add => Ok(ja.add(&jb)),
                    BinOp::Sub => Ok(ja.sub(&jb)),
                    BinOp::Mul => Ok(ja.mul(&jb)),
                    BinOp::Div => ja.div(&jb, eps_div * (1.0 + jb.v.abs())),
                }
            }
            Expr::Call(f, a) => {
                let j = a.eval(coords, order, eps_div)?;
                match f {
                    Func::Exp => Ok(j.exp()),
                    Func::Log => j.ln(),
                    Func::Sin => Ok(j.sin()),
                    Func::Cos => Ok(j.cos()),
                    Func::Sinh => Ok(j.sinh()),
                    Func::Cosh => Ok(j.cosh()),
                    Func::Tanh => Ok(j.tanh()),
                    Func::Sqrt => j.sqrt(),
                }
            }
            Expr::Pow(a, e) => a.eval(coords, order, eps_div)?.powf(*e, eps_div),
        }
    }

    /// Plain value evaluation (order-0 jet).
    pub fn value(&self, coords: &[f64], eps_div: f64) -> Result<f64> {
        Ok(self.eval(coords, 0, eps_div)?.v)
    }

    /// Constant folding; `Some` iff the expression contains no coordinates.
    pub fn fold_constant(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            Expr::Coord { .. } => None,
            Expr::Neg(e) => e.fold_constant().map(|v| -v),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.fold_constant()?, b.fold_constant()?);
                Some(match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                })
            }
            Expr::Call(f, a) => {
                let a = a.fold_constant()?;
                Some(match f {
                    Func::Exp => a.exp(),
                    Func::Log => a.ln(),
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Sinh => a.sinh(),
                    Func::Cosh => a.cosh(),
                    Func::Tanh => a.tanh(),
                    Func::Sqrt => a.sqrt(),
                })
            }
            Expr::Pow(a, e) => a.fold_constant().map(|v| v.powf(*e)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn print_into(&self, out: &mut String) {
        match self {
            Expr::Num(v) => {
                if *v < 0.0 {
                    out.push_str(&format!("({v})"));
                } else {
                    out.push_str(&format!("{v}"));
                }
            }
            Expr::Coord { name, .. } => out.push_str(name),
            Expr::Neg(e) => {
                out.push('-');
                Self::print_child(e, 3, out);
            }
            Expr::Bin(op, a, b) => {
                let (prec, sym) = match op {
                    BinOp::Add => (1, '+'),
                    BinOp::Sub => (1, '-'),
                    BinOp::Mul => (2, '*'),
                    BinOp::Div => (2, '/'),
                };
                Self::print_child(a, prec, out);
                out.push(sym);
                // Right child needs parens at equal precedence for - and /.
                Self::print_child(b, prec + 1, out);
            }
            Expr::Call(f, a) => {
                out.push_str(f.name());
                out.push('(');
                a.print_into(out);
                out.push(')');
            }
            Expr::Pow(a, e) => {
                Self::print_child(a, 5, out);
                out.push('^');
                if *e < 0.0 {
                    out.push_str(&format!("({e})"));
                } else {
                    out.push_str(&format!("{e}"));
                }
            }
        }
    }

    fn print_child(e: &Expr, min_prec: u8, out: &mut String) {
        if e.precedence() < min_prec {
            out.push('(');
            e.print_into(out);
            out.push(')');
        } else {
            e.print_into(out);
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        self.print_into(&mut s);
        f.write_str(&s)
    }
}

/// Parse `text` against the declared coordinate names.
pub fn parse_expression(text: &str, coords: &[String]) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        coords,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(CoreError::Parse {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(CoreError::Parse {
            offset: p.pos,
            message: format!("unexpected trailing input `{}`", p.rest()),
        });
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    coords: &'a [String],
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn rest(&self) -> String {
        String::from_utf8_lossy(&self.src[self.pos.min(self.src.len())..]).into_owned()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(CoreError::Parse {
                offset: self.pos,
                message: format!("expected `{}`", c as char),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        self.skip_ws();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let off = self.pos;
            let exponent = self.factor()?;
            let c = exponent
                .fold_constant()
                .ok_or(CoreError::NonConstantExponent { offset: off })?;
            return Ok(Expr::Pow(Box::new(base), c));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        let off = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                self.skip_ws();
                if self.peek() == Some(b'(') {
                    let f = Func::from_name(&name).ok_or_else(|| CoreError::UnknownFunction {
                        name: name.clone(),
                        offset: off,
                    })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(b')')?;
                    Ok(Expr::Call(f, Box::new(arg)))
                } else {
                    match self.coords.iter().position(|c| *c == name) {
                        Some(index) => Ok(Expr::Coord { index, name }),
                        None => Err(CoreError::UnknownIdentifier { name, offset: off }),
                    }
                }
            }
            _ => Err(CoreError::Parse {
                offset: off,
                message: "expected number, identifier, or `(`".into(),
            }),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
            self.pos += 1;
        }
        // exponent suffix: 1e-3, 2.5E+4
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>().map(Expr::Num).map_err(|_| CoreError::Parse {
            offset: start,
            message: format!("invalid number `{text}`"),
        })
    }
}

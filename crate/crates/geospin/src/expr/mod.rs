//! Arithmetic-expression engine for metric components.
//!
//! Metric entries g_ij are smooth coefficient functions of the chart
//! coordinates. This module parses them from text, differentiates them
//! symbolically (so second derivatives needed by curvature stay exact),
//! evaluates them at points, and folds constants.
//!
//! Grammar (EBNF):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" unary)?          (exponent must fold to a constant)
//! atom   := number | coordinate | "pi" | function "(" expr ")" | "(" expr ")"
//! function := "sin" | "cos" | "sinh" | "cosh" | "exp" | "ln" | "sqrt"
//! number := digits ["." digits] [("e"|"E") ["+"|"-"] digits]
//! ```

mod parser;

pub use parser::parse_expr;

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Sinh => "sinh",
            UnaryOp::Cosh => "cosh",
            UnaryOp::Exp => "exp",
            UnaryOp::Ln => "ln",
            UnaryOp::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Expression AST node. Spans (byte offsets into the source text) survive
/// parsing; nodes built by differentiation or simplification carry none.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Const(f64),
    /// Reference to a chart coordinate; the name is kept for display only.
    Coord { index: usize, name: String },
    Unary(UnaryOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

/// Structural equality, ignoring spans and coordinate display names.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (ExprKind::Const(a), ExprKind::Const(b)) => a == b,
            (ExprKind::Coord { index: a, .. }, ExprKind::Coord { index: b, .. }) => a == b,
            (ExprKind::Unary(op_a, a), ExprKind::Unary(op_b, b)) => op_a == op_b && a == b,
            (ExprKind::Binary(op_a, a1, a2), ExprKind::Binary(op_b, b1, b2)) => {
                op_a == op_b && a1 == b1 && a2 == b2
            }
            _ => false,
        }
    }
}

impl Expr {
    pub fn constant(value: f64) -> Self {
        Expr {
            kind: ExprKind::Const(value),
            span: None,
        }
    }

    pub fn coord(index: usize, name: impl Into<String>) -> Self {
        Expr {
            kind: ExprKind::Coord {
                index,
                name: name.into(),
            },
            span: None,
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn is_const(&self, value: f64) -> bool {
        matches!(self.kind, ExprKind::Const(c) if c == value)
    }

    pub fn as_const(&self) -> Option<f64> {
        match self.kind {
            ExprKind::Const(c) => Some(c),
            _ => None,
        }
    }

    fn unary(op: UnaryOp, a: Expr) -> Self {
        Expr {
            kind: ExprKind::Unary(op, Box::new(a)),
            span: None,
        }
    }

    fn binary(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr {
            kind: ExprKind::Binary(op, Box::new(a), Box::new(b)),
            span: None,
        }
    }

    // Folding constructors; they keep derivative trees from ballooning.
    // Named after the node they build, not the std::ops traits (they take
    // both operands by value and fold, so the trait signatures do not fit).

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Self {
        if a.is_const(0.0) {
            return b;
        }
        if b.is_const(0.0) {
            return a;
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if (x + y).is_finite() {
                return Expr::constant(x + y);
            }
        }
        Expr::binary(BinOp::Add, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Self {
        if b.is_const(0.0) {
            return a;
        }
        if a.is_const(0.0) {
            return Expr::neg(b);
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if (x - y).is_finite() {
                return Expr::constant(x - y);
            }
        }
        Expr::binary(BinOp::Sub, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Self {
        if a.is_const(0.0) || b.is_const(0.0) {
            return Expr::zero();
        }
        if a.is_const(1.0) {
            return b;
        }
        if b.is_const(1.0) {
            return a;
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if (x * y).is_finite() {
                return Expr::constant(x * y);
            }
        }
        Expr::binary(BinOp::Mul, a, b)
    }

    /// Note: folds `0/b -> 0`; derivatives only use this where the parent
    /// expression is already undefined at zeros of `b`.
    #[allow(clippy::should_implement_trait)]
    pub fn div(a: Expr, b: Expr) -> Self {
        if a.is_const(0.0) {
            return Expr::zero();
        }
        if b.is_const(1.0) {
            return a;
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if y != 0.0 && (x / y).is_finite() {
                return Expr::constant(x / y);
            }
        }
        Expr::binary(BinOp::Div, a, b)
    }

    /// Power with a constant exponent (the only form the grammar admits).
    pub fn pow_const(a: Expr, exponent: f64) -> Self {
        if exponent == 1.0 {
            return a;
        }
        if exponent == 0.0 {
            return Expr::one();
        }
        if let Some(x) = a.as_const() {
            let v = x.powf(exponent);
            if v.is_finite() {
                return Expr::constant(v);
            }
        }
        Expr::binary(BinOp::Pow, a, Expr::constant(exponent))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Self {
        if let Some(x) = a.as_const() {
            return Expr::constant(-x);
        }
        if let ExprKind::Unary(UnaryOp::Neg, inner) = a.kind {
            return *inner;
        }
        Expr::unary(UnaryOp::Neg, a)
    }

    pub fn sin(a: Expr) -> Self {
        Expr::unary(UnaryOp::Sin, a)
    }
    pub fn cos(a: Expr) -> Self {
        Expr::unary(UnaryOp::Cos, a)
    }
    pub fn sinh(a: Expr) -> Self {
        Expr::unary(UnaryOp::Sinh, a)
    }
    pub fn cosh(a: Expr) -> Self {
        Expr::unary(UnaryOp::Cosh, a)
    }
    pub fn exp(a: Expr) -> Self {
        Expr::unary(UnaryOp::Exp, a)
    }
    pub fn ln(a: Expr) -> Self {
        Expr::unary(UnaryOp::Ln, a)
    }
    pub fn sqrt(a: Expr) -> Self {
        Expr::unary(UnaryOp::Sqrt, a)
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord_index(&self) -> Option<usize> {
        match &self.kind {
            ExprKind::Const(_) => None,
            ExprKind::Coord { index, .. } => Some(*index),
            ExprKind::Unary(_, a) => a.max_coord_index(),
            ExprKind::Binary(_, a, b) => a.max_coord_index().max(b.max_coord_index()),
        }
    }

    fn references_coords(&self) -> bool {
        self.max_coord_index().is_some()
    }

    /// IEEE double evaluation at a chart point.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        let v = self.eval_inner(point)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.domain_error("non-finite result"))
        }
    }

    fn eval_inner(&self, point: &[f64]) -> Result<f64> {
        match &self.kind {
            ExprKind::Const(c) => Ok(*c),
            ExprKind::Coord { index, .. } => {
                point
                    .get(*index)
                    .copied()
                    .ok_or_else(|| Error::DimensionMismatch {
                        expected: index + 1,
                        got: point.len(),
                    })
            }
            ExprKind::Unary(op, a) => {
                let x = a.eval_inner(point)?;
                match op {
                    UnaryOp::Neg => Ok(-x),
                    UnaryOp::Sin => Ok(x.sin()),
                    UnaryOp::Cos => Ok(x.cos()),
                    UnaryOp::Sinh => Ok(x.sinh()),
                    UnaryOp::Cosh => Ok(x.cosh()),
                    UnaryOp::Exp => Ok(x.exp()),
                    UnaryOp::Ln => {
                        if x <= 0.0 {
                            Err(self.domain_error(&format!("ln of non-positive value {x}")))
                        } else {
                            Ok(x.ln())
                        }
                    }
                    UnaryOp::Sqrt => {
                        if x < 0.0 {
                            Err(self.domain_error(&format!("sqrt of negative value {x}")))
                        } else {
                            Ok(x.sqrt())
                        }
                    }
                }
            }
            ExprKind::Binary(op, a, b) => {
                let x = a.eval_inner(point)?;
                let y = b.eval_inner(point)?;
                match op {
                    BinOp::Add => Ok(x + y),
                    BinOp::Sub => Ok(x - y),
                    BinOp::Mul => Ok(x * y),
                    BinOp::Div => {
                        if y == 0.0 {
                            Err(self.domain_error("division by zero"))
                        } else {
                            Ok(x / y)
                        }
                    }
                    BinOp::Pow => {
                        if x == 0.0 && y < 0.0 {
                            return Err(self.domain_error("zero base with negative exponent"));
                        }
                        let v = x.powf(y);
                        if v.is_nan() {
                            Err(self.domain_error(&format!(
                                "non-integer power {y} of negative base {x}"
                            )))
                        } else {
                            Ok(v)
                        }
                    }
                }
            }
        }
    }

    fn domain_error(&self, detail: &str) -> Error {
        Error::EvalDomain {
            detail: detail.to_string(),
            context: self.to_string(),
            span: self.span,
        }
    }

    /// Exact partial derivative with respect to coordinate `k`.
    pub fn differentiate(&self, k: usize) -> Expr {
        match &self.kind {
            ExprKind::Const(_) => Expr::zero(),
            ExprKind::Coord { index, .. } => {
                if *index == k {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            ExprKind::Unary(op, a) => {
                let da = a.differentiate(k);
                if da.is_const(0.0) && *op != UnaryOp::Neg {
                    return Expr::zero();
                }
                let a = (**a).clone();
                match op {
                    UnaryOp::Neg => Expr::neg(da),
                    UnaryOp::Sin => Expr::mul(Expr::cos(a), da),
                    UnaryOp::Cos => Expr::neg(Expr::mul(Expr::sin(a), da)),
                    UnaryOp::Sinh => Expr::mul(Expr::cosh(a), da),
                    UnaryOp::Cosh => Expr::mul(Expr::sinh(a), da),
                    UnaryOp::Exp => Expr::mul(Expr::exp(a), da),
                    UnaryOp::Ln => Expr::div(da, a),
                    UnaryOp::Sqrt => {
                        Expr::div(da, Expr::mul(Expr::constant(2.0), Expr::sqrt(a)))
                    }
                }
            }
            ExprKind::Binary(op, a, b) => {
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinOp::Add => Expr::add(a.differentiate(k), b.differentiate(k)),
                    BinOp::Sub => Expr::sub(a.differentiate(k), b.differentiate(k)),
                    BinOp::Mul => {
                        let da = a.differentiate(k);
                        let db = b.differentiate(k);
                        Expr::add(Expr::mul(da, b.clone()), Expr::mul(a, db))
                    }
                    BinOp::Div => {
                        let da = a.differentiate(k);
                        let db = b.differentiate(k);
                        Expr::div(
                            Expr::sub(Expr::mul(da, b.clone()), Expr::mul(a, db)),
                            Expr::pow_const(b, 2.0),
                        )
                    }
                    BinOp::Pow => {
                        let da = a.differentiate(k);
                        if let Some(c) = b.as_const() {
                            // d(f^c) = c f^(c-1) f'
                            Expr::mul(
                                Expr::mul(Expr::constant(c), Expr::pow_const(a, c - 1.0)),
                                da,
                            )
                        } else {
                            // General f^g; the grammar never produces it, but
                            // hand-built ASTs stay total.
                            let db = b.differentiate(k);
                            let fg = Expr::binary(BinOp::Pow, a.clone(), b.clone());
                            let term1 = Expr::mul(db, Expr::ln(a.clone()));
                            let term2 = Expr::mul(b, Expr::div(da, a));
                            Expr::mul(fg, Expr::add(term1, term2))
                        }
                    }
                }
            }
        }
    }

    /// Constant folding and identity elimination. Value-preserving: the
    /// result evaluates identically at every point where `self` is defined.
    pub fn simplify(&self) -> Expr {
        match &self.kind {
            ExprKind::Const(_) | ExprKind::Coord { .. } => self.clone(),
            ExprKind::Unary(op, a) => {
                let a = a.simplify();
                if let Some(x) = a.as_const() {
                    let folded = match op {
                        UnaryOp::Neg => Some(-x),
                        UnaryOp::Sin => Some(x.sin()),
                        UnaryOp::Cos => Some(x.cos()),
                        UnaryOp::Sinh => Some(x.sinh()),
                        UnaryOp::Cosh => Some(x.cosh()),
                        UnaryOp::Exp => Some(x.exp()),
                        UnaryOp::Ln => (x > 0.0).then(|| x.ln()),
                        UnaryOp::Sqrt => (x >= 0.0).then(|| x.sqrt()),
                    };
                    if let Some(v) = folded {
                        if v.is_finite() {
                            return Expr::constant(v);
                        }
                    }
                }
                if *op == UnaryOp::Neg {
                    if let ExprKind::Unary(UnaryOp::Neg, inner) = &a.kind {
                        return (**inner).clone();
                    }
                }
                Expr::unary(*op, a)
            }
            ExprKind::Binary(op, a, b) => {
                let a = a.simplify();
                let b = b.simplify();
                if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
                    let folded = match op {
                        BinOp::Add => Some(x + y),
                        BinOp::Sub => Some(x - y),
                        BinOp::Mul => Some(x * y),
                        BinOp::Div => (y != 0.0).then(|| x / y),
                        BinOp::Pow => {
                            let v = x.powf(y);
                            (!v.is_nan() && !(x == 0.0 && y < 0.0)).then_some(v)
                        }
                    };
                    if let Some(v) = folded {
                        if v.is_finite() {
                            return Expr::constant(v);
                        }
                    }
                }
                match op {
                    BinOp::Add => {
                        if a.is_const(0.0) {
                            return b;
                        }
                        if b.is_const(0.0) {
                            return a;
                        }
                    }
                    BinOp::Sub => {
                        if b.is_const(0.0) {
                            return a;
                        }
                        if a.is_const(0.0) {
                            return Expr::neg(b);
                        }
                    }
                    BinOp::Mul => {
                        if a.is_const(0.0) || b.is_const(0.0) {
                            return Expr::zero();
                        }
                        if a.is_const(1.0) {
                            return b;
                        }
                        if b.is_const(1.0) {
                            return a;
                        }
                    }
                    BinOp::Div => {
                        if b.is_const(1.0) {
                            return a;
                        }
                    }
                    BinOp::Pow => {
                        if b.is_const(1.0) {
                            return a;
                        }
                        if b.is_const(0.0) {
                            return Expr::one();
                        }
                    }
                }
                Expr::binary(*op, a, b)
            }
        }
    }

    /// Folds an expression without coordinate references down to a number.
    pub fn try_const_fold(&self) -> Option<f64> {
        if self.references_coords() {
            return None;
        }
        self.evaluate(&[]).ok()
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Const(c) if *c < 0.0 => 3,
            ExprKind::Const(_) | ExprKind::Coord { .. } => 5,
            ExprKind::Unary(UnaryOp::Neg, _) => 3,
            ExprKind::Unary(..) => 5,
            ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            ExprKind::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            ExprKind::Binary(BinOp::Pow, ..) => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < parent;
        if parens {
            write!(f, "(")?;
        }
        match &self.kind {
            ExprKind::Const(c) => write!(f, "{c}")?,
            ExprKind::Coord { name, .. } => write!(f, "{name}")?,
            ExprKind::Unary(UnaryOp::Neg, a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 3)?;
            }
            ExprKind::Unary(op, a) => {
                write!(f, "{}(", op.name())?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            ExprKind::Binary(op, a, b) => {
                let (sym, lp, rp) = match op {
                    BinOp::Add => ("+", 1, 2),
                    BinOp::Sub => ("-", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                    BinOp::Pow => ("^", 5, 4),
                };
                a.fmt_prec(f, lp)?;
                write!(f, "{sym}")?;
                b.fmt_prec(f, rp)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Unparses to text that re-parses to an evaluation-identical expression.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

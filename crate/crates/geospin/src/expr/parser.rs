//! Recursive-descent parser for the metric-expression grammar.

use super::{BinOp, Expr, ExprKind, UnaryOp};
use crate::error::{Error, Result};

const FUNCTIONS: &[(&str, UnaryOp)] = &[
    ("sin", UnaryOp::Sin),
    ("cos", UnaryOp::Cos),
    ("sinh", UnaryOp::Sinh),
    ("cosh", UnaryOp::Cosh),
    ("exp", UnaryOp::Exp),
    ("ln", UnaryOp::Ln),
    ("sqrt", UnaryOp::Sqrt),
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number `{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize, usize)>> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            let start = lx.pos;
            let Some(&c) = lx.src.get(lx.pos) else {
                out.push((Tok::Eof, start, start));
                return Ok(out);
            };
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b',' => {
                    lx.pos += 1;
                    Tok::Comma
                }
                b'0'..=b'9' | b'.' => lx.number(start)?,
                c if c.is_ascii_alphabetic() || c == b'_' => lx.ident(),
                other => {
                    return Err(Error::Syntax {
                        offset: start,
                        expected: "a number, identifier, operator, or parenthesis".into(),
                        found: format!("`{}`", other as char),
                    })
                }
            };
            out.push((tok, start, lx.pos));
        }
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn number(&mut self, start: usize) -> Result<Tok> {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
            } else {
                // `2e` followed by non-digit: the `e` belongs to an identifier
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<f64>().map(Tok::Num).map_err(|_| Error::Syntax {
            offset: start,
            expected: "a numeric literal".into(),
            found: format!("`{text}`"),
        })
    }

    fn ident(&mut self) -> Tok {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    cursor: usize,
    coords: &'a [String],
}

/// Parses `text` into an expression over the named chart coordinates.
pub fn parse_expr(text: &str, coords: &[String]) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax {
            offset: 0,
            expected: "an expression".into(),
            found: "empty input".into(),
        });
    }
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        cursor: 0,
        coords,
    };
    let expr = p.expr()?;
    let (tok, start, _) = p.peek().clone();
    if tok != Tok::Eof {
        return Err(Error::Syntax {
            offset: start,
            expected: "an operator or end of input".into(),
            found: tok.describe(),
        });
    }
    Ok(expr)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &(Tok, usize, usize) {
        &self.toks[self.cursor]
    }

    fn bump(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.cursor].clone();
        if self.cursor + 1 < self.toks.len() {
            self.cursor += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().0 {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = spanned_binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().0 {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = spanned_binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().0 == Tok::Minus {
            let (_, start, _) = self.bump();
            let inner = self.unary()?;
            let end = inner.span.map_or(start, |(_, e)| e);
            return Ok(Expr {
                kind: ExprKind::Unary(UnaryOp::Neg, Box::new(inner)),
                span: Some((start, end)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek().0 != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp_start = self.peek().1;
        let exponent = self.unary()?;
        let Some(value) = exponent.try_const_fold() else {
            return Err(Error::Syntax {
                offset: exp_start,
                expected: "a constant exponent".into(),
                found: format!("`{exponent}` (depends on coordinates)"),
            });
        };
        let span = join_spans(base.span, exponent.span);
        Ok(Expr {
            kind: ExprKind::Binary(
                BinOp::Pow,
                Box::new(base),
                Box::new(Expr {
                    kind: ExprKind::Const(value),
                    span: exponent.span,
                }),
            ),
            span,
        })
    }

    fn atom(&mut self) -> Result<Expr> {
        let (tok, start, end) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr {
                kind: ExprKind::Const(v),
                span: Some((start, end)),
            }),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if self.peek().0 == Tok::LParen {
                    return self.function_call(name, start);
                }
                if let Some(index) = self.coords.iter().position(|c| c == &name) {
                    return Ok(Expr {
                        kind: ExprKind::Coord { index, name },
                        span: Some((start, end)),
                    });
                }
                if name == "pi" {
                    return Ok(Expr {
                        kind: ExprKind::Const(std::f64::consts::PI),
                        span: Some((start, end)),
                    });
                }
                Err(Error::UnknownIdentifier {
                    name,
                    offset: start,
                })
            }
            other => Err(Error::Syntax {
                offset: start,
                expected: "an operand".into(),
                found: other.describe(),
            }),
        }
    }

    fn function_call(&mut self, name: String, start: usize) -> Result<Expr> {
        let Some(&(_, op)) = FUNCTIONS.iter().find(|(n, _)| *n == name) else {
            return Err(Error::UnknownIdentifier {
                name,
                offset: start,
            });
        };
        self.bump(); // consume `(`
        if self.peek().0 == Tok::RParen {
            return Err(Error::ArityMismatch {
                function: name,
                offset: self.peek().1,
            });
        }
        let arg = self.expr()?;
        if self.peek().0 == Tok::Comma {
            return Err(Error::ArityMismatch {
                function: name,
                offset: self.peek().1,
            });
        }
        let (_, _, rp_end) = self.expect_rparen()?;
        Ok(Expr {
            kind: ExprKind::Unary(op, Box::new(arg)),
            span: Some((start, rp_end)),
        })
    }

    fn expect_rparen(&mut self) -> Result<(Tok, usize, usize)> {
        let (tok, start, end) = self.bump();
        if tok == Tok::RParen {
            Ok((tok, start, end))
        } else {
            Err(Error::Syntax {
                offset: start,
                expected: "`)`".into(),
                found: tok.describe(),
            })
        }
    }
}

fn spanned_binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = join_spans(lhs.span, rhs.span);
    Expr {
        kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
        span,
    }
}

fn join_spans(a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> Option<(usize, usize)> {
    match (a, b) {
        (Some((s, _)), Some((_, e))) => Some((s, e)),
        (one, None) => one,
        (None, one) => one,
    }
}

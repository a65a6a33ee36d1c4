//! Expression mini-language for regularisers.
//!
//! Grammar (whitespace insensitive, `+ - * /` left-associative, `^`
//! right-associative, usual precedence):
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := atom ("^" factor)?
//! atom   := NUMBER | "norm" | "coord" "(" INT ")" | FUNC "(" expr ")"
//!         | "(" expr ")" | "-" atom
//! FUNC   := "exp" | "abs" | "sqrt" | "max0"
//! ```
//!
//! Semantics are IEEE double arithmetic; `norm` is the p-norm of the
//! evaluation point in its space, `coord(i)` the 0-based i-th coordinate,
//! `max0(x) = max(x, 0)`.

use crate::space::{Element, PNormSpace};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("parse error at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("coord({index}) is out of range for dimension {dim}")]
    CoordOutOfRange { index: usize, dim: usize },
    #[error("expression evaluated to NaN at {coords:?}")]
    NotANumber { coords: Vec<f64> },
    #[error(transparent)]
    Space(#[from] crate::space::SpaceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Exp,
    Abs,
    Sqrt,
    Max0,
}

impl UnaryFn {
    fn name(self) -> &'static str {
        match self {
            UnaryFn::Exp => "exp",
            UnaryFn::Abs => "abs",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Max0 => "max0",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            UnaryFn::Exp => x.exp(),
            UnaryFn::Abs => x.abs(),
            UnaryFn::Sqrt => x.sqrt(),
            UnaryFn::Max0 => x.max(0.0),
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

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Norm,
    Coord(usize),
    Unary(UnaryFn, Box<Expr>),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Evaluate at `f` in `space`. A NaN result is reported as an error with
    /// the offending input attached.
    pub fn eval(&self, space: &PNormSpace, f: &Element<f64>) -> Result<f64, EvalError> {
        let value = self.eval_inner(space, f)?;
        if value.is_nan() {
            return Err(EvalError::NotANumber {
                coords: f.coords().to_vec(),
            });
        }
        Ok(value)
    }

    fn eval_inner(&self, space: &PNormSpace, f: &Element<f64>) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Number(v) => *v,
            Expr::Norm => space.norm(f)?,
            Expr::Coord(i) => {
                if *i >= f.len() {
                    return Err(EvalError::CoordOutOfRange {
                        index: *i,
                        dim: f.len(),
                    });
                }
                f.coords()[*i]
            }
            Expr::Unary(func, inner) => func.apply(inner.eval_inner(space, f)?),
            Expr::Neg(inner) => -inner.eval_inner(space, f)?,
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.eval_inner(space, f)?;
                let b = rhs.eval_inner(space, f)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
        })
    }

    pub fn contains_coord(&self) -> bool {
        match self {
            Expr::Number(_) | Expr::Norm => false,
            Expr::Coord(_) => true,
            Expr::Unary(_, inner) | Expr::Neg(inner) => inner.contains_coord(),
            Expr::Binary(_, lhs, rhs) => lhs.contains_coord() || rhs.contains_coord(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Binary(BinOp::Pow, ..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, out: &mut String, min_prec: u8) {
        let prec = self.precedence();
        let parens = prec < min_prec;
        if parens {
            out.push('(');
        }
        match self {
            Expr::Number(v) => out.push_str(&format!("{v}")),
            Expr::Norm => out.push_str("norm"),
            Expr::Coord(i) => out.push_str(&format!("coord({i})")),
            Expr::Unary(func, inner) => {
                out.push_str(func.name());
                out.push('(');
                inner.fmt_prec(out, 0);
                out.push(')');
            }
            Expr::Neg(inner) => {
                out.push('-');
                // unary minus applies to an atom in the grammar
                inner.fmt_prec(out, 4);
            }
            Expr::Binary(op, lhs, rhs) => {
                let (sym, left_min, right_min) = match op {
                    BinOp::Add => (" + ", 1, 2),
                    BinOp::Sub => (" - ", 1, 2),
                    BinOp::Mul => (" * ", 2, 3),
                    BinOp::Div => (" / ", 2, 3),
                    // right-associative, and the left operand of ^ must be
                    // an atom
                    BinOp::Pow => ("^", 4, 3),
                };
                lhs.fmt_prec(out, left_min);
                out.push_str(sym);
                rhs.fmt_prec(out, right_min);
            }
        }
        if parens {
            out.push(')');
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        self.fmt_prec(&mut out, 0);
        f.write_str(&out)
    }
}

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
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                tokens.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                tokens.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let slice = &text[start..i];
                let value: f64 = slice.parse().map_err(|_| ParseError {
                    position: start,
                    expected: "a number".into(),
                    found: format!("'{slice}'"),
                })?;
                tokens.push((Tok::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    expected: "number, identifier, operator or parenthesis".into(),
                    found: format!("'{c}'"),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.tokens.get(self.cursor)
    }

    fn advance(&mut self) -> Option<(Tok, usize)> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some((tok, position)) => ParseError {
                position: *position,
                expected: expected.into(),
                found: tok.describe(),
            },
            None => ParseError {
                position: self.end,
                expected: expected.into(),
                found: "end of input".into(),
            },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some((t, _)) if *t == tok => {
                self.cursor += 1;
                Ok(())
            }
            _ => Err(self.error(expected)),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut node = self.term()?;
        while let Some((tok, _)) = self.peek() {
            let op = match tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.cursor += 1;
            let rhs = self.term()?;
            node = Expr::Binary(op, Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut node = self.factor()?;
        while let Some((tok, _)) = self.peek() {
            let op = match tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.cursor += 1;
            let rhs = self.factor()?;
            node = Expr::Binary(op, Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some((Tok::Caret, _)) = self.peek() {
            self.cursor += 1;
            let exponent = self.factor()?;
            return Ok(Expr::Binary(
                BinOp::Pow,
                Box::new(base),
                Box::new(exponent),
            ));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.advance() {
            Some((Tok::Num(v), _)) => Ok(Expr::Number(v)),
            Some((Tok::Minus, _)) => Ok(Expr::Neg(Box::new(self.atom()?))),
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some((Tok::Ident(name), position)) => match name.as_str() {
                "norm" => Ok(Expr::Norm),
                "coord" => {
                    self.expect(Tok::LParen, "'(' after coord")?;
                    let index = match self.advance() {
                        Some((Tok::Num(v), pos)) => {
                            if v.fract() != 0.0 || v < 0.0 || v > usize::MAX as f64 {
                                return Err(ParseError {
                                    position: pos,
                                    expected: "a nonnegative integer coordinate index".into(),
                                    found: format!("number {v}"),
                                });
                            }
                            v as usize
                        }
                        _ => {
                            self.cursor = self.cursor.saturating_sub(1);
                            return Err(self.error("a nonnegative integer coordinate index"));
                        }
                    };
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::Coord(index))
                }
                "exp" | "abs" | "sqrt" | "max0" => {
                    let func = match name.as_str() {
                        "exp" => UnaryFn::Exp,
                        "abs" => UnaryFn::Abs,
                        "sqrt" => UnaryFn::Sqrt,
                        _ => UnaryFn::Max0,
                    };
                    self.expect(Tok::LParen, "'(' after function name")?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::Unary(func, Box::new(inner)))
                }
                _ => Err(ParseError {
                    position,
                    expected: "one of 'norm', 'coord', 'exp', 'abs', 'sqrt', 'max0'".into(),
                    found: format!("identifier '{name}'"),
                }),
            },
            Some((tok, position)) => Err(ParseError {
                position,
                expected: "NUMBER, 'norm', 'coord(i)', FUNC '(' expr ')', '(' or '-'".into(),
                found: tok.describe(),
            }),
            None => Err(ParseError {
                position: self.end,
                expected: "NUMBER, 'norm', 'coord(i)', FUNC '(' expr ')', '(' or '-'".into(),
                found: "end of input".into(),
            }),
        }
    }
}

pub(crate) fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end: text.len(),
    };
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.error("end of input"));
    }
    Ok(expr)
}

//! Arithmetic expressions over the variables `t` and `u`.
//!
//! The grammar has `+`, `-`, `*`, `/` with the usual precedence, a
//! right-associative `^` that binds tighter than unary minus, parentheses,
//! and the functions `sin`, `cos`, `exp`, `log`, `pow`, and `abs`.  The
//! builtin `gammaf` is folded into a constant while parsing, so right-hand
//! sides written as `t^2 / gammaf(1.5)` cost nothing per evaluation.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use gfrac_core::special::gamma;
use gfrac_core::Rhs;

/// Unary functions usable in expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
        }
    }
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Literal or folded constant.
    Const(f64),
    /// The time variable `t`.
    Time,
    /// The state variable `u`.
    State,
    /// Unary negation.
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Exponentiation; also produced by the two-argument `pow`.
    Pow(Box<Expr>, Box<Expr>),
    /// Application of a unary function.
    Call(Func, Box<Expr>),
}

/// Parse failures, with the byte offset of the offending token.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}")]
    Syntax { offset: usize },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("`{name}` takes {expected} argument(s), got {got} (offset {offset})")]
    Arity {
        name: &'static str,
        offset: usize,
        expected: usize,
        got: usize,
    },
    #[error("`gammaf` needs a constant argument (offset {offset})")]
    NonConstantGamma { offset: usize },
    #[error("`gammaf({arg})` is not finite (offset {offset})")]
    GammaDomain { arg: f64, offset: usize },
}

/// Evaluation failures on otherwise well-formed trees.
#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("log of negative number {arg}")]
    LogDomain { arg: f64 },
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Clone, Debug, PartialEq)]
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
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
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
                let text = &src[start..i];
                let value =
                    f64::from_str(text).map_err(|_| ParseError::Syntax { offset: start })?;
                out.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => return Err(ParseError::Syntax { offset: i }),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax {
                offset: self.offset(),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Const(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => self.ident(name, offset),
            _ => Err(ParseError::Syntax { offset }),
        }
    }

    fn ident(&mut self, name: String, offset: usize) -> Result<Expr, ParseError> {
        match name.as_str() {
            "t" => return Ok(Expr::Time),
            "u" => return Ok(Expr::State),
            _ => {}
        }
        if self.peek() != Some(&Tok::LParen) {
            return Err(ParseError::UnknownIdentifier { name, offset });
        }
        let args = self.args()?;
        let func = match name.as_str() {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "abs" => Func::Abs,
            "pow" => {
                if args.len() != 2 {
                    return Err(ParseError::Arity {
                        name: "pow",
                        offset,
                        expected: 2,
                        got: args.len(),
                    });
                }
                let mut it = args.into_iter();
                let base = it.next().expect("length checked");
                let exponent = it.next().expect("length checked");
                return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
            }
            "gammaf" => {
                if args.len() != 1 {
                    return Err(ParseError::Arity {
                        name: "gammaf",
                        offset,
                        expected: 1,
                        got: args.len(),
                    });
                }
                let arg = &args[0];
                if arg.references_vars() {
                    return Err(ParseError::NonConstantGamma { offset });
                }
                let value = arg
                    .eval(0.0, 0.0)
                    .ok()
                    .and_then(|v| gamma(v).ok())
                    .ok_or(ParseError::GammaDomain {
                        arg: arg.eval(0.0, 0.0).unwrap_or(f64::NAN),
                        offset,
                    })?;
                return Ok(Expr::Const(value));
            }
            _ => return Err(ParseError::UnknownIdentifier { name, offset }),
        };
        if args.len() != 1 {
            return Err(ParseError::Arity {
                name: func.name(),
                offset,
                expected: 1,
                got: args.len(),
            });
        }
        let arg = args.into_iter().next().expect("length checked");
        Ok(Expr::Call(func, Box::new(arg)))
    }

    fn args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect(&Tok::LParen)?;
        let mut args = vec![self.expr()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(&Tok::RParen)?;
        Ok(args)
    }
}

/// Parses an expression in the variables `t` and `u`.
///
/// `^` is right-associative and binds tighter than unary minus, so `-t^2`
/// is the negation of `t^2`.
///
/// # Example
///
/// ```
/// use gfrac::expr::parse_expression;
///
/// let e = parse_expression("t^2 / gammaf(3)").unwrap();
/// assert!((e.eval(2.0, 0.0).unwrap() - 2.0).abs() < 1e-12);
///
/// let err = parse_expression("t + * u").unwrap_err();
/// assert_eq!(err.to_string(), "syntax error at offset 4");
/// ```
pub fn parse_expression(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let expr = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(ParseError::Syntax {
            offset: parser.offset(),
        });
    }
    Ok(expr)
}

impl Expr {
    /// True when the tree mentions `t` or `u`.
    pub fn references_vars(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Time | Expr::State => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.references_vars(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.references_vars() || b.references_vars(),
        }
    }

    /// Evaluates at `(t, u)`.
    ///
    /// Division by exact zero and `log` of a negative number are reported
    /// as errors; everything else follows IEEE semantics.
    pub fn eval(&self, t: f64, u: f64) -> Result<f64, EvalError> {
        match self {
            Expr::Const(v) => Ok(*v),
            Expr::Time => Ok(t),
            Expr::State => Ok(u),
            Expr::Neg(a) => Ok(-a.eval(t, u)?),
            Expr::Add(a, b) => Ok(a.eval(t, u)? + b.eval(t, u)?),
            Expr::Sub(a, b) => Ok(a.eval(t, u)? - b.eval(t, u)?),
            Expr::Mul(a, b) => Ok(a.eval(t, u)? * b.eval(t, u)?),
            Expr::Div(a, b) => {
                let denom = b.eval(t, u)?;
                if denom == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                Ok(a.eval(t, u)? / denom)
            }
            Expr::Pow(a, b) => Ok(a.eval(t, u)?.powf(b.eval(t, u)?)),
            Expr::Call(func, a) => {
                let x = a.eval(t, u)?;
                Ok(match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Log => {
                        if x < 0.0 {
                            return Err(EvalError::LogDomain { arg: x });
                        }
                        x.ln()
                    }
                    Func::Abs => x.abs(),
                })
            }
        }
    }

    /// Wraps the tree as a solver right-hand side.
    ///
    /// Evaluation errors surface as NaN, which the nonlinear solvers treat
    /// as non-convergence instead of silently continuing.
    pub fn into_rhs(self) -> Rhs {
        Arc::new(move |t, u| self.eval(t, u).unwrap_or(f64::NAN))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) => write!(f, "{v}"),
            Expr::Time => write!(f, "t"),
            Expr::State => write!(f, "u"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

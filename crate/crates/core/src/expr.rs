//! Expression language for the command line.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '.') unary)*
//! unary   := '-' unary | primary
//! primary := number | number 'i' | 'i' | theta_k | matrix | '(' sum ')'
//! matrix  := '[' '[' real ',' real ']' ',' '[' real ',' real ']' ']'
//! ```
//!
//! `.` is the ring product (complex, exterior, scalar-times-label, matrix)
//! and `*` is the star operation between labels. Evaluation is typed:
//!
//! | left | op | right | result |
//! |------|----|-------|--------|
//! | ℂ | `.` `+` | ℂ | ℂ |
//! | 𝔾 | `.` | 𝔾 | 𝔾 (exterior mode) |
//! | 𝔾 | `*` | 𝔾 | ℂ (star mode) |
//! | ℂ | `.` | 𝔾 | 𝔾 |
//!
//! Matrices combine with matrices, and with complex scalars through
//! `a+ib ↦ [[a,-b],[b,a]]`.
//!
//! [`parse_poly`] reads polynomials in `x1, x2, …` for the Moyal commands
//! using the same lexer.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exterior::GrassmannElement;
use crate::matrix::{phi, Mat2};
use crate::moyal::MultiPoly;
use crate::star::{mixed_product, star, OddFunctionSpec, ThetaLabel};
use crate::{ComplexValue, Error, GeneratorId, Result};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {position}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    /// 1-based column.
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type error in `{node}`: {rule}")]
pub struct TypeError {
    pub node: String,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Theta(u32),
    Var(u32),
    Plus,
    Minus,
    Star,
    Dot,
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Imag(v) => write!(f, "imaginary {v}i"),
            Tok::Theta(k) => write!(f, "theta_{k}"),
            Tok::Var(k) => write!(f, "x{k}"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Dot => write!(f, "'.'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBrack => write!(f, "'['"),
            Tok::RBrack => write!(f, "']'"),
            Tok::Comma => write!(f, "','"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn perr(position: usize, expected: &[&str], found: impl fmt::Display) -> ParseError {
    ParseError {
        position,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.to_string(),
    }
}

fn lex(input: &str) -> std::result::Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            '.' if !chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) => Some(Tok::Dot),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text
                .parse()
                .map_err(|_| perr(col, &["number"], format!("{text:?}")))?;
            if i < chars.len() && chars[i] == 'i' && !chars.get(i + 1).is_some_and(is_ident) {
                i += 1;
                out.push((Tok::Imag(v), col));
            } else {
                out.push((Tok::Num(v), col));
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && is_ident(&chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = if word == "i" {
                Tok::Imag(1.0)
            } else if let Some(k) = word.strip_prefix("theta_") {
                match k.parse::<u32>() {
                    Ok(0) => {
                        return Err(perr(col, &["generator index >= 1"], "theta_0"));
                    }
                    Ok(k) => Tok::Theta(k),
                    Err(_) => return Err(perr(col, &["theta_<index>"], format!("{word:?}"))),
                }
            } else if let Some(k) = word.strip_prefix('x').filter(|k| !k.is_empty()) {
                match k.parse::<u32>() {
                    Ok(0) => return Err(perr(col, &["variable index >= 1"], "x0")),
                    Ok(k) => Tok::Var(k),
                    Err(_) => return Err(perr(col, &["x<index>"], format!("{word:?}"))),
                }
            } else {
                return Err(perr(
                    col,
                    &["number", "i", "theta_<index>", "x<index>"],
                    format!("identifier {word:?}"),
                ));
            };
            out.push((tok, col));
            continue;
        }
        return Err(perr(col, &["expression"], format!("character {c:?}")));
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

fn is_ident(c: &char) -> bool {
    c.is_ascii_alphanumeric() || *c == '_'
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Complex(ComplexValue),
    Generator(GeneratorId),
    Matrix(Mat2),
    Neg(Box<Expression>),
    Add(Box<Expression>, Box<Expression>),
    Sub(Box<Expression>, Box<Expression>),
    /// `.`
    Product(Box<Expression>, Box<Expression>),
    /// `*`
    Star(Box<Expression>, Box<Expression>),
    Group(Box<Expression>),
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Complex(z) => write!(f, "{z}"),
            Expression::Generator(g) => write!(f, "theta_{}", g.index()),
            Expression::Matrix(m) => write!(
                f,
                "[[{},{}],[{},{}]]",
                m.m[0][0], m.m[0][1], m.m[1][0], m.m[1][1]
            ),
            Expression::Neg(e) => write!(f, "-{e}"),
            Expression::Add(l, r) => write!(f, "{l} + {r}"),
            Expression::Sub(l, r) => write!(f, "{l} - {r}"),
            Expression::Product(l, r) => write!(f, "{l} . {r}"),
            Expression::Star(l, r) => write!(f, "{l} * {r}"),
            Expression::Group(e) => write!(f, "({e})"),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn new(input: &str) -> std::result::Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(input)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, label: &str) -> std::result::Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(perr(self.col(), &[label], self.peek()))
        }
    }

    fn finish(&self) -> std::result::Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            t => Err(perr(self.col(), &["operator", "end of input"], t)),
        }
    }

    fn sum(&mut self) -> std::result::Result<Expression, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expression::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expression::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> std::result::Result<Expression, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Dot => {
                    self.bump();
                    lhs = Expression::Product(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Star => {
                    self.bump();
                    lhs = Expression::Star(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Expression, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expression::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> std::result::Result<Expression, ParseError> {
        let col = self.col();
        match self.bump() {
            Tok::Num(v) => Ok(Expression::Complex(ComplexValue::real(v))),
            Tok::Imag(v) => Ok(Expression::Complex(ComplexValue { re: 0.0, im: v })),
            Tok::Theta(k) => Ok(Expression::Generator(
                GeneratorId::new(k).expect("lexer rejects theta_0"),
            )),
            Tok::LParen => {
                let inner = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expression::Group(Box::new(inner)))
            }
            Tok::LBrack => self.matrix(),
            t => Err(perr(
                col,
                &["number", "i", "theta_<index>", "'['", "'('", "'-'"],
                t,
            )),
        }
    }

    fn real(&mut self) -> std::result::Result<f64, ParseError> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let col = self.col();
        match self.bump() {
            Tok::Num(v) => Ok(if negative { -v } else { v }),
            t => Err(perr(col, &["real number"], t)),
        }
    }

    fn matrix(&mut self) -> std::result::Result<Expression, ParseError> {
        let mut rows = [[0.0; 2]; 2];
        for (r, row) in rows.iter_mut().enumerate() {
            if r > 0 {
                self.expect(Tok::Comma, "','")?;
            }
            self.expect(Tok::LBrack, "'['")?;
            row[0] = self.real()?;
            self.expect(Tok::Comma, "','")?;
            row[1] = self.real()?;
            self.expect(Tok::RBrack, "']' (matrices are 2x2)")?;
        }
        self.expect(Tok::RBrack, "']' (matrices are 2x2)")?;
        Ok(Expression::Matrix(Mat2::from_rows(rows)))
    }
}

pub fn parse(input: &str) -> std::result::Result<Expression, ParseError> {
    let mut p = Parser::new(input)?;
    let e = p.sum()?;
    p.finish()?;
    Ok(e)
}

/// Whether `θ·θ` is the exterior product or `θ*θ` the star operation on
/// complex labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Exterior,
    Star,
}

#[derive(Debug, Clone)]
pub struct EvalContext {
    pub mode: Mode,
    pub function: OddFunctionSpec,
    /// Complex value bound to each `theta_k` in star mode.
    pub labels: BTreeMap<u32, ComplexValue>,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext {
            mode: Mode::Exterior,
            function: OddFunctionSpec::Identity,
            labels: BTreeMap::new(),
        }
    }
}

/// Evaluation result, one variant per carrier type.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Value {
    Complex(ComplexValue),
    Grassmann(GrassmannElement),
    Theta(ThetaLabel),
    Matrix(Mat2),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Complex(_) => "C",
            Value::Grassmann(_) => "G (exterior element)",
            Value::Theta(_) => "G (theta label)",
            Value::Matrix(_) => "M",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Complex(z) => write!(f, "{z}"),
            Value::Grassmann(g) => write!(f, "{g}"),
            Value::Theta(t) => write!(f, "{t}"),
            Value::Matrix(m) => write!(
                f,
                "[[{}, {}], [{}, {}]]",
                m.m[0][0], m.m[0][1], m.m[1][0], m.m[1][1]
            ),
        }
    }
}

fn type_err(node: &Expression, rule: impl Into<String>) -> Error {
    Error::Type(TypeError {
        node: node.to_string(),
        rule: rule.into(),
    })
}

pub fn eval(e: &Expression, ctx: &EvalContext) -> Result<Value> {
    use Value::*;
    match e {
        Expression::Complex(z) => Ok(Complex(*z)),
        Expression::Matrix(m) => Ok(Matrix(*m)),
        Expression::Group(inner) => eval(inner, ctx),
        Expression::Generator(g) => match ctx.mode {
            Mode::Exterior => Ok(Grassmann(GrassmannElement::generator(*g))),
            Mode::Star => ctx
                .labels
                .get(&g.index())
                .map(|z| Theta(ThetaLabel::new(*z)))
                .ok_or_else(|| {
                    Error::Usage(format!(
                        "theta_{0} has no label in star mode; pass --label theta_{0}=<complex>",
                        g.index()
                    ))
                }),
        },
        Expression::Neg(inner) => Ok(match eval(inner, ctx)? {
            Complex(z) => Complex(-z),
            Grassmann(g) => Grassmann(-g),
            Theta(t) => Theta(mixed_product(-ComplexValue::ONE, t)),
            Matrix(m) => Matrix(-m),
        }),
        Expression::Add(l, r) => add(e, eval(l, ctx)?, eval(r, ctx)?),
        Expression::Sub(l, r) => {
            let rhs = eval(&Expression::Neg(r.clone()), ctx)?;
            add(e, eval(l, ctx)?, rhs)
        }
        Expression::Product(l, r) => dot(e, eval(l, ctx)?, eval(r, ctx)?),
        Expression::Star(l, r) => {
            let (a, b) = (eval(l, ctx)?, eval(r, ctx)?);
            match (&a, &b) {
                (Theta(x), Theta(y)) => Ok(Complex(star(&ctx.function, *x, *y))),
                _ if ctx.mode == Mode::Exterior => Err(type_err(
                    e,
                    "'*' is the star operation on theta labels; it needs --mode star (use '.' for the exterior product)",
                )),
                _ => Err(type_err(
                    e,
                    format!(
                        "'*' is defined only for G x G -> C, got {} * {}",
                        a.type_name(),
                        b.type_name()
                    ),
                )),
            }
        }
    }
}

fn add(node: &Expression, a: Value, b: Value) -> Result<Value> {
    use Value::*;
    Ok(match (a, b) {
        (Complex(x), Complex(y)) => Complex(x + y),
        (Grassmann(x), Grassmann(y)) => Grassmann(&x + &y),
        (Complex(z), Grassmann(g)) | (Grassmann(g), Complex(z)) => {
            Grassmann(&GrassmannElement::scalar(z) + &g)
        }
        (Matrix(x), Matrix(y)) => Matrix(x + y),
        (Complex(z), Matrix(m)) | (Matrix(m), Complex(z)) => Matrix(phi(z).to_mat2() + m),
        (a, b) => {
            return Err(type_err(
                node,
                format!(
                    "no sum is defined for {} + {} (theta labels only combine through '*' and scalar '.')",
                    a.type_name(),
                    b.type_name()
                ),
            ))
        }
    })
}

fn dot(node: &Expression, a: Value, b: Value) -> Result<Value> {
    use Value::*;
    Ok(match (a, b) {
        (Complex(x), Complex(y)) => Complex(x * y),
        (Grassmann(x), Grassmann(y)) => Grassmann(&x * &y),
        (Complex(z), Grassmann(g)) | (Grassmann(g), Complex(z)) => Grassmann(g.scale(z)),
        (Complex(z), Theta(t)) | (Theta(t), Complex(z)) => Theta(mixed_product(z, t)),
        (Matrix(x), Matrix(y)) => Matrix(x * y),
        (Complex(z), Matrix(m)) => Matrix(phi(z).to_mat2() * m),
        (Matrix(m), Complex(z)) => Matrix(m * phi(z).to_mat2()),
        (Theta(_), Theta(_)) => {
            return Err(type_err(
                node,
                "theta labels multiply through '*' (G x G -> C); '.' between labels is undefined",
            ))
        }
        (a, b) => {
            return Err(type_err(
                node,
                format!(
                    "no product is defined for {} . {}",
                    a.type_name(),
                    b.type_name()
                ),
            ))
        }
    })
}

/// Parses and evaluates a closed complex expression such as `1-2.5i`.
pub fn parse_complex(text: &str) -> Result<ComplexValue> {
    let e = parse(text)?;
    match eval(&e, &EvalContext::default())? {
        Value::Complex(z) if z.is_finite() => Ok(z),
        Value::Complex(_) => Err(Error::NonFinite("complex literal")),
        other => Err(type_err(
            &e,
            format!("expected a complex number, got {}", other.type_name()),
        )),
    }
}

/// Comma-separated complex numbers, e.g. `0,1+i,-2i`.
pub fn parse_points(text: &str) -> Result<Vec<ComplexValue>> {
    text.split(',').map(parse_complex).collect()
}

/// Polynomial over `x1 … x{nvars}`, e.g. `3x1^2*x2 - (1+2i).x2 + 4`.
///
/// Products are written with `*`, `.` or juxtaposition; powers with `^`.
pub fn parse_poly(text: &str, nvars: usize) -> Result<MultiPoly> {
    let mut p = Parser::new(text)?;
    let out = poly_sum(&mut p, nvars)?;
    p.finish()?;
    Ok(out)
}

fn poly_sum(p: &mut Parser, n: usize) -> Result<MultiPoly> {
    let mut acc = poly_product(p, n)?;
    loop {
        match p.peek() {
            Tok::Plus => {
                p.bump();
                acc = acc.try_add(&poly_product(p, n)?)?;
            }
            Tok::Minus => {
                p.bump();
                acc = acc.try_sub(&poly_product(p, n)?)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn poly_product(p: &mut Parser, n: usize) -> Result<MultiPoly> {
    let mut acc = poly_unary(p, n)?;
    loop {
        match p.peek() {
            Tok::Star | Tok::Dot => {
                p.bump();
                acc = acc.try_mul(&poly_unary(p, n)?)?;
            }
            Tok::Var(_) | Tok::LParen => acc = acc.try_mul(&poly_unary(p, n)?)?,
            _ => return Ok(acc),
        }
    }
}

fn poly_unary(p: &mut Parser, n: usize) -> Result<MultiPoly> {
    if *p.peek() == Tok::Minus {
        p.bump();
        return Ok(-&poly_unary(p, n)?);
    }
    let base = poly_primary(p, n)?;
    if *p.peek() != Tok::Caret {
        return Ok(base);
    }
    p.bump();
    let col = p.col();
    let exp = match p.bump() {
        Tok::Num(v) if v.fract() == 0.0 && (0.0..=64.0).contains(&v) => v as u32,
        t => return Err(perr(col, &["integer exponent in 0..=64"], t).into()),
    };
    let mut out = MultiPoly::constant(n, ComplexValue::ONE);
    for _ in 0..exp {
        out = out.try_mul(&base)?;
    }
    Ok(out)
}

fn poly_primary(p: &mut Parser, n: usize) -> Result<MultiPoly> {
    let col = p.col();
    match p.bump() {
        Tok::Num(v) => Ok(MultiPoly::constant(n, ComplexValue::real(v))),
        Tok::Imag(v) => Ok(MultiPoly::constant(n, ComplexValue { re: 0.0, im: v })),
        Tok::Var(k) => {
            let k = k as usize;
            if k > n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: k,
                });
            }
            MultiPoly::var(n, k)
        }
        Tok::LParen => {
            let inner = poly_sum(p, n)?;
            p.expect(Tok::RParen, "')'")?;
            Ok(inner)
        }
        t => Err(perr(col, &["number", "i", "x<index>", "'('", "'-'"], t).into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Monomial;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im).unwrap()
    }

    #[test]
    fn parses_star_sum() {
        let e = parse("theta_1 * theta_2 + theta_2 * theta_1").unwrap();
        match e {
            Expression::Add(l, r) => {
                assert!(matches!(*l, Expression::Star(..)));
                assert!(matches!(*r, Expression::Star(..)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_mixed_product() {
        let e = parse("(1+2i) . theta_3").unwrap();
        match e {
            Expression::Product(l, r) => {
                assert!(matches!(*l, Expression::Group(_)));
                assert_eq!(*r, Expression::Generator(GeneratorId::new(3).unwrap()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn theta_zero_is_rejected() {
        let err = parse("theta_0").unwrap_err();
        assert_eq!(err.position, 1);
    }

    #[test]
    fn error_positions() {
        let err = parse("1 + * 2").unwrap_err();
        assert_eq!(err.position, 5);
        let err = parse("(1 + 2").unwrap_err();
        assert_eq!(err.position, 7);
        assert_eq!(err.expected, vec!["')'"]);
        let err = parse("[[1,2],[3]]").unwrap_err();
        assert_eq!(err.position, 10);
        assert!(parse("foo").is_err());
        assert!(parse("1 2").is_err());
    }

    #[test]
    fn precedence() {
        // unary minus binds tighter than '.', which binds tighter than '+'
        let e = parse("-1 . 2 + 3").unwrap();
        assert_eq!(
            eval(&e, &EvalContext::default()).unwrap(),
            Value::Complex(c(1., 0.))
        );
        let e = parse("2 - 3 - 4").unwrap();
        assert_eq!(
            eval(&e, &EvalContext::default()).unwrap(),
            Value::Complex(c(-5., 0.))
        );
        let e = parse("1-2i").unwrap();
        assert_eq!(
            eval(&e, &EvalContext::default()).unwrap(),
            Value::Complex(c(1., -2.))
        );
    }

    #[test]
    fn eval_star_mode_cube() {
        let ctx = EvalContext {
            mode: Mode::Star,
            function: OddFunctionSpec::Cube,
            labels: BTreeMap::from([(1, c(2., 0.)), (2, c(1., 0.))]),
        };
        let e = parse("theta_1 * theta_2 + theta_2 * theta_1").unwrap();
        assert_eq!(eval(&e, &ctx).unwrap(), Value::Complex(ComplexValue::ZERO));
        let e = parse("theta_1 * theta_2").unwrap();
        assert_eq!(eval(&e, &ctx).unwrap(), Value::Complex(c(1., 0.)));
    }

    #[test]
    fn eval_exterior_square_vanishes() {
        let e = parse("theta_1 . theta_1").unwrap();
        assert_eq!(
            eval(&e, &EvalContext::default()).unwrap(),
            Value::Grassmann(GrassmannElement::zero())
        );
        let e = parse("theta_2 . theta_1").unwrap();
        let expected = GrassmannElement::from_terms([(
            Monomial::from_indices(vec![1, 2]).unwrap(),
            c(-1., 0.),
        )]);
        assert_eq!(
            eval(&e, &EvalContext::default()).unwrap(),
            Value::Grassmann(expected)
        );
    }

    #[test]
    fn eval_complex_product() {
        let e = parse("(1+0i) . (2+0i)").unwrap();
        assert_eq!(
            eval(&e, &EvalContext::default()).unwrap(),
            Value::Complex(c(2., 0.))
        );
    }

    #[test]
    fn typing_rules() {
        let star_ctx = EvalContext {
            mode: Mode::Star,
            function: OddFunctionSpec::Identity,
            labels: BTreeMap::from([(1, c(1., 1.)), (2, c(0., 0.))]),
        };
        // C . G -> G
        let v = eval(&parse("2 . theta_1").unwrap(), &star_ctx).unwrap();
        assert_eq!(v, Value::Theta(ThetaLabel::new(c(2., 2.))));
        // G . G is undefined in star mode
        let err = eval(&parse("theta_1 . theta_2").unwrap(), &star_ctx).unwrap_err();
        assert!(matches!(err, Error::Type(_)));
        // G + G is undefined for labels
        assert!(matches!(
            eval(&parse("theta_1 + theta_2").unwrap(), &star_ctx),
            Err(Error::Type(_))
        ));
        // '*' with a scalar operand
        assert!(matches!(
            eval(&parse("2 * theta_1").unwrap(), &star_ctx),
            Err(Error::Type(_))
        ));
        // unbound label
        assert!(matches!(
            eval(&parse("theta_9 * theta_1").unwrap(), &star_ctx),
            Err(Error::Usage(_))
        ));
        // '*' in exterior mode
        assert!(matches!(
            eval(
                &parse("theta_1 * theta_2").unwrap(),
                &EvalContext::default()
            ),
            Err(Error::Type(_))
        ));
        // matrices and the complex embedding
        let v = eval(
            &parse("i . [[1,0],[0,1]]").unwrap(),
            &EvalContext::default(),
        )
        .unwrap();
        assert_eq!(v, Value::Matrix(Mat2::from_rows([[0., -1.], [1., 0.]])));
        assert!(matches!(
            eval(
                &parse("theta_1 . [[1,0],[0,1]]").unwrap(),
                &EvalContext::default()
            ),
            Err(Error::Type(_))
        ));
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("3").unwrap(), c(3., 0.));
        assert_eq!(parse_complex("2.5i").unwrap(), c(0., 2.5));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1., 2.));
        assert_eq!(parse_complex("-1-i").unwrap(), c(-1., -1.));
        assert_eq!(parse_complex("1e-3").unwrap(), c(0.001, 0.));
        assert!(parse_complex("theta_1").is_err());
        assert_eq!(
            parse_points("0, 1, 1+i").unwrap(),
            vec![c(0., 0.), c(1., 0.), c(1., 1.)]
        );
    }

    #[test]
    fn polynomials() {
        let f = parse_poly("3x1^2*x2 - x2 + 5", 2).unwrap();
        let expected = MultiPoly::from_terms(
            2,
            [
                (vec![2, 1], c(3., 0.)),
                (vec![0, 1], c(-1., 0.)),
                (vec![0, 0], c(5., 0.)),
            ],
        )
        .unwrap();
        assert_eq!(f, expected);
        let g = parse_poly("(x1 + x2)^2", 2).unwrap();
        assert_eq!(g.coefficient(&[1, 1]), c(2., 0.));
        assert_eq!(
            parse_poly("(1+2i).x1", 1).unwrap().coefficient(&[1]),
            c(1., 2.)
        );
        assert!(matches!(
            parse_poly("x3", 2),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(parse_poly("x1^", 2), Err(Error::Parse(_))));
        assert!(matches!(parse_poly("theta_1", 2), Err(Error::Parse(_))));
    }
}

//! Tokens and algebraic expressions shared by the text formats.
//!
//! Identifiers are `[A-Za-z_][A-Za-z0-9_]*`, optionally followed by bracket groups
//! (`t[x^2]`, `a[x1*x2]`) and `.digits` suffixes (`x.1`). `@` is the tensor sign and
//! binds tighter than `*`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact_algebra::algebra::{FreeAlgebra, UnitalAlgebra};
use crate::exact_algebra::field::{FieldSpec, Scalar};
use crate::exact_algebra::poly::NCPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    Int(BigUint),
    Arrow,
    Sym(char),
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Int(n) => write!(f, "`{n}`"),
            Token::Arrow => write!(f, "`->`"),
            Token::Sym(c) => write!(f, "`{c}`"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub token: Token,
    pub line: usize,
    pub col: usize,
}

const SYMBOLS: &str = "{}();:,=+-*/^@[]";

pub fn syntax_error(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

/// Splits text into tokens. `#` starts a comment running to the end of the line.
pub fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c.is_whitespace() {
            bump!();
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump!();
            }
            out.push(Spanned { token: Token::Int(s.parse().unwrap()), line: l0, col: c0 });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump!();
            }
            while i < chars.len() && chars[i] == '[' {
                let mut depth = 0usize;
                loop {
                    if i >= chars.len() || chars[i] == '\n' {
                        return Err(syntax_error(l0, c0, "unterminated `[` in identifier"));
                    }
                    let ch = chars[i];
                    if !ch.is_whitespace() {
                        s.push(ch);
                    }
                    bump!();
                    match ch {
                        '[' => depth += 1,
                        ']' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                }
            }
            while i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                s.push('.');
                bump!();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    bump!();
                }
            }
            out.push(Spanned { token: Token::Ident(s), line: l0, col: c0 });
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            bump!();
            bump!();
            out.push(Spanned { token: Token::Arrow, line: l0, col: c0 });
        } else if SYMBOLS.contains(c) {
            bump!();
            out.push(Spanned { token: Token::Sym(c), line: l0, col: c0 });
        } else {
            return Err(syntax_error(l0, c0, format!("unexpected character `{c}`")));
        }
    }
    out.push(Spanned { token: Token::Eof, line, col });
    Ok(out)
}

/// A parsed algebraic expression. Rendering and re-parsing reproduce the same tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigUint),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Tensor(..) => 3,
            Expr::Neg(_) => 4,
            Expr::Pow(..) => 5,
            Expr::Int(_) | Expr::Name(_) => 6,
        }
    }

    fn render_at(&self, min: u8) -> String {
        let s = match self {
            Expr::Int(n) => n.to_string(),
            Expr::Name(s) => s.clone(),
            Expr::Neg(a) => format!("-{}", a.render_at(4)),
            Expr::Add(a, b) => format!("{} + {}", a.render_at(1), b.render_at(2)),
            Expr::Sub(a, b) => format!("{} - {}", a.render_at(1), b.render_at(2)),
            Expr::Mul(a, b) => format!("{}*{}", a.render_at(2), b.render_at(3)),
            Expr::Div(a, b) => format!("{}/{}", a.render_at(2), b.render_at(3)),
            Expr::Tensor(a, b) => format!("{} @ {}", a.render_at(3), b.render_at(4)),
            Expr::Pow(a, n) => format!("{}^{n}", a.render_at(6)),
        };
        if self.prec() < min {
            format!("({s})")
        } else {
            s
        }
    }

    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Int(_) => {}
            Expr::Name(s) => out.push(s),
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_names(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Tensor(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_at(0))
    }
}

/// Recursive-descent cursor over a token stream.
pub struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Spanned>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos].token
    }

    pub fn peek_at(&self, k: usize) -> &Token {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].token
    }

    pub fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].token.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        syntax_error(l, c, msg)
    }

    pub fn at_sym(&self, c: char) -> bool {
        *self.peek() == Token::Sym(c)
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.at_sym(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", self.peek())))
        }
    }

    pub fn expect_arrow(&mut self) -> Result<()> {
        if *self.peek() == Token::Arrow {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!("expected `->`, found {}", self.peek())))
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Token::Ident(s) => {
                self.advance();
                Ok(s)
            }
            t => Err(self.error(format!("expected identifier, found {t}"))),
        }
    }

    pub fn int(&mut self) -> Result<BigUint> {
        match self.peek().clone() {
            Token::Int(n) => {
                self.advance();
                Ok(n)
            }
            t => Err(self.error(format!("expected integer, found {t}"))),
        }
    }

    pub fn expect_eof(&self) -> Result<()> {
        match self.peek() {
            Token::Eof => Ok(()),
            t => Err(self.error(format!("unexpected {t}"))),
        }
    }

    fn starts_operand(&self) -> bool {
        matches!(self.peek(), Token::Int(_) | Token::Ident(_) | Token::Sym('(') | Token::Sym('-'))
    }

    /// Consumes a binary operator `c`, failing at the operator when no operand follows.
    fn binary_op(&mut self, c: char) -> Result<bool> {
        let at = self.here();
        if !self.eat_sym(c) {
            return Ok(false);
        }
        if !self.starts_operand() {
            return Err(syntax_error(at.0, at.1, format!("dangling operator `{c}` before {}", self.peek())));
        }
        Ok(true)
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            if self.binary_op('+')? {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.binary_op('-')? {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.tensor()?;
        loop {
            if self.binary_op('*')? {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.tensor()?));
            } else if self.binary_op('/')? {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.tensor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn tensor(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.binary_op('@')? {
            lhs = Expr::Tensor(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat_sym('^') {
            let n = self.int()?;
            let n: u32 = n.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Token::Int(n) => {
                self.advance();
                Ok(Expr::Int(n))
            }
            Token::Ident(s) => {
                self.advance();
                Ok(Expr::Name(s))
            }
            Token::Sym('(') => {
                self.advance();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            t => Err(self.error(format!("expected expression, found {t}"))),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut c = Cursor::new(tokenize(text)?);
    let e = c.expr()?;
    c.expect_eof()?;
    Ok(e)
}

/// Evaluates an expression with no names to a field element.
pub fn eval_scalar(e: &Expr, field: FieldSpec) -> Result<Scalar> {
    Ok(match e {
        Expr::Int(n) => field.from_rational(&BigRational::from_integer(BigInt::from(n.clone())))?,
        Expr::Name(s) => return Err(Error::Invalid(format!("`{s}` is not a scalar"))),
        Expr::Neg(a) => field.neg(&eval_scalar(a, field)?),
        Expr::Add(a, b) => field.add(&eval_scalar(a, field)?, &eval_scalar(b, field)?),
        Expr::Sub(a, b) => field.sub(&eval_scalar(a, field)?, &eval_scalar(b, field)?),
        Expr::Mul(a, b) => field.mul(&eval_scalar(a, field)?, &eval_scalar(b, field)?),
        Expr::Div(a, b) => {
            let d = eval_scalar(b, field)?;
            let inv = field.inv(&d).ok_or_else(|| Error::NotInvertible(b.to_string()))?;
            field.mul(&eval_scalar(a, field)?, &inv)
        }
        Expr::Pow(a, n) => {
            let base = eval_scalar(a, field)?;
            (0..*n).fold(field.one(), |acc, _| field.mul(&acc, &base))
        }
        Expr::Tensor(..) => return Err(Error::Invalid(format!("`{e}` is a tensor, not a scalar"))),
    })
}

/// Evaluates an expression in an algebra, resolving names through `lookup`.
pub fn eval_in<A: UnitalAlgebra>(e: &Expr, alg: &A, lookup: &dyn Fn(&str) -> Result<A::Elem>) -> Result<A::Elem> {
    let f = alg.field();
    Ok(match e {
        Expr::Int(_) => alg.scale(&eval_scalar(e, f)?, &alg.one()),
        Expr::Name(s) => lookup(s)?,
        Expr::Neg(a) => alg.scale(&f.from_int(-1), &eval_in(a, alg, lookup)?),
        Expr::Add(a, b) => alg.add(&eval_in(a, alg, lookup)?, &eval_in(b, alg, lookup)?),
        Expr::Sub(a, b) => {
            let nb = alg.scale(&f.from_int(-1), &eval_in(b, alg, lookup)?);
            alg.add(&eval_in(a, alg, lookup)?, &nb)
        }
        Expr::Mul(a, b) => alg.mul(&eval_in(a, alg, lookup)?, &eval_in(b, alg, lookup)?)?,
        Expr::Div(a, b) => {
            let d = eval_scalar(b, f)?;
            let inv = f.inv(&d).ok_or_else(|| Error::NotInvertible(b.to_string()))?;
            alg.scale(&inv, &eval_in(a, alg, lookup)?)
        }
        Expr::Pow(a, n) => {
            let base = eval_in(a, alg, lookup)?;
            let mut acc = alg.one();
            for _ in 0..*n {
                acc = alg.mul(&acc, &base)?;
            }
            acc
        }
        Expr::Tensor(..) => return Err(Error::Invalid(format!("unexpected tensor `{e}`"))),
    })
}

/// Evaluates an expression of pure tensors `l @ r` into a list of pairs whose sum it denotes.
pub fn eval_tensor<L: UnitalAlgebra, R: UnitalAlgebra>(
    e: &Expr,
    left: &L,
    lf: &dyn Fn(&str) -> Result<L::Elem>,
    right: &R,
    rf: &dyn Fn(&str) -> Result<R::Elem>,
) -> Result<Vec<(L::Elem, R::Elem)>> {
    let f = left.field();
    let scaled = |c: &Scalar, v: Vec<(L::Elem, R::Elem)>| v.into_iter().map(|(l, r)| (left.scale(c, &l), r)).collect();
    Ok(match e {
        Expr::Tensor(a, b) => {
            if matches!(**a, Expr::Tensor(..)) || matches!(**b, Expr::Tensor(..)) {
                return Err(Error::Unsupported(format!("only two tensor factors are supported: `{e}`")));
            }
            vec![(eval_in(a, left, lf)?, eval_in(b, right, rf)?)]
        }
        Expr::Add(a, b) => {
            let mut v = eval_tensor(a, left, lf, right, rf)?;
            v.extend(eval_tensor(b, left, lf, right, rf)?);
            v
        }
        Expr::Sub(a, b) => {
            let mut v = eval_tensor(a, left, lf, right, rf)?;
            v.extend(scaled(&f.from_int(-1), eval_tensor(b, left, lf, right, rf)?));
            v
        }
        Expr::Neg(a) => scaled(&f.from_int(-1), eval_tensor(a, left, lf, right, rf)?),
        Expr::Mul(a, b) => {
            if let Ok(c) = eval_scalar(a, f) {
                return Ok(scaled(&c, eval_tensor(b, left, lf, right, rf)?));
            }
            if let Ok(c) = eval_scalar(b, f) {
                return Ok(scaled(&c, eval_tensor(a, left, lf, right, rf)?));
            }
            let x = eval_tensor(a, left, lf, right, rf)?;
            let y = eval_tensor(b, left, lf, right, rf)?;
            let mut out = Vec::with_capacity(x.len() * y.len());
            for (l1, r1) in &x {
                for (l2, r2) in &y {
                    out.push((left.mul(l1, l2)?, right.mul(r1, r2)?));
                }
            }
            out
        }
        Expr::Div(a, b) => {
            let d = eval_scalar(b, f)?;
            let inv = f.inv(&d).ok_or_else(|| Error::NotInvertible(b.to_string()))?;
            scaled(&inv, eval_tensor(a, left, lf, right, rf)?)
        }
        Expr::Pow(a, n) => {
            let base = eval_tensor(a, left, lf, right, rf)?;
            let mut acc = vec![(left.one(), right.one())];
            for _ in 0..*n {
                let mut next = Vec::new();
                for (l1, r1) in &acc {
                    for (l2, r2) in &base {
                        next.push((left.mul(l1, l2)?, right.mul(r1, r2)?));
                    }
                }
                acc = next;
            }
            acc
        }
        Expr::Int(_) => vec![(left.scale(&eval_scalar(e, f)?, &left.one()), right.one())],
        Expr::Name(s) => return Err(Error::Invalid(format!("`{s}` must appear inside a tensor `a @ b`"))),
    })
}

/// Evaluates an expression as a polynomial over the named generators.
pub fn expr_to_poly(e: &Expr, names: &[String], field: FieldSpec) -> Result<NCPolynomial> {
    let lookup = |s: &str| -> Result<NCPolynomial> {
        names
            .iter()
            .position(|n| n == s)
            .map(|i| NCPolynomial::var(field, i as u32))
            .ok_or_else(|| Error::UnknownGenerator(s.to_string()))
    };
    eval_in(e, &FreeAlgebra(field), &lookup)
}

/// Parses `text` as a polynomial over the named generators.
pub fn parse_poly_in(text: &str, names: &[String], field: FieldSpec) -> Result<NCPolynomial> {
    expr_to_poly(&parse_expr(text)?, names, field)
}

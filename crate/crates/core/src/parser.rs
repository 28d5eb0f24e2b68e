//! Recursive-descent parser for Laurent polynomials in `z` and for sums of
//! exponentials `W*e(A)`, plus the matching pretty-printer.
//!
//! Precedence from tightest to loosest: `^` (right associative, integer
//! exponents only), unary `-`, `*` and `/`, binary `+` and `-`.
//! Multiplication is always explicit. Numeric literals are exact decimals;
//! a trailing `i` makes them imaginary (`2i`, `0.5i`). Coefficient
//! arithmetic stays exact over the Gaussian rationals until it overflows
//! or meets `pi` or an irrational `sqrt`, at which point it continues in
//! floating point. The full grammar is in `docs/grammar.md`.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use num_complex::Complex64;
use num_rational::{Ratio, Rational64};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use crate::expsum::{ExactReal, ExponentialSum};
use crate::laurent::LaurentPolynomial;

const MAX_EXPONENT: i64 = 10_000;
const MAX_MULTI_TERM_POWER: i64 = 64;
const MAX_TERMS: usize = 4096;
const MAX_DEPTH: usize = 200;

/// A parse failure located at a byte offset of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub offset: usize,
    pub message: String,
    pub expected: Option<&'static str>,
}

impl ParseDiagnostic {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        Self {
            offset,
            message: message.into(),
            expected: None,
        }
    }

    fn expecting(mut self, expected: &'static str) -> Self {
        self.expected = Some(expected);
        self
    }

    /// Two-line rendering of the input with a caret under the offset.
    pub fn caret(&self, text: &str) -> String {
        let column = text
            .get(..self.offset.min(text.len()))
            .map_or(self.offset, |prefix| prefix.chars().count());
        let mut out = String::with_capacity(text.len() * 2 + 2);
        out.push_str(text);
        out.push('\n');
        out.extend(core::iter::repeat(' ').take(column));
        out.push('^');
        out
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)?;
        if let Some(expected) = self.expected {
            write!(f, " (expected {expected})")?;
        }
        Ok(())
    }
}

impl core::error::Error for ParseDiagnostic {}

type PResult<T> = core::result::Result<T, ParseDiagnostic>;
type OpResult<T> = core::result::Result<T, &'static str>;

/// Parses a Laurent polynomial in `z`.
///
/// ```
/// let p = rosette_core::parser::parse_laurent("(z^3 - z^(-1))/(2i)").unwrap();
/// assert_eq!(p.min_exponent(), Some(-1));
/// ```
pub fn parse_laurent(text: &str) -> PResult<LaurentPolynomial> {
    let mut parser = Parser::new(text)?;
    let value = parser.parse_all::<PolyAlgebra>()?;
    let mut terms = Vec::with_capacity(value.len());
    for (n, c) in value {
        let c = c.to_complex();
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(ParseDiagnostic::new(0, "coefficient is not finite"));
        }
        terms.push((n, c));
    }
    let p = LaurentPolynomial::from_terms(terms);
    if p.is_zero() {
        return Err(ParseDiagnostic::new(0, "expression is identically zero"));
    }
    Ok(p)
}

/// Parses a constant complex number such as `1-2i` or `sqrt(2)/2`.
/// Zero is allowed; any `z` term is rejected.
pub fn parse_constant(text: &str) -> PResult<Complex64> {
    let mut parser = Parser::new(text)?;
    let value = parser.parse_all::<PolyAlgebra>()?;
    let mut total = Complex64::new(0.0, 0.0);
    for (n, c) in value {
        if n != 0 && !c.is_zero() {
            return Err(ParseDiagnostic::new(
                0,
                "expected a constant, found a term in z",
            ));
        }
        total += c.to_complex();
    }
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(ParseDiagnostic::new(0, "constant is not finite"));
    }
    Ok(total)
}

/// Parses a sum of terms `W*e(A)`, each standing for `W e^{2πiAt}`.
pub fn parse_expsum(text: &str) -> PResult<ExponentialSum> {
    let mut parser = Parser::new(text)?;
    let value = parser.parse_all::<SumAlgebra>()?;
    let mut terms = Vec::with_capacity(value.len());
    for (a, w) in value {
        if w.is_zero() {
            return Err(ParseDiagnostic::new(
                0,
                alloc::format!("term e({a}) has zero weight"),
            ));
        }
        let w = w.to_complex();
        if !(w.re.is_finite() && w.im.is_finite() && a.to_f64().is_finite()) {
            return Err(ParseDiagnostic::new(0, "weight or exponent is not finite"));
        }
        terms.push((w, a));
    }
    if terms.is_empty() {
        return Err(ParseDiagnostic::new(0, "expression is identically zero"));
    }
    ExponentialSum::new(terms).map_err(|_| ParseDiagnostic::new(0, "weights cancel to zero"))
}

/// Renders `p` in the input grammar, e.g. `z^2 + 2*z^5` or `(0.5i)*z^(-1)`.
pub fn format(p: &LaurentPolynomial) -> String {
    if p.is_zero() {
        return "0".to_owned();
    }
    let mut out = String::new();
    for (idx, &(n, c)) in p.terms().iter().enumerate() {
        let negative = c.im == 0.0 && c.re.is_sign_negative();
        let magnitude = if negative { -c } else { c };
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let coeff = format_complex(magnitude);
        match (n, coeff == "1") {
            (0, _) => out.push_str(&coeff),
            (_, true) => push_monomial(&mut out, n),
            _ => {
                out.push_str(&coeff);
                out.push('*');
                push_monomial(&mut out, n);
            }
        }
    }
    out
}

/// Renders an exponential sum in the input grammar.
pub fn format_expsum(g: &ExponentialSum) -> String {
    let mut out = String::new();
    for (idx, (w, a)) in g.terms().iter().enumerate() {
        if idx > 0 {
            out.push_str(" + ");
        }
        let _ = write!(out, "{}*e({})", format_complex(*w), a);
    }
    out
}

/// A complex number as a literal: `2`, `-0.5`, `(0.5i)`, `(1-2i)`.
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        alloc::format!("{}", c.re)
    } else if c.re == 0.0 {
        alloc::format!("({}i)", c.im)
    } else if c.im < 0.0 {
        alloc::format!("({}-{}i)", c.re, -c.im)
    } else {
        alloc::format!("({}+{}i)", c.re, c.im)
    }
}

fn push_monomial(out: &mut String, n: i64) {
    let _ = match n {
        1 => write!(out, "z"),
        n if n < 0 => write!(out, "z^({n})"),
        n => write!(out, "z^{n}"),
    };
}

// ---------------------------------------------------------------------------
// Scalars

type Q = Ratio<i128>;

/// A coefficient: exact Gaussian rational while possible, float afterwards.
#[derive(Clone, Debug, PartialEq)]
enum Scalar {
    Exact(Q, Q),
    Float(Complex64),
}

impl Scalar {
    fn one() -> Self {
        Scalar::Exact(Q::one(), Q::zero())
    }

    fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(re, im) => re.is_zero() && im.is_zero(),
            Scalar::Float(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(re, im) => Complex64::new(q_to_f64(re), q_to_f64(im)),
            Scalar::Float(c) => *c,
        }
    }

    /// The value as an exact real rational, if it is one.
    fn as_rational(&self) -> Option<Q> {
        match self {
            Scalar::Exact(re, im) if im.is_zero() => Some(*re),
            _ => None,
        }
    }

    fn add(&self, other: &Self) -> Self {
        if let (Scalar::Exact(a, b), Scalar::Exact(c, d)) = (self, other) {
            if let (Some(re), Some(im)) = (a.checked_add(c), b.checked_add(d)) {
                return Scalar::Exact(re, im);
            }
        }
        Scalar::Float(self.to_complex() + other.to_complex())
    }

    fn neg(&self) -> Self {
        match self {
            Scalar::Exact(a, b) => Scalar::Exact(-a, -b),
            Scalar::Float(c) => Scalar::Float(-c),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        if let (Scalar::Exact(a, b), Scalar::Exact(c, d)) = (self, other) {
            let re = a
                .checked_mul(c)
                .zip(b.checked_mul(d))
                .and_then(|(x, y)| x.checked_sub(&y));
            let im = a
                .checked_mul(d)
                .zip(b.checked_mul(c))
                .and_then(|(x, y)| x.checked_add(&y));
            if let (Some(re), Some(im)) = (re, im) {
                return Scalar::Exact(re, im);
            }
        }
        Scalar::Float(self.to_complex() * other.to_complex())
    }

    fn recip(&self) -> OpResult<Self> {
        if self.is_zero() {
            return Err("division by zero");
        }
        if let Scalar::Exact(a, b) = self {
            // 1/(a+bi) = (a-bi)/(a²+b²)
            let norm = a
                .checked_mul(a)
                .zip(b.checked_mul(b))
                .and_then(|(x, y)| x.checked_add(&y));
            if let Some(norm) = norm {
                if let (Some(re), Some(im)) = (a.checked_div(&norm), (-b).checked_div(&norm)) {
                    return Ok(Scalar::Exact(re, im));
                }
            }
        }
        Ok(Scalar::Float(self.to_complex().inv()))
    }

    fn powi(&self, n: i64) -> OpResult<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Scalar::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }
}

/// Correctly rounded for small parts; large parts go through a decimal
/// expansion and the float parser.
fn q_to_f64(q: &Q) -> f64 {
    const EXACT: i128 = 1 << 53;
    let (n, d) = (*q.numer(), *q.denom());
    if n.abs() <= EXACT && d <= EXACT {
        return n as f64 / d as f64;
    }
    let ud = d.unsigned_abs();
    if ud > u128::MAX / 10 {
        return n as f64 / d as f64;
    }
    let mut text = String::with_capacity(64);
    if n < 0 {
        text.push('-');
    }
    let un = n.unsigned_abs();
    let int = un / ud;
    let _ = write!(text, "{int}");
    let mut rem = un % ud;
    let mut significant = if int == 0 { 0 } else { text.len() };
    if rem != 0 {
        text.push('.');
        let mut leading = true;
        while rem != 0 && significant < 40 {
            rem *= 10;
            let digit = (rem / ud) as u8;
            rem %= ud;
            text.push(char::from(b'0' + digit));
            if digit != 0 {
                leading = false;
            }
            if !leading {
                significant += 1;
            }
        }
    }
    text.parse().unwrap_or(n as f64 / d as f64)
}

/// Exact value of a decimal literal, or the nearest float if it does not
/// fit.
fn decimal_literal(digits: &str) -> Scalar {
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let exact = (|| {
        let mut numer: i128 = 0;
        for b in int.bytes().chain(frac.bytes()) {
            numer = numer.checked_mul(10)?.checked_add(i128::from(b - b'0'))?;
        }
        let denom = 10i128.checked_pow(u32::try_from(frac.len()).ok()?)?;
        Some(Q::new(numer, denom))
    })();
    match exact {
        Some(q) => Scalar::Exact(q, Q::zero()),
        None => Scalar::Float(Complex64::new(digits.parse().unwrap_or(f64::INFINITY), 0.0)),
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug)]
enum Kind<'a> {
    Number(Scalar),
    Ident(&'a str),
    Sym(u8),
    End,
}

#[derive(Clone, Debug)]
struct Token<'a> {
    kind: Kind<'a>,
    offset: usize,
}

fn lex(text: &str) -> PResult<Vec<Token<'_>>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b.is_ascii_digit() || b == b'.' {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                let frac_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == frac_start && (i == start + 1 || bytes[start] == b'.') {
                    return Err(ParseDiagnostic::new(start, "malformed number").expecting("digit"));
                }
            }
            let literal = &text[start..i];
            let literal = literal.strip_suffix('.').unwrap_or(literal);
            let mut value = decimal_literal(literal);
            if i < bytes.len() && bytes[i] == b'i' && !is_ident_byte(bytes.get(i + 1)) {
                i += 1;
                value = value.mul(&Scalar::Exact(Q::zero(), Q::one()));
            }
            if is_ident_byte(bytes.get(i)) {
                return Err(ParseDiagnostic::new(
                    i,
                    "implicit multiplication and exponent notation are not supported",
                )
                .expecting("'*' between factors"));
            }
            toks.push(Token {
                kind: Kind::Number(value),
                offset: start,
            });
        } else if b.is_ascii_alphabetic() || b == b'_' {
            while is_ident_byte(bytes.get(i)) {
                i += 1;
            }
            toks.push(Token {
                kind: Kind::Ident(&text[start..i]),
                offset: start,
            });
        } else if b"+-*/^(),".contains(&b) {
            i += 1;
            toks.push(Token {
                kind: Kind::Sym(b),
                offset: start,
            });
        } else {
            let ch = text[start..].chars().next().unwrap_or('?');
            return Err(ParseDiagnostic::new(
                start,
                alloc::format!("unexpected character '{ch}'"),
            ));
        }
    }
    toks.push(Token {
        kind: Kind::End,
        offset: text.len(),
    });
    Ok(toks)
}

fn is_ident_byte(b: Option<&u8>) -> bool {
    b.is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
}

// ---------------------------------------------------------------------------
// Parser

/// The value domain an expression is evaluated in.
trait Algebra {
    type V: Clone;
    fn constant(s: Scalar) -> OpResult<Self::V>;
    fn pi() -> Self::V;
    fn sqrt(arg: &Scalar) -> OpResult<Self::V>;
    /// Identifiers other than `pi` and `sqrt`.
    fn ident(p: &mut Parser<'_>, name: &str, offset: usize) -> PResult<Self::V> {
        let _ = p;
        Err(ParseDiagnostic::new(
            offset,
            alloc::format!("unknown identifier '{name}'"),
        ))
    }
    fn add(a: Self::V, b: Self::V) -> OpResult<Self::V>;
    fn neg(a: Self::V) -> Self::V;
    fn mul(a: &Self::V, b: &Self::V) -> OpResult<Self::V>;
    fn div(a: &Self::V, b: &Self::V) -> OpResult<Self::V>;
    fn pow(a: &Self::V, n: i64) -> OpResult<Self::V>;
}

struct Parser<'a> {
    toks: Vec<Token<'a>>,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> PResult<Self> {
        let toks = lex(text)?;
        if toks.len() == 1 {
            return Err(ParseDiagnostic::new(0, "empty expression").expecting("an expression"));
        }
        Ok(Self {
            toks,
            pos: 0,
            depth: 0,
        })
    }

    fn peek(&self) -> &Token<'a> {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token<'a> {
        let tok = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn peek_sym(&self, sym: u8) -> bool {
        matches!(self.peek().kind, Kind::Sym(s) if s == sym)
    }

    fn expect_sym(&mut self, sym: u8, expected: &'static str) -> PResult<()> {
        if self.peek_sym(sym) {
            self.bump();
            Ok(())
        } else {
            let tok = self.peek();
            Err(ParseDiagnostic::new(
                tok.offset,
                alloc::format!("unexpected {}", describe(&tok.kind)),
            )
            .expecting(expected))
        }
    }

    fn parse_all<A: Algebra>(&mut self) -> PResult<A::V> {
        let value = self.expr::<A>()?;
        let tok = self.peek();
        match tok.kind {
            Kind::End => Ok(value),
            Kind::Ident(_) | Kind::Number(_) | Kind::Sym(b'(') => Err(ParseDiagnostic::new(
                tok.offset,
                alloc::format!(
                    "unexpected {}; multiplication must be explicit",
                    describe(&tok.kind)
                ),
            )
            .expecting("'*'")),
            _ => Err(ParseDiagnostic::new(
                tok.offset,
                alloc::format!("unexpected {}", describe(&tok.kind)),
            )
            .expecting("an operator or end of input")),
        }
    }

    fn enter(&mut self, offset: usize) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseDiagnostic::new(offset, "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr<A: Algebra>(&mut self) -> PResult<A::V> {
        let mut acc = self.term::<A>()?;
        loop {
            let (op, offset) = match self.peek().kind {
                Kind::Sym(op @ (b'+' | b'-')) => (op, self.peek().offset),
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term::<A>()?;
            let rhs = if op == b'-' { A::neg(rhs) } else { rhs };
            acc = A::add(acc, rhs).map_err(|m| ParseDiagnostic::new(offset, m))?;
        }
    }

    fn term<A: Algebra>(&mut self) -> PResult<A::V> {
        let mut acc = self.unary::<A>()?;
        loop {
            let (op, offset) = match self.peek().kind {
                Kind::Sym(op @ (b'*' | b'/')) => (op, self.peek().offset),
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.unary::<A>()?;
            acc = if op == b'*' {
                A::mul(&acc, &rhs)
            } else {
                A::div(&acc, &rhs)
            }
            .map_err(|m| ParseDiagnostic::new(offset, m))?;
        }
    }

    fn unary<A: Algebra>(&mut self) -> PResult<A::V> {
        let offset = self.peek().offset;
        self.enter(offset)?;
        let value = match self.peek().kind {
            Kind::Sym(b'-') => {
                self.bump();
                self.unary::<A>().map(A::neg)
            }
            Kind::Sym(b'+') => {
                self.bump();
                self.unary::<A>()
            }
            _ => self.power::<A>(),
        };
        self.depth -= 1;
        value
    }

    fn power<A: Algebra>(&mut self) -> PResult<A::V> {
        let base = self.atom::<A>()?;
        if !self.peek_sym(b'^') {
            return Ok(base);
        }
        let caret = self.bump().offset;
        let exp_offset = self.peek().offset;
        let exponent = self.unary::<ScalarAlgebra>()?;
        let n = match exponent.as_rational() {
            Some(q) if q.is_integer() => i64::try_from(*q.numer())
                .ok()
                .filter(|n| n.abs() <= MAX_EXPONENT)
                .ok_or_else(|| ParseDiagnostic::new(exp_offset, "exponent is too large"))?,
            Some(q) => {
                return Err(ParseDiagnostic::new(
                    exp_offset,
                    alloc::format!("fractional exponent {}/{}", q.numer(), q.denom()),
                )
                .expecting("an integer exponent"))
            }
            None => {
                return Err(
                    ParseDiagnostic::new(exp_offset, "exponent must be an exact integer")
                        .expecting("an integer exponent"),
                )
            }
        };
        A::pow(&base, n).map_err(|m| ParseDiagnostic::new(caret, m))
    }

    fn atom<A: Algebra>(&mut self) -> PResult<A::V> {
        let tok = self.bump();
        match tok.kind {
            Kind::Number(s) => A::constant(s).map_err(|m| ParseDiagnostic::new(tok.offset, m)),
            Kind::Sym(b'(') => {
                self.enter(tok.offset)?;
                let inner = self.expr::<A>()?;
                self.expect_sym(b')', "')'")?;
                self.depth -= 1;
                Ok(inner)
            }
            Kind::Ident("i") => A::constant(Scalar::Exact(Q::zero(), Q::one()))
                .map_err(|m| ParseDiagnostic::new(tok.offset, m)),
            Kind::Ident("pi") => Ok(A::pi()),
            Kind::Ident("sqrt") => {
                self.expect_sym(b'(', "'(' after sqrt")?;
                let arg = self.expr::<ScalarAlgebra>()?;
                self.expect_sym(b')', "')'")?;
                A::sqrt(&arg).map_err(|m| ParseDiagnostic::new(tok.offset, m))
            }
            Kind::Ident(name) => A::ident(self, name, tok.offset),
            kind => Err(ParseDiagnostic::new(
                tok.offset,
                alloc::format!("unexpected {}", describe(&kind)),
            )
            .expecting("a number, identifier or '('")),
        }
    }
}

fn describe(kind: &Kind<'_>) -> String {
    match kind {
        Kind::Number(_) => "number".to_owned(),
        Kind::Ident(name) => alloc::format!("identifier '{name}'"),
        Kind::Sym(b) => alloc::format!("'{}'", char::from(*b)),
        Kind::End => "end of input".to_owned(),
    }
}

/// Exact square root of a non-negative rational `p/q` as `√(pq)/q`.
fn rational_sqrt(q: &Q) -> Option<(Rational64, u64)> {
    if q.is_negative() {
        return None;
    }
    let p = i64::try_from(*q.numer()).ok()?;
    let d = i64::try_from(*q.denom()).ok()?;
    let radicand = u64::try_from(p).ok()?.checked_mul(u64::try_from(d).ok()?)?;
    Some((Rational64::new(1, d), radicand))
}

// Plain complex constants: exponents and sqrt arguments.
struct ScalarAlgebra;

impl Algebra for ScalarAlgebra {
    type V = Scalar;

    fn constant(s: Scalar) -> OpResult<Scalar> {
        Ok(s)
    }

    fn pi() -> Scalar {
        Scalar::Float(Complex64::new(core::f64::consts::PI, 0.0))
    }

    fn sqrt(arg: &Scalar) -> OpResult<Scalar> {
        if let Some(ExactReal::Rational(r)) = arg
            .as_rational()
            .and_then(|q| rational_sqrt(&q))
            .and_then(|(c, k)| ExactReal::surd(c, k))
        {
            return Ok(Scalar::Exact(
                Q::new((*r.numer()).into(), (*r.denom()).into()),
                Q::zero(),
            ));
        }
        Ok(Scalar::Float(arg.to_complex().sqrt()))
    }

    fn ident(_: &mut Parser<'_>, name: &str, offset: usize) -> PResult<Scalar> {
        Err(ParseDiagnostic::new(
            offset,
            alloc::format!("'{name}' is not allowed here; this position takes a constant"),
        )
        .expecting("a constant"))
    }

    fn add(a: Scalar, b: Scalar) -> OpResult<Scalar> {
        Ok(a.add(&b))
    }

    fn neg(a: Scalar) -> Scalar {
        a.neg()
    }

    fn mul(a: &Scalar, b: &Scalar) -> OpResult<Scalar> {
        Ok(a.mul(b))
    }

    fn div(a: &Scalar, b: &Scalar) -> OpResult<Scalar> {
        Ok(a.mul(&b.recip()?))
    }

    fn pow(a: &Scalar, n: i64) -> OpResult<Scalar> {
        a.powi(n)
    }
}

// Laurent polynomials in z: sparse exponent -> coefficient maps without
// exact zeros.
struct PolyAlgebra;

type Poly = BTreeMap<i64, Scalar>;

fn poly_insert(p: &mut Poly, n: i64, c: Scalar) {
    let sum = match p.remove(&n) {
        Some(prev) => prev.add(&c),
        None => c,
    };
    if !sum.is_zero() {
        p.insert(n, sum);
    }
}

fn check_exponent(n: i64) -> OpResult<i64> {
    if n.abs() > MAX_EXPONENT {
        Err("exponent exceeds 10000 in magnitude")
    } else {
        Ok(n)
    }
}

fn single_term(p: &Poly) -> Option<(i64, &Scalar)> {
    let mut it = p.iter();
    match (it.next(), it.next()) {
        (Some((&n, c)), None) => Some((n, c)),
        _ => None,
    }
}

impl Algebra for PolyAlgebra {
    type V = Poly;

    fn constant(s: Scalar) -> OpResult<Poly> {
        let mut p = Poly::new();
        poly_insert(&mut p, 0, s);
        Ok(p)
    }

    fn pi() -> Poly {
        Self::constant(ScalarAlgebra::pi()).unwrap_or_default()
    }

    fn sqrt(arg: &Scalar) -> OpResult<Poly> {
        Self::constant(ScalarAlgebra::sqrt(arg)?)
    }

    fn ident(p: &mut Parser<'_>, name: &str, offset: usize) -> PResult<Poly> {
        let _ = p;
        match name {
            "z" => Ok(Poly::from([(1, Scalar::one())])),
            "e" => Err(
                ParseDiagnostic::new(offset, "e(...) is only valid in exponential sums")
                    .expecting("a polynomial in z"),
            ),
            _ => Err(
                ParseDiagnostic::new(offset, alloc::format!("unknown identifier '{name}'"))
                    .expecting("z, i, pi or sqrt(...)"),
            ),
        }
    }

    fn add(mut a: Poly, b: Poly) -> OpResult<Poly> {
        for (n, c) in b {
            poly_insert(&mut a, n, c);
        }
        if a.len() > MAX_TERMS {
            return Err("expansion exceeds 4096 terms");
        }
        Ok(a)
    }

    fn neg(a: Poly) -> Poly {
        a.into_iter().map(|(n, c)| (n, c.neg())).collect()
    }

    fn mul(a: &Poly, b: &Poly) -> OpResult<Poly> {
        let mut out = Poly::new();
        for (&n, c) in a {
            for (&m, d) in b {
                poly_insert(&mut out, check_exponent(n + m)?, c.mul(d));
            }
            if out.len() > MAX_TERMS {
                return Err("expansion exceeds 4096 terms");
            }
        }
        Ok(out)
    }

    fn div(a: &Poly, b: &Poly) -> OpResult<Poly> {
        match single_term(b) {
            Some((0, c)) => {
                let inv = c.recip()?;
                Ok(a.iter().map(|(&n, c)| (n, c.mul(&inv))).collect())
            }
            _ if b.is_empty() => Err("division by zero"),
            _ => Err("division by an expression containing z"),
        }
    }

    fn pow(a: &Poly, n: i64) -> OpResult<Poly> {
        if a.is_empty() {
            return if n > 0 {
                Ok(Poly::new())
            } else if n == 0 {
                Self::constant(Scalar::one())
            } else {
                Err("division by zero")
            };
        }
        if let Some((k, c)) = single_term(a) {
            let exp = k
                .checked_mul(n)
                .ok_or("exponent exceeds 10000 in magnitude")?;
            return Self::constant(c.powi(n)?)
                .map(|p| p.into_values().map(|c| (exp, c)).collect())
                .and_then(|p: Poly| {
                    check_exponent(exp)?;
                    Ok(p)
                });
        }
        if n < 0 {
            return Err("negative power of a multi-term expression");
        }
        if n > MAX_MULTI_TERM_POWER {
            return Err("power of a multi-term expression exceeds 64");
        }
        let mut acc = Self::constant(Scalar::one())?;
        for _ in 0..n {
            acc = Self::mul(&acc, a)?;
        }
        Ok(acc)
    }
}

// Real exponents inside e(...).
struct RealAlgebra;

fn real_parts(x: &ExactReal) -> Option<(Rational64, u64)> {
    match *x {
        ExactReal::Rational(r) => Some((r, 1)),
        ExactReal::Surd { coeff, radicand } => Some((coeff, radicand)),
        ExactReal::Opaque { .. } => None,
    }
}

fn opaque(v: f64) -> ExactReal {
    ExactReal::opaque(v)
}

fn real_from_parts(c: Rational64, k: u64) -> Option<ExactReal> {
    ExactReal::surd(c, k)
}

impl Algebra for RealAlgebra {
    type V = ExactReal;

    fn constant(s: Scalar) -> OpResult<ExactReal> {
        match s {
            Scalar::Exact(re, im) if im.is_zero() => Ok(
                match (i64::try_from(*re.numer()), i64::try_from(*re.denom())) {
                    (Ok(n), Ok(d)) => ExactReal::rational(n, d),
                    _ => opaque(q_to_f64(&re)),
                },
            ),
            Scalar::Float(c) if c.im == 0.0 => Ok(opaque(c.re)),
            _ => Err("exponents must be real"),
        }
    }

    fn pi() -> ExactReal {
        opaque(core::f64::consts::PI)
    }

    fn sqrt(arg: &Scalar) -> OpResult<ExactReal> {
        let x = arg.to_complex();
        if x.im != 0.0 || x.re < 0.0 {
            return Err("square root of a negative number in an exponent");
        }
        Ok(arg
            .as_rational()
            .and_then(|q| rational_sqrt(&q))
            .and_then(|(c, k)| real_from_parts(c, k))
            .unwrap_or_else(|| opaque(num_traits::Float::sqrt(x.re))))
    }

    fn add(a: ExactReal, b: ExactReal) -> OpResult<ExactReal> {
        if a.is_zero() {
            return Ok(b);
        }
        if b.is_zero() {
            return Ok(a);
        }
        let exact = match (real_parts(&a), real_parts(&b)) {
            (Some((c1, k1)), Some((c2, k2))) if k1 == k2 => {
                c1.checked_add(&c2).and_then(|c| real_from_parts(c, k1))
            }
            _ => None,
        };
        Ok(exact.unwrap_or_else(|| opaque(a.to_f64() + b.to_f64())))
    }

    fn neg(a: ExactReal) -> ExactReal {
        match a {
            ExactReal::Rational(r) => ExactReal::Rational(-r),
            ExactReal::Surd { coeff, radicand } => ExactReal::Surd {
                coeff: -coeff,
                radicand,
            },
            ExactReal::Opaque { value, independent } => ExactReal::Opaque {
                value: -value,
                independent,
            },
        }
    }

    fn mul(a: &ExactReal, b: &ExactReal) -> OpResult<ExactReal> {
        let exact = match (real_parts(a), real_parts(b)) {
            (Some((c1, k1)), Some((c2, k2))) => c1
                .checked_mul(&c2)
                .zip(k1.checked_mul(k2))
                .and_then(|(c, k)| real_from_parts(c, k)),
            _ => None,
        };
        Ok(exact.unwrap_or_else(|| opaque(a.to_f64() * b.to_f64())))
    }

    fn div(a: &ExactReal, b: &ExactReal) -> OpResult<ExactReal> {
        if b.is_zero() {
            return Err("division by zero");
        }
        // x / (c√k) = x · √k / (c k)
        let inverse = real_parts(b).and_then(|(c, k)| {
            let ck = c.checked_mul(&Rational64::from_integer(i64::try_from(k).ok()?))?;
            real_from_parts(ck.recip(), k)
        });
        match inverse {
            Some(inv) => Self::mul(a, &inv),
            None => Ok(opaque(a.to_f64() / b.to_f64())),
        }
    }

    fn pow(a: &ExactReal, n: i64) -> OpResult<ExactReal> {
        let one = ExactReal::integer(1);
        let base = if n < 0 { Self::div(&one, a)? } else { *a };
        let mut acc = one;
        for _ in 0..n.unsigned_abs() {
            acc = Self::mul(&acc, &base)?;
        }
        Ok(acc)
    }
}

// Exponential sums: (exponent, weight) lists; e(A)e(B) = e(A+B).
struct SumAlgebra;

type Sum = Vec<(ExactReal, Scalar)>;

fn sum_insert(s: &mut Sum, a: ExactReal, w: Scalar) {
    match s.iter_mut().find(|(b, _)| *b == a) {
        Some((_, acc)) => *acc = acc.add(&w),
        None => s.push((a, w)),
    }
}

impl Algebra for SumAlgebra {
    type V = Sum;

    fn constant(s: Scalar) -> OpResult<Sum> {
        Ok(alloc::vec![(ExactReal::integer(0), s)])
    }

    fn pi() -> Sum {
        alloc::vec![(ExactReal::integer(0), ScalarAlgebra::pi())]
    }

    fn sqrt(arg: &Scalar) -> OpResult<Sum> {
        Self::constant(ScalarAlgebra::sqrt(arg)?)
    }

    fn ident(p: &mut Parser<'_>, name: &str, offset: usize) -> PResult<Sum> {
        match name {
            "e" => {
                p.expect_sym(b'(', "'(' after e")?;
                let a = p.expr::<RealAlgebra>()?;
                p.expect_sym(b')', "')'")?;
                Ok(alloc::vec![(a, Scalar::one())])
            }
            "z" => Err(
                ParseDiagnostic::new(offset, "z is only valid in Laurent polynomials")
                    .expecting("a term W*e(A)"),
            ),
            _ => Err(
                ParseDiagnostic::new(offset, alloc::format!("unknown identifier '{name}'"))
                    .expecting("e(...), i, pi or sqrt(...)"),
            ),
        }
    }

    fn add(mut a: Sum, b: Sum) -> OpResult<Sum> {
        for (e, w) in b {
            sum_insert(&mut a, e, w);
        }
        if a.len() > MAX_TERMS {
            return Err("expansion exceeds 4096 terms");
        }
        Ok(a)
    }

    fn neg(a: Sum) -> Sum {
        a.into_iter().map(|(e, w)| (e, w.neg())).collect()
    }

    fn mul(a: &Sum, b: &Sum) -> OpResult<Sum> {
        let mut out = Sum::new();
        for (e1, w1) in a {
            for (e2, w2) in b {
                sum_insert(&mut out, RealAlgebra::add(*e1, *e2)?, w1.mul(w2));
            }
            if out.len() > MAX_TERMS {
                return Err("expansion exceeds 4096 terms");
            }
        }
        Ok(out)
    }

    fn div(a: &Sum, b: &Sum) -> OpResult<Sum> {
        match b.as_slice() {
            [(e, w)] => {
                let inv = alloc::vec![(RealAlgebra::neg(*e), w.recip()?)];
                Self::mul(a, &inv)
            }
            [] => Err("division by zero"),
            _ => Err("division by a sum of several exponentials"),
        }
    }

    fn pow(a: &Sum, n: i64) -> OpResult<Sum> {
        if let [(e, w)] = a.as_slice() {
            let exp = RealAlgebra::mul(e, &ExactReal::integer(n))?;
            return Ok(alloc::vec![(exp, w.powi(n)?)]);
        }
        if n < 0 {
            return Err("negative power of a multi-term expression");
        }
        if n > MAX_MULTI_TERM_POWER {
            return Err("power of a multi-term expression exceeds 64");
        }
        let mut acc = Self::constant(Scalar::one())?;
        for _ in 0..n {
            acc = Self::mul(&acc, a)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn figure_one_polynomial() {
        let p = parse_laurent("z^2 + z^7 + z^12").unwrap();
        assert_eq!(
            p.terms(),
            &[(2, c(1.0, 0.0)), (7, c(1.0, 0.0)), (12, c(1.0, 0.0))]
        );
    }

    #[test]
    fn division_by_imaginary_constant() {
        let p = parse_laurent("(z^3 - z^(-1))/(2i)").unwrap();
        assert_eq!(p.terms(), &[(-1, c(0.0, 0.5)), (3, c(0.0, -0.5))]);
    }

    #[test]
    fn expansion_of_product() {
        let p = parse_laurent("z*(z - 1/2)*(z - i)").unwrap();
        assert_eq!(
            p.terms(),
            &[(1, c(0.0, 0.5)), (2, c(-0.5, -1.0)), (3, c(1.0, 0.0))]
        );
    }

    #[test]
    fn precedence() {
        // -z^2 is -(z^2); 2^-1 is a half; ^ is right associative
        assert_eq!(parse_laurent("-z^2").unwrap().terms(), &[(2, c(-1.0, 0.0))]);
        assert_eq!(
            parse_laurent("2^-1*z").unwrap().terms(),
            &[(1, c(0.5, 0.0))]
        );
        assert_eq!(parse_laurent("z^2^3").unwrap().terms(), &[(8, c(1.0, 0.0))]);
        assert_eq!(
            parse_laurent("1 - 2*z + 3").unwrap().terms(),
            &[(0, c(4.0, 0.0)), (1, c(-2.0, 0.0))]
        );
    }

    #[test]
    fn constants() {
        let p = parse_laurent("sqrt(4)*z + pi").unwrap();
        assert_eq!(p.coefficient(1), c(2.0, 0.0));
        assert_eq!(p.coefficient(0), c(core::f64::consts::PI, 0.0));
        let q = parse_laurent("sqrt(2)*z").unwrap();
        assert_eq!(q.coefficient(1), c(core::f64::consts::SQRT_2, 0.0));
        assert_eq!(parse_laurent("i*i").unwrap().terms(), &[(0, c(-1.0, 0.0))]);
    }

    #[test]
    fn exact_cancellation() {
        let p = parse_laurent("(z+1)^2 - z^2 - 1").unwrap();
        assert_eq!(p.terms(), &[(1, c(2.0, 0.0))]);
        let err = parse_laurent("(z+1)^2 - z^2 - 2*z - 1").unwrap_err();
        assert!(err.message.contains("zero"));
    }

    #[test]
    fn diagnostics() {
        let err = parse_laurent("z^(1/2)").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(err.message.contains("fractional"));

        let err = parse_laurent("1/(z+1)").unwrap_err();
        assert_eq!(err.offset, 1);
        assert!(err.message.contains("containing z"));

        let err = parse_laurent("(z+1)^(-1)").unwrap_err();
        assert!(err.message.contains("negative power"));

        let err = parse_laurent("2z").unwrap_err();
        assert_eq!(err.offset, 1);
        assert_eq!(err.expected, Some("'*' between factors"));

        let err = parse_laurent("z +").unwrap_err();
        assert_eq!(err.offset, 3);

        let err = parse_laurent("(z").unwrap_err();
        assert_eq!(err.expected, Some("')'"));

        assert!(parse_laurent("").is_err());
        assert!(parse_laurent("z^100000").is_err());
        assert!(parse_laurent("(z+1)^65").is_err());
        assert!(parse_laurent("x").is_err());
        assert!(parse_laurent("1e5*z").is_err());
        assert!(parse_laurent("z # 1").is_err());
    }

    #[test]
    fn deep_nesting_is_a_diagnostic() {
        let text = "(".repeat(10_000) + "z" + &")".repeat(10_000);
        assert!(parse_laurent(&text).unwrap_err().message.contains("deeply"));
        let text = "-".repeat(10_000) + "z";
        assert!(parse_laurent(&text).is_err());
    }

    #[test]
    fn caret_rendering() {
        let err = parse_laurent("z + + ").unwrap_err();
        assert_eq!(err.caret("z + + "), "z + + \n      ^");
    }

    #[test]
    fn expsum_examples() {
        let g = parse_expsum("2*e(1) + e(sqrt(2))").unwrap();
        assert_eq!(g.terms()[0], (c(2.0, 0.0), ExactReal::integer(1)));
        assert_eq!(
            g.terms()[1].1,
            ExactReal::Surd {
                coeff: Rational64::from_integer(1),
                radicand: 2
            }
        );

        let g = parse_expsum("e(1/2) - e(3/4)").unwrap();
        assert_eq!(
            g.terms(),
            &[
                (c(1.0, 0.0), ExactReal::rational(1, 2)),
                (c(-1.0, 0.0), ExactReal::rational(3, 4))
            ]
        );

        assert!(parse_expsum("0*e(1)")
            .unwrap_err()
            .message
            .contains("zero weight"));
    }

    #[test]
    fn expsum_exponent_arithmetic() {
        let g = parse_expsum("e(1)*e(1/2) + e(sqrt(8)/2) + e(2)^2").unwrap();
        let exps: Vec<ExactReal> = g.terms().iter().map(|t| t.1).collect();
        assert_eq!(
            exps,
            vec![
                ExactReal::Surd {
                    coeff: Rational64::from_integer(1),
                    radicand: 2
                },
                ExactReal::rational(3, 2),
                ExactReal::integer(4)
            ]
        );
        let g = parse_expsum("e(pi)").unwrap();
        assert!(matches!(
            g.terms()[0].1,
            ExactReal::Opaque {
                independent: false,
                ..
            }
        ));
        assert!(parse_expsum("e(i)").is_err());
        assert!(parse_expsum("z").is_err());
        assert!(parse_expsum("e(1) - e(1)").is_err());
    }

    #[test]
    fn format_examples() {
        let p = LaurentPolynomial::from_terms(vec![(2, c(1.0, 0.0)), (5, c(2.0, 0.0))]);
        assert_eq!(format(&p), "z^2 + 2*z^5");
        let p = LaurentPolynomial::from_terms(vec![(-1, c(0.0, 0.5))]);
        assert_eq!(format(&p), "(0.5i)*z^(-1)");
        let p = LaurentPolynomial::from_terms(vec![(0, c(-1.0, 0.0))]);
        assert_eq!(format(&p), "-1");
        let p = LaurentPolynomial::from_terms(vec![
            (0, c(1.0, -2.0)),
            (1, c(-3.0, 0.0)),
            (3, c(-1.0, 0.0)),
        ]);
        assert_eq!(format(&p), "(1-2i) - 3*z - z^3");
        assert_eq!(parse_laurent(&format(&p)).unwrap(), p);
    }

    #[test]
    fn large_and_small_literals_round_trip() {
        for x in [
            1e300,
            1e-300,
            0.1 + 0.2,
            123456789.12345679,
            f64::MAX,
            5e-324,
        ] {
            let p = LaurentPolynomial::from_terms(vec![(1, c(x, -x))]);
            assert_eq!(parse_laurent(&format(&p)).unwrap(), p, "{x}");
        }
    }

    #[test]
    fn rational_lowering_is_exact_for_huge_parts() {
        let q = Q::new((1i128 << 100) + 1, 3);
        let expected = ((1u128 << 100) + 1) as f64 / 3.0;
        assert!((q_to_f64(&q) - expected).abs() <= expected * f64::EPSILON);
        assert_eq!(q_to_f64(&Q::new(1, 1i128 << 60)), 2f64.powi(-60));
    }
}

//! Text literals for posets, test functions, valuations, measures and
//! piecewise functions.
//!
//! ```text
//! poset { a; b; c; a <= b <= c }
//! fn h { a -> [0,1]; b -> [1,inf] }
//! val { [1/2,1/2] @ x; [1/4,1/3] @ y }
//! measure { 1/2 @ x; inf @ y }
//! piecewise { [0,1/2] inc: 2x; [1/2,1] dec: 2 - 2*x }
//! ```
//!
//! The `{ ... }` wrapper and its keyword may be omitted. Statements are
//! separated by `;` or newlines. Errors carry 1-based line and column.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::drag::{DRag, ExtNonNeg, IntervalValue};
use crate::error::{Error, Result};
use crate::lebesgue::{Direction, Piece, PiecewiseMonotoneFn, Polynomial};
use crate::measure::FiniteSupportMeasure;
use crate::spaces::{FinitePoset, MonotoneMap};
use crate::valuation::ElementaryValuation;

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
    Arrow,
    Leq,
    Newline,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, column);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: start.0,
                column: start.1,
            })
        };
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            column += n;
        };
        match c {
            '\n' => {
                push(&mut out, Tok::Newline);
                i += 1;
                line += 1;
                column = 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(1, &mut i);
                }
            }
            c if c.is_whitespace() => advance(1, &mut i),
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(&mut out, Tok::Arrow);
                advance(2, &mut i);
            }
            '<' if chars.get(i + 1) == Some(&'=') => {
                push(&mut out, Tok::Leq);
                advance(2, &mut i);
            }
            '≤' => {
                push(&mut out, Tok::Leq);
                advance(1, &mut i);
            }
            '∞' => {
                push(&mut out, Tok::Ident("inf".into()));
                advance(1, &mut i);
            }
            '{' | '}' | '[' | ']' | ';' | ',' | '@' | ':' | '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                push(&mut out, Tok::Sym(c));
                advance(1, &mut i);
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if chars.get(j) == Some(&'.') && chars.get(j + 1).is_some_and(char::is_ascii_digit) {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                push(&mut out, Tok::Number(chars[i..j].iter().collect()));
                advance(j - i, &mut i);
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                    j += 1;
                }
                push(&mut out, Tok::Ident(chars[i..j].iter().collect()));
                advance(j - i, &mut i);
            }
            other => {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(s) => format!("number `{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Arrow => "`->`".into(),
        Tok::Leq => "`<=`".into(),
        Tok::Newline => "end of line".into(),
        Tok::End => "end of input".into(),
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Whether newlines are statement separators (inside a block) or
    /// whitespace (inside brackets and expressions).
    newlines_separate: bool,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            newlines_separate: true,
        })
    }

    /// Index of the next significant token.
    fn cursor(&self) -> usize {
        let mut i = self.pos;
        if !self.newlines_separate {
            while self.toks[i].tok == Tok::Newline {
                i += 1;
            }
        }
        i
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.cursor()].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.cursor()];
        (t.line, t.column)
    }

    fn next(&mut self) -> Token {
        let i = self.cursor();
        let t = self.toks[i].clone();
        self.pos = if t.tok == Tok::End { i } else { i + 1 };
        t
    }

    fn error_at(&self, (line, column): (usize, usize), message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn unexpected(&self, expected: &str) -> Error {
        let at = self.here();
        let found = describe(self.peek());
        self.error_at(at, format!("expected {expected}, found {found}"))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&describe(tok)))
        }
    }

    fn ident(&mut self) -> Result<(String, (usize, usize))> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok((s, at))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    /// Runs `f` with newlines treated as whitespace.
    fn inline<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let saved = self.newlines_separate;
        self.newlines_separate = false;
        let out = f(self);
        self.newlines_separate = saved;
        out
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Tok::Sym(';') | Tok::Newline) {
            self.next();
        }
    }

    /// `keyword [name] { stmt; ... }` or the bare statement list. Calls
    /// `stmt` once per statement.
    fn block(&mut self, keyword: &str, named: bool, mut stmt: impl FnMut(&mut Self) -> Result<()>) -> Result<()> {
        self.skip_separators();
        let wrapped = match self.peek().clone() {
            Tok::Ident(k) if k == keyword => {
                self.next();
                if named {
                    if let Tok::Ident(_) = self.peek() {
                        self.next();
                    }
                }
                self.skip_separators();
                self.expect(&Tok::Sym('{'))?;
                true
            }
            Tok::Sym('{') => {
                self.next();
                true
            }
            _ => false,
        };
        loop {
            self.skip_separators();
            match self.peek() {
                Tok::Sym('}') if wrapped => {
                    self.next();
                    break;
                }
                Tok::End if !wrapped => break,
                Tok::End => return Err(self.unexpected("`}`")),
                _ => {}
            }
            stmt(self)?;
            match self.peek() {
                Tok::Sym(';') | Tok::Newline | Tok::End => {}
                Tok::Sym('}') if wrapped => {}
                _ => return Err(self.unexpected("`;`")),
            }
        }
        self.skip_separators();
        if *self.peek() != Tok::End {
            return Err(self.unexpected("end of input"));
        }
        Ok(())
    }

    fn natural(&mut self) -> Result<BigRational> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Number(s) => {
                self.next();
                decimal(&s).ok_or_else(|| self.error_at(at, format!("bad number `{s}`")))
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    /// `p`, `p/q`, `p.d`; non-negative.
    fn rational(&mut self) -> Result<BigRational> {
        self.inline(|p| {
            let num = p.natural()?;
            if p.eat(&Tok::Sym('/')) {
                let at = p.here();
                let den = p.natural()?;
                if den.is_zero() {
                    return Err(p.error_at(at, "division by zero"));
                }
                Ok(num / den)
            } else {
                Ok(num)
            }
        })
    }

    /// A rational, `-` rational, or `inf`.
    fn ext(&mut self) -> Result<ExtNonNeg> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Ident(s) if s == "inf" => {
                self.next();
                Ok(ExtNonNeg::Infinity)
            }
            Tok::Sym('+') => {
                self.next();
                self.ext()
            }
            Tok::Sym('-') => {
                self.next();
                let v = self.rational()?;
                if v.is_zero() {
                    Ok(ExtNonNeg::zero())
                } else {
                    Err(self.error_at(at, Error::Negative(format!("-{v}")).to_string()))
                }
            }
            Tok::Number(_) => Ok(ExtNonNeg::from(self.rational()?)),
            _ => Err(self.unexpected("a number or `inf`")),
        }
    }

    fn interval(&mut self) -> Result<IntervalValue> {
        self.inline(|p| {
            let at = p.here();
            p.expect(&Tok::Sym('['))?;
            let lo = p.ext()?;
            p.expect(&Tok::Sym(','))?;
            let hi = p.ext()?;
            p.expect(&Tok::Sym(']'))?;
            IntervalValue::new(lo, hi).map_err(|e| p.error_at(at, e.to_string()))
        })
    }

    fn point(&mut self, space: &FinitePoset) -> Result<usize> {
        let (name, at) = self.ident()?;
        space.index_of(&name).map_err(|e| self.error_at(at, e.to_string()))
    }

    // expr := term (('+'|'-') term)*
    fn poly_expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.poly_term()?;
        loop {
            if self.eat(&Tok::Sym('+')) {
                acc = acc.add(&self.poly_term()?);
            } else if self.eat(&Tok::Sym('-')) {
                acc = acc.sub(&self.poly_term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    // term := unary (('*'|'/') unary | unary)*
    fn poly_term(&mut self) -> Result<Polynomial> {
        let mut acc = self.poly_unary()?;
        loop {
            match self.peek().clone() {
                Tok::Sym('*') => {
                    self.next();
                    acc = acc.mul(&self.poly_unary()?);
                }
                Tok::Sym('/') => {
                    self.next();
                    let at = self.here();
                    let d = self.poly_unary()?;
                    match d.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&(BigRational::one() / c)),
                        Some(_) => return Err(self.error_at(at, "division by zero")),
                        None => return Err(self.error_at(at, "can only divide by a constant")),
                    }
                }
                // implicit product as in `2x` or `3(x+1)`
                Tok::Number(_) | Tok::Sym('(') => acc = acc.mul(&self.poly_unary()?),
                Tok::Ident(s) if s == "x" => acc = acc.mul(&self.poly_unary()?),
                _ => return Ok(acc),
            }
        }
    }

    fn poly_unary(&mut self) -> Result<Polynomial> {
        if self.eat(&Tok::Sym('-')) {
            return Ok(self.poly_unary()?.neg());
        }
        if self.eat(&Tok::Sym('+')) {
            return self.poly_unary();
        }
        let base = self.poly_atom()?;
        if self.eat(&Tok::Sym('^')) {
            let at = self.here();
            let e = self.natural()?;
            let e = e
                .is_integer()
                .then(|| u32::try_from(e.to_integer()).ok())
                .flatten()
                .filter(|&e| e <= 64)
                .ok_or_else(|| self.error_at(at, "exponent must be an integer in 0..=64"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn poly_atom(&mut self) -> Result<Polynomial> {
        match self.peek().clone() {
            Tok::Number(_) => Ok(Polynomial::constant(self.natural()?)),
            Tok::Ident(s) if s == "x" => {
                self.next();
                Ok(Polynomial::x())
            }
            Tok::Sym('(') => {
                self.next();
                let p = self.poly_expr()?;
                self.expect(&Tok::Sym(')'))?;
                Ok(p)
            }
            _ => Err(self.unexpected("`x`, a number or `(`")),
        }
    }
}

fn decimal(s: &str) -> Option<BigRational> {
    match s.split_once('.') {
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((int, frac)) => {
            let digits: BigInt = format!("{int}{frac}").parse().ok()?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            Some(BigRational::new(digits, scale))
        }
    }
}

/// Values that can appear on the right of `->` and the left of `@`.
pub trait Literal: DRag {
    #[doc(hidden)]
    fn parse_value(p: &mut ParserHandle<'_>) -> Result<Self>;
}

/// Opaque parser access for [`Literal`] implementations.
pub struct ParserHandle<'a>(&'a mut Parser);

impl Literal for IntervalValue {
    fn parse_value(p: &mut ParserHandle<'_>) -> Result<Self> {
        p.0.interval()
    }
}

impl Literal for ExtNonNeg {
    fn parse_value(p: &mut ParserHandle<'_>) -> Result<Self> {
        p.0.inline(Parser::ext)
    }
}

fn value<R: Literal>(p: &mut Parser) -> Result<R> {
    R::parse_value(&mut ParserHandle(p))
}

/// `poset { a; b; a <= b }`. Points appear in order of first mention;
/// `a <= b <= c` chains relations.
pub fn parse_poset(src: &str) -> Result<FinitePoset> {
    let mut p = Parser::new(src)?;
    let mut names: Vec<String> = Vec::new();
    let mut relations: Vec<(String, String)> = Vec::new();
    let mut first_relation = None;
    let note = |names: &mut Vec<String>, n: &str| {
        if !names.iter().any(|m| m == n) {
            names.push(n.to_string());
        }
    };
    p.block("poset", false, |p| {
        let (mut left, at) = p.ident()?;
        note(&mut names, &left);
        while p.eat(&Tok::Leq) {
            let (right, _) = p.ident()?;
            note(&mut names, &right);
            first_relation.get_or_insert(at);
            relations.push((left, right.clone()));
            left = right;
        }
        Ok(())
    })?;
    FinitePoset::from_relations(&names, &relations).map_err(|e| match first_relation {
        Some((line, column)) => Error::Parse {
            line,
            column,
            message: e.to_string(),
        },
        None => e,
    })
}

/// `fn h { a -> v; ... }`; every point of `space` needs exactly one value
/// and the result must be monotone.
pub fn parse_monotone_map<R: Literal>(src: &str, space: &FinitePoset) -> Result<MonotoneMap<R>> {
    let mut p = Parser::new(src)?;
    let mut table: Vec<Option<R>> = vec![None; space.len()];
    p.block("fn", true, |p| {
        let at = p.here();
        let x = p.point(space)?;
        p.expect(&Tok::Arrow)?;
        let v = value::<R>(p)?;
        if table[x].replace(v).is_some() {
            return Err(p.error_at(at, format!("`{}` is assigned twice", space.name(x))));
        }
        Ok(())
    })?;
    let table = table
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::NotTotal(space.name(i).to_string())))
        .collect::<Result<Vec<_>>>()?;
    MonotoneMap::new(space.clone(), table)
}

/// `val { r @ x; ... }`.
pub fn parse_valuation<R: Literal>(src: &str, space: &FinitePoset) -> Result<ElementaryValuation<R>> {
    let mut p = Parser::new(src)?;
    let mut terms = Vec::new();
    p.block("val", false, |p| {
        let r = value::<R>(p)?;
        p.expect(&Tok::Sym('@'))?;
        terms.push((r, p.point(space)?));
        Ok(())
    })?;
    ElementaryValuation::new(space.clone(), terms)
}

/// `measure { m @ x; ... }`; masses may be `inf`.
pub fn parse_measure(src: &str, space: &FinitePoset) -> Result<FiniteSupportMeasure> {
    let mut p = Parser::new(src)?;
    let mut masses = Vec::new();
    p.block("measure", false, |p| {
        let m = p.inline(Parser::ext)?;
        p.expect(&Tok::Sym('@'))?;
        masses.push((p.point(space)?, m));
        Ok(())
    })?;
    FiniteSupportMeasure::from_masses(space.clone(), masses)
}

/// A polynomial in `x` with rational coefficients.
pub fn parse_polynomial(src: &str) -> Result<Polynomial> {
    let mut p = Parser::new(src)?;
    let poly = p.inline(Parser::poly_expr)?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of expression"));
    }
    Ok(poly)
}

/// `piecewise { [a,b] inc: expr; ... }` with directions `inc`, `dec`, `any`.
pub fn parse_piecewise(src: &str) -> Result<PiecewiseMonotoneFn> {
    let mut p = Parser::new(src)?;
    let mut pieces = Vec::new();
    let mut starts = Vec::new();
    p.block("piecewise", false, |p| {
        let at = p.here();
        starts.push(at);
        p.inline(|p| {
            p.expect(&Tok::Sym('['))?;
            let lo = p.rational()?;
            p.expect(&Tok::Sym(','))?;
            let hi = p.rational()?;
            p.expect(&Tok::Sym(']'))
            .map(|_| (lo, hi))
        })
        .and_then(|(lo, hi)| {
            let (word, word_at) = p.ident()?;
            let direction = Direction::from_keyword(&word)
                .ok_or_else(|| p.error_at(word_at, format!("expected `inc`, `dec` or `any`, found `{word}`")))?;
            p.expect(&Tok::Sym(':'))?;
            let expr = p.inline(Parser::poly_expr)?;
            if lo >= hi {
                return Err(p.error_at(at, format!("empty piece [{lo},{hi}]")));
            }
            pieces.push(Piece::new(lo, hi, direction, expr));
            Ok(())
        })
    })?;
    PiecewiseMonotoneFn::validated(pieces).map_err(|(k, e)| match starts.get(k) {
        Some(&(line, column)) => Error::Parse {
            line,
            column,
            message: e.to_string(),
        },
        None => e,
    })
}

impl std::str::FromStr for FinitePoset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poset(s)
    }
}

impl std::str::FromStr for PiecewiseMonotoneFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_piecewise(s)
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}

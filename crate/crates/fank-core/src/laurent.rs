//! Sparse integral Laurent polynomials in n variables with exponents in Z^n,
//! plus the text grammar used by the CLI and file formats (variables a1…an).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

use crate::matrix::Vector;

/// Sparse Laurent polynomial: exponent vector → nonzero coefficient.
/// Canonical form: no zero coefficients stored, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    pub n: usize,
    terms: BTreeMap<Vector, BigInt>,
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        LaurentPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        LaurentPoly::constant(n, BigInt::one())
    }

    pub fn constant(n: usize, c: BigInt) -> Self {
        LaurentPoly::monomial(n, vec![BigInt::zero(); n], c)
    }

    /// c·α^exp.
    pub fn monomial(n: usize, exp: Vector, c: BigInt) -> Self {
        assert_eq!(exp.len(), n, "exponent length mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { n, terms }
    }

    /// The variable α_i (0-based index).
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index out of range");
        let mut exp = vec![BigInt::zero(); n];
        exp[i] = BigInt::one();
        LaurentPoly::monomial(n, exp, BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self == &LaurentPoly::one(self.n)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vector, &BigInt)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[BigInt]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    fn insert_term(&mut self, exp: Vector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Multiply by a single term c·α^exp.
    pub fn mul_term(&self, exp: &[BigInt], c: &BigInt) -> LaurentPoly {
        assert_eq!(exp.len(), self.n, "exponent length mismatch");
        let mut out = LaurentPoly::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (e, k) in &self.terms {
            let shifted: Vector = e.iter().zip(exp).map(|(a, b)| a + b).collect();
            out.insert_term(shifted, k * c);
        }
        out
    }

    /// Set the listed variables (0-based) to 1: their exponent coordinates
    /// drop to 0 and coefficients merge.
    pub fn substitute_one(&self, vars: &[usize]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.n);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            for &v in vars {
                assert!(v < self.n, "variable index out of range");
                e2[v] = BigInt::zero();
            }
            out.insert_term(e2, c.clone());
        }
        out
    }
}

/// The K-theoretic Euler class e(ν) = 1 − α^ν.
pub fn euler_class(nu: &[BigInt]) -> LaurentPoly {
    let n = nu.len();
    let one = LaurentPoly::one(n);
    let mono = LaurentPoly::monomial(n, nu.to_vec(), BigInt::one());
    one - mono
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = LaurentPoly::zero(self.n);
        for (e, c) in &rhs.terms {
            let part = self.mul_term(e, c);
            out = &out + &part;
        }
        out
    }
}

macro_rules! forward_owned {
    ($trait:ident, $fn:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $fn(self, rhs: LaurentPoly) -> LaurentPoly {
                $trait::$fn(&self, &rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Graded lexicographic term order: total degree first, then exponent lex.
fn graded_lex(a: &Vector, b: &Vector) -> std::cmp::Ordering {
    let da: BigInt = a.iter().sum();
    let db: BigInt = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Deterministic text form: ascending graded lex, variables a1…an.
pub fn format_laurent(f: &LaurentPoly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Vector, &BigInt)> = f.terms.iter().collect();
    terms.sort_by(|x, y| graded_lex(x.0, y.0));
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        let is_const = e.iter().all(|x| x.is_zero());
        if !mag.is_one() || is_const {
            factors.push(mag.to_string());
        }
        for (j, exp) in e.iter().enumerate() {
            if exp.is_zero() {
                continue;
            }
            if exp.is_one() {
                factors.push(format!("a{}", j + 1));
            } else {
                factors.push(format!("a{}^{}", j + 1, exp));
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_laurent(self))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[n={}]({})", self.n, format_laurent(self))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn err<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn parse_uint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected integer");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digit string"))
    }

    fn parse_int(&mut self) -> Result<BigInt, ParseError> {
        if self.peek() == Some('-') {
            self.bump();
            Ok(-self.parse_uint()?)
        } else {
            self.parse_uint()
        }
    }

    fn parse_factor(&mut self) -> Result<LaurentPoly, ParseError> {
        match self.peek() {
            Some('-') => {
                self.bump();
                Ok(-self.parse_factor()?)
            }
            Some('(') => {
                self.bump();
                let inner = self.parse_expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Some('a') => {
                self.bump();
                let idx = self.parse_uint()?;
                let idx: usize = idx
                    .try_into()
                    .map_err(|_| ParseError {
                        position: self.pos,
                        message: "variable index too large".to_string(),
                    })?;
                if idx == 0 || idx > self.n {
                    return self.err(&format!("variable index out of range 1..={}", self.n));
                }
                let mut exp = vec![BigInt::zero(); self.n];
                if self.peek() == Some('^') {
                    self.bump();
                    exp[idx - 1] = self.parse_int()?;
                } else {
                    exp[idx - 1] = BigInt::one();
                }
                Ok(LaurentPoly::monomial(self.n, exp, BigInt::one()))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.parse_uint()?;
                Ok(LaurentPoly::constant(self.n, v))
            }
            _ => self.err("expected factor"),
        }
    }

    fn parse_term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some('*') {
            self.bump();
            let rhs = self.parse_factor()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn parse_expr(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = &acc + &rhs;
                }
                Some('-') => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }
}

/// Parses the Laurent expression grammar (expr/term/factor, variables a1…an).
pub fn parse_laurent(text: &str, n: usize) -> Result<LaurentPoly, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        n,
    };
    let f = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

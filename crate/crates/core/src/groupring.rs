//! Formal complex combinations of group elements, the augmentation ideal
//! and the weight-k slash action.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modgroup::{GroupElement, GroupPreset};

/// An element `Σ aᵢ γᵢ` of `C[Γ]`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroupRingElement {
    terms: BTreeMap<GroupElement, Complex64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_element(GroupElement::identity())
    }

    pub fn from_element(g: GroupElement) -> Self {
        Self::from_terms([(g, Complex64::new(1.0, 0.0))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GroupElement, Complex64)>) -> Self {
        let mut out = Self::zero();
        for (g, a) in terms {
            out.add_term(g, a);
        }
        out
    }

    /// `γ - 1`.
    pub fn augmented(g: &GroupElement) -> Self {
        Self::from_terms([
            (g.clone(), Complex64::new(1.0, 0.0)),
            (GroupElement::identity(), Complex64::new(-1.0, 0.0)),
        ])
    }

    pub fn add_term(&mut self, g: GroupElement, a: Complex64) {
        let key = g.clone();
        let entry = self.terms.entry(g).or_insert(Complex64::new(0.0, 0.0));
        *entry += a;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &GroupElement) -> Complex64 {
        self.terms.get(g).copied().unwrap_or_default()
    }

    /// Augmentation `deg(Σ aᵢγᵢ) = Σ aᵢ`.
    pub fn degree(&self) -> Complex64 {
        self.terms.values().sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, a)| (g.clone(), a * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, a) in &other.terms {
            out.add_term(g.clone(), *a);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Convolution product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_term(g.try_mul(h)?, a * b);
            }
        }
        Ok(out)
    }

    /// Weight-k slash `(f|ₖξ)(z) = Σ aᵢ j(γᵢ,z)^{-k} f(γᵢ z)`.
    pub fn slash_at<F>(&self, f: F, k: i32, z: Complex64) -> Result<Complex64>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for (g, a) in &self.terms {
            let w = g.apply(z)?;
            acc += a * g.automorphy(z).powi(-k) * f(w)?;
        }
        Ok(acc)
    }

    /// The slashed function as a closure.
    pub fn slash<'a, F>(&'a self, f: F, k: i32) -> impl Fn(Complex64) -> Result<Complex64> + 'a
    where
        F: Fn(Complex64) -> Result<Complex64> + 'a,
    {
        move |z| self.slash_at(&f, k, z)
    }
}

/// `∏ᵢ (γᵢ - 1)`, an element of `J^s` for `s = factors.len()`.
pub fn j_power_element(factors: &[GroupElement]) -> Result<GroupRingElement> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("j_power_element needs at least one factor".into()));
    }
    let mut out = GroupRingElement::one();
    for g in factors {
        out = out.multiply(&GroupRingElement::augmented(g))?;
    }
    Ok(out)
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({}{:+}i){}", a.re, a.im, g)?;
        }
        Ok(())
    }
}

/// Parses expressions such as `(g1-1)(g2-1)`, `g1g2^-1 - 2*g1 + 1` or
/// `(g3^2 - 1)*(g1-1)`, where `gN` is the N-th preset generator.
pub fn parse_group_ring(input: &str, preset: &GroupPreset) -> Result<GroupRingElement> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, pos: 0, preset };
    let out = parser.sum()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse(format!("unexpected trailing input in `{input}`")));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Gen(i32, i64),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let read_int = |i: &mut usize| -> Option<i64> {
        let start = *i;
        let neg = chars.get(*i) == Some(&'-');
        if neg {
            *i += 1;
        }
        let digits_start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        if *i == digits_start {
            *i = start;
            return None;
        }
        let v: i64 = chars[digits_start..*i].iter().collect::<String>().parse().ok()?;
        Some(if neg { -v } else { v })
    };
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            'g' => {
                i += 1;
                let idx = read_int(&mut i).filter(|v| *v > 0).ok_or_else(|| Error::Parse(format!("bad generator at {i}")))?;
                let mut exp = 1;
                if chars.get(i) == Some(&'^') {
                    i += 1;
                    exp = read_int(&mut i).ok_or_else(|| Error::Parse(format!("bad exponent at {i}")))?;
                }
                out.push(Token::Gen(idx as i32, exp));
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let v: f64 = chars[start..i].iter().collect::<String>().parse().map_err(|_| Error::Parse("bad number".into()))?;
                out.push(Token::Num(v));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    preset: &'a GroupPreset,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn sum(&mut self) -> Result<GroupRingElement> {
        let mut sign = 1.0;
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            sign = -1.0;
        }
        let mut acc = self.product()?.scale(Complex64::new(sign, 0.0));
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<GroupRingElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.multiply(&self.factor()?)?;
                }
                Some(Token::Num(_)) | Some(Token::Gen(..)) | Some(Token::LParen) => {
                    acc = acc.multiply(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<GroupRingElement> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(v)) => {
                self.pos += 1;
                Ok(GroupRingElement::one().scale(Complex64::new(v, 0.0)))
            }
            Some(Token::Gen(idx, exp)) => {
                self.pos += 1;
                let gens = self.preset.generators();
                let g = gens
                    .get(idx as usize - 1)
                    .ok_or_else(|| Error::Parse(format!("generator g{idx} does not exist")))?;
                Ok(GroupRingElement::from_element(g.pow(exp)?))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

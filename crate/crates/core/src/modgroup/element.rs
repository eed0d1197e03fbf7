use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of PSL2(Z), stored as the representative whose first nonzero
/// entry of the bottom row `(c, d)` is positive.
///
/// The optional `word` records a factorization into the generators of a
/// preset as signed 1-based indices (`-i` is the inverse of generator `i`).
/// Equality and hashing only look at the matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElement {
    a: i128,
    b: i128,
    c: i128,
    d: i128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    word: Option<Vec<i32>>,
}

impl GroupElement {
    pub fn new(a: i128, b: i128, c: i128, d: i128) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(x, y)| x.checked_sub(y))
            .ok_or(Error::Overflow)?;
        if det != 1 {
            return Err(Error::BadDeterminant { a, b, c, d, det });
        }
        Ok(Self::normalized(a, b, c, d))
    }

    /// Builds from entries known to have determinant one (debug-checked).
    pub(crate) fn from_entries(a: i128, b: i128, c: i128, d: i128) -> Self {
        debug_assert_eq!(a * d - b * c, 1);
        Self::normalized(a, b, c, d)
    }

    fn normalized(a: i128, b: i128, c: i128, d: i128) -> Self {
        if c < 0 || (c == 0 && d < 0) {
            Self { a: -a, b: -b, c: -c, d: -d, word: None }
        } else {
            Self { a, b, c, d, word: None }
        }
    }

    pub fn identity() -> Self {
        Self { a: 1, b: 0, c: 0, d: 1, word: Some(Vec::new()) }
    }

    /// `[[1, h], [0, 1]]`.
    pub fn translation(h: i128) -> Self {
        Self::from_entries(1, h, 0, 1)
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn inversion() -> Self {
        Self::from_entries(0, -1, 1, 0)
    }

    pub fn entries(&self) -> [i128; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn word(&self) -> Option<&[i32]> {
        self.word.as_deref()
    }

    pub fn with_word(mut self, word: Vec<i32>) -> Self {
        self.word = Some(word);
        self
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1 && self.b == 0 && self.c == 0 && self.d == 1
    }

    pub fn trace(&self) -> i128 {
        self.a + self.d
    }

    pub fn is_parabolic(&self) -> bool {
        !self.is_identity() && self.trace().abs() == 2
    }

    pub fn inverse(&self) -> Self {
        let mut inv = Self::normalized(self.d, -self.b, -self.c, self.a);
        inv.word = self
            .word
            .as_ref()
            .map(|w| w.iter().rev().map(|&g| -g).collect());
        inv
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        let m = |x: i128, y: i128, z: i128, w: i128| -> Result<i128> {
            x.checked_mul(y)
                .zip(z.checked_mul(w))
                .and_then(|(p, q)| p.checked_add(q))
                .ok_or(Error::Overflow)
        };
        let a = m(self.a, rhs.a, self.b, rhs.c)?;
        let b = m(self.a, rhs.b, self.b, rhs.d)?;
        let c = m(self.c, rhs.a, self.d, rhs.c)?;
        let d = m(self.c, rhs.b, self.d, rhs.d)?;
        let mut out = Self::normalized(a, b, c, d);
        out.word = match (&self.word, &rhs.word) {
            (Some(u), Some(v)) => Some(free_reduce(u.iter().chain(v.iter()).copied())),
            _ => None,
        };
        Ok(out)
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity();
        if self.word.is_none() {
            out.word = None;
        }
        for _ in 0..n.unsigned_abs() {
            out = out.try_mul(&base)?;
        }
        Ok(out)
    }

    /// Moebius action `(az+b)/(cz+d)`.
    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        check_upper(z, 0.0)?;
        let (a, b, c, d) = self.as_f64();
        Ok((z * a + b) / (z * c + d))
    }

    /// Automorphy factor `cz+d` of the normalized representative.
    pub fn automorphy(&self, z: Complex64) -> Complex64 {
        let (_, _, c, d) = self.as_f64();
        z * c + d
    }

    pub(crate) fn as_f64(&self) -> (f64, f64, f64, f64) {
        (self.a as f64, self.b as f64, self.c as f64, self.d as f64)
    }
}

/// Errors unless `Im z > floor`.
pub fn check_upper(z: Complex64, floor: f64) -> Result<()> {
    if z.im > floor && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NotInUpperHalfPlane { re: z.re, im: z.im, floor })
    }
}

/// Cancels adjacent `g, -g` pairs.
pub fn free_reduce(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for g in letters {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.entries() == other.entries()
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries().hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.entries().cmp(&other.entries())
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    /// Panics on i128 overflow; use [`GroupElement::try_mul`] to handle it.
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.try_mul(rhs).expect("matrix entries overflowed i128")
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        &self * &rhs
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn moebius_examples() {
        let id = GroupElement::identity();
        assert_eq!(id.apply(c(0.0, 1.0)).unwrap(), c(0.0, 1.0));
        let s = GroupElement::inversion();
        assert!((s.apply(c(0.0, 1.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        let t2 = GroupElement::translation(2);
        assert!((t2.apply(c(0.3, 0.7)).unwrap() - c(2.3, 0.7)).norm() < 1e-15);
        assert!(id.apply(c(0.0, -1.0)).is_err());
        assert!(id.apply(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn automorphy_examples() {
        let z = c(0.2, 0.9);
        assert_eq!(GroupElement::translation(1).automorphy(z), c(1.0, 0.0));
        assert_eq!(GroupElement::inversion().automorphy(c(0.0, 1.0)), c(0.0, 1.0));
    }

    #[test]
    fn normalization_is_idempotent_and_sign_free() {
        let g = GroupElement::new(-1, 0, -2, -1).unwrap();
        assert_eq!(g.entries(), [1, 0, 2, 1]);
        let h = GroupElement::new(g.a, g.b, g.c, g.d).unwrap();
        assert_eq!(g.entries(), h.entries());
        assert_eq!(GroupElement::new(-1, 0, 0, -1).unwrap(), GroupElement::identity());
    }

    #[test]
    fn determinant_is_checked() {
        assert!(matches!(GroupElement::new(2, 0, 0, 1), Err(Error::BadDeterminant { .. })));
    }

    #[test]
    fn inverse_and_words() {
        let g = GroupElement::new(7, -2, 11, -3).unwrap().with_word(vec![2]);
        let h = GroupElement::translation(1).with_word(vec![1]);
        let gh = &g * &h;
        assert_eq!(gh.word(), Some(&[2, 1][..]));
        let back = &gh * &gh.inverse();
        assert!(back.is_identity());
        assert_eq!(back.word(), Some(&[][..]));
    }

    #[test]
    fn free_reduction_cancels_nested_pairs() {
        assert_eq!(free_reduce([1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(free_reduce([1, -2, 2, 2]), vec![1, 2]);
    }

    #[test]
    fn overflow_is_reported() {
        let big = GroupElement::translation(i128::MAX / 2);
        let s = GroupElement::inversion();
        let x = &big * &s;
        assert_eq!(x.try_mul(&big).and_then(|y| y.try_mul(&big)).err(), Some(Error::Overflow));
    }
}

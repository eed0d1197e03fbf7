use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::signature::Signature;
use super::words::shuffles;
use crate::error::{Error, Result};
use crate::formbank::{Alphabet, Chirality, LetterKind};

/// How far a functional is known to depend only on homotopy classes of paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomotopyStatus {
    /// Every word uses letters of a single chirality.
    GuaranteedPureType,
    NumericallyChecked,
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterInfo {
    pub label: String,
    pub kind: LetterKind,
}

/// A finite linear combination of words over an alphabet, plus a constant term
/// (the empty word).
#[derive(Clone, Debug, PartialEq)]
pub struct IteratedIntegral {
    letters: Vec<LetterInfo>,
    terms: BTreeMap<Vec<usize>, Complex64>,
    declared_length: usize,
    checked: bool,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    word: Vec<String>,
    coeff: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct FunctionalRecord {
    letters: Vec<String>,
    #[serde(default)]
    declared_length: Option<usize>,
    terms: Vec<TermRecord>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl IteratedIntegral {
    /// The zero functional over `alphabet`.
    pub fn zero(alphabet: &Alphabet) -> Self {
        let letters = alphabet
            .letters()
            .iter()
            .map(|l| LetterInfo { label: l.label().to_string(), kind: l.kind() })
            .collect();
        Self { letters, terms: BTreeMap::new(), declared_length: 0, checked: false }
    }

    pub fn constant(alphabet: &Alphabet, c: Complex64) -> Self {
        Self::zero(alphabet).with_term(&[], c)
    }

    /// A single word with coefficient 1.
    pub fn word(alphabet: &Alphabet, word: &[usize]) -> Self {
        Self::zero(alphabet).with_term(word, Complex64::new(1.0, 0.0))
    }

    /// A single word given by letter labels.
    pub fn word_from_labels(alphabet: &Alphabet, labels: &[&str]) -> Result<Self> {
        let w = Self::resolve(alphabet, labels)?;
        Ok(Self::word(alphabet, &w))
    }

    fn resolve(alphabet: &Alphabet, labels: &[&str]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|l| alphabet.position(l).ok_or_else(|| Error::AlphabetMismatch(format!("unknown letter `{l}`"))))
            .collect()
    }

    pub fn with_term(mut self, word: &[usize], c: Complex64) -> Self {
        self.add_term(word, c);
        self
    }

    pub fn add_term(&mut self, word: &[usize], c: Complex64) {
        assert!(word.iter().all(|&a| a < self.letters.len()), "letter index out of range");
        let slot = self.terms.entry(word.to_vec()).or_insert_with(zero);
        *slot += c;
        if *slot == zero() {
            self.terms.remove(word);
        }
        self.declared_length = self.declared_length.max(word.len());
    }

    /// Raise the declared length (it never drops below the longest word).
    pub fn with_declared_length(mut self, s: usize) -> Self {
        self.declared_length = self.declared_length.max(s);
        self
    }

    pub fn letters(&self) -> &[LetterInfo] {
        &self.letters
    }

    pub fn labels(&self) -> Vec<String> {
        self.letters.iter().map(|l| l.label.clone()).collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[usize]) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_else(zero)
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coefficient(&[])
    }

    pub fn declared_length(&self) -> usize {
        self.declared_length
    }

    /// Length of the longest word with a nonzero coefficient.
    pub fn length(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn word_is_pure(&self, word: &[usize]) -> bool {
        let mut seen = None;
        for &a in word {
            let c = self.letters[a].kind.chirality();
            if c == Chirality::Mixed {
                return false;
            }
            match seen {
                None => seen = Some(c),
                Some(s) if s != c => return false,
                _ => {}
            }
        }
        true
    }

    pub fn homotopy_status(&self) -> HomotopyStatus {
        if self.terms.keys().all(|w| self.word_is_pure(w)) {
            HomotopyStatus::GuaranteedPureType
        } else if self.checked {
            HomotopyStatus::NumericallyChecked
        } else {
            HomotopyStatus::Unchecked
        }
    }

    /// Record the outcome of a numerical homotopy check.
    pub fn mark_checked(&mut self, passed: bool) {
        self.checked = passed;
    }

    /// Every letter that occurs extends over the cusps.
    pub fn is_cuspidal(&self) -> bool {
        self.terms.keys().flatten().all(|&a| self.letters[a].kind.is_cuspidal())
    }

    fn check_same_alphabet(&self, other: &Self) -> Result<()> {
        if self.letters != other.letters {
            return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", self.labels(), other.labels())));
        }
        Ok(())
    }

    /// `⟨I, S⟩ = Σ c_w S(w)`.
    pub fn evaluate(&self, sig: &Signature) -> Result<Complex64> {
        if sig.labels() != self.labels().as_slice() {
            return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", sig.labels(), self.labels())));
        }
        if sig.order() < self.length() {
            return Err(Error::AlphabetMismatch(format!(
                "signature order {} below functional length {}",
                sig.order(),
                self.length()
            )));
        }
        Ok(self.terms.iter().map(|(w, c)| c * sig.get(w)).sum())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (w, c) in &self.terms {
            out.add_term(w, c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_alphabet(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w, *c);
        }
        out.declared_length = self.declared_length.max(other.declared_length);
        out.checked = self.checked && other.checked;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Shuffle product; evaluates to the pointwise product on every path.
    pub fn shuffle(&self, other: &Self) -> Result<Self> {
        self.check_same_alphabet(other)?;
        let mut out = Self { terms: BTreeMap::new(), checked: false, ..self.clone() };
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                for w in shuffles(u, v) {
                    out.add_term(&w, a * b);
                }
            }
        }
        out.declared_length = self.declared_length + other.declared_length;
        Ok(out)
    }

    /// Split every word at every position, grouped by prefix:
    /// `I = Σ_u [u] ⊗ R_u`, so that `⟨I, P₁P₂⟩ = Σ_u ⟨[u], P₁⟩⟨R_u, P₂⟩`.
    /// The first pair is `(1, I)`.
    pub fn deconcatenate(&self) -> Vec<(IteratedIntegral, IteratedIntegral)> {
        let empty = Self { terms: BTreeMap::new(), declared_length: 0, checked: false, ..self.clone() };
        let mut by_prefix: BTreeMap<(usize, Vec<usize>), IteratedIntegral> = BTreeMap::new();
        for (w, c) in &self.terms {
            for i in 0..=w.len() {
                let right = by_prefix.entry((i, w[..i].to_vec())).or_insert_with(|| empty.clone());
                right.add_term(&w[i..], *c);
            }
        }
        by_prefix
            .into_iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|((_, u), r)| (empty.clone().with_term(&u, Complex64::new(1.0, 0.0)), r))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let rec = FunctionalRecord {
            letters: self.labels(),
            declared_length: Some(self.declared_length),
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermRecord {
                    word: w.iter().map(|&a| self.letters[a].label.clone()).collect(),
                    coeff: [c.re, c.im],
                })
                .collect(),
        };
        serde_json::to_string_pretty(&rec).expect("functionals serialize")
    }

    /// Read a functional, resolving letter labels against `alphabet`.
    ///
    /// The record's letter list must be a subset of the alphabet; words are
    /// re-indexed into the full alphabet.
    pub fn from_json(s: &str, alphabet: &Alphabet) -> Result<Self> {
        let rec: FunctionalRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let labels: Vec<&str> = rec.letters.iter().map(String::as_str).collect();
        Self::resolve(alphabet, &labels)?;
        let mut out = Self::zero(alphabet);
        for t in &rec.terms {
            if let Some(bad) = t.word.iter().find(|l| !rec.letters.contains(l)) {
                return Err(Error::Parse(format!("letter `{bad}` missing from the letter list")));
            }
            let word: Vec<&str> = t.word.iter().map(String::as_str).collect();
            let w = Self::resolve(alphabet, &word)?;
            out.add_term(&w, Complex64::new(t.coeff[0], t.coeff[1]));
        }
        if let Some(s) = rec.declared_length {
            out = out.with_declared_length(s);
        }
        Ok(out)
    }
}

impl fmt::Display for IteratedIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({}{:+}i)", c.re, c.im)?;
            if !w.is_empty() {
                let labels: Vec<&str> = w.iter().map(|&a| self.letters[a].label.as_str()).collect();
                write!(f, "[{}]", labels.join(" "))?;
            }
        }
        Ok(())
    }
}

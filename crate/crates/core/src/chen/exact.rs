use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::functional::IteratedIntegral;
use super::path::Path;
use super::signature::path_signature;
use crate::error::{Error, Result};
use crate::formbank::{Alphabet, Chirality, LetterKind, OneForm, Potential};

/// The exact 1-form `df` of a potential.
#[derive(Debug, Clone)]
pub struct ExactLetter {
    label: String,
    potential: Arc<dyn Potential>,
}

impl ExactLetter {
    pub fn new(potential: Arc<dyn Potential>) -> Self {
        Self { label: format!("d{}", potential.label()), potential }
    }

    pub fn with_label(potential: Arc<dyn Potential>, label: &str) -> Self {
        Self { label: label.to_string(), potential }
    }
}

impl OneForm for ExactLetter {
    fn label(&self) -> &str {
        &self.label
    }

    fn kind(&self) -> LetterKind {
        LetterKind::Holomorphic
    }

    fn components(&self, z: Complex64, _tol: f64) -> Result<(Complex64, Complex64)> {
        Ok((self.potential.derivative(z)?, Complex64::new(0.0, 0.0)))
    }
}

/// The product `f·ω` of a potential and a letter.
#[derive(Debug, Clone)]
pub struct ScaledLetter {
    label: String,
    potential: Arc<dyn Potential>,
    base: Arc<dyn OneForm>,
}

impl ScaledLetter {
    pub fn new(potential: Arc<dyn Potential>, base: Arc<dyn OneForm>) -> Self {
        Self { label: format!("{}*{}", potential.label(), base.label()), potential, base }
    }
}

impl OneForm for ScaledLetter {
    fn label(&self) -> &str {
        &self.label
    }

    fn kind(&self) -> LetterKind {
        match self.base.kind().chirality() {
            Chirality::Holomorphic => LetterKind::Holomorphic,
            _ => LetterKind::Smooth,
        }
    }

    fn components(&self, z: Complex64, tol: f64) -> Result<(Complex64, Complex64)> {
        let f = self.potential.value(z)?;
        let (a, b) = self.base.components(z, tol)?;
        Ok((f * a, f * b))
    }
}

/// A letter in a rewritten word: either an original letter `ωᵢ` or `f·ωᵢ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LetterRef {
    Base(usize),
    Scaled(usize),
}

/// Boundary factor multiplying a rewritten term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Boundary {
    One,
    /// `f` at the start of the path.
    Start,
    /// `f` at the end of the path.
    End,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RewriteTerm {
    pub sign: f64,
    pub boundary: Boundary,
    pub word: Vec<LetterRef>,
}

/// Rewrite `ω₁…ω_i df ω_{i+1}…ω_s` (with `df` inserted before index `position`)
/// as terms without `df`.
pub fn exact_rewrite(word: &[usize], position: usize) -> Result<Vec<RewriteTerm>> {
    let s = word.len();
    if position > s {
        return Err(Error::InvalidArgument(format!("position {position} beyond word length {s}")));
    }
    let base = |w: &[usize]| w.iter().map(|&a| LetterRef::Base(a)).collect::<Vec<_>>();
    let with_scaled = |k: usize| {
        let mut w = base(word);
        w[k] = LetterRef::Scaled(word[k]);
        w
    };
    let t = |sign, boundary, word| RewriteTerm { sign, boundary, word };
    Ok(if s == 0 {
        vec![t(1.0, Boundary::End, vec![]), t(-1.0, Boundary::Start, vec![])]
    } else if position == 0 {
        vec![t(1.0, Boundary::One, with_scaled(0)), t(-1.0, Boundary::Start, base(word))]
    } else if position == s {
        vec![t(1.0, Boundary::End, base(word)), t(-1.0, Boundary::One, with_scaled(s - 1))]
    } else {
        vec![t(1.0, Boundary::One, with_scaled(position)), t(-1.0, Boundary::One, with_scaled(position - 1))]
    })
}

/// Both sides of an exact-letter identity on a path.
#[derive(Clone, Debug, Serialize)]
pub struct ExactIdentityReport {
    pub word: Vec<String>,
    pub position: usize,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// Evaluate `∫ ω₁…ω_i df ω_{i+1}…` and its rewrite on `path`.
pub fn reduce_exact_letter(
    alphabet: &Alphabet,
    word: &[usize],
    position: usize,
    potential: Arc<dyn Potential>,
    path: &Path,
    tol: f64,
) -> Result<ExactIdentityReport> {
    let terms = exact_rewrite(word, position)?;
    let n = alphabet.len();
    // extended alphabet: originals, df, then f·ωₐ for each original
    let mut letters: Vec<Arc<dyn OneForm>> = alphabet.letters().to_vec();
    letters.push(Arc::new(ExactLetter::new(potential.clone())));
    for l in alphabet.letters() {
        letters.push(Arc::new(ScaledLetter::new(potential.clone(), l.clone())));
    }
    let ext = Alphabet::new(letters);
    let sig = path_signature(&ext, path, word.len() + 1, tol)?;
    let mut lhs_word = word.to_vec();
    lhs_word.insert(position, n);
    let lhs = sig.get(&lhs_word);
    let f_start = potential.value(path.start())?;
    let f_end = potential.value(path.end())?;
    let rhs: Complex64 = terms
        .iter()
        .map(|t| {
            let w: Vec<usize> = t
                .word
                .iter()
                .map(|r| match *r {
                    LetterRef::Base(a) => a,
                    LetterRef::Scaled(a) => n + 1 + a,
                })
                .collect();
            let b = match t.boundary {
                Boundary::One => Complex64::new(1.0, 0.0),
                Boundary::Start => f_start,
                Boundary::End => f_end,
            };
            t.sign * b * sig.get(&w)
        })
        .sum();
    Ok(ExactIdentityReport {
        word: word.iter().map(|&a| alphabet.get(a).label().to_string()).collect(),
        position,
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    })
}

/// The rewrite as a functional over `alphabet`, valid on paths starting at a
/// point where the potential equals `start_value`.
///
/// `resolve(a)` expresses `f·ωₐ` as a combination of letters of `alphabet`;
/// terms carrying `f(end)` are not functionals and are rejected.
pub fn rewrite_functional(
    alphabet: &Alphabet,
    word: &[usize],
    position: usize,
    start_value: Complex64,
    resolve: impl Fn(usize) -> Option<Vec<(usize, Complex64)>>,
) -> Result<IteratedIntegral> {
    let mut out = IteratedIntegral::zero(alphabet);
    for t in exact_rewrite(word, position)? {
        let b = match t.boundary {
            Boundary::One => Complex64::new(1.0, 0.0),
            Boundary::Start => start_value,
            Boundary::End => {
                return Err(Error::InvalidArgument("term depends on the path endpoint".into()));
            }
        };
        // expand scaled letters into sums of words
        let mut partial: Vec<(Vec<usize>, Complex64)> = vec![(vec![], t.sign * b)];
        for r in &t.word {
            let options = match *r {
                LetterRef::Base(a) => vec![(a, Complex64::new(1.0, 0.0))],
                LetterRef::Scaled(a) => resolve(a).ok_or_else(|| {
                    Error::InvalidArgument(format!("f·{} is not expressible in the alphabet", alphabet.get(a).label()))
                })?,
            };
            partial = partial
                .into_iter()
                .flat_map(|(w, c)| {
                    options.iter().map(move |&(a, x)| {
                        let mut w2 = w.clone();
                        w2.push(a);
                        (w2, c * x)
                    })
                })
                .collect();
        }
        for (w, c) in partial {
            out.add_term(&w, c);
        }
    }
    Ok(out.with_declared_length(word.len() + 1))
}

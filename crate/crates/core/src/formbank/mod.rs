//! Weight-2 forms as 1-forms on the upper half-plane.
//!
//! Every letter is normalized as `2πi f(z) dz` (holomorphic) or its complex
//! conjugate (antiholomorphic), so the period of a normalized cusp form over
//! a loop is the usual lattice period.

mod catalog;
mod lambda;
mod letter;

use std::fmt::Debug;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use catalog::{
    builtin_letters, builtin_letters_truncated, eisenstein_gamma0_11_coefficients, eta_product_coefficients, series_mul,
    theta2_fourth_coefficients, theta4_fourth_coefficients, DEFAULT_N_TRUNC,
};
pub use lambda::{modular_lambda, theta_constants, ModularLambda};
pub use letter::{FormLetter, LetterRecord, DEFAULT_Y_MIN};

/// What kind of 1-form a letter is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LetterKind {
    HolomorphicCusp,
    Eisenstein,
    AntiholomorphicCusp,
    /// Holomorphic but outside the modular catalog (exact forms such as `dλ`).
    Holomorphic,
    /// Anything else, e.g. a holomorphic form multiplied by a function.
    Smooth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Holomorphic,
    Antiholomorphic,
    Mixed,
}

impl LetterKind {
    pub fn chirality(self) -> Chirality {
        match self {
            LetterKind::HolomorphicCusp | LetterKind::Eisenstein | LetterKind::Holomorphic => Chirality::Holomorphic,
            LetterKind::AntiholomorphicCusp => Chirality::Antiholomorphic,
            LetterKind::Smooth => Chirality::Mixed,
        }
    }

    /// Extends holomorphically (or antiholomorphically) over the cusps.
    pub fn is_cuspidal(self) -> bool {
        matches!(self, LetterKind::HolomorphicCusp | LetterKind::AntiholomorphicCusp)
    }

    /// `(p, l)`: number of `dz`'s and of `dz/z` log poles, when the letter
    /// lives in the log complex.
    pub fn bidegree(self) -> Option<(u32, u32)> {
        match self {
            LetterKind::HolomorphicCusp => Some((1, 0)),
            LetterKind::Eisenstein => Some((1, 1)),
            LetterKind::AntiholomorphicCusp => Some((0, 0)),
            LetterKind::Holomorphic | LetterKind::Smooth => None,
        }
    }
}

/// A smooth 1-form `A(z) dz + B(z) dz̄` on the upper half-plane.
pub trait OneForm: Debug + Send + Sync {
    fn label(&self) -> &str;

    fn kind(&self) -> LetterKind;

    /// `(A(z), B(z))`, with series truncated so the omitted tail is below `tol`.
    fn components(&self, z: Complex64, tol: f64) -> Result<(Complex64, Complex64)>;

    /// Value of the pulled-back form `A z' + B conj(z')` for velocity `dz`.
    fn pullback(&self, z: Complex64, dz: Complex64, tol: f64) -> Result<Complex64> {
        let (a, b) = self.components(z, tol)?;
        Ok(a * dz + b * dz.conj())
    }
}

/// An ordered set of letters; words index into it.
#[derive(Clone, Debug)]
pub struct Alphabet {
    letters: Vec<Arc<dyn OneForm>>,
}

impl Alphabet {
    pub fn new(letters: Vec<Arc<dyn OneForm>>) -> Self {
        Self { letters }
    }

    pub fn from_letters(letters: Vec<FormLetter>) -> Self {
        Self::new(letters.into_iter().map(|l| Arc::new(l) as Arc<dyn OneForm>).collect())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Arc<dyn OneForm>] {
        &self.letters
    }

    pub fn get(&self, i: usize) -> &dyn OneForm {
        self.letters[i].as_ref()
    }

    pub fn labels(&self) -> Vec<String> {
        self.letters.iter().map(|l| l.label().to_string()).collect()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.label() == label)
    }

    /// Sub-alphabet with the given labels, in that order.
    pub fn select(&self, labels: &[&str]) -> Option<Self> {
        labels
            .iter()
            .map(|l| self.position(l).map(|i| self.letters[i].clone()))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }
}

/// A holomorphic function on the upper half-plane with known derivative,
/// used for exact letters `df`.
pub trait Potential: Debug + Send + Sync {
    fn label(&self) -> &str;

    fn value(&self, z: Complex64) -> Result<Complex64>;

    fn derivative(&self, z: Complex64) -> Result<Complex64>;
}

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{LetterKind, OneForm};
use crate::error::{Error, Result};
use crate::modgroup::{check_upper, PresetName};

/// Default floor on `Im z` for q-series evaluation.
pub const DEFAULT_Y_MIN: f64 = 0.02;

/// A weight-2 form given by a truncated q-expansion
/// `f(z) = Σ aₙ e(n·step·z)`, used as the 1-form `2πi f(z) dz`
/// (or its conjugate for antiholomorphic letters).
#[derive(Clone, Debug, PartialEq)]
pub struct FormLetter {
    pub label: String,
    pub kind: LetterKind,
    pub group: PresetName,
    /// Exponent step of the expansion variable: `q^step = e(step·z)`.
    pub step: f64,
    coefficients: Vec<Complex64>,
    /// `max |aₙ|/n²` over the stored coefficients, used for tail bounds.
    growth: f64,
    pub y_min: f64,
}

/// On-disk form of a letter.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LetterRecord {
    pub label: String,
    pub kind: LetterKind,
    pub group: PresetName,
    pub step: f64,
    pub coefficients: Vec<[f64; 2]>,
}

impl FormLetter {
    pub fn new(label: &str, kind: LetterKind, group: PresetName, step: f64, coefficients: Vec<Complex64>) -> Result<Self> {
        if kind.bidegree().is_none() {
            return Err(Error::InvalidArgument(format!("{kind:?} is not a catalog letter kind")));
        }
        if !(step > 0.0) || coefficients.is_empty() {
            return Err(Error::InvalidArgument("letter needs a positive step and coefficients".into()));
        }
        let growth = coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, a)| a.norm() / (n * n) as f64)
            .fold(0.0, f64::max);
        Ok(Self { label: label.to_string(), kind, group, step, coefficients, growth, y_min: DEFAULT_Y_MIN })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn hodge_p(&self) -> u32 {
        self.kind.bidegree().map_or(0, |(p, _)| p)
    }

    pub fn log_weight_l(&self) -> u32 {
        self.kind.bidegree().map_or(0, |(_, l)| l)
    }

    /// Period of the expansion in `Re z`.
    pub fn width(&self) -> f64 {
        1.0 / self.step
    }

    /// The antiholomorphic partner `conj(ω)`.
    pub fn conjugate(&self, label: &str) -> Result<Self> {
        let kind = match self.kind {
            LetterKind::HolomorphicCusp => LetterKind::AntiholomorphicCusp,
            LetterKind::AntiholomorphicCusp => LetterKind::HolomorphicCusp,
            other => return Err(Error::InvalidArgument(format!("cannot conjugate a {other:?} letter"))),
        };
        let coeffs = self.coefficients.iter().map(|a| a.conj()).collect();
        Self::new(label, kind, self.group, self.step, coeffs)
    }

    /// Number of terms needed so that `growth · Σ_{n≥N} n² rⁿ < tol`.
    fn terms_needed(&self, r: f64, tol: f64) -> usize {
        let tail = |n: usize| -> f64 {
            let n = n as f64;
            let one_m = 1.0 - r;
            r.powf(n) * (n * n / one_m + 2.0 * n * r / (one_m * one_m) + r * (1.0 + r) / one_m.powi(3))
        };
        if self.growth == 0.0 {
            return 1;
        }
        let bound = |n: usize| self.growth * tail(n);
        let mut hi = 1usize;
        while bound(hi) >= tol {
            hi *= 2;
            if hi > 1 << 24 {
                return usize::MAX;
            }
        }
        let mut lo = hi / 2;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if bound(mid) < tol {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi.max(1)
    }

    /// Holomorphic series `Σ bₙ e(n·step·z)` of the underlying function,
    /// where `bₙ` are the stored coefficients (conjugated back for
    /// antiholomorphic letters).
    fn series(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        check_upper(z, self.y_min)?;
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        let x = (Complex64::new(0.0, 2.0 * PI * self.step) * z).exp();
        let n = self.terms_needed(x.norm(), tol);
        if n > self.coefficients.len() {
            return Err(Error::InsufficientPrecision { required: n, available: self.coefficients.len() });
        }
        let anti = self.kind == LetterKind::AntiholomorphicCusp;
        let mut acc = Complex64::new(0.0, 0.0);
        for a in self.coefficients[..n].iter().rev() {
            let a = if anti { a.conj() } else { *a };
            acc = acc * x + a;
        }
        Ok(acc)
    }

    /// `f(z)`, or `conj(f(z))` for antiholomorphic letters, with tail below `tol`.
    pub fn evaluate(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        let s = self.series(z, tol)?;
        Ok(if self.kind == LetterKind::AntiholomorphicCusp { s.conj() } else { s })
    }

    pub fn to_record(&self) -> LetterRecord {
        LetterRecord {
            label: self.label.clone(),
            kind: self.kind,
            group: self.group,
            step: self.step,
            coefficients: self.coefficients.iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn from_record(rec: &LetterRecord) -> Result<Self> {
        let coeffs = rec.coefficients.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        Self::new(&rec.label, rec.kind, rec.group, rec.step, coeffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("letter records serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: LetterRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_record(&rec)
    }
}

impl OneForm for FormLetter {
    fn label(&self) -> &str {
        &self.label
    }

    fn kind(&self) -> LetterKind {
        self.kind
    }

    fn components(&self, z: Complex64, tol: f64) -> Result<(Complex64, Complex64)> {
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        let s = self.series(z, tol)?;
        Ok(if self.kind == LetterKind::AntiholomorphicCusp {
            (Complex64::new(0.0, 0.0), (two_pi_i * s).conj())
        } else {
            (two_pi_i * s, Complex64::new(0.0, 0.0))
        })
    }
}

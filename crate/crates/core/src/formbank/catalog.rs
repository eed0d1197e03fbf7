use num_complex::Complex64;

use super::letter::FormLetter;
use super::LetterKind;
use crate::error::Result;
use crate::modgroup::{GroupPreset, PresetName};

/// Default number of stored q-expansion coefficients per letter.
pub const DEFAULT_N_TRUNC: usize = 512;

/// Truncated product of two power series.
pub fn series_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `∏(1 − qⁿ)` to `n` terms from the pentagonal number theorem.
fn euler_product(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    let mut k: i64 = 0;
    loop {
        let mut touched = false;
        for kk in [k, -k] {
            let e = (kk * (3 * kk - 1) / 2) as usize;
            if e < n {
                out[e] = if k % 2 == 0 { 1.0 } else { -1.0 };
                touched = true;
            }
        }
        if !touched {
            break;
        }
        k += 1;
    }
    out
}

fn stretch(a: &[f64], factor: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, &x) in a.iter().enumerate() {
        if i * factor >= n {
            break;
        }
        out[i * factor] = x;
    }
    out
}

/// Coefficients `a₀..a_{n−1}` of `η(z)²η(11z)² = q ∏(1−qᵐ)²(1−q^{11m})²`.
pub fn eta_product_coefficients(n: usize) -> Vec<f64> {
    let p = euler_product(n);
    let p2 = series_mul(&p, &p, n);
    let p2_11 = stretch(&p2, 11, n);
    let body = series_mul(&p2, &p2_11, n);
    let mut out = vec![0.0; n];
    out[1..n].copy_from_slice(&body[..n - 1]);
    out
}

fn sigma1(n: usize) -> f64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d as f64).sum()
}

/// `(11 E₂(11z) − E₂(z)) / 10`, normalized to constant term 1.
pub fn eisenstein_gamma0_11_coefficients(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    out[0] = 1.0;
    for (m, slot) in out.iter_mut().enumerate().skip(1) {
        let s11 = if m % 11 == 0 { sigma1(m / 11) } else { 0.0 };
        *slot = 2.4 * (sigma1(m) - 11.0 * s11);
    }
    out
}

/// `θ(q) = Σ_{m∈ℤ} s^m q^{m²}` to `n` terms, with `s = ±1`.
fn theta_series(sign: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    out[0] = 1.0;
    let mut m = 1usize;
    while m * m < n {
        out[m * m] += 2.0 * if m % 2 == 1 { sign } else { 1.0 };
        m += 1;
    }
    out
}

/// `θ₄(q)⁴` in `q = e^{πiτ}`.
pub fn theta4_fourth_coefficients(n: usize) -> Vec<f64> {
    let t = theta_series(-1.0, n);
    let t2 = series_mul(&t, &t, n);
    series_mul(&t2, &t2, n)
}

/// `θ₂(q)⁴` in `q = e^{πiτ}`, using `θ₂ = 2q^{1/4} Σ_{m≥0} q^{m(m+1)}`.
pub fn theta2_fourth_coefficients(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n];
    let mut m = 0usize;
    while m * (m + 1) < n {
        t[m * (m + 1)] = 2.0;
        m += 1;
    }
    let t2 = series_mul(&t, &t, n);
    let t4 = series_mul(&t2, &t2, n);
    // q^{1/4} to the fourth power shifts by one.
    let mut out = vec![0.0; n];
    out[1..n].copy_from_slice(&t4[..n - 1]);
    out
}

fn complexify(v: Vec<f64>) -> Vec<Complex64> {
    v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
}

fn build(preset: PresetName, n: usize) -> Result<Vec<FormLetter>> {
    match preset {
        PresetName::Gamma0_11 => {
            let f = FormLetter::new(
                "f",
                LetterKind::HolomorphicCusp,
                preset,
                1.0,
                complexify(eta_product_coefficients(n)),
            )?;
            let fbar = f.conjugate("fbar")?;
            let e = FormLetter::new(
                "E",
                LetterKind::Eisenstein,
                preset,
                1.0,
                complexify(eisenstein_gamma0_11_coefficients(n)),
            )?;
            Ok(vec![f, fbar, e])
        }
        PresetName::Gamma2 => {
            let half = |v: Vec<f64>, s: f64| complexify(v.into_iter().map(|x| 0.5 * s * x).collect());
            let w0 = FormLetter::new(
                "w0",
                LetterKind::Eisenstein,
                preset,
                0.5,
                half(theta4_fourth_coefficients(n), 1.0),
            )?;
            let w1 = FormLetter::new(
                "w1",
                LetterKind::Eisenstein,
                preset,
                0.5,
                half(theta2_fourth_coefficients(n), -1.0),
            )?;
            Ok(vec![w0, w1])
        }
    }
}

/// The catalog letters of a preset.
///
/// `gamma0_11`: `f` (the level-11 newform), `fbar`, and the Eisenstein letter `E`.
/// `gamma2`: `w0 = dλ/λ` and `w1 = dλ/(λ−1)`.
pub fn builtin_letters(preset: &GroupPreset) -> Vec<FormLetter> {
    builtin_letters_truncated(preset.name, DEFAULT_N_TRUNC)
}

/// Same as [`builtin_letters`] with a custom truncation.
pub fn builtin_letters_truncated(preset: PresetName, n: usize) -> Vec<FormLetter> {
    build(preset, n.max(2)).expect("catalog letters are well formed")
}

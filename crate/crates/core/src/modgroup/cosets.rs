//! Representatives of `Γ_𝔞\Γ`.
//!
//! A coset `Γ_𝔞 γ` is determined by the bottom row `(c, d)` of `σ_𝔞⁻¹ γ`
//! up to sign, so enumerating coprime pairs and lifting each admissible
//! one gives exactly one representative per coset.

use super::element::GroupElement;
use super::preset::{Cusp, GroupPreset};
use crate::error::Result;

/// `(a, b)` with `a d - b c = 1`, for coprime `(c, d)`.
pub fn extend_bottom_row(c: i128, d: i128) -> Option<GroupElement> {
    // extended Euclid on (d, c): x d + y c = g
    let (mut r0, mut r1) = (d, c);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    let sign = match r0 {
        1 => 1,
        -1 => -1,
        _ => return None,
    };
    // a d - b c = 1 with a = x0, b = -y0
    GroupElement::new(sign * x0, -sign * y0, c, d).ok()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One representative per coset of `Γ_𝔞\Γ` whose twisted bottom row
/// `(c, d)` of `σ_𝔞⁻¹γ` satisfies `|c| ≤ c_bound` and `|d| ≤ c_bound`
/// (the row `(0, 1)` is always admitted). Representatives carry words.
pub fn coset_reps(preset: &GroupPreset, cusp: &Cusp, c_bound: u32) -> Result<Vec<GroupElement>> {
    coset_reps_in_box(preset, cusp, c_bound as i128, c_bound as i128)
}

pub fn coset_reps_in_box(
    preset: &GroupPreset,
    cusp: &Cusp,
    c_bound: i128,
    d_bound: i128,
) -> Result<Vec<GroupElement>> {
    let level = preset.congruence.level();
    let mut out = Vec::new();
    for c in 0..=c_bound {
        let ds: Vec<i128> = if c == 0 { vec![1] } else { (-d_bound..=d_bound).collect() };
        for d in ds {
            if gcd(c, d) != 1 {
                continue;
            }
            let base = extend_bottom_row(c, d).expect("coprime row extends");
            for j in 0..level {
                let lifted = &cusp.scaling * &(&GroupElement::translation(j) * &base);
                if preset.contains(&lifted) {
                    out.push(preset.with_word(&lifted)?);
                    break;
                }
            }
        }
    }
    Ok(out)
}

#![allow(dead_code)]

use geomod_core::chen::{words, Path, Signature};
use geomod_core::formbank::Alphabet;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut ChaCha8Rng, x: (f64, f64), y: (f64, f64)) -> Complex64 {
    c(rng.gen_range(x.0..x.1), rng.gen_range(y.0..y.1))
}

pub fn random_path(rng: &mut ChaCha8Rng, segments: usize, x: (f64, f64), y: (f64, f64)) -> Path {
    Path::new((0..=segments).map(|_| random_point(rng, x, y)).collect()).unwrap()
}

/// Whole-path signature by classical RK4 on the truncated tensor ODE
/// `dS_{wa} = S_w ωₐ`, Richardson-extrapolated between `steps` and `2·steps`
/// per segment. Shares no code with the library quadrature.
pub fn rk4_signature(alphabet: &Alphabet, path: &Path, order: usize, steps: usize) -> Vec<Complex64> {
    let coarse = rk4_run(alphabet, path, order, steps);
    let fine = rk4_run(alphabet, path, order, 2 * steps);
    fine.iter().zip(&coarse).map(|(f, c)| (16.0 * f - c) / 15.0).collect()
}

fn rk4_run(alphabet: &Alphabet, path: &Path, order: usize, steps: usize) -> Vec<Complex64> {
    let n = alphabet.len();
    let total = words::word_count(n, order);
    let mut x = vec![c(0.0, 0.0); total];
    x[0] = c(1.0, 0.0);
    let rhs = |state: &[Complex64], g: &[Complex64]| -> Vec<Complex64> {
        let mut d = vec![c(0.0, 0.0); total];
        for r in 0..order {
            let start = words::length_offset(n, r);
            for k in 0..n.pow(r as u32) {
                let v = state[start + k];
                for a in 0..n {
                    d[words::length_offset(n, r + 1) + k * n + a] += v * g[a];
                }
            }
        }
        d
    };
    for (a, b) in path.segments() {
        let dz = b - a;
        let sample = |t: f64| -> Vec<Complex64> {
            alphabet.letters().iter().map(|l| l.pullback(a + dz * t, dz, 1e-16).unwrap()).collect()
        };
        let h = 1.0 / steps as f64;
        for s in 0..steps {
            let t = s as f64 * h;
            let (g0, gm, g1) = (sample(t), sample(t + 0.5 * h), sample(t + h));
            let k1 = rhs(&x, &g0);
            let y: Vec<_> = x.iter().zip(&k1).map(|(x, k)| x + k * (0.5 * h)).collect();
            let k2 = rhs(&y, &gm);
            let y: Vec<_> = x.iter().zip(&k2).map(|(x, k)| x + k * (0.5 * h)).collect();
            let k3 = rhs(&y, &gm);
            let y: Vec<_> = x.iter().zip(&k3).map(|(x, k)| x + k * h).collect();
            let k4 = rhs(&y, &g1);
            for i in 0..total {
                x[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
            }
        }
    }
    x
}

/// Signature of a straight line with increments `v` in a flat space:
/// `S(w) = ∏ v_{wᵢ} / |w|!`.
pub fn linear_signature(v: &[Complex64], order: usize) -> Signature {
    let n = v.len();
    let labels = (0..n).map(|i| format!("x{i}")).collect();
    let values = words::all_words(n, order)
        .map(|w| {
            let fact: f64 = (1..=w.len()).map(|k| k as f64).product();
            w.iter().map(|&a| v[a]).product::<Complex64>() / fact
        })
        .collect();
    Signature::from_values(labels, order, values).unwrap()
}

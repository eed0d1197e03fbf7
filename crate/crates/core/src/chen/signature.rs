use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::path::Path;
use super::quadrature::{collocation, NODES};
use super::words::{length_offset, shuffles, word_at, word_count, word_index};
use crate::error::{Error, Result};
use crate::formbank::Alphabet;

/// Default per-segment node budget of the adaptive quadrature.
pub const DEFAULT_NODE_BUDGET: usize = 1 << 14;

/// Relative accuracy floor below which halving stops paying off.
const TOL_FLOOR: f64 = 5e-14;

/// All iterated integrals of a path up to length `order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Signature {
    labels: Vec<String>,
    order: usize,
    values: Vec<Complex64>,
    /// Endpoints of the underlying path, when known.
    #[serde(default)]
    pub endpoints: Option<(Complex64, Complex64)>,
}

fn compose_values(n: usize, order: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len()];
    let pw: Vec<usize> = (0..=order).map(|r| n.pow(r as u32)).collect();
    let off: Vec<usize> = (0..=order).map(|r| length_offset(n, r)).collect();
    for r in 0..=order {
        for d in 0..pw[r] {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..=r {
                let split = pw[r - i];
                acc += a[off[i] + d / split] * b[off[r - i] + d % split];
            }
            out[off[r] + d] = acc;
        }
    }
    out
}

impl Signature {
    /// Signature of a constant path.
    pub fn identity(labels: Vec<String>, order: usize) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); word_count(labels.len(), order)];
        values[0] = Complex64::new(1.0, 0.0);
        Self { labels, order, values, endpoints: None }
    }

    pub fn from_values(labels: Vec<String>, order: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != word_count(labels.len(), order) {
            return Err(Error::InvalidArgument(format!(
                "expected {} signature values, got {}",
                word_count(labels.len(), order),
                values.len()
            )));
        }
        Ok(Self { labels, order, values, endpoints: None })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn alphabet_size(&self) -> usize {
        self.labels.len()
    }

    /// Value at a word; words longer than the order read as zero.
    pub fn get(&self, word: &[usize]) -> Complex64 {
        if word.len() > self.order {
            return Complex64::new(0.0, 0.0);
        }
        self.values[word_index(self.labels.len(), word)]
    }

    pub fn get_by_labels(&self, word: &[&str]) -> Option<Complex64> {
        let idx: Option<Vec<usize>> = word.iter().map(|l| self.labels.iter().position(|m| m == l)).collect();
        idx.map(|w| self.get(&w))
    }

    pub fn words(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = self.labels.len();
        (0..self.values.len()).map(move |i| word_at(n, i))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.labels != other.labels || self.order != other.order {
            return Err(Error::AlphabetMismatch(format!(
                "{:?}/{} vs {:?}/{}",
                self.labels, self.order, other.labels, other.order
            )));
        }
        Ok(())
    }

    /// Signature of the concatenated path: `self` first, then `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = compose_values(self.labels.len(), self.order, &self.values, &other.values);
        let endpoints = match (self.endpoints, other.endpoints) {
            (Some((a, _)), Some((_, b))) => Some((a, b)),
            _ => None,
        };
        Ok(Self { labels: self.labels.clone(), order: self.order, values, endpoints })
    }

    /// Signature of the reversed path: `(−1)^{|w|} S(reverse w)`.
    pub fn reversed(&self) -> Self {
        let n = self.labels.len();
        let values = (0..self.values.len())
            .map(|i| {
                let mut w = word_at(n, i);
                let sign = if w.len() % 2 == 0 { 1.0 } else { -1.0 };
                w.reverse();
                sign * self.values[word_index(n, &w)]
            })
            .collect();
        Self {
            labels: self.labels.clone(),
            order: self.order,
            values,
            endpoints: self.endpoints.map(|(a, b)| (b, a)),
        }
    }

    /// Drop all words longer than `order`.
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let len = word_count(self.labels.len(), order);
        Self {
            labels: self.labels.clone(),
            order,
            values: self.values[..len].to_vec(),
            endpoints: self.endpoints,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// `max |S(u)S(v) − Σ_{w ∈ u ш v} S(w)|` over nonempty `u`, `v` with `|u|+|v| ≤ order`.
    pub fn shuffle_defect(&self) -> f64 {
        let n = self.labels.len();
        let mut worst: f64 = 0.0;
        let total = self.values.len();
        for i in 1..total {
            let u = word_at(n, i);
            for j in i..total {
                let v = word_at(n, j);
                if u.len() + v.len() > self.order {
                    break;
                }
                let lhs = self.values[i] * self.values[j];
                let rhs: Complex64 = shuffles(&u, &v).iter().map(|w| self.get(w)).sum();
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }
}

/// Integrand samples of one panel: `g[a][j]` is letter `a` pulled back at node `j`.
fn sample_panel(
    alphabet: &Alphabet,
    a: Complex64,
    b: Complex64,
    t0: f64,
    t1: f64,
    letter_tol: f64,
) -> Result<Vec<[Complex64; NODES]>> {
    let rule = collocation();
    let h = t1 - t0;
    let dz = b - a;
    alphabet
        .letters()
        .iter()
        .map(|letter| {
            let mut g = [Complex64::new(0.0, 0.0); NODES];
            for (j, slot) in g.iter_mut().enumerate() {
                let z = a + dz * (t0 + h * rule.nodes[j]);
                *slot = letter.pullback(z, dz, letter_tol)?;
            }
            Ok(g)
        })
        .collect()
}

/// Signature of `z(t) = a + t(b−a)` for `t ∈ [t0, t1]`, by spectral collocation.
fn panel_signature(
    alphabet: &Alphabet,
    order: usize,
    a: Complex64,
    b: Complex64,
    t0: f64,
    t1: f64,
    letter_tol: f64,
) -> Result<Vec<Complex64>> {
    let rule = collocation();
    let n = alphabet.len();
    let h = t1 - t0;
    let g = sample_panel(alphabet, a, b, t0, t1, letter_tol)?;
    let mut values = vec![Complex64::new(0.0, 0.0); word_count(n, order)];
    values[0] = Complex64::new(1.0, 0.0);
    if order == 0 {
        return Ok(values);
    }
    // running values at the nodes, for words of the current length
    let mut current: Vec<[Complex64; NODES]> = vec![[Complex64::new(1.0, 0.0); NODES]];
    for r in 0..order {
        let mut next = Vec::with_capacity(if r + 1 < order { current.len() * n } else { 0 });
        let base = length_offset(n, r + 1);
        for (wi, nodes) in current.iter().enumerate() {
            for (li, ga) in g.iter().enumerate() {
                let mut prod = [Complex64::new(0.0, 0.0); NODES];
                for j in 0..NODES {
                    prod[j] = nodes[j] * ga[j];
                }
                let total: Complex64 = (0..NODES).map(|j| prod[j] * rule.weights[j]).sum();
                values[base + wi * n + li] = total * h;
                if r + 1 < order {
                    let mut child = [Complex64::new(0.0, 0.0); NODES];
                    for (i, c) in child.iter_mut().enumerate() {
                        let row = &rule.integ[i];
                        let mut acc = Complex64::new(0.0, 0.0);
                        for j in 0..NODES {
                            acc += prod[j] * row[j];
                        }
                        *c = acc * h;
                    }
                    next.push(child);
                }
            }
        }
        current = next;
    }
    Ok(values)
}

struct Adaptive<'a> {
    alphabet: &'a Alphabet,
    order: usize,
    a: Complex64,
    b: Complex64,
    letter_tol: f64,
    nodes_used: usize,
    budget: usize,
}

impl Adaptive<'_> {
    fn panel(&mut self, t0: f64, t1: f64) -> Result<Vec<Complex64>> {
        self.nodes_used += NODES;
        panel_signature(self.alphabet, self.order, self.a, self.b, t0, t1, self.letter_tol)
    }

    fn refine(&mut self, t0: f64, t1: f64, whole: Vec<Complex64>, tol: f64) -> Result<Vec<Complex64>> {
        let n = self.alphabet.len();
        let mid = 0.5 * (t0 + t1);
        let left = self.panel(t0, mid)?;
        let right = self.panel(mid, t1)?;
        let joined = compose_values(n, self.order, &left, &right);
        let err = joined
            .iter()
            .zip(&whole)
            .map(|(x, y)| (x - y).norm() / x.norm().max(1.0))
            .fold(0.0, f64::max);
        if err <= tol.max(TOL_FLOOR) {
            return Ok(joined);
        }
        if self.nodes_used + 4 * NODES > self.budget {
            return Err(Error::QuadratureNonConvergence { budget: self.budget, estimate: err });
        }
        let l = self.refine(t0, mid, left, 0.5 * tol)?;
        let r = self.refine(mid, t1, right, 0.5 * tol)?;
        Ok(compose_values(n, self.order, &l, &r))
    }
}

/// Options for the adaptive quadrature.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    pub tol: f64,
    pub node_budget: usize,
}

impl QuadratureOptions {
    pub fn new(tol: f64) -> Self {
        Self { tol, node_budget: DEFAULT_NODE_BUDGET }
    }

    fn letter_tol(&self) -> f64 {
        (self.tol * 1e-2).max(1e-16)
    }
}

/// Signature of the straight segment `a → b`.
pub fn segment_signature(alphabet: &Alphabet, a: Complex64, b: Complex64, order: usize, tol: f64) -> Result<Signature> {
    segment_signature_with(alphabet, a, b, order, QuadratureOptions::new(tol))
}

pub fn segment_signature_with(
    alphabet: &Alphabet,
    a: Complex64,
    b: Complex64,
    order: usize,
    opts: QuadratureOptions,
) -> Result<Signature> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut sig = Signature::identity(alphabet.labels(), order);
    sig.endpoints = Some((a, b));
    if a == b || order == 0 {
        return Ok(sig);
    }
    let mut run = Adaptive {
        alphabet,
        order,
        a,
        b,
        letter_tol: opts.letter_tol(),
        nodes_used: 0,
        budget: opts.node_budget,
    };
    let whole = run.panel(0.0, 1.0)?;
    sig.values = run.refine(0.0, 1.0, whole, opts.tol)?;
    Ok(sig)
}

/// Signature of a piecewise straight path, folding segment signatures in order.
pub fn path_signature(alphabet: &Alphabet, path: &Path, order: usize, tol: f64) -> Result<Signature> {
    let m = path.segment_count().max(1);
    let opts = QuadratureOptions::new(tol / m as f64);
    let pieces: Vec<Result<Signature>> = path
        .segments()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(a, b)| segment_signature_with(alphabet, a, b, order, opts))
        .collect();
    let mut acc = Signature::identity(alphabet.labels(), order);
    acc.endpoints = Some((path.start(), path.start()));
    for p in pieces {
        acc = acc.compose(&p?)?;
    }
    Ok(acc)
}

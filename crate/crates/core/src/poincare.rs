//! Holomorphic Poincaré and Eisenstein series of weight `k ≥ 4`, optionally
//! twisted by iterated integrals, truncated to a box of coset representatives.
//!
//! The summand for a representative `γ` at the cusp `𝔞 = σ(∞)` of width `h` is
//! `e(m·σ⁻¹γz / h) · j(σ⁻¹γ, z)^{-k}`, with the integral scaling matrix `σ`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chen::{path_signature, IteratedIntegral, LoopCache, Path, Signature};
use crate::error::{Error, Result};
use crate::groupring::j_power_element;
use crate::modgroup::{coset_reps, Cusp, GroupElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Classical,
    Eisenstein,
    P1,
    P2,
    P3,
}

impl SeriesKind {
    pub fn is_twisted(self) -> bool {
        matches!(self, SeriesKind::P1 | SeriesKind::P2 | SeriesKind::P3)
    }
}

impl FromStr for SeriesKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "classical" => Ok(SeriesKind::Classical),
            "eisenstein" => Ok(SeriesKind::Eisenstein),
            "p1" => Ok(SeriesKind::P1),
            "p2" => Ok(SeriesKind::P2),
            "p3" => Ok(SeriesKind::P3),
            _ => Err(Error::Parse(format!("unknown series kind `{s}`"))),
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Classical => "classical",
            SeriesKind::Eisenstein => "eisenstein",
            SeriesKind::P1 => "P1",
            SeriesKind::P2 => "P2",
            SeriesKind::P3 => "P3",
        })
    }
}

#[derive(Clone, Debug)]
pub struct PoincareSpec {
    pub kind: SeriesKind,
    pub k: i64,
    pub cusp: String,
    pub m: u32,
    pub twist: Option<IteratedIntegral>,
    pub c_bound: u32,
}

impl PoincareSpec {
    pub fn classical(k: i64, cusp: &str, m: u32, c_bound: u32) -> Self {
        Self { kind: SeriesKind::Classical, k, cusp: cusp.to_string(), m, twist: None, c_bound }
    }

    pub fn twisted(kind: SeriesKind, k: i64, cusp: &str, m: u32, twist: IteratedIntegral, c_bound: u32) -> Self {
        Self { kind, k, cusp: cusp.to_string(), m, twist: Some(twist), c_bound }
    }

    pub fn with_c_bound(&self, c_bound: u32) -> Self {
        Self { c_bound, ..self.clone() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PoincareValue {
    pub kind: SeriesKind,
    pub k: i64,
    pub m: u32,
    pub cusp: String,
    pub c_bound: u32,
    pub terms: usize,
    pub value: Complex64,
    /// Bound on the omitted classical terms at this point.
    pub tail_bound: f64,
}

/// `8 λ^{-k/2} C^{2-k}/(k-2)` with `λ` the smallest eigenvalue of the form
/// `|cz+d|²`: bounds `Σ |cz+d|^{-k}` over rows outside the box of size `C`.
pub fn tail_bound(z: Complex64, k: i64, c_bound: u32) -> f64 {
    if c_bound == 0 {
        return f64::INFINITY;
    }
    let (x, y) = (z.re, z.im);
    let a = x * x + y * y;
    let lambda = 0.5 * ((a + 1.0) - ((a - 1.0).powi(2) + 4.0 * x * x).sqrt());
    let kf = k as f64;
    8.0 * lambda.powf(-kf / 2.0) * (c_bound as f64).powf(2.0 - kf) / (kf - 2.0)
}

/// A truncated series with its representatives and loop data prepared.
#[derive(Debug)]
pub struct PoincareSeries {
    spec: PoincareSpec,
    cache: Arc<LoopCache>,
    cusp: Cusp,
    sigma_inv: GroupElement,
    reps: Vec<GroupElement>,
    /// Loop signatures of the representatives (twisted kinds only).
    loops: Vec<Arc<Signature>>,
}

impl PoincareSeries {
    pub fn new(spec: PoincareSpec, cache: Arc<LoopCache>) -> Result<Self> {
        if spec.k < 4 || spec.k % 2 != 0 {
            return Err(Error::UnsupportedWeight(spec.k));
        }
        let mut spec = spec;
        if spec.kind == SeriesKind::Eisenstein {
            spec.m = 0;
        }
        if spec.kind == SeriesKind::Classical && spec.m == 0 {
            spec.kind = SeriesKind::Eisenstein;
        }
        if spec.kind.is_twisted() {
            let twist = spec
                .twist
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument(format!("{} needs a twist", spec.kind)))?;
            if !twist.is_cuspidal() {
                return Err(Error::InvalidArgument("twists must use cusp letters only".into()));
            }
            if twist.labels() != cache.alphabet().labels() || twist.length() > cache.order() {
                return Err(Error::AlphabetMismatch("twist does not fit the loop cache".into()));
            }
        }
        let cusp = cache.preset().cusp(&spec.cusp)?.clone();
        let reps = coset_reps(cache.preset(), &cusp, spec.c_bound)?;
        let loops = if spec.kind.is_twisted() {
            cache.warm()?;
            reps.par_iter().map(|g| cache.loop_signature(g)).collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let sigma_inv = cusp.scaling.inverse();
        Ok(Self { spec, cache, cusp, sigma_inv, reps, loops })
    }

    pub fn spec(&self) -> &PoincareSpec {
        &self.spec
    }

    pub fn representatives(&self) -> &[GroupElement] {
        &self.reps
    }

    pub fn cache(&self) -> &Arc<LoopCache> {
        &self.cache
    }

    fn twist(&self) -> &IteratedIntegral {
        self.spec.twist.as_ref().expect("twisted kinds carry a twist")
    }

    /// `e(m·σ⁻¹γgz/h) j(σ⁻¹γg, z)^{-k}` for each representative `γ`.
    fn kernel(&self, g: &GroupElement, z: Complex64) -> Result<Vec<Complex64>> {
        let h = self.cusp.width as f64;
        let m = self.spec.m as f64;
        let k = self.spec.k as i32;
        self.reps
            .par_iter()
            .map(|gamma| {
                let t = (&self.sigma_inv * gamma).try_mul(g)?;
                let w = t.apply(z)?;
                let j = t.automorphy(z);
                let e = if m == 0.0 { Complex64::new(1.0, 0.0) } else { (Complex64::new(0.0, 2.0 * PI * m / h) * w).exp() };
                Ok(e / j.powi(k))
            })
            .collect()
    }

    /// Ordered sum, so results do not depend on thread scheduling.
    fn weighted_sum(kernel: &[Complex64], coeffs: impl Iterator<Item = Complex64>) -> Complex64 {
        kernel.iter().zip(coeffs).fold(Complex64::new(0.0, 0.0), |acc, (t, c)| acc + t * c)
    }

    fn to_point(&self, z: Complex64) -> Result<Signature> {
        let path = Path::new(vec![self.cache.basepoint(), z])?;
        path_signature(self.cache.alphabet(), &path, self.cache.order(), self.cache.tol())
    }

    /// `P(gz) j(g,z)^{-k}`; with `g = 1` this is `P(z)`.
    pub fn slash_value(&self, g: &GroupElement, z: Complex64) -> Result<Complex64> {
        let kernel = self.kernel(g, z)?;
        let one = Complex64::new(1.0, 0.0);
        Ok(match self.spec.kind {
            SeriesKind::Classical | SeriesKind::Eisenstein => Self::weighted_sum(&kernel, std::iter::repeat(one)),
            SeriesKind::P1 => {
                let b = self.cache.loop_signature(g)?.compose(&self.to_point(z)?)?;
                self.twist().evaluate(&b)? * Self::weighted_sum(&kernel, std::iter::repeat(one))
            }
            SeriesKind::P2 => {
                let coeffs = self.loops.iter().map(|l| self.twist().evaluate(l)).collect::<Result<Vec<_>>>()?;
                Self::weighted_sum(&kernel, coeffs.into_iter())
            }
            SeriesKind::P3 => {
                let b = self.cache.loop_signature(g)?.compose(&self.to_point(z)?)?;
                let b_inv = b.reversed();
                let coeffs = self
                    .loops
                    .par_iter()
                    .map(|l| self.twist().evaluate(&b_inv.compose(l)?.compose(&b)?))
                    .collect::<Result<Vec<_>>>()?;
                Self::weighted_sum(&kernel, coeffs.into_iter())
            }
        })
    }

    pub fn evaluate(&self, z: Complex64) -> Result<PoincareValue> {
        let value = self.slash_value(&GroupElement::identity(), z)?;
        Ok(self.wrap(value, z))
    }

    fn wrap(&self, value: Complex64, z: Complex64) -> PoincareValue {
        PoincareValue {
            kind: self.spec.kind,
            k: self.spec.k,
            m: self.spec.m,
            cusp: self.spec.cusp.clone(),
            c_bound: self.spec.c_bound,
            terms: self.reps.len(),
            value,
            tail_bound: tail_bound(z, self.spec.k, self.spec.c_bound),
        }
    }

    /// Untwisted series over the same representatives.
    pub fn classical_value(&self, g: &GroupElement, z: Complex64) -> Result<Complex64> {
        let kernel = self.kernel(g, z)?;
        Ok(Self::weighted_sum(&kernel, std::iter::repeat(Complex64::new(1.0, 0.0))))
    }

    /// `P²` over the same representatives with another twist.
    pub fn p2_value_with(&self, twist: &IteratedIntegral, g: &GroupElement, z: Complex64) -> Result<Complex64> {
        let loops: Vec<Arc<Signature>> = if self.loops.is_empty() {
            self.reps.iter().map(|r| self.cache.loop_signature(r)).collect::<Result<_>>()?
        } else {
            self.loops.clone()
        };
        let kernel = self.kernel(g, z)?;
        let coeffs = loops.iter().map(|l| twist.evaluate(l)).collect::<Result<Vec<_>>>()?;
        Ok(Self::weighted_sum(&kernel, coeffs.into_iter()))
    }

    /// `P³` rebuilt from `P²` of subwords:
    /// `⟨I, B⁻¹LB⟩ = Σ_w c_w Σ_{w=uvx} B⁻¹[u] L[v] B[x]` with `B = [z0 → z]`.
    pub fn p3_via_p2(&self, z: Complex64) -> Result<Complex64> {
        let twist = self.twist();
        let b = self.to_point(z)?;
        let b_inv = b.reversed();
        let empty = IteratedIntegral::zero(self.cache.alphabet());
        let mut total = Complex64::new(0.0, 0.0);
        let id = GroupElement::identity();
        for (w, c) in twist.terms() {
            for i in 0..=w.len() {
                for j in i..=w.len() {
                    let outer = b_inv.get(&w[..i]) * b.get(&w[j..]);
                    if outer == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let inner = empty.clone().with_term(&w[i..j], Complex64::new(1.0, 0.0));
                    total += c * outer * self.p2_value_with(&inner, &id, z)?;
                }
            }
        }
        Ok(total)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub beta: String,
    pub z: Complex64,
    pub c_bound: u32,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub tail_bound: f64,
}

/// `P(βz,I)j(β,z)^{-k} − P(z,I)` against its expansion
/// `(⟨I,β⁻¹⟩ − c₀)P(z) + Σ_{u≠∅} ⟨R_u − const, β⁻¹⟩ P(z,[u])`, for `P²`.
pub fn transformation_residual(series: &PoincareSeries, beta: &GroupElement, z: Complex64) -> Result<ResidualReport> {
    if series.spec.kind != SeriesKind::P2 {
        return Err(Error::InvalidArgument("transformation residual is defined for P2".into()));
    }
    let preset = series.cache.preset();
    if !preset.contains(beta) {
        return Err(Error::NotInGroup(beta.to_string(), preset.name.to_string()));
    }
    let beta = preset.with_word(beta)?;
    let id = GroupElement::identity();
    let lhs = series.slash_value(&beta, z)? - series.slash_value(&id, z)?;
    let twist = series.twist();
    let back = series.cache.loop_signature(&beta.inverse())?;
    let c0 = twist.constant_term();
    let mut rhs = (twist.evaluate(&back)? - c0) * series.classical_value(&id, z)?;
    for (u, right) in twist.deconcatenate() {
        if u.length() == 0 {
            continue;
        }
        let tail = right.sub(&IteratedIntegral::constant(series.cache.alphabet(), right.constant_term()))?;
        if tail.is_zero() {
            continue;
        }
        rhs += tail.evaluate(&back)? * series.p2_value_with(&u, &id, z)?;
    }
    Ok(ResidualReport {
        beta: beta.to_string(),
        z,
        c_bound: series.spec.c_bound,
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        tail_bound: residual_tail(&beta, z, series.spec.k, series.spec.c_bound)?,
    })
}

/// Classical tail at `z` plus the tail of the slashed sum, which is the
/// tail at `βz` scaled by `|j(β,z)|^{-k}`. Twist coefficients are not included.
fn residual_tail(beta: &GroupElement, z: Complex64, k: i64, c_bound: u32) -> Result<f64> {
    let bz = beta.apply(z)?;
    let j = beta.automorphy(z).norm().powi(-(k as i32));
    Ok(tail_bound(z, k, c_bound) + j * tail_bound(bz, k, c_bound))
}

#[derive(Clone, Debug, Serialize)]
pub struct HigherOrderEntry {
    pub tuple: Vec<String>,
    pub max_abs: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HigherOrderReport {
    pub kind: SeriesKind,
    pub order: usize,
    pub budget: f64,
    pub entries: Vec<HigherOrderEntry>,
    /// For `P³`: largest gap between direct evaluation and the `P²` expansion.
    pub p3_consistency: Option<f64>,
    pub passed: bool,
}

/// `max |(P|_k ∏(γᵢ−1))(z)|` over sample points for each tuple; tuples should
/// have length `order`.
pub fn higher_order_check(
    series: &PoincareSeries,
    order: usize,
    tuples: &[Vec<GroupElement>],
    points: &[Complex64],
    budget: f64,
) -> Result<HigherOrderReport> {
    let preset = series.cache.preset();
    let mut entries = Vec::new();
    for t in tuples {
        if t.len() != order {
            return Err(Error::InvalidArgument(format!("tuple of length {} for order {order}", t.len())));
        }
        let xi = j_power_element(t)?;
        let mut worst: f64 = 0.0;
        for &z in points {
            let mut acc = Complex64::new(0.0, 0.0);
            for (g, a) in xi.terms() {
                let g = preset.with_word(g)?;
                acc += a * series.slash_value(&g, z)?;
            }
            worst = worst.max(acc.norm());
        }
        entries.push(HigherOrderEntry { tuple: t.iter().map(|g| g.to_string()).collect(), max_abs: worst, passed: worst < budget });
    }
    let p3_consistency = if series.spec.kind == SeriesKind::P3 {
        let mut gap: f64 = 0.0;
        for &z in points {
            let direct = series.slash_value(&GroupElement::identity(), z)?;
            gap = gap.max((direct - series.p3_via_p2(z)?).norm());
        }
        Some(gap)
    } else {
        None
    };
    let passed = entries.iter().all(|e| e.passed) && p3_consistency.is_none_or(|g| g < budget);
    Ok(HigherOrderReport { kind: series.spec.kind, order, budget, entries, p3_consistency, passed })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub c_bound: u32,
    pub terms: usize,
    pub value: Complex64,
    pub diff_abs: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceProfile {
    pub kind: SeriesKind,
    pub k: i64,
    pub rows: Vec<ProfileRow>,
    /// Whether `|differences|` strictly decrease past the warmup bound;
    /// `None` when not asserted (k < 6 or too few rows).
    pub monotone: Option<bool>,
}

/// Partial sums at increasing truncation bounds.
pub fn convergence_profile(
    spec: &PoincareSpec,
    cache: Arc<LoopCache>,
    z: Complex64,
    c_bounds: &[u32],
    warmup: u32,
) -> Result<ConvergenceProfile> {
    if c_bounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("c_bounds must increase".into()));
    }
    let mut rows: Vec<ProfileRow> = Vec::new();
    for &c in c_bounds {
        let series = PoincareSeries::new(spec.with_c_bound(c), cache.clone())?;
        let v = series.evaluate(z)?;
        let diff_abs = rows.last().map(|r| (v.value - r.value).norm());
        rows.push(ProfileRow { c_bound: c, terms: v.terms, value: v.value, diff_abs });
    }
    let diffs: Vec<f64> = rows.iter().filter(|r| r.c_bound > warmup).filter_map(|r| r.diff_abs).collect();
    let monotone = if spec.k >= 6 && diffs.len() >= 2 {
        Some(diffs.windows(2).all(|w| w[1] < w[0]))
    } else {
        None
    };
    Ok(ConvergenceProfile { kind: spec.kind, k: spec.k, rows, monotone })
}

impl ConvergenceProfile {
    /// CSV with columns `c_bound,value_re,value_im,diff_abs`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("c_bound,value_re,value_im,diff_abs\n");
        for r in &self.rows {
            let d = r.diff_abs.map(|d| format!("{d:.17e}")).unwrap_or_default();
            out.push_str(&format!("{},{:.17e},{:.17e},{}\n", r.c_bound, r.value.re, r.value.im, d));
        }
        out
    }
}

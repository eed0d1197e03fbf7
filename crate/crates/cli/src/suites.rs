use std::fmt;
use std::sync::Arc;

use anyhow::{bail, Result};
use geomod_core::chen::words::all_words;
use geomod_core::chen::{path_signature, reduce_exact_letter, segment_signature, IteratedIntegral, Path, Signature};
use geomod_core::formbank::{builtin_letters, Alphabet, Chirality, ModularLambda, Potential};
use geomod_core::groupring::j_power_element;
use geomod_core::hodge::{primitive_space_table, SeriesLabel, TwistBucket};
use geomod_core::hoforms::{random_element, random_tuples, sample_points, HigherOrderForm};
use geomod_core::modgroup::{GroupElement, GroupPreset};
use geomod_core::poincare::{convergence_profile, transformation_residual, PoincareSeries, PoincareSpec, SeriesKind};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::session::Session;

pub const SUITES: [&str; 5] = ["chen", "order", "cuspidal", "poincare", "filtration"];

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Below,
    Above,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: Bound,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn below(name: &str, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self { name: name.into(), measured, bound: Bound::Below, threshold, passed: measured < threshold, detail: detail.into() }
    }

    fn above(name: &str, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self { name: name.into(), measured, bound: Bound::Above, threshold, passed: measured > threshold, detail: detail.into() }
    }
}

/// Named output file produced by a suite (CSV profiles).
#[derive(Clone, Debug, Serialize)]
pub struct Artifact {
    pub name: String,
    #[serde(skip)]
    pub body: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub group: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub artifacts: Vec<Artifact>,
    pub passed: bool,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} on {} (seed {}): {}", self.suite, self.group, self.seed, verdict(self.passed))?;
        writeln!(f, "  {:<34} {:>11} {:>13}  result  detail", "check", "measured", "threshold")?;
        for c in &self.checks {
            let op = if c.bound == Bound::Below { "<" } else { ">" };
            writeln!(
                f,
                "  {:<34} {:>11.3e} {:>2} {:>10.1e}  {:<6}  {}",
                c.name,
                c.measured,
                op,
                c.threshold,
                verdict(c.passed),
                c.detail
            )?;
        }
        Ok(())
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn run_suite(name: &str, session: &Session) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(session.config.seed);
    let (checks, artifacts) = match name {
        "chen" => (chen(session, &mut rng)?, vec![]),
        "order" => (order(session, &mut rng)?, vec![]),
        "cuspidal" => (cuspidal(session, &mut rng)?, vec![]),
        "poincare" => poincare(session)?,
        "filtration" => (filtration(&session.preset)?, vec![]),
        other => bail!("unknown suite `{other}`; choose one of {} or all", SUITES.join(", ")),
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite: name.to_string(),
        group: session.preset.name.to_string(),
        seed: session.config.seed,
        checks,
        artifacts,
        passed,
    })
}

fn random_path(rng: &mut ChaCha8Rng, segments: usize) -> Result<Path> {
    let pts = sample_points(rng, segments + 1, (-0.5, 0.5), (0.15, 1.0));
    Ok(Path::new(pts)?)
}

fn holomorphic_letters(a: &Alphabet) -> Vec<usize> {
    (0..a.len()).filter(|&i| a.get(i).kind().chirality() == Chirality::Holomorphic).collect()
}

fn chen(s: &Session, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let a = &s.alphabet;
    let tol = s.config.tol;
    let mut out = Vec::new();

    let paths = (0..20).map(|_| random_path(rng, 3)).collect::<Result<Vec<_>>>()?;
    let sigs = paths.par_iter().map(|p| path_signature(a, p, 3, tol)).collect::<Result<Vec<_>, _>>()?;
    let defect = sigs.iter().map(|x| x.shuffle_defect()).fold(0.0, f64::max);
    out.push(Check::below("shuffle identity", defect, 1e-7, "20 paths, order 3"));

    let paths = (0..5).map(|_| random_path(rng, 4)).collect::<Result<Vec<_>>>()?;
    let mut gap = 0.0f64;
    for p in &paths {
        let mut fold = Signature::identity(a.labels(), 3);
        for (x, y) in p.segments() {
            fold = fold.compose(&segment_signature(a, x, y, 3, tol)?)?;
        }
        gap = gap.max(fold.max_abs_diff(&path_signature(a, &p.refined(), 3, tol)?)?);
    }
    out.push(Check::below("chen composition", gap, 1e-8, "fold of 4 segments vs refined path, 5 paths"));

    let holo = holomorphic_letters(a);
    let (mut pure, mut mixed) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let ends = sample_points(rng, 2, (-0.5, 0.5), (0.2, 1.0));
        let mids = sample_points(rng, 3, (-1.0, 1.0), (0.1, 1.5));
        let s1 = path_signature(a, &Path::new(vec![ends[0], mids[0], ends[1]])?, 3, tol)?;
        let s2 = path_signature(a, &Path::new(vec![ends[0], mids[1], mids[2], ends[1]])?, 3, tol)?;
        for w in s1.words() {
            let d = (s1.get(&w) - s2.get(&w)).norm();
            let h = w.iter().filter(|x| holo.contains(x)).count();
            if h == w.len() {
                pure = pure.max(d);
            } else if h > 0 {
                mixed = mixed.max(d);
            }
        }
    }
    out.push(Check::below("homotopy: holomorphic words", pure, 1e-6, "10 homotopic pairs, length <= 3"));
    if holo.len() < a.len() {
        out.push(Check::above("homotopy: mixed words differ", mixed, 1e-3, "Chen's condition fails for mixed words"));
    }

    let cache = s.loops(3)?;
    let z0 = s.basepoint();
    let (mut below, mut rel) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let n = rng.gen_range(1..=3);
        let tuple: Vec<GroupElement> = (0..n).map(|_| loop_above(&s.preset, z0, rng, 0.03)).collect::<Result<_>>()?;
        let xi = j_power_element(&tuple)?;
        let periods = tuple
            .iter()
            .map(|g| path_signature(a, &Path::segment(z0, g.apply(z0)?)?, 1, tol))
            .collect::<Result<Vec<_>, _>>()?;
        for len in 0..=n {
            for w in all_words(a.len(), len).filter(|w| w.len() == len) {
                let v = cache.pair(&IteratedIntegral::word(a, &w), &xi)?;
                if len < n {
                    below = below.max(v.norm());
                } else {
                    let want: Complex64 = w.iter().zip(&periods).map(|(&l, p)| p.get(&[l])).product();
                    rel = rel.max((v - want).norm() / want.norm().max(1.0));
                }
            }
        }
    }
    out.push(Check::below("pairing: shorter words vanish", below, 1e-7, "10 tuples of length 1..3"));
    out.push(Check::below("pairing: period products", rel, 1e-6, "relative to max(|product|, 1)"));

    // the exact-letter identities need the Legendre λ, which lives on Γ(2)
    let g2 = GroupPreset::gamma2();
    let a2 = Alphabet::from_letters(builtin_letters(&g2));
    let lam: Arc<dyn Potential> = Arc::new(ModularLambda);
    let path = Path::new(vec![g2.basepoint, Complex64::new(0.6, 0.7), Complex64::new(1.2, 1.1)])?;
    let mut worst = 0.0f64;
    for (w, pos) in [(vec![0, 1], 0), (vec![0, 1], 1), (vec![0, 1], 2)] {
        worst = worst.max(reduce_exact_letter(&a2, &w, pos, lam.clone(), &path, 1e-12)?.residual);
    }
    out.push(Check::below("exact letter identities", worst, 1e-8, "dλ at first, middle and last position on gamma2"));
    Ok(out)
}

fn loop_above(p: &GroupPreset, z0: Complex64, rng: &mut ChaCha8Rng, floor: f64) -> Result<GroupElement> {
    for _ in 0..1000 {
        let g = random_element(p, rng, 3)?;
        if g.apply(z0)?.im > floor {
            return Ok(g);
        }
    }
    bail!("no short loop stays above Im = {floor}")
}

/// Pure holomorphic functionals of lengths 1, 2 and 3.
fn holomorphic_functionals(a: &Alphabet) -> Vec<(usize, IteratedIntegral)> {
    let h = holomorphic_letters(a);
    let (x, y) = (h[0], *h.last().expect("every preset has a holomorphic letter"));
    vec![
        (1, IteratedIntegral::word(a, &[x])),
        (2, IteratedIntegral::word(a, &[x, y]).with_term(&[y], Complex64::new(0.5, 0.0))),
        (3, IteratedIntegral::word(a, &[x, y, x]).with_term(&[y, y, y], Complex64::new(0.0, 1.0))),
    ]
}

fn order_check(name: &str, f: &HigherOrderForm, s: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let preset = f.preset().clone();
    let pts = sample_points(rng, 5, (-0.4, 0.4), (0.3, 1.0));
    let cons = random_tuples(&preset, rng, s, 4, 2)?;
    let ann = random_tuples(&preset, rng, s + 1, 4, 2)?;
    let rep = f.verify_order(&cons, &ann, &pts, 1e-6)?;
    let spread = rep.constancy.iter().map(|c| c.spread).fold(0.0, f64::max);
    let dev = rep.constancy.iter().map(|c| c.deviation / c.predicted.norm().max(1.0)).fold(0.0, f64::max);
    let killed = rep.annihilation.iter().map(|c| c.max_abs).fold(0.0, f64::max);
    Ok(vec![
        Check::below(&format!("{name}: J^{s} slash constant"), spread, 1e-6, "spread over 5 points"),
        Check::below(&format!("{name}: period product"), dev, 1e-6, "relative to max(|product|, 1)"),
        Check::below(&format!("{name}: J^{} annihilates", s + 1), killed, 1e-6, "4 tuples"),
    ])
}

fn order(s: &Session, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let cache = s.loops(3)?;
    let mut out = Vec::new();
    for (n, i) in holomorphic_functionals(&s.alphabet) {
        let f = HigherOrderForm::new(i, cache.clone())?;
        out.extend(order_check(&format!("s={n}"), &f, n, rng)?);
    }
    // two order-2 forms multiply to an order-3 form
    let h = holomorphic_letters(&s.alphabet);
    let g = HigherOrderForm::new(IteratedIntegral::word(&s.alphabet, &[h[0]]), cache.clone())?;
    let e = IteratedIntegral::word(&s.alphabet, &[*h.last().expect("nonempty")]).with_term(&[], Complex64::new(1.0, 0.0));
    let prod = g.product(&HigherOrderForm::new(e, cache)?)?;
    out.extend(order_check("product", &prod, prod.claimed_order() - 1, rng)?);
    Ok(out)
}

fn cuspidal(s: &Session, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let a = &s.alphabet;
    let cache = s.loops(3)?;
    let pts = sample_points(rng, 10, (-0.5, 0.5), (0.3, 1.0));
    let cusp: Vec<usize> = (0..a.len()).filter(|&i| a.get(i).kind().is_cuspidal()).collect();
    let mut out = Vec::new();
    if let Some(&f) = cusp.first() {
        let bar = *cusp.last().expect("nonempty");
        let fs = [
            IteratedIntegral::word(a, &[f]),
            IteratedIntegral::word(a, &[f, f]).with_term(&[f], Complex64::new(0.0, 1.0)),
            IteratedIntegral::word(a, &[bar, bar, bar]),
        ];
        let mut worst = 0.0f64;
        for i in fs {
            let rep = HigherOrderForm::new(i, cache.clone())?.verify_cuspidal(&pts, 1e-7)?;
            worst = rep.cusps.iter().map(|c| c.max_residual).fold(worst, f64::max);
        }
        out.push(Check::below("cusp letters fixed by stabilizers", worst, 1e-7, "3 functionals, 10 points, every cusp"));
    }
    if let Some(e) = (0..a.len()).find(|&i| !a.get(i).kind().is_cuspidal()) {
        let rep = HigherOrderForm::new(IteratedIntegral::word(a, &[e]), cache)?.verify_cuspidal(&pts, 1e-7)?;
        let moved = rep.cusps.iter().map(|c| c.max_residual).fold(0.0, f64::max);
        out.push(Check::above("eisenstein letter is not cuspidal", moved, 1e-3, a.get(e).label().to_string()));
    }
    Ok(out)
}

fn poincare(s: &Session) -> Result<(Vec<Check>, Vec<Artifact>)> {
    let a = &s.alphabet;
    let cache = s.loops(1)?;
    let z = Complex64::new(0.1, 0.8);
    let big = s.config.c_bound;
    let mut out = Vec::new();
    let cusp_letter = (0..a.len()).find(|&i| a.get(i).kind().is_cuspidal() && a.get(i).kind().chirality() == Chirality::Holomorphic);
    let twist = cusp_letter.map(|i| IteratedIntegral::word(a, &[i]));
    if let Some(w) = &twist {
        let beta = s.preset.generators()[0].clone();
        let at = |cb| -> Result<f64> {
            let ser = PoincareSeries::new(PoincareSpec::twisted(SeriesKind::P2, 6, "inf", 1, w.clone(), cb), cache.clone())?;
            Ok(transformation_residual(&ser, &beta, z)?.residual)
        };
        let (r8, rb) = (at(8)?, at(big)?);
        out.push(Check::below(&format!("transformation residual C={big}"), rb, 1e-3, "k=6, m=1, cusp inf, beta=g1"));
        out.push(Check::above("residual shrink factor", r8 / rb, 4.0, format!("C=8 {r8:.2e} vs C={big}")));
    }
    let mut artifacts = Vec::new();
    for k in [6i64, 8] {
        let mut specs = vec![PoincareSpec::classical(k, "0", 1, 4)];
        if let Some(w) = &twist {
            specs.push(PoincareSpec::twisted(SeriesKind::P2, k, "0", 1, w.clone(), 4));
        }
        for spec in specs {
            let kind = spec.kind;
            let prof = convergence_profile(&spec, cache.clone(), z, &s.config.c_bounds, 4)?;
            let diffs: Vec<String> =
                prof.rows.iter().filter_map(|r| r.diff_abs).map(|d| format!("{d:.1e}")).collect();
            let ok = prof.monotone.unwrap_or(false);
            out.push(Check {
                name: format!("{kind} k={k} differences decrease"),
                measured: if ok { 1.0 } else { 0.0 },
                bound: Bound::Above,
                threshold: 0.5,
                passed: ok,
                detail: format!("cusp 0: {}", diffs.join(" ")),
            });
            artifacts.push(Artifact { name: format!("profile-{kind}-k{k}-cusp0.csv"), body: prof.to_csv() });
        }
    }
    Ok((out, artifacts))
}

type Golden = Vec<Vec<(SeriesLabel, TwistBucket)>>;

/// The weight-4, length-2 strata written out by hand.
fn golden_k4_s2() -> (Golden, Golden) {
    use SeriesLabel::{PBar, E, P};
    use TwistBucket::{Hodge, Length};
    let full = Length(2);
    let w = vec![
        vec![],
        vec![],
        vec![],
        vec![(P, Length(0)), (PBar, Length(0))],
        vec![(E, Length(0)), (P, Length(1)), (PBar, Length(1))],
        vec![(P, full), (PBar, full), (E, Length(1))],
        vec![(P, full), (PBar, full), (E, full)],
    ];
    let f = vec![
        vec![(P, full), (PBar, full), (E, full)],
        vec![(PBar, Hodge(1)), (P, full), (E, full)],
        vec![(PBar, Hodge(2)), (P, full), (E, full)],
        vec![(P, full), (E, Hodge(1))],
        vec![(P, Hodge(1)), (E, Hodge(2))],
        vec![(P, Hodge(2))],
        vec![],
    ];
    (w, f)
}

fn filtration(preset: &GroupPreset) -> Result<Vec<Check>> {
    let t = primitive_space_table(4, 2, preset)?;
    let sorted = |mut v: Vec<(SeriesLabel, TwistBucket)>| {
        v.sort();
        v
    };
    let (w, f) = golden_k4_s2();
    let mut mismatches = 0;
    for (l, want) in w.into_iter().enumerate() {
        let got = sorted(t.weight_items(l as u32).iter().map(|i| (i.series, i.twist)).collect());
        mismatches += usize::from(got != sorted(want));
    }
    for (p, want) in f.into_iter().enumerate() {
        let got = sorted(t.hodge_items(p as u32).iter().map(|i| (i.series, i.twist)).collect());
        mismatches += usize::from(got != sorted(want));
    }
    let mut broken = 0;
    for k in [4, 6, 8] {
        for s in 0..=4 {
            broken += usize::from(primitive_space_table(k, s, preset)?.check_nesting().is_err());
        }
    }
    Ok(vec![
        Check::below("golden k=4 s=2 strata", mismatches as f64, 0.5, "mismatching strata"),
        Check::below("nesting k<=8 s<=4", broken as f64, 0.5, "tables with broken nesting"),
    ])
}

//! Hodge and weight filtration bookkeeping on words, functionals and the
//! spanning sets of primitive Poincaré/Eisenstein series.
//!
//! Everything here is symbolic: a letter contributes its bidegree `(p, l)`, a
//! word of length `r` gets `(Σp, r + Σl, r)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::chen::IteratedIntegral;
use crate::error::{Error, Result};
use crate::formbank::{FormLetter, LetterKind};
use crate::modgroup::GroupPreset;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiltrationDegree {
    pub hodge_p: u32,
    pub weight_l: u32,
    pub length_r: u32,
}

impl FiltrationDegree {
    /// Degree of a word given its letters' `(p, l)` pairs.
    pub fn from_bidegrees(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        pairs.into_iter().fold(Self::default(), |d, (p, l)| Self {
            hodge_p: d.hodge_p + p,
            weight_l: d.weight_l + 1 + l,
            length_r: d.length_r + 1,
        })
    }
}

impl fmt::Display for FiltrationDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, l={}, r={})", self.hodge_p, self.weight_l, self.length_r)
    }
}

pub fn word_degree(word: &[&FormLetter]) -> FiltrationDegree {
    FiltrationDegree::from_bidegrees(word.iter().map(|w| (w.hodge_p(), w.log_weight_l())))
}

fn kind_bidegree(kind: LetterKind, label: &str) -> Result<(u32, u32)> {
    kind.bidegree()
        .ok_or_else(|| Error::InvalidArgument(format!("letter `{label}` has no filtration bidegree")))
}

/// Smallest `F^p`, `W_l` and length containing `I`: `p` is the minimum over
/// words with nonzero coefficient, `l` and `r` the maxima. The zero functional
/// gets `(0,0,0)`.
pub fn functional_degree(i: &IteratedIntegral) -> Result<FiltrationDegree> {
    let bideg = i
        .letters()
        .iter()
        .map(|l| kind_bidegree(l.kind, &l.label))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Option<FiltrationDegree> = None;
    for (w, c) in i.terms() {
        if *c == num_complex::Complex64::new(0.0, 0.0) {
            continue;
        }
        let d = FiltrationDegree::from_bidegrees(w.iter().map(|&j| bideg[j]));
        out = Some(match out {
            None => d,
            Some(o) => FiltrationDegree {
                hodge_p: o.hodge_p.min(d.hodge_p),
                weight_l: o.weight_l.max(d.weight_l),
                length_r: o.length_r.max(d.length_r),
            },
        });
    }
    Ok(out.unwrap_or_default())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SeriesLabel {
    /// Holomorphic-type Poincaré series `P_{m,a}`, `m > 0`.
    P,
    /// Its complex conjugate.
    PBar,
    /// Eisenstein series `E_a = P_{0,a}`.
    E,
}

impl SeriesLabel {
    pub const ALL: [SeriesLabel; 3] = [SeriesLabel::P, SeriesLabel::PBar, SeriesLabel::E];

    fn symbol(self) -> &'static str {
        match self {
            SeriesLabel::P => "P_{m,a}",
            SeriesLabel::PBar => "Pbar_{m,a}",
            SeriesLabel::E => "E_a",
        }
    }
}

/// Which subspace of `H⁰(B_s)` the twist ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "index")]
pub enum TwistBucket {
    /// `W_j = H⁰(B_j)`: twists of length at most `j`.
    Length(u32),
    /// `F^q H⁰(B_s)` with `q ≥ 1`: every word has at least `q` holomorphic letters.
    Hodge(u32),
}

impl TwistBucket {
    /// The graded pieces `(length r, holomorphic count d)` the bucket spans.
    fn atoms(self, s: u32) -> impl Iterator<Item = (u32, u32)> {
        let (rmax, dmin) = match self {
            TwistBucket::Length(j) => (j, 0),
            TwistBucket::Hodge(q) => (s, q),
        };
        (0..=rmax).flat_map(move |r| (dmin..=r).map(move |d| (r, d)))
    }

    fn render(self, s: u32) -> String {
        match self {
            TwistBucket::Length(j) => format!("H0(B_{j})"),
            TwistBucket::Hodge(q) => format!("F^{q} H0(B_{s})"),
        }
    }
}

/// `F^q H⁰(B_s)` for a possibly non-positive `q`, `None` when it is zero.
fn hodge_bucket(q: i64, s: u32) -> Option<TwistBucket> {
    if q <= 0 {
        Some(TwistBucket::Length(s))
    } else if q as u32 <= s {
        Some(TwistBucket::Hodge(q as u32))
    } else {
        None
    }
}

/// `W_j H⁰(B_s)`, `None` when `j < 0`.
fn weight_bucket(j: i64, s: u32) -> Option<TwistBucket> {
    (j >= 0).then(|| TwistBucket::Length((j as u32).min(s)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumItem {
    pub series: SeriesLabel,
    pub twist: TwistBucket,
    pub text: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Stratum {
    pub index: u32,
    pub items: Vec<StratumItem>,
    /// Number of `(series, cusp, length, holomorphic count)` cells spanned.
    pub cells: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimitiveTable {
    pub k: u32,
    pub s: u32,
    pub group: String,
    pub cusps: Vec<String>,
    pub weight: Vec<Stratum>,
    pub hodge: Vec<Stratum>,
}

/// A graded cell of the primitive space: series, cusp, twist length and
/// holomorphic letter count of the twist.
pub type Cell = (SeriesLabel, String, u32, u32);

impl PrimitiveTable {
    pub fn weight_items(&self, l: u32) -> &[StratumItem] {
        self.weight.get(l as usize).map_or(&[][..], |st| &st.items)
    }

    pub fn hodge_items(&self, p: u32) -> &[StratumItem] {
        self.hodge.get(p as usize).map_or(&[][..], |st| &st.items)
    }

    /// Cells spanned by a list of items, over every cusp.
    pub fn cells(&self, items: &[StratumItem]) -> BTreeSet<Cell> {
        let mut out = BTreeSet::new();
        for it in items {
            for cusp in &self.cusps {
                for (r, d) in it.twist.atoms(self.s) {
                    out.insert((it.series, cusp.clone(), r, d));
                }
            }
        }
        out
    }

    /// `W_l ⊆ W_{l+1}` and `F^{p+1} ⊆ F^p` as cell sets, the top weight
    /// stratum and `F⁰` equal to everything, and the last Hodge stratum empty.
    pub fn check_nesting(&self) -> std::result::Result<(), String> {
        let chain = |v: &[Stratum], up: bool, name: &str| -> std::result::Result<(), String> {
            for w in v.windows(2) {
                let (a, b) = (self.cells(&w[0].items), self.cells(&w[1].items));
                let ok = if up { a.is_subset(&b) } else { b.is_subset(&a) };
                if !ok {
                    return Err(format!("{name}_{} and {name}_{} are not nested", w[0].index, w[1].index));
                }
            }
            Ok(())
        };
        chain(&self.weight, true, "W")?;
        chain(&self.hodge, false, "F")?;
        let full = self.cells(&self.hodge[0].items);
        if self.cells(&self.weight.last().expect("nonempty").items) != full {
            return Err("top weight stratum differs from F^0".into());
        }
        if !self.hodge.last().expect("nonempty").items.is_empty() {
            return Err("Hodge filtration does not terminate".into());
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "primitive forms: weight k={}, twist length s={}, group {}, cusps a in {{{}}}\n",
            self.k,
            self.s,
            self.group,
            self.cusps.join(", ")
        );
        let render = |name: &str, st: &Stratum| {
            let body = if st.items.is_empty() {
                "0".to_string()
            } else {
                st.items.iter().map(|i| i.text.clone()).collect::<Vec<_>>().join("; ")
            };
            format!("{name}_{} = {body}\n", st.index)
        };
        out.push_str("weight filtration\n");
        for st in &self.weight {
            out.push_str(&render("W", st));
        }
        out.push_str("hodge filtration\n");
        for st in &self.hodge {
            out.push_str(&render("F^", st).replacen("F^_", "F^", 1));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

fn item(series: SeriesLabel, twist: TwistBucket, s: u32) -> StratumItem {
    let text = match twist {
        TwistBucket::Length(0) if series == SeriesLabel::E => "E_a(z)".to_string(),
        TwistBucket::Length(0) => format!("{}(z)", series.symbol()),
        t => format!("{}(z,I) I in {}", series.symbol(), t.render(s)),
    };
    StratumItem { series, twist, text }
}

/// Weight and Hodge strata of the primitive weight-`k` forms built from
/// twists in `H⁰(B_s)`:
/// * `W_l`: `P`, `Pbar` twisted by `W_{l-(k-1)}`, `E` by `W_{l-k}`;
/// * `F^p`: `P` twisted by `F^{p-(k-1)}`, `Pbar` by `F^p`, `E` by `F^{p-k/2}`.
///
/// Strata run up to index `s + k`, where the weight filtration is full and
/// the Hodge filtration has vanished.
pub fn primitive_space_table(k: u32, s: u32, preset: &GroupPreset) -> Result<PrimitiveTable> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::UnsupportedWeight(k as i64));
    }
    let (ki, si) = (k as i64, s);
    let top = s + k;
    let strata = |bucket: &dyn Fn(SeriesLabel, i64) -> Option<TwistBucket>| -> Vec<Stratum> {
        (0..=top)
            .map(|idx| {
                let items: Vec<StratumItem> = SeriesLabel::ALL
                    .iter()
                    .filter_map(|&ser| bucket(ser, idx as i64).map(|b| item(ser, b, si)))
                    .collect();
                Stratum { index: idx, items, cells: 0 }
            })
            .collect()
    };
    let weight = strata(&|ser, l| match ser {
        SeriesLabel::P | SeriesLabel::PBar => weight_bucket(l - (ki - 1), si),
        SeriesLabel::E => weight_bucket(l - ki, si),
    });
    let hodge = strata(&|ser, p| match ser {
        SeriesLabel::P => hodge_bucket(p - (ki - 1), si),
        SeriesLabel::PBar => hodge_bucket(p, si),
        SeriesLabel::E => hodge_bucket(p - ki / 2, si),
    });
    let mut table = PrimitiveTable {
        k,
        s,
        group: preset.name.to_string(),
        cusps: preset.cusps().iter().map(|c| c.label.clone()).collect(),
        weight,
        hodge,
    };
    for i in 0..table.weight.len() {
        table.weight[i].cells = table.cells(&table.weight[i].items).len();
    }
    for i in 0..table.hodge.len() {
        table.hodge[i].cells = table.cells(&table.hodge[i].items).len();
    }
    Ok(table)
}

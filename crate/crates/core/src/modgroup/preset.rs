use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::element::GroupElement;
use super::schreier::{evaluate_word, Congruence, SchreierSystem};
use crate::error::{Error, Result};

pub const DEFAULT_WORD_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PresetName {
    #[serde(rename = "gamma2")]
    Gamma2,
    #[serde(rename = "gamma0_11")]
    Gamma0_11,
}

impl FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gamma2" | "gamma(2)" => Ok(PresetName::Gamma2),
            "gamma0_11" | "gamma0(11)" => Ok(PresetName::Gamma0_11),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresetName::Gamma2 => "gamma2",
            PresetName::Gamma0_11 => "gamma0_11",
        })
    }
}

/// A cusp `σ(∞)` with its scaling matrix `σ` and width `h`, so that the
/// stabilizer is generated by `σ T^h σ⁻¹`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cusp {
    pub label: String,
    /// `Some((p, q))` for the rational `p/q`, `None` for ∞.
    pub representative: Option<(i128, i128)>,
    pub scaling: GroupElement,
    pub width: i128,
}

impl Cusp {
    fn new(label: &str, scaling: GroupElement, group: Congruence) -> Self {
        let [a, _, c, _] = scaling.entries();
        let representative = if c == 0 { None } else { Some((a, c)) };
        let width = (1..=group.level())
            .find(|&h| group.contains(&conjugate_translation(&scaling, h)))
            .expect("T^level is always in a congruence subgroup of that level");
        Self { label: label.to_string(), representative, scaling, width }
    }

    /// Generator `σ T^h σ⁻¹` of the stabilizer.
    pub fn stabilizer_generator(&self) -> GroupElement {
        conjugate_translation(&self.scaling, self.width)
    }

    /// `Im(σ⁻¹ z)`, the height of `z` measured at this cusp.
    pub fn height(&self, z: Complex64) -> Result<f64> {
        Ok(self.scaling.inverse().apply(z)?.im)
    }
}

fn conjugate_translation(sigma: &GroupElement, h: i128) -> GroupElement {
    &(sigma * &GroupElement::translation(h)) * &sigma.inverse()
}

/// A free, elliptic-free congruence subgroup with generators, cusps and
/// a default basepoint for loops.
#[derive(Clone, Debug)]
pub struct GroupPreset {
    pub name: PresetName,
    pub congruence: Congruence,
    generators: Vec<GroupElement>,
    cusps: Vec<Cusp>,
    pub genus: usize,
    pub basepoint: Complex64,
    pub word_cap: usize,
    schreier: SchreierSystem,
}

impl GroupPreset {
    pub fn by_name(name: PresetName) -> Self {
        match name {
            PresetName::Gamma2 => Self::gamma2(),
            PresetName::Gamma0_11 => Self::gamma0_11(),
        }
    }

    /// Γ(2), free on `[[1,2],[0,1]]` and `[[1,0],[2,1]]`; cusps ∞, 0, 1.
    pub fn gamma2() -> Self {
        let congruence = Congruence::Gamma2;
        let generators = vec![
            GroupElement::from_entries(1, 2, 0, 1),
            GroupElement::from_entries(1, 0, 2, 1),
        ];
        let cusps = vec![
            Cusp::new("inf", GroupElement::from_entries(1, 0, 0, 1), congruence),
            Cusp::new("0", GroupElement::inversion(), congruence),
            Cusp::new("1", GroupElement::from_entries(1, -1, 1, 0), congruence),
        ];
        Self::assemble(PresetName::Gamma2, congruence, generators, cusps, 0, Complex64::new(0.0, 1.0))
    }

    /// Γ0(11), free of rank 3. The basis is the Reidemeister–Schreier
    /// output of [`SchreierSystem::build`] (a test re-derives it).
    ///
    /// The basepoint sits where the generator loops stay highest above the
    /// real axis: `Im(g z0) ≥ 0.0787` for every generator.
    pub fn gamma0_11() -> Self {
        let congruence = Congruence::Gamma0Prime(11);
        let generators = vec![
            GroupElement::from_entries(-5, -1, 11, 2),
            GroupElement::from_entries(1, -1, 0, 1),
            GroupElement::from_entries(-7, -2, 11, 3),
        ];
        let cusps = vec![
            Cusp::new("inf", GroupElement::from_entries(1, 0, 0, 1), congruence),
            Cusp::new("0", GroupElement::inversion(), congruence),
        ];
        let y0 = 0.75f64.sqrt() / 11.0;
        Self::assemble(PresetName::Gamma0_11, congruence, generators, cusps, 1, Complex64::new(-5.0 / 22.0, y0))
    }

    fn assemble(
        name: PresetName,
        congruence: Congruence,
        generators: Vec<GroupElement>,
        cusps: Vec<Cusp>,
        genus: usize,
        basepoint: Complex64,
    ) -> Self {
        let generators = generators
            .into_iter()
            .enumerate()
            .map(|(i, g)| g.with_word(vec![i as i32 + 1]))
            .collect();
        let schreier = SchreierSystem::build(congruence).expect("preset subgroups are elliptic-free");
        Self { name, congruence, generators, cusps, genus, basepoint, word_cap: DEFAULT_WORD_CAP, schreier }
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn cusps(&self) -> &[Cusp] {
        &self.cusps
    }

    pub fn cusp(&self, label: &str) -> Result<&Cusp> {
        let wanted = if label == "infinity" || label == "∞" { "inf" } else { label };
        self.cusps
            .iter()
            .find(|c| c.label == wanted)
            .ok_or_else(|| Error::UnknownCusp(label.to_string()))
    }

    pub fn schreier(&self) -> &SchreierSystem {
        &self.schreier
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.congruence.contains(g)
    }

    /// Freely reduced word `w` with `product(w) = ±g`.
    pub fn word_decompose(&self, g: &GroupElement) -> Result<Vec<i32>> {
        let word = self.schreier.rewrite(g)?;
        if word.len() > self.word_cap {
            return Err(Error::WordTooLong { len: word.len(), cap: self.word_cap });
        }
        Ok(word)
    }

    /// `g` with its generator word attached.
    pub fn with_word(&self, g: &GroupElement) -> Result<GroupElement> {
        let w = self.word_decompose(g)?;
        Ok(g.clone().with_word(w))
    }

    pub fn element_from_word(&self, word: &[i32]) -> Result<GroupElement> {
        evaluate_word(&self.generators, word)
    }
}

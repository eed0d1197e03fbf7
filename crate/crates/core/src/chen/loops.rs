use std::collections::HashMap;
use std::path::Path as FsPath;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functional::IteratedIntegral;
use super::path::Path;
use super::signature::{path_signature, Signature};
use crate::error::{Error, Result};
use crate::formbank::Alphabet;
use crate::groupring::GroupRingElement;
use crate::modgroup::{GroupElement, GroupPreset, PresetName};

/// Signature along the straight path `z0 → g z0`.
pub fn loop_signature(
    g: &GroupElement,
    z0: Complex64,
    alphabet: &Alphabet,
    order: usize,
    tol: f64,
) -> Result<Signature> {
    let path = Path::segment(z0, g.apply(z0)?)?;
    path_signature(alphabet, &path, order, tol)
}

/// Identifies a set of cached loop signatures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub preset: PresetName,
    pub basepoint: Complex64,
    pub labels: Vec<String>,
    pub order: usize,
    pub tol: f64,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    key: CacheKey,
    generators: Vec<Signature>,
}

/// Generator loop signatures at a basepoint, computed once and shared.
///
/// Loops of other elements are Chen products along their generator words,
/// using that the letters are invariant under the group, so the loop of
/// `g⁻¹` is the reversal of the loop of `g` translated by `g⁻¹`.
#[derive(Debug)]
pub struct LoopCache {
    preset: Arc<GroupPreset>,
    alphabet: Alphabet,
    basepoint: Complex64,
    order: usize,
    tol: f64,
    generators: Vec<OnceLock<(Signature, Signature)>>,
    memo: Mutex<HashMap<GroupElement, Arc<Signature>>>,
}

impl LoopCache {
    pub fn new(preset: Arc<GroupPreset>, alphabet: Alphabet, basepoint: Complex64, order: usize, tol: f64) -> Self {
        let generators = (0..preset.generators().len()).map(|_| OnceLock::new()).collect();
        Self { preset, alphabet, basepoint, order, tol, generators, memo: Mutex::new(HashMap::new()) }
    }

    pub fn preset(&self) -> &GroupPreset {
        &self.preset
    }

    pub fn preset_arc(&self) -> Arc<GroupPreset> {
        self.preset.clone()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn basepoint(&self) -> Complex64 {
        self.basepoint
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn key(&self) -> CacheKey {
        CacheKey {
            preset: self.preset.name,
            basepoint: self.basepoint,
            labels: self.alphabet.labels(),
            order: self.order,
            tol: self.tol,
        }
    }

    fn generator_pair(&self, i: usize) -> Result<&(Signature, Signature)> {
        if let Some(p) = self.generators[i].get() {
            return Ok(p);
        }
        let g = &self.preset.generators()[i];
        let sig = loop_signature(g, self.basepoint, &self.alphabet, self.order, self.tol)?;
        let inv = sig.reversed();
        Ok(self.generators[i].get_or_init(|| (sig, inv)))
    }

    /// Compute all generator loops in parallel.
    pub fn warm(&self) -> Result<()> {
        (0..self.generators.len())
            .into_par_iter()
            .map(|i| self.generator_pair(i).map(|_| ()))
            .collect::<Result<Vec<()>>>()?;
        Ok(())
    }

    pub fn generator_loop(&self, i: usize) -> Result<&Signature> {
        Ok(&self.generator_pair(i)?.0)
    }

    /// Chen product of generator loops along a signed word (indices from 1).
    pub fn word_signature(&self, word: &[i32]) -> Result<Signature> {
        let mut acc = Signature::identity(self.alphabet.labels(), self.order);
        for &x in word {
            let i = x.unsigned_abs() as usize;
            if i == 0 || i > self.generators.len() {
                return Err(Error::InvalidArgument(format!("generator index {x} out of range")));
            }
            let (fwd, inv) = self.generator_pair(i - 1)?;
            acc = acc.compose(if x > 0 { fwd } else { inv })?;
        }
        Ok(acc)
    }

    /// Loop signature of a group element, memoized.
    pub fn loop_signature(&self, g: &GroupElement) -> Result<Arc<Signature>> {
        if let Some(s) = self.memo.lock().unwrap().get(g) {
            return Ok(s.clone());
        }
        let word = match g.word() {
            Some(w) => w.to_vec(),
            None => self.preset.word_decompose(g)?,
        };
        let sig = Arc::new(self.word_signature(&word)?);
        self.memo.lock().unwrap().insert(g.clone(), sig.clone());
        Ok(sig)
    }

    fn check_functional(&self, i: &IteratedIntegral) -> Result<()> {
        if i.labels() != self.alphabet.labels() {
            return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", i.labels(), self.alphabet.labels())));
        }
        if i.length() > self.order {
            return Err(Error::AlphabetMismatch(format!(
                "functional length {} exceeds cached order {}",
                i.length(),
                self.order
            )));
        }
        Ok(())
    }

    /// `⟨I, ξ⟩ = Σ a_g ⟨I, loop(g)⟩`.
    pub fn pair(&self, functional: &IteratedIntegral, xi: &GroupRingElement) -> Result<Complex64> {
        self.check_functional(functional)?;
        let mut total = Complex64::new(0.0, 0.0);
        for (g, a) in xi.terms() {
            if !self.preset.contains(g) {
                return Err(Error::NotInGroup(g.to_string(), self.preset.name.to_string()));
            }
            total += a * functional.evaluate(self.loop_signature(g)?.as_ref())?;
        }
        Ok(total)
    }

    pub fn save(&self, file: &FsPath) -> Result<()> {
        let generators = (0..self.generators.len())
            .map(|i| self.generator_loop(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        let body = serde_json::to_string(&CacheFile { key: self.key(), generators })
            .map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(file, body).map_err(|e| Error::InvalidArgument(format!("{}: {e}", file.display())))
    }

    /// Fill the generator loops from a file; returns false when the file is
    /// missing or was written for a different key.
    pub fn load(&self, file: &FsPath) -> Result<bool> {
        let Ok(body) = std::fs::read_to_string(file) else {
            return Ok(false);
        };
        let parsed: CacheFile = match serde_json::from_str(&body) {
            Ok(p) => p,
            Err(_) => return Ok(false),
        };
        if parsed.key != self.key() || parsed.generators.len() != self.generators.len() {
            return Ok(false);
        }
        for (slot, sig) in self.generators.iter().zip(parsed.generators) {
            let inv = sig.reversed();
            let _ = slot.set((sig, inv));
        }
        Ok(true)
    }
}

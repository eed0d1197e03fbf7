use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use geomod_core::chen::{IteratedIntegral, LoopCache};
use geomod_core::formbank::{builtin_letters, Alphabet};
use geomod_core::modgroup::GroupPreset;
use num_complex::Complex64;

use crate::config::RunConfig;

/// A preset with its letter alphabet and loop caches backed by the cache dir.
pub struct Session {
    pub config: RunConfig,
    pub preset: Arc<GroupPreset>,
    pub alphabet: Alphabet,
}

impl Session {
    pub fn new(config: RunConfig) -> Result<Self> {
        let preset = config.preset()?;
        Ok(Self::with_preset(config, preset))
    }

    pub fn with_preset(config: RunConfig, preset: GroupPreset) -> Self {
        let alphabet = Alphabet::from_letters(builtin_letters(&preset));
        Self { config, preset: Arc::new(preset), alphabet }
    }

    pub fn basepoint(&self) -> Complex64 {
        self.config.basepoint(&self.preset)
    }

    fn cache_file(&self, order: usize) -> Option<PathBuf> {
        let dir = self.config.cache_dir.as_ref()?;
        let z = self.basepoint();
        let name = format!(
            "loops-{}-{}-o{}-tol{:e}-z{:.8}_{:.8}.json",
            self.preset.name,
            self.alphabet.labels().join("_"),
            order,
            self.config.tol,
            z.re,
            z.im
        );
        Some(dir.join(name))
    }

    /// Loop cache of the given order, read from disk when a matching file
    /// exists and written back after the generator loops are computed.
    pub fn loops(&self, order: usize) -> Result<Arc<LoopCache>> {
        let cache = LoopCache::new(self.preset.clone(), self.alphabet.clone(), self.basepoint(), order, self.config.tol);
        if let Some(file) = self.cache_file(order) {
            if !cache.load(&file)? {
                cache.warm()?;
                std::fs::create_dir_all(file.parent().expect("cache file has a directory"))
                    .with_context(|| format!("creating {}", file.display()))?;
                cache.save(&file)?;
            }
        }
        Ok(Arc::new(cache))
    }

    /// Word specs plus an optional JSON functional, summed.
    pub fn functional_from(&self, words: &[String], file: Option<&std::path::Path>) -> Result<IteratedIntegral> {
        let mut out = self.functional(words)?;
        if let Some(path) = file {
            let body = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            out = out.add(&IteratedIntegral::from_json(&body, &self.alphabet)?)?;
        }
        if words.is_empty() && file.is_none() {
            anyhow::bail!("give a functional with --word or a JSON file");
        }
        Ok(out)
    }

    /// Functional from `--word` specs: comma-separated labels, optionally
    /// prefixed by a real coefficient and `*`, e.g. `0.5*f,E`. The empty
    /// string is the constant 1.
    pub fn functional(&self, words: &[String]) -> Result<IteratedIntegral> {
        let mut out = IteratedIntegral::zero(&self.alphabet);
        for spec in words {
            let (coeff, body) = match spec.split_once('*') {
                Some((c, b)) => (c.trim().parse::<f64>().with_context(|| format!("coefficient in `{spec}`"))?, b),
                None => (1.0, spec.as_str()),
            };
            let mut word = Vec::new();
            for label in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let i = self.alphabet.position(label).with_context(|| {
                    format!("unknown letter `{label}`; letters are {}", self.alphabet.labels().join(", "))
                })?;
                word.push(i);
            }
            out.add_term(&word, Complex64::new(coeff, 0.0));
        }
        Ok(out)
    }
}

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use geomod_core::modgroup::{GroupPreset, PresetName};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Settings shared by every subcommand. Loaded from JSON, then overridden by
/// flags and `GEOMOD_CACHE`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub group: String,
    /// `[re, im]`; the preset's basepoint when absent.
    pub basepoint: Option<[f64; 2]>,
    pub tol: f64,
    pub c_bound: u32,
    pub c_bounds: Vec<u32>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub report_dir: Option<PathBuf>,
    pub seed: u64,
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            group: "gamma0_11".into(),
            basepoint: None,
            tol: 1e-11,
            c_bound: 32,
            c_bounds: vec![4, 8, 16, 32],
            format: Format::Text,
            cache_dir: None,
            report_dir: None,
            seed: 20240611,
            jobs: None,
        }
    }
}

impl RunConfig {
    pub fn load(file: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        serde_json::from_str(&body).with_context(|| format!("parsing {}", file.display()))
    }

    pub fn apply_env(&mut self) {
        if let Some(dir) = std::env::var_os("GEOMOD_CACHE") {
            if !dir.is_empty() {
                self.cache_dir = Some(PathBuf::from(dir));
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.preset_name()?;
        if !(self.tol > 0.0 && self.tol < 1.0) {
            bail!("tol must lie in (0, 1), got {}", self.tol);
        }
        if self.c_bounds.is_empty() || self.c_bounds.windows(2).any(|w| w[0] >= w[1]) {
            bail!("c_bounds must be a nonempty increasing list");
        }
        if let Some([_, im]) = self.basepoint {
            if im <= 0.0 {
                bail!("basepoint must lie in the upper half-plane");
            }
        }
        if self.jobs == Some(0) {
            bail!("jobs must be positive");
        }
        Ok(())
    }

    pub fn preset_name(&self) -> Result<PresetName> {
        Ok(self.group.parse::<PresetName>()?)
    }

    pub fn preset(&self) -> Result<GroupPreset> {
        Ok(GroupPreset::by_name(self.preset_name()?))
    }

    pub fn basepoint(&self, preset: &GroupPreset) -> Complex64 {
        self.basepoint.map_or(preset.basepoint, |[re, im]| Complex64::new(re, im))
    }
}

/// `re,im`, `a+bi`, `a-bi` or `bi`.
pub fn parse_point(s: &str) -> Result<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((re, im)) = s.split_once(',') {
        return Ok(Complex64::new(re.parse()?, im.parse()?));
    }
    let body = s.strip_suffix('i').with_context(|| format!("cannot read point `{s}`"))?;
    // split at the last sign that is not an exponent sign or the leading one
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match cut {
        Some(i) => (body[..i].parse()?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse()?,
    };
    Ok(Complex64::new(re, im))
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use geomod_cli::config::{parse_point, Format, RunConfig};
use geomod_cli::session::Session;
use geomod_cli::suites::{run_suite, SuiteReport, SUITES};
use geomod_core::groupring::parse_group_ring;
use geomod_core::hodge::primitive_space_table;
use geomod_core::hoforms::{random_tuples, sample_points, HigherOrderForm};
use geomod_core::poincare::{convergence_profile, PoincareSpec, SeriesKind};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "geomod", version, about = "Iterated integrals, higher-order modular forms and twisted Poincare series")]
struct Cli {
    /// JSON file with run settings
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// gamma2 or gamma0_11
    #[arg(long, global = true)]
    group: Option<String>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// quadrature tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// where suite reports and CSV profiles are written
    #[arg(long, global = true)]
    report_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pair a functional with a group ring element
    Pair {
        /// word spec such as `f,E` or `0.5*fbar`; repeat to add terms
        #[arg(long = "word", required = true)]
        words: Vec<String>,
        /// group ring element such as `(g1-1)(g2-1)`
        #[arg(long)]
        xi: String,
    },
    /// Check that F_I has the order implied by the length of I
    VerifyOrder {
        #[arg(long = "word")]
        words: Vec<String>,
        /// functional as JSON
        #[arg(long)]
        functional: Option<PathBuf>,
        /// claimed order; defaults to the functional's length plus one
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value_t = 4)]
        tuples: usize,
        #[arg(long, visible_alias = "samples", default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 2)]
        max_word: usize,
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
    },
    /// Check invariance of F_I under every cusp stabilizer
    VerifyCuspidal {
        #[arg(long = "word")]
        words: Vec<String>,
        #[arg(long)]
        functional: Option<PathBuf>,
        #[arg(long, visible_alias = "samples", default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 1e-7)]
        threshold: f64,
    },
    /// Convergence profile of a Poincare series as CSV
    Poincare {
        #[arg(long, default_value = "classical")]
        kind: SeriesKind,
        #[arg(long, default_value_t = 6)]
        k: i64,
        #[arg(long, default_value = "inf")]
        cusp: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// twist, required for p1/p2/p3
        #[arg(long = "word")]
        words: Vec<String>,
        /// twist as JSON
        #[arg(long)]
        twist: Option<PathBuf>,
        /// evaluation point, `0.1+0.8i` or `0.1,0.8`
        #[arg(long, default_value = "0.1+0.8i", allow_hyphen_values = true)]
        z: String,
        /// comma-separated truncation bounds; the config list otherwise
        #[arg(long, visible_alias = "cbound", value_delimiter = ',')]
        c_bounds: Option<Vec<u32>>,
        #[arg(long, default_value_t = 4)]
        warmup: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Weight and Hodge strata of primitive forms
    Filtration {
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        s: u32,
    },
    /// Run a verification suite: chen, order, cuspidal, poincare, filtration or all
    Suite { name: String },
}

/// Failures of checks, as opposed to configuration or IO errors.
struct ChecksFailed;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command, config) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(ChecksFailed)) => ExitCode::from(1),
        // a closed pipe downstream is not our failure
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply_env();
    if let Some(g) = &cli.group {
        cfg.group = g.clone();
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = Some(j);
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.tol {
        cfg.tol = t;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(d) = &cli.cache_dir {
        cfg.cache_dir = Some(d.clone());
    }
    if let Some(d) = &cli.report_dir {
        cfg.report_dir = Some(d.clone());
    }
    cfg.validate()?;
    if let Some(j) = cfg.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("configuring worker pool")?;
    }
    Ok(cfg)
}

fn verdict(passed: bool) -> Result<(), ChecksFailed> {
    if passed {
        Ok(())
    } else {
        Err(ChecksFailed)
    }
}

fn emit<T: Serialize + std::fmt::Display>(format: Format, value: &T) -> Result<()> {
    match format {
        Format::Text => write!(std::io::stdout(), "{value}")?,
        Format::Json => writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(value)?)?,
    }
    Ok(())
}



fn write_report(dir: &std::path::Path, rep: &SuiteReport) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let file = dir.join(format!("{}.json", rep.suite));
    std::fs::write(&file, serde_json::to_string_pretty(rep)? + "\n").with_context(|| format!("writing {}", file.display()))?;
    for a in &rep.artifacts {
        let file = dir.join(&a.name);
        std::fs::write(&file, &a.body).with_context(|| format!("writing {}", file.display()))?;
    }
    Ok(())
}

fn run(command: Command, config: RunConfig) -> Result<Result<(), ChecksFailed>> {
    let format = config.format;
    let seed = config.seed;
    match command {
        Command::Pair { words, xi } => {
            let s = Session::new(config)?;
            let i = s.functional(&words)?;
            let xi = parse_group_ring(&xi, &s.preset)?;
            let v = s.loops(i.length().max(1))?.pair(&i, &xi)?;
            match format {
                Format::Text => writeln!(std::io::stdout(), "{:.15e} {:+.15e}", v.re, v.im)?,
                Format::Json => writeln!(std::io::stdout(), "{}", serde_json::json!({ "functional": i.to_string(), "xi": xi.to_string(), "value": [v.re, v.im] }))?,
            }
            Ok(Ok(()))
        }
        Command::VerifyOrder { words, functional, order, tuples, points, max_word, threshold } => {
            let s = Session::new(config)?;
            let i = s.functional_from(&words, functional.as_deref())?;
            let len = match order {
                Some(0) => bail!("orders start at 1"),
                Some(o) => o - 1,
                None => i.length(),
            };
            let f = HigherOrderForm::new(i.clone(), s.loops(len.max(i.length()).max(1))?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts = sample_points(&mut rng, points, (-0.4, 0.4), (0.3, 1.0));
            let cons = if len == 0 { vec![vec![]] } else { random_tuples(&s.preset, &mut rng, len, tuples, max_word)? };
            let ann = random_tuples(&s.preset, &mut rng, len + 1, tuples, max_word)?;
            let rep = f.verify_order(&cons, &ann, &pts, threshold)?;
            emit(format, &rep)?;
            Ok(verdict(rep.passed))
        }
        Command::VerifyCuspidal { words, functional, points, threshold } => {
            let s = Session::new(config)?;
            let i = s.functional_from(&words, functional.as_deref())?;
            let f = HigherOrderForm::new(i.clone(), s.loops(i.length().max(1))?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts = sample_points(&mut rng, points, (-0.5, 0.5), (0.3, 1.0));
            let rep = f.verify_cuspidal(&pts, threshold)?;
            emit(format, &rep)?;
            Ok(verdict(rep.passed))
        }
        Command::Poincare { kind, k, cusp, m, words, twist, z, c_bounds, warmup, output } => {
            let c_bounds = c_bounds.unwrap_or_else(|| config.c_bounds.clone());
            let s = Session::new(config)?;
            let z = parse_point(&z)?;
            let spec = match kind {
                SeriesKind::Classical | SeriesKind::Eisenstein => PoincareSpec::classical(k, &cusp, m, c_bounds[0]),
                twisted => {
                    if words.is_empty() && twist.is_none() {
                        bail!("{twisted} needs a twist given by --word or --twist");
                    }
                    PoincareSpec::twisted(twisted, k, &cusp, m, s.functional_from(&words, twist.as_deref())?, c_bounds[0])
                }
            };
            let order = spec.twist.as_ref().map_or(1, |t| t.length().max(1));
            let prof = convergence_profile(&spec, s.loops(order)?, z, &c_bounds, warmup)?;
            let csv = prof.to_csv();
            match output {
                Some(path) => std::fs::write(&path, &csv).with_context(|| format!("writing {}", path.display()))?,
                None => write!(std::io::stdout(), "{csv}")?,
            }
            if let Some(false) = prof.monotone {
                eprintln!("warning: successive differences are not monotone");
            }
            Ok(Ok(()))
        }
        Command::Filtration { k, s } => {
            let table = primitive_space_table(k, s, &config.preset()?)?;
            match format {
                Format::Text => write!(std::io::stdout(), "{}", table.to_text())?,
                Format::Json => writeln!(std::io::stdout(), "{}", table.to_json())?,
            }
            Ok(Ok(()))
        }
        Command::Suite { name } => {
            let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name.as_str()] };
            if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
                bail!("unknown suite `{bad}`; choose one of {} or all", SUITES.join(", "));
            }
            let report_dir = config.report_dir.clone();
            let s = Session::new(config)?;
            let mut passed = true;
            let mut reports = Vec::new();
            for n in names {
                let rep = run_suite(n, &s)?;
                passed &= rep.passed;
                if let Some(dir) = &report_dir {
                    write_report(dir, &rep)?;
                }
                if format == Format::Text {
                    write!(std::io::stdout(), "{rep}")?;
                }
                reports.push(rep);
            }
            if format == Format::Json {
                writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&reports)?)?;
            }
            Ok(verdict(passed))
        }
    }
}

//! Experiment configuration: flat key-value text with sections, uniform
//! environment overrides, and a fully resolved echo.
//!
//! The format is deliberately schema-free and diff-friendly: `[section]`
//! headers group `key = value` lines, `#` starts a full-line comment, and
//! lists are comma separated. Every key has a default, so an empty file is
//! a valid configuration; the resolved echo written next to experiment
//! outputs always contains every key with its final value.
//!
//! Environment variables override file values uniformly: the key
//! `grid.rays` reads `BBL_GRID_RAYS`, and so on (`BBL_` + section + `_` +
//! key, uppercase). Command-line flags are applied by the caller on top of
//! the loaded configuration and therefore win over both.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{ContractiveLine, WeightParams};

/// Every key the format accepts, in echo order, with its default.
const KNOWN_KEYS: &[(&str, &str)] = &[
    ("run.command", ""),
    ("run.seed", "42"),
    ("run.out", "out"),
    ("run.threads", "0"),
    ("run.tolerance_scale", "1.0"),
    ("function.coeffs_re", "1.0, 0.05"),
    ("function.coeffs_im", ""),
    ("weights.n", "1"),
    ("weights.p", "2.0"),
    ("weights.alpha", "2.0"),
    ("weights.s", "2.0"),
    ("weights.q", ""),
    ("weights.beta", ""),
    ("grid.levels", "25"),
    ("grid.rays", "256"),
    ("grid.order", "64"),
    ("grid.circle", "256"),
    ("bounds.radius", "0.9"),
    ("bounds.deviation", "0.1"),
    ("hardy.r", "2.0"),
    ("hardy.gammas", "1.5, 1.2, 1.1, 1.05, 1.02"),
    ("fuglede.base_radius", "0.5"),
    ("fuglede.harmonics", "2, 3"),
    ("fuglede.eps", "0.02, 0.01, 0.005"),
    ("gap.eps", "0.05, 0.025, 0.0125"),
    ("convex.knots", "32"),
    ("convex.functions", "500"),
];

/// A fully resolved experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Command to run when the caller does not name one.
    pub command: Option<String>,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Worker threads; 0 keeps the library default.
    pub threads: usize,
    /// Multiplies the pass/fail tolerances of checks that honor it.
    pub tolerance_scale: f64,
    /// Coefficients of the polynomial under study, lowest degree first.
    pub coeffs: Vec<Complex64>,
    pub params: WeightParams,
    pub line: ContractiveLine,
    pub level_count: usize,
    pub n_rays: usize,
    pub order: usize,
    pub n_circ: usize,
    /// Euclidean radius bound of the setup certificate.
    pub radius_bound: f64,
    /// Deviation bound of the setup certificate.
    pub deviation_bound: f64,
    /// Boundary exponent of the Hardy limit sweep.
    pub hardy_r: f64,
    /// Gamma grid of the Hardy limit sweep.
    pub gammas: Vec<f64>,
    /// Euclidean base radius of the synthetic stability family.
    pub fuglede_radius: f64,
    /// Harmonics of the synthetic stability family.
    pub fuglede_harmonics: Vec<u32>,
    /// Amplitudes of the synthetic stability family.
    pub fuglede_eps: Vec<f64>,
    /// Perturbation amplitudes of the gap sweep.
    pub gap_eps: Vec<f64>,
    /// Knot count of the convex-order grid.
    pub knot_count: usize,
    /// Number of random convex test functions.
    pub convex_count: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig::from_sources("", |_| None).expect("defaults are valid")
    }
}

impl ExperimentConfig {
    /// Parses configuration text and applies `BBL_*` environment
    /// overrides.
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_sources(text, |key| std::env::var(env_name(key)).ok())
    }

    /// Reads a configuration file and applies `BBL_*` environment
    /// overrides.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    /// Parses configuration text with an explicit override source in place
    /// of the process environment.
    pub fn from_sources(
        text: &str,
        overrides: impl Fn(&str) -> Option<String>,
    ) -> Result<Self> {
        let mut values = parse_flat(text)?;
        for (key, _) in KNOWN_KEYS {
            if let Some(v) = overrides(key) {
                values.insert((*key).to_string(), v);
            }
        }
        Self::from_values(&values)
    }

    fn from_values(values: &HashMap<String, String>) -> Result<Self> {
        let get = |key: &str| -> String {
            values
                .get(key)
                .cloned()
                .unwrap_or_else(|| default_of(key).to_string())
        };

        let command = {
            let raw = get("run.command");
            let trimmed = raw.trim().to_string();
            (!trimmed.is_empty()).then_some(trimmed)
        };
        let seed = parse_scalar::<u64>("run.seed", &get("run.seed"))?;
        let out_dir = PathBuf::from(get("run.out"));
        let threads = parse_scalar::<usize>("run.threads", &get("run.threads"))?;
        let tolerance_scale =
            parse_scalar::<f64>("run.tolerance_scale", &get("run.tolerance_scale"))?;
        if !(tolerance_scale > 0.0) || !tolerance_scale.is_finite() {
            return Err(Error::Config(format!(
                "run.tolerance_scale = {tolerance_scale} must be positive and finite"
            )));
        }

        let re = parse_list::<f64>("function.coeffs_re", &get("function.coeffs_re"))?;
        let im = parse_list::<f64>("function.coeffs_im", &get("function.coeffs_im"))?;
        if re.is_empty() {
            return Err(Error::Config(
                "function.coeffs_re needs at least one coefficient".into(),
            ));
        }
        if !im.is_empty() && im.len() != re.len() {
            return Err(Error::Config(format!(
                "function.coeffs_im has {} entries but coeffs_re has {}",
                im.len(),
                re.len()
            )));
        }
        let coeffs: Vec<Complex64> = re
            .iter()
            .enumerate()
            .map(|(i, &r)| Complex64::new(r, im.get(i).copied().unwrap_or(0.0)))
            .collect();

        let n = parse_scalar::<u32>("weights.n", &get("weights.n"))?;
        let p = parse_scalar::<f64>("weights.p", &get("weights.p"))?;
        let alpha = parse_scalar::<f64>("weights.alpha", &get("weights.alpha"))?;
        let params =
            WeightParams::new(n, p, alpha).map_err(|e| Error::Config(e.to_string()))?;

        let s_raw = get("weights.s");
        let q_raw = get("weights.q");
        let beta_raw = get("weights.beta");
        let (q, beta) = match (q_raw.trim().is_empty(), beta_raw.trim().is_empty()) {
            (true, true) => {
                let s = parse_scalar::<f64>("weights.s", &s_raw)?;
                (s * p, s * alpha)
            }
            (false, false) => (
                parse_scalar::<f64>("weights.q", &q_raw)?,
                parse_scalar::<f64>("weights.beta", &beta_raw)?,
            ),
            _ => {
                return Err(Error::Config(
                    "weights.q and weights.beta must be given together".into(),
                ))
            }
        };
        let line =
            ContractiveLine::new(params, q, beta).map_err(|e| Error::Config(e.to_string()))?;

        let config = ExperimentConfig {
            command,
            seed,
            out_dir,
            threads,
            tolerance_scale,
            coeffs,
            params,
            line,
            level_count: parse_scalar("grid.levels", &get("grid.levels"))?,
            n_rays: parse_scalar("grid.rays", &get("grid.rays"))?,
            order: parse_scalar("grid.order", &get("grid.order"))?,
            n_circ: parse_scalar("grid.circle", &get("grid.circle"))?,
            radius_bound: parse_scalar("bounds.radius", &get("bounds.radius"))?,
            deviation_bound: parse_scalar("bounds.deviation", &get("bounds.deviation"))?,
            hardy_r: parse_scalar("hardy.r", &get("hardy.r"))?,
            gammas: parse_list("hardy.gammas", &get("hardy.gammas"))?,
            fuglede_radius: parse_scalar("fuglede.base_radius", &get("fuglede.base_radius"))?,
            fuglede_harmonics: parse_list("fuglede.harmonics", &get("fuglede.harmonics"))?,
            fuglede_eps: parse_list("fuglede.eps", &get("fuglede.eps"))?,
            gap_eps: parse_list("gap.eps", &get("gap.eps"))?,
            knot_count: parse_scalar("convex.knots", &get("convex.knots"))?,
            convex_count: parse_scalar("convex.functions", &get("convex.functions"))?,
        };
        Ok(config)
    }

    /// The configuration text with every key at its final value, suitable
    /// for the echo file written next to experiment outputs.
    pub fn resolved_text(&self) -> String {
        let mut out = String::from("# resolved experiment configuration\n");
        let mut section = "";
        for (key, _) in KNOWN_KEYS {
            let (sec, name) = key.split_once('.').expect("keys are section.name");
            if sec != section {
                let _ = writeln!(out, "\n[{sec}]");
                section = sec;
            }
            let _ = writeln!(out, "{name} = {}", self.value_of(key));
        }
        out
    }

    fn value_of(&self, key: &str) -> String {
        match key {
            "run.command" => self.command.clone().unwrap_or_default(),
            "run.seed" => self.seed.to_string(),
            "run.out" => self.out_dir.display().to_string(),
            "run.threads" => self.threads.to_string(),
            "run.tolerance_scale" => self.tolerance_scale.to_string(),
            "function.coeffs_re" => join(self.coeffs.iter().map(|c| c.re)),
            "function.coeffs_im" => {
                if self.coeffs.iter().all(|c| c.im == 0.0) {
                    String::new()
                } else {
                    join(self.coeffs.iter().map(|c| c.im))
                }
            }
            "weights.n" => self.params.n.to_string(),
            "weights.p" => self.params.p.to_string(),
            "weights.alpha" => self.params.alpha.to_string(),
            "weights.s" => self.line.s.to_string(),
            "weights.q" => self.line.q.to_string(),
            "weights.beta" => self.line.beta.to_string(),
            "grid.levels" => self.level_count.to_string(),
            "grid.rays" => self.n_rays.to_string(),
            "grid.order" => self.order.to_string(),
            "grid.circle" => self.n_circ.to_string(),
            "bounds.radius" => self.radius_bound.to_string(),
            "bounds.deviation" => self.deviation_bound.to_string(),
            "hardy.r" => self.hardy_r.to_string(),
            "hardy.gammas" => join(self.gammas.iter().copied()),
            "fuglede.base_radius" => self.fuglede_radius.to_string(),
            "fuglede.harmonics" => join(self.fuglede_harmonics.iter().map(|&k| k as f64)),
            "fuglede.eps" => join(self.fuglede_eps.iter().copied()),
            "gap.eps" => join(self.gap_eps.iter().copied()),
            "convex.knots" => self.knot_count.to_string(),
            "convex.functions" => self.convex_count.to_string(),
            _ => unreachable!("unknown key {key}"),
        }
    }
}

/// The environment variable that overrides a key: `BBL_SECTION_KEY`.
pub fn env_name(key: &str) -> String {
    format!("BBL_{}", key.replace('.', "_").to_uppercase())
}

fn default_of(key: &str) -> &'static str {
    KNOWN_KEYS
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, d)| *d)
        .expect("key is known")
}

fn parse_flat(text: &str) -> Result<HashMap<String, String>> {
    let mut values = HashMap::new();
    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = name.trim().to_string();
            if section.is_empty() {
                return Err(Error::Config(format!("line {}: empty section name", idx + 1)));
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got `{line}`",
                idx + 1
            )));
        };
        if section.is_empty() {
            return Err(Error::Config(format!(
                "line {}: key `{}` appears before any [section]",
                idx + 1,
                key.trim()
            )));
        }
        let full = format!("{section}.{}", key.trim());
        if !KNOWN_KEYS.iter().any(|(k, _)| *k == full) {
            return Err(Error::Config(format!(
                "line {}: unknown key `{full}`",
                idx + 1
            )));
        }
        if values.insert(full.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!(
                "line {}: duplicate key `{full}`",
                idx + 1
            )));
        }
    }
    Ok(values)
}

fn parse_scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| Error::Config(format!("{key}: cannot parse `{value}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    let trimmed = value.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|part| parse_scalar(key, part))
        .collect()
}

fn join(values: impl Iterator<Item = f64>) -> String {
    values
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

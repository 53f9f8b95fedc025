//! Experiment configuration: flat `key = value` lines, `#` starts a comment.

use std::fmt;
use std::path::{Path, PathBuf};

use kakeya_core::fractals::{AssignmentRule, FractalSpec};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Ambient dimension, 2 to 4.
    pub n: usize,
    /// Tube radius, in (0, 1/8].
    pub delta: f64,
    /// Level for the bush decomposition, in (0, 1).
    pub lambda: f64,
    pub spec: FractalSpec,
    /// Master seed; every random stream is a named sub-seed of it.
    pub seed: u64,
    /// Voxels per δ along each axis (cell side δ/grid), at least 4.
    pub grid: u32,
    /// Half-width of the voxel box, at least 1 + 2δ.
    pub box_half_width: f64,
    pub assignment: AssignmentRule,
    /// Where `experiment` writes its report unless overridden on the
    /// command line.
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 2,
            delta: 1.0 / 64.0,
            lambda: 0.5,
            spec: FractalSpec::SinglePoint,
            seed: 1,
            grid: 4,
            box_half_width: 1.25,
            assignment: AssignmentRule::Nearest,
            output: None,
        }
    }
}

const KEYS: [&str; 9] = ["n", "delta", "lambda", "spec", "seed", "grid", "box", "assignment", "output"];

fn config_error(path: &str, line: usize, msg: impl Into<String>) -> CliError {
    CliError::Config { path: path.to_string(), line, msg: msg.into() }
}

impl ExperimentConfig {
    pub fn cell_size(&self) -> f64 {
        self.delta / self.grid as f64
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses `text`; `origin` names the source in diagnostics. Keys not
    /// given keep their defaults, repeated keys are rejected.
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen: Vec<(&str, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(config_error(origin, line, format!("expected `key = value`, found `{content}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(config_error(
                    origin,
                    line,
                    format!("unknown key `{key}` (expected one of {})", KEYS.join(", ")),
                ));
            };
            if let Some((_, first)) = seen.iter().find(|(k, _)| *k == known) {
                return Err(config_error(origin, line, format!("key `{key}` already set on line {first}")));
            }
            seen.push((known, line));
            if value.is_empty() {
                return Err(config_error(origin, line, format!("key `{key}` has no value")));
            }
            cfg.set(known, value).map_err(|msg| config_error(origin, line, msg))?;
        }
        cfg.validate().map_err(|(key, msg)| {
            let line = seen.iter().find(|(k, _)| *k == key).map_or(0, |(_, l)| *l);
            config_error(origin, line, msg)
        })?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value.parse().map_err(|_| format!("`{key}`: cannot parse `{value}`"))
        }
        match key {
            "n" => self.n = num(key, value)?,
            "delta" => self.delta = num(key, value)?,
            "lambda" => self.lambda = num(key, value)?,
            "spec" => self.spec = value.parse().map_err(|e| format!("`spec`: {e}"))?,
            "seed" => self.seed = num(key, value)?,
            "grid" => self.grid = num(key, value)?,
            "box" => self.box_half_width = num(key, value)?,
            "assignment" => self.assignment = value.parse().map_err(|e| format!("`assignment`: {e}"))?,
            "output" => self.output = Some(PathBuf::from(value)),
            _ => unreachable!("key list checked by the caller"),
        }
        Ok(())
    }

    /// Range checks; the error names the offending key.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if !(2..=4).contains(&self.n) {
            return Err(("n", format!("n = {} must be 2, 3 or 4", self.n)));
        }
        if !(self.delta > 0.0 && self.delta <= 0.125) {
            return Err(("delta", format!("delta = {} must lie in (0, 1/8]", self.delta)));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(("lambda", format!("lambda = {} must lie in (0, 1)", self.lambda)));
        }
        if self.grid < 4 {
            return Err(("grid", format!("grid = {} must be at least 4 voxels per delta", self.grid)));
        }
        if !(self.box_half_width >= 1.0 + 2.0 * self.delta) || !self.box_half_width.is_finite() {
            return Err(("box", format!("box = {} must be at least 1 + 2 delta", self.box_half_width)));
        }
        if let Err(e) = self.spec.validate(self.n) {
            return Err(("spec", e.to_string()));
        }
        Ok(())
    }

    /// The configuration without its output location; what an experiment
    /// records alongside its results.
    pub fn without_output(&self) -> Self {
        Self { output: None, ..self.clone() }
    }
}

impl fmt::Display for ExperimentConfig {
    /// Canonical text form; `parse` of this text gives back `self`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "delta = {:?}", self.delta)?;
        writeln!(f, "lambda = {:?}", self.lambda)?;
        writeln!(f, "spec = {}", self.spec)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "grid = {}", self.grid)?;
        writeln!(f, "box = {:?}", self.box_half_width)?;
        writeln!(f, "assignment = {}", self.assignment)?;
        if let Some(out) = &self.output {
            writeln!(f, "output = {}", out.display())?;
        }
        Ok(())
    }
}

//! Run settings shared by the command-line tools.
//!
//! A config file holds `key = value` lines; blank lines and lines starting
//! with `#` are ignored. Keys match the long flag names with `_` or `-`.

use std::fs;
use std::path::Path;

use crate::dataset::{FeatureConfig, MissingPolicy};
use crate::error::{Error, Result};
use crate::eval::{BoostConfig, EvalConfig, MaskingPolicy};
use crate::graph::DirectionMode;
use crate::label_features::LiftMode;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub direction: DirectionMode,
    pub lifting: LiftMode,
    pub masking: MaskingPolicy,
    pub missing: MissingPolicy,
    pub folds: usize,
    pub iterations: usize,
    pub weight_threshold: f64,
    pub seed: u64,
    pub hidden_fraction: f64,
    pub macro_average: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let eval = EvalConfig::default();
        RunConfig {
            direction: eval.features.direction,
            lifting: eval.features.lifting,
            masking: eval.masking,
            missing: eval.features.missing,
            folds: eval.folds,
            iterations: eval.boost.iterations,
            weight_threshold: eval.boost.weight_threshold,
            seed: eval.seed,
            hidden_fraction: eval.hidden_fraction,
            macro_average: eval.macro_average,
        }
    }
}

fn value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::input(format!("invalid value '{v}' for '{key}'")))
}

impl RunConfig {
    /// Sets one key; used for both config files and overrides.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key.replace('-', "_").as_str() {
            "direction" => self.direction = v.parse()?,
            "lifting" => self.lifting = v.parse()?,
            "masking" => self.masking = v.parse()?,
            "missing" => self.missing = v.parse()?,
            "folds" => self.folds = value(key, v)?,
            "iterations" => self.iterations = value(key, v)?,
            "weight_threshold" => self.weight_threshold = value(key, v)?,
            "seed" => self.seed = value(key, v)?,
            "hidden_fraction" => self.hidden_fraction = value(key, v)?,
            "macro_average" => self.macro_average = value(key, v)?,
            other => return Err(Error::input(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(source, i + 1, "expected 'key = value'"))?;
            c.set(k.trim(), v.trim())
                .map_err(|e| Error::parse(source, i + 1, e.to_string()))?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::input(format!(
                "folds must be at least 2, got {}",
                self.folds
            )));
        }
        if !(self.weight_threshold > 0.0 && self.weight_threshold <= 100.0) {
            return Err(Error::input(format!(
                "weight threshold must lie in (0, 100], got {}",
                self.weight_threshold
            )));
        }
        if !(0.0..1.0).contains(&self.hidden_fraction) {
            return Err(Error::input(format!(
                "hidden fraction must lie in [0, 1), got {}",
                self.hidden_fraction
            )));
        }
        Ok(())
    }

    pub fn features(&self) -> FeatureConfig {
        FeatureConfig {
            direction: self.direction,
            lifting: self.lifting,
            missing: self.missing,
        }
    }

    pub fn eval(&self) -> EvalConfig {
        EvalConfig {
            features: self.features(),
            folds: self.folds,
            boost: BoostConfig {
                iterations: self.iterations,
                weight_threshold: self.weight_threshold,
            },
            seed: self.seed,
            masking: self.masking,
            hidden_fraction: self.hidden_fraction,
            macro_average: self.macro_average,
        }
    }

    /// Every setting as `key = value` text that [`RunConfig::parse`] accepts.
    pub fn to_text(&self) -> String {
        self.eval()
            .snapshot()
            .into_iter()
            .filter(|(k, _)| k != "ncs_weight")
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

//! Runtime configuration with environment overrides (prefix `MZVLAB_`).

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Target absolute radius 2^-prec_bits for evaluations.
    pub prec_bits: u32,
    /// Cap for relation building and reductions.
    pub max_weight: u32,
    /// PSLQ coefficient bound exponent.
    pub max_coeff_bits: u32,
    pub cache_path: Option<PathBuf>,
    pub output_mode: OutputMode,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            prec_bits: 128,
            max_weight: 12,
            max_coeff_bits: 32,
            cache_path: None,
            output_mode: OutputMode::Text,
        }
    }
}

impl Config {
    /// Defaults overridden by MZVLAB_PREC_BITS, MZVLAB_MAX_WEIGHT,
    /// MZVLAB_MAX_COEFF_BITS, MZVLAB_CACHE, MZVLAB_OUTPUT.
    pub fn from_env() -> Config {
        let mut cfg = Config::default();
        if let Some(v) = env_parse("MZVLAB_PREC_BITS") {
            cfg.prec_bits = v;
        }
        if let Some(v) = env_parse("MZVLAB_MAX_WEIGHT") {
            cfg.max_weight = v;
        }
        if let Some(v) = env_parse("MZVLAB_MAX_COEFF_BITS") {
            cfg.max_coeff_bits = v;
        }
        if let Ok(v) = std::env::var("MZVLAB_CACHE") {
            if !v.is_empty() {
                cfg.cache_path = Some(PathBuf::from(v));
            }
        }
        if let Ok(v) = std::env::var("MZVLAB_OUTPUT") {
            if v.eq_ignore_ascii_case("json") {
                cfg.output_mode = OutputMode::Json;
            }
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.prec_bits < 16 {
            return Err(format!("prec_bits must be >= 16, got {}", self.prec_bits));
        }
        if self.max_weight < 2 {
            return Err(format!("max_weight must be >= 2, got {}", self.max_weight));
        }
        if self.max_coeff_bits == 0 || self.max_coeff_bits > 256 {
            return Err(format!(
                "max_coeff_bits must be in 1..=256, got {}",
                self.max_coeff_bits
            ));
        }
        Ok(())
    }
}

fn env_parse(name: &str) -> Option<u32> {
    std::env::var(name).ok()?.trim().parse().ok()
}

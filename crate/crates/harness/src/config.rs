//! `SuiteConfig` and its TOML form.
//!
//! ```toml
//! seed = 20240611
//! claims = ["cont.*", "disc.harmonic"]
//!
//! [quad]
//! rel_tol = 1e-10
//! abs_tol = 1e-14
//! max_depth = 60
//! max_subdivisions = 50000
//! rule = "gk21"
//! probe_doublings = 20
//!
//! [sequences]
//! max_terms = 4194304
//! hardy_n = 1000000
//! random_count = 200
//! random_support = 50
//! random_bound = 1000
//!
//! [sampling]
//! points = 500
//!
//! [output]
//! path = "report.json"
//! format = "json"
//! ```
//!
//! Every key is optional; unknown keys are errors.

use std::path::{Path, PathBuf};

use glob::Pattern;
use hardy_core::quad::{rule_names, QuadConfig};
use hardy_core::seq_ops::SeqConfig;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("config error: {0}")]
pub struct ConfigError(pub String);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    pub max_subdivisions: usize,
    pub rule: String,
    pub probe_doublings: u32,
}

impl Default for QuadSection {
    fn default() -> Self {
        let q = QuadConfig::default();
        QuadSection {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_depth: q.max_depth,
            max_subdivisions: q.max_subdivisions,
            rule: q.rule,
            probe_doublings: q.probe_doublings,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SequenceSection {
    /// Terms summed before a generated series is reported unconverged.
    pub max_terms: u64,
    /// Horizon `N` of the discrete Hardy ratios.
    pub hardy_n: u64,
    /// Random rational sequences for the exact identities.
    pub random_count: usize,
    pub random_support: usize,
    /// Bound on numerators and denominators of the random entries.
    pub random_bound: i64,
}

impl Default for SequenceSection {
    fn default() -> Self {
        SequenceSection {
            max_terms: SeqConfig::default().max_terms,
            hardy_n: 1_000_000,
            random_count: 200,
            random_support: 50,
            random_bound: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingSection {
    /// Log-spaced points for pointwise checks.
    pub points: usize,
}

impl Default for SamplingSection {
    fn default() -> Self {
        SamplingSection { points: 500 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Glob patterns over claim ids; empty selects everything.
    pub claims: Vec<String>,
    pub quad: QuadSection,
    pub sequences: SequenceSection,
    pub sampling: SamplingSection,
    pub output: OutputSection,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 20240611,
            claims: Vec::new(),
            quad: QuadSection::default(),
            sequences: SequenceSection::default(),
            sampling: SamplingSection::default(),
            output: OutputSection::default(),
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<SuiteConfig, ConfigError> {
        let cfg: SuiteConfig = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<SuiteConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        SuiteConfig::from_toml(&text).map_err(|e| ConfigError(format!("{}: {}", path.display(), e.0)))
    }

    pub fn quad_config(&self) -> QuadConfig {
        QuadConfig {
            rel_tol: self.quad.rel_tol,
            abs_tol: self.quad.abs_tol,
            max_depth: self.quad.max_depth,
            max_subdivisions: self.quad.max_subdivisions,
            rule: self.quad.rule.clone(),
            probe_doublings: self.quad.probe_doublings,
            ..QuadConfig::default()
        }
    }

    pub fn seq_config(&self) -> SeqConfig {
        SeqConfig {
            quad: self.quad_config(),
            max_terms: self.sequences.max_terms,
        }
    }

    pub fn patterns(&self) -> Result<Vec<Pattern>, ConfigError> {
        self.claims
            .iter()
            .flat_map(|p| p.split(','))
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| Pattern::new(p).map_err(|e| ConfigError(format!("claim pattern {p:?}: {e}"))))
            .collect()
    }

    /// Everything that can be rejected before a check runs.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !rule_names().contains(&self.quad.rule.as_str()) {
            return Err(ConfigError(format!(
                "unknown rule {:?}, expected one of {}",
                self.quad.rule,
                rule_names().join(", ")
            )));
        }
        self.quad_config().validate().map_err(|e| ConfigError(e.to_string()))?;
        let s = &self.sequences;
        if s.max_terms < 1024 {
            return Err(ConfigError(format!("sequences.max_terms must be >= 1024, got {}", s.max_terms)));
        }
        if s.hardy_n < 1000 {
            return Err(ConfigError(format!("sequences.hardy_n must be >= 1000, got {}", s.hardy_n)));
        }
        if s.random_count == 0 || s.random_support == 0 || s.random_bound < 1 {
            return Err(ConfigError("random sequence counts and bounds must be positive".into()));
        }
        if self.sampling.points < 2 {
            return Err(ConfigError(format!("sampling.points must be >= 2, got {}", self.sampling.points)));
        }
        self.patterns()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default() {
        assert_eq!(SuiteConfig::from_toml("").unwrap(), SuiteConfig::default());
    }

    #[test]
    fn documented_example_parses() {
        let doc = include_str!("config.rs")
            .lines()
            .skip_while(|l| !l.starts_with("//! ```toml"))
            .skip(1)
            .take_while(|l| !l.starts_with("//! ```"))
            .map(|l| l.trim_start_matches("//!").trim_start())
            .collect::<Vec<_>>()
            .join("\n");
        let cfg = SuiteConfig::from_toml(&doc).unwrap();
        assert_eq!(cfg.claims, ["cont.*", "disc.harmonic"]);
        assert_eq!(cfg.output.format, Format::Json);
    }

    #[test]
    fn bad_configs_are_rejected() {
        for text in [
            "seed = \"x\"",
            "bogus = 1",
            "[quad]\nrel_tol = -1",
            "[quad]\nrule = \"gk7\"",
            "claims = [\"[\"]",
            "[output]\nformat = \"xml\"",
            "[sequences]\nhardy_n = 10",
        ] {
            assert!(SuiteConfig::from_toml(text).is_err(), "{text}");
        }
    }
}

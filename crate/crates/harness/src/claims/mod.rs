//! The claim registry. Each claim checks one statement and yields a
//! [`ClaimRecord`]; ids are stable and grouped by [`Topic`].

mod cont;
mod disc;

use glob::Pattern;
use hardy_core::quad::QuadConfig;
use hardy_core::report::Verdict;
use hardy_core::seq_ops::SeqConfig;
use hardy_core::HardyError;
use rayon::prelude::*;
use serde_json::Value;

use crate::config::{ConfigError, SuiteConfig};
use crate::record::{ClaimRecord, Expected};

/// The statements under verification. Every topic has at least one claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Topic {
    ContOperator,
    ContHardyInequality,
    ExampleF0,
    ContMeanZero,
    ExampleFe,
    ThetaConstruction,
    ContModified,
    ContCharacterization,
    ContEquivalence,
    DiscCesaro,
    DiscHardyInequality,
    DiscMeanZero,
    DiscModified,
    DiscCharacterization,
    DiscEquivalence,
}

impl Topic {
    pub const ALL: [Topic; 15] = [
        Topic::ContOperator,
        Topic::ContHardyInequality,
        Topic::ExampleF0,
        Topic::ContMeanZero,
        Topic::ExampleFe,
        Topic::ThetaConstruction,
        Topic::ContModified,
        Topic::ContCharacterization,
        Topic::ContEquivalence,
        Topic::DiscCesaro,
        Topic::DiscHardyInequality,
        Topic::DiscMeanZero,
        Topic::DiscModified,
        Topic::DiscCharacterization,
        Topic::DiscEquivalence,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Topic::ContOperator => "continuous Hardy operator Qf",
            Topic::ContHardyInequality => "continuous Hardy inequality, sharp constant",
            Topic::ExampleF0 => "example f0 and its transform",
            Topic::ContMeanZero => "integrable Qf forces zero mean",
            Topic::ExampleFe => "example f_e with integral zero",
            Topic::ThetaConstruction => "theta = 1/(1+t)^2",
            Topic::ContModified => "modified operator Hf",
            Topic::ContCharacterization => "Hf integrable iff W(f) finite",
            Topic::ContEquivalence => "two-sided bound for ‖Hf‖ (corrected)",
            Topic::DiscCesaro => "running Cesàro mean",
            Topic::DiscHardyInequality => "discrete Hardy inequality, sharp constant",
            Topic::DiscMeanZero => "summable Γa forces zero sum",
            Topic::DiscModified => "modified Cesàro operator",
            Topic::DiscCharacterization => "Γ̃a summable iff L(a) finite",
            Topic::DiscEquivalence => "two-sided bound for ‖Γ̃a‖ (corrected)",
        }
    }
}

/// Inputs shared by all claims, derived from a [`SuiteConfig`].
#[derive(Clone, Debug)]
pub struct Context {
    pub quad: QuadConfig,
    pub seq: SeqConfig,
    pub seed: u64,
    pub points: usize,
    pub hardy_n: u64,
    pub random_count: usize,
    pub random_support: usize,
    pub random_bound: i64,
}

impl Context {
    pub fn new(cfg: &SuiteConfig) -> Context {
        Context {
            quad: cfg.quad_config(),
            seq: cfg.seq_config(),
            seed: cfg.seed,
            points: cfg.sampling.points,
            hardy_n: cfg.sequences.hardy_n,
            random_count: cfg.sequences.random_count,
            random_support: cfg.sequences.random_support,
            random_bound: cfg.sequences.random_bound,
        }
    }

    /// `points` log-spaced values from `lo` to `hi`.
    pub fn log_points(&self, lo: f64, hi: f64) -> Vec<f64> {
        let n = self.points;
        let (a, b) = (lo.ln(), hi.ln());
        (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
    }
}

/// What a claim check produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub inputs: Value,
    pub values: Value,
    pub expected: Vec<Expected>,
    pub verdict: Verdict,
    pub detail: String,
}

pub trait Claim: Send + Sync {
    fn id(&self) -> &'static str;
    fn topic(&self) -> Topic;
    fn statement(&self) -> &'static str;
    fn check(&self, ctx: &Context) -> Result<Outcome, HardyError>;
}

/// A claim given by a plain function.
pub(crate) struct FnClaim {
    pub id: &'static str,
    pub topic: Topic,
    pub statement: &'static str,
    pub run: fn(&Context) -> Result<Outcome, HardyError>,
}

impl Claim for FnClaim {
    fn id(&self) -> &'static str {
        self.id
    }
    fn topic(&self) -> Topic {
        self.topic
    }
    fn statement(&self) -> &'static str {
        self.statement
    }
    fn check(&self, ctx: &Context) -> Result<Outcome, HardyError> {
        (self.run)(ctx)
    }
}

/// Every registered claim, sorted by id.
pub fn registry() -> Vec<Box<dyn Claim>> {
    let mut all: Vec<Box<dyn Claim>> = cont::claims().into_iter().chain(disc::claims()).collect();
    all.sort_by_key(|c| c.id());
    all
}

pub fn run_claim(claim: &dyn Claim, ctx: &Context) -> ClaimRecord {
    let base = |verdict, detail: String| ClaimRecord {
        id: claim.id().to_string(),
        topic: claim.topic().key().to_string(),
        statement: claim.statement().to_string(),
        inputs: Value::Null,
        values: Value::Null,
        expected: Vec::new(),
        verdict,
        detail,
    };
    match claim.check(ctx) {
        Ok(o) => ClaimRecord {
            inputs: o.inputs,
            values: o.values,
            expected: o.expected,
            ..base(o.verdict, o.detail)
        },
        Err(e) => base(Verdict::Fail, format!("error: {e}")),
    }
}

/// Claims matching any pattern (all of them when there are none).
pub fn select(patterns: &[Pattern]) -> Result<Vec<Box<dyn Claim>>, ConfigError> {
    let all = registry();
    if patterns.is_empty() {
        return Ok(all);
    }
    for p in patterns {
        if !all.iter().any(|c| p.matches(c.id())) {
            return Err(ConfigError(format!("claim pattern {:?} matches no claim", p.as_str())));
        }
    }
    Ok(all.into_iter().filter(|c| patterns.iter().any(|p| p.matches(c.id()))).collect())
}

/// Runs the selected claims in parallel; the result is sorted by id.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<ClaimRecord>, ConfigError> {
    cfg.validate()?;
    let claims = select(&cfg.patterns()?)?;
    let ctx = Context::new(cfg);
    let mut out: Vec<ClaimRecord> = claims.par_iter().map(|c| run_claim(c.as_ref(), &ctx)).collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// A value for a detail line, or `n/a`.
pub(crate) fn show(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

/// Relative-or-absolute closeness.
pub(crate) fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * b.abs() + abs
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    #[test]
    fn every_topic_is_covered_and_ids_are_unique() {
        let all = registry();
        let ids: BTreeSet<_> = all.iter().map(|c| c.id()).collect();
        assert_eq!(ids.len(), all.len(), "duplicate claim ids");
        for t in Topic::ALL {
            assert!(all.iter().any(|c| c.topic() == t), "no claim for {t:?}");
        }
        for c in &all {
            let prefix = c.id().split('.').next().unwrap();
            assert!(prefix == "cont" || prefix == "disc", "{}", c.id());
            assert!(!c.statement().is_empty());
        }
    }

    #[test]
    fn topic_keys_are_distinct() {
        let keys: BTreeSet<_> = Topic::ALL.iter().map(|t| t.key()).collect();
        assert_eq!(keys.len(), Topic::ALL.len());
    }

    #[test]
    fn filters_select_by_glob() {
        let pats = vec![Pattern::new("cont.*").unwrap()];
        let sel = select(&pats).unwrap();
        assert!(!sel.is_empty() && sel.iter().all(|c| c.id().starts_with("cont.")));
        assert!(select(&[Pattern::new("nothing.*").unwrap()]).is_err());
    }
}

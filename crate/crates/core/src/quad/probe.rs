//! Numerical witness for divergent tails.
//!
//! Stage one integrates over the doubling blocks `[M·2^(k-1), M·2^k]`.
//! Stable block integrals mean `∫ g` grows like `c·ln x`; geometrically
//! shrinking ones mean convergence. Anything slower than that is retried on
//! squaring blocks `ln x ∈ [2^(j-1)·s0, 2^j·s0]`, where a `1/(x ln x)` tail
//! shows up as constant blocks.

use serde::Serialize;

use super::{integrate_unchecked, QuadConfig};
use crate::error::Result;
use crate::numeric::sum;

const LOG_SPREAD: f64 = 0.01;
const GEOMETRIC_RATIO: f64 = 0.8;
const WINDOW: usize = 5;
const MAX_LOG_X: f64 = 700.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DivergenceVerdict {
    /// Doubling increments settle at a positive constant.
    #[serde(rename = "DIVERGENT-LOG")]
    DivergentLog,
    /// Squaring increments settle at a positive constant.
    #[serde(rename = "DIVERGENT-LOGLOG")]
    DivergentLogLog,
    /// Squaring increments keep growing.
    #[serde(rename = "DIVERGENT-FASTER")]
    DivergentFaster,
    #[serde(rename = "CONVERGENT")]
    Convergent,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl DivergenceVerdict {
    pub fn is_divergent(self) -> bool {
        matches!(
            self,
            DivergenceVerdict::DivergentLog | DivergenceVerdict::DivergentLogLog | DivergenceVerdict::DivergentFaster
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            DivergenceVerdict::DivergentLog => "DIVERGENT-LOG",
            DivergenceVerdict::DivergentLogLog => "DIVERGENT-LOGLOG",
            DivergenceVerdict::DivergentFaster => "DIVERGENT-FASTER",
            DivergenceVerdict::Convergent => "CONVERGENT",
            DivergenceVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub verdict: DivergenceVerdict,
    pub start: f64,
    /// `∫_M^{M·2^k} g` for `k = 1..K`.
    pub partials: Vec<f64>,
    /// `∫_{M·2^(k-1)}^{M·2^k} g`.
    pub increments: Vec<f64>,
    /// Squaring-stage blocks, empty when stage one decided.
    pub log_blocks: Vec<f64>,
    pub err_est: f64,
}

impl ProbeReport {
    /// Doubling increment at the largest probed scale.
    pub fn last_increment(&self) -> f64 {
        self.increments.last().copied().unwrap_or(0.0)
    }

    pub fn partial_sum(&self) -> f64 {
        self.partials.last().copied().unwrap_or(0.0)
    }

    /// Geometric extrapolation of the remaining tail from the last two
    /// increments; only meaningful for a convergent verdict.
    pub fn extrapolated_tail(&self) -> f64 {
        let n = self.increments.len();
        if n < 2 {
            return f64::INFINITY;
        }
        let (a, b) = (self.increments[n - 2].abs(), self.increments[n - 1].abs());
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let r = b / a;
        if r < 1.0 {
            b * r / (1.0 - r)
        } else {
            f64::INFINITY
        }
    }
}

fn floor(cfg: &QuadConfig) -> f64 {
    (100.0 * cfg.abs_tol).max(1e-12)
}

fn spread(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min) / (sum(xs.iter().copied()) / xs.len() as f64)
}

/// Classifies `∫_M^∞ g` for `g` nonnegative on `[m, ∞)`.
pub fn probe_divergence(g: &dyn Fn(f64) -> f64, m: f64, cfg: &QuadConfig) -> Result<ProbeReport> {
    let k_max = cfg.probe_doublings as usize;
    let fl = floor(cfg);
    let mut increments = Vec::with_capacity(k_max);
    let mut partials = Vec::with_capacity(k_max);
    let mut err = 0.0;
    let mut total = 0.0;
    let mut lo = m;
    for _ in 0..k_max {
        let hi = 2.0 * lo;
        let r = integrate_unchecked(g, lo, hi, &[], cfg)?;
        err += r.err_est;
        total += r.value;
        increments.push(r.value);
        partials.push(total);
        lo = hi;
    }
    let mut report = ProbeReport {
        verdict: DivergenceVerdict::Inconclusive,
        start: m,
        partials,
        increments,
        log_blocks: Vec::new(),
        err_est: err,
    };

    let last = &report.increments[k_max - WINDOW..];
    if last.iter().all(|d| d.abs() <= fl) {
        report.verdict = DivergenceVerdict::Convergent;
        return Ok(report);
    }
    if last.iter().all(|d| *d > fl) && spread(last) <= LOG_SPREAD {
        report.verdict = DivergenceVerdict::DivergentLog;
        return Ok(report);
    }
    if last.windows(2).all(|w| w[0] > 0.0 && w[1] >= 0.0 && w[1] <= GEOMETRIC_RATIO * w[0]) {
        report.verdict = DivergenceVerdict::Convergent;
        return Ok(report);
    }

    // squaring stage in s = ln x
    let h = |s: f64| {
        let x = s.exp();
        g(x) * x
    };
    let s0 = m.ln().max(1.0);
    let mut a = s0;
    while 2.0 * a <= MAX_LOG_X {
        let r = integrate_unchecked(&h, a, 2.0 * a, &[], cfg)?;
        report.err_est += r.err_est;
        report.log_blocks.push(r.value);
        a *= 2.0;
    }
    let b = &report.log_blocks;
    if b.len() < 4 {
        return Ok(report);
    }
    let tail = &b[b.len() - 3..];
    let ratios: Vec<f64> = b[b.len() - 4..].windows(2).map(|w| w[1] / w[0]).collect();
    report.verdict = if tail.iter().all(|x| *x > fl) && ratios.iter().all(|r| (0.9..=1.1).contains(r)) {
        DivergenceVerdict::DivergentLogLog
    } else if tail.iter().all(|x| *x > fl) && ratios.iter().all(|r| *r > 1.1) {
        DivergenceVerdict::DivergentFaster
    } else if tail.iter().all(|x| x.abs() <= fl) || ratios.iter().all(|r| (0.0..=GEOMETRIC_RATIO).contains(r)) {
        DivergenceVerdict::Convergent
    } else {
        DivergenceVerdict::Inconclusive
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_is_log_divergent() {
        let cfg = QuadConfig::default();
        let r = probe_divergence(&|t| 1.0 / (1.0 + t), 1.0, &cfg).unwrap();
        assert_eq!(r.verdict, DivergenceVerdict::DivergentLog);
        assert!((r.last_increment() - 2f64.ln()).abs() < 1e-5);
    }

    #[test]
    fn theta_converges() {
        let cfg = QuadConfig::default();
        let r = probe_divergence(&|t| 1.0 / ((1.0 + t) * (1.0 + t)), 1.0, &cfg).unwrap();
        assert_eq!(r.verdict, DivergenceVerdict::Convergent);
    }

    #[test]
    fn f0_average_increment() {
        let cfg = QuadConfig::default();
        let l = 1.5f64.ln();
        let r = probe_divergence(&|x| l / x, 4.0, &cfg).unwrap();
        assert_eq!(r.verdict, DivergenceVerdict::DivergentLog);
        assert!((r.last_increment() - l * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn loglog_tail() {
        let cfg = QuadConfig::default();
        let r = probe_divergence(&|x: f64| 1.0 / (x * x.ln()), std::f64::consts::E, &cfg).unwrap();
        assert_eq!(r.verdict, DivergenceVerdict::DivergentLogLog);
    }

    #[test]
    fn slow_power_of_log() {
        let cfg = QuadConfig::default();
        let r = probe_divergence(&|x: f64| x.ln().powf(-0.2) / x, std::f64::consts::E, &cfg).unwrap();
        assert_eq!(r.verdict, DivergenceVerdict::DivergentFaster);
        let r = probe_divergence(&|x: f64| x.ln().powf(-3.0) / x, std::f64::consts::E, &cfg).unwrap();
        assert_eq!(r.verdict, DivergenceVerdict::Convergent);
    }

    #[test]
    fn partials_are_monotone_for_nonnegative_g() {
        let cfg = QuadConfig::default();
        let r = probe_divergence(&|x: f64| (x.sin() + 1.0) / x, 1.0, &cfg).unwrap();
        assert!(r.partials.windows(2).all(|w| w[1] >= w[0]));
    }
}

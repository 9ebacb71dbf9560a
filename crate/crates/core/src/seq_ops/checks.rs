use std::f64::consts::LN_2;

use serde::Serialize;

use super::harmonic::EULER_GAMMA;
use super::ops::PreparedSeq;
use super::rational::Rational;
use super::seq::SeqSpec;
use super::series::{SeqConfig, Series};
use crate::error::{HardyError, Result};
use crate::numeric::Neumaier;
use crate::quad::SAFETY;
use crate::report::{Check, Measured, Verdict};

/// Band around `|Σa|·ln 2` for each doubling increment of `Σ|Γa|`.
pub const INCREMENT_BAND: f64 = 0.1;
/// Doubling scales `N = 2^10 … 2^20`.
pub const INCREMENT_SCALES: std::ops::RangeInclusive<u32> = 10..=20;

#[derive(Clone, Debug, Serialize)]
pub struct Increment {
    pub n: u64,
    /// `Σ_{N<n≤2N} |(Γa)_n|`
    pub value: f64,
    pub within_band: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscMeanReport {
    pub sequence: String,
    pub total: Measured,
    pub nonzero_mean: bool,
    /// `|Σa|·ln 2`
    pub expected_increment: Option<f64>,
    pub increments: Vec<Increment>,
    /// `‖Γa‖_ℓ¹` when the mean vanishes and the support is finite.
    pub gamma_l1: Option<Measured>,
    pub verdict: Verdict,
}

/// For `Σa ≠ 0`, `Σ_{n≤N}|Γa_n|` must grow like `|Σa|·ln N`: every doubling
/// increment for `N = 2^10..2^20` lies within 10% of `|Σa|·ln 2`. A zero mean
/// makes no divergence claim.
pub fn disc_mean_check(p: &PreparedSeq) -> Result<DiscMeanReport> {
    let a = p.seq();
    let total = p.total();
    let sigma = total
        .value()
        .ok_or_else(|| HardyError::Domain(format!("Σ a_k of {} is {}", a.name(), total.label())))?;
    let err = total.total_err().unwrap_or(0.0);
    let nonzero = match total {
        Series::Exact(r) => !r.is_zero(),
        _ => sigma.abs() > SAFETY * (err + p.config().quad.abs_tol),
    };
    let mut increments = Vec::new();
    let mut gamma_l1 = None;
    let mut expected = None;
    if nonzero {
        let target = sigma.abs() * LN_2;
        expected = Some(target);
        let last = 2u64 << INCREMENT_SCALES.end();
        let mut prefix = Neumaier::new();
        let mut block = Neumaier::new();
        let mut next = 1u64 << INCREMENT_SCALES.start();
        for n in 1..=last {
            prefix.add(a.term(n));
            if n > next {
                block.add((prefix.value() / n as f64).abs());
            }
            if n == 2 * next {
                let v = block.value();
                increments.push(Increment {
                    n: next,
                    value: v,
                    within_band: (v - target).abs() <= INCREMENT_BAND * target,
                });
                block = Neumaier::new();
                next *= 2;
            }
        }
    } else if let Some(list) = a.list() {
        // Γa vanishes beyond the support
        let mut s = Rational::zero();
        let acc: Rational = list
            .iter()
            .enumerate()
            .map(|(i, x)| {
                s += x;
                (&s * &Rational::recip_int(i as u64 + 1)).abs()
            })
            .sum();
        gamma_l1 = Some(Series::Exact(acc).measured());
    }
    let verdict = Verdict::from_bool(increments.iter().all(|i| i.within_band));
    Ok(DiscMeanReport {
        sequence: a.name().to_string(),
        total: total.measured(),
        nonzero_mean: nonzero,
        expected_increment: expected,
        increments,
        gamma_l1,
        verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscEquivalence {
    pub sequence: String,
    pub l1_mod: Measured,
    pub sum: Measured,
    pub log_weight: Measured,
    /// `(‖Γ̃a‖ + Σa) / (γΣa + L(a))`
    pub ratio: f64,
    pub ratio_err: f64,
}

/// The corrected two-sided ratio for nonnegative `a` with `L(a) < ∞`.
pub fn disc_equivalence_ratio(p: &PreparedSeq) -> Result<DiscEquivalence> {
    let a = p.seq();
    if !p.is_nonnegative() {
        return Err(HardyError::Precondition(format!("{} is not nonnegative", a.name())));
    }
    let need = |s: &Series, what: &str| -> Result<(f64, f64)> {
        match (s.value(), s.total_err()) {
            (Some(v), Some(e)) => Ok((v, e)),
            _ => Err(HardyError::Domain(format!("{what} of {} is {}", a.name(), s.label()))),
        }
    };
    let total = p.total().clone();
    let (sum, sum_err) = need(&total, "Σa")?;
    if sum <= 0.0 {
        return Err(HardyError::Domain(format!("{} vanishes identically", a.name())));
    }
    let lw = p.log_weight()?;
    let (l, l_err) = need(&lw, "L(a)")?;
    let h = p.l1_norm_mod()?;
    let (hv, h_err) = need(&h, "‖Γ̃a‖")?;
    let den = EULER_GAMMA * sum + l;
    let ratio = (hv + sum) / den;
    let ratio_err = (h_err + sum_err) / den + ratio * (EULER_GAMMA * sum_err + l_err) / den;
    Ok(DiscEquivalence {
        sequence: a.name().to_string(),
        l1_mod: h.measured(),
        sum: total.measured(),
        log_weight: lw.measured(),
        ratio,
        ratio_err,
    })
}

pub const DISC_REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct DiscReport {
    pub schema: u32,
    pub sequence: String,
    pub config: SeqConfig,
    pub nonnegative: bool,
    pub exact_mode: bool,
    pub sum: Measured,
    pub l1_mod: Measured,
    pub log_weight: Measured,
    pub j1_sum: Option<Measured>,
    pub j2_sum: Option<Measured>,
    /// `Σ a_k/k`
    pub j1_fubini: Option<Measured>,
    /// `Σ a_k (H_k - 1)`
    pub j2_fubini: Option<Measured>,
    pub equivalence_ratio: Option<f64>,
    pub checks: Vec<Check>,
}

fn same(x: &Series, y: &Series) -> Verdict {
    match (x, y) {
        (Series::Exact(a), Series::Exact(b)) => Verdict::from_bool(a == b),
        (Series::Divergent(_), Series::Divergent(_)) => Verdict::DivergentAsExpected,
        _ if x.is_inconclusive() || y.is_inconclusive() => Verdict::Inconclusive,
        _ => match (x.value(), y.value(), x.total_err(), y.total_err()) {
            (Some(a), Some(b), Some(ea), Some(eb)) => {
                Verdict::from_bool((a - b).abs() <= SAFETY * (ea + eb).max(1e-15 * a.abs().max(1.0)))
            }
            _ => Verdict::Fail,
        },
    }
}

impl DiscReport {
    pub fn build(a: &SeqSpec, cfg: &SeqConfig) -> Result<DiscReport> {
        let p = PreparedSeq::new(a, cfg)?;
        let nonneg = p.is_nonnegative();
        let lw = p.log_weight()?;
        let h = match p.total() {
            Series::Exact(_) | Series::Approx(_) => p.l1_norm_mod()?,
            other => other.clone(),
        };
        let mut checks = Vec::new();
        let (mut j1m, mut j2m, mut f1m, mut f2m) = (None, None, None, None);
        let mut ratio = None;
        if nonneg && !h.is_divergent() {
            let (j1, j2) = (p.j1_sum()?, p.j2_sum()?);
            let (f1, f2) = (p.j1_fubini()?, p.j2_fubini()?);
            checks.push(Check::new(
                "disc.fubini",
                Verdict::all([same(&j1, &f1), same(&j2, &f2)]),
                format!("J1 {} vs {}, J2 {} vs {}", j1.label(), f1.label(), j2.label(), f2.label()),
            ));
            if let (Some(hv), Some(x), Some(y)) = (h.value(), j1.value(), j2.value()) {
                let slack = h.total_err().unwrap_or(0.0) + j1.total_err().unwrap_or(0.0) + j2.total_err().unwrap_or(0.0);
                checks.push(Check::new(
                    "disc.triangle",
                    Verdict::from_bool(hv <= x + y + slack),
                    format!("{hv} <= {x} + {y}"),
                ));
            }
            j1m = Some(j1.measured());
            j2m = Some(j2.measured());
            f1m = Some(f1.measured());
            f2m = Some(f2.measured());
            ratio = disc_equivalence_ratio(&p).ok().map(|r| r.ratio);
        }
        if nonneg {
            let v = match (&lw, &h) {
                (Series::Divergent(_), Series::Divergent(_)) => Verdict::DivergentAsExpected,
                _ if lw.is_inconclusive() || h.is_inconclusive() => Verdict::Inconclusive,
                _ => Verdict::from_bool(lw.value().is_some() && h.value().is_some()),
            };
            checks.push(Check::new(
                "disc.characterization",
                v,
                format!("L(a) {}, ‖Γ̃a‖ {}", lw.label(), h.label()),
            ));
        }
        Ok(DiscReport {
            schema: DISC_REPORT_SCHEMA,
            sequence: a.name().to_string(),
            config: cfg.clone(),
            nonnegative: nonneg,
            exact_mode: a.is_finite_list(),
            sum: p.total().measured(),
            l1_mod: h.measured(),
            log_weight: lw.measured(),
            j1_sum: j1m,
            j2_sum: j2m,
            j1_fubini: f1m,
            j2_fubini: f2m,
            equivalence_ratio: ratio,
            checks,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::catalog::sequence;
    use super::*;

    fn prepared(a: &SeqSpec) -> PreparedSeq<'_> {
        PreparedSeq::new(a, &SeqConfig::default()).unwrap()
    }

    #[test]
    fn lambda_increments_approach_ln2() {
        let a = sequence("lambda").unwrap();
        let r = disc_mean_check(&prepared(&a)).unwrap();
        assert!(r.nonzero_mean);
        assert_eq!(r.increments.len(), 11);
        assert!(r.verdict.is_ok(), "{r:?}");
        let last = r.increments.last().unwrap().value;
        assert!((last - LN_2).abs() < 1e-5, "{last}");
    }

    #[test]
    fn zero_mean_list_has_finite_gamma_norm() {
        let a = sequence("[1,-1]").unwrap();
        let r = disc_mean_check(&prepared(&a)).unwrap();
        assert!(!r.nonzero_mean && r.increments.is_empty());
        assert_eq!(r.gamma_l1.unwrap().exact.as_deref(), Some("1"));
    }

    #[test]
    fn equivalence_needs_finite_log_weight() {
        let a = sequence("em(m=3)").unwrap();
        let r = disc_equivalence_ratio(&prepared(&a)).unwrap();
        let want = (7.0 / 6.0 + 1.0) / (EULER_GAMMA + 4f64.ln());
        assert!((r.ratio - want).abs() < 1e-15);
        let b = sequence("logsq").unwrap();
        assert!(matches!(disc_equivalence_ratio(&prepared(&b)), Err(HardyError::Domain(_))));
        let c = sequence("[1,-1]").unwrap();
        assert!(matches!(disc_equivalence_ratio(&prepared(&c)), Err(HardyError::Precondition(_))));
    }

    #[test]
    fn reports() {
        let cfg = SeqConfig::default();
        let r = DiscReport::build(&sequence("em(m=5)").unwrap(), &cfg).unwrap();
        assert!(r.exact_mode);
        assert!(r.checks.iter().all(|c| c.verdict.is_ok()), "{:?}", r.checks);
        let r = DiscReport::build(&sequence("logsq").unwrap(), &cfg).unwrap();
        let ch = r.checks.iter().find(|c| c.claim == "disc.characterization").unwrap();
        assert_eq!(ch.verdict, Verdict::DivergentAsExpected);
        let r = DiscReport::build(&sequence("power(alpha=2)").unwrap(), &cfg).unwrap();
        assert!(r.checks.iter().all(|c| c.verdict.is_ok()), "{:?}", r.checks);
    }
}

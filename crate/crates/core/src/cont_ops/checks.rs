use std::f64::consts::LN_2;

use serde::Serialize;

use super::norms::{
    exact_or, is_nonnegative, l1_norm, l1_norm_h, log_weight_norm, lp_pair, split_i1, split_i2, total_integral,
    weighted_i1_direct, weighted_i2_direct,
};
use super::prepared::Prepared;
use crate::error::{HardyError, Result};
use crate::funcspace::{Functional, TestFunction};
use crate::quad::{probe_divergence, Integral, ProbeReport, QuadConfig, SAFETY};
use crate::report::{Check, Measured, Verdict};

/// Relative distance from `x·Qf(x)` to `∫f` accepted at the largest sample.
pub const MEAN_LIMIT_TOL: f64 = 1e-6;
/// Band around `|∫f|·ln 2` for the last doubling increment of `∫|Qf|`.
pub const INCREMENT_BAND: f64 = 0.1;

fn agree(a: &Integral, b: &Integral, cfg: &QuadConfig) -> Option<(bool, f64)> {
    let (ra, rb) = (a.finite()?, b.finite()?);
    let gap = (ra.value - rb.value).abs();
    let allowed = SAFETY * (ra.total_err() + rb.total_err()).max(cfg.abs_tol);
    Some((gap <= allowed, gap))
}

#[derive(Clone, Debug, Serialize)]
pub struct FubiniReport {
    pub function: String,
    pub i1_iterated: Measured,
    pub i1_direct: Measured,
    pub i2_iterated: Measured,
    pub i2_direct: Measured,
    pub i1_gap: Option<f64>,
    pub i2_gap: Option<f64>,
    pub verdict: Verdict,
}

/// `I₁ = ∫|f| ln(1+1/t)` and `I₂ = ∫|f| ln(1+t)`, each side computed
/// independently; they must agree within ten times the combined error.
pub fn fubini_check_cont(f: &TestFunction, cfg: &QuadConfig) -> Result<FubiniReport> {
    let abs = f.abs();
    let p = Prepared::new(&abs, cfg)?;
    let (i1, i1d) = (split_i1(&p)?, weighted_i1_direct(&p)?);
    let (i2, i2d) = (split_i2(&p)?, weighted_i2_direct(&p)?);
    let c1 = agree(&i1, &i1d, cfg);
    let c2 = agree(&i2, &i2d, cfg);
    let verdict = match (c1, c2) {
        (Some((a, _)), Some((b, _))) => Verdict::from_bool(a && b),
        _ if [&i1, &i1d, &i2, &i2d].iter().any(|i| i.is_inconclusive()) => Verdict::Inconclusive,
        _ => Verdict::Fail,
    };
    Ok(FubiniReport {
        function: f.name().to_string(),
        i1_iterated: i1.measured(),
        i1_direct: i1d.measured(),
        i2_iterated: i2.measured(),
        i2_direct: i2d.measured(),
        i1_gap: c1.map(|c| c.1),
        i2_gap: c2.map(|c| c.1),
        verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanLimitReport {
    pub function: String,
    pub xs: Vec<f64>,
    /// `x·Qf(x) = ∫_0^x f`
    pub x_qf: Vec<f64>,
    pub limit_estimate: f64,
    pub total_integral: f64,
    /// `|limit_estimate - total| ≤ MEAN_LIMIT_TOL·max(|total|, 1)`.
    pub limit_matches_total: bool,
    /// Probe of `∫|Qf|`, run when the total is nonzero.
    pub probe: Option<ProbeReport>,
    /// `|∫f|·ln 2`, the increment a `DIVERGENT-LOG` verdict should settle at.
    pub expected_increment: Option<f64>,
    pub increment_within_band: Option<bool>,
    pub verdict: Verdict,
}

/// Samples `x·Qf(x)` over `[1, 10⁶]`; for a nonzero mean, asks the probe
/// whether `∫|Qf|` diverges logarithmically at rate `|∫f|·ln 2` per doubling.
pub fn mean_limit_check(p: &Prepared) -> Result<MeanLimitReport> {
    let total = p.require_total()?;
    let xs: Vec<f64> = (0..=12).map(|k| 10f64.powf(k as f64 / 2.0)).collect();
    let x_qf = xs.iter().map(|&x| p.cumulative(x)).collect::<Result<Vec<_>>>()?;
    let limit = *x_qf.last().unwrap();
    let limit_matches_total = (limit - total).abs() <= MEAN_LIMIT_TOL * total.abs().max(1.0);

    let nonzero = total.abs() > SAFETY * (p.total_err() + p.config().abs_tol);
    let (probe, expected, within) = if nonzero {
        let m = p.function().breakpoints().last().copied().unwrap_or(1.0).max(1.0);
        let g = |x: f64| p.q(x).map_or(f64::NAN, f64::abs);
        let probe = probe_divergence(&g, m, p.config())?;
        let expected = total.abs() * LN_2;
        let within = (probe.last_increment() - expected).abs() <= INCREMENT_BAND * expected;
        (Some(probe), Some(expected), Some(within))
    } else {
        (None, None, None)
    };
    let verdict = match &probe {
        Some(pr) => Verdict::from_bool(
            limit_matches_total && pr.verdict == crate::quad::DivergenceVerdict::DivergentLog && within == Some(true),
        ),
        None => Verdict::from_bool(limit_matches_total),
    };
    Ok(MeanLimitReport {
        function: p.function().name().to_string(),
        xs,
        x_qf,
        limit_estimate: limit,
        total_integral: total,
        limit_matches_total,
        probe,
        expected_increment: expected,
        increment_within_band: within,
        verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceRatio {
    pub h1: Measured,
    pub l1: Measured,
    pub w: Measured,
    /// `(‖Hf‖₁ + ‖f‖₁) / W(f)`
    pub ratio: f64,
}

/// The two-sided ratio `(‖Hf‖₁ + ‖f‖₁)/W(f)` for nonnegative `f`.
pub fn equivalence_ratio(p: &Prepared) -> Result<EquivalenceRatio> {
    if !is_nonnegative(p) {
        return Err(HardyError::Precondition(format!("{} is not nonnegative", p.function().name())));
    }
    let w = exact_or(p, Functional::WeightedNorm, || log_weight_norm(p))?;
    let wv = w
        .value()
        .ok_or_else(|| HardyError::Domain(format!("W({}) is not finite", p.function().name())))?;
    if wv <= 0.0 {
        return Err(HardyError::Domain(format!("W({}) = 0", p.function().name())));
    }
    let h1 = l1_norm_h(p)?;
    let hv = h1
        .value()
        .ok_or_else(|| HardyError::Domain(format!("‖H{}‖₁ is not finite", p.function().name())))?;
    let l1 = p.require_l1()?;
    Ok(EquivalenceRatio {
        h1: h1.measured(),
        l1: Measured::exact(l1),
        w: w.measured(),
        ratio: (hv + l1) / wv,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HardyRatio {
    pub exponent: f64,
    pub numerator: Measured,
    pub denominator: Measured,
    pub ratio: Option<f64>,
    /// `(p/(p-1))^p`
    pub bound: f64,
    pub verdict: Verdict,
}

/// `∫(Qf)^p / ∫f^p` against the sharp constant `(p/(p-1))^p`.
pub fn cont_hardy_ratio(p: &Prepared, exponent: f64) -> Result<HardyRatio> {
    if !(exponent > 1.0 && exponent.is_finite()) {
        return Err(HardyError::Parameter(format!("p must be in (1, inf), got {exponent}")));
    }
    let (num, den) = lp_pair(p, exponent)?;
    let bound = (exponent / (exponent - 1.0)).powf(exponent);
    let (ratio, verdict) = match (num.finite(), den.finite()) {
        (Some(n), Some(d)) if d.value > 0.0 => {
            let r = n.value / d.value;
            let slack = (n.total_err() + r * d.total_err()) / d.value;
            (Some(r), Verdict::from_bool(r <= bound + slack))
        }
        // a divergent numerator with a finite denominator contradicts the
        // inequality
        (None, Some(_)) => (None, Verdict::Fail),
        _ => (None, Verdict::Inconclusive),
    };
    Ok(HardyRatio {
        exponent,
        numerator: num.measured(),
        denominator: den.measured(),
        ratio,
        bound,
        verdict,
    })
}

/// Every continuous functional of one function, with its verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct ContReport {
    pub schema: u32,
    pub function: String,
    pub tolerances: QuadConfig,
    pub nonnegative: bool,
    pub total_integral: Measured,
    pub l1_norm: Measured,
    pub weighted_norm: Measured,
    pub h_l1_norm: Measured,
    pub i1: Measured,
    pub i2: Measured,
    pub equivalence_ratio: Option<f64>,
    pub checks: Vec<Check>,
}

pub const CONT_REPORT_SCHEMA: u32 = 1;

impl ContReport {
    pub fn build(f: &TestFunction, cfg: &QuadConfig) -> Result<ContReport> {
        let p = Prepared::new(f, cfg)?;
        let nonneg = is_nonnegative(&p);
        let total = exact_or(&p, Functional::TotalIntegral, || total_integral(&p))?;
        let l1 = exact_or(&p, Functional::L1Norm, || l1_norm(&p))?;
        let w = exact_or(&p, Functional::WeightedNorm, || log_weight_norm(&p))?;
        let h1 = if p.total().is_some() && p.l1().is_some() {
            l1_norm_h(&p)?
        } else {
            Integral::Inconclusive {
                end: crate::quad::End::Tail,
                probe: probe_placeholder(),
            }
        };
        let fub = fubini_check_cont(f, cfg)?;
        let i1 = fub.i1_iterated.clone();
        let i2 = fub.i2_iterated.clone();

        let mut checks = vec![Check::new(
            "cont.fubini",
            fub.verdict,
            format!("I1 gap {}, I2 gap {}", gap(fub.i1_gap), gap(fub.i2_gap)),
        )];
        // ‖Hf‖₁ ≤ I₁ + I₂ whenever the weighted norm is finite
        if let (Some(h), Some(a), Some(b)) = (h1.finite(), i1.value, i2.value) {
            let slack = h.total_err() + i1.err.unwrap_or(0.0) + i2.err.unwrap_or(0.0);
            checks.push(Check::new(
                "cont.triangle",
                Verdict::from_bool(h.value <= a + b + slack),
                format!("{} <= {} + {}", h.value, a, b),
            ));
        }
        // finiteness of W and of ‖Hf‖₁ coincide for nonnegative f
        if nonneg {
            let v = match (w.value().is_some(), &h1) {
                (true, Integral::Finite(_)) => Verdict::Pass,
                (false, Integral::Divergent { .. }) => Verdict::DivergentAsExpected,
                (_, Integral::Inconclusive { .. }) => Verdict::Inconclusive,
                (false, _) if w.is_inconclusive() => Verdict::Inconclusive,
                _ => Verdict::Fail,
            };
            checks.push(Check::new(
                "cont.characterization",
                v,
                format!("W {}, ‖Hf‖₁ {}", w.verdict_label(), h1.verdict_label()),
            ));
        }
        let ratio = if nonneg {
            match (h1.value(), w.value(), p.l1()) {
                (Some(h), Some(wv), Some(l)) if wv > 0.0 => Some((h + l) / wv),
                _ => None,
            }
        } else {
            None
        };
        Ok(ContReport {
            schema: CONT_REPORT_SCHEMA,
            function: f.name().to_string(),
            tolerances: cfg.clone(),
            nonnegative: nonneg,
            total_integral: total.measured(),
            l1_norm: l1.measured(),
            weighted_norm: w.measured(),
            h_l1_norm: h1.measured(),
            i1,
            i2,
            equivalence_ratio: ratio,
            checks,
        })
    }
}

fn probe_placeholder() -> ProbeReport {
    ProbeReport {
        verdict: crate::quad::DivergenceVerdict::Inconclusive,
        start: 0.0,
        partials: Vec::new(),
        increments: Vec::new(),
        log_blocks: Vec::new(),
        err_est: 0.0,
    }
}

fn gap(g: Option<f64>) -> String {
    g.map_or_else(|| "n/a".to_string(), |x| format!("{x:.3e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::catalog;

    fn prep(name: &str) -> (TestFunction, QuadConfig) {
        (catalog(name).unwrap(), QuadConfig::default())
    }

    #[test]
    fn theta_report() {
        let (f, cfg) = prep("theta");
        let r = ContReport::build(&f, &cfg).unwrap();
        assert!(r.h_l1_norm.value.unwrap() < 1e-10, "{:?}", r.h_l1_norm);
        assert!((r.weighted_norm.value.unwrap() - 2.0).abs() < 1e-9);
        assert!(r.checks.iter().all(|c| c.verdict.is_ok()), "{:?}", r.checks);
        // W from quadrature too
        let p = Prepared::new(&f, &cfg).unwrap();
        assert!((log_weight_norm(&p).unwrap().value().unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn f0_report() {
        let (f, cfg) = prep("f0");
        let r = ContReport::build(&f, &cfg).unwrap();
        assert!((r.h_l1_norm.value.unwrap() - 0.7250247816443035).abs() < 1e-9, "{:?}", r.h_l1_norm);
        assert!(r.checks.iter().all(|c| c.verdict.is_ok()), "{:?}", r.checks);
    }

    #[test]
    fn fubini_holds_for_positive_cases() {
        let cfg = QuadConfig::default();
        for name in ["theta", "f0", "power_tail(beta=2)", "power_tail(beta=3)"] {
            let r = fubini_check_cont(&catalog(name).unwrap(), &cfg).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{name}: {r:?}");
        }
    }

    #[test]
    fn log_tail_is_characterized_as_divergent() {
        let (f, cfg) = prep("log_tail(beta=1.5)");
        let r = ContReport::build(&f, &cfg).unwrap();
        let c = r.checks.iter().find(|c| c.claim == "cont.characterization").unwrap();
        assert_eq!(c.verdict, Verdict::DivergentAsExpected, "{c:?}");
    }

    #[test]
    fn mean_limit_f0_and_theta() {
        let cfg = QuadConfig::default();
        for (name, m) in [("f0", 1.5f64.ln()), ("theta", 1.0), ("2*theta", 2.0)] {
            let p = Prepared::new(&catalog(name).unwrap(), &cfg).unwrap();
            let r = mean_limit_check(&p).unwrap();
            assert!((r.total_integral - m).abs() < 1e-12);
            assert_eq!(r.verdict, Verdict::Pass, "{name}: {r:?}");
        }
    }

    #[test]
    fn hardy_ratio_below_constant() {
        let cfg = QuadConfig::default();
        let p = Prepared::new(&catalog("theta").unwrap(), &cfg).unwrap();
        for e in [1.5, 2.0, 3.0] {
            let r = cont_hardy_ratio(&p, e).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
        assert!(cont_hardy_ratio(&p, 1.0).is_err());
    }

    #[test]
    fn equivalence_ratio_of_power_tail() {
        let cfg = QuadConfig::default();
        let p = Prepared::new(&catalog("power_tail(beta=2)").unwrap(), &cfg).unwrap();
        let r = equivalence_ratio(&p).unwrap();
        assert!(r.ratio.is_finite() && r.ratio > 0.0, "{r:?}");
    }
}

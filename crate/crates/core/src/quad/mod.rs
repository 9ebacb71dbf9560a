//! Adaptive quadrature on `(0, ∞)`.
//!
//! Finite intervals use global adaptive bisection with an embedded
//! Gauss–Kronrod pair. Improper integrals are split at 1: the tail is cut at
//! the first doubling point where the declared envelope certifies the
//! remainder, and `(0, 1]` is either integrated directly or, when the origin
//! envelope is unbounded, mapped to a tail by `u = 1/t`. Without an
//! integrable envelope the integral goes to [`probe_divergence`] instead.

mod probe;
mod rules;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::envelope::Envelope;
use crate::error::{HardyError, Result};
use crate::numeric::Neumaier;
use crate::report::Measured;

pub use probe::{probe_divergence, DivergenceVerdict, ProbeReport};
pub use rules::{rule, rule_names, PanelEstimate, QuadRule, DEFAULT_RULE};

/// Slack between the requested tolerance and what `converged` certifies.
pub const SAFETY: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bisection depth limit per initial panel.
    pub max_depth: u32,
    /// Total bisection budget per integral.
    pub max_subdivisions: usize,
    pub rule: String,
    /// Truncation policy: the tail is cut at the first point `start·2^k`
    /// where the envelope remainder is below the target, but never beyond
    /// this. Reaching it leaves the result unconverged.
    pub max_tail_cut: f64,
    /// Doubling steps `K` of the divergence probe.
    pub probe_doublings: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_depth: 60,
            max_subdivisions: 50_000,
            rule: DEFAULT_RULE.to_string(),
            max_tail_cut: 2f64.powi(1000),
            probe_doublings: 20,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(HardyError::Parameter(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0) {
            return Err(HardyError::Parameter(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if self.max_depth < 10 {
            return Err(HardyError::Parameter(format!("max_depth must be >= 10, got {}", self.max_depth)));
        }
        if self.probe_doublings < 6 {
            return Err(HardyError::Parameter("probe_doublings must be >= 6".into()));
        }
        rule(&self.rule)?;
        Ok(())
    }

    pub fn with_tol(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_est: f64,
    /// Certified bound on the discarded tail(s).
    pub tail_bound: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

impl QuadResult {
    fn new(value: f64, err_est: f64, tail_bound: f64, subdivisions: usize, cfg: &QuadConfig) -> Self {
        QuadResult {
            value,
            err_est,
            tail_bound,
            subdivisions,
            converged: err_est + tail_bound <= cfg.target(value) * SAFETY,
        }
    }

    fn zero() -> Self {
        QuadResult {
            value: 0.0,
            err_est: 0.0,
            tail_bound: 0.0,
            subdivisions: 0,
            converged: true,
        }
    }

    /// Total error budget: quadrature estimate plus tail bound.
    pub fn total_err(&self) -> f64 {
        self.err_est + self.tail_bound
    }

    /// Sum of two independent pieces of one integral.
    pub fn combine(&self, other: &QuadResult, cfg: &QuadConfig) -> QuadResult {
        let mut r = QuadResult::new(
            self.value + other.value,
            self.err_est + other.err_est,
            self.tail_bound + other.tail_bound,
            self.subdivisions + other.subdivisions,
            cfg,
        );
        r.converged &= self.converged && other.converged;
        r
    }
}

/// Which end of the half-line an improper part belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Origin,
    Tail,
}

/// Value of an improper integral, or the probe evidence against one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Integral {
    Finite(QuadResult),
    Divergent { end: End, probe: ProbeReport },
    Inconclusive { end: End, probe: ProbeReport },
}

impl Integral {
    pub fn finite(&self) -> Option<&QuadResult> {
        match self {
            Integral::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.finite().map(|r| r.value)
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Integral::Divergent { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Integral::Inconclusive { .. })
    }

    pub fn measured(&self) -> Measured {
        match self {
            Integral::Finite(r) => Measured::approx(r.value, r.total_err(), r.converged),
            _ => Measured::missing(self.verdict_label()),
        }
    }

    pub fn verdict_label(&self) -> &'static str {
        match self {
            Integral::Finite(_) => "FINITE",
            Integral::Divergent { probe, .. } => probe.verdict.label(),
            Integral::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

/// Declared behaviour of a half-line integrand.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfLine {
    /// Bounds `s ↦ |g(1/s)|` for `s ≥ origin.from()`.
    pub origin: Envelope,
    /// Bounds `|g(t)|` for `t ≥ tail.from()`.
    pub tail: Envelope,
    /// Points where the integrand is not smooth.
    pub breakpoints: Vec<f64>,
}

impl HalfLine {
    pub fn new(origin: Envelope, tail: Envelope, breakpoints: Vec<f64>) -> Self {
        let mut bp: Vec<f64> = breakpoints.into_iter().filter(|b| *b > 0.0 && b.is_finite()).collect();
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        HalfLine {
            origin,
            tail,
            breakpoints: bp,
        }
    }

    /// The description of `u ↦ g(1/u)/u²`, whose half-line integral is the same.
    pub fn mirrored(&self) -> HalfLine {
        HalfLine::new(
            self.tail.mul_power(2.0),
            self.origin.mul_power(-2.0),
            self.breakpoints.iter().map(|b| 1.0 / b).collect(),
        )
    }
}

struct Panel {
    a: f64,
    b: f64,
    est: PanelEstimate,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // worst error first; ties broken by position so the order is total
    fn cmp(&self, other: &Self) -> Ordering {
        self.est
            .err
            .total_cmp(&other.est.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Sorted cut list `a = c₀ < … < c_n = b` including interior breakpoints.
fn cuts(a: f64, b: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut c = vec![a];
    c.extend(breakpoints.iter().copied().filter(|x| *x > a && *x < b));
    c.push(b);
    c.sort_by(f64::total_cmp);
    c.dedup();
    c
}

/// Global adaptive bisection over the initial panels `cuts[i]..cuts[i+1]`.
fn adaptive(g: &dyn Fn(f64) -> f64, cuts: &[f64], cfg: &QuadConfig) -> Result<(f64, f64, usize)> {
    let rule = rule(&cfg.rule)?;
    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let est = rule.apply(g, w[0], w[1])?;
        value += est.value;
        err += est.err;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            est,
            depth: 0,
        });
    }
    let mut frozen = Vec::new();
    let mut subdivisions = 0;
    while err > cfg.target(value) && subdivisions < cfg.max_subdivisions {
        let Some(p) = heap.pop() else { break };
        let mid = 0.5 * (p.a + p.b);
        if p.depth >= cfg.max_depth || mid <= p.a || mid >= p.b {
            frozen.push(p);
            continue;
        }
        let l = rule.apply(g, p.a, mid)?;
        let r = rule.apply(g, mid, p.b)?;
        value += l.value + r.value - p.est.value;
        err = (err + l.err + r.err - p.est.err).max(0.0);
        subdivisions += 1;
        heap.push(Panel {
            a: p.a,
            b: mid,
            est: l,
            depth: p.depth + 1,
        });
        heap.push(Panel {
            a: mid,
            b: p.b,
            est: r,
            depth: p.depth + 1,
        });
    }
    // final sums in interval order, independent of refinement history
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = panels.iter().map(|p| p.est.value).collect::<Neumaier>().value();
    let err = panels.iter().map(|p| p.est.err).collect::<Neumaier>().value();
    Ok((value, err, subdivisions))
}

/// `∫_a^b g` for `0 < a < b < ∞`; panels never straddle `breakpoints`.
pub fn integrate(
    g: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(HardyError::Precondition(format!(
            "integrate needs 0 < a < b < inf, got [{a}, {b}]"
        )));
    }
    cfg.validate()?;
    integrate_unchecked(g, a, b, breakpoints, cfg)
}

pub(crate) fn integrate_unchecked(
    g: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let (value, err, n) = adaptive(g, &cuts(a, b, breakpoints), cfg)?;
    Ok(QuadResult::new(value, err, 0.0, n, cfg))
}

enum TailPart {
    Finite(QuadResult),
    Probed(ProbeReport),
}

/// `∫_start^∞ g` with `env` bounding `|g|` beyond `env.from()`.
fn integrate_tail(
    g: &dyn Fn(f64) -> f64,
    start: f64,
    breakpoints: &[f64],
    env: &Envelope,
    cfg: &QuadConfig,
) -> Result<TailPart> {
    let last_break = breakpoints.iter().copied().filter(|b| *b > start).fold(start, f64::max);
    if !env.is_integrable() {
        let m = last_break.max(env.from());
        let probe = probe_divergence(g, m, cfg)?;
        if probe.verdict != DivergenceVerdict::Convergent {
            return Ok(TailPart::Probed(probe));
        }
        // convergent by the probe but with no certificate: report the
        // partial integral and leave it unconverged
        let head = integrate_unchecked(g, start, m, breakpoints, cfg)?;
        let mut r = QuadResult::new(
            head.value + probe.partial_sum(),
            head.err_est + probe.err_est,
            probe.extrapolated_tail(),
            head.subdivisions,
            cfg,
        );
        r.converged = false;
        return Ok(TailPart::Finite(r));
    }

    let rule = rule(&cfg.rule)?;
    let mut cut_at;
    let tail_bound;
    if env.is_zero() {
        cut_at = env.from().max(start);
        tail_bound = 0.0;
    } else {
        // march over doubling panels until the remainder is small against
        // a rough estimate of the integral so far
        let mut rough = 0.0;
        let mut p = start;
        loop {
            let next = 2.0 * p;
            rough += rule.apply(g, p, next)?.value;
            p = next;
            if p >= last_break {
                if let Some(rem) = env.remainder(p) {
                    if rem <= cfg.target(rough) {
                        cut_at = p;
                        tail_bound = rem;
                        break;
                    }
                }
            }
            if p >= cfg.max_tail_cut {
                cut_at = p;
                tail_bound = env.remainder(p).unwrap_or(f64::INFINITY);
                break;
            }
        }
    }
    cut_at = cut_at.max(last_break);
    if cut_at <= start {
        return Ok(TailPart::Finite(QuadResult::zero()));
    }
    let mut pts: Vec<f64> = breakpoints.to_vec();
    let mut p = start;
    while p < cut_at {
        pts.push(p);
        p *= 2.0;
    }
    let (value, err, n) = adaptive(g, &cuts(start, cut_at, &pts), cfg)?;
    Ok(TailPart::Finite(QuadResult::new(value, err, tail_bound, n, cfg)))
}

fn origin_part(g: &dyn Fn(f64) -> f64, x: f64, spec: &HalfLine, cfg: &QuadConfig) -> Result<TailPart> {
    let lower: Vec<f64> = spec.breakpoints.iter().copied().filter(|b| *b < x).collect();
    if spec.origin.is_bounded() && !spec.origin.is_zero() {
        return Ok(TailPart::Finite(integrate_unchecked(g, 0.0, x, &lower, cfg)?));
    }
    // divide twice: u² overflows past 2^512
    let h = |u: f64| g(1.0 / u) / u / u;
    let mirrored: Vec<f64> = lower.iter().map(|b| 1.0 / b).collect();
    integrate_tail(&h, 1.0 / x, &mirrored, &spec.origin.mul_power(-2.0), cfg)
}

fn tail_part(g: &dyn Fn(f64) -> f64, x: f64, spec: &HalfLine, cfg: &QuadConfig) -> Result<TailPart> {
    let upper: Vec<f64> = spec.breakpoints.iter().copied().filter(|b| *b > x).collect();
    integrate_tail(g, x, &upper, &spec.tail, cfg)
}

fn check_point(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(HardyError::Domain(format!("split point must be positive and finite, got {x}")))
    }
}

/// `∫_0^x g`.
pub fn integrate_to(g: &dyn Fn(f64) -> f64, x: f64, spec: &HalfLine, cfg: &QuadConfig) -> Result<Integral> {
    check_point(x)?;
    cfg.validate()?;
    Ok(match origin_part(g, x, spec, cfg)? {
        TailPart::Finite(r) => Integral::Finite(r),
        TailPart::Probed(probe) => probed(End::Origin, probe),
    })
}

/// `∫_x^∞ g`.
pub fn integrate_from(g: &dyn Fn(f64) -> f64, x: f64, spec: &HalfLine, cfg: &QuadConfig) -> Result<Integral> {
    check_point(x)?;
    cfg.validate()?;
    Ok(match tail_part(g, x, spec, cfg)? {
        TailPart::Finite(r) => Integral::Finite(r),
        TailPart::Probed(probe) => probed(End::Tail, probe),
    })
}

/// `∫_0^∞ g`, with a divergence verdict when an end cannot be certified.
pub fn integrate_halfline(g: &dyn Fn(f64) -> f64, spec: &HalfLine, cfg: &QuadConfig) -> Result<Integral> {
    cfg.validate()?;
    let left = match origin_part(g, 1.0, spec, cfg)? {
        TailPart::Finite(r) => r,
        TailPart::Probed(probe) => return Ok(probed(End::Origin, probe)),
    };
    let right = match tail_part(g, 1.0, spec, cfg)? {
        TailPart::Finite(r) => r,
        TailPart::Probed(probe) => return Ok(probed(End::Tail, probe)),
    };
    Ok(Integral::Finite(left.combine(&right, cfg)))
}

fn probed(end: End, probe: ProbeReport) -> Integral {
    if probe.verdict.is_divergent() {
        Integral::Divergent { end, probe }
    } else {
        Integral::Inconclusive { end, probe }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(t: f64) -> f64 {
        1.0 / ((1.0 + t) * (1.0 + t))
    }

    fn theta_line() -> HalfLine {
        HalfLine::new(Envelope::single(1.0, 0.0, 0.0), Envelope::single(1.0, -2.0, 0.0), vec![])
    }

    #[test]
    fn finite_theta() {
        let cfg = QuadConfig::default();
        let r = integrate(&theta, 0.001, 1000.0, &[], &cfg).unwrap();
        let exact = 1000.0 / 1001.0 - 0.001 / 1.001;
        assert!((r.value - exact).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn rejects_empty_interval() {
        let cfg = QuadConfig::default();
        assert!(matches!(
            integrate(&theta, 1.0, 1.0, &[], &cfg),
            Err(HardyError::Precondition(_))
        ));
    }

    #[test]
    fn nan_is_an_evaluation_error() {
        let cfg = QuadConfig::default();
        let r = integrate(&|t: f64| (t - 2.0).ln(), 1.0, 3.0, &[], &cfg);
        assert!(matches!(r, Err(HardyError::Evaluation { .. })));
    }

    #[test]
    fn jump_at_breakpoint() {
        let cfg = QuadConfig::default();
        let f = |t: f64| if t <= 2.0 { 1.0 / t } else { 0.0 };
        let r = integrate(&f, 1.0, 3.0, &[2.0], &cfg).unwrap();
        assert!((r.value - 2f64.ln()).abs() < 1e-13);
        assert!(r.subdivisions == 0);
    }

    #[test]
    fn halfline_theta() {
        let cfg = QuadConfig::default();
        let r = integrate_halfline(&theta, &theta_line(), &cfg).unwrap();
        let r = r.finite().unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
        assert!(r.converged);
        assert!(r.tail_bound > 0.0);
    }

    #[test]
    fn halfline_log_weighted_theta() {
        let cfg = QuadConfig::default();
        let spec = HalfLine::new(
            Envelope::single(1.0, 0.0, 0.0),
            Envelope::single(1.0, -2.0, 0.0).mul_log_plus(2f64.ln()),
            vec![],
        );
        let g = |t: f64| theta(t) * t.ln_1p();
        let r = integrate_halfline(&g, &spec, &cfg).unwrap();
        assert!((r.value().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn singular_origin_uses_substitution() {
        let cfg = QuadConfig::default();
        // t^-1/2 on (0,1]
        let g = |t: f64| if t <= 1.0 { t.powf(-0.5) } else { 0.0 };
        let spec = HalfLine::new(Envelope::single(1.0, 0.5, 0.0), Envelope::zero(1.0), vec![1.0]);
        let r = integrate_halfline(&g, &spec, &cfg).unwrap();
        let r = r.finite().unwrap();
        assert!((r.value - 2.0).abs() <= r.total_err(), "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn harmonic_tail_is_divergent() {
        let cfg = QuadConfig::default();
        let spec = HalfLine::new(Envelope::single(1.0, 0.0, 0.0), Envelope::single(1.0, -1.0, 0.0), vec![]);
        let r = integrate_halfline(&|t: f64| 1.0 / (1.0 + t), &spec, &cfg).unwrap();
        assert!(r.is_divergent());
        assert_eq!(r.verdict_label(), "DIVERGENT-LOG");
    }

    #[test]
    fn mirrored_spec_gives_same_integral() {
        let cfg = QuadConfig::default();
        let spec = theta_line();
        let a = integrate_halfline(&theta, &spec, &cfg).unwrap();
        let h = |u: f64| theta(1.0 / u) / (u * u);
        let b = integrate_halfline(&h, &spec.mirrored(), &cfg).unwrap();
        let (a, b) = (a.finite().unwrap(), b.finite().unwrap());
        assert!((a.value - b.value).abs() <= 10.0 * (a.total_err() + b.total_err()));
    }

    #[test]
    fn config_validation() {
        let mut cfg = QuadConfig::default();
        cfg.max_depth = 5;
        assert!(cfg.validate().is_err());
        let mut cfg = QuadConfig::default();
        cfg.rule = "trapezoid".into();
        assert!(matches!(cfg.validate(), Err(HardyError::Lookup(_))));
    }
}

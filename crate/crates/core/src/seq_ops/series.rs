//! Infinite sums with integral-test tails.

use serde::Serialize;

use super::rational::Rational;
use crate::envelope::Envelope;
use crate::error::Result;
use crate::numeric::Neumaier;
use crate::quad::{integrate_from, probe_divergence, DivergenceVerdict, HalfLine, Integral, ProbeReport, QuadConfig};
use crate::report::Measured;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeqConfig {
    /// Tolerances, and the engine for integral-test tails and probes.
    pub quad: QuadConfig,
    /// Most terms summed before a generator sum is reported unconverged.
    pub max_terms: u64,
}

impl Default for SeqConfig {
    fn default() -> Self {
        SeqConfig {
            quad: QuadConfig::default(),
            max_terms: 1 << 22,
        }
    }
}

impl SeqConfig {
    pub(crate) fn target(&self, v: f64) -> f64 {
        self.quad.target(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    /// Rounding plus tail-quadrature error.
    pub err_est: f64,
    /// Bound on the error of the tail estimate.
    pub tail_bound: f64,
    /// Terms summed explicitly.
    pub terms: u64,
    pub converged: bool,
}

impl SeriesResult {
    pub fn total_err(&self) -> f64 {
        self.err_est + self.tail_bound
    }
}

/// A sum: exact, approximate with bounds, or the evidence it has none.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Series {
    Exact(Rational),
    Approx(SeriesResult),
    Divergent(ProbeReport),
    Inconclusive(String),
}

impl Series {
    pub fn value(&self) -> Option<f64> {
        match self {
            Series::Exact(r) => Some(r.to_f64()),
            Series::Approx(r) => Some(r.value),
            _ => None,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Series::Exact(r) => Some(r),
            _ => None,
        }
    }

    /// Error budget; zero when exact.
    pub fn total_err(&self) -> Option<f64> {
        match self {
            Series::Exact(_) => Some(0.0),
            Series::Approx(r) => Some(r.total_err()),
            _ => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Series::Divergent(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Series::Inconclusive(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Series::Exact(_) => "EXACT",
            Series::Approx(r) if r.converged => "FINITE",
            Series::Approx(_) => "UNCONVERGED",
            Series::Divergent(p) => p.verdict.label(),
            Series::Inconclusive(_) => "INCONCLUSIVE",
        }
    }

    pub fn measured(&self) -> Measured {
        match self {
            Series::Exact(r) => Measured::rational(r.to_f64(), r.to_string()),
            Series::Approx(r) => Measured::approx(r.value, r.total_err(), r.converged),
            _ => Measured::missing(self.label()),
        }
    }
}

/// One series `Σ_k term(k)` with what is known about its terms.
pub(crate) struct Summand<'a> {
    pub term: &'a dyn Fn(u64) -> f64,
    /// Continuous extension of `term`.
    pub density: Option<&'a dyn Fn(f64) -> f64>,
    /// Bounds `|term(k)|` for `k ≥ env.from()`.
    pub env: Envelope,
    /// `|density|` is nonincreasing and of one sign from here on.
    pub monotone_from: Option<f64>,
}

fn partial(term: &dyn Fn(u64) -> f64, from: u64, to: u64, acc: &mut Neumaier, abs: &mut f64) {
    for k in from..=to {
        let v = term(k);
        acc.add(v);
        *abs += v.abs();
    }
}

fn tail_quad(density: &dyn Fn(f64) -> f64, x: f64, env: &Envelope, cfg: &SeqConfig) -> Result<Option<(f64, f64)>> {
    let spec = HalfLine::new(Envelope::zero(1.0), env.clone(), Vec::new());
    Ok(match integrate_from(density, x, &spec, &cfg.quad)? {
        Integral::Finite(r) => Some((r.value, r.total_err())),
        _ => None,
    })
}

/// Sums a series. Compact envelopes are summed to the end; integrable ones
/// are cut at the first `N = 2^j` where the tail is certified small; others
/// go to the divergence probe.
pub(crate) fn sum_series(s: &Summand, cfg: &SeqConfig) -> Result<Series> {
    let eps = f64::EPSILON;
    let mut acc = Neumaier::new();
    let mut abs = 0.0;

    if s.env.is_zero() {
        let end = s.env.from().floor() as u64;
        partial(s.term, 1, end, &mut acc, &mut abs);
        return Ok(Series::Approx(SeriesResult {
            value: acc.value(),
            err_est: 2.0 * eps * abs,
            tail_bound: 0.0,
            terms: end,
            converged: true,
        }));
    }

    if !s.env.is_integrable() {
        let Some(density) = s.density else {
            return Ok(Series::Inconclusive("no continuous extension to probe".into()));
        };
        let g = |t: f64| density(t).abs();
        let probe = probe_divergence(&g, s.env.from().max(1.0), &cfg.quad)?;
        return Ok(match probe.verdict {
            v if v.is_divergent() => Series::Divergent(probe),
            DivergenceVerdict::Convergent => {
                partial(s.term, 1, cfg.max_terms, &mut acc, &mut abs);
                Series::Approx(SeriesResult {
                    value: acc.value(),
                    err_est: 2.0 * eps * abs,
                    tail_bound: probe.extrapolated_tail(),
                    terms: cfg.max_terms,
                    converged: false,
                })
            }
            _ => Series::Inconclusive(format!("probe from {} was inconclusive", probe.start)),
        });
    }

    let k0 = s.env.decreasing_from().max(s.monotone_from.unwrap_or(1.0)).ceil() as u64;
    let mut n = k0.max(1024).next_power_of_two().min(cfg.max_terms.max(1));
    let mut done = 0;
    loop {
        partial(s.term, done + 1, n, &mut acc, &mut abs);
        done = n;
        let nf = n as f64;
        let bracket = match (s.density, s.monotone_from) {
            (Some(d), Some(m)) if m <= nf => tail_quad(d, nf + 0.5, &s.env, cfg)?.map(|(v, e)| (v, e, 0.5 * d(nf).abs())),
            _ => None,
        };
        // without a monotone density only the envelope remainder is known
        let (est, est_err, bound) = bracket.unwrap_or((0.0, 0.0, s.env.remainder(nf).unwrap_or(f64::INFINITY)));
        let value = acc.value() + est;
        let err = 2.0 * eps * abs + est_err;
        let ok = err + bound <= cfg.target(value);
        if ok || n >= cfg.max_terms {
            return Ok(Series::Approx(SeriesResult {
                value,
                err_est: err,
                tail_bound: bound,
                terms: n,
                converged: ok,
            }));
        }
        n = (2 * n).min(cfg.max_terms);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum_of(g: fn(f64) -> f64, env: Envelope, monotone: Option<f64>) -> Series {
        let term = |k: u64| g(k as f64);
        let s = Summand {
            term: &term,
            density: Some(&g),
            env,
            monotone_from: monotone,
        };
        sum_series(&s, &SeqConfig::default()).unwrap()
    }

    #[test]
    fn basel_with_bracket() {
        let r = sum_of(|t| 1.0 / (t * t), Envelope::single(1.0, -2.0, 0.0), Some(1.0));
        let Series::Approx(r) = r else { panic!() };
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!(r.converged);
        assert!((r.value - exact).abs() <= r.total_err().max(1e-15), "{r:?}");
        assert!((r.value - exact).abs() < 1e-10);
    }

    #[test]
    fn envelope_only_is_unconverged_but_honest() {
        let r = sum_of(|t| 1.0 / (t * t), Envelope::single(1.0, -2.0, 0.0), None);
        let Series::Approx(r) = r else { panic!() };
        assert!(!r.converged);
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((r.value - exact).abs() <= r.total_err());
    }

    #[test]
    fn harmonic_series_diverges() {
        let r = sum_of(|t| 1.0 / t, Envelope::single(1.0, -1.0, 0.0), Some(1.0));
        assert!(r.is_divergent(), "{r:?}");
        assert_eq!(r.label(), "DIVERGENT-LOG");
    }

    #[test]
    fn compact_is_summed_to_the_end() {
        let r = sum_of(|t| if t <= 10.0 { 1.0 } else { 0.0 }, Envelope::zero(10.0), None);
        assert_eq!(r.value(), Some(10.0));
    }
}

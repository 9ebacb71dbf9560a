//! `Γ`, `Γ̃`, the `J₁/J₂` split and the weighted sums.

use std::f64::consts::LN_2;

use serde::Serialize;

use super::harmonic::{harmonic_range, harmonic_real};
use super::rational::Rational;
use super::seq::{is_monotone_from, SeqSpec};
use super::series::{sum_series, SeqConfig, Series, SeriesResult, Summand};
use crate::envelope::Envelope;
use crate::error::{HardyError, Result};
use crate::numeric::Neumaier;
use crate::quad::{integrate_from, HalfLine, Integral};
use crate::report::Verdict;

/// Exact prefix sums of a rational generator are used up to this index.
pub const EXACT_LIMIT: u64 = 20_000;
/// Explicit terms before the `J` and `Γ̃` tails of a generator take over.
const TAIL_START: u64 = 1 << 20;

/// A value that is exact when its inputs are.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Scalar {
    Exact(Rational),
    Real(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Real(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Real(_) => None,
        }
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(HardyError::Domain("index n must be ≥ 1".into()))
    } else {
        Ok(())
    }
}

/// `A_n = Σ_{k≤n} a_k`, exact when the terms are and `n` is within reach.
fn prefix(a: &SeqSpec, n: u64) -> Scalar {
    let end = a.support().map_or(n, |s| s.min(n));
    if let Some(list) = a.list() {
        return Scalar::Exact(list[..end as usize].iter().sum());
    }
    if a.is_exact() && end <= EXACT_LIMIT {
        let mut s = Rational::zero();
        for k in 1..=end {
            s += &a.exact_term(k).unwrap();
        }
        return Scalar::Exact(s);
    }
    Scalar::Real((1..=end).map(|k| a.term(k)).collect::<Neumaier>().value())
}

/// `(Γa)_n = (1/n) Σ_{k≤n} a_k`.
pub fn cesaro(a: &SeqSpec, n: u64) -> Result<Scalar> {
    check_n(n)?;
    Ok(match prefix(a, n) {
        Scalar::Exact(s) => Scalar::Exact(s * Rational::recip_int(n)),
        Scalar::Real(s) => Scalar::Real(s / n as f64),
    })
}

/// `Σ a_k` with whatever certification the sequence allows.
pub fn total_sum(a: &SeqSpec, cfg: &SeqConfig) -> Result<Series> {
    if let Some(s) = a.exact_sum() {
        return Ok(Series::Exact(s.clone()));
    }
    let term = |k: u64| a.term(k);
    let density = a.density();
    let d = density.map(|d| d as &dyn Fn(f64) -> f64);
    sum_series(
        &Summand {
            term: &term,
            density: d,
            env: a.envelope(),
            monotone_from: a.monotone_from().map(|m| m as f64),
        },
        cfg,
    )
}

/// A sequence with its total computed once.
pub struct PreparedSeq<'a> {
    a: &'a SeqSpec,
    cfg: SeqConfig,
    total: Series,
    nonnegative: bool,
    /// `A_1, …, A_S` of a finite list.
    prefixes: Option<Vec<Rational>>,
}

impl<'a> PreparedSeq<'a> {
    pub fn new(a: &'a SeqSpec, cfg: &SeqConfig) -> Result<Self> {
        cfg.quad.validate()?;
        if cfg.max_terms == 0 {
            return Err(HardyError::Parameter("max_terms must be ≥ 1".into()));
        }
        Ok(PreparedSeq {
            a,
            cfg: cfg.clone(),
            total: total_sum(a, cfg)?,
            nonnegative: a.is_nonnegative(),
            prefixes: a.list().map(|l| {
                let mut acc = Rational::zero();
                l.iter()
                    .map(|x| {
                        acc += x;
                        acc.clone()
                    })
                    .collect()
            }),
        })
    }

    pub fn seq(&self) -> &SeqSpec {
        self.a
    }

    pub fn config(&self) -> &SeqConfig {
        &self.cfg
    }

    pub fn total(&self) -> &Series {
        &self.total
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative
    }

    fn prefix(&self, n: u64) -> Scalar {
        match &self.prefixes {
            Some(p) if p.is_empty() => Scalar::Exact(Rational::zero()),
            Some(p) => Scalar::Exact(p[(n.min(p.len() as u64) - 1) as usize].clone()),
            None => prefix(self.a, n),
        }
    }

    fn require_total(&self) -> Result<Scalar> {
        match &self.total {
            Series::Exact(r) => Ok(Scalar::Exact(r.clone())),
            Series::Approx(r) => Ok(Scalar::Real(r.value)),
            other => Err(HardyError::Domain(format!(
                "Σ a_k of {} is {}",
                self.a.name(),
                other.label()
            ))),
        }
    }

    fn total_err(&self) -> f64 {
        self.total.total_err().unwrap_or(f64::INFINITY)
    }

    /// `(Γ̃a)_n = (Γa)_n - (Σ a_k)/(n+1)`.
    pub fn modified(&self, n: u64) -> Result<Scalar> {
        let total = self.require_total()?;
        check_n(n)?;
        let c = match self.prefix(n) {
            Scalar::Exact(s) => Scalar::Exact(s * Rational::recip_int(n)),
            Scalar::Real(s) => Scalar::Real(s / n as f64),
        };
        combine(&c, &total, |c, s| c - s * &Rational::recip_int(n + 1), |c, s| {
            c - s / (n as f64 + 1.0)
        })
    }

    /// `J₁(n) = A_n/(n(n+1))`.
    pub fn j1(&self, n: u64) -> Result<Scalar> {
        check_n(n)?;
        Ok(match self.prefix(n) {
            Scalar::Exact(s) => Scalar::Exact(s * Rational::recip_int(n) * Rational::recip_int(n + 1)),
            Scalar::Real(s) => Scalar::Real(s / (n as f64 * (n as f64 + 1.0))),
        })
    }

    /// `J₂(n) = (Σ_{k>n} a_k)/(n+1)`.
    pub fn j2(&self, n: u64) -> Result<Scalar> {
        check_n(n)?;
        let total = self.require_total()?;
        combine(&self.prefix(n), &total, |a, s| (s - &a) * Rational::recip_int(n + 1), |a, s| {
            (s - a) / (n as f64 + 1.0)
        })
    }

    fn need_nonnegative(&self, what: &str) -> Result<()> {
        if self.nonnegative {
            Ok(())
        } else {
            Err(HardyError::Precondition(format!("{what} needs a nonnegative sequence, {} is not", self.a.name())))
        }
    }

    fn monotone_density(&self) -> Option<(&(dyn Fn(f64) -> f64 + Send + Sync), f64)> {
        Some((self.a.density()?, self.a.monotone_from()? as f64))
    }

    /// `∫_x^∞ a(t)·w(t) dt` for the tail bounds below.
    fn tail_integral(&self, x: f64, w: &dyn Fn(f64) -> f64) -> Result<Option<(f64, f64)>> {
        let Some((d, _)) = self.monotone_density() else {
            return Ok(None);
        };
        let g = |t: f64| d(t) * w(t);
        let spec = HalfLine::new(Envelope::zero(1.0), self.a.envelope().mul_log_plus(LN_2), Vec::new());
        Ok(match integrate_from(&g, x, &spec, &self.cfg.quad)? {
            Integral::Finite(r) => Some((r.value, r.total_err())),
            _ => None,
        })
    }

    fn tail_start(&self) -> u64 {
        TAIL_START.min(self.cfg.max_terms)
    }

    /// `Σ_n J₁(n)`, by its definition.
    pub fn j1_sum(&self) -> Result<Series> {
        self.need_nonnegative("J1_sum")?;
        if let (Some(list), Some(Scalar::Exact(s))) = (self.a.list(), self.require_total().ok()) {
            // A_n = Σa for n ≥ S and Σ_{n≥S} 1/(n(n+1)) = 1/S
            let len = list.len() as u64;
            if len == 0 {
                return Ok(Series::Exact(Rational::zero()));
            }
            let pre = self.prefixes.as_deref().unwrap_or_default();
            let head: Rational = (1..len)
                .map(|n| &pre[n as usize - 1] * &(Rational::recip_int(n) * Rational::recip_int(n + 1)))
                .sum();
            return Ok(Series::Exact(head + s * Rational::recip_int(len)));
        }
        let total = self.require_total()?.to_f64();
        let n_max = self.tail_start();
        let (mut acc, mut a_n) = (Neumaier::new(), Neumaier::new());
        for n in 1..=n_max {
            a_n.add(self.a.term(n));
            let nf = n as f64;
            acc.add(a_n.value() / (nf * (nf + 1.0)));
        }
        // A_n rises from A_N to Σa beyond N, so the tail lies between
        // A_N/(N+1) and Σa/(N+1)
        let np1 = n_max as f64 + 1.0;
        let lo = a_n.value() / np1;
        let hi = total / np1;
        let value = acc.value() + 0.5 * (lo + hi);
        let bound = 0.5 * (hi - lo).abs() + self.total_err() / np1;
        let err = 4.0 * f64::EPSILON * value.abs();
        Ok(approx(value, err, bound, n_max, &self.cfg))
    }

    /// `Σ_n J₂(n)`, by its definition.
    pub fn j2_sum(&self) -> Result<Series> {
        self.need_nonnegative("J2_sum")?;
        if let (Some(list), Some(Scalar::Exact(s))) = (self.a.list(), self.require_total().ok()) {
            // the tail sum Σ_{k>n} a_k vanishes for n ≥ S
            let pre = self.prefixes.as_deref().unwrap_or_default();
            return Ok(Series::Exact(
                (0..list.len()).map(|i| (&s - &pre[i]) * Rational::recip_int(i as u64 + 2)).sum(),
            ));
        }
        let lw = self.log_weight()?;
        if !matches!(lw, Series::Exact(_) | Series::Approx(_)) {
            // Σ J₂ = Σ a_k(H_k - 1) and H_k - 1 ≥ ln(k+1) - 1
            return Ok(lw);
        }
        let total = self.require_total()?.to_f64();
        let n_max = self.tail_start();
        let (mut acc, mut a_n) = (Neumaier::new(), Neumaier::new());
        for n in 1..=n_max {
            a_n.add(self.a.term(n));
            acc.add((total - a_n.value()) / (n as f64 + 1.0));
        }
        let nf = n_max as f64;
        // Σ_{n>N} R_n/(n+1) = Σ_{k>N+1} a_k (H_k - H_{N+1}) ≤ ∫_{N+1}^∞ a(t) ln((t+1)/(N+1))
        let h_n1 = harmonic_real(nf + 1.0);
        let est = self.tail_integral(nf + 1.5, &|t| (harmonic_real(t) - h_n1).max(0.0))?;
        let upper = self.tail_integral(nf + 1.0, &|t| ((t + 1.0) / (nf + 1.0)).ln())?;
        let (Some((est, est_err)), Some((upper, upper_err))) = (est, upper) else {
            return Ok(Series::Inconclusive("no monotone density for the J2 tail".into()));
        };
        let err = self.total_err() * harmonic_real(nf + 1.0) + est_err + 4.0 * f64::EPSILON * acc.value().abs();
        Ok(approx(acc.value() + est, err, upper + upper_err, n_max, &self.cfg))
    }

    /// `Σ a_k/k`, the other side of the `J₁` Fubini identity.
    pub fn j1_fubini(&self) -> Result<Series> {
        if let Some(list) = self.a.list() {
            return Ok(Series::Exact(
                list.iter().enumerate().map(|(i, x)| x * &Rational::recip_int(i as u64 + 1)).sum(),
            ));
        }
        self.weighted(&|k| 1.0 / k, &self.a.envelope().mul_power(-1.0), false)
    }

    /// `Σ a_k (H_k - 1)`, the other side of the `J₂` Fubini identity.
    pub fn j2_fubini(&self) -> Result<Series> {
        if let Some(list) = self.a.list() {
            // H_k only where a_k ≠ 0, extended block by block
            let mut terms = Vec::new();
            let (mut h, mut at) = (Rational::zero(), 0u64);
            for (i, x) in list.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let k = i as u64 + 1;
                h = h + harmonic_range(at, k);
                at = k;
                terms.push(x * &(&h - &Rational::one()));
            }
            return Ok(Series::Exact(terms.into_iter().sum()));
        }
        // H_k - 1 ≤ ln k
        self.weighted(&|k| harmonic_real(k) - 1.0, &self.a.envelope().mul_log(), false)
    }

    /// `Σ a_k w(k)` (or `Σ |a_k| w(k)`) for a generator; `env` bounds the
    /// terms.
    fn weighted(&self, w: &dyn Fn(f64) -> f64, env: &Envelope, abs: bool) -> Result<Series> {
        let fix = |v: f64| if abs { v.abs() } else { v };
        let term = |k: u64| fix(self.a.term(k)) * w(k as f64);
        let density = self.a.density().map(|d| move |t: f64| fix(d(t)) * w(t));
        let dref = density.as_ref().map(|d| d as &dyn Fn(f64) -> f64);
        let monotone = match (dref, self.a.monotone_from()) {
            (Some(d), Some(m)) => {
                let k0 = (m as f64).max(env.decreasing_from());
                is_monotone_from(d, k0).then_some(k0)
            }
            _ => None,
        };
        sum_series(
            &Summand {
                term: &term,
                density: dref,
                env: env.clone(),
                monotone_from: monotone,
            },
            &self.cfg,
        )
    }

    /// `L(a) = Σ |a_k| ln(k+1)`.
    pub fn log_weight(&self) -> Result<Series> {
        if let Some(list) = self.a.list() {
            let mut acc = Neumaier::new();
            for (i, x) in list.iter().enumerate() {
                acc.add(x.to_f64().abs() * (i as f64 + 2.0).ln());
            }
            let v = acc.value();
            return Ok(approx(v, 4.0 * f64::EPSILON * v, 0.0, list.len() as u64, &self.cfg));
        }
        // ln(k+1) ≤ ln k + ln 2
        self.weighted(&|k| (k + 1.0).ln(), &self.a.envelope().mul_log_plus(LN_2), true)
    }

    /// `‖Γ̃a‖_ℓ¹ = Σ_n |(Γ̃a)_n|`.
    pub fn l1_norm_mod(&self) -> Result<Series> {
        let total = self.require_total()?;
        if let (Some(list), Scalar::Exact(s)) = (self.a.list(), &total) {
            // beyond the support (Γ̃a)_n = Σa/(n(n+1)), whose tail from S is Σa/S
            let len = list.len() as u64;
            if len == 0 {
                return Ok(Series::Exact(Rational::zero()));
            }
            let pre = self.prefixes.as_deref().unwrap_or_default();
            let head: Rational = (1..len)
                .map(|n| (&pre[n as usize - 1] * &Rational::recip_int(n) - s * &Rational::recip_int(n + 1)).abs())
                .sum();
            return Ok(Series::Exact(head + s.abs() * Rational::recip_int(len)));
        }
        if !self.nonnegative {
            return Ok(Series::Inconclusive("the Γ̃ tail bound needs a ≥ 0".into()));
        }
        let lw = self.log_weight()?;
        if lw.is_divergent() {
            // Σ|Γ̃a| ≥ Σ J₂ - Σ J₁, with Σ J₁ ≤ Σ a finite and Σ J₂ ≍ L(a)
            return Ok(lw);
        }
        let total = total.to_f64();
        let n_max = self.tail_start();
        let (mut acc, mut a_n) = (Neumaier::new(), Neumaier::new());
        for n in 1..=n_max {
            a_n.add(self.a.term(n));
            let nf = n as f64;
            acc.add((a_n.value() / nf - total / (nf + 1.0)).abs());
        }
        let nf = n_max as f64;
        // tail: |Σ_{n>N} Γ̃a_n| if the sign has settled, and never more than
        // Σ_{n>N} (J₁ + J₂) ≤ Σa/(N+1) + ∫_{N+1}^∞ a(t) ln((t+1)/(N+1))
        let d_n = self.tail_integral(nf + 0.5, &|t| (t / (nf + 0.5)).ln())?;
        let upper = self.tail_integral(nf + 1.0, &|t| ((t + 1.0) / (nf + 1.0)).ln())?;
        let (Some((d_n, d_err)), Some((upper, upper_err))) = (d_n, upper) else {
            return Ok(Series::Inconclusive("no monotone density for the Γ̃ tail".into()));
        };
        let est = (total / (nf + 1.0) - d_n).abs();
        let err = self.total_err() * harmonic_real(nf + 1.0) + d_err + 4.0 * f64::EPSILON * acc.value();
        let bound = total / (nf + 1.0) + upper + upper_err;
        Ok(approx(acc.value() + est, err, bound, n_max, &self.cfg))
    }
}

fn approx(value: f64, err: f64, bound: f64, terms: u64, cfg: &SeqConfig) -> Series {
    Series::Approx(SeriesResult {
        value,
        err_est: err,
        tail_bound: bound,
        terms,
        converged: err + bound <= cfg.target(value),
    })
}

fn combine(
    x: &Scalar,
    y: &Scalar,
    exact: impl Fn(Rational, &Rational) -> Rational,
    real: impl Fn(f64, f64) -> f64,
) -> Result<Scalar> {
    Ok(match (x, y) {
        (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a.clone(), b)),
        _ => Scalar::Real(real(x.to_f64(), y.to_f64())),
    })
}

/// `(Γ̃a)_n`; prepares `a` on every call, use [`PreparedSeq`] in loops.
pub fn modified_cesaro(a: &SeqSpec, n: u64, cfg: &SeqConfig) -> Result<Scalar> {
    PreparedSeq::new(a, cfg)?.modified(n)
}

pub fn j1_sum(a: &SeqSpec, cfg: &SeqConfig) -> Result<Series> {
    PreparedSeq::new(a, cfg)?.j1_sum()
}

pub fn j2_sum(a: &SeqSpec, cfg: &SeqConfig) -> Result<Series> {
    PreparedSeq::new(a, cfg)?.j2_sum()
}

pub fn l1_log_weight(a: &SeqSpec, cfg: &SeqConfig) -> Result<Series> {
    PreparedSeq::new(a, cfg)?.log_weight()
}

pub fn l1_norm_mod(a: &SeqSpec, cfg: &SeqConfig) -> Result<Series> {
    PreparedSeq::new(a, cfg)?.l1_norm_mod()
}

/// `(Σ_{k≤N} |a_k|^p)^{1/p}`.
pub fn lp_norm(a: &SeqSpec, p: f64, n: u64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(HardyError::Parameter(format!("p must be in [1, inf), got {p}")));
    }
    Ok((1..=n).map(|k| a.term(k).abs().powf(p)).collect::<Neumaier>().value().powf(1.0 / p))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscHardyRatio {
    pub sequence: String,
    pub p: f64,
    pub n: u64,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
    /// `(p/(p-1))^p`
    pub bound: f64,
    pub verdict: Verdict,
}

/// `Σ_{n≤N} (Γa)_n^p / Σ_{n≤N} a_n^p` for nonnegative `a`, never extrapolated.
pub fn hardy_ratio(a: &SeqSpec, p: f64, n: u64) -> Result<DiscHardyRatio> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(HardyError::Parameter(format!("p must be in (1, inf), got {p}")));
    }
    check_n(n)?;
    let (mut prefix, mut num, mut den) = (Neumaier::new(), Neumaier::new(), Neumaier::new());
    for k in 1..=n {
        let x = a.term(k);
        if x < 0.0 {
            return Err(HardyError::Precondition(format!("{} has a negative term at k = {k}", a.name())));
        }
        prefix.add(x);
        num.add((prefix.value() / k as f64).powf(p));
        den.add(x.powf(p));
    }
    let (num, den) = (num.value(), den.value());
    if den == 0.0 {
        return Err(HardyError::Domain(format!("{} vanishes on 1..={n}", a.name())));
    }
    let bound = (p / (p - 1.0)).powf(p);
    let ratio = num / den;
    Ok(DiscHardyRatio {
        sequence: a.name().to_string(),
        p,
        n,
        numerator: num,
        denominator: den,
        ratio,
        bound,
        // rounding of n terms cannot move the ratio by more than this
        verdict: Verdict::from_bool(ratio <= bound * (1.0 + 1e-12)),
    })
}

#[cfg(test)]
mod tests {
    use super::super::catalog::sequence;
    use super::*;

    fn prep(spec: &str) -> (SeqSpec, SeqConfig) {
        (sequence(spec).unwrap(), SeqConfig::default())
    }

    #[test]
    fn lambda_kernel_is_exact() {
        let (a, cfg) = prep("lambda");
        let p = PreparedSeq::new(&a, &cfg).unwrap();
        for n in [1, 2, 7, 100, 5000] {
            assert_eq!(cesaro(&a, n).unwrap(), Scalar::Exact(Rational::recip_int(n + 1)));
            assert_eq!(p.modified(n).unwrap(), Scalar::Exact(Rational::zero()));
        }
    }

    #[test]
    fn unit_vectors() {
        let (e1, cfg) = prep("em(m=1)");
        assert_eq!(l1_norm_mod(&e1, &cfg).unwrap(), Series::Exact(Rational::one()));
        let (e3, _) = prep("em(m=3)");
        let p = PreparedSeq::new(&e3, &cfg).unwrap();
        assert_eq!(p.j2_sum().unwrap(), Series::Exact(Rational::new(5, 6)));
        assert_eq!(p.l1_norm_mod().unwrap(), Series::Exact(Rational::new(7, 6)));
        assert_eq!(p.modified(1).unwrap(), Scalar::Exact(Rational::new(-1, 2)));
        assert_eq!(p.modified(3).unwrap(), Scalar::Exact(Rational::new(1, 12)));
    }

    #[test]
    fn truncated_lambda_fubini() {
        let a = SeqSpec::finite("lam", (1..=50).map(|k| Rational::recip_int(k) - Rational::recip_int(k + 1)).collect());
        let p = PreparedSeq::new(&a, &SeqConfig::default()).unwrap();
        assert_eq!(p.j1_sum().unwrap(), p.j1_fubini().unwrap());
        assert_eq!(p.j2_sum().unwrap(), p.j2_fubini().unwrap());
    }

    #[test]
    fn lambda_log_weight() {
        let (a, cfg) = prep("lambda");
        let l = l1_log_weight(&a, &cfg).unwrap();
        let Series::Approx(r) = l else { panic!("{l:?}") };
        assert!(r.converged, "{r:?}");
        assert!((r.value - 1.2577468869443695).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn lambda_generator_sums() {
        let (a, cfg) = prep("lambda");
        let p = PreparedSeq::new(&a, &cfg).unwrap();
        // Γ̃λ ≡ 0
        let h = p.l1_norm_mod().unwrap();
        assert!(h.value().unwrap().abs() <= h.total_err().unwrap() + 1e-12, "{h:?}");
        let j1 = p.j1_sum().unwrap();
        let f1 = p.j1_fubini().unwrap();
        let d = (j1.value().unwrap() - f1.value().unwrap()).abs();
        assert!(d <= 10.0 * (j1.total_err().unwrap() + f1.total_err().unwrap()), "{j1:?} {f1:?}");
    }

    #[test]
    fn logsq_is_divergent() {
        let (a, cfg) = prep("logsq(beta=2)");
        let p = PreparedSeq::new(&a, &cfg).unwrap();
        assert!(p.total().value().is_some(), "{:?}", p.total());
        assert!(p.log_weight().unwrap().is_divergent());
        assert!(p.l1_norm_mod().unwrap().is_divergent());
        assert!(p.j2_sum().unwrap().is_divergent());
    }

    #[test]
    fn hardy_ratios_stay_below_the_constant() {
        let a = sequence("lambda").unwrap();
        let r = hardy_ratio(&a, 2.0, 1_000_000).unwrap();
        assert!((r.ratio - 2.224918823002097).abs() < 1e-9, "{r:?}");
        assert!(r.verdict.is_ok());
        let neg = SeqSpec::finite("neg", vec![Rational::one(), Rational::from_int(-1)]);
        assert!(matches!(hardy_ratio(&neg, 2.0, 2), Err(HardyError::Precondition(_))));
    }
}

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::rational::Rational;
use crate::envelope::Envelope;
use crate::error::{HardyError, Result};

type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ExactTerm = Arc<dyn Fn(u64) -> Rational + Send + Sync>;

/// How `|a_k|` decays; the envelope is in `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum DecayClass {
    /// `a_k = 0` for `k > support_end`.
    Compact { support_end: u64 },
    /// `|a_k| ≤ coef·k^(-alpha)`.
    Power { alpha: f64, coef: f64 },
    /// `|a_k| ≤ coef·k⁻¹(ln k)^(-beta)`.
    PowerLog { beta: f64, coef: f64 },
    Custom(Envelope),
}

impl DecayClass {
    pub fn envelope(&self) -> Envelope {
        match *self {
            DecayClass::Compact { support_end } => Envelope::zero(support_end as f64),
            DecayClass::Power { alpha, coef } => Envelope::single(coef, -alpha, 0.0),
            DecayClass::PowerLog { beta, coef } => Envelope::single(coef, -1.0, -beta),
            DecayClass::Custom(ref e) => e.clone(),
        }
    }

    fn scaled(&self, c: f64) -> DecayClass {
        let c = c.abs();
        match *self {
            DecayClass::Compact { support_end } => DecayClass::Compact { support_end },
            DecayClass::Power { alpha, coef } => DecayClass::Power { alpha, coef: coef * c },
            DecayClass::PowerLog { beta, coef } => DecayClass::PowerLog { beta, coef: coef * c },
            DecayClass::Custom(ref e) => DecayClass::Custom(e.scale(c)),
        }
    }
}

#[derive(Clone)]
enum Terms {
    /// `a_1..a_S`, zero beyond.
    Finite(Arc<[Rational]>),
    /// `a_k = density(k)`; `exact` gives the same terms as rationals.
    Generator { density: Density, exact: Option<ExactTerm> },
}

/// A sequence `a_1, a_2, …`: an exact finite list or a closed-form rule.
#[derive(Clone)]
pub struct SeqSpec {
    name: String,
    terms: Terms,
    decay: DecayClass,
    monotone_from: Option<u64>,
    exact_sum: Option<Rational>,
}

impl fmt::Debug for SeqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeqSpec")
            .field("name", &self.name)
            .field("decay", &self.decay)
            .field("support", &self.support())
            .finish()
    }
}

const SAMPLES: usize = 64;

fn log_indices(from: f64, upto: f64, n: usize) -> impl Iterator<Item = u64> {
    let (lo, hi) = (from.max(1.0).ln(), upto.ln());
    (0..n).map(move |i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp().round() as u64)
}

impl SeqSpec {
    /// Finite support; trailing zeros are dropped.
    pub fn finite(name: impl Into<String>, mut terms: Vec<Rational>) -> SeqSpec {
        while terms.last().is_some_and(Rational::is_zero) {
            terms.pop();
        }
        let support_end = terms.len() as u64;
        let sum = terms.iter().sum();
        SeqSpec {
            name: name.into(),
            terms: Terms::Finite(terms.into()),
            decay: DecayClass::Compact { support_end },
            monotone_from: None,
            exact_sum: Some(sum),
        }
    }

    /// `a_k = density(k)`, with `density` defined on `[1, ∞)`. The decay
    /// class is checked at 64 log-spaced indices.
    pub fn generator(
        name: impl Into<String>,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
        decay: DecayClass,
    ) -> Result<SeqSpec> {
        let name = name.into();
        let bad = |reason: String| HardyError::Malformed {
            name: name.clone(),
            reason,
        };
        for k in (1..=SAMPLES as u64).chain(log_indices(1.0, 1e12, SAMPLES)) {
            let v = density(k as f64);
            if !v.is_finite() {
                return Err(bad(format!("a_{k} = {v}")));
            }
        }
        let env = decay.envelope();
        if let DecayClass::Compact { support_end } = decay {
            for k in log_indices(support_end as f64 + 1.0, 1e12, SAMPLES) {
                if density(k as f64) != 0.0 {
                    return Err(bad(format!("a_{k} ≠ 0 beyond the declared support")));
                }
            }
        } else {
            for k in log_indices(env.from().ceil(), 1e12, SAMPLES) {
                let (v, b) = (density(k as f64).abs(), env.eval(k as f64));
                if v > b * (1.0 + 1e-9) {
                    return Err(bad(format!("decay class does not bound a_k at k = {k}: {v} > {b}")));
                }
            }
        }
        Ok(SeqSpec {
            name,
            terms: Terms::Generator {
                density: Arc::new(density),
                exact: None,
            },
            decay,
            monotone_from: None,
            exact_sum: None,
        })
    }

    /// Registers the same terms as exact rationals; spot-checked against
    /// the density.
    pub fn with_exact_terms(mut self, exact: impl Fn(u64) -> Rational + Send + Sync + 'static) -> Result<SeqSpec> {
        let Terms::Generator { ref density, .. } = self.terms else {
            return Ok(self);
        };
        for k in 1..=SAMPLES as u64 {
            let (x, d) = (exact(k).to_f64(), density(k as f64));
            if (x - d).abs() > 1e-12 * d.abs().max(1e-300) {
                return Err(HardyError::Malformed {
                    name: self.name.clone(),
                    reason: format!("exact term {x} ≠ {d} at k = {k}"),
                });
            }
        }
        self.terms = Terms::Generator {
            density: density.clone(),
            exact: Some(Arc::new(exact)),
        };
        Ok(self)
    }

    pub fn with_exact_sum(mut self, sum: Rational) -> SeqSpec {
        self.exact_sum = Some(sum);
        self
    }

    /// Declares `|a|` nonincreasing and of one sign on `[k0, ∞)`, which makes
    /// integral-test brackets available; checked on a log grid.
    pub fn with_monotone_from(mut self, k0: u64) -> Result<SeqSpec> {
        if let Terms::Generator { ref density, .. } = self.terms {
            if !is_monotone_from(density.as_ref(), k0 as f64) {
                return Err(HardyError::Malformed {
                    name: self.name.clone(),
                    reason: format!("|a_k| is not monotone beyond k = {k0}"),
                });
            }
        }
        self.monotone_from = Some(k0);
        Ok(self)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> SeqSpec {
        self.name = name.into();
        self
    }

    /// `c·a`.
    pub fn scaled(&self, c: &Rational) -> SeqSpec {
        let cf = c.to_f64();
        let terms = match &self.terms {
            Terms::Finite(v) => Terms::Finite(v.iter().map(|x| x * c).collect()),
            Terms::Generator { density, exact } => {
                let d = density.clone();
                Terms::Generator {
                    density: Arc::new(move |t| cf * d(t)),
                    exact: exact.clone().map(|e| {
                        let c = c.clone();
                        Arc::new(move |k| &c * &e(k)) as ExactTerm
                    }),
                }
            }
        };
        let mut out = SeqSpec {
            name: format!("{c}*{}", self.name),
            terms,
            decay: self.decay.scaled(cf),
            monotone_from: self.monotone_from,
            exact_sum: self.exact_sum.as_ref().map(|s| s * c),
        };
        if c.is_zero() {
            out = SeqSpec::finite(out.name, Vec::new());
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decay(&self) -> &DecayClass {
        &self.decay
    }

    pub fn envelope(&self) -> Envelope {
        self.decay.envelope()
    }

    pub fn monotone_from(&self) -> Option<u64> {
        self.monotone_from
    }

    /// Last possibly nonzero index, if the support is finite.
    pub fn support(&self) -> Option<u64> {
        match self.decay {
            DecayClass::Compact { support_end } => Some(support_end),
            _ => None,
        }
    }

    pub fn is_finite_list(&self) -> bool {
        matches!(self.terms, Terms::Finite(_))
    }

    /// Terms are available as rationals.
    pub fn is_exact(&self) -> bool {
        match &self.terms {
            Terms::Finite(_) => true,
            Terms::Generator { exact, .. } => exact.is_some(),
        }
    }

    pub fn exact_sum(&self) -> Option<&Rational> {
        self.exact_sum.as_ref()
    }

    /// The finite list, when this is one.
    pub fn list(&self) -> Option<&[Rational]> {
        match &self.terms {
            Terms::Finite(v) => Some(v),
            Terms::Generator { .. } => None,
        }
    }

    /// `a_k` (`k ≥ 1`).
    pub fn term(&self, k: u64) -> f64 {
        match &self.terms {
            Terms::Finite(v) => v.get(k as usize - 1).map_or(0.0, Rational::to_f64),
            Terms::Generator { density, .. } => density(k as f64),
        }
    }

    pub fn exact_term(&self, k: u64) -> Option<Rational> {
        match &self.terms {
            Terms::Finite(v) => Some(v.get(k as usize - 1).cloned().unwrap_or_else(Rational::zero)),
            Terms::Generator { exact, .. } => exact.as_ref().map(|e| e(k)),
        }
    }

    /// Continuous extension used for integral-test tails; `None` for lists.
    pub fn density(&self) -> Option<&(dyn Fn(f64) -> f64 + Send + Sync)> {
        match &self.terms {
            Terms::Finite(_) => None,
            Terms::Generator { density, .. } => Some(density.as_ref()),
        }
    }

    /// Sampled: all list entries, the first 1000 terms and a log grid to 1e12.
    pub fn is_nonnegative(&self) -> bool {
        match &self.terms {
            Terms::Finite(v) => v.iter().all(|x| !x.is_negative()),
            Terms::Generator { density, .. } => (1..=1000u64)
                .chain(log_indices(1.0, 1e12, 4096))
                .all(|k| density(k as f64) >= 0.0),
        }
    }
}

/// `|g|` nonincreasing and of constant sign on a log grid of `[k0, 1e12]`.
pub(crate) fn is_monotone_from(g: &dyn Fn(f64) -> f64, k0: f64) -> bool {
    let k0 = k0.max(1.0);
    let (lo, hi) = (k0.ln(), 1e12f64.ln().max(k0.ln() + 1.0));
    let n = 512;
    let mut prev = g(k0);
    for i in 1..=n {
        let t = (lo + (hi - lo) * i as f64 / n as f64).exp();
        let v = g(t);
        if v * prev < 0.0 || v.abs() > prev.abs() * (1.0 + 1e-12) {
            return false;
        }
        prev = v;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_drops_trailing_zeros() {
        let s = SeqSpec::finite("x", vec![Rational::one(), Rational::zero(), Rational::zero()]);
        assert_eq!(s.support(), Some(1));
        assert_eq!(s.term(5), 0.0);
        assert_eq!(s.exact_sum(), Some(&Rational::one()));
    }

    #[test]
    fn undeclared_growth_is_rejected() {
        let r = SeqSpec::generator("k^-1/2", |t| t.powf(-0.5), DecayClass::Power { alpha: 2.0, coef: 1.0 });
        assert!(matches!(r, Err(HardyError::Malformed { .. })));
        let r = SeqSpec::generator("spill", |t| if t <= 20.0 { 1.0 } else { 1e-3 }, DecayClass::Compact { support_end: 20 });
        assert!(r.is_err());
    }

    #[test]
    fn monotonicity_is_checked() {
        let s = SeqSpec::generator("wiggle", |t| (2.0 + t.sin()) / (t * t), DecayClass::Power { alpha: 2.0, coef: 3.0 }).unwrap();
        assert!(s.clone().with_monotone_from(1).is_err());
        let s = SeqSpec::generator("k^-2", |t| 1.0 / (t * t), DecayClass::Power { alpha: 2.0, coef: 1.0 }).unwrap();
        assert!(s.with_monotone_from(1).is_ok());
    }

    #[test]
    fn scaling_keeps_exactness() {
        let s = SeqSpec::generator("lam", |t| 1.0 / (t * (t + 1.0)), DecayClass::Power { alpha: 2.0, coef: 1.0 })
            .unwrap()
            .with_exact_terms(|k| Rational::recip_int(k) - Rational::recip_int(k + 1))
            .unwrap()
            .with_exact_sum(Rational::one());
        let d = s.scaled(&Rational::from_int(-2));
        assert_eq!(d.exact_term(1), Some(Rational::from_int(-1)));
        assert_eq!(d.exact_sum(), Some(&Rational::from_int(-2)));
        assert_eq!(d.term(1), -1.0);
    }
}

//! Pointwise upper envelopes of the form `Σ c·t^p·(ln t)^m` on `[from, ∞)`.
//!
//! An envelope bounds `|g(t)|` for every `t ≥ from` and turns an improper
//! tail `∫_T^∞ |g|` into a closed-form remainder. Behaviour at the origin is
//! expressed in the mirrored variable `s = 1/t`, so the same type serves both
//! ends of the half-line.

use serde::Serialize;

const E: f64 = std::f64::consts::E;
const EXP_LIMIT: f64 = 700.0;

/// One term `coef · t^power · (ln t)^log_power`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnvelopeTerm {
    pub coef: f64,
    pub power: f64,
    pub log_power: f64,
}

impl EnvelopeTerm {
    pub fn new(coef: f64, power: f64, log_power: f64) -> Self {
        EnvelopeTerm {
            coef,
            power,
            log_power,
        }
    }

    fn eval(&self, t: f64) -> f64 {
        if self.coef == 0.0 {
            return 0.0;
        }
        let lt = t.ln();
        self.coef * (self.power * lt + self.log_power * lt.ln()).exp()
    }

    fn is_integrable(&self) -> bool {
        self.coef == 0.0
            || self.power < -1.0 - POWER_EPS
            || (is_minus_one(self.power) && self.log_power < -1.0 - POWER_EPS)
    }

    /// `∫_T^∞` of this term, `None` when the bound does not apply at `T`.
    fn remainder(&self, t_cut: f64) -> Option<f64> {
        if self.coef == 0.0 {
            return Some(0.0);
        }
        let lt = t_cut.ln();
        let m = self.log_power;
        if self.power < -1.0 - POWER_EPS {
            let a = -self.power - 1.0;
            let base = (-a * lt + m * lt.ln()).exp();
            if m <= 0.0 {
                Some(self.coef * base / a)
            } else if a * lt > m {
                Some(self.coef * base / (a - m / lt))
            } else {
                None
            }
        } else if is_minus_one(self.power) && m < -1.0 - POWER_EPS {
            Some(self.coef * ((m + 1.0) * lt.ln()).exp() / (-m - 1.0))
        } else {
            None
        }
    }

    /// Envelope term bounding `x ↦ ∫_x^∞ term`, plus the smallest `x` where it holds.
    fn tail_integral(&self) -> Option<(EnvelopeTerm, f64)> {
        if self.coef == 0.0 {
            return Some((*self, E));
        }
        let m = self.log_power;
        if self.power < -1.0 - POWER_EPS {
            let a = -self.power - 1.0;
            if m <= 0.0 {
                Some((EnvelopeTerm::new(self.coef / a, self.power + 1.0, m), E))
            } else {
                let from = (2.0 * m / a).min(EXP_LIMIT).exp();
                Some((EnvelopeTerm::new(2.0 * self.coef / a, self.power + 1.0, m), from))
            }
        } else if is_minus_one(self.power) && m < -1.0 - POWER_EPS {
            Some((EnvelopeTerm::new(self.coef / (-m - 1.0), 0.0, m + 1.0), E))
        } else {
            None
        }
    }

    /// Smallest `t ≥ e` beyond which the term is non-increasing.
    fn decreasing_from(&self) -> f64 {
        if self.coef == 0.0 {
            return E;
        }
        if self.power < 0.0 {
            if self.log_power <= 0.0 {
                E
            } else {
                (self.log_power / -self.power).min(EXP_LIMIT).exp().max(E)
            }
        } else if self.power == 0.0 && self.log_power <= 0.0 {
            E
        } else {
            f64::INFINITY
        }
    }
}

const POWER_EPS: f64 = 1e-12;

fn is_minus_one(p: f64) -> bool {
    (p + 1.0).abs() <= POWER_EPS
}

/// Upper envelope `Σ c·t^p·(ln t)^m`, valid for `t ≥ from` (`from ≥ e`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Envelope {
    terms: Vec<EnvelopeTerm>,
    from: f64,
}

impl Envelope {
    pub fn new(terms: Vec<EnvelopeTerm>, from: f64) -> Self {
        Envelope {
            terms: terms.into_iter().filter(|t| t.coef != 0.0).collect(),
            from: from.max(E),
        }
    }

    pub fn single(coef: f64, power: f64, log_power: f64) -> Self {
        Envelope::new(vec![EnvelopeTerm::new(coef, power, log_power)], E)
    }

    /// The zero envelope: the function vanishes identically beyond `from`.
    pub fn zero(from: f64) -> Self {
        Envelope::new(Vec::new(), from)
    }

    pub fn terms(&self) -> &[EnvelopeTerm] {
        &self.terms
    }

    pub fn from(&self) -> f64 {
        self.from
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_from(mut self, from: f64) -> Self {
        self.from = self.from.max(from);
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    pub fn is_integrable(&self) -> bool {
        self.terms.iter().all(EnvelopeTerm::is_integrable)
    }

    /// True when the envelope stays bounded as `t → ∞`.
    pub fn is_bounded(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.power < 0.0 || (t.power == 0.0 && t.log_power <= 0.0))
    }

    /// Certified bound on `∫_T^∞` of the envelope; `None` if `T < from`,
    /// the envelope is not integrable, or a log factor has not settled yet.
    pub fn remainder(&self, t_cut: f64) -> Option<f64> {
        if t_cut < self.from || !t_cut.is_finite() {
            return None;
        }
        self.terms.iter().try_fold(0.0, |acc, term| Some(acc + term.remainder(t_cut)?))
    }

    /// Envelope of `x ↦ ∫_x^∞ envelope`.
    pub fn tail_integral(&self) -> Option<Envelope> {
        let mut from = self.from;
        let mut out = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let (t, f) = term.tail_integral()?;
            from = from.max(f);
            out.push(t);
        }
        Some(Envelope::new(out, from))
    }

    pub fn scale(&self, c: f64) -> Envelope {
        let c = c.abs();
        Envelope::new(
            self.terms
                .iter()
                .map(|t| EnvelopeTerm::new(t.coef * c, t.power, t.log_power))
                .collect(),
            self.from,
        )
    }

    /// Multiply by `t^k`.
    pub fn mul_power(&self, k: f64) -> Envelope {
        Envelope::new(
            self.terms
                .iter()
                .map(|t| EnvelopeTerm::new(t.coef, t.power + k, t.log_power))
                .collect(),
            self.from,
        )
    }

    /// Multiply by `ln t`.
    pub fn mul_log(&self) -> Envelope {
        Envelope::new(
            self.terms
                .iter()
                .map(|t| EnvelopeTerm::new(t.coef, t.power, t.log_power + 1.0))
                .collect(),
            self.from,
        )
    }

    /// Multiply by `ln t + c` (`c ≥ 0`), i.e. a logarithmic weight bounded
    /// by `ln(c'·t)` on the envelope's range.
    pub fn mul_log_plus(&self, c: f64) -> Envelope {
        self.mul_log().add(&self.scale(c))
    }

    pub fn add(&self, other: &Envelope) -> Envelope {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Envelope::new(terms, self.from.max(other.from))
    }

    /// Envelope of the `p`-th power (`p ≥ 1`): `(Σ a_i)^p ≤ n^(p-1) Σ a_i^p`.
    pub fn powf(&self, p: f64) -> Envelope {
        let n = self.terms.len().max(1) as f64;
        let k = n.powf(p - 1.0);
        Envelope::new(
            self.terms
                .iter()
                .map(|t| EnvelopeTerm::new(k * t.coef.powf(p), t.power * p, t.log_power * p))
                .collect(),
            self.from,
        )
    }

    /// Smallest point beyond which every term is non-increasing (integral-test
    /// requirement for sums).
    pub fn decreasing_from(&self) -> f64 {
        self.terms
            .iter()
            .map(EnvelopeTerm::decreasing_from)
            .fold(self.from, f64::max)
    }

    /// Checks `|g(t)| ≤ envelope(t)` on `n` log-spaced points of `[from, upto]`.
    /// Returns the first violating point.
    pub fn check_bound<G: Fn(f64) -> f64>(&self, g: G, upto: f64, n: usize) -> Result<(), f64> {
        let lo = self.from.ln();
        let hi = upto.max(self.from * 2.0).ln();
        for i in 0..n {
            let t = (lo + (hi - lo) * (i as f64 + 0.5) / n as f64).exp();
            let v = g(t).abs();
            let bound = self.eval(t);
            if v > bound * (1.0 + 1e-9) + 1e-300 {
                return Err(t);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_remainder_is_closed_form() {
        let env = Envelope::single(1.0, -2.0, 0.0);
        assert!((env.remainder(10.0).unwrap() - 0.1).abs() < 1e-15);
        assert!(env.is_integrable());
    }

    #[test]
    fn power_log_remainder() {
        // ∫_T^∞ dt/(t ln² t) = 1/ln T
        let env = Envelope::single(1.0, -1.0, -2.0);
        let t = 1e6_f64;
        assert!((env.remainder(t).unwrap() - 1.0 / t.ln()).abs() < 1e-15);
    }

    #[test]
    fn harmonic_tail_is_not_integrable() {
        let env = Envelope::single(1.0, -1.0, 0.0);
        assert!(!env.is_integrable());
        assert_eq!(env.remainder(100.0), None);
        assert!(env.tail_integral().is_none());
        let loglog = Envelope::single(1.0, -1.0, -1.0);
        assert!(!loglog.is_integrable());
    }

    #[test]
    fn remainder_below_from_is_rejected() {
        let env = Envelope::single(1.0, -2.0, 0.0).with_from(100.0);
        assert_eq!(env.remainder(50.0), None);
        assert!(env.remainder(200.0).is_some());
    }

    #[test]
    fn positive_log_power_remainder_bounds_quadrature() {
        // ∫_T^∞ t^-2 ln t dt = (ln T + 1)/T
        let env = Envelope::single(1.0, -2.0, 1.0);
        let t = 50.0_f64;
        let exact = (t.ln() + 1.0) / t;
        let bound = env.remainder(t).unwrap();
        assert!(bound >= exact);
        assert!(bound < 1.5 * exact);
    }

    #[test]
    fn tail_integral_envelope_dominates() {
        let env = Envelope::single(3.0, -1.5, 1.0);
        let tail = env.tail_integral().unwrap();
        for x in [tail.from(), tail.from() * 10.0, 1e9] {
            let r = env.remainder(x).unwrap();
            assert!(tail.eval(x) >= r, "x={x}");
        }
    }

    #[test]
    fn decreasing_from_respects_log_growth() {
        let env = Envelope::single(1.0, -0.5, 2.0);
        // derivative sign: -0.5 ln t + 2 < 0  ⇔  t > e^4
        assert!((env.decreasing_from() - 4.0_f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn powf_bounds_sum_power() {
        let env = Envelope::single(1.0, -1.0, 0.0).add(&Envelope::single(2.0, -2.0, 0.0));
        let sq = env.powf(2.0);
        for t in [3.0, 10.0, 1e4] {
            assert!(sq.eval(t) >= env.eval(t).powi(2));
        }
    }
}

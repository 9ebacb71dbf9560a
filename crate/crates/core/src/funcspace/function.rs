use std::collections::BTreeMap;

use serde::Serialize;

use super::expr::{check_antiderivative, Expr};
use crate::envelope::Envelope;
use crate::error::{HardyError, Result};

/// One closed-form piece on the half-open interval `(lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub expr: Expr,
    pub antiderivative: Option<Expr>,
}

impl Piece {
    pub fn new(lo: f64, hi: f64, expr: Expr) -> Self {
        Piece {
            lo,
            hi,
            expr,
            antiderivative: None,
        }
    }

    pub fn with_antiderivative(mut self, anti: Expr) -> Self {
        self.antiderivative = Some(anti);
        self
    }

    pub fn zero(lo: f64, hi: f64) -> Self {
        Piece::new(lo, hi, Expr::zero()).with_antiderivative(Expr::zero())
    }

    fn contains(&self, t: f64) -> bool {
        self.lo < t && t <= self.hi
    }

    /// Interior sample points, log-spaced, clear of both ends.
    fn samples(&self, n: usize) -> Vec<f64> {
        let (lo, hi) = match (self.lo == 0.0, self.hi.is_infinite()) {
            (true, true) => (1e-9, 1e9),
            (true, false) => (self.hi * 1e-9, self.hi),
            (false, true) => (self.lo, self.lo * 1e9),
            (false, false) => (self.lo, self.hi),
        };
        let (a, b) = ((lo * 1.01).ln(), (hi * 0.99).ln());
        (0..n)
            .map(|i| (a + (b - a) * (i as f64 + 0.5) / n as f64).exp())
            .filter(|t| self.contains(*t))
            .collect()
    }

    /// `∫_a^b` of this piece from its antiderivative; `a = 0` and `b = ∞`
    /// use the IEEE limits of the antiderivative expression.
    fn integral(&self, a: f64, b: f64) -> Option<f64> {
        let anti = self.antiderivative.as_ref()?;
        if a == b {
            return Some(0.0);
        }
        let v = anti.eval(b) - anti.eval(a);
        v.is_finite().then_some(v)
    }
}

/// Declared behaviour as `t → ∞`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailClass {
    /// `f = 0` on `(support_end, ∞)`.
    Compact { support_end: f64 },
    /// `|f(t)| ≤ coef·t^(-alpha)` for `t ≥ e`, `alpha > 1`.
    Power { alpha: f64, coef: f64 },
    /// `|f(t)| ≤ coef·t^(-1)(ln t)^(-beta)` for `t ≥ e`, `beta > 1`.
    PowerLog { beta: f64, coef: f64 },
    Custom(Envelope),
}

/// Declared behaviour as `t → 0⁺`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OriginClass {
    /// `f = 0` on `(0, until]`.
    Vanishing { until: f64 },
    /// `|f(t)| ≤ bound` for `t ≤ 1/e`.
    Bounded { bound: f64 },
    /// `|f(t)| ≤ coef·t^(-alpha)` for `t ≤ 1/e`, `alpha < 1`.
    Power { alpha: f64, coef: f64 },
    /// `|f(t)| ≤ coef·t^(-1)(ln 1/t)^(-beta)` for `t ≤ 1/e`, `beta > 1`.
    PowerLog { beta: f64, coef: f64 },
    /// Envelope in the mirrored variable `s = 1/t`.
    Custom(Envelope),
}

impl TailClass {
    pub fn envelope(&self) -> Envelope {
        match *self {
            TailClass::Compact { support_end } => Envelope::zero(support_end),
            TailClass::Power { alpha, coef } => Envelope::single(coef, -alpha, 0.0),
            TailClass::PowerLog { beta, coef } => Envelope::single(coef, -1.0, -beta),
            TailClass::Custom(ref env) => env.clone(),
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        match *self {
            TailClass::Compact { support_end } if !(support_end > 0.0) => {
                Err(format!("compact support end {support_end} must be positive"))
            }
            TailClass::Power { alpha, .. } if !(alpha > 1.0) => {
                Err(format!("power tail needs alpha > 1, got {alpha}"))
            }
            TailClass::PowerLog { beta, .. } if !(beta > 1.0) => {
                Err(format!("power-log tail needs beta > 1, got {beta}"))
            }
            _ => Ok(()),
        }
    }
}

impl OriginClass {
    /// Envelope of `s ↦ |f(1/s)|`.
    pub fn envelope(&self) -> Envelope {
        match *self {
            OriginClass::Vanishing { until } => Envelope::zero(1.0 / until),
            OriginClass::Bounded { bound } => Envelope::single(bound, 0.0, 0.0),
            OriginClass::Power { alpha, coef } => Envelope::single(coef, alpha, 0.0),
            OriginClass::PowerLog { beta, coef } => Envelope::single(coef, 1.0, -beta),
            OriginClass::Custom(ref env) => env.clone(),
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        match *self {
            OriginClass::Vanishing { until } if !(until > 0.0) => {
                Err(format!("vanishing interval end {until} must be positive"))
            }
            OriginClass::Power { alpha, .. } if !(alpha < 1.0) => {
                Err(format!("power blow-up needs alpha < 1, got {alpha}"))
            }
            OriginClass::PowerLog { beta, .. } if !(beta > 1.0) => {
                Err(format!("power-log blow-up needs beta > 1, got {beta}"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    TotalIntegral,
    L1Norm,
    WeightedNorm,
}

/// Where a registered exact value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Forced by the definition of the function.
    Definition,
    /// Elementary closed form.
    ClosedForm,
    /// Frozen from the independent high-precision oracle.
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExactValue {
    pub value: f64,
    pub provenance: Provenance,
}

/// Piecewise closed-form function on `(0, ∞)`.
///
/// Pieces are `(lo, hi]` intervals, so evaluation at a breakpoint returns the
/// left piece's value.
#[derive(Clone, Debug)]
pub struct TestFunction {
    name: String,
    pieces: Vec<Piece>,
    tail: TailClass,
    origin: OriginClass,
    exact_values: BTreeMap<Functional, ExactValue>,
}

impl TestFunction {
    pub fn new(
        name: impl Into<String>,
        pieces: Vec<Piece>,
        tail: TailClass,
        origin: OriginClass,
    ) -> Result<Self> {
        let f = TestFunction {
            name: name.into(),
            pieces,
            tail,
            origin,
            exact_values: BTreeMap::new(),
        };
        f.validate().map_err(|reason| HardyError::Malformed {
            name: f.name.clone(),
            reason,
        })?;
        Ok(f)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let ps = &self.pieces;
        if ps.is_empty() {
            return Err("no pieces".into());
        }
        if ps[0].lo != 0.0 {
            return Err(format!("first piece starts at {}, not 0", ps[0].lo));
        }
        if !ps[ps.len() - 1].hi.is_infinite() {
            return Err("last piece does not extend to infinity".into());
        }
        for (i, p) in ps.iter().enumerate() {
            if !(p.lo < p.hi) {
                return Err(format!("piece {i} is empty: ({}, {}]", p.lo, p.hi));
            }
            if i + 1 < ps.len() && p.hi != ps[i + 1].lo {
                return Err(format!("gap or overlap between pieces {i} and {}", i + 1));
            }
            let samples = p.samples(8);
            for &t in &samples {
                let v = p.expr.eval(t);
                if !v.is_finite() {
                    return Err(format!("piece {i} evaluates to {v} at t = {t}"));
                }
            }
            if let Some(anti) = &p.antiderivative {
                check_antiderivative(&p.expr, anti, &samples, 1e-6)
                    .map_err(|t| format!("antiderivative of piece {i} fails at t = {t}"))?;
            }
        }
        self.tail.validate()?;
        self.origin.validate()?;

        if let TailClass::Compact { support_end } = self.tail {
            let samples = log_grid(support_end * 1.0001, support_end * 1e12, 64);
            if let Some(t) = samples.iter().find(|&&t| self.value(t) != 0.0) {
                return Err(format!("nonzero at t = {t} beyond declared support"));
            }
        } else {
            let env = self.tail_envelope();
            env.check_bound(|t| self.value(t), env.from() * 1e12, 64)
                .map_err(|t| format!("tail envelope violated at t = {t}"))?;
        }
        if let OriginClass::Vanishing { until } = self.origin {
            if let Some(t) = log_grid(until * 1e-12, until, 64)
                .iter()
                .find(|&&t| self.value(t) != 0.0)
            {
                return Err(format!("nonzero at t = {t} inside declared vanishing interval"));
            }
        } else {
            let env = self.origin_envelope();
            env.check_bound(|s| self.value(1.0 / s), env.from() * 1e12, 64)
                .map_err(|s| format!("origin envelope violated at t = {}", 1.0 / s))?;
        }
        Ok(())
    }

    pub fn with_exact(mut self, functional: Functional, value: f64, provenance: Provenance) -> Self {
        self.exact_values.insert(functional, ExactValue { value, provenance });
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn tail(&self) -> &TailClass {
        &self.tail
    }

    pub fn origin(&self) -> &OriginClass {
        &self.origin
    }

    pub fn tail_envelope(&self) -> Envelope {
        self.tail.envelope()
    }

    pub fn origin_envelope(&self) -> Envelope {
        self.origin.envelope()
    }

    pub fn exact_values(&self) -> &BTreeMap<Functional, ExactValue> {
        &self.exact_values
    }

    pub fn exact_value(&self, functional: Functional) -> Option<f64> {
        self.exact_values.get(&functional).map(|v| v.value)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces[..self.pieces.len() - 1].iter().map(|p| p.hi).collect()
    }

    fn piece_index(&self, t: f64) -> usize {
        self.pieces
            .partition_point(|p| p.hi < t)
            .min(self.pieces.len() - 1)
    }

    /// Value at `t > 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(HardyError::Domain(format!("{} evaluated at t = {t}", self.name)));
        }
        Ok(self.value(t))
    }

    /// Unchecked evaluation for integrands; NaN for `t ≤ 0`.
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return f64::NAN;
        }
        self.pieces[self.piece_index(t)].expr.eval(t)
    }

    pub fn has_exact_antiderivative(&self) -> bool {
        self.pieces.iter().all(|p| p.antiderivative.is_some())
    }

    /// Exact `∫_a^b f` from the piecewise antiderivatives, when every piece
    /// overlapping `[a, b]` carries one. `a = 0` means `0⁺`; `b` may be `∞`.
    pub fn exact_antiderivative(&self, a: f64, b: f64) -> Result<Option<f64>> {
        if !(a >= 0.0 && a <= b) {
            return Err(HardyError::Precondition(format!(
                "exact_antiderivative needs 0 ≤ a ≤ b, got a = {a}, b = {b}"
            )));
        }
        if a == b {
            return Ok(Some(0.0));
        }
        let mut total = 0.0;
        for p in &self.pieces {
            let lo = p.lo.max(a);
            let hi = p.hi.min(b);
            if lo >= hi {
                continue;
            }
            match p.integral(lo, hi) {
                Some(v) => total += v,
                None => return Ok(None),
            }
        }
        Ok(Some(total))
    }

    /// `|f|`, keeping antiderivatives on pieces of constant sign.
    pub fn abs(&self) -> TestFunction {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let samples = p.samples(32);
                let vals: Vec<f64> = samples.iter().map(|&t| p.expr.eval(t)).collect();
                if vals.iter().all(|v| *v >= 0.0) {
                    p.clone()
                } else if vals.iter().all(|v| *v <= 0.0) {
                    Piece {
                        lo: p.lo,
                        hi: p.hi,
                        expr: p.expr.clone().scale(-1.0),
                        antiderivative: p.antiderivative.clone().map(|a| a.scale(-1.0)),
                    }
                } else {
                    Piece::new(p.lo, p.hi, p.expr.clone().abs())
                }
            })
            .collect();
        let mut exact_values = BTreeMap::new();
        if let Some(v) = self.exact_values.get(&Functional::L1Norm) {
            exact_values.insert(Functional::TotalIntegral, *v);
            exact_values.insert(Functional::L1Norm, *v);
        }
        if let Some(v) = self.exact_values.get(&Functional::WeightedNorm) {
            exact_values.insert(Functional::WeightedNorm, *v);
        }
        TestFunction {
            name: format!("abs({})", self.name),
            pieces,
            tail: self.tail.clone(),
            origin: self.origin.clone(),
            exact_values,
        }
    }

    pub fn scaled(&self, k: f64) -> TestFunction {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                lo: p.lo,
                hi: p.hi,
                expr: p.expr.clone().scale(k),
                antiderivative: p.antiderivative.clone().map(|a| a.scale(k)),
            })
            .collect();
        let tail = match &self.tail {
            TailClass::Compact { support_end } => TailClass::Compact {
                support_end: *support_end,
            },
            other => TailClass::Custom(other.envelope().scale(k)),
        };
        let origin = match &self.origin {
            OriginClass::Vanishing { until } => OriginClass::Vanishing { until: *until },
            other => OriginClass::Custom(other.envelope().scale(k)),
        };
        let exact_values = self
            .exact_values
            .iter()
            .map(|(f, v)| {
                let value = match f {
                    Functional::TotalIntegral => k * v.value,
                    _ => k.abs() * v.value,
                };
                (*f, ExactValue { value, provenance: v.provenance })
            })
            .collect();
        TestFunction {
            name: format!("{k}*{}", self.name),
            pieces,
            tail,
            origin,
            exact_values,
        }
    }

    /// `Σ k_i f_i` on the merged breakpoint set.
    pub fn linear_combination(name: impl Into<String>, terms: &[(f64, &TestFunction)]) -> Result<TestFunction> {
        let name = name.into();
        if terms.is_empty() {
            return Err(HardyError::Precondition("empty linear combination".into()));
        }
        let mut cuts: Vec<f64> = terms.iter().flat_map(|(_, f)| f.breakpoints()).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut bounds = vec![0.0];
        bounds.extend(cuts);
        bounds.push(f64::INFINITY);

        let mut pieces = Vec::with_capacity(bounds.len() - 1);
        for w in bounds.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let probe = if hi.is_infinite() { lo * 2.0 + 1.0 } else { 0.5 * (lo + hi) };
            let mut exprs = Vec::new();
            let mut antis = Some(Vec::new());
            for (k, f) in terms {
                let p = &f.pieces[f.piece_index(probe)];
                if !p.expr.is_zero() {
                    exprs.push(p.expr.clone().scale(*k));
                }
                match (&mut antis, &p.antiderivative) {
                    (Some(list), Some(a)) => {
                        if !a.is_zero() {
                            list.push(a.clone().scale(*k));
                        }
                    }
                    _ => antis = None,
                }
            }
            let expr = match exprs.len() {
                0 => Expr::zero(),
                1 => exprs.pop().unwrap(),
                _ => Expr::Add(exprs),
            };
            let anti = antis.map(|mut xs| match xs.len() {
                0 => Expr::zero(),
                1 => xs.pop().unwrap(),
                _ => Expr::Add(xs),
            });
            pieces.push(Piece {
                lo,
                hi,
                expr,
                antiderivative: anti,
            });
        }

        let tail = if terms
            .iter()
            .all(|(_, f)| matches!(f.tail, TailClass::Compact { .. }))
        {
            let end = terms
                .iter()
                .map(|(_, f)| match f.tail {
                    TailClass::Compact { support_end } => support_end,
                    _ => unreachable!(),
                })
                .fold(0.0, f64::max);
            TailClass::Compact { support_end: end }
        } else {
            TailClass::Custom(
                terms
                    .iter()
                    .map(|(k, f)| f.tail_envelope().scale(*k))
                    .reduce(|a, b| a.add(&b))
                    .unwrap(),
            )
        };
        let origin = if terms
            .iter()
            .all(|(_, f)| matches!(f.origin, OriginClass::Vanishing { .. }))
        {
            let until = terms
                .iter()
                .map(|(_, f)| match f.origin {
                    OriginClass::Vanishing { until } => until,
                    _ => unreachable!(),
                })
                .fold(f64::INFINITY, f64::min);
            OriginClass::Vanishing { until }
        } else {
            OriginClass::Custom(
                terms
                    .iter()
                    .map(|(k, f)| f.origin_envelope().scale(*k))
                    .reduce(|a, b| a.add(&b))
                    .unwrap(),
            )
        };
        let mut f = TestFunction::new(name, pieces, tail, origin)?;
        let totals: Option<f64> = terms
            .iter()
            .map(|(k, g)| g.exact_value(Functional::TotalIntegral).map(|v| k * v))
            .sum();
        if let Some(total) = totals {
            f = f.with_exact(Functional::TotalIntegral, total, Provenance::ClosedForm);
        }
        Ok(f)
    }

    /// Same function with every antiderivative dropped, forcing quadrature.
    pub fn without_antiderivatives(&self) -> TestFunction {
        let mut f = self.clone();
        for p in &mut f.pieces {
            p.antiderivative = None;
        }
        f.name = format!("{}[quad]", self.name);
        f
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * (i as f64 + 0.5) / n as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step() -> TestFunction {
        TestFunction::new(
            "step",
            vec![
                Piece::zero(0.0, 1.0),
                Piece::new(1.0, 2.0, Expr::c(1.0)).with_antiderivative(Expr::t()),
                Piece::zero(2.0, f64::INFINITY),
            ],
            TailClass::Compact { support_end: 2.0 },
            OriginClass::Vanishing { until: 1.0 },
        )
        .unwrap()
    }

    #[test]
    fn breakpoint_takes_left_value() {
        let f = step();
        assert_eq!(f.eval(1.0).unwrap(), 0.0);
        assert_eq!(f.eval(2.0).unwrap(), 1.0);
        assert_eq!(f.eval(1.5).unwrap(), 1.0);
        assert_eq!(f.eval(2.0000001).unwrap(), 0.0);
    }

    #[test]
    fn nonpositive_argument_is_a_domain_error() {
        let f = step();
        assert!(matches!(f.eval(0.0), Err(HardyError::Domain(_))));
        assert!(matches!(f.eval(-1.0), Err(HardyError::Domain(_))));
    }

    #[test]
    fn gap_is_rejected() {
        let r = TestFunction::new(
            "gappy",
            vec![Piece::zero(0.0, 1.0), Piece::zero(1.5, f64::INFINITY)],
            TailClass::Compact { support_end: 1.0 },
            OriginClass::Bounded { bound: 1.0 },
        );
        assert!(matches!(r, Err(HardyError::Malformed { .. })));
    }

    #[test]
    fn false_compact_support_is_rejected() {
        let r = TestFunction::new(
            "liar",
            vec![Piece::new(0.0, f64::INFINITY, Expr::c(1.0).add(Expr::t()).powf(-2.0))],
            TailClass::Compact { support_end: 5.0 },
            OriginClass::Bounded { bound: 1.0 },
        );
        assert!(r.is_err());
    }

    #[test]
    fn too_small_envelope_is_rejected() {
        let r = TestFunction::new(
            "liar",
            vec![Piece::new(0.0, f64::INFINITY, Expr::c(1.0).add(Expr::t()).powf(-2.0))],
            TailClass::Power { alpha: 3.0, coef: 1.0 },
            OriginClass::Bounded { bound: 1.0 },
        );
        assert!(r.is_err());
    }

    #[test]
    fn wrong_antiderivative_is_rejected() {
        let r = TestFunction::new(
            "bad-anti",
            vec![
                Piece::new(0.0, 1.0, Expr::c(1.0)).with_antiderivative(Expr::t().scale(2.0)),
                Piece::zero(1.0, f64::INFINITY),
            ],
            TailClass::Compact { support_end: 1.0 },
            OriginClass::Bounded { bound: 1.0 },
        );
        assert!(r.is_err());
    }

    #[test]
    fn empty_interval_integral_is_zero() {
        let f = step();
        assert_eq!(f.exact_antiderivative(1.3, 1.3).unwrap(), Some(0.0));
        assert!(f.exact_antiderivative(2.0, 1.0).is_err());
    }

    #[test]
    fn linear_combination_merges_breakpoints() {
        let f = step();
        let g = step().scaled(-1.0);
        let zero = TestFunction::linear_combination("zero", &[(1.0, &f), (1.0, &g)]).unwrap();
        assert_eq!(zero.eval(1.5).unwrap(), 0.0);
        assert_eq!(zero.exact_antiderivative(0.0, f64::INFINITY).unwrap(), Some(0.0));
        assert_eq!(zero.breakpoints(), vec![1.0, 2.0]);
    }
}

use crate::envelope::Envelope;
use crate::error::{HardyError, Result};
use crate::funcspace::{Functional, TestFunction};
use crate::quad::{integrate_from, integrate_halfline, integrate_to, integrate_unchecked, HalfLine, Integral, QuadConfig};

/// Knot range `2^KNOT_MIN ..= 2^KNOT_MAX` of the cumulative table.
const KNOT_MIN: i32 = -100;
const KNOT_MAX: i32 = 100;

/// Prefix and suffix integrals at fixed knots, for functions without an
/// antiderivative. Built once, then read-only.
#[derive(Clone, Debug)]
struct CumulativeTable {
    knots: Vec<f64>,
    /// `∫_0^{knot}`
    prefix: Vec<f64>,
    /// `∫_{knot}^∞`
    suffix: Vec<f64>,
}

/// A test function together with everything the operators need repeatedly:
/// its total integral, its L¹ norm and the cumulative integrals.
#[derive(Clone, Debug)]
pub struct Prepared {
    f: TestFunction,
    cfg: QuadConfig,
    spec: HalfLine,
    total: Option<f64>,
    total_err: f64,
    l1: Option<f64>,
    table: Option<CumulativeTable>,
}

fn finite_value(i: &Integral) -> Option<(f64, f64)> {
    i.finite().map(|r| (r.value, r.total_err()))
}

pub(crate) fn spec_of(f: &TestFunction) -> HalfLine {
    HalfLine::new(f.origin_envelope(), f.tail_envelope(), f.breakpoints())
}

impl Prepared {
    pub fn new(f: &TestFunction, cfg: &QuadConfig) -> Result<Prepared> {
        cfg.validate()?;
        let spec = spec_of(f);
        let g = |t: f64| f.value(t);

        let (total, total_err) = if let Some(v) = f.exact_value(Functional::TotalIntegral) {
            (Some(v), 0.0)
        } else if let Some(v) = f.exact_antiderivative(0.0, f64::INFINITY)? {
            (Some(v), 0.0)
        } else {
            match finite_value(&integrate_halfline(&g, &spec, cfg)?) {
                Some((v, e)) => (Some(v), e),
                None => (None, f64::INFINITY),
            }
        };

        let l1 = if let Some(v) = f.exact_value(Functional::L1Norm) {
            Some(v)
        } else {
            let a = |t: f64| f.value(t).abs();
            finite_value(&integrate_halfline(&a, &spec, cfg)?).map(|(v, e)| v + e)
        };

        let table = if f.has_exact_antiderivative() {
            None
        } else {
            Some(build_table(f, &spec, cfg)?)
        };

        Ok(Prepared {
            f: f.clone(),
            cfg: cfg.clone(),
            spec,
            total,
            total_err,
            l1,
            table,
        })
    }

    pub fn function(&self) -> &TestFunction {
        &self.f
    }

    pub fn config(&self) -> &QuadConfig {
        &self.cfg
    }

    pub fn spec(&self) -> &HalfLine {
        &self.spec
    }

    /// `∫_0^∞ f`, `None` when it does not exist.
    pub fn total(&self) -> Option<f64> {
        self.total
    }

    pub fn total_err(&self) -> f64 {
        self.total_err
    }

    /// `‖f‖₁` (an upper estimate when computed by quadrature).
    pub fn l1(&self) -> Option<f64> {
        self.l1
    }

    pub fn require_total(&self) -> Result<f64> {
        self.total.ok_or_else(|| HardyError::Domain(format!("{} has no finite total integral", self.f.name())))
    }

    pub fn require_l1(&self) -> Result<f64> {
        self.l1.ok_or_else(|| HardyError::Domain(format!("{} is not in L1", self.f.name())))
    }

    /// `F(x) = ∫_0^x f`.
    pub fn cumulative(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(HardyError::Domain(format!("cumulative integral at x = {x}")));
        }
        if x.is_infinite() {
            return self.require_total();
        }
        if let Some(v) = self.f.exact_antiderivative(0.0, x)? {
            return Ok(v);
        }
        let g = |t: f64| self.f.value(t);
        match &self.table {
            Some(tab) if x >= tab.knots[0] && x <= tab.knots[tab.knots.len() - 1] => {
                let i = tab.knots.partition_point(|k| *k <= x) - 1;
                let k = tab.knots[i];
                let piece = if x > k {
                    integrate_unchecked(&g, k, x, &[], &self.cfg)?.value
                } else {
                    0.0
                };
                Ok(tab.prefix[i] + piece)
            }
            _ => match integrate_to(&g, x, &self.spec, &self.cfg)? {
                Integral::Finite(r) => Ok(r.value),
                _ => Err(HardyError::Domain(format!(
                    "∫_0^{x} of {} does not converge",
                    self.f.name()
                ))),
            },
        }
    }

    /// `T(x) = ∫_x^∞ f`, computed without subtracting from the total.
    pub fn tail_mass(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(HardyError::Domain(format!("tail integral at x = {x}")));
        }
        if let Some(v) = self.f.exact_antiderivative(x, f64::INFINITY)? {
            return Ok(v);
        }
        let g = |t: f64| self.f.value(t);
        match &self.table {
            Some(tab) if x >= tab.knots[0] && x <= tab.knots[tab.knots.len() - 1] => {
                let i = tab.knots.partition_point(|k| *k < x);
                let k = tab.knots[i];
                let piece = if k > x {
                    integrate_unchecked(&g, x, k, &[], &self.cfg)?.value
                } else {
                    0.0
                };
                Ok(tab.suffix[i] + piece)
            }
            _ => match integrate_from(&g, x, &self.spec, &self.cfg)? {
                Integral::Finite(r) => Ok(r.value),
                _ => Err(HardyError::Domain(format!(
                    "∫_{x}^inf of {} does not converge",
                    self.f.name()
                ))),
            },
        }
    }

    /// `Qf(x) = F(x)/x`.
    pub fn q(&self, x: f64) -> Result<f64> {
        Ok(self.cumulative(x)? / x)
    }

    /// `Hf(x) = Qf(x) - (∫f)/(1+x)`, evaluated as `F/(x(1+x)) - T/(1+x)`,
    /// which avoids cancelling two `O(1/x)` terms for large `x`.
    pub fn h(&self, x: f64) -> Result<f64> {
        self.require_total()?;
        let f = self.cumulative(x)?;
        let t = self.tail_mass(x)?;
        Ok(f / (x * (1.0 + x)) - t / (1.0 + x))
    }

    /// Envelope in `s = 1/x` of `∫_0^x |f|`.
    pub fn cumulative_origin_envelope(&self) -> Option<Envelope> {
        self.spec.origin.mul_power(-2.0).tail_integral()
    }

    /// Envelope of `∫_x^∞ |f|`.
    pub fn tail_mass_envelope(&self) -> Option<Envelope> {
        self.spec.tail.tail_integral()
    }
}

fn build_table(f: &TestFunction, spec: &HalfLine, cfg: &QuadConfig) -> Result<CumulativeTable> {
    let mut knots: Vec<f64> = (KNOT_MIN..=KNOT_MAX).map(|k| 2f64.powi(k)).collect();
    knots.extend(f.breakpoints());
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let g = |t: f64| f.value(t);
    let domain = |what: &str| HardyError::Domain(format!("{what} of {} does not converge", f.name()));

    let head = integrate_to(&g, knots[0], spec, cfg)?
        .value()
        .ok_or_else(|| domain("origin integral"))?;
    let tail = integrate_from(&g, knots[knots.len() - 1], spec, cfg)?
        .value()
        .ok_or_else(|| domain("tail integral"))?;
    let segments: Vec<f64> = knots
        .windows(2)
        .map(|w| integrate_unchecked(&g, w[0], w[1], &[], cfg).map(|r| r.value))
        .collect::<Result<_>>()?;

    let mut prefix = Vec::with_capacity(knots.len());
    let mut acc = head;
    prefix.push(acc);
    for s in &segments {
        acc += s;
        prefix.push(acc);
    }
    let mut suffix = vec![0.0; knots.len()];
    let mut acc = tail;
    suffix[knots.len() - 1] = acc;
    for i in (0..segments.len()).rev() {
        acc += segments[i];
        suffix[i] = acc;
    }
    Ok(CumulativeTable { knots, prefix, suffix })
}

//! Half-line functionals of `f`, `Qf` and `Hf`.

use std::cell::RefCell;
use std::f64::consts::LN_2;

use super::prepared::Prepared;
use crate::envelope::Envelope;
use crate::error::{HardyError, Result};
use crate::funcspace::Functional;
use crate::quad::{integrate_halfline, HalfLine, Integral, QuadResult};

const LN_4: f64 = 2.0 * LN_2;

/// `ln(1 + 1/t) + ln(1 + t) = ln(2 + t + 1/t)`.
#[inline]
pub fn log_weight(t: f64) -> f64 {
    (1.0 / t).ln_1p() + t.ln_1p()
}

fn exact(v: f64) -> Integral {
    Integral::Finite(QuadResult {
        value: v,
        err_est: 0.0,
        tail_bound: 0.0,
        subdivisions: 0,
        converged: true,
    })
}

fn run(p: &Prepared, g: &dyn Fn(f64) -> f64, origin: Envelope, tail: Envelope) -> Result<Integral> {
    let spec = HalfLine::new(origin, tail, p.function().breakpoints());
    integrate_halfline(g, &spec, p.config())
}

/// Runs a fallible integrand, surfacing its first error instead of the NaN
/// the quadrature would see.
fn run_fallible(
    p: &Prepared,
    g: &dyn Fn(f64) -> Result<f64>,
    origin: Envelope,
    tail: Envelope,
) -> Result<Integral> {
    let first = RefCell::new(None);
    let h = |x: f64| match g(x) {
        Ok(v) => v,
        Err(e) => {
            first.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let r = run(p, &h, origin, tail);
    match first.into_inner() {
        Some(e) => Err(e),
        None => r,
    }
}

/// `‖f‖₁` by quadrature (ignores registered values).
pub fn l1_norm(p: &Prepared) -> Result<Integral> {
    let s = p.spec();
    run(p, &|t| p.function().value(t).abs(), s.origin.clone(), s.tail.clone())
}

/// `∫ f` by quadrature.
pub fn total_integral(p: &Prepared) -> Result<Integral> {
    let s = p.spec();
    run(p, &|t| p.function().value(t), s.origin.clone(), s.tail.clone())
}

/// `W(f) = ∫ |f(t)| (ln(1+1/t) + ln(1+t)) dt`.
pub fn log_weight_norm(p: &Prepared) -> Result<Integral> {
    let s = p.spec();
    // w(t) = w(1/t) and w(t) ≤ ln t + ln 4 for t ≥ 1
    run(
        p,
        &|t| p.function().value(t).abs() * log_weight(t),
        s.origin.mul_log_plus(LN_4),
        s.tail.mul_log_plus(LN_4),
    )
}

/// `∫ |f(t)| ln(1+1/t) dt`.
pub fn weighted_i1_direct(p: &Prepared) -> Result<Integral> {
    let s = p.spec();
    run(
        p,
        &|t| p.function().value(t).abs() * (1.0 / t).ln_1p(),
        s.origin.mul_log_plus(LN_2),
        s.tail.mul_power(-1.0),
    )
}

/// `∫ |f(t)| ln(1+t) dt`.
pub fn weighted_i2_direct(p: &Prepared) -> Result<Integral> {
    let s = p.spec();
    run(
        p,
        &|t| p.function().value(t).abs() * t.ln_1p(),
        s.origin.mul_power(-1.0),
        s.tail.mul_log_plus(LN_2),
    )
}

fn need_abs(p: &Prepared, what: &str) -> Result<()> {
    if is_nonnegative(p) {
        Ok(())
    } else {
        Err(HardyError::Precondition(format!(
            "{what} takes |f|; prepare abs({}) instead",
            p.function().name()
        )))
    }
}

fn l1_envelopes(p: &Prepared) -> Result<(f64, Envelope, Envelope)> {
    let l1 = p.require_l1()?;
    let cum = p
        .cumulative_origin_envelope()
        .ok_or_else(|| HardyError::Domain(format!("{} is not integrable at 0", p.function().name())))?;
    let tail = p
        .tail_mass_envelope()
        .ok_or_else(|| HardyError::Domain(format!("{} is not integrable at infinity", p.function().name())))?;
    Ok((l1, cum, tail))
}

/// `I₁ = ∫_0^∞ (1/x - 1/(x+1)) ∫_0^x |f| dx`, as an iterated integral.
/// `p` must be prepared from a nonnegative function.
pub fn split_i1(p: &Prepared) -> Result<Integral> {
    need_abs(p, "split_i1")?;
    let (l1, cum, _) = l1_envelopes(p)?;
    let g = |x: f64| p.cumulative(x).map(|a| a / (x * (1.0 + x)));
    run_fallible(p, &g, cum.mul_power(1.0), Envelope::single(l1, -2.0, 0.0))
}

/// `I₂ = ∫_0^∞ (x+1)⁻¹ ∫_x^∞ |f| dx`, as an iterated integral.
pub fn split_i2(p: &Prepared) -> Result<Integral> {
    need_abs(p, "split_i2")?;
    let (l1, _, tail) = l1_envelopes(p)?;
    let g = |x: f64| p.tail_mass(x).map(|b| b / (1.0 + x));
    run_fallible(p, &g, Envelope::single(l1, 0.0, 0.0), tail.mul_power(-1.0))
}

/// `‖Hf‖₁`.
pub fn l1_norm_h(p: &Prepared) -> Result<Integral> {
    p.require_total()?;
    let (l1, cum, tail) = l1_envelopes(p)?;
    let g = |x: f64| p.h(x).map(f64::abs);
    run_fallible(
        p,
        &g,
        cum.mul_power(1.0).add(&Envelope::single(l1, 0.0, 0.0)),
        Envelope::single(l1, -2.0, 0.0).add(&tail.mul_power(-1.0)),
    )
}

/// `‖Qf‖₁`; finite only in the mean-zero case.
pub fn l1_norm_q(p: &Prepared) -> Result<Integral> {
    let (l1, cum, tail) = l1_envelopes(p)?;
    // |F(x)| = |T(x)| once the total vanishes exactly
    let tail_env = if p.function().exact_value(Functional::TotalIntegral) == Some(0.0) {
        tail.mul_power(-1.0)
    } else {
        Envelope::single(l1, -1.0, 0.0)
    };
    let g = |x: f64| p.q(x).map(f64::abs);
    run_fallible(p, &g, cum.mul_power(1.0), tail_env)
}

/// `∫ (Qf)^p` and `∫ f^p` for nonnegative `f`.
pub fn lp_pair(p: &Prepared, exponent: f64) -> Result<(Integral, Integral)> {
    need_abs(p, "cont_hardy_ratio")?;
    let (l1, cum, _) = l1_envelopes(p)?;
    let qp = |x: f64| p.q(x).map(|q| q.powf(exponent));
    let num = run_fallible(
        p,
        &qp,
        cum.mul_power(1.0).powf(exponent),
        Envelope::single(l1.powf(exponent), -exponent, 0.0),
    )?;
    let s = p.spec();
    let fp = |t: f64| p.function().value(t).powf(exponent);
    let den = run(p, &fp, s.origin.powf(exponent), s.tail.powf(exponent))?;
    Ok((num, den))
}

/// Sampled sign check on a log grid plus every piece.
pub fn is_nonnegative(p: &Prepared) -> bool {
    let f = p.function();
    let grid = (0..4096).map(|i| 10f64.powf(-12.0 + 24.0 * i as f64 / 4095.0));
    let mids = f.pieces().iter().map(|pc| {
        if pc.hi.is_infinite() {
            2.0 * pc.lo + 1.0
        } else {
            0.5 * (pc.lo + pc.hi)
        }
    });
    grid.chain(mids).all(|t| f.value(t) >= 0.0)
}

pub(crate) fn exact_or(p: &Prepared, functional: Functional, fallback: impl FnOnce() -> Result<Integral>) -> Result<Integral> {
    match p.function().exact_value(functional) {
        Some(v) => Ok(exact(v)),
        None => fallback(),
    }
}

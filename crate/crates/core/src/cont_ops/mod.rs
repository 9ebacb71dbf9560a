//! The continuous operators
//!
//! ```text
//! Qf(x) = (1/x) ∫_0^x f        Hf(x) = Qf(x) - (∫_0^∞ f)/(1+x)
//! ```
//!
//! and the functionals that decide whether `Hf` is integrable.

mod checks;
mod norms;
mod oracle;
mod prepared;

pub use checks::{
    cont_hardy_ratio, equivalence_ratio, fubini_check_cont, mean_limit_check, ContReport, EquivalenceRatio,
    FubiniReport, HardyRatio, MeanLimitReport,
};
pub use norms::{
    is_nonnegative, l1_norm, l1_norm_h, l1_norm_q, log_weight, log_weight_norm, split_i1, split_i2,
    total_integral, weighted_i1_direct, weighted_i2_direct,
};
pub use oracle::{oracle_qf0, oracle_qfe};
pub use prepared::Prepared;

use crate::error::{HardyError, Result};
use crate::funcspace::TestFunction;
use crate::quad::{integrate_to, Integral, QuadConfig};

/// `Qf(x)`. Uses the exact antiderivative when there is one.
pub fn hardy_avg(f: &TestFunction, x: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(HardyError::Domain(format!("Qf at x = {x}")));
    }
    if let Some(v) = f.exact_antiderivative(0.0, x)? {
        return Ok(v / x);
    }
    let g = |t: f64| f.value(t);
    match integrate_to(&g, x, &prepared::spec_of(f), cfg)? {
        Integral::Finite(r) => Ok(r.value / x),
        _ => Err(HardyError::Domain(format!("∫_0^{x} of {} diverges", f.name()))),
    }
}

/// `Hf(x)`. Prepares `f` on every call; use [`Prepared::h`] in loops.
pub fn modified_hardy(f: &TestFunction, x: f64, cfg: &QuadConfig) -> Result<f64> {
    Prepared::new(f, cfg)?.h(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::catalog;

    #[test]
    fn known_point_values() {
        let cfg = QuadConfig::default();
        let th = catalog("theta").unwrap();
        assert!((hardy_avg(&th, 1.0, &cfg).unwrap() - 0.5).abs() < 1e-15);
        let f0 = catalog("f0").unwrap();
        assert!((hardy_avg(&f0, 2.5, &cfg).unwrap() - 2f64.ln() / 2.5).abs() < 1e-15);
        assert_eq!(hardy_avg(&f0, 0.5, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn modified_values() {
        let cfg = QuadConfig::default();
        let th = Prepared::new(&catalog("theta").unwrap(), &cfg).unwrap();
        for x in [0.1, 1.0, 10.0] {
            assert!(th.h(x).unwrap().abs() < 1e-15);
        }
        let f0 = Prepared::new(&catalog("f0").unwrap(), &cfg).unwrap();
        assert!((f0.h(5.0).unwrap() - 1.5f64.ln() / 30.0).abs() < 1e-15);
        let fe = Prepared::new(&catalog("fe").unwrap(), &cfg).unwrap();
        assert!((fe.h(1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_route_matches_exact() {
        let cfg = QuadConfig::default();
        for name in ["theta", "f0", "power_tail(beta=3)"] {
            let f = catalog(name).unwrap();
            let exact = Prepared::new(&f, &cfg).unwrap();
            let quad = Prepared::new(&f.without_antiderivatives(), &cfg).unwrap();
            for x in [1e-3, 0.2, 0.9, 1.5, 2.5, 3.5, 7.0, 1e3, 1e7] {
                let a = exact.h(x).unwrap();
                let b = quad.h(x).unwrap();
                assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()), "{name} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn log_slow_origin_is_flagged_unconverged() {
        // ∫_0^x dt/(t ln²t) = -1/ln x: no cut short of 2^1000 reaches 1e-10
        let cfg = QuadConfig::default();
        let f = catalog("fe").unwrap();
        let g = |t: f64| f.value(t);
        let r = integrate_to(&g, 1e-3, &prepared::spec_of(&f), &cfg).unwrap();
        let r = r.finite().unwrap();
        assert!(!r.converged);
        let exact = -1.0 / 1e-3f64.ln();
        assert!((r.value - exact).abs() <= r.total_err(), "{} vs {exact} ± {}", r.value, r.total_err());
    }

    #[test]
    fn divergent_origin_is_a_domain_error() {
        let cfg = QuadConfig::default();
        let f = crate::funcspace::TestFunction::new(
            "1/t",
            vec![crate::funcspace::Piece::new(0.0, f64::INFINITY, crate::funcspace::Expr::t().recip())],
            crate::funcspace::TailClass::Custom(crate::envelope::Envelope::single(1.0, -1.0, 0.0)),
            crate::funcspace::OriginClass::Custom(crate::envelope::Envelope::single(1.0, 1.0, 0.0)),
        )
        .unwrap();
        assert!(matches!(hardy_avg(&f, 1.0, &cfg), Err(HardyError::Domain(_))));
    }
}

use hardy_core::cont_ops::{hardy_avg, modified_hardy, oracle_qf0, oracle_qfe, ContReport};
use hardy_core::envelope::Envelope;
use hardy_core::funcspace::{catalog, TestFunction};
use hardy_core::quad::{integrate, integrate_halfline, HalfLine, QuadConfig};
use hardy_core::report::Verdict;
use proptest::prelude::*;

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

#[test]
fn oracles_match_quadrature_free_values() {
    let f0 = catalog("f0").unwrap();
    let fe = catalog("fe").unwrap();
    for k in 0..50 {
        let x = 10f64.powf(-6.0 + 12.0 * k as f64 / 49.0);
        let q0 = hardy_avg(&f0, x, &cfg()).unwrap();
        let qe = hardy_avg(&fe, x, &cfg()).unwrap();
        assert!((q0 - oracle_qf0(x)).abs() <= 1e-10 * oracle_qf0(x).abs().max(1e-300) + 1e-14, "f0 at {x}");
        assert!((qe - oracle_qfe(x)).abs() <= 1e-10 * oracle_qfe(x).abs().max(1e-300) + 1e-14, "fe at {x}");
    }
}

#[test]
fn theta_has_vanishing_modified_average() {
    let th = catalog("theta").unwrap();
    for x in [0.01, 0.5, 1.0, 3.0, 1e4] {
        assert!(modified_hardy(&th, x, &cfg()).unwrap().abs() < 1e-13, "{x}");
    }
}

#[test]
fn fubini_holds_for_catalog_functions() {
    for spec in ["theta", "f0", "power_tail(beta=3)", "power_tail(beta=2)"] {
        let r = ContReport::build(&catalog(spec).unwrap(), &cfg()).unwrap();
        let ch = r.checks.iter().find(|c| c.claim == "cont.fubini");
        if let Some(ch) = ch {
            assert!(ch.verdict.is_ok(), "{spec}: {ch:?}");
        }
    }
}

#[test]
fn log_tail_image_is_not_integrable() {
    let r = ContReport::build(&catalog("log_tail(beta=1.5)").unwrap(), &cfg()).unwrap();
    let ch = r.checks.iter().find(|c| c.claim == "cont.characterization").unwrap();
    assert_eq!(ch.verdict, Verdict::DivergentAsExpected, "{ch:?}");
}

fn poly(c: f64) -> impl Fn(f64) -> f64 {
    move |t| c * t * t + (t + 1.0).ln()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadrature_is_additive(a in 0.01f64..5.0, w1 in 0.1f64..5.0, w2 in 0.1f64..5.0, c in -3.0f64..3.0) {
        let g = poly(c);
        let (m, b) = (a + w1, a + w1 + w2);
        let whole = integrate(&g, a, b, &[], &cfg()).unwrap();
        let left = integrate(&g, a, m, &[], &cfg()).unwrap();
        let right = integrate(&g, m, b, &[], &cfg()).unwrap();
        let slack = 10.0 * (whole.err_est + left.err_est + right.err_est).max(1e-13 * whole.value.abs().max(1.0));
        prop_assert!((whole.value - left.value - right.value).abs() <= slack);
    }

    #[test]
    fn substitution_preserves_integrals(s in 0.2f64..5.0, beta in 1.5f64..4.0) {
        // ∫_0^∞ f(s t) dt = (1/s) ∫_0^∞ f
        let f = move |t: f64| 1.0 / (1.0 + t).powf(beta);
        let g = move |t: f64| f(s * t);
        let spec = catalog(&format!("power_tail(beta={beta})")).unwrap();
        let half = HalfLine::new(spec.origin_envelope(), spec.tail_envelope(), Vec::new());
        let scaled_spec = HalfLine::new(spec.origin_envelope(), Envelope::single(s.powf(-beta), -beta, 0.0), Vec::new());
        let a = integrate_halfline(&f, &half, &cfg()).unwrap().finite().unwrap().value;
        let b = integrate_halfline(&g, &scaled_spec, &cfg()).unwrap().finite().unwrap().value;
        prop_assert!((b - a / s).abs() <= 1e-9 * a.abs(), "{b} vs {}", a / s);
    }

    #[test]
    fn hardy_average_is_linear(c1 in -4.0f64..4.0, c2 in -4.0f64..4.0, x in 0.01f64..100.0) {
        let th = catalog("theta").unwrap();
        let f0 = catalog("f0").unwrap();
        let lc = TestFunction::linear_combination("lc", &[(c1, &th), (c2, &f0)]).unwrap();
        let lhs = hardy_avg(&lc, x, &cfg()).unwrap();
        let rhs = c1 * hardy_avg(&th, x, &cfg()).unwrap() + c2 * hardy_avg(&f0, x, &cfg()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (c1.abs() + c2.abs() + 1.0));
    }
}

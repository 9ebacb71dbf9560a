//! Claims about the continuous operators.

use hardy_core::cont_ops::{
    cont_hardy_ratio, fubini_check_cont, hardy_avg, l1_norm_h, mean_limit_check, modified_hardy, oracle_qf0,
    oracle_qfe, total_integral, ContReport, Prepared,
};
use hardy_core::funcspace::{catalog, TestFunction};
use hardy_core::quad::QuadConfig;
use hardy_core::report::Verdict;
use hardy_core::Result;
use serde_json::json;

use super::{close, show, Claim, Context, FnClaim, Outcome, Topic};
use crate::golden::{lookup, number};
use crate::record::{Expected, Source};
use crate::sweep::{parse_axis, sweep, Engines, Kind, SweepSpec};

pub(super) fn claims() -> Vec<Box<dyn Claim>> {
    let c = |id, topic, statement, run| Box::new(FnClaim { id, topic, statement, run }) as Box<dyn Claim>;
    vec![
        c(
            "cont.avg.definition",
            Topic::ContOperator,
            "Qf(x) = (1/x)∫_0^x f matches closed forms, by antiderivative and by quadrature",
            avg_definition,
        ),
        c(
            "cont.avg.f0",
            Topic::ExampleF0,
            "Qf0 equals its piecewise closed form to 1e-10 at log-spaced points",
            |ctx| oracle_check(ctx, "f0", oracle_qf0),
        ),
        c(
            "cont.avg.fe",
            Topic::ExampleFe,
            "Qf_e equals its piecewise closed form to 1e-10 at log-spaced points, and ∫f_e = 0",
            |ctx| oracle_check(ctx, "fe", oracle_qfe),
        ),
        c(
            "cont.avg.theta",
            Topic::ThetaConstruction,
            "Qθ(x) = 1/(1+x) to 1e-12 and ∫θ = 1 ± 1e-12",
            avg_theta,
        ),
        c(
            "cont.modified.theta",
            Topic::ContModified,
            "Hθ vanishes identically: ‖Hθ‖₁ < 1e-10",
            modified_theta,
        ),
        c(
            "cont.hardy_inequality",
            Topic::ContHardyInequality,
            "∫(Qf)^p ≤ (p/(p-1))^p ∫f^p, approached by t^(-α)χ(t≤1) as α → 1/p",
            hardy_inequality,
        ),
        c(
            "cont.mean_zero",
            Topic::ContMeanZero,
            "for f0, θ and 2θ (nonzero mean) ∫|Qf| diverges like |∫f|·ln x",
            mean_zero,
        ),
        c(
            "cont.mean_zero.fe",
            Topic::ContMeanZero,
            "for f_e (zero mean) |x·Qf_e(x)| < 1e-6 at x = 1e6",
            mean_zero_fe,
        ),
        c(
            "cont.fubini",
            Topic::ContCharacterization,
            "I1 and I2 agree with their iterated forms within 10x the error estimates",
            fubini,
        ),
        c(
            "cont.characterization",
            Topic::ContCharacterization,
            "for f ≥ 0: ‖Hf‖₁ ≤ I1 + I2 when W(f) < ∞, and ‖Hf‖₁ diverges when W(f) = ∞",
            characterization,
        ),
        c(
            "cont.equivalence",
            Topic::ContEquivalence,
            "(‖Hf‖₁ + ‖f‖₁)/W(f) stays in the frozen interval over power_tail, β ∈ [1.1, 4]; θ has ‖Hθ‖₁ = 0 with W = 2",
            equivalence,
        ),
    ]
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn oracle_check(ctx: &Context, name: &str, oracle: fn(f64) -> f64) -> Result<Outcome> {
    let f = catalog(name)?;
    let quad = f.without_antiderivatives();
    // Plain quadrature of f_e stalls near 1e-3: the mass of 1/(t ln²t) beyond
    // t = e^709 is 1/709 and no double can sample it. Only the antiderivative
    // route is held to 1e-10 there.
    let routes = if name == "fe" { vec![&f] } else { vec![&f, &quad] };
    let xs = ctx.log_points(1e-6, 1e6);
    let (mut worst, mut at, mut bad) = (0.0f64, 0.0, 0usize);
    for &x in &xs {
        let o = oracle(x);
        for g in routes.iter().copied() {
            let q = hardy_avg(g, x, &ctx.quad)?;
            if !close(q, o, 1e-10, ctx.quad.abs_tol) {
                bad += 1;
            }
            if rel_err(q, o) > worst {
                worst = rel_err(q, o);
                at = x;
            }
        }
    }
    let mut expected = vec![Expected::new("relative tolerance", 1e-10, Source::ClosedForm)];
    let mut ok = bad == 0;
    let mut values = json!({ "points": xs.len(), "worst_rel_err": worst, "worst_at": at, "mismatches": bad });
    if name == "fe" {
        let total = total_integral(&Prepared::new(&quad, &ctx.quad)?)?;
        let t = total.finite().map(|r| (r.value, r.total_err()));
        values["total_integral"] = json!(t.map(|t| t.0));
        values["total_integral_err"] = json!(t.map(|t| t.1));
        expected.push(Expected::new("total_integral", 0.0, Source::ClosedForm));
        ok &= t.is_some_and(|(v, e)| v.abs() <= 10.0 * e.max(ctx.quad.abs_tol));
    }
    Ok(Outcome {
        inputs: json!({ "function": name, "range": [1e-6, 1e6], "points": xs.len() }),
        values,
        expected,
        verdict: Verdict::from_bool(ok),
        detail: format!("{bad} of {} evaluations off; worst relative error {worst:.2e} at x = {at:.4e}", routes.len() * xs.len()),
    })
}

fn avg_definition(ctx: &Context) -> Result<Outcome> {
    // indicator of [1,2] and (1+t)^-3, both with elementary averages
    let ind = |x: f64| {
        if x < 1.0 {
            0.0
        } else if x <= 2.0 {
            (x - 1.0) / x
        } else {
            1.0 / x
        }
    };
    let pt3 = |x: f64| 0.5 * (1.0 - (1.0 + x).powi(-2)) / x;
    let cases: [(&str, &dyn Fn(f64) -> f64); 2] = [("indicator(a=1,b=2)", &ind), ("power_tail(beta=3)", &pt3)];
    let xs = ctx.log_points(1e-3, 1e3);
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (spec, closed) in cases {
        let f = catalog(spec)?;
        for g in [f.clone(), f.without_antiderivatives()] {
            for &x in &xs {
                let (q, want) = (hardy_avg(&g, x, &ctx.quad)?, closed(x));
                worst = worst.max((q - want).abs() / want.abs().max(1.0));
                if !close(q, want, 1e-9, 1e-13) {
                    bad.push(format!("{spec} at {x:.3e}"));
                }
            }
        }
    }
    Ok(Outcome {
        inputs: json!({ "functions": ["indicator(a=1,b=2)", "power_tail(beta=3)"], "range": [1e-3, 1e3], "points": xs.len() }),
        values: json!({ "worst_err": worst, "mismatches": bad.len() }),
        expected: vec![Expected::new("tolerance", 1e-9, Source::Definition)],
        verdict: Verdict::from_bool(bad.is_empty()),
        detail: if bad.is_empty() {
            format!("both routes agree with the closed forms, worst {worst:.2e}")
        } else {
            format!("mismatch at {}", bad[..bad.len().min(3)].join(", "))
        },
    })
}

fn avg_theta(ctx: &Context) -> Result<Outcome> {
    let th = catalog("theta")?;
    let quad = th.without_antiderivatives();
    let xs = ctx.log_points(1e-6, 1e6);
    let mut worst = 0.0f64;
    for &x in &xs {
        for g in [&th, &quad] {
            worst = worst.max(rel_err(hardy_avg(g, x, &ctx.quad)?, 1.0 / (1.0 + x)));
        }
    }
    // the default rel_tol is coarser than the 1e-12 asked of ∫θ
    let tight = QuadConfig {
        rel_tol: ctx.quad.rel_tol.min(1e-13),
        ..ctx.quad.clone()
    };
    let total = total_integral(&Prepared::new(&quad, &tight)?)?;
    let tv = total.value();
    let ok = worst <= 1e-12 && tv.is_some_and(|v| (v - 1.0).abs() <= 1e-12);
    Ok(Outcome {
        inputs: json!({ "function": "theta", "points": xs.len() }),
        values: json!({ "worst_rel_err": worst, "total_integral": tv }),
        expected: vec![
            Expected::new("Qθ(x)", "1/(1+x)", Source::ClosedForm),
            Expected::new("total_integral", 1.0, Source::ClosedForm),
        ],
        verdict: Verdict::from_bool(ok),
        detail: format!("worst relative error {worst:.2e}; ∫θ = {}", show(tv)),
    })
}

fn modified_theta(ctx: &Context) -> Result<Outcome> {
    let th = catalog("theta")?;
    let xs = ctx.log_points(1e-6, 1e6);
    let worst = xs
        .iter()
        .map(|&x| modified_hardy(&th, x, &ctx.quad).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let h1 = l1_norm_h(&Prepared::new(&th, &ctx.quad)?)?;
    let hv = h1.value();
    let ok = hv.is_some_and(|v| v < 1e-10) && worst < 1e-12;
    Ok(Outcome {
        inputs: json!({ "function": "theta", "points": xs.len() }),
        values: json!({ "h_l1_norm": h1.measured(), "max_abs_h": worst }),
        expected: vec![Expected::new("h_l1_norm", 0.0, Source::ClosedForm)],
        verdict: Verdict::from_bool(ok),
        detail: format!("‖Hθ‖₁ = {}, max |Hθ(x)| = {worst:.2e}", show(hv)),
    })
}

fn hardy_inequality(ctx: &Context) -> Result<Outcome> {
    let golden = lookup("cont_hardy_ratio_power_cutoff")
        .as_object()
        .expect("golden power_cutoff ratios");
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    let mut last = 0.0;
    let mut increasing = true;
    let mut matches = true;
    for (alpha, want) in golden {
        let want = want.as_f64().expect("golden ratio");
        let f = catalog(&format!("power_cutoff(alpha={alpha},T=1)"))?;
        let r = cont_hardy_ratio(&Prepared::new(&f, &ctx.quad)?, 2.0)?;
        verdicts.push(r.verdict);
        let got = r.ratio.unwrap_or(f64::NAN);
        increasing &= got > last;
        last = got;
        // the approach to 1/p is slow; compare within the reported error
        let err = r.numerator.err.unwrap_or(f64::INFINITY) / r.denominator.value.unwrap_or(f64::NAN);
        matches &= (got - want).abs() <= 1e-8 * want + 10.0 * err;
        rows.push(json!({ "alpha": alpha, "ratio": got, "expected": want, "numerator": r.numerator, "bound": r.bound }));
    }
    // a few more functions against the same bound at other exponents
    for spec in ["theta", "abs(f0)", "indicator(a=1,b=2)"] {
        let p = Prepared::new(&catalog(spec)?, &ctx.quad)?;
        for e in [1.25, 1.5, 3.0, 10.0] {
            let r = cont_hardy_ratio(&p, e)?;
            verdicts.push(r.verdict);
            rows.push(json!({ "function": spec, "p": e, "ratio": r.ratio, "bound": r.bound, "verdict": r.verdict }));
        }
    }
    let within = Verdict::all(verdicts.iter().copied());
    Ok(Outcome {
        inputs: json!({ "p": 2.0, "family": "power_cutoff(alpha,T=1)", "extra": ["theta", "abs(f0)", "indicator(a=1,b=2)"] }),
        values: json!({ "rows": rows }),
        expected: vec![
            Expected::new("bound at p = 2", 4.0, Source::ClosedForm),
            Expected::new("power_cutoff ratios", lookup("cont_hardy_ratio_power_cutoff").clone(), Source::Oracle),
        ],
        verdict: Verdict::all([within, Verdict::from_bool(increasing && matches)]),
        detail: format!("bound {within}; ratios increasing toward 4: {increasing}; match oracle: {matches}"),
    })
}

fn mean_zero(ctx: &Context) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut vs = Vec::new();
    for spec in ["f0", "theta", "2*theta"] {
        let r = mean_limit_check(&Prepared::new(&catalog(spec)?, &ctx.quad)?)?;
        vs.push(r.verdict);
        rows.push(json!({
            "function": spec,
            "total_integral": r.total_integral,
            "probe": r.probe.as_ref().map(|p| p.verdict.label()),
            "last_increment": r.probe.as_ref().map(|p| p.last_increment()),
            "expected_increment": r.expected_increment,
            "verdict": r.verdict,
        }));
    }
    let v = Verdict::all(vs.iter().copied());
    Ok(Outcome {
        inputs: json!({ "functions": ["f0", "theta", "2*theta"], "band": 0.1 }),
        values: json!({ "rows": rows }),
        expected: vec![Expected::new("probe", "DIVERGENT-LOG, increment within 10% of |∫f|·ln 2", Source::ClosedForm)],
        verdict: v,
        detail: format!("f0 {}, theta {}, 2*theta {}", vs[0], vs[1], vs[2]),
    })
}

fn mean_zero_fe(ctx: &Context) -> Result<Outcome> {
    let r = mean_limit_check(&Prepared::new(&catalog("fe")?, &ctx.quad)?)?;
    let x = *r.xs.last().unwrap();
    let v = r.limit_estimate.abs();
    Ok(Outcome {
        inputs: json!({ "function": "fe", "x": x, "tolerance": 1e-6 }),
        values: json!({ "x_qf": v, "one_over_ln_x": 1.0 / x.ln() }),
        expected: vec![Expected::new("x_qf", 0.0, Source::ClosedForm)],
        verdict: Verdict::from_bool(v < 1e-6),
        detail: format!(
            "|x·Qf_e(x)| = {v:.6e} at x = {x:e}; the closed form is 1/ln x, which reaches 1e-6 only at x = e^(1e6)"
        ),
    })
}

fn fubini(ctx: &Context) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut vs = Vec::new();
    for spec in ["theta", "abs(f0)", "power_tail(beta=2)", "power_tail(beta=3)"] {
        let r = fubini_check_cont(&catalog(spec)?, &ctx.quad)?;
        vs.push(r.verdict);
        rows.push(serde_json::to_value(&r).expect("reports serialize"));
    }
    let v = Verdict::all(vs.iter().copied());
    Ok(Outcome {
        inputs: json!({ "functions": ["theta", "abs(f0)", "power_tail(beta=2)", "power_tail(beta=3)"], "factor": 10 }),
        values: json!({ "rows": rows }),
        expected: vec![Expected::new("I1, I2", "iterated = direct", Source::ClosedForm)],
        verdict: v,
        detail: format!("{} of {} functions agree", vs.iter().filter(|v| v.is_ok()).count(), vs.len()),
    })
}

/// Nonnegative functions: the first group has `W < ∞`, the second `W = ∞`.
const FINITE_SIDE: [&str; 7] = [
    "theta",
    "abs(f0)",
    "power_tail(beta=1.5)",
    "power_tail(beta=2)",
    "power_tail(beta=3)",
    "indicator(a=1,b=2)",
    "power_cutoff(alpha=0.5,T=1)",
];
const DIVERGENT_SIDE: [&str; 2] = ["log_tail(beta=1.5)", "log_tail(beta=2)"];

fn characterization(ctx: &Context) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut vs = Vec::new();
    for (spec, finite) in FINITE_SIDE.iter().map(|s| (s, true)).chain(DIVERGENT_SIDE.iter().map(|s| (s, false))) {
        let f: TestFunction = catalog(spec)?;
        let r = ContReport::build(&f, &ctx.quad)?;
        let want = if finite { Verdict::Pass } else { Verdict::DivergentAsExpected };
        let found = r.checks.iter().filter(|c| c.claim != "cont.fubini");
        let v = Verdict::all(found.clone().map(|c| c.verdict));
        let ok = v == want && found.clone().any(|c| c.claim == "cont.characterization");
        vs.push(if ok { want } else if v == Verdict::Inconclusive { v } else { Verdict::Fail });
        rows.push(json!({
            "function": spec,
            "w": r.weighted_norm,
            "h_l1_norm": r.h_l1_norm,
            "i1": r.i1,
            "i2": r.i2,
            "checks": r.checks,
        }));
    }
    let inconclusive = vs.iter().filter(|v| **v == Verdict::Inconclusive).count();
    let v = Verdict::all(vs.iter().copied());
    Ok(Outcome {
        inputs: json!({ "finite_side": FINITE_SIDE, "divergent_side": DIVERGENT_SIDE }),
        values: json!({ "rows": rows, "inconclusive": inconclusive }),
        expected: vec![Expected::new("inconclusive", 0, Source::Definition)],
        verdict: v,
        detail: format!(
            "{} of {} members as predicted, {inconclusive} inconclusive",
            vs.iter().filter(|v| v.is_ok()).count(),
            vs.len()
        ),
    })
}

fn equivalence(ctx: &Context) -> Result<Outcome> {
    let spec = SweepSpec {
        kind: Kind::Cont,
        family: "power_tail".into(),
        axes: vec![parse_axis("beta=1.1:4.0:0.1")?],
        functionals: vec!["h1".into(), "w".into(), "l1".into(), "ratio".into()],
    };
    let t = sweep(&spec, &Engines { quad: &ctx.quad, seq: &ctx.seq })?;
    let (lo, hi) = (number("power_tail_sweep/ratio_min"), number("power_tail_sweep/ratio_max"));
    let gold = lookup("power_tail_sweep/rows").as_array().expect("golden rows");
    let mut off = Vec::new();
    for (row, g) in t.rows.iter().zip(gold) {
        let want = g["ratio"].as_f64().unwrap();
        match row.ratio {
            Some(r) if r >= lo * (1.0 - 1e-9) && r <= hi * (1.0 + 1e-9) && close(r, want, 1e-8, 0.0) => {}
            r => off.push(format!("{}: {r:?} vs {want}", row.spec)),
        }
    }
    let rows_ok = off.is_empty() && t.rows.len() == gold.len() && t.footer.errors == 0;

    let th = ContReport::build(&catalog("theta")?, &ctx.quad)?;
    let (h, w) = (th.h_l1_norm.value, th.weighted_norm.value);
    let theta_ok = h.is_some_and(|h| h < 1e-10) && w.is_some_and(|w| (w - 2.0).abs() <= 1e-9);
    Ok(Outcome {
        inputs: json!({ "family": "power_tail", "beta": "1.1:4.0:0.1", "counterexample": "theta" }),
        values: json!({
            "ratio_min": t.footer.ratio_min,
            "ratio_max": t.footer.ratio_max,
            "points": t.footer.points,
            "theta_h_l1_norm": h,
            "theta_w": w,
        }),
        expected: vec![
            Expected::new("ratio interval", json!([lo, hi]), Source::Oracle),
            Expected::new("theta_h_l1_norm", 0.0, Source::ClosedForm),
            Expected::new("theta_w", 2.0, Source::ClosedForm),
        ],
        verdict: Verdict::from_bool(rows_ok && theta_ok),
        detail: format!(
            "ratios in [{}, {}] against frozen [{lo}, {hi}]{}; θ: ‖Hθ‖₁ = {}, W = {}",
            show(t.footer.ratio_min),
            show(t.footer.ratio_max),
            if off.is_empty() { String::new() } else { format!(", off: {}", off.join("; ")) },
            show(h),
            show(w)
        ),
    })
}

//! One line per acceptance criterion, with its time budget.
//!
//! Runs as a plain binary so the lines always reach the output. The process
//! fails when an attainable criterion fails; the f_e decay bound is reported
//! but cannot be met at any x a float can hold (x·Qf_e(x) = 1/ln x).

use std::process::Command;
use std::time::{Duration, Instant};

use hardy_core::report::Verdict;
use hardy_harness::claims::{registry, run_claim, Context};
use hardy_harness::record::{comparable_json, ClaimRecord};
use hardy_harness::SuiteConfig;

/// Criteria whose failure is expected and explained.
const UNATTAINABLE: &[&str] = &["5b"];

struct Line {
    id: &'static str,
    ok: bool,
    text: String,
}

fn claims(ctx: &Context, ids: &[&str]) -> Vec<ClaimRecord> {
    let all = registry();
    ids.iter()
        .map(|id| {
            let c = all.iter().find(|c| c.id() == *id).unwrap_or_else(|| panic!("no claim {id}"));
            run_claim(c.as_ref(), ctx)
        })
        .collect()
}

fn criterion(
    lines: &mut Vec<Line>,
    id: &'static str,
    what: &str,
    budget: Option<Duration>,
    run: impl FnOnce() -> (bool, String),
) {
    let t = Instant::now();
    let (mut ok, detail) = run();
    let dt = t.elapsed();
    let mut timing = format!("{:.2}s", dt.as_secs_f64());
    if let Some(b) = budget {
        ok &= dt <= b;
        timing += &format!(" of {}s", b.as_secs());
    }
    let text = format!("{} {id:<3} {what} [{timing}] {detail}", if ok { "PASS" } else { "FAIL" });
    println!("{text}");
    lines.push(Line { id, ok, text });
}

fn verdicts(rs: &[ClaimRecord], want: impl Fn(&ClaimRecord) -> bool) -> (bool, String) {
    let ok = rs.iter().all(&want);
    let d = rs.iter().map(|r| format!("{}={}", r.id, r.verdict)).collect::<Vec<_>>().join(" ");
    (ok, d)
}

fn passed(r: &ClaimRecord) -> bool {
    r.verdict == Verdict::Pass
}

fn inconclusive(r: &ClaimRecord) -> u64 {
    r.values["inconclusive"].as_u64().unwrap_or(u64::MAX)
}

fn verify_twice() -> (bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    let mut codes = Vec::new();
    // same path both times: the report echoes it
    let out = dir.path().join("run.json");
    for _ in 0..2 {
        let st = Command::new(env!("CARGO_BIN_EXE_hardy"))
            .args(["verify", "--format", "json", "--out"])
            .arg(&out)
            .output()
            .expect("hardy runs");
        codes.push(st.status.code());
        texts.push(comparable_json(&std::fs::read_to_string(&out).unwrap()).unwrap());
    }
    let same = texts[0] == texts[1];
    // the known f_e failure makes the full suite exit 1
    let ok = same && codes[0] == codes[1] && codes[0] == Some(1);
    (ok, format!("reports identical: {same}, exit codes {codes:?}"))
}

fn main() {
    let cfg = SuiteConfig::default();
    let ctx = Context::new(&cfg);
    let mut lines = Vec::new();

    criterion(&mut lines, "1", "Qf0, Qf_e at 500 points to 1e-10", Some(Duration::from_secs(10)), || {
        verdicts(&claims(&ctx, &["cont.avg.f0", "cont.avg.fe"]), passed)
    });
    criterion(&mut lines, "2", "Qθ = 1/(1+x), ∫θ = 1, ‖Hθ‖₁ < 1e-10", None, || {
        verdicts(&claims(&ctx, &["cont.avg.theta", "cont.modified.theta"]), passed)
    });
    criterion(&mut lines, "3", "Fubini for θ, |f0|, power tails", Some(Duration::from_secs(60)), || {
        verdicts(&claims(&ctx, &["cont.fubini"]), passed)
    });
    criterion(&mut lines, "4", "characterization, no INCONCLUSIVE", None, || {
        verdicts(&claims(&ctx, &["cont.characterization", "disc.characterization"]), |r| {
            r.verdict.is_ok() && inconclusive(r) == 0
        })
    });
    criterion(&mut lines, "5a", "mean-zero dichotomy for f0, θ and sequences", None, || {
        verdicts(&claims(&ctx, &["cont.mean_zero", "disc.mean_zero"]), passed)
    });
    criterion(&mut lines, "5b", "|x·Qf_e(x)| < 1e-6 at x = 1e6", None, || {
        let r = &claims(&ctx, &["cont.mean_zero.fe"])[0];
        (passed(r), r.detail.clone())
    });
    criterion(&mut lines, "6", "exact identities for 200 random sequences", Some(Duration::from_secs(30)), || {
        verdicts(&claims(&ctx, &["disc.fubini"]), passed)
    });
    criterion(&mut lines, "7", "Γλ = 1/(n+1), Γ̃λ ≡ 0, ‖Γ̃e₁‖ = 1", None, || {
        verdicts(&claims(&ctx, &["disc.cesaro", "disc.modified.kernel"]), passed)
    });
    criterion(&mut lines, "8", "Hardy ratios below (p')^p, powcut increasing", Some(Duration::from_secs(120)), || {
        verdicts(&claims(&ctx, &["disc.hardy_inequality", "disc.hardy_sharpness", "cont.hardy_inequality"]), passed)
    });
    criterion(&mut lines, "9", "frozen equivalence intervals", None, || {
        verdicts(&claims(&ctx, &["cont.equivalence", "disc.equivalence"]), passed)
    });
    criterion(&mut lines, "10", "harmonic bounds for n in [2, 1e6]", Some(Duration::from_secs(5)), || {
        verdicts(&claims(&ctx, &["disc.harmonic"]), passed)
    });
    criterion(&mut lines, "11", "`hardy verify` is deterministic", None, verify_twice);

    let failed: Vec<_> = lines.iter().filter(|l| !l.ok && !UNATTAINABLE.contains(&l.id)).collect();
    let known = lines.iter().filter(|l| !l.ok && UNATTAINABLE.contains(&l.id)).count();
    println!(
        "{} criteria, {} passed, {} failed ({} known unattainable)",
        lines.len(),
        lines.iter().filter(|l| l.ok).count(),
        failed.len() + known,
        known
    );
    if !failed.is_empty() {
        for l in &failed {
            eprintln!("{}", l.text);
        }
        std::process::exit(1);
    }
}

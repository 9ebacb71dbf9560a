use serde::Serialize;

/// Outcome of checking one claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// A divergence the claim predicts, detected as such.
    #[serde(rename = "DIVERGENT-AS-EXPECTED")]
    DivergentAsExpected,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Passing verdicts: `PASS` and `DIVERGENT-AS-EXPECTED`.
    pub fn is_ok(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::DivergentAsExpected)
    }

    /// Combines sub-verdicts: any failure fails, then any inconclusive.
    pub fn all<I: IntoIterator<Item = Verdict>>(vs: I) -> Verdict {
        let mut out = Verdict::Pass;
        for v in vs {
            out = match (out, v) {
                (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
                (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
                (Verdict::DivergentAsExpected, _) | (_, Verdict::DivergentAsExpected) => Verdict::DivergentAsExpected,
                _ => Verdict::Pass,
            };
        }
        out
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::DivergentAsExpected => "DIVERGENT-AS-EXPECTED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One verdict inside a module-level report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub claim: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl Check {
    pub fn new(claim: &str, verdict: Verdict, detail: impl Into<String>) -> Self {
        Check {
            claim: claim.to_string(),
            verdict,
            detail: detail.into(),
        }
    }
}

/// A reported number: a value with its error budget, or the reason there is
/// none (`DIVERGENT-*`, `INCONCLUSIVE`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measured {
    pub status: String,
    pub value: Option<f64>,
    pub err: Option<f64>,
    /// The exact value as `p/q`, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl Measured {
    pub fn exact(value: f64) -> Self {
        Measured {
            status: "EXACT".into(),
            value: Some(value),
            err: Some(0.0),
            exact: None,
        }
    }

    pub fn rational(value: f64, exact: String) -> Self {
        Measured {
            exact: Some(exact),
            ..Measured::exact(value)
        }
    }

    pub fn approx(value: f64, err: f64, converged: bool) -> Self {
        Measured {
            status: if converged { "FINITE" } else { "UNCONVERGED" }.into(),
            value: Some(value),
            err: Some(err),
            exact: None,
        }
    }

    pub fn missing(status: &str) -> Self {
        Measured {
            status: status.into(),
            value: None,
            err: None,
            exact: None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_order() {
        use Verdict::*;
        assert_eq!(Verdict::all([Pass, DivergentAsExpected]), DivergentAsExpected);
        assert_eq!(Verdict::all([Pass, Inconclusive, DivergentAsExpected]), Inconclusive);
        assert_eq!(Verdict::all([Inconclusive, Fail]), Fail);
        assert_eq!(Verdict::all([]), Pass);
    }
}

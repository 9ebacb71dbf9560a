//! Named test functions and parametric families.
//!
//! Specs accepted by [`FunctionCatalog::parse`]:
//! `theta`, `power_tail(beta=2)`, `2*theta`, `abs(f0)`, `theta+-1*power_tail(beta=3)`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::expr::Expr;
use super::function::{Functional, OriginClass, Piece, Provenance, TailClass, TestFunction};
use crate::error::{HardyError, Result};
use crate::syntax::{parse_call, split_top_level, ParamDecl, Params};

const E: f64 = std::f64::consts::E;
const INF: f64 = f64::INFINITY;

/// A named, possibly parametric, source of test functions.
pub trait FunctionFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn params(&self) -> &'static [ParamDecl] {
        &[]
    }
    fn build(&self, p: &Params) -> Result<TestFunction>;
}

pub struct FunctionCatalog {
    families: BTreeMap<&'static str, Box<dyn FunctionFamily>>,
}

impl Default for FunctionCatalog {
    fn default() -> Self {
        let mut c = FunctionCatalog {
            families: BTreeMap::new(),
        };
        c.register(Box::new(Theta));
        c.register(Box::new(F0));
        c.register(Box::new(Fe));
        c.register(Box::new(PowerCutoff));
        c.register(Box::new(PowerTail));
        c.register(Box::new(LogTail));
        c.register(Box::new(Indicator));
        c
    }
}

impl FunctionCatalog {
    /// Shared instance with the built-in families.
    pub fn standard() -> &'static FunctionCatalog {
        static CATALOG: OnceLock<FunctionCatalog> = OnceLock::new();
        CATALOG.get_or_init(FunctionCatalog::default)
    }

    pub fn register(&mut self, family: Box<dyn FunctionFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn families(&self) -> impl Iterator<Item = &dyn FunctionFamily> {
        self.families.values().map(|f| f.as_ref())
    }

    pub fn family(&self, name: &str) -> Result<&dyn FunctionFamily> {
        self.families
            .get(name)
            .map(|f| f.as_ref())
            .ok_or_else(|| HardyError::Lookup(name.to_string()))
    }

    /// Builds a single family member from `name` and explicit parameters.
    pub fn build(&self, name: &str, args: &BTreeMap<String, f64>) -> Result<TestFunction> {
        let fam = self.family(name)?;
        let params = Params::resolve(name, fam.params(), args)?;
        let f = fam.build(&params)?;
        Ok(f.renamed(params.display(name, fam.params())))
    }

    /// Parses a function spec: sums of optionally scaled terms, `abs(..)`
    /// and family calls.
    pub fn parse(&self, spec: &str) -> Result<TestFunction> {
        let spec = spec.trim();
        let terms = split_top_level(spec, '+');
        if terms.len() > 1 {
            let parsed = terms
                .iter()
                .map(|t| self.parse_term(t))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<(f64, &TestFunction)> = parsed.iter().map(|(k, f)| (*k, f)).collect();
            return TestFunction::linear_combination(spec.replace(' ', ""), &refs);
        }
        let (k, f) = self.parse_term(spec)?;
        Ok(if k == 1.0 { f } else { f.scaled(k) })
    }

    fn parse_term(&self, term: &str) -> Result<(f64, TestFunction)> {
        let term = term.trim();
        if term.is_empty() {
            return Err(HardyError::Parse("empty term".into()));
        }
        if let [k, rest] = split_top_level(term, '*')[..] {
            let k: f64 = k
                .trim()
                .parse()
                .map_err(|_| HardyError::Parse(format!("`{}` is not a coefficient", k.trim())))?;
            return Ok((k, self.parse_atom(rest)?));
        }
        Ok((1.0, self.parse_atom(term)?))
    }

    fn parse_atom(&self, atom: &str) -> Result<TestFunction> {
        let atom = atom.trim();
        if let Some(inner) = atom.strip_prefix("abs(").and_then(|s| s.strip_suffix(')')) {
            return Ok(self.parse(inner)?.abs());
        }
        let call = parse_call(atom)?;
        self.build(&call.name, &call.args)
    }
}

/// `catalog("theta")`, `catalog("power_tail(beta=2)")`, ...
pub fn catalog(spec: &str) -> Result<TestFunction> {
    FunctionCatalog::standard().parse(spec)
}

fn recip_t() -> Expr {
    Expr::t().recip()
}

/// `1/(t (ln t)^beta)`
fn log_density(beta: f64) -> Expr {
    Expr::t().mul(Expr::t().ln().powf(beta)).recip()
}

struct Theta;

impl FunctionFamily for Theta {
    fn name(&self) -> &'static str {
        "theta"
    }
    fn description(&self) -> &'static str {
        "(1+t)^-2, the unit-mass profile annihilated by H"
    }
    fn build(&self, _: &Params) -> Result<TestFunction> {
        let expr = Expr::c(1.0).add(Expr::t()).powf(-2.0);
        // t/(1+t) written so that both IEEE limits come out right
        let anti = Expr::c(1.0).add(recip_t()).recip();
        Ok(TestFunction::new(
            "theta",
            vec![Piece::new(0.0, INF, expr).with_antiderivative(anti)],
            TailClass::Power { alpha: 2.0, coef: 1.0 },
            OriginClass::Bounded { bound: 1.0 },
        )?
        .with_exact(Functional::TotalIntegral, 1.0, Provenance::Definition)
        .with_exact(Functional::L1Norm, 1.0, Provenance::Definition)
        .with_exact(Functional::WeightedNorm, 2.0, Provenance::Oracle))
    }
}

struct F0;

impl FunctionFamily for F0 {
    fn name(&self) -> &'static str {
        "f0"
    }
    fn description(&self) -> &'static str {
        "(1_[1,2] - 1_[3,4])/t, integrable with Qf not integrable"
    }
    fn build(&self, _: &Params) -> Result<TestFunction> {
        Ok(TestFunction::new(
            "f0",
            vec![
                Piece::zero(0.0, 1.0),
                Piece::new(1.0, 2.0, recip_t()).with_antiderivative(Expr::t().ln()),
                Piece::zero(2.0, 3.0),
                Piece::new(3.0, 4.0, recip_t().scale(-1.0)).with_antiderivative(Expr::t().ln().scale(-1.0)),
                Piece::zero(4.0, INF),
            ],
            TailClass::Compact { support_end: 4.0 },
            OriginClass::Vanishing { until: 1.0 },
        )?
        .with_exact(Functional::TotalIntegral, 1.5f64.ln(), Provenance::ClosedForm)
        .with_exact(Functional::L1Norm, (8.0f64 / 3.0).ln(), Provenance::ClosedForm)
        .with_exact(Functional::WeightedNorm, 1.4920293649932366, Provenance::Oracle))
    }
}

struct Fe;

impl FunctionFamily for Fe {
    fn name(&self) -> &'static str {
        "fe"
    }
    fn description(&self) -> &'static str {
        "(1_(0,1/e) - 1_(e,inf))/(t ln^2 t), zero mean with Qf not integrable"
    }
    fn build(&self, _: &Params) -> Result<TestFunction> {
        let inv_e = 1.0 / E;
        let density = log_density(2.0);
        Ok(TestFunction::new(
            "fe",
            vec![
                Piece::new(0.0, inv_e, density.clone()).with_antiderivative(Expr::t().ln().recip().scale(-1.0)),
                Piece::zero(inv_e, E),
                Piece::new(E, INF, density.scale(-1.0)).with_antiderivative(Expr::t().ln().recip()),
            ],
            TailClass::PowerLog { beta: 2.0, coef: 1.0 },
            OriginClass::PowerLog { beta: 2.0, coef: 1.0 },
        )?
        .with_exact(Functional::TotalIntegral, 0.0, Provenance::Definition)
        .with_exact(Functional::L1Norm, 2.0, Provenance::ClosedForm))
    }
}

struct PowerCutoff;

impl FunctionFamily for PowerCutoff {
    fn name(&self) -> &'static str {
        "power_cutoff"
    }
    fn description(&self) -> &'static str {
        "t^-alpha on (0,T], 0 <= alpha < 1"
    }
    fn params(&self) -> &'static [ParamDecl] {
        &[("alpha", Some(0.0)), ("T", Some(1.0))]
    }
    fn build(&self, p: &Params) -> Result<TestFunction> {
        let (alpha, cut) = (p.get("alpha"), p.get("T"));
        if !(0.0..1.0).contains(&alpha) {
            return Err(HardyError::Parameter(format!("power_cutoff needs 0 <= alpha < 1, got {alpha}")));
        }
        if !(cut > 0.0 && cut.is_finite()) {
            return Err(HardyError::Parameter(format!("power_cutoff needs T > 0, got {cut}")));
        }
        let (expr, origin) = if alpha == 0.0 {
            (Expr::c(1.0), OriginClass::Bounded { bound: 1.0 })
        } else {
            (Expr::t().powf(-alpha), OriginClass::Power { alpha, coef: 1.0 })
        };
        let anti = Expr::t().powf(1.0 - alpha).scale(1.0 / (1.0 - alpha));
        let mass = cut.powf(1.0 - alpha) / (1.0 - alpha);
        Ok(TestFunction::new(
            "power_cutoff",
            vec![Piece::new(0.0, cut, expr).with_antiderivative(anti), Piece::zero(cut, INF)],
            TailClass::Compact { support_end: cut },
            origin,
        )?
        .with_exact(Functional::TotalIntegral, mass, Provenance::ClosedForm)
        .with_exact(Functional::L1Norm, mass, Provenance::ClosedForm))
    }
}

struct PowerTail;

impl FunctionFamily for PowerTail {
    fn name(&self) -> &'static str {
        "power_tail"
    }
    fn description(&self) -> &'static str {
        "(1+t)^-beta, beta > 1"
    }
    fn params(&self) -> &'static [ParamDecl] {
        &[("beta", None)]
    }
    fn build(&self, p: &Params) -> Result<TestFunction> {
        let beta = p.get("beta");
        if !(beta > 1.0 && beta.is_finite()) {
            return Err(HardyError::Parameter(format!("power_tail needs beta > 1, got {beta}")));
        }
        let expr = Expr::c(1.0).add(Expr::t()).powf(-beta);
        // (1 - (1+t)^(1-beta))/(beta-1) without cancellation near 0
        let anti = Expr::t()
            .ln1p()
            .scale(1.0 - beta)
            .expm1()
            .scale(-1.0 / (beta - 1.0));
        let mass = 1.0 / (beta - 1.0);
        Ok(TestFunction::new(
            "power_tail",
            vec![Piece::new(0.0, INF, expr).with_antiderivative(anti)],
            TailClass::Power { alpha: beta, coef: 1.0 },
            OriginClass::Bounded { bound: 1.0 },
        )?
        .with_exact(Functional::TotalIntegral, mass, Provenance::ClosedForm)
        .with_exact(Functional::L1Norm, mass, Provenance::ClosedForm))
    }
}

struct LogTail;

impl FunctionFamily for LogTail {
    fn name(&self) -> &'static str {
        "log_tail"
    }
    fn description(&self) -> &'static str {
        "1_[e,inf) / (t ln^beta t), beta > 1; weighted norm infinite for beta <= 2"
    }
    fn params(&self) -> &'static [ParamDecl] {
        &[("beta", None)]
    }
    fn build(&self, p: &Params) -> Result<TestFunction> {
        let beta = p.get("beta");
        if !(beta > 1.0 && beta.is_finite()) {
            return Err(HardyError::Parameter(format!("log_tail needs beta > 1, got {beta}")));
        }
        let anti = Expr::t().ln().powf(1.0 - beta).scale(-1.0 / (beta - 1.0));
        let mass = 1.0 / (beta - 1.0);
        Ok(TestFunction::new(
            "log_tail",
            vec![
                Piece::zero(0.0, E),
                Piece::new(E, INF, log_density(beta)).with_antiderivative(anti),
            ],
            TailClass::PowerLog { beta, coef: 1.0 },
            OriginClass::Vanishing { until: E },
        )?
        .with_exact(Functional::TotalIntegral, mass, Provenance::ClosedForm)
        .with_exact(Functional::L1Norm, mass, Provenance::ClosedForm))
    }
}

struct Indicator;

impl FunctionFamily for Indicator {
    fn name(&self) -> &'static str {
        "indicator"
    }
    fn description(&self) -> &'static str {
        "1 on (a,b]"
    }
    fn params(&self) -> &'static [ParamDecl] {
        &[("a", None), ("b", None)]
    }
    fn build(&self, p: &Params) -> Result<TestFunction> {
        let (a, b) = (p.get("a"), p.get("b"));
        if !(a > 0.0 && a < b && b.is_finite()) {
            return Err(HardyError::Parameter(format!("indicator needs 0 < a < b < inf, got ({a}, {b})")));
        }
        Ok(TestFunction::new(
            "indicator",
            vec![
                Piece::zero(0.0, a),
                Piece::new(a, b, Expr::c(1.0)).with_antiderivative(Expr::t()),
                Piece::zero(b, INF),
            ],
            TailClass::Compact { support_end: b },
            OriginClass::Vanishing { until: a },
        )?
        .with_exact(Functional::TotalIntegral, b - a, Provenance::ClosedForm)
        .with_exact(Functional::L1Norm, b - a, Provenance::ClosedForm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_point_values() {
        assert_eq!(catalog("theta").unwrap().eval(1.0).unwrap(), 0.25);
        let f0 = catalog("f0").unwrap();
        assert!((f0.eval(1.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let fe = catalog("fe").unwrap();
        let e2 = E * E;
        assert!((fe.eval(e2).unwrap() + 1.0 / (e2 * 4.0)).abs() < 1e-15);
    }

    #[test]
    fn exact_totals() {
        let th = catalog("theta").unwrap();
        assert_eq!(th.exact_value(Functional::TotalIntegral), Some(1.0));
        assert_eq!(th.exact_antiderivative(0.0, INF).unwrap(), Some(1.0));
        let x = 3.7;
        let v = th.exact_antiderivative(0.0, x).unwrap().unwrap();
        assert!((v - x / (1.0 + x)).abs() < 1e-15);

        let f0 = catalog("f0").unwrap();
        let total = f0.exact_antiderivative(0.0, INF).unwrap().unwrap();
        assert!((total - 1.5f64.ln()).abs() < 1e-15);
        assert!((f0.exact_antiderivative(1.0, 2.0).unwrap().unwrap() - 2f64.ln()).abs() < 1e-15);

        let fe = catalog("fe").unwrap();
        assert_eq!(fe.exact_antiderivative(0.0, INF).unwrap(), Some(0.0));
        assert!((fe.exact_antiderivative(0.0, 1.0).unwrap().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn family_ranges() {
        assert!(matches!(catalog("power_tail(beta=1)"), Err(HardyError::Parameter(_))));
        assert!(matches!(catalog("power_cutoff(alpha=1)"), Err(HardyError::Parameter(_))));
        assert!(matches!(catalog("log_tail(beta=0.5)"), Err(HardyError::Parameter(_))));
        assert!(matches!(catalog("nope"), Err(HardyError::Lookup(_))));
        assert!(matches!(catalog("power_tail"), Err(HardyError::Parameter(_))));
    }

    #[test]
    fn power_tail_mass_matches_antiderivative() {
        for beta in [1.1, 1.5, 2.0, 4.0] {
            let f = catalog(&format!("power_tail(beta={beta})")).unwrap();
            let v = f.exact_antiderivative(0.0, INF).unwrap().unwrap();
            assert!((v - 1.0 / (beta - 1.0)).abs() < 1e-12, "beta={beta}");
        }
    }

    #[test]
    fn spec_expressions() {
        let two = catalog("2*theta").unwrap();
        assert_eq!(two.eval(1.0).unwrap(), 0.5);
        assert_eq!(two.exact_value(Functional::TotalIntegral), Some(2.0));
        let a = catalog("abs(f0)").unwrap();
        assert!((a.eval(3.5).unwrap() - 1.0 / 3.5).abs() < 1e-15);
        let l1 = a.exact_antiderivative(0.0, INF).unwrap().unwrap();
        assert!((l1 - (8.0f64 / 3.0).ln()).abs() < 1e-15);
        let chi = catalog("power_cutoff(alpha=0,T=2)+-1*power_cutoff(alpha=0,T=1)").unwrap();
        assert_eq!(chi.eval(0.5).unwrap(), 0.0);
        assert_eq!(chi.eval(1.5).unwrap(), 1.0);
        assert_eq!(chi.exact_value(Functional::TotalIntegral), Some(1.0));
    }

    #[test]
    fn canonical_names() {
        assert_eq!(catalog("power_tail(beta=2)").unwrap().name(), "power_tail(beta=2)");
        assert_eq!(catalog("theta").unwrap().name(), "theta");
    }

    #[test]
    fn piece_coverage() {
        let fs = ["theta", "f0", "fe", "power_tail(beta=2)", "log_tail(beta=1.5)", "indicator(a=1,b=2)"];
        for name in fs {
            let f = catalog(name).unwrap();
            for i in 0..10_000 {
                let t = 10f64.powf(-6.0 + 12.0 * i as f64 / 9_999.0);
                let claims = f.pieces().iter().filter(|p| p.lo < t && t <= p.hi).count();
                assert_eq!(claims, 1, "{name} at {t}");
                assert!(f.eval(t).unwrap().is_finite());
            }
        }
    }
}

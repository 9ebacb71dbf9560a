//! Named sequences and parametric families.
//!
//! Specs accepted by [`SequenceCatalog::parse`]: `lambda`, `em(m=3)`,
//! `powcut(alpha=0.5,N=1000000)`, `2*lambda`, `-1/2*em(m=2)`, the literal
//! `[1, -1, 1/3]` and `file:PATH` (one rational per line).

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use super::rational::Rational;
use super::seq::{DecayClass, SeqSpec};
use crate::error::{HardyError, Result};
use crate::syntax::{parse_call, split_top_level, ParamDecl, Params};

/// Longest list a family may materialize.
const MAX_LIST: u64 = 10_000_000;

pub trait SequenceFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn params(&self) -> &'static [ParamDecl] {
        &[]
    }
    fn build(&self, p: &Params) -> Result<SeqSpec>;
}

pub struct SequenceCatalog {
    families: BTreeMap<&'static str, Box<dyn SequenceFamily>>,
}

impl Default for SequenceCatalog {
    fn default() -> Self {
        let mut c = SequenceCatalog {
            families: BTreeMap::new(),
        };
        c.register(Box::new(Lambda));
        c.register(Box::new(UnitVector));
        c.register(Box::new(Ones));
        c.register(Box::new(PowerCut));
        c.register(Box::new(Power));
        c.register(Box::new(LogSquared));
        c
    }
}

impl SequenceCatalog {
    pub fn standard() -> &'static SequenceCatalog {
        static CATALOG: OnceLock<SequenceCatalog> = OnceLock::new();
        CATALOG.get_or_init(SequenceCatalog::default)
    }

    pub fn register(&mut self, family: Box<dyn SequenceFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn families(&self) -> impl Iterator<Item = &dyn SequenceFamily> {
        self.families.values().map(|f| f.as_ref())
    }

    pub fn family(&self, name: &str) -> Result<&dyn SequenceFamily> {
        self.families
            .get(name)
            .map(|f| f.as_ref())
            .ok_or_else(|| HardyError::Lookup(name.to_string()))
    }

    pub fn build(&self, name: &str, args: &BTreeMap<String, f64>) -> Result<SeqSpec> {
        let fam = self.family(name)?;
        let params = Params::resolve(name, fam.params(), args)?;
        Ok(fam.build(&params)?.renamed(params.display(name, fam.params())))
    }

    pub fn parse(&self, spec: &str) -> Result<SeqSpec> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("file:") {
            return read_sequence_file(Path::new(path.trim()));
        }
        if let Some(body) = spec.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let terms = if body.trim().is_empty() {
                Vec::new()
            } else {
                body.split(',').map(str::parse).collect::<Result<Vec<Rational>>>()?
            };
            let name = format!("[{}]", terms.iter().map(Rational::to_string).collect::<Vec<_>>().join(","));
            return Ok(SeqSpec::finite(name, terms));
        }
        let parts = split_top_level(spec, '*');
        if parts.len() == 2 {
            let c: Rational = parts[0].parse()?;
            return Ok(self.parse(parts[1])?.scaled(&c));
        }
        if parts.len() > 2 {
            return Err(HardyError::Parse(format!("one scale factor at most: {spec:?}")));
        }
        let call = parse_call(spec)?;
        self.build(&call.name, &call.args)
    }
}

/// Parses the standard catalog.
pub fn sequence(spec: &str) -> Result<SeqSpec> {
    SequenceCatalog::standard().parse(spec)
}

/// One rational per line (`p/q` or integer); blank lines and `#` comments
/// are skipped.
pub fn parse_sequence_text(text: &str) -> Result<Vec<Rational>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then_some((i, line))
        })
        .map(|(i, line)| {
            line.parse()
                .map_err(|e| HardyError::Parse(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

pub fn read_sequence_file(path: &Path) -> Result<SeqSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HardyError::Parse(format!("{}: {e}", path.display())))?;
    Ok(SeqSpec::finite(format!("file:{}", path.display()), parse_sequence_text(&text)?))
}

fn int_param(p: &Params, name: &str, min: u64, max: u64) -> Result<u64> {
    let v = p.get(name);
    if v.fract() != 0.0 || v < min as f64 || v > max as f64 {
        return Err(HardyError::Parameter(format!("{name} must be an integer in [{min}, {max}], got {v}")));
    }
    Ok(v as u64)
}

struct Lambda;

impl SequenceFamily for Lambda {
    fn name(&self) -> &'static str {
        "lambda"
    }
    fn description(&self) -> &'static str {
        "1/(k(k+1)), the kernel of the modified Cesàro operator; sum 1"
    }
    fn build(&self, _: &Params) -> Result<SeqSpec> {
        Ok(SeqSpec::generator("lambda", |t| 1.0 / (t * (t + 1.0)), DecayClass::Power { alpha: 2.0, coef: 1.0 })?
            .with_exact_terms(|k| Rational::recip_int(k) - Rational::recip_int(k + 1))?
            .with_exact_sum(Rational::one())
            .with_monotone_from(1)?)
    }
}

struct UnitVector;

impl SequenceFamily for UnitVector {
    fn name(&self) -> &'static str {
        "em"
    }
    fn description(&self) -> &'static str {
        "unit vector e_m: 1 at k = m, 0 elsewhere"
    }
    fn params(&self) -> &'static [ParamDecl] {
        &[("m", Some(1.0))]
    }
    fn build(&self, p: &Params) -> Result<SeqSpec> {
        let m = int_param(p, "m", 1, MAX_LIST)?;
        let mut v = vec![Rational::zero(); m as usize];
        v[m as usize - 1] = Rational::one();
        Ok(SeqSpec::finite("em", v))
    }
}

struct Ones;

impl SequenceFamily for Ones {
    fn name(&self) -> &'static str {
        "ones"
    }
    fn description(&self) -> &'static str {
        "1 for k ≤ N, 0 beyond"
    }
    fn params(&self) -> &'static [ParamDecl] {
        &[("N", Some(1.0))]
    }
    fn build(&self, p: &Params) -> Result<SeqSpec> {
        let n = int_param(p, "N", 1, MAX_LIST)?;
        Ok(SeqSpec::finite("ones", vec![Rational::one(); n as usize]))
    }
}

struct PowerCut;

impl SequenceFamily for PowerCut {
    fn name(&self) -> &'static str {
        "powcut"
    }
    fn description(&self) -> &'static str {
        "k^(-alpha) for k ≤ N, 0 beyond; near-extremal for the Hardy ratio at alpha = 1/p"
    }
    fn params(&self) -> &'static [ParamDecl] {
        &[("alpha", Some(0.5)), ("N", Some(1000.0))]
    }
    fn build(&self, p: &Params) -> Result<SeqSpec> {
        let alpha = p.get("alpha");
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(HardyError::Parameter(format!("alpha must be ≥ 0, got {alpha}")));
        }
        let n = int_param(p, "N", 1, 1 << 40)?;
        let cut = n as f64;
        SeqSpec::generator(
            "powcut",
            move |t| if t <= cut { t.powf(-alpha) } else { 0.0 },
            DecayClass::Compact { support_end: n },
        )
    }
}

struct Power;

impl SequenceFamily for Power {
    fn name(&self) -> &'static str {
        "power"
    }
    fn description(&self) -> &'static str {
        "k^(-alpha); summable for alpha > 1"
    }
    fn params(&self) -> &'static [ParamDecl] {
        &[("alpha", Some(2.0))]
    }
    fn build(&self, p: &Params) -> Result<SeqSpec> {
        let alpha = p.get("alpha");
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(HardyError::Parameter(format!("alpha must be > 0, got {alpha}")));
        }
        let s = SeqSpec::generator("power", move |t| t.powf(-alpha), DecayClass::Power { alpha, coef: 1.0 })?
            .with_monotone_from(1)?;
        if alpha.fract() == 0.0 && alpha <= 16.0 {
            let e = alpha as u32;
            return s.with_exact_terms(move |k| Rational::from(num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(k).pow(e))));
        }
        Ok(s)
    }
}

struct LogSquared;

impl SequenceFamily for LogSquared {
    fn name(&self) -> &'static str {
        "logsq"
    }
    fn description(&self) -> &'static str {
        "1/(k ln^beta(k+1)) for k ≥ from; summable, with L(a) infinite when beta ≤ 2"
    }
    fn params(&self) -> &'static [ParamDecl] {
        &[("beta", Some(2.0)), ("from", Some(3.0))]
    }
    fn build(&self, p: &Params) -> Result<SeqSpec> {
        let beta = p.get("beta");
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(HardyError::Parameter(format!("beta must be > 0, got {beta}")));
        }
        let from = int_param(p, "from", 1, 1 << 20)?;
        let lo = from as f64;
        SeqSpec::generator(
            "logsq",
            move |t| if t >= lo { 1.0 / (t * t.ln_1p().powf(beta)) } else { 0.0 },
            // ln(k+1) ≥ ln k
            DecayClass::PowerLog { beta, coef: 1.0 },
        )?
        .with_monotone_from(from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_canonical() {
        assert_eq!(sequence("em(m=3)").unwrap().name(), "em(m=3)");
        assert_eq!(sequence("powcut(N=10)").unwrap().name(), "powcut(alpha=0.5,N=10)");
        assert_eq!(sequence("2*lambda").unwrap().name(), "2*lambda");
        assert_eq!(sequence("[ 1, -1 ,2/4]").unwrap().name(), "[1,-1,1/2]");
    }

    #[test]
    fn parameters_are_validated() {
        assert!(matches!(sequence("em(m=0)"), Err(HardyError::Parameter(_))));
        assert!(matches!(sequence("em(m=2.5)"), Err(HardyError::Parameter(_))));
        assert!(matches!(sequence("nope"), Err(HardyError::Lookup(_))));
        assert!(matches!(sequence("em(q=1)"), Err(HardyError::Parameter(_))));
    }

    #[test]
    fn file_format() {
        let v = parse_sequence_text("1\n# comment\n\n-3/6\n  7  # trailing\n").unwrap();
        assert_eq!(v, vec![Rational::one(), Rational::new(-1, 2), Rational::from_int(7)]);
        let e = parse_sequence_text("1\n0.5\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn exact_power_terms() {
        let s = sequence("power(alpha=2)").unwrap();
        assert_eq!(s.exact_term(3), Some(Rational::new(1, 9)));
        assert!(sequence("power(alpha=1.5)").unwrap().exact_term(3).is_none());
    }
}

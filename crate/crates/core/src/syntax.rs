//! The `name(key=value,...)` call syntax shared by function and sequence specs.

use std::collections::BTreeMap;

use crate::error::{HardyError, Result};

/// A parsed `name(key=value,...)` call.
#[derive(Clone, Debug, PartialEq)]
pub struct Call {
    pub name: String,
    pub args: BTreeMap<String, f64>,
}

pub fn parse_call(src: &str) -> Result<Call> {
    let src = src.trim();
    let Some(open) = src.find('(') else {
        check_ident(src)?;
        return Ok(Call {
            name: src.to_string(),
            args: BTreeMap::new(),
        });
    };
    if !src.ends_with(')') {
        return Err(HardyError::Parse(format!("unbalanced parentheses in `{src}`")));
    }
    let name = src[..open].trim();
    check_ident(name)?;
    let body = &src[open + 1..src.len() - 1];
    let mut args = BTreeMap::new();
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| HardyError::Parse(format!("expected key=value, got `{item}`")))?;
        let k = k.trim();
        check_ident(k)?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| HardyError::Parse(format!("`{}` is not a number", v.trim())))?;
        if args.insert(k.to_string(), v).is_some() {
            return Err(HardyError::Parse(format!("duplicate parameter `{k}`")));
        }
    }
    Ok(Call {
        name: name.to_string(),
        args,
    })
}

fn check_ident(s: &str) -> Result<()> {
    let ok = !s.is_empty()
        && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(HardyError::Parse(format!("`{s}` is not a valid name")))
    }
}

/// Declared parameter of a family: name and optional default.
pub type ParamDecl = (&'static str, Option<f64>);

/// Resolved parameter set: every declared parameter has a value.
#[derive(Clone, Debug, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn resolve(family: &str, decls: &[ParamDecl], given: &BTreeMap<String, f64>) -> Result<Params> {
        if let Some(k) = given.keys().find(|k| !decls.iter().any(|(d, _)| d == k)) {
            return Err(HardyError::Parameter(format!("{family} has no parameter `{k}`")));
        }
        let mut out = BTreeMap::new();
        for (name, default) in decls {
            let v = given
                .get(*name)
                .copied()
                .or(*default)
                .ok_or_else(|| HardyError::Parameter(format!("{family} needs `{name}`")))?;
            out.insert(name.to_string(), v);
        }
        Ok(Params(out))
    }

    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    /// Canonical `family(k=v,...)` spelling in declaration order.
    pub fn display(&self, family: &str, decls: &[ParamDecl]) -> String {
        if decls.is_empty() {
            return family.to_string();
        }
        let args: Vec<String> = decls
            .iter()
            .map(|(k, _)| format!("{k}={}", self.0[*k]))
            .collect();
        format!("{family}({})", args.join(","))
    }
}

/// Splits `src` on `sep` outside parentheses.
pub(crate) fn split_top_level(src: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&src[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&src[start..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bare_name_and_call() {
        assert_eq!(parse_call("theta").unwrap().name, "theta");
        let c = parse_call("power_cutoff(alpha=0.45, T=1)").unwrap();
        assert_eq!(c.name, "power_cutoff");
        assert_eq!(c.args["alpha"], 0.45);
        assert_eq!(c.args["T"], 1.0);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_call("f(").is_err());
        assert!(parse_call("f(a)").is_err());
        assert!(parse_call("f(a=x)").is_err());
        assert!(parse_call("f(a=1,a=2)").is_err());
        assert!(parse_call("2x").is_err());
    }

    #[test]
    fn resolve_applies_defaults_and_rejects_unknown() {
        let decls: &[ParamDecl] = &[("alpha", Some(0.0)), ("T", Some(1.0))];
        let given = parse_call("p(T=2)").unwrap().args;
        let p = Params::resolve("p", decls, &given).unwrap();
        assert_eq!(p.get("alpha"), 0.0);
        assert_eq!(p.display("p", decls), "p(alpha=0,T=2)");
        let bad = parse_call("p(beta=2)").unwrap().args;
        assert!(matches!(Params::resolve("p", decls, &bad), Err(HardyError::Parameter(_))));
    }

    #[test]
    fn top_level_split_ignores_nested() {
        assert_eq!(split_top_level("a(x=1,y=2),b", ','), vec!["a(x=1,y=2)", "b"]);
    }
}

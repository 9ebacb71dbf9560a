//! Frozen reference values, produced by `golden/oracle.py`.

use std::sync::OnceLock;

use serde_json::Value;

const GOLDEN: &str = include_str!("../golden/golden.json");

pub fn golden() -> &'static Value {
    static V: OnceLock<Value> = OnceLock::new();
    V.get_or_init(|| serde_json::from_str(GOLDEN).expect("golden.json is valid JSON"))
}

/// Looks up a `/`-separated path, e.g. `hardy_ratio_powcut/2.0/1000`.
pub fn lookup(path: &str) -> &'static Value {
    path.split('/')
        .try_fold(golden(), |v, k| match v {
            Value::Array(a) => k.parse::<usize>().ok().and_then(|i| a.get(i)),
            _ => v.get(k),
        })
        .unwrap_or_else(|| panic!("golden value {path} is missing"))
}

pub fn number(path: &str) -> f64 {
    lookup(path).as_f64().unwrap_or_else(|| panic!("golden value {path} is not a number"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_entries_resolve() {
        assert_eq!(number("e3_mod_norm/0"), 7.0);
        assert!(number("hardy_ratio_powcut/2.0/1000000") > 3.0);
        assert_eq!(lookup("power_tail_sweep/rows").as_array().unwrap().len(), 30);
    }
}

//! Closed forms of `Qf₀` and `Qf_e`, written out case by case.

use std::f64::consts::E;

/// `Qf₀(x)` for `f₀ = (1_[1,2] - 1_[3,4])/t`.
pub fn oracle_qf0(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else if x <= 2.0 {
        x.ln() / x
    } else if x <= 3.0 {
        2f64.ln() / x
    } else if x <= 4.0 {
        (6f64.ln() - x.ln()) / x
    } else {
        1.5f64.ln() / x
    }
}

/// `Qf_e(x)` for `f_e = (1_(0,1/e) - 1_(e,∞))/(t ln² t)`.
pub fn oracle_qfe(x: f64) -> f64 {
    if x <= 1.0 / E {
        -1.0 / (x * x.ln())
    } else if x < E {
        1.0 / x
    } else {
        1.0 / (x * x.ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((oracle_qf0(5.0) - 1.5f64.ln() / 5.0).abs() < 1e-16);
        assert!((oracle_qfe(E * E) - 1.0 / (2.0 * E * E)).abs() < 1e-16);
        assert_eq!(oracle_qfe(1.0), 1.0);
        assert_eq!(oracle_qf0(0.5), 0.0);
    }

    #[test]
    fn continuous_at_case_boundaries() {
        for (x, f) in [(2.0, oracle_qf0 as fn(f64) -> f64), (3.0, oracle_qf0), (4.0, oracle_qf0)] {
            assert!((f(x) - f(x * (1.0 + 1e-12))).abs() < 1e-10);
        }
        assert!((oracle_qfe(1.0 / E) - oracle_qfe(1.0 / E * (1.0 + 1e-12))).abs() < 1e-9);
    }
}

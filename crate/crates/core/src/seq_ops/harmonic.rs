use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::rational::Rational;
use crate::numeric::DoubleDouble;

/// Euler–Mascheroni constant to 20 digits (rounded to `f64`).
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.57721566490153286061;

/// `Σ_{lo<k≤hi} 1/k` as an unreduced fraction, by binary splitting.
fn split(lo: u64, hi: u64) -> (BigInt, BigInt) {
    if hi - lo == 1 {
        return (BigInt::one(), BigInt::from(hi));
    }
    let mid = lo + (hi - lo) / 2;
    let (p1, q1) = split(lo, mid);
    let (p2, q2) = split(mid, hi);
    (p1 * &q2 + p2 * &q1, q1 * q2)
}

/// `H_n = Σ_{k≤n} 1/k`, exactly.
pub fn harmonic(n: u64) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    let (p, q) = split(0, n);
    BigRational::new(p, q).into()
}

/// `Σ_{lo<k≤hi} 1/k`, exactly.
pub(crate) fn harmonic_range(lo: u64, hi: u64) -> Rational {
    if hi <= lo {
        return Rational::zero();
    }
    let (p, q) = split(lo, hi);
    BigRational::new(p, q).into()
}

/// `H_n` in double-double.
pub fn harmonic_dd(n: u64) -> DoubleDouble {
    // smallest terms first
    (1..=n).rev().fold(DoubleDouble::new(0.0), |acc, k| acc.add(DoubleDouble::recip_int(k)))
}

/// `H_n - ln n - γ`.
pub fn gamma_residual(n: u64) -> f64 {
    assert!(n >= 1, "gamma_residual needs n ≥ 1");
    residual(harmonic_dd(n), n)
}

const GAMMA_DD: DoubleDouble = DoubleDouble {
    hi: EULER_GAMMA,
    lo: -4.942915152430645e-18,
};
const LN2_DD: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};

/// `ln n` in double-double: `n = 2^k m` with `m` near 1, then
/// `ln m = 2 atanh((m-1)/(m+1))`, where the argument is a ratio of integers.
fn ln_dd(n: u64) -> DoubleDouble {
    assert!(n < 1 << 52);
    let mut k = 63 - n.leading_zeros() as i64;
    // m = n/2^k in [1, 2); move to [0.75, 1.5)
    if (n as f64) >= 1.5 * (1u64 << k) as f64 {
        k += 1;
    }
    let base = 1u64 << k;
    let z = DoubleDouble::ratio(n as i64 - base as i64, n + base);
    let z2 = z.mul(z);
    let mut pow = z;
    let mut acc = DoubleDouble::new(0.0);
    for j in 0..60u64 {
        let t = pow.mul(DoubleDouble::recip_int(2 * j + 1));
        acc = acc.add(t);
        if t.hi.abs() < 1e-34 {
            break;
        }
        pow = pow.mul(z2);
    }
    let acc = acc.add(acc);
    LN2_DD.mul(DoubleDouble::new(k as f64)).add(acc)
}

fn residual(h: DoubleDouble, n: u64) -> f64 {
    h.sub(ln_dd(n)).sub(GAMMA_DD).to_f64()
}

/// `(n, H_n - ln n - γ)` for `n = 1..=n_max`, accumulating `H_n` once.
pub fn gamma_residuals(n_max: u64) -> impl Iterator<Item = (u64, f64)> {
    let mut h = DoubleDouble::new(0.0);
    (1..=n_max).map(move |n| {
        h = h.add(DoubleDouble::recip_int(n));
        (n, residual(h, n))
    })
}

/// `H(t) = ψ(t+1) + γ`, the real extension of `H_k`. Exact sums below 64,
/// asymptotic series above (absolute error below 1e-13).
pub fn harmonic_real(t: f64) -> f64 {
    if t < 64.0 {
        let k = t.floor();
        if k == t {
            return harmonic_dd(k as u64).to_f64();
        }
        // shift up with the recurrence H(t) = H(t+1) - 1/(t+1)
        let mut corr = 0.0;
        let mut x = t;
        while x < 64.0 {
            x += 1.0;
            corr += 1.0 / x;
        }
        return harmonic_real(x) - corr;
    }
    let x2 = 1.0 / (t * t);
    t.ln() + EULER_GAMMA + 0.5 / t - x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 / 252.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(harmonic(4), Rational::new(25, 12));
        assert_eq!(harmonic(1), Rational::one());
        assert!((gamma_residual(1) - (1.0 - EULER_GAMMA)).abs() < 1e-16);
    }

    #[test]
    fn exact_and_double_double_agree() {
        for n in [1, 7, 64, 1000] {
            let e = harmonic(n).to_f64();
            assert!((harmonic_dd(n).to_f64() - e).abs() <= 1e-16 * e, "{n}");
            assert!((harmonic_real(n as f64) - e).abs() < 1e-13, "{n}");
        }
    }

    #[test]
    fn logarithm_carries_the_low_word() {
        for (n, hi, lo) in [(3, 1.0986122886681098, -9.07129723500153e-17), (1000003, 13.815513557959774, 4.636218047193209e-16)] {
            let l = ln_dd(n);
            assert_eq!(l.hi, hi);
            assert!((l.lo - lo).abs() < 1e-30, "{n}: {}", l.lo);
        }
        assert!((gamma_residual(1_000_000) - 4.999999166666667e-7).abs() < 1e-22);
    }

    #[test]
    fn streaming_matches_direct() {
        let v: Vec<_> = gamma_residuals(5000).collect();
        assert!((v[4999].1 - gamma_residual(5000)).abs() < 1e-18);
    }

    #[test]
    fn real_extension_is_continuous_across_the_switch() {
        assert!((harmonic_real(63.999999) - harmonic_real(64.0)).abs() < 1e-7);
        assert!((harmonic_real(2.5) - (harmonic_real(3.5) - 1.0 / 3.5)).abs() < 1e-14);
    }
}

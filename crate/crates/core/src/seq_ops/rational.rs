use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{HardyError, Result};

/// Exact rational, always reduced with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q`; panics on `q = 0` like integer division would.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn recip_int(k: u64) -> Self {
        Rational(BigRational::new(BigInt::one(), BigInt::from(k)))
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Nearest `f64` (correct to a few ulps even for huge numerators and
    /// denominators).
    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self.0.to_f64() {
            if v.is_finite() {
                return v;
            }
        }
        // scale both parts down to a common exponent before dividing
        let n = self.numer();
        let d = self.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let ns = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let ds = (d >> shift).to_f64().unwrap_or(f64::NAN);
        ns / ds
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

/// Accepts `p/q` or an integer, with optional sign and surrounding space.
impl FromStr for Rational {
    type Err = HardyError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || HardyError::Parse(format!("not a rational: {s:?}"));
        let int = |t: &str| -> Result<BigInt> {
            let t = t.trim();
            let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            BigInt::from_str(t.strip_prefix('+').unwrap_or(t)).map_err(|_| bad())
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let (p, q) = (int(p)?, int(q)?);
                if q.is_zero() {
                    return Err(HardyError::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Rational(BigRational::new(p, q)))
            }
            None => Ok(Rational(BigRational::from_integer(int(s)?))),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                Rational(self.0.$m(o.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, o: &Rational) -> Rational {
                Rational((&self.0).$m(&o.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: &Rational) -> Rational {
                Rational(self.0.$m(&o.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, o: &Rational) {
        self.0 += &o.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// Pairwise summation: operands of similar size meet, so long sums with
/// growing denominators cost far less than a running total.
fn tree_sum(mut v: Vec<Rational>) -> Rational {
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a + b,
                None => a,
            });
        }
        v = next;
    }
    v.pop().unwrap_or_else(Rational::zero)
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(it: I) -> Rational {
        tree_sum(it.filter(|x| !x.is_zero()).collect())
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(it: I) -> Rational {
        it.filter(|x| !x.is_zero()).cloned().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("3/6".parse::<Rational>().unwrap(), Rational::new(1, 2));
        assert_eq!(" -4 ".parse::<Rational>().unwrap(), Rational::from_int(-4));
        assert_eq!("+2/-4".parse::<Rational>().unwrap(), Rational::new(-1, 2));
        for bad in ["", "1/0", "0.5", "1e3", "a/2", "1//2", "- 3"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn always_reduced() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn huge_parts_still_convert() {
        let mut r = Rational::zero();
        for k in 1..=400u64 {
            r += &Rational::recip_int(k);
        }
        let big = &r * &Rational(BigRational::from_integer(BigInt::from(10).pow(400)));
        assert!((r.to_f64() - 6.5699296911765055).abs() < 1e-14);
        assert!(big.to_f64().is_infinite() || big.to_f64() > 1e300);
    }
}

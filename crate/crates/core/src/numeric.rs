//! Compensated floating-point accumulation.

/// Neumaier running sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    xs.into_iter().collect::<Neumaier>().value()
}

/// Unevaluated pair `hi + lo` carrying about 32 significant digits.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub fn new(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: DoubleDouble) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        DoubleDouble { hi, lo }
    }

    pub fn sub(self, o: DoubleDouble) -> DoubleDouble {
        self.add(DoubleDouble { hi: -o.hi, lo: -o.lo })
    }

    /// `1/k` to double-double accuracy.
    pub fn recip_int(k: u64) -> DoubleDouble {
        let kf = k as f64;
        let q = 1.0 / kf;
        // residual 1 - k·q is exact via fma
        let (p, pe) = two_prod(q, kf);
        let r = (1.0 - p) - pe;
        DoubleDouble { hi: q, lo: r / kf }.renorm()
    }

    /// `p/q` to double-double accuracy, for integers below 2^53.
    pub fn ratio(p: i64, q: u64) -> DoubleDouble {
        let (pf, qf) = (p as f64, q as f64);
        let z = pf / qf;
        let (m, me) = two_prod(z, qf);
        let r = (pf - m) - me;
        DoubleDouble { hi: z, lo: r / qf }.renorm()
    }

    pub fn mul(self, o: DoubleDouble) -> DoubleDouble {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        DoubleDouble { hi: p, lo: e }.renorm()
    }

    fn renorm(self) -> DoubleDouble {
        let (hi, lo) = two_sum(self.hi, self.lo);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        assert_eq!(sum([1.0, 1e100, 1.0, -1e100]), 2.0);
    }

    #[test]
    fn double_double_recip_is_tight() {
        let third = DoubleDouble::recip_int(3);
        let back = third.add(third).add(third);
        assert!((back.hi - 1.0).abs() + back.lo.abs() < 1e-30);
        let x = DoubleDouble::ratio(-2, 7).mul(DoubleDouble::new(7.0));
        assert!((x.hi + 2.0).abs() + x.lo.abs() < 1e-30);
    }
}

use std::fmt;

/// Closed-form expression in the single variable `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    T,
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Scale(f64, Box<Expr>),
    Recip(Box<Expr>),
    Pow(Box<Expr>, f64),
    Ln(Box<Expr>),
    /// `ln(1 + x)`
    Ln1p(Box<Expr>),
    /// `e^x - 1`
    Expm1(Box<Expr>),
    Abs(Box<Expr>),
}

impl Expr {
    pub fn t() -> Expr {
        Expr::T
    }

    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn zero() -> Expr {
        Expr::Const(0.0)
    }

    pub fn add(self, other: Expr) -> Expr {
        match self {
            Expr::Add(mut xs) => {
                xs.push(other);
                Expr::Add(xs)
            }
            e => Expr::Add(vec![e, other]),
        }
    }

    pub fn mul(self, other: Expr) -> Expr {
        match self {
            Expr::Mul(mut xs) => {
                xs.push(other);
                Expr::Mul(xs)
            }
            e => Expr::Mul(vec![e, other]),
        }
    }

    pub fn scale(self, k: f64) -> Expr {
        if k == 1.0 {
            return self;
        }
        match self {
            Expr::Const(v) => Expr::Const(k * v),
            Expr::Scale(j, e) => Expr::Scale(k * j, e),
            e => Expr::Scale(k, Box::new(e)),
        }
    }

    pub fn recip(self) -> Expr {
        Expr::Recip(Box::new(self))
    }

    pub fn powf(self, p: f64) -> Expr {
        Expr::Pow(Box::new(self), p)
    }

    pub fn ln(self) -> Expr {
        Expr::Ln(Box::new(self))
    }

    pub fn ln1p(self) -> Expr {
        Expr::Ln1p(Box::new(self))
    }

    pub fn expm1(self) -> Expr {
        Expr::Expm1(Box::new(self))
    }

    pub fn abs(self) -> Expr {
        Expr::Abs(Box::new(self))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(v) if *v == 0.0)
    }

    /// IEEE evaluation; `t = 0` and `t = ∞` give the one-sided limits for
    /// the catalog forms (e.g. `-1/ln t → 0` as `t → 0⁺`).
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Const(v) => *v,
            Expr::T => t,
            Expr::Add(xs) => xs.iter().map(|e| e.eval(t)).sum(),
            Expr::Mul(xs) => xs.iter().map(|e| e.eval(t)).product(),
            Expr::Scale(k, e) => {
                if *k == 0.0 {
                    0.0
                } else {
                    k * e.eval(t)
                }
            }
            Expr::Recip(e) => 1.0 / e.eval(t),
            Expr::Pow(e, p) => e.eval(t).powf(*p),
            Expr::Ln(e) => e.eval(t).ln(),
            Expr::Ln1p(e) => e.eval(t).ln_1p(),
            Expr::Expm1(e) => e.eval(t).exp_m1(),
            Expr::Abs(e) => e.eval(t).abs(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) => write!(f, "{v}"),
            Expr::T => write!(f, "t"),
            Expr::Add(xs) => {
                write!(f, "(")?;
                for (i, e) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            Expr::Mul(xs) => {
                for (i, e) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "·")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            Expr::Scale(k, e) => write!(f, "{k}·{e}"),
            Expr::Recip(e) => write!(f, "1/{e}"),
            Expr::Pow(e, p) => write!(f, "{e}^{p}"),
            Expr::Ln(e) => write!(f, "ln({e})"),
            Expr::Ln1p(e) => write!(f, "ln1p({e})"),
            Expr::Expm1(e) => write!(f, "expm1({e})"),
            Expr::Abs(e) => write!(f, "|{e}|"),
        }
    }
}

/// Central-difference derivative with one Richardson step.
pub fn numeric_derivative<F: Fn(f64) -> f64>(g: F, t: f64) -> f64 {
    let h = 1e-3 * t.abs().max(1e-300);
    let d = |h: f64| (g(t + h) - g(t - h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// Fundamental-theorem check: `d/dt antiderivative = expr` to relative `tol`.
pub fn check_antiderivative(expr: &Expr, anti: &Expr, points: &[f64], tol: f64) -> Result<(), f64> {
    for &t in points {
        let want = expr.eval(t);
        let got = numeric_derivative(|x| anti.eval(x), t);
        // differencing a nearly flat antiderivative loses digits to rounding
        let noise = 1e4 * f64::EPSILON * anti.eval(t).abs() / (1e-3 * t);
        let scale = want.abs().max(1e-12);
        if !((got - want).abs() <= tol * scale + noise) {
            return Err(t);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_theta() {
        let theta = Expr::c(1.0).add(Expr::t()).powf(-2.0);
        assert_eq!(theta.eval(1.0), 0.25);
    }

    #[test]
    fn limits_at_zero_and_infinity() {
        // -1/ln t at 0⁺ and 1/ln t at ∞
        let a = Expr::t().ln().recip().scale(-1.0);
        assert_eq!(a.eval(0.0), 0.0);
        let b = Expr::t().ln().recip();
        assert_eq!(b.eval(f64::INFINITY), 0.0);
        // t/(1+t) has no IEEE limit at ∞ in that form; 1/(1 + 1/t) does
        let c = Expr::t().mul(Expr::c(1.0).add(Expr::t()).recip());
        assert!(c.eval(f64::INFINITY).is_nan());
        let d = Expr::c(1.0).add(Expr::t().recip()).recip();
        assert_eq!(d.eval(f64::INFINITY), 1.0);
        assert_eq!(d.eval(0.0), 0.0);
    }

    #[test]
    fn ftc_check_accepts_correct_antiderivative() {
        let f = Expr::t().recip();
        let a = Expr::t().ln();
        assert!(check_antiderivative(&f, &a, &[0.5, 1.0, 3.0, 1e4], 1e-6).is_ok());
        let wrong = Expr::t().ln().scale(2.0);
        assert!(check_antiderivative(&f, &wrong, &[1.0], 1e-6).is_err());
    }

    #[test]
    fn display_is_readable() {
        let e = Expr::t().ln().scale(-1.0);
        assert_eq!(e.to_string(), "-1·ln(t)");
    }
}

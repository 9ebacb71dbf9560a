//! Embedded Gauss–Kronrod pairs.
//!
//! Node and weight tables are the QUADPACK ones; the error estimate is the
//! QUADPACK rescaling of `|K - G|` so that smooth panels are not
//! over-refined.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{HardyError, Result};

/// One panel evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PanelEstimate {
    pub value: f64,
    pub err: f64,
    /// `∫|g|` over the panel by the same rule.
    pub abs_value: f64,
}

pub trait QuadRule: Send + Sync {
    fn name(&self) -> &'static str;
    /// Number of integrand evaluations per panel.
    fn points(&self) -> usize;
    /// Applies the pair on `[a, b]`. Non-finite integrand values surface as
    /// an evaluation error naming the offending node.
    fn apply(&self, g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<PanelEstimate>;
}

struct GaussKronrod {
    name: &'static str,
    /// Kronrod abscissae on `[0, 1)` in decreasing order, centre last;
    /// odd indices are the Gauss nodes.
    xgk: &'static [f64],
    /// Gauss weights for the odd-index nodes (plus the centre when the Gauss
    /// rule has one).
    wg: &'static [f64],
    wgk: &'static [f64],
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

#[inline]
fn checked(g: &dyn Fn(f64) -> f64, t: f64) -> Result<f64> {
    let v = g(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(HardyError::Evaluation { t, value: v })
    }
}

impl QuadRule for GaussKronrod {
    fn name(&self) -> &'static str {
        self.name
    }

    fn points(&self) -> usize {
        2 * self.xgk.len() - 1
    }

    fn apply(&self, g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<PanelEstimate> {
        let n = self.xgk.len();
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let fc = checked(g, center)?;

        let mut res_g = if n % 2 == 0 { fc * self.wg[n / 2 - 1] } else { 0.0 };
        let mut res_k = fc * self.wgk[n - 1];
        let mut res_abs = res_k.abs();
        let mut fv1 = [0.0f64; 16];
        let mut fv2 = [0.0f64; 16];

        for j in 0..n - 1 {
            let x = half * self.xgk[j];
            let f1 = checked(g, center - x)?;
            let f2 = checked(g, center + x)?;
            fv1[j] = f1;
            fv2[j] = f2;
            if j % 2 == 1 {
                res_g += self.wg[j / 2] * (f1 + f2);
            }
            res_k += self.wgk[j] * (f1 + f2);
            res_abs += self.wgk[j] * (f1.abs() + f2.abs());
        }

        let mean = 0.5 * res_k;
        let mut res_asc = self.wgk[n - 1] * (fc - mean).abs();
        for j in 0..n - 1 {
            res_asc += self.wgk[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
        }

        let err = (res_k - res_g) * half;
        let res_abs = res_abs * half.abs();
        let res_asc = res_asc * half.abs();
        Ok(PanelEstimate {
            value: res_k * half,
            err: rescale_error(err, res_abs, res_asc),
            abs_value: res_abs,
        })
    }
}

#[allow(clippy::excessive_precision)]
static GK15: GaussKronrod = GaussKronrod {
    name: "gk15",
    xgk: &[
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ],
    wg: &[
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ],
    wgk: &[
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ],
};

#[allow(clippy::excessive_precision)]
static GK21: GaussKronrod = GaussKronrod {
    name: "gk21",
    xgk: &[
        0.995657163025808080735527280689003,
        0.973906528517171720077964012084452,
        0.930157491355708226001207180059508,
        0.865063366688984510732096688423493,
        0.780817726586416897063717578345042,
        0.679409568299024406234327365114874,
        0.562757134668604683339000099272694,
        0.433395394129247190799265943165784,
        0.294392862701460198131126603103866,
        0.148874338981631210884826001129720,
        0.000000000000000000000000000000000,
    ],
    wg: &[
        0.066671344308688137593568809893332,
        0.149451349150580593145776339657697,
        0.219086362515982043995534934228163,
        0.269266719309996355091226921569469,
        0.295524224714752870173892994651338,
    ],
    wgk: &[
        0.011694638867371874278064396062192,
        0.032558162307964727478818972459390,
        0.054755896574351996031381300244580,
        0.075039674810919952767043140916190,
        0.093125454583697605535065465083366,
        0.109387158802297641899210590325805,
        0.123491976262065851077958109831074,
        0.134709217311473325928054001771707,
        0.142775938577060080797094273138717,
        0.147739104901338491374841515972068,
        0.149445554002916905664936468389821,
    ],
};

#[allow(clippy::excessive_precision)]
static GK31: GaussKronrod = GaussKronrod {
    name: "gk31",
    xgk: &[
        0.998002298693397060285172840152271,
        0.987992518020485428489565718586613,
        0.967739075679139134257347978784337,
        0.937273392400705904307758947710209,
        0.897264532344081900882509656454496,
        0.848206583410427216200648320774217,
        0.790418501442465932967649294817947,
        0.724417731360170047416186054613938,
        0.650996741297416970533735895313275,
        0.570972172608538847537226737253911,
        0.485081863640239680693655740232351,
        0.394151347077563369897207370981045,
        0.299180007153168812166780024266389,
        0.201194093997434522300628303394596,
        0.101142066918717499027074231447392,
        0.000000000000000000000000000000000,
    ],
    wg: &[
        0.030753241996117268354628393577204,
        0.070366047488108124709267416450667,
        0.107159220467171935011869546685869,
        0.139570677926154314447804794511028,
        0.166269205816993933553200860481209,
        0.186161000015562211026800561866423,
        0.198431485327111576456118326443839,
        0.202578241925561272880620199967519,
    ],
    wgk: &[
        0.005377479872923348987792051430128,
        0.015007947329316122538374763075807,
        0.025460847326715320186874001019653,
        0.035346360791375846222037948478360,
        0.044589751324764876608227299373280,
        0.053481524690928087265343147239430,
        0.062009567800670640285139230960803,
        0.069854121318728258709520077099147,
        0.076849680757720378894432777482659,
        0.083080502823133021038289247286104,
        0.088564443056211770647275443693774,
        0.093126598170825321225486872747346,
        0.096642726983623678505179907627589,
        0.099173598721791959332393173484603,
        0.100769845523875595044946662617570,
        0.101330007014791549017374792767493,
    ],
};

pub const DEFAULT_RULE: &str = "gk21";

fn registry() -> &'static BTreeMap<&'static str, &'static dyn QuadRule> {
    static RULES: OnceLock<BTreeMap<&'static str, &'static dyn QuadRule>> = OnceLock::new();
    RULES.get_or_init(|| {
        let rules: [&'static dyn QuadRule; 3] = [&GK15, &GK21, &GK31];
        rules.into_iter().map(|r| (r.name(), r)).collect()
    })
}

pub fn rule(name: &str) -> Result<&'static dyn QuadRule> {
    registry()
        .get(name)
        .copied()
        .ok_or_else(|| HardyError::Lookup(name.to_string()))
}

pub fn rule_names() -> Vec<&'static str> {
    registry().keys().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for r in [&GK15, &GK21, &GK31] {
            let n = r.xgk.len();
            let k: f64 = 2.0 * r.wgk[..n - 1].iter().sum::<f64>() + r.wgk[n - 1];
            assert!((k - 2.0).abs() < 1e-14, "{}", r.name);
        }
    }

    #[test]
    fn exact_for_polynomials() {
        for name in rule_names() {
            let r = rule(name).unwrap();
            let est = r.apply(&|t| 5.0 * t.powi(4) - 3.0 * t * t + 1.0, 0.0, 2.0).unwrap();
            assert!((est.value - 26.0).abs() < 1e-12, "{name}");
            assert!(est.err < 1e-10);
        }
    }

    #[test]
    fn reports_non_finite_node() {
        let r = rule("gk15").unwrap();
        let e = r.apply(&|t| if t > 0.5 { f64::NAN } else { t }, 0.0, 1.0);
        assert!(matches!(e, Err(HardyError::Evaluation { .. })));
    }

    #[test]
    fn unknown_rule() {
        assert!(matches!(rule("simpson"), Err(HardyError::Lookup(_))));
    }
}

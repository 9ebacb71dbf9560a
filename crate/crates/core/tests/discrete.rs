use hardy_core::seq_ops::{
    gamma_residual, harmonic, hardy_ratio, sequence, PreparedSeq, Rational, Scalar, SeqConfig, SeqSpec, Series,
};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=30).prop_map(|(p, q)| Rational::new(p, q))
}

fn exact(s: Scalar) -> Rational {
    s.exact().cloned().expect("exact value")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modified_average_splits(v in prop::collection::vec(rational(), 1..40)) {
        let a = SeqSpec::finite("r", v.clone());
        let p = PreparedSeq::new(&a, &SeqConfig::default()).unwrap();
        for n in 1..=v.len() as u64 + 3 {
            let lhs = exact(p.modified(n).unwrap());
            let rhs = exact(p.j1(n).unwrap()) - exact(p.j2(n).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn fubini_is_exact(v in prop::collection::vec(rational().prop_map(|r| r.abs()), 1..40)) {
        let a = SeqSpec::finite("r", v);
        let p = PreparedSeq::new(&a, &SeqConfig::default()).unwrap();
        prop_assert_eq!(p.j1_sum().unwrap(), p.j1_fubini().unwrap());
        prop_assert_eq!(p.j2_sum().unwrap(), p.j2_fubini().unwrap());
    }

    #[test]
    fn operators_are_linear(v in prop::collection::vec(rational(), 1..30), w in prop::collection::vec(rational(), 1..30), c in rational()) {
        let n = v.len().max(w.len());
        let mut sum = vec![Rational::zero(); n];
        for (i, x) in v.iter().enumerate() { sum[i] = &sum[i] + x; }
        for (i, x) in w.iter().enumerate() { sum[i] = &sum[i] + &(&c * x); }
        let cfg = SeqConfig::default();
        let (a, b, s) = (SeqSpec::finite("a", v), SeqSpec::finite("b", w), SeqSpec::finite("s", sum));
        let (pa, pb, ps) = (PreparedSeq::new(&a, &cfg).unwrap(), PreparedSeq::new(&b, &cfg).unwrap(), PreparedSeq::new(&s, &cfg).unwrap());
        for k in 1..=n as u64 + 2 {
            let lhs = exact(ps.modified(k).unwrap());
            let rhs = exact(pa.modified(k).unwrap()) + &c * &exact(pb.modified(k).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn lambda_maps_to_reciprocals() {
    let a = sequence("lambda").unwrap();
    let p = PreparedSeq::new(&a, &SeqConfig::default()).unwrap();
    for n in (1..=200).chain([19_999, 20_000]) {
        assert_eq!(p.modified(n).unwrap(), Scalar::Exact(Rational::zero()));
    }
}

#[test]
fn unit_vector_norms() {
    let cfg = SeqConfig::default();
    for m in 1..=20u64 {
        let a = sequence(&format!("em(m={m})")).unwrap();
        let p = PreparedSeq::new(&a, &cfg).unwrap();
        let Series::Exact(h) = p.l1_norm_mod().unwrap() else { panic!() };
        // Σ_{n<m} 1/(n+1) + Σ_{n≥m} 1/(n(n+1)) = H_m - 1 + 1/m
        let want = harmonic(m) - Rational::one() + Rational::recip_int(m);
        assert_eq!(h, want, "m = {m}");
    }
}

#[test]
fn harmonic_bounds_to_a_million() {
    let mut worst = f64::INFINITY;
    for n in [2u64, 10, 1000, 123_457, 1_000_000] {
        let r = gamma_residual(n);
        let lo = 1.0 / (2.0 * (n as f64 + 1.0));
        let hi = 1.0 / (2.0 * n as f64);
        assert!(lo < r && r < hi, "n = {n}: {r}");
        worst = worst.min((r - lo).min(hi - r));
    }
    assert!(worst > 0.0);
}

#[test]
fn powcut_ratio_increases_with_n() {
    let mut last = 0.0;
    for n in [1_000u64, 10_000, 100_000] {
        let r = hardy_ratio(&sequence(&format!("powcut(alpha=0.5,N={n})")).unwrap(), 2.0, n).unwrap();
        assert!(r.ratio > last && r.ratio < r.bound);
        last = r.ratio;
    }
}

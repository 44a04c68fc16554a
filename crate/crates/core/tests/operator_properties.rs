use approx::assert_relative_eq;
use mpwright::gamma::gamma_ratio;
use mpwright::operator::*;
use mpwright::params::OperatorParams;
use mpwright::power_series::GenPowerSeries;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn series_strategy(stride: f64, offset: f64) -> impl Strategy<Value = GenPowerSeries> {
    prop::collection::vec((-2.0..2.0_f64, -2.0..2.0_f64), 1..20).prop_map(move |v| {
        GenPowerSeries::new(stride, offset, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pipeline_is_linear(
        s1 in series_strategy(0.7, 0.0),
        s2 in series_strategy(0.7, 0.0),
        a in -2.0..2.0_f64,
        b in -2.0..2.0_f64,
    ) {
        let p = OperatorParams::new(vec![0.5, 0.3, 0.7], vec![0.4, 1.1]).unwrap();
        let combo = s1.scale(c(a)).add(&s2.scale(c(b))).unwrap();
        let lhs = apply_pipeline(&p, &combo).unwrap();
        let rhs = apply_pipeline(&p, &s1).unwrap().scale(c(a))
            .add(&apply_pipeline(&p, &s2).unwrap().scale(c(b))).unwrap();
        let diff = lhs.add(&rhs.scale(c(-1.0))).unwrap();
        let scale = rhs.coeffs().iter().map(|z| z.norm()).fold(1.0, f64::max);
        for z in diff.coeffs() {
            prop_assert!(z.norm() <= 1e-13 * scale);
        }
    }

    #[test]
    fn unit_order_is_classical_derivative(p in 0.0..5.0_f64) {
        let (m, e) = caputo_term(p, 1.0).unwrap();
        let is_const = p.abs() < 1e-12;
        prop_assert_eq!(m, if is_const { 0.0 } else { p });
        prop_assert_eq!(e, p - 1.0);
    }

    #[test]
    fn rl_semigroup(p in -0.9..3.0_f64, a in 0.05..1.5_f64, b in 0.05..1.5_f64) {
        let s = GenPowerSeries::monomial(c(1.0), p).unwrap();
        let two = rl_integral_series(&rl_integral_series(&s, a).unwrap(), b).unwrap();
        let one = rl_integral_series(&s, a + b).unwrap();
        prop_assert!((two.offset() - one.offset()).abs() <= 1e-14);
        let (x, y) = (two.coeffs()[0].re, one.coeffs()[0].re);
        prop_assert!(((x - y) / y).abs() <= 1e-12);
    }

    #[test]
    fn caputo_inverts_rl_on_monomials(p in 0.1..3.0_f64, g in 0.1..0.95_f64) {
        let s = GenPowerSeries::monomial(c(1.0), p).unwrap();
        let back = caputo_series(&rl_integral_series(&s, g).unwrap(), g).unwrap();
        prop_assert!((back.offset() - p).abs() <= 1e-14);
        prop_assert!((back.coeffs()[0].re - 1.0).abs() <= 1e-13);
    }
}

#[test]
fn half_order_shifts_exponents() {
    // exponents 0.5k + 1 with coefficients 1
    let s = GenPowerSeries::new(0.5, 1.0, vec![c(1.0); 8]).unwrap();
    let d = caputo_series(&s, 0.5).unwrap();
    assert_eq!(d.offset(), 0.5);
    assert_eq!(d.first(), 0);
    for (k, p, z) in d.terms() {
        let k = k as f64;
        assert_eq!(p, 0.5 * k + 0.5);
        let want = gamma_ratio(0.5 * k + 2.0, 0.5 * k + 1.5).unwrap().value();
        assert_relative_eq!(z.re, want, max_relative = 1e-15);
    }
    let short = GenPowerSeries::new(0.5, 1.0, vec![c(1.0); 3]).unwrap();
    let ds = caputo_series(&short, 0.5).unwrap();
    for x in [0.5, 1.0, 1.7] {
        let f = |t: f64| (0..3).map(|k| t.powf(0.5 * k as f64 + 1.0)).sum::<f64>();
        let q = caputo_quadrature(f, 0.5, x, 4096).unwrap();
        let v = ds.evaluate(x).re;
        assert!(((q - v) / v).abs() < 1e-3, "x = {x}: {q} vs {v}");
    }
}

#[test]
fn matching_series_is_fixed_point_for_half_orders() {
    let p = OperatorParams::new(vec![0.5, 0.5], vec![0.5]).unwrap();
    let s = mpw_power_series(&p, c(1.0), 40).unwrap();
    let out = apply_pipeline(&p, &s).unwrap();
    assert_eq!(out.first(), 1);
    let out = out.rebased();
    assert!(out.offset().abs() < 1e-15);
    for (a, b) in out.coeffs().iter().zip(s.coeffs()) {
        assert!((a - b).norm() <= 1e-10 * b.norm());
    }
}

#[test]
fn zero_series_stays_zero() {
    let p = OperatorParams::new(vec![0.3, 0.9, 0.6], vec![0.2, 1.4]).unwrap();
    let z = GenPowerSeries::new(0.6, 0.0, vec![c(0.0); 5]).unwrap();
    assert!(apply_pipeline(&p, &z).unwrap().is_zero());
    let empty = GenPowerSeries::new(0.6, 0.0, vec![]).unwrap();
    assert!(apply_pipeline(&p, &empty).unwrap().is_zero());
}

#[test]
fn stage_serialization() {
    let p = OperatorParams::new(vec![0.5, 1.0], vec![0.25]).unwrap();
    let text = serde_json::to_string(&Pipeline::hyper_bessel(&p)).unwrap();
    assert_eq!(
        text,
        r#"{"stages":[{"stage":"caputo-derivative","order":0.5},{"stage":"power-multiply","order":0.25},{"stage":"caputo-derivative","order":1.0}]}"#
    );
}

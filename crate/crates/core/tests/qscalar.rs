use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qdirac::qscalar::{
    limit_q_to_1, qbinomial, qint, qint_f64, LaurentPoly, QExact, QMode, QValue,
};

fn exact(v: QValue) -> QExact {
    v.as_exact().unwrap().clone()
}

#[test]
fn qint_matches_closed_form_at_sample_points() {
    for q0 in [0.5f64, 1.1, 2.0] {
        for n in -20i64..=20 {
            let got = qint(n, QMode::Numeric(q0)).unwrap().eval(q0).unwrap();
            let want = (q0.powi(n as i32) - q0.powi(-n as i32)) / (q0 - 1.0 / q0);
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "n={n} q={q0}");
            let ex = exact(qint(n, QMode::Exact).unwrap()).eval_q(q0);
            assert!((ex - want).abs() <= 1e-12 * want.abs().max(1.0), "exact n={n} q={q0}");
        }
    }
}

#[test]
fn qint_is_odd() {
    for n in 0..=20 {
        assert_eq!(
            exact(qint(-n, QMode::Exact).unwrap()),
            -exact(qint(n, QMode::Exact).unwrap())
        );
    }
}

#[test]
fn qint_times_q_minus_qinv() {
    for n in -6i64..=6 {
        let lhs = exact(qint(n, QMode::Exact).unwrap()) * (QExact::t_pow(2) - QExact::t_pow(-2));
        assert_eq!(lhs, QExact::t_pow(2 * n) - QExact::t_pow(-2 * n));
    }
}

fn binomial(m: i64, n: i64) -> BigInt {
    (0..n).fold(BigInt::from(1), |acc, i| acc * (m - i) / (i + 1))
}

#[test]
fn qbinomial_symmetry_and_classical_limit() {
    for d in 1..=2u32 {
        for m in 0..=8 {
            for n in 0..=m {
                let a = qbinomial(m, n, d, QMode::Exact).unwrap();
                assert_eq!(a, qbinomial(m, m - n, d, QMode::Exact).unwrap());
                if d == 1 {
                    assert_eq!(
                        limit_q_to_1(&a).unwrap(),
                        BigRational::from_integer(binomial(m, n))
                    );
                }
            }
        }
    }
}

#[test]
fn qbinomial_three_choose_one_by_polynomial_division() {
    // (q^3 - q^-3)/(q - q^-1) computed with an independent long division
    let num = LaurentPoly::from_terms(&[(6, 1), (-6, -1)]);
    let den = LaurentPoly::from_terms(&[(2, 1), (-2, -1)]);
    let (quo, rem) = num.div_rem_poly(&den);
    assert!(rem.is_zero());
    assert_eq!(qbinomial(3, 1, 1, QMode::Exact).unwrap(), QValue::Exact(QExact::from_poly(quo)));
}

#[test]
fn qbinomial_numeric_agrees_with_exact() {
    for m in 0..=8 {
        for n in 0..=m {
            let ex = exact(qbinomial(m, n, 2, QMode::Exact).unwrap()).eval_q(1.3);
            let nu = qbinomial(m, n, 2, QMode::Numeric(1.3)).unwrap().eval(1.3).unwrap();
            assert!((ex - nu).abs() <= 1e-12 * ex.abs());
        }
    }
}

#[test]
fn numeric_qint_is_stable_near_one() {
    let q = 1.0 + 1e-9;
    assert!((qint_f64(7, q) - 7.0).abs() < 1e-6);
}

fn arb_exact() -> impl Strategy<Value = QExact> {
    // small Laurent polynomials times optional radicals sqrt([2]), sqrt([3])
    let poly = prop::collection::vec((-3i64..=3, -4i64..=4), 1..4)
        .prop_map(|terms| QExact::from_poly(LaurentPoly::from_terms(&terms)));
    (poly.clone(), poly, 0u8..3).prop_map(|(a, b, r)| match r {
        0 => a,
        1 => a + b * QExact::sqrt_qint(2),
        _ => a + b * QExact::sqrt_qint(3),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exact_values_form_a_field(x in arb_exact(), y in arb_exact(), z in arb_exact()) {
        prop_assert_eq!((&x * &y) * z.clone(), x.clone() * (&y * &z));
        prop_assert_eq!(&x * &(y.clone() + z.clone()), &x * &y + &x * &z);
        prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            let inv = x.inv().unwrap();
            prop_assert!((&x * &inv).is_one());
        }
        let q0 = 1.37;
        let lhs = (&x * &y).eval_q(q0);
        let rhs = x.eval_q(q0) * y.eval_q(q0);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }
}

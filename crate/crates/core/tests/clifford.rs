use proptest::prelude::*;
use qdirac::braiding::{braiding_op, spectral_split};
use qdirac::clifford::{
    build_clifford, spin_representation, verify_algebra_isomorphism, CliffordAlgebra,
    CliffordElement, CliffordRelation, SpinRepresentation, Strategy as Reduction,
};
use qdirac::invariant::invariant_form;
use qdirac::linalg::Mat;
use qdirac::qscalar::{Exact, Numeric, QExact, QField};
use qdirac::repr::{build_irrep, Gen};
use qdirac::{QError, Spin};
use std::sync::OnceLock;

fn algebra<F: QField>(field: &F) -> CliffordAlgebra<F> {
    let v = build_irrep(Spin::ONE, field);
    let form = invariant_form(&v).unwrap();
    let split = spectral_split(&braiding_op(Spin::ONE, Spin::ONE, field)).unwrap();
    build_clifford(&v, &form, &split).unwrap()
}

fn exact_algebra() -> &'static CliffordAlgebra<Exact> {
    static ALG: OnceLock<CliffordAlgebra<Exact>> = OnceLock::new();
    ALG.get_or_init(|| algebra(&Exact))
}

fn q(e: i64) -> QExact {
    QExact::t_pow(2 * e)
}

// generator indices: 0 = ψ_1, 1 = ψ_0, 2 = ψ_-1
fn rel(terms: &[(usize, usize, QExact)], constant: QExact) -> CliffordRelation<QExact> {
    let mut quadratic = vec![QExact::zero(); 9];
    for (i, j, c) in terms {
        quadratic[i * 3 + j] = c.clone();
    }
    CliffordRelation { quadratic, constant }
}

/// The displayed relation list, with `b = -1`.
fn golden_relations() -> Vec<CliffordRelation<QExact>> {
    let one = QExact::one;
    let zero = QExact::zero;
    vec![
        rel(&[(0, 0, one())], zero()),
        rel(&[(2, 2, one())], zero()),
        rel(&[(0, 1, q(-1)), (1, 0, q(1))], zero()),
        rel(&[(0, 2, q(-2)), (1, 1, QExact::qint(2)), (2, 0, q(2))], zero()),
        rel(&[(1, 2, one()), (2, 1, q(2))], zero()),
        rel(&[(0, 2, one()), (2, 0, one())], -one()),
    ]
}

fn golden_spin() -> Vec<Mat<QExact>> {
    let z = QExact::zero;
    let inv_root2 = QExact::sqrt_qint(2).inv().unwrap();
    vec![
        Mat::from_rows(vec![vec![z(), QExact::t_pow(1)], vec![z(), z()]]),
        Mat::from_rows(vec![
            vec![-(q(-1) * inv_root2.clone()), z()],
            vec![z(), q(1) * inv_root2],
        ]),
        Mat::from_rows(vec![vec![z(), z()], vec![-QExact::t_pow(-1), z()]]),
    ]
}

fn row(r: &CliffordRelation<QExact>) -> Vec<QExact> {
    let mut v = r.quadratic.clone();
    v.push(r.constant.clone());
    v
}

#[test]
fn relations_span_the_displayed_list() {
    let c = exact_algebra();
    let computed: Vec<Vec<QExact>> = c.relations().iter().map(row).collect();
    let golden: Vec<Vec<QExact>> = golden_relations().iter().map(row).collect();
    let rank = |rows: Vec<Vec<QExact>>| Mat::from_rows(rows).rank(0.0);
    assert_eq!(rank(computed.clone()), 6);
    assert_eq!(rank(golden.clone()), 6);
    assert_eq!(rank([computed, golden].concat()), 6);
}

#[test]
fn displayed_relations_match_one_for_one() {
    let c = exact_algebra();
    let shown = c.display_relations();
    assert_eq!(shown.len(), 6);
    for g in golden_relations() {
        let hit = shown.iter().any(|s| {
            let k = (0..9).find(|&i| !g.quadratic[i].is_zero()).unwrap();
            let Some(inv) = s.quadratic[k].inv() else { return false };
            let ratio = g.quadratic[k].clone() * inv;
            if g.constant.is_zero() {
                s.scale(&ratio) == g
            } else {
                // the constant pins the scale: coefficient-exact
                *s == g
            }
        });
        assert!(hit, "{}", c.relation_text(&g));
    }
}

#[test]
fn relation_text_is_canonical() {
    let c = exact_algebra();
    let text: Vec<String> = c.display_relations().iter().map(|r| c.relation_text(r)).collect();
    assert_eq!(
        text,
        vec![
            "ψ_1 ψ_1 = 0",
            "q^-1*ψ_1 ψ_0 + q*ψ_0 ψ_1 = 0",
            "q^-2*ψ_1 ψ_-1 + (q+q^-1)*ψ_0 ψ_0 + q^2*ψ_-1 ψ_1 = 0",
            "ψ_1 ψ_-1 + ψ_-1 ψ_1 = -1",
            "q^-1*ψ_0 ψ_-1 + q*ψ_-1 ψ_0 = 0",
            "ψ_-1 ψ_-1 = 0",
        ]
    );
}

#[test]
fn normal_basis_is_the_decreasing_square_free_words() {
    let c = exact_algebra();
    assert_eq!(c.dim(), 8);
    for w in c.normal_basis() {
        assert!(w.windows(2).all(|p| p[0] < p[1]), "{w:?}");
    }
    assert_eq!(c.leading_pairs(), vec![(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]);
}

#[test]
fn normal_form_examples() {
    let c = exact_algebra();
    assert!(c.normal_form(&CliffordElement::word(vec![0, 0])).is_zero());
    assert_eq!(c.normal_form(&CliffordElement::one()), CliffordElement::one());
    // ψ_1 ψ_-1 ψ_1 = ψ_1 (b - ψ_1 ψ_-1) = b ψ_1
    assert_eq!(
        c.normal_form(&CliffordElement::word(vec![0, 2, 0])),
        CliffordElement::term(vec![0], -QExact::one())
    );
    // ψ_0 ψ_1 = -q^-2 ψ_1 ψ_0
    assert_eq!(
        c.normal_form(&CliffordElement::word(vec![1, 0])),
        CliffordElement::term(vec![0, 1], -q(-2))
    );
}

#[test]
fn every_relation_normalises_to_zero() {
    let c = exact_algebra();
    for r in c.relations().iter().chain(&golden_relations()) {
        assert!(c.normal_form(&r.element(3)).is_zero(), "{}", c.relation_text(r));
    }
}

#[test]
fn ideal_is_covariant() {
    assert!(exact_algebra().ideal_covariance().unwrap().holds);
    let c = algebra(&Numeric::new(0.7).unwrap());
    assert!(c.ideal_covariance().unwrap().norm < 1e-10);
}

#[test]
fn corrupted_relations_are_rejected() {
    let c = exact_algebra();
    let mut rels = c.relations().to_vec();
    let k = rels.iter().position(|r| !r.quadratic[1].is_zero()).unwrap();
    rels[k].quadratic[1] = rels[k].quadratic[1].clone() * QExact::from_i64(2);
    let err = CliffordAlgebra::from_relations(c.module().clone(), c.form().clone(), rels).unwrap_err();
    assert!(matches!(err, QError::NotConfluent(_) | QError::Invalid(_)), "{err}");
}

fn spin() -> &'static SpinRepresentation<Exact> {
    static S: OnceLock<SpinRepresentation<Exact>> = OnceLock::new();
    S.get_or_init(|| spin_representation(exact_algebra()).unwrap())
}

#[test]
fn spin_representation_matches_the_displayed_matrices() {
    assert_eq!(spin().s, golden_spin());
    assert_eq!(spin().sigma.gen(Gen::K), build_irrep(Spin::HALF, &Exact).gen(Gen::K));
}

#[test]
fn displayed_matrices_satisfy_the_relations() {
    let s = SpinRepresentation {
        sigma: build_irrep(Spin::HALF, &Exact),
        s: golden_spin(),
    };
    for (r, res) in golden_relations().iter().zip(s.relation_residuals(&golden_relations())) {
        assert!(res.holds && res.norm == 0.0, "{}", exact_algebra().relation_text(r));
    }
    let anti = s.s[0].matmul(&s.s[2]) + s.s[2].matmul(&s.s[0]);
    assert_eq!(anti, Mat::identity(2).scale(&-QExact::one()));
}

#[test]
fn equivariance_is_exact() {
    let v = build_irrep(Spin::ONE, &Exact);
    assert!(spin().equivariance(&v).holds);
    let sigma = &spin().sigma;
    for (i, m) in [1i64, 0, -1].into_iter().enumerate() {
        let lhs = sigma.gen(Gen::K).matmul(&spin().s[i]).matmul(sigma.gen(Gen::Kinv));
        assert_eq!(lhs, spin().s[i].scale(&q(m)));
    }
}

#[test]
fn algebra_isomorphism_report() {
    let r = verify_algebra_isomorphism(exact_algebra(), spin()).unwrap();
    assert_eq!(r.algebra_dim, 8);
    assert_eq!(r.image_rank, 4);
    assert_eq!(r.kernel_dim, 4);
    assert!(r.negated_satisfies_relations);
    assert_eq!(r.combined_rank, 8);
    assert_eq!(r.endomorphism_components, vec![Spin::ONE, Spin::ZERO]);
    assert!(r.passed());
}

#[test]
fn numeric_agrees_with_exact() {
    let field = Numeric::new(1.5).unwrap();
    let s = spin_representation(&algebra(&field)).unwrap();
    for (a, b) in s.s.iter().zip(golden_spin()) {
        let diff = a.clone() - b.map(|x| Exact.to_f64(x));
        assert!(diff.entries().iter().all(|x| x.abs() < 1e-12));
    }
}

#[test]
fn classical_limit() {
    let near = spin_representation(&algebra(&Numeric::new(1.0 + 1e-4).unwrap())).unwrap();
    let classical = spin_representation(&algebra(&Numeric::classical())).unwrap();
    for (a, b) in near.s.iter().zip(&classical.s) {
        assert!((a.clone() - b.clone()).entries().iter().all(|x| x.abs() < 1e-3));
    }
    // q = 1: ψ_i ψ_j + ψ_j ψ_i = B(i, j) + B(j, i), an ordinary Clifford algebra
    let form = invariant_form(&build_irrep(Spin::ONE, &Numeric::classical())).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (&classical.s[i], &classical.s[j]);
            let anti = a.matmul(b) + b.matmul(a);
            let want = Mat::identity(2).scale(&(form.matrix[(i, j)] + form.matrix[(j, i)]));
            assert!((anti - want).entries().iter().all(|x| x.abs() < 1e-12), "({i},{j})");
        }
    }
}

fn arb_word() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 0..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn reduction_order_does_not_matter(w in arb_word()) {
        let c = exact_algebra();
        let x = CliffordElement::word(w);
        let left = c.normal_form_with(&x, Reduction::Leftmost);
        let right = c.normal_form_with(&x, Reduction::Rightmost);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(c.normal_form(&left), left);
    }

    #[test]
    fn normal_form_is_linear_and_respects_products(a in arb_word(), b in arb_word(), k in -3i64..=3) {
        let c = exact_algebra();
        let (x, y) = (CliffordElement::word(a), CliffordElement::word(b));
        let kk = QExact::from_i64(k) * q(1);
        let lhs = c.normal_form(&x.scale(&kk).add(&y));
        let rhs = c.normal_form(&x).scale(&kk).add(&c.normal_form(&y));
        prop_assert_eq!(lhs, rhs);
        let prod = c.normal_form(&x.mul(&y));
        prop_assert_eq!(prod.clone(), c.multiply(&c.normal_form(&x), &c.normal_form(&y)));
        // the spin representation factors through the quotient
        prop_assert_eq!(spin().realize(&x.mul(&y)), spin().realize(&prod));
    }
}

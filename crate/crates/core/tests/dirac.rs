use qdirac::dirac::{
    build_dirac, build_naive, closed_form_spectrum, covariance_failures, numeric_spectrum, opposite_candidate,
    quantum_lie_basis, symbolic_invariance_failures, DiracOperator, GroupLike, KOSTANT_N,
};
use qdirac::linalg::Mat;
use qdirac::qscalar::{qint_f64, Exact, Numeric, QExact};
use qdirac::repr::{build_irrep, AlgebraElement, Gen, HopfStructure};
use qdirac::Spin;
use std::sync::OnceLock;

fn exact() -> &'static DiracOperator<Exact> {
    static D: OnceLock<DiracOperator<Exact>> = OnceLock::new();
    D.get_or_init(|| build_dirac(&Exact).unwrap())
}

fn q(e: i64) -> QExact {
    QExact::t_pow(2 * e)
}

fn spins() -> [Spin; 6] {
    [1, 2, 3, 4, 6, 8].map(Spin::from_twice)
}

fn max_diff(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    (a.clone() - b.clone()).entries().iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn alpha_table() {
    let a = &exact().alpha;
    let two = QExact::qint(2);
    for i in 0..3 {
        for j in 0..3 {
            let want = match (i, j) {
                (0, 2) => -(q(1) * two.clone()),
                (1, 1) => two.clone(),
                (2, 0) => -(q(-1) * two.clone()),
                _ => QExact::zero(),
            };
            assert_eq!(a[(i, j)], want, "({i},{j})");
        }
    }
}

#[test]
fn only_t_equal_k_gives_a_covariant_basis() {
    for t in GroupLike::ALL {
        let ok = covariance_failures(&opposite_candidate(t)).is_empty();
        assert_eq!(ok, t == GroupLike::K, "{t:?}");
    }
}

#[test]
fn covariance_holds_in_representations() {
    let basis = quantum_lie_basis().unwrap();
    let rho = build_irrep(Spin::ONE, &Exact);
    for twice in 0..=4 {
        let rep = build_irrep(Spin::from_twice(twice), &Exact);
        let z: Vec<Mat<QExact>> = basis.elements.iter().map(|e| rep.eval(e)).collect();
        for x in Gen::ALL {
            for i in 0..3 {
                let lhs = rep.eval(&AlgebraElement::adjoint(HopfStructure::Opposite, &AlgebraElement::gen(x), &basis.elements[i]));
                let rhs = (0..3).fold(Mat::zeros(rep.dim(), rep.dim()), |acc, j| acc + z[j].scale(&rho.gen(x)[(j, i)]));
                assert_eq!(lhs, rhs, "2l = {twice}, {x}, Z_{i}");
            }
        }
    }
}

#[test]
fn k_grades_the_basis_by_weight() {
    let basis = quantum_lie_basis().unwrap();
    let k = AlgebraElement::gen(Gen::K);
    for (z, m) in basis.elements.iter().zip([1, 0, -1]) {
        let moved = AlgebraElement::adjoint(HopfStructure::Opposite, &k, z).normal_form();
        assert_eq!(moved, z.normal_form().scale(&q(m)));
    }
}

#[test]
fn weight_zero_element_is_diagonal() {
    let z0 = build_irrep(Spin::HALF, &Exact).eval(&quantum_lie_basis().unwrap().elements[1]);
    assert!(z0[(0, 1)].is_zero() && z0[(1, 0)].is_zero());
    assert!(!z0[(0, 0)].is_zero());
}

#[test]
fn basis_has_the_classical_limit() {
    let field = Numeric::classical();
    let basis = quantum_lie_basis().unwrap();
    for twice in 1..=3 {
        let rep = build_irrep(Spin::from_twice(twice), &field);
        let (e, f) = (rep.gen(Gen::E).clone(), rep.gen(Gen::F).clone());
        let want = [
            e.clone(),
            (f.matmul(&e) - e.matmul(&f)).scale(&(1.0 / 2f64.sqrt())),
            f.scale(&-1.0),
        ];
        for (z, w) in basis.elements.iter().zip(&want) {
            assert!(max_diff(&rep.eval(z), w) < 1e-12);
        }
    }
}

#[test]
fn symbolic_invariance() {
    assert!(symbolic_invariance_failures(exact()).is_empty());
    assert!(exact().coefficient_invariance().unwrap().holds);
}

#[test]
fn trivial_spin_is_in_the_kernel() {
    let m = exact().realize(Spin::ZERO);
    assert_eq!((m.rows(), m.cols()), (2, 2));
    assert!(m.is_zero());
    assert_eq!(exact().spectrum(Spin::ZERO).unwrap(), vec![(QExact::zero(), 2)]);
}

#[test]
fn exact_spectrum() {
    for l in spins() {
        let spec = exact().spectrum(l).unwrap();
        let n = l.twice() as i64;
        assert_eq!(spec, vec![(-QExact::qint(n + 2), n as usize), (QExact::qint(n), n as usize + 2)]);
    }
    let half = exact().spectrum(Spin::HALF).unwrap();
    assert_eq!(half[0].0, -(q(2) + QExact::one() + q(-2)));
    assert!(half[1].0.is_one());
}

#[test]
fn numeric_spectrum_matches_diagonalisation() {
    for q0 in [0.5, 1.1, 2.0] {
        let field = Numeric::new(q0).unwrap();
        let d = build_dirac(&field).unwrap();
        for l in spins() {
            let got = numeric_spectrum(&field, &d.realize(l)).unwrap();
            let n = l.twice() as i64;
            let want = [(-qint_f64(n + 2, q0), n as usize), (qint_f64(n, q0), n as usize + 2)];
            assert_eq!(got.len(), 2);
            for ((a, ma), (b, mb)) in got.iter().zip(want) {
                assert_eq!(*ma, mb);
                assert!((a - b).abs() < 1e-10 * b.abs().max(1.0), "q = {q0}, l = {l}: {a} vs {b}");
            }
            d.spectrum(l).unwrap();
        }
    }
    let field = Numeric::new(1.2).unwrap();
    let d = build_dirac(&field).unwrap();
    let got = numeric_spectrum(&field, &d.realize(Spin::from_twice(3))).unwrap();
    assert_eq!(got[0].1, 3);
    assert_eq!(got[1].1, 5);
    assert!((got[0].0 + qint_f64(5, 1.2)).abs() < 1e-10);
    assert!((got[1].0 - qint_f64(3, 1.2)).abs() < 1e-10);
}

#[test]
fn realised_operator_commutes_with_the_action() {
    for l in (0..=8).map(Spin::from_twice) {
        assert!(exact().commutator(l).unwrap().holds, "l = {l}");
    }
    for q0 in [0.5, 1.1, 2.0] {
        let d = build_dirac(&Numeric::new(q0).unwrap()).unwrap();
        for l in (0..=8).map(Spin::from_twice) {
            assert!(d.commutator(l).unwrap().norm < 1e-10, "q = {q0}, l = {l}");
        }
    }
}

#[test]
fn naive_operator_is_invariant_but_does_not_commute() {
    let a = build_naive(&Exact).unwrap();
    assert!(symbolic_invariance_failures(&a).is_empty());
    let field = Numeric::new(1.5).unwrap();
    let a = build_naive(&field).unwrap();
    let d = build_dirac(&field).unwrap();
    let l = Spin::HALF;
    let a_e = a.realize(l).commutator(&a.action(l, Gen::E).unwrap());
    let d_e = d.realize(l).commutator(&d.action(l, Gen::E).unwrap());
    assert!(a_e.max_abs(&field) > 0.01);
    assert!(d_e.max_abs(&field) < 1e-10);
    // both coproducts agree at q = 1
    let near = build_naive(&Numeric::new(1.0 + 1e-6).unwrap()).unwrap();
    assert!(near.commutator(l).unwrap().norm < 1e-4);
}

#[test]
fn classical_limit() {
    let near = build_dirac(&Numeric::new(1.0 + 1e-4).unwrap()).unwrap();
    let classical = build_dirac(&Numeric::classical()).unwrap();
    // the first-order term grows like l (q - 1): absolute agreement up to
    // l = 3/2, relative agreement beyond
    for l in (0..=3).map(Spin::from_twice) {
        assert!(max_diff(&near.realize(l), &classical.realize(l)) < 1e-3, "l = {l}");
    }
    for l in (1..=8).map(Spin::from_twice) {
        let scale = classical.realize(l).entries().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(max_diff(&near.realize(l), &classical.realize(l)) < 1e-3 * scale, "l = {l}");
    }
}

#[test]
fn eigenvalues_grow_exponentially() {
    let q0 = 1.5;
    let field = Numeric::new(q0).unwrap();
    let d = build_dirac(&field).unwrap();
    let ratios: Vec<f64> = (1..=24)
        .map(|twice| {
            let l = Spin::from_twice(twice);
            let top = numeric_spectrum(&field, &d.realize(l)).unwrap().last().unwrap().0;
            top / q0.powi(twice as i32 - 1)
        })
        .collect();
    let limit = 1.0 / (1.0 - q0.powi(-2));
    for w in ratios.windows(2) {
        assert!((w[1] - limit).abs() <= (w[0] - limit).abs() + 1e-12);
    }
    assert!((ratios.last().unwrap() - limit).abs() < 1e-6);
}

#[test]
fn cache_returns_the_same_matrix() {
    let d = build_dirac(&Numeric::new(1.3).unwrap()).unwrap();
    let a = d.realize(Spin::ONE);
    let b = d.realize(Spin::ONE);
    assert!(std::sync::Arc::ptr_eq(&a, &b));
    std::thread::scope(|s| {
        let hs: Vec<_> = (0..4).map(|_| s.spawn(|| d.realize(Spin::from_twice(5)))).collect();
        let ms: Vec<_> = hs.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(ms.windows(2).all(|w| w[0] == w[1]));
    });
}

#[test]
fn cubic_term_is_odd_invariant_and_scalar_on_spinors() {
    let g = exact().cubic_term().unwrap();
    assert_eq!(g.element.degree(), Some(3));
    assert!(g.element.terms().all(|(w, _)| w.len() % 2 == 1));
    assert!(g.invariance_failures(&exact().clifford).is_empty());
    let s = &g.spin_image;
    assert!(s[(0, 1)].is_zero() && s[(1, 0)].is_zero());
    assert_eq!(s[(0, 0)], s[(1, 1)]);
    assert!(!s[(0, 0)].is_zero());
    for l in [Spin::HALF, Spin::ONE] {
        let m = g.realize(l);
        for x in Gen::ALL {
            assert!(m.commutator(&exact().action(l, x).unwrap()).is_zero());
        }
    }
}

#[test]
fn cubic_term_matches_the_classical_kostant_element() {
    // classical oracle: at q = 1 the element is Σ B^{-1} contracted against the
    // antisymmetric part of [ψ_a, ψ_b] ψ_j, which acts on spin 1/2 as 3√2
    let field = Numeric::classical();
    let d = build_dirac(&field).unwrap();
    let g = d.cubic_term().unwrap();
    assert!(g.invariance_failures(&d.clifford).is_empty());
    let gamma0 = g.spin_image[(0, 0)];
    assert!((gamma0 * KOSTANT_N - 1.0).abs() < 1e-12);
    let near = build_dirac(&Numeric::new(1.0 + 1e-4).unwrap()).unwrap();
    assert!(max_diff(&near.cubic_term().unwrap().spin_image, &g.spin_image) < 1e-3);
    for twice in 1..=6 {
        let l = Spin::from_twice(twice);
        let m = d.with_cubic(l, &KOSTANT_N).unwrap();
        let spec = numeric_spectrum(&field, &m).unwrap();
        let n = twice as f64 + 1.0;
        assert_eq!(spec.len(), 2);
        assert!((spec[0].0 + n).abs() < 1e-10 && (spec[1].0 - n).abs() < 1e-10, "{spec:?}");
    }
    // commutes away from q = 1 as well
    let field = Numeric::new(1.7).unwrap();
    let d = build_dirac(&field).unwrap();
    let m = d.with_cubic(Spin::HALF, &0.3).unwrap();
    for x in Gen::ALL {
        assert!(m.commutator(&d.action(Spin::HALF, x).unwrap()).max_abs(&field) < 1e-10);
    }
}

#[test]
fn closed_form_at_zero_spin() {
    assert_eq!(closed_form_spectrum(Spin::ZERO, &Numeric::new(1.5).unwrap()), vec![(0.0, 2)]);
}

#[test]
fn naive_highest_weight_vector_is_k_e() {
    let top = &qdirac::dirac::naive_lie_basis().unwrap().elements[0];
    assert_eq!(top.normal_form(), AlgebraElement::word(vec![Gen::K, Gen::E]).normal_form());
}

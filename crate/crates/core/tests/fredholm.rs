use proptest::prelude::*;
use qdirac::dirac::build_dirac;
use qdirac::fredholm::{build_truncation, commutator_decay, trace_tail, Chirality};
use qdirac::linalg::cluster_values;
use qdirac::qscalar::{qint_f64, Numeric};
use qdirac::{QError, Spin};

#[test]
fn trivial_cutoff_is_the_kernel_block() {
    let h = build_truncation(Spin::ZERO, 1.5).unwrap();
    assert_eq!(h.blocks.len(), 1);
    let b = h.blocks[0];
    assert_eq!((b.chirality, b.module_dim, b.multiplicity, b.eigenvalue), (Chirality::Up, 2, 1, 0.0));
    assert_eq!(h.dim(), 2);
}

#[test]
fn half_cutoff_adds_two_blocks() {
    let h = build_truncation(Spin::HALF, 1.5).unwrap();
    assert_eq!(h.blocks.len(), 3);
    let up = h.blocks[1];
    let down = h.blocks[2];
    assert_eq!((up.module_dim, up.states()), (3, 6));
    assert_eq!((down.module_dim, down.states()), (1, 2));
    assert_eq!(up.eigenvalue, 1.0);
    assert!((down.eigenvalue + qint_f64(3, 1.5)).abs() < 1e-15);
}

#[test]
fn block_count_and_dimension() {
    for twice in 0..=20u32 {
        let h = build_truncation(Spin::from_twice(twice), 1.3).unwrap();
        assert_eq!(h.blocks.len(), 2 * twice as usize + 1);
        // Σ_j (2j+1)·(2j+2 + 2j) = Σ_n (n+1)(2n+2)
        let want: usize = (0..=twice as usize).map(|n| (n + 1) * (2 * n + 2)).sum();
        assert_eq!(h.dim(), want);
    }
}

#[test]
fn rejects_q_one_and_large_cutoffs() {
    assert!(matches!(build_truncation(Spin::ONE, 1.0), Err(QError::InvalidQ(_))));
    assert!(matches!(trace_tail(Spin::ONE, 1.0), Err(QError::InvalidQ(_))));
    assert!(build_truncation(Spin::from_twice(401), 1.5).is_err());
    assert!(build_truncation(Spin::from_twice(400), 1.5).is_ok());
}

#[test]
fn sign_operator_values() {
    let h = build_truncation(Spin::from_twice(40), 1.5).unwrap();
    let f = h.sign_operator();
    assert!(f.norm() < 1.0);
    for (b, v) in &f.values {
        if b.j == Spin::ZERO {
            assert_eq!(*v, 0.0);
            continue;
        }
        match b.chirality {
            Chirality::Up => assert!(*v > 0.0),
            Chirality::Down => assert!(*v < 0.0),
        }
        // F² - 1 = -(1 + D²)^{-1}
        assert!((v * v - 1.0 - b.defect()).abs() < 1e-15);
    }
    assert_eq!(f.value(Spin::ZERO, Chirality::Down), None);
}

#[test]
fn blocks_carry_the_dirac_spectrum() {
    for q0 in [0.6, 1.5] {
        let field = Numeric::new(q0).unwrap();
        let d = build_dirac(&field).unwrap();
        let h = build_truncation(Spin::from_twice(12), q0).unwrap();
        for twice in 0..=12 {
            let j = Spin::from_twice(twice);
            let dm = d.realize(j).to_dmatrix(&field);
            let mut ev: Vec<f64> = dm.symmetric_eigen().eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            let spec = cluster_values(&ev, 1e-8);
            for b in h.blocks.iter().filter(|b| b.j == j) {
                // D on V_j ⊗ Σ splits as V_{j+1/2} ⊕ V_{j-1/2}
                let hit = spec.iter().find(|(v, _)| (v - b.eigenvalue).abs() < 1e-9 * v.abs().max(1.0));
                assert_eq!(hit.map(|h| h.1), Some(b.module_dim), "j = {j}");
                // and F² - 1 is the matching eigenvalue of -(1 + D²)^{-1}
                let lam = hit.unwrap().0;
                assert!((b.defect() + 1.0 / (1.0 + lam * lam)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn trace_tail_stabilises() {
    let t = trace_tail(Spin::from_twice(80), 1.5).unwrap();
    let knee = t.knee(1e-12).unwrap();
    assert!(knee.value() <= 25.0, "{knee}");
    assert!(t.rows.windows(2).all(|w| w[1].2 >= w[0].2));
    assert!(t.fit.is_finite() && t.weighted_fit.is_finite());
    for &(j, inc, _) in &t.rows {
        assert!(inc <= t.fit.bound(j.value()) * (1.0 + 1e-12));
    }
    // the remainder estimate is tiny and the tails decrease
    assert!((t.limit - t.rows.last().unwrap().2).abs() < 1e-12);
    let tails = t.tails();
    assert!(tails.windows(2).all(|w| w[1].1 <= w[0].1));
    // doubling the cutoff does not move the sum
    let long = trace_tail(Spin::from_twice(160), 1.5).unwrap();
    assert!((long.limit - t.limit).abs() < 1e-12);
}

#[test]
fn increment_ratio_drops_below_one() {
    let t = trace_tail(Spin::from_twice(40), 1.5).unwrap();
    let inc: Vec<(f64, f64)> = t.rows.iter().map(|&(j, i, _)| (j.value(), i)).collect();
    for w in inc.windows(2).filter(|w| w[0].0 >= 2.0) {
        assert!(w[1].1 / w[0].1 < 1.0);
    }
    // per unit j the ratio tends to q^-4
    let n = inc.len();
    let ratio = inc[n - 1].1 / inc[n - 3].1;
    assert!((ratio - 1.5f64.powi(-4)).abs() < 0.05, "{ratio}");
}

#[test]
fn q_below_one_mirrors_q_above() {
    let a = trace_tail(Spin::from_twice(30), 1.5).unwrap();
    let b = trace_tail(Spin::from_twice(30), 1.0 / 1.5).unwrap();
    assert!((a.limit - b.limit).abs() < 1e-12);
}

#[test]
fn zero_shift_is_identically_zero() {
    let c = commutator_decay(0.0, Spin::from_twice(40), 1.5).unwrap();
    assert!(c.values.iter().all(|&(_, v)| v == 0.0));
}

#[test]
fn commutator_coefficients_decay_exponentially() {
    for k in [-1.0, -0.5, 0.5, 1.0] {
        let c = commutator_decay(k, Spin::from_twice(400), 1.5).unwrap();
        let fit = c.fit.unwrap();
        assert!(fit.is_finite() && fit.constant > 0.0, "k = {k}");
        assert!(c.values.iter().all(|&(j, _)| j.value() + k >= 0.0));
        let tail: Vec<f64> = c.values.iter().filter(|(j, _)| j.value() >= 2.0).map(|p| p.1.abs()).collect();
        assert!(tail.windows(2).all(|w| w[1] <= w[0]), "k = {k}");
        assert!(tail.last().unwrap() < &1e-60);
        // weighted by multiplicities the series converges
        let weighted: f64 = c.values.iter().map(|&(j, v)| (j.twice() as f64 + 2.0).powi(2) * v.abs()).sum();
        assert!(weighted.is_finite());
    }
}

#[test]
fn coefficients_match_direct_evaluation() {
    let q0 = 1.5;
    let g = |n: i64| {
        let x = qint_f64(n, q0);
        x / (1.0 + x * x).sqrt()
    };
    let c = commutator_decay(1.0, Spin::from_twice(20), q0).unwrap();
    for &(j, v) in &c.values {
        if j.twice() % 2 == 0 {
            let n = j.value() as i64;
            assert!((v - (g(n + 1) - g(n))).abs() < 1e-14, "{j}");
        }
    }
}

#[test]
fn near_classical_matches_the_classical_sequence() {
    let classical = |x: f64| x / (1.0 + x * x).sqrt();
    let c = commutator_decay(0.5, Spin::from_twice(100), 1.0 + 1e-6).unwrap();
    for &(j, v) in &c.values {
        let x = j.value();
        assert!((v - (classical(x + 0.5) - classical(x))).abs() < 1e-4);
    }
    let exact = commutator_decay(0.5, Spin::from_twice(100), 1.0).unwrap();
    assert!(exact.is_classical() && exact.fit.is_none());
    assert!(exact.power_constant.is_finite());
    // only polynomial decay: c_j j^2 stays bounded away from zero
    let last = exact.values.last().unwrap();
    assert!(last.1.abs() * last.0.value().powi(2) > 1e-3);
}

#[test]
fn rejects_bad_shifts() {
    assert!(commutator_decay(0.3, Spin::ONE, 1.5).is_err());
    assert!(commutator_decay(4.5, Spin::ONE, 1.5).is_err());
}

proptest! {
    #[test]
    fn sign_values_are_bounded(twice in 0u32..200, q0 in 1.05f64..3.0) {
        let h = build_truncation(Spin::from_twice(twice), q0).unwrap();
        let f = h.sign_operator();
        prop_assert!(f.norm() < 1.0 || f.norm() == 1.0);
        for (b, v) in f.values {
            prop_assert!(v.abs() <= 1.0);
            prop_assert!(b.defect() <= 0.0 && b.defect() >= -1.0);
        }
    }

    #[test]
    fn decay_is_within_the_fit(k in prop::sample::select(vec![-1.0, -0.5, 0.5, 1.0]), q0 in 1.1f64..2.5) {
        let c = commutator_decay(k, Spin::from_twice(100), q0).unwrap();
        let fit = c.fit.unwrap();
        for &(j, v) in &c.values {
            prop_assert!(v.abs() <= fit.bound(j.value() + f64::min(k, 0.0)) * (1.0 + 1e-12));
        }
    }
}

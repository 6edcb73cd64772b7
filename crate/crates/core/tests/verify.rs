use qdirac::verify::{golden_clifford, missing_relations, reference_relations, run_all, VerifyConfig};
use qdirac::QExact;

#[test]
fn reference_relations_are_all_found_in_themselves() {
    assert!(missing_relations(&reference_relations()).is_empty());
}

#[test]
fn homogeneous_relations_match_up_to_scale_but_the_constant_is_pinned() {
    let two = QExact::from_i64(2);
    let mut scaled = reference_relations();
    for r in scaled.iter_mut().filter(|r| r.constant.is_zero()) {
        *r = r.scale(&two);
    }
    assert!(missing_relations(&scaled).is_empty());
    let mut rels = reference_relations();
    let last = rels.len() - 1;
    rels[last] = rels[last].scale(&two);
    assert_eq!(missing_relations(&rels).len(), 1);
}

#[test]
fn corrupt_hook_fails_only_the_clifford_suite() {
    let cfg = VerifyConfig {
        corrupt: true,
        ..VerifyConfig::default()
    };
    let c = golden_clifford(&cfg);
    assert!(!c.passed);
    assert!(c.detail.contains("q^-1*ψ_1 ψ_0 + q*ψ_0 ψ_1 = 0"), "{}", c.detail);
    assert!(golden_clifford(&VerifyConfig::default()).passed);
}

#[test]
fn every_suite_passes_below_one() {
    let cfg = VerifyConfig {
        points: vec![0.5, 0.8],
        ..VerifyConfig::default()
    };
    for c in run_all(&cfg) {
        assert!(c.passed, "{c}");
    }
}

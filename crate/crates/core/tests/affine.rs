use wbc_core::affine::AffineAlgebra;
use wbc_core::verify::{affine_associativity, affine_relation_check, omega_bar_check, phi_check};

#[test]
fn affine_1_1_relations_on_random_monomials() {
    let alg = AffineAlgebra::new(1, 1).unwrap();
    let rep = affine_relation_check(&alg, 200, 3, 2, 11).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn affine_2_1_relations_on_random_monomials() {
    let alg = AffineAlgebra::new(2, 1).unwrap();
    let rep = affine_relation_check(&alg, 200, 3, 2, 12).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn affine_associativity_on_random_triples() {
    for (r, t) in [(1, 1), (2, 1)] {
        let alg = AffineAlgebra::new(r, t).unwrap();
        let rep = affine_associativity(&alg, 200, 2, 13).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn omega_bar_reductions_agree() {
    let alg = AffineAlgebra::new(1, 1).unwrap();
    let rep = omega_bar_check(&alg, 5).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn phi_maps_relations_to_identities() {
    for k in [1, 2] {
        let rep = phi_check(1, 1, k, 1).unwrap();
        assert!(rep.passed(), "{} / {}", rep.relations, rep.parameters);
    }
}

#[test]
fn affine_1_2_and_2_2_relations_on_random_monomials() {
    for (r, t, samples) in [(1, 2, 200), (2, 2, 60)] {
        let alg = AffineAlgebra::new(r, t).unwrap();
        let rep = affine_relation_check(&alg, samples, 2, 1, 14).unwrap();
        assert!(rep.passed(), "({r},{t}) {rep}");
    }
}

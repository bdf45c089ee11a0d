use wbc_core::bc::{elements as el, BcAlgebra, BcElement, Gen};
use wbc_core::verify;

#[test]
fn bc_2_2_relations_hold_on_every_basis_monomial() {
    let alg = BcAlgebra::new(2, 2).unwrap();
    let report = verify::relation_closure(&alg).unwrap();
    assert!(report.passed(), "{report}");
    assert_eq!(report.checks, 384 * report.relations);
}

#[test]
fn bc_2_2_is_associative_on_seeded_triples() {
    let alg = BcAlgebra::new(2, 2).unwrap();
    let report = verify::associativity(&alg, 300, 7).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn bc_2_2_jucys_murphy_identities() {
    let alg = BcAlgebra::new(2, 2).unwrap();
    let report = verify::jm_suite(&alg).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn bc_2_2_tensor_space_agreement() {
    let alg = BcAlgebra::new(2, 2).unwrap();
    let o = verify::oracle_check(&alg, 4, 100, 3).unwrap();
    assert!(o.passed(), "{} / {}", o.relations, o.products);
    assert_eq!(o.rank, 384);
}

#[test]
fn omega_3_vanishes_for_k_2_and_is_central_for_k_3() {
    let small = BcAlgebra::new(2, 2).unwrap();
    for a in [3, 5, 7] {
        assert!(small.omega(a, 2).unwrap().is_zero());
        assert!(small.omega_bar(a, 2).unwrap().is_zero());
    }
    let alg = BcAlgebra::new(3, 3).unwrap();
    let w = alg.omega(3, 3).unwrap();
    assert_eq!(w.len(), 32);
    for g in Gen::all(2, 2) {
        let h = BcElement::gen(3, 3, g).unwrap();
        assert_eq!(&w * &h, &h * &w, "{g}");
    }
}

#[test]
fn bc_3_3_jucys_murphy_identities() {
    let alg = BcAlgebra::new(3, 3).unwrap();
    let report = verify::jm_suite(&alg).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn literal_clifford_reading_of_the_shifted_commutation_fails() {
    // With the Clifford generator in place of c_i e_i c_i the identity breaks.
    let (r, t) = (2, 2);
    let y = el::y(r, t, 2).unwrap();
    let e = el::e(r, t, 2, 2).unwrap();
    let yb = el::ybar(r, t, 2).unwrap();
    let cb = BcElement::gen(r, t, Gen::Cb(2)).unwrap();
    let z = &(&e + &yb) - &cb;
    assert_ne!(&y * &z, &z * &y);
    let z = &(&e + &yb) - &el::ebar(r, t, 2, 2).unwrap();
    assert_eq!(&y * &z, &z * &y);
}

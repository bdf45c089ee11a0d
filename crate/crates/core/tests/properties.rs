use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wbc_core::affine::{AffElement, AffineAlgebra, RegularMonomial};
use wbc_core::bc::{BcAlgebra, BcElement};
use wbc_core::cyclotomic::{delta_to_omega, omega_to_delta, CycloSpec, Cyclotomic};
use wbc_core::diagram::WalledDiagram;
use wbc_core::scalar::{rat, OmegaMonomial};
use wbc_core::Scalar;

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((prop::collection::vec(1u32..5, 0..3), -4i64..5, 1i64..4), 0..4).prop_map(|terms| {
        let mut s = Scalar::zero();
        for (vars, num, den) in terms {
            let mut m = Scalar::one();
            for v in vars {
                m = &m * &Scalar::omega(v);
            }
            s += m.scale(&BigRational::new(num.into(), den.into()));
        }
        s
    })
}

fn values() -> BTreeMap<u32, BigRational> {
    BTreeMap::from([
        (1, rat(2)),
        (2, rat(-3)),
        (3, BigRational::new(1.into(), 2.into())),
        (4, rat(5)),
    ])
}

fn random_bc(alg: &BcAlgebra, rng: &mut ChaCha8Rng, terms: usize) -> BcElement {
    let mut x = BcElement::zero(alg.r(), alg.t());
    for _ in 0..terms {
        let m = alg.basis()[rng.gen_range(0..alg.basis().len())].clone();
        x.add_term(m, Scalar::from_int(rng.gen_range(-3..4)));
    }
    x
}

fn random_aff(alg: &AffineAlgebra, rng: &mut ChaCha8Rng, terms: usize, max_degree: u32) -> AffElement {
    let mut x = AffElement::zero(alg.r(), alg.t());
    for _ in 0..terms {
        let m: RegularMonomial = alg.random_monomial(rng, max_degree);
        let c = if rng.gen_bool(0.3) {
            Scalar::omega(1)
        } else {
            Scalar::from_int(rng.gen_range(-3..4))
        };
        x.add_term(m, c);
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_axioms(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
    }

    #[test]
    fn scalar_specialization_is_a_ring_map(a in scalar_strategy(), b in scalar_strategy()) {
        let v = values();
        let (sa, sb) = (a.specialize(&v).unwrap(), b.specialize(&v).unwrap());
        prop_assert_eq!((&a * &b).specialize(&v).unwrap(), &sa * &sb);
        prop_assert_eq!((&a + &b).specialize(&v).unwrap(), &sa + &sb);
    }

    #[test]
    fn scalar_print_parse(a in scalar_strategy()) {
        prop_assert_eq!(Scalar::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn diagram_print_parse_and_flip(seed in any::<u64>(), r in 1usize..4, t in 1usize..4) {
        let all = WalledDiagram::enumerate(r, t).unwrap();
        let d = &all[ChaCha8Rng::seed_from_u64(seed).gen_range(0..all.len())];
        prop_assert_eq!(&WalledDiagram::parse_shaped(&d.to_string(), r, t).unwrap(), d);
        prop_assert_eq!(&d.flip().flip(), d);
        let fz = d.factorize();
        prop_assert_eq!(&WalledDiagram::from_factorization(r, t, &fz).unwrap(), d);
    }

    #[test]
    fn bc_products_associate_and_tau_reverses(seed in any::<u64>()) {
        let alg = BcAlgebra::new(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_bc(&alg, &mut rng, 3);
        let b = random_bc(&alg, &mut rng, 3);
        let c = random_bc(&alg, &mut rng, 3);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(alg.tau(&alg.tau(&a).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(alg.tau(&(&a * &b)).unwrap(), &alg.tau(&b).unwrap() * &alg.tau(&a).unwrap());
    }

    #[test]
    fn bc_print_parse(seed in any::<u64>()) {
        let alg = BcAlgebra::new(2, 2).unwrap();
        let a = random_bc(&alg, &mut ChaCha8Rng::seed_from_u64(seed), 4);
        prop_assert_eq!(&BcElement::parse(&a.to_string(), 2, 2).unwrap(), &a);
        prop_assert_eq!(&BcElement::parse(&a.word_display().to_string(), 2, 2).unwrap(), &a);
    }

    #[test]
    fn affine_products_associate_and_specialize(seed in any::<u64>()) {
        let alg = AffineAlgebra::new(1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_aff(&alg, &mut rng, 2, 2);
        let b = random_aff(&alg, &mut rng, 2, 2);
        let c = random_aff(&alg, &mut rng, 2, 2);
        let ab = alg.mul(&a, &b).unwrap();
        prop_assert_eq!(alg.mul(&ab, &c).unwrap(), alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap());
        let v = values();
        let spec = |x: &AffElement| x.specialize(&v).unwrap();
        prop_assert_eq!(spec(&ab), spec(&alg.mul(&spec(&a), &spec(&b)).unwrap()));
    }

    #[test]
    fn affine_sigma_reverses(seed in any::<u64>()) {
        let alg = AffineAlgebra::new(1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_aff(&alg, &mut rng, 2, 2);
        let b = random_aff(&alg, &mut rng, 2, 2);
        prop_assert_eq!(alg.sigma(&alg.sigma(&a).unwrap()).unwrap(), a.clone());
        let ab = alg.mul(&a, &b).unwrap();
        prop_assert_eq!(alg.sigma(&ab).unwrap(), alg.mul(&alg.sigma(&b).unwrap(), &alg.sigma(&a).unwrap()).unwrap());
    }

    #[test]
    fn affine_print_parse(seed in any::<u64>()) {
        let alg = AffineAlgebra::new(2, 1).unwrap();
        let a = random_aff(&alg, &mut ChaCha8Rng::seed_from_u64(seed), 3, 3);
        prop_assert_eq!(&alg.parse(&a.to_string()).unwrap(), &a);
        prop_assert_eq!(&alg.parse(&a.word_display().to_string()).unwrap(), &a);
    }

    #[test]
    fn reduction_is_a_projection_compatible_with_products(seed in any::<u64>()) {
        let cyc = Cyclotomic::new(1, 1, CycloSpec::level_two_default()).unwrap();
        let aff = AffineAlgebra::new(1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_aff(&aff, &mut rng, 2, 3);
        let b = random_aff(&aff, &mut rng, 2, 3);
        let ra = cyc.reduce(&a).unwrap();
        prop_assert!(cyc.is_reduced(&ra));
        prop_assert_eq!(&cyc.reduce(&ra).unwrap(), &ra);
        let rb = cyc.reduce(&b).unwrap();
        prop_assert_eq!(cyc.reduce(&aff.mul(&a, &b).unwrap()).unwrap(), cyc.mul(&ra, &rb).unwrap());
    }

    #[test]
    fn spec_text_round_trip(k in 0u32..3, u in prop::collection::vec(1i64..6, 0..3), w1 in -9i64..10) {
        let mut omegas = BTreeMap::new();
        omegas.insert(1, rat(w1));
        let level = k as usize + 2 * u.len();
        prop_assume!(level > 0);
        let spec = match CycloSpec::new(k, u.iter().map(|&x| rat(x)).collect(), omegas) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        prop_assert_eq!(CycloSpec::parse(&spec.to_text()).unwrap(), spec);
    }

    #[test]
    fn parameter_dictionary_round_trip(w in prop::collection::vec(-6i64..7, 1..10)) {
        let w: Vec<Scalar> = w.iter().enumerate()
            .map(|(i, &x)| if i % 2 == 1 { Scalar::zero() } else { Scalar::from_int(x) })
            .collect();
        let (d, db) = omega_to_delta(&w);
        prop_assert_eq!(delta_to_omega(&d), w.clone());
        prop_assert_eq!(db.len(), w.len());
    }
}

#[test]
fn omega_monomials_order_by_degree_then_low_index() {
    let w1 = OmegaMonomial::var(1);
    let w5 = OmegaMonomial::var(5);
    assert!(w5 < w1);
    assert!(OmegaMonomial::one() < w5);
    assert!(
        w1 < (&Scalar::omega(3) * &Scalar::omega(3))
            .terms()
            .next()
            .unwrap()
            .0
            .clone()
    );
}

use num_bigint::BigInt;
use proptest::prelude::*;

use innerrate_core::exactalg::Rat;
use innerrate_core::oracle::{generic_member, jacobian, verify_ideal, Poly2};
use innerrate_core::toric::{invariants_at_ray, minimal_resolution_chain, random_corpus, Ray};
use innerrate_core::MonomialIdeal;

fn poly_strategy() -> impl Strategy<Value = Poly2> {
    prop::collection::vec(((0u32..4, 0u32..4), -9i64..10), 0..6).prop_map(|terms| {
        Poly2::from_terms(
            terms
                .into_iter()
                .map(|(e, c)| (e, Rat::from_integer(BigInt::from(c)))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobian_is_antisymmetric(f in poly_strategy(), g in poly_strategy()) {
        let fg = jacobian(&f, &g);
        let gf = jacobian(&g, &f);
        prop_assert!(fg.add(&gf).is_zero());
        prop_assert!(jacobian(&f, &f).is_zero());
    }

    #[test]
    fn jacobian_is_bilinear(f in poly_strategy(), g in poly_strategy(), h in poly_strategy(), k in -5i64..6) {
        let k = Rat::from_integer(BigInt::from(k));
        prop_assert_eq!(
            jacobian(&f.add(&g), &h),
            jacobian(&f, &h).add(&jacobian(&g, &h))
        );
        prop_assert_eq!(jacobian(&f.scale(&k), &h), jacobian(&f, &h).scale(&k));
        prop_assert_eq!(
            jacobian(&h, &f.add(&g)),
            jacobian(&h, &f).add(&jacobian(&h, &g))
        );
    }

    #[test]
    fn generic_member_attains_multiplicity(seed in any::<u64>(), idx in 0usize..20) {
        let corpus = random_corpus(20, 6, 99);
        let i = &corpus[idx];
        let f = generic_member(i, seed);
        for r in minimal_resolution_chain(i).interior() {
            prop_assert_eq!(f.weighted_order(r), Some(invariants_at_ray(i, *r).unwrap().m));
        }
        let r = Ray::new(5, 3).unwrap();
        prop_assert_eq!(f.weighted_order(&r), Some(invariants_at_ray(i, r).unwrap().m));
    }
}

#[test]
fn oracle_agrees_with_engine_on_random_corpus() {
    for (k, i) in random_corpus(20, 6, 31).iter().enumerate() {
        let checks = verify_ideal(i, 1000 + k as u64).unwrap();
        for c in &checks {
            assert!(c.passed, "{i}: {} failed: {}", c.name, c.detail);
        }
    }
}

#[test]
fn oracle_agrees_on_named_ideals() {
    let named = [
        "x^2, y^2",
        "x^2, x*y, y^2",
        "x^2, y^2, x*y^2, x^2*y",
        "x^3, x*y, y^2",
        "x^5, x^2*y^2, y^6",
        "x^4, x*y, y^4",
    ];
    for s in named {
        let i = MonomialIdeal::parse(s).unwrap();
        for c in verify_ideal(&i, 7).unwrap() {
            assert!(c.passed, "{s}: {} failed: {}", c.name, c.detail);
        }
    }
    for n in 1..=6 {
        let i = MonomialIdeal::power_of_maximal(n);
        for c in verify_ideal(&i, 7).unwrap() {
            assert!(c.passed, "I_{n}: {} failed: {}", c.name, c.detail);
        }
    }
}

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundary_squares_to_zero(
        g in tiny_group(),
        degree in 0usize..=2,
        modulus in prop::sample::select(vec![1u64, 2, 3, 4, 6, 8, 12]),
        seed in any::<u64>(),
    ) {
        check_coboundary_squared(&g, degree, modulus, seed)?;
    }

    #[test]
    fn generators_have_their_orders(g in tiny_group(), degree in 1usize..=3) {
        check_generator_orders(&g, degree)?;
    }

    #[test]
    fn cavalieri_on_gauge_functors(hom in hom_between_tiny_groups(), dim in 1usize..=2, seed in any::<u64>()) {
        check_cavalieri(&hom, dim, seed)?;
    }

    #[test]
    fn transgression_closed_and_iterates_to_holonomy(g in tiny_group(), degree in 1usize..=3, seed in any::<u64>()) {
        check_transgression(&g, degree, seed)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relative_partition_is_conjugation_invariant((i, phi, k) in pair_and_probe()) {
        check_relative_gauge_invariance(&pair_fixtures()[i], phi, k)?;
    }
}

#[test]
fn pair_fixtures_cover_nontrivial_anomalies() {
    let ps = pair_fixtures();
    assert!(ps.iter().any(|p| !cached_cohomology(p.ext.g(), 3).is_trivial_class(&p.theta).unwrap()));
    for p in ps {
        assert_eq!(
            dwkit::pullback(p.ext.lambda(), &p.theta).unwrap(),
            dwkit::coboundary(&p.omega_prime),
            "{}",
            p.name
        );
    }
}

#[test]
fn state_dimension_is_torus_partition() {
    for (name, theta) in catalog_cases() {
        check_state_dimension(&theta).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn symmetry_action_composes_for_coherent_families() {
    for (name, ext, omega) in coherent_cases() {
        check_symmetry_composition(&ext, &omega).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn dpr_oracle_on_cyclic_groups() {
    for n in 1..=4usize {
        for k in 0..n as i64 {
            let theta = dwkit::catalog_cocycle("omega3", &serde_json::json!({"n": n, "k": k})).unwrap();
            let l = dwkit::transgress_circle(&theta).unwrap();
            for g in 0..n {
                let x0 = l.space().index_of(&[g]).unwrap();
                for x in 0..n {
                    for y in 0..n {
                        assert_eq!(l.value(x0, &[x, y]), dpr_oracle(&theta, g, x, y));
                    }
                }
            }
        }
    }
}

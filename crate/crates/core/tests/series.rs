use pathspace_core::series::{closed_form_nset, connectivity, duality_holds};
use pathspace_core::{Engine, Field, Hypergraph, LaurentPolynomial, ProblemInstance};
use proptest::prelude::*;

mod common;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn duality_identity(p in common::instance(2..=4, 3, 2)) {
        let e = Engine::default();
        let path = e.path_space_series(&p, Field::Rationals).unwrap();
        let dual = e.dual_series(&p, Field::Rationals).unwrap();
        prop_assert!(duality_holds(&path, &dual, p.total_levels()), "{} vs {}", path, dual);
    }

    #[test]
    fn lowest_degree_is_smallest_member_size(p in common::instance(2..=5, 3, 2)) {
        let e = Engine::default();
        let series = e.path_space_series(&p, Field::Rationals).unwrap();
        let s = p.hypergraph().min_member_size() as i64;
        prop_assert_eq!(series.min_exponent(), Some(s - 1));
        prop_assert_eq!(connectivity(p.hypergraph()), s - 2);
        prop_assert!(series.has_nonnegative_coefficients());
        // the support is bounded by the dimension of the path space
        prop_assert!(series.max_exponent().unwrap() <= p.total_levels() as i64);
    }

    #[test]
    fn series_is_field_independent(p in common::instance(2..=4, 3, 2)) {
        let e = Engine::default();
        prop_assert!(e.freeness_certificate(&p).unwrap());
        let q = e.path_space_series(&p, Field::Rationals).unwrap();
        prop_assert_eq!(&q, &e.path_space_series(&p, Field::Prime(2)).unwrap());
        prop_assert_eq!(&q, &e.path_space_series(&p, Field::Prime(3)).unwrap());
    }

    #[test]
    fn relabeling_processes_preserves_series(
        p in common::instance(2..=4, 3, 2),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..p.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let e = Engine::default();
        prop_assert_eq!(
            e.path_space_series(&p, Field::Rationals).unwrap(),
            e.path_space_series(&common::relabel(&p, &perm), Field::Rationals).unwrap()
        );
    }

    #[test]
    fn uniform_families_match_closed_form(
        (n, s) in (2usize..=5).prop_flat_map(|n| (Just(n), 2..=n)),
        k in prop::collection::vec(1u32..=3, 5),
    ) {
        let k = &k[..n];
        let e = Engine::default();
        let p = ProblemInstance::new(Hypergraph::uniform(n, s).unwrap(), k.to_vec()).unwrap();
        prop_assume!(e.enumerate_multiplicities(&p).map(|v| v.len() < 20_000).unwrap_or(false));
        prop_assert_eq!(
            e.closed_form_sequal(n, s, k).unwrap(),
            e.path_space_series(&p, Field::Rationals).unwrap()
        );
    }
}

#[test]
fn single_set_reference_values() {
    let e = Engine::default();
    for (n, k, want) in [
        (3, vec![2, 2, 2], vec![(2, 8), (3, 1)]),
        (4, vec![1, 1, 1, 1], vec![(3, 1)]),
        (3, vec![3, 3, 3], vec![(2, 27), (3, 27), (4, 1)]),
    ] {
        let p = ProblemInstance::new(Hypergraph::uniform(n, n).unwrap(), k.clone()).unwrap();
        let want = LaurentPolynomial::from_i64_terms(&want);
        assert_eq!(e.path_space_series(&p, Field::Rationals).unwrap(), want);
        assert_eq!(closed_form_nset(n, &k).unwrap(), want);
    }
}

#[test]
fn three_choose_two_uniform_dual() {
    let e = Engine::default();
    let p = ProblemInstance::new(Hypergraph::uniform(3, 2).unwrap(), vec![1; 3]).unwrap();
    let path = e.path_space_series(&p, Field::Rationals).unwrap();
    let dual = e.dual_series(&p, Field::Rationals).unwrap();
    assert!(duality_holds(&path, &dual, 3));
}

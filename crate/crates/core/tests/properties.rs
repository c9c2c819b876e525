mod common;

use common::*;
use proptest::prelude::*;
use tmdim::r;

fn gaps_for(d: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((1i64..=9, 1i64..=7), d + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn union_is_subadditive(seed in any::<u64>(), mask in any::<u64>(), d in 1usize..=3) {
        prop_assert_eq!(check_subadditivity(seed, mask, d), Ok(()));
    }

    #[test]
    fn removing_ledges_never_grows_the_space(seed in any::<u64>(), mask in any::<u64>(), d in 1usize..=3) {
        prop_assert_eq!(check_lowbound(seed, mask, d), Ok(()));
    }

    #[test]
    fn order_one_propagation_solves_the_system(
        (d, pivot, gaps) in (1usize..=4).prop_flat_map(|d| (Just(d), 0..d + 2, gaps_for(d))),
        start in -5i64..=5,
        gamma in (1i64..=9, 1i64..=9),
    ) {
        let coords = coords_from_gaps(start, &gaps);
        prop_assert_eq!(check_propagation(&coords, d, pivot, r(gamma.0, gamma.1)), Ok(()));
    }

    #[test]
    fn dimensions_survive_affine_maps(
        seed in any::<u64>(),
        a in (1i64..=9, 1i64..=9),
        b in -9i64..=9,
        c in (1i64..=9, 1i64..=9),
        e in -9i64..=9,
    ) {
        prop_assert_eq!(check_affine_invariance(seed, r(a.0, a.1), r(b, 2), r(c.0, c.1), r(e, 3)), Ok(()));
    }
}

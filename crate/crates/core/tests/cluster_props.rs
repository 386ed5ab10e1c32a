//! Property tests for the prototype update algebra.

use pocs_clustering::{Point, pocs_update_prototype, pocs_weights};
use proptest::prelude::*;

fn members_and_prototype() -> impl Strategy<Value = (Point, Vec<Point>)> {
    (1usize..=4).prop_flat_map(|dim| {
        (
            prop::collection::vec(-5.0f64..5.0, dim).prop_map(|c| Point::new(c).unwrap()),
            prop::collection::vec(
                prop::collection::vec(-5.0f64..5.0, dim).prop_map(|c| Point::new(c).unwrap()),
                1..60,
            ),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn weights_sum_to_one((prototype, members) in members_and_prototype()) {
        let weights = pocs_weights(&prototype, &members).unwrap();
        let total: f64 = weights.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        prop_assert!(weights.iter().all(|w| *w >= 0.0));
    }

    #[test]
    fn update_equals_distance_weighted_mean((prototype, members) in members_and_prototype()) {
        let updated = pocs_update_prototype(&prototype, &members).unwrap();
        let weights = pocs_weights(&prototype, &members).unwrap();
        let mut mean = vec![0.0; prototype.dim()];
        for (m, w) in members.iter().zip(&weights) {
            for (acc, c) in mean.iter_mut().zip(m.coords()) {
                *acc += w * c;
            }
        }
        let mean = Point::new(mean).unwrap();
        prop_assert!(updated.max_norm_distance(&mean) <= 1e-12);
    }

    #[test]
    fn update_is_permutation_invariant(
        (prototype, members) in members_and_prototype(),
        rotate in 0usize..60,
    ) {
        let updated = pocs_update_prototype(&prototype, &members).unwrap();
        let mut shuffled = members.clone();
        shuffled.rotate_left(rotate % members.len().max(1));
        shuffled.reverse();
        let again = pocs_update_prototype(&prototype, &shuffled).unwrap();
        prop_assert!(updated.max_norm_distance(&again) <= 1e-12);
    }

    #[test]
    fn update_is_scale_equivariant(
        (prototype, members) in members_and_prototype(),
        alpha in 0.05f64..20.0,
    ) {
        let updated = pocs_update_prototype(&prototype, &members).unwrap();

        let scale = |p: &Point| {
            Point::new(p.coords().iter().map(|c| alpha * c).collect()).unwrap()
        };
        let scaled_members: Vec<Point> = members.iter().map(&scale).collect();
        let scaled_update =
            pocs_update_prototype(&scale(&prototype), &scaled_members).unwrap();

        prop_assert!(scaled_update.max_norm_distance(&scale(&updated)) <= 1e-9);
    }
}

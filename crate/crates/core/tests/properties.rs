use parabolic_lab_core::geometry::{reflection_map, EllipticCoefficients};
use parabolic_lab_core::holder::parabolic_distance;
use parabolic_lab_core::interval::{interval_evolve, IntervalField};
use proptest::prelude::*;

fn point(n: usize) -> impl Strategy<Value = (Vec<f64>, f64)> {
    (prop::collection::vec(-5.0..5.0f64, n), -5.0..5.0f64)
}

proptest! {
    #[test]
    fn distance_is_symmetric_with_zero_diagonal((x, t) in point(3), (y, s) in point(3)) {
        let d = parabolic_distance((&x, t), (&y, s)).unwrap();
        prop_assert_eq!(d, parabolic_distance((&y, s), (&x, t)).unwrap());
        prop_assert_eq!(parabolic_distance((&x, t), (&x, t)).unwrap(), 0.0);
        if x != y || t != s {
            prop_assert!(d > 0.0);
        }
    }

    #[test]
    fn reflection_is_an_involution(seed in 0u64..1000, x in prop::collection::vec(-3.0..3.0f64, 3)) {
        let a = EllipticCoefficients::random(3, seed);
        let once = reflection_map(&a, &x).unwrap();
        let twice = reflection_map(&a, &once).unwrap();
        for (p, q) in x.iter().zip(&twice) {
            prop_assert!((p - q).abs() < 1e-12 * (1.0 + p.abs()));
        }
    }

    #[test]
    fn interval_evolution_is_a_semigroup(c in prop::collection::vec(-2.0..2.0f64, 6), s in 0.0..0.5f64, t in 0.0..0.5f64) {
        let u0 = IntervalField::new(c).unwrap();
        let grid = |a: f64| if a > 0.0 { vec![0.0, a] } else { vec![0.0] };
        let mid = interval_evolve(&u0, None, &grid(s)).unwrap().last().clone();
        let two = interval_evolve(&mid, None, &grid(t)).unwrap().last().clone();
        let one = interval_evolve(&u0, None, &grid(s + t)).unwrap().last().clone();
        for (p, q) in two.coeffs.iter().zip(&one.coeffs) {
            prop_assert!((p - q).abs() < 1e-12);
        }
    }
}

use cfree::random::{random_fock_expr, rng};
use cfree::{haagerup_operator, transform_from_moments, FockSpace, ModelKind, Poly, Scalar, TransformKind, TwoStateLaw};
use proptest::prelude::*;

fn poly(nonzero_constant: bool) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, 1i64..=3), 1..=4).prop_map(move |c| {
        let mut c: Vec<Scalar> = c.into_iter().map(|(p, q)| Scalar::ratio(p, q)).collect();
        if nonzero_constant && c[0].is_zero() {
            c[0] = Scalar::one();
        }
        Poly::new(c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn demanded_rank_is_enough(seed in any::<u64>(), n in 1usize..=5) {
        let op = random_fock_expr(&mut rng(seed), &[0, 1], 3, 3);
        let rank = op.rank_profile().demand(n);
        prop_assert_eq!(
            FockSpace::new(rank).vacuum_moments(&op, n).unwrap(),
            FockSpace::new(rank + 3).vacuum_moments(&op, n).unwrap()
        );
    }

    #[test]
    fn additive_haagerup_has_r_equal_zf(f in poly(false)) {
        let op = haagerup_operator(ModelKind::Additive, &f, 0).unwrap();
        let m = FockSpace::new(op.rank_profile().demand(6)).vacuum_moments(&op, 6).unwrap();
        let r = transform_from_moments(TransformKind::R, &TwoStateLaw::single_state(m)).unwrap();
        prop_assert_eq!(r, f.shift_up().to_series(6));
    }

    #[test]
    fn multiplicative_haagerup_has_t_equal_f(f in poly(true)) {
        let op = haagerup_operator(ModelKind::Multiplicative, &f, 0).unwrap();
        let m = FockSpace::new(op.rank_profile().demand(7)).vacuum_moments(&op, 7).unwrap();
        let t = transform_from_moments(TransformKind::T, &TwoStateLaw::single_state(m)).unwrap();
        prop_assert_eq!(t, f.to_series(6));
    }
}

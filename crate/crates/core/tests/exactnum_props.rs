use leafatlas::exactnum::{rat, CycNum};
use num_integer::Integer;
use proptest::prelude::*;

const LEVELS: [u32; 8] = [1, 2, 3, 4, 5, 6, 8, 12];

/// `sum c_i zeta_n^i` with small rational coefficients.
fn cyc() -> impl Strategy<Value = CycNum> {
    (prop::sample::select(LEVELS.to_vec()), prop::collection::vec((-4i64..=4, 1i64..=3), 1..5)).prop_map(|(n, cs)| {
        cs.iter().enumerate().fold(CycNum::zero(), |acc, (i, &(p, q))| {
            &acc + &(&CycNum::root_of_unity(n, i as i64) * &CycNum::from_rat(rat(p, q)))
        })
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverses(a in cyc()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn text_round_trip(a in cyc()) {
        let back: CycNum = a.to_string().parse().unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), a.to_string());
    }

    #[test]
    fn promotion_is_transparent(n in prop::sample::select(LEVELS.to_vec()), l in 1u32..4, e in -12i64..12) {
        prop_assert_eq!(CycNum::root_of_unity(n * l, e * l as i64), CycNum::root_of_unity(n, e));
    }

    #[test]
    fn conductor_is_minimal(n in prop::sample::select(LEVELS.to_vec()), e in 0i64..12) {
        let z = CycNum::root_of_unity(n, e);
        let order = n / (n as i64).gcd(&e.rem_euclid(n as i64)).max(1) as u32;
        let expected = if order % 4 == 2 { order / 2 } else { order };
        prop_assert_eq!(z.conductor(), expected.max(1));
        prop_assert_eq!(z.root_order(24), Some(order.max(1)));
    }

    #[test]
    fn galois_is_multiplicative(a in cyc(), b in cyc(), k in prop::sample::select(vec![1i64, -1, 7, 11, 13, 17])) {
        prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
    }
}

#[test]
fn rational_square_roots() {
    assert_eq!(CycNum::from_rat(rat(9, 4)).rational_sqrt(), Some(rat(3, 2)));
    assert_eq!(CycNum::from_int(2).rational_sqrt(), None);
    assert_eq!(CycNum::root_of_unity(3, 1).rational_sqrt(), None);
}

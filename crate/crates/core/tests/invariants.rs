use std::sync::Arc;

use leafatlas::exactnum::CycNum;
use leafatlas::groups;
use leafatlas::linalg::Matrix;
use leafatlas::refgroup::ParameterK;
use leafatlas::tau::{make_full, TauContext};
use leafatlas::verify::{self, CherednikSample};
use proptest::prelude::*;

fn assert_all(checks: &[verify::Check], what: &str) {
    for c in checks {
        assert!(c.pass, "{what}: {} failed {}", c.id, c.detail);
    }
}

#[test]
fn group_invariants() {
    for name in ["cyclic4", "dihedral5", "B3", "D4", "G4", "G(4,2,2)"] {
        let w = groups::by_name(name).unwrap();
        assert_all(&verify::group_checks(&w), name);
    }
}

#[test]
fn tau_and_leaf_invariants() {
    let pairs = [
        ("B2", Matrix::identity(2)),
        ("B3", groups::first_diag(3, &CycNum::from_int(-1))),
        ("D5", groups::first_diag(5, &CycNum::from_int(-1))),
        ("dihedral6", groups::dihedral_reflection(6, 1)),
        ("cyclic4", Matrix::scalar(1, &CycNum::root_of_unity(8, 1))),
    ];
    for (name, tau) in pairs {
        let w = Arc::new(groups::by_name(name).unwrap());
        let tau = make_full(&w, &tau).unwrap();
        let ctx = TauContext::build(w, tau, 100_000).unwrap();
        assert_all(&verify::tau_checks(&ctx).unwrap(), name);
        assert_all(&verify::leaf_checks(&ctx).unwrap(), name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cherednik_identities_for_random_parameters(seed in any::<u64>(), d in 3u32..=4) {
        let w = Arc::new(groups::dihedral(d));
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let k: ParameterK = verify::random_parameter(&w, &mut rng);
        let sample = CherednikSample { triples: 10, seed, ..Default::default() };
        let checks = verify::cherednik_checks(w, &k, &sample).unwrap();
        for c in &checks {
            prop_assert!(c.pass, "{} failed", c.id);
        }
    }

    #[test]
    fn quadric_scales_quadratically(k0 in -3i64..=3, k1 in -3i64..=3) {
        let w = groups::cyclic(2);
        let k = ParameterK::new(&w, vec![vec![CycNum::from_int(k0), CycNum::from_int(k1)]]).unwrap();
        let checks = verify::quadric_checks(&k).unwrap();
        for c in &checks {
            prop_assert!(c.pass, "{} failed", c.id);
        }
    }
}

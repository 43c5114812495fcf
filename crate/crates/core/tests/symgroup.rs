use nalgebra::DMatrix;
use proptest::prelude::*;
use symform::{assignment, rotation2, rotational_automorphisms, CyclicAutomorphism};

#[test]
fn homomorphism_holds_for_every_pair() {
    for n in 3..=12 {
        let tau = assignment(n).unwrap();
        let group = rotational_automorphisms(n).unwrap();
        assert_eq!(group.len(), n);
        for a in &group {
            for b in &group {
                let lhs = tau.tau(&a.compose(b).unwrap()).unwrap();
                let rhs = tau.tau(a).unwrap().matrix() * tau.tau(b).unwrap().matrix();
                assert!((lhs.matrix() - rhs).amax() < 1e-12, "n={n} {a} {b}");
            }
            let inv = tau.tau(&a.inverse()).unwrap();
            assert!((inv.matrix() - tau.tau(a).unwrap().matrix().transpose()).amax() < 1e-12);
        }
        let id = tau.tau(&CyclicAutomorphism::identity(n).unwrap()).unwrap();
        assert_eq!(id.matrix(), &DMatrix::identity(2, 2));
        let gen = tau.tau(&CyclicAutomorphism::generator(n).unwrap()).unwrap();
        assert!((gen.power(n as u32).matrix() - DMatrix::identity(2, 2)).amax() < 1e-12);
    }
}

#[test]
fn group_is_closed_under_composition() {
    for n in 3..=12 {
        let group = rotational_automorphisms(n).unwrap();
        for a in &group {
            for b in &group {
                assert!(group.contains(&a.compose(b).unwrap()));
            }
        }
    }
}

proptest! {
    #[test]
    fn rotations_are_proper(theta in -20.0f64..20.0) {
        let r = rotation2(theta).unwrap();
        let m = r.matrix();
        prop_assert!((m.transpose() * m - DMatrix::identity(2, 2)).amax() < 1e-12);
        prop_assert!((m.determinant() - 1.0).abs() < 1e-12);
        prop_assert!((m[(0, 0)] - theta.cos()).abs() < 1e-15);
        prop_assert!((m[(1, 0)] - theta.sin()).abs() < 1e-15);
    }

    #[test]
    fn automorphism_action_is_a_shift(n in 3usize..30, shift in -100i64..100, i in 1usize..30) {
        prop_assume!(i <= n);
        let g = CyclicAutomorphism::new(n, shift).unwrap();
        let expected = ((i as i64 - 1 + shift).rem_euclid(n as i64) + 1) as usize;
        prop_assert_eq!(g.apply(i).unwrap(), expected);
        prop_assert_eq!(g.inverse().apply(expected).unwrap(), i);
    }

    #[test]
    fn permutation_is_a_bijection(n in 3usize..30, shift in 0i64..30) {
        let mut p = CyclicAutomorphism::new(n, shift).unwrap().permutation();
        p.sort_unstable();
        prop_assert_eq!(p, (1..=n).collect::<Vec<_>>());
    }
}

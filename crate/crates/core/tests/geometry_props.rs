use std::collections::BTreeSet;

use proptest::prelude::*;

use toric_core::catalog;
use toric_core::collections::Collection;
use toric_core::divisor::{is_ample, is_fano, is_nef, wall_relation, CurveDegrees, PicClass};
use toric_core::fan::FanDefect;
use toric_core::frobenius::{frob_antinef, frob_set, frob_summands};
use toric_core::symmetry::{fan_automorphisms, fan_isomorphism, PicAction};
use toric_core::{Error, Fan, PicardLattice, TDivisor, Verifier};

fn smooth_complete_fans() -> Vec<Fan> {
    let mut out = vec![
        catalog::projective_space(1),
        catalog::projective_space(2),
        catalog::projective_space(3),
        catalog::p1xp1(),
        catalog::hirzebruch(1),
        catalog::hirzebruch(3),
        catalog::dp7(),
        catalog::dp6(),
    ];
    for row in [2, 4, 6, 7, 10, 11, 12] {
        out.push(catalog::fano3(row).unwrap().fan);
    }
    out
}

fn fan_and_divisor() -> impl Strategy<Value = (Fan, TDivisor)> {
    proptest::sample::select(smooth_complete_fans()).prop_flat_map(|fan| {
        let m = fan.num_rays();
        (Just(fan), proptest::collection::vec(-4i64..=4, m).prop_map(TDivisor::new))
    })
}

#[test]
fn catalog_fans_are_valid() {
    for fan in smooth_complete_fans() {
        assert!(fan.validate().is_valid(), "{:?}", fan.validate());
        assert!(fan.is_smooth() && fan.is_complete());
        let lat = PicardLattice::new(&fan).unwrap();
        assert_eq!(lat.rank(), fan.num_rays() - fan.rank());
    }
}

#[test]
fn validation_reports_defects() {
    let bad = Fan::new(2, vec![vec![2, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
    assert!(bad.validate().failures.contains(&FanDefect::NonPrimitiveRay(0)));
    let overlap = Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![1, 1]],
        vec![vec![0, 1], vec![1, 2], vec![0, 3]],
    );
    assert!(overlap.validate().failures.iter().any(|d| matches!(d, FanDefect::ImproperIntersection(..))));
    assert!(Fan::checked(2, vec![vec![1, 0], vec![1, 0]], vec![vec![0, 1]]).is_err());
}

#[test]
fn subdivisions_and_products_stay_smooth_complete() {
    for fan in smooth_complete_fans() {
        for cone in fan.all_cones().into_iter().filter(|c| c.len() >= 2) {
            let sub = fan.star_subdivision(&cone).unwrap();
            assert!(sub.validate().is_valid() && sub.is_smooth() && sub.is_complete());
            assert_eq!(sub.num_rays(), fan.num_rays() + 1);
            assert_eq!(sub.num_max_cones(), fan.num_max_cones() + fan.max_cones().iter().filter(|c| cone.iter().all(|r| c.contains(r))).count() * (cone.len() - 1));
        }
        if fan.rank() <= 2 {
            let prod = fan.product(&catalog::projective_space(1));
            assert!(prod.is_smooth() && prod.is_complete());
            assert_eq!(prod.num_max_cones(), 2 * fan.num_max_cones());
        }
    }
}

#[test]
fn wall_relations_are_lattice_relations() {
    for fan in smooth_complete_fans() {
        for wall in fan.walls().unwrap() {
            let b = wall_relation(&fan, &wall).unwrap();
            for k in 0..fan.rank() {
                let s: i64 = b.iter().zip(fan.rays()).map(|(c, v)| c * v[k]).sum();
                assert_eq!(s, 0);
            }
            assert_eq!((b[wall.left_ray], b[wall.right_ray]), (1, 1));
        }
    }
}

#[test]
fn fano_flags() {
    for fan in smooth_complete_fans().into_iter().filter(|f| *f != catalog::hirzebruch(3)) {
        assert!(is_fano(&fan).unwrap(), "{:?}", fan.rays());
    }
    for a in 0..=4 {
        assert_eq!(is_fano(&catalog::hirzebruch(a)).unwrap(), a <= 1);
    }
}

/// Nef classes on `P^n` are exactly `O(k)` with `k ≥ 0`.
#[test]
fn projective_nef_classes() {
    for n in 1..=3 {
        let fan = catalog::projective_space(n);
        for k in -3..=3 {
            let d = TDivisor::prime(n + 1, n).scale(k);
            assert_eq!(is_nef(&fan, &d).unwrap(), k >= 0);
            assert_eq!(is_ample(&fan, &d).unwrap(), k > 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn classes_are_additive((fan, a) in fan_and_divisor(), seed in proptest::collection::vec(-4i64..=4, 8)) {
        let lat = PicardLattice::new(&fan).unwrap();
        let b = TDivisor::new(seed.iter().cycle().take(fan.num_rays()).copied().collect());
        let sum = lat.class_of(&(&a + &b)).unwrap();
        prop_assert_eq!(sum, &lat.class_of(&a).unwrap() + &lat.class_of(&b).unwrap());
        let back = lat.divisor_of(&lat.class_of(&a).unwrap());
        prop_assert_eq!(lat.class_of(&back).unwrap(), lat.class_of(&a).unwrap());
        let m: Vec<i64> = seed[..fan.rank()].to_vec();
        prop_assert!(lat.class_of(&TDivisor::principal(&fan, &m)).unwrap().is_zero());
        // a divisor and the lift of its class differ by a principal divisor
        let diff = &a - &back;
        prop_assert!(lat.class_of(&diff).unwrap().is_zero());
    }

    #[test]
    fn nef_is_preserved_by_automorphisms((fan, d) in fan_and_divisor()) {
        let curves = CurveDegrees::new(&fan).unwrap();
        let nef = curves.is_nef(&d);
        for g in fan_automorphisms(&fan).elements() {
            let moved = d.permuted(&g.ray_perm);
            prop_assert_eq!(curves.is_nef(&moved), nef);
            prop_assert_eq!(curves.is_ample(&moved), curves.is_ample(&d));
        }
    }

    #[test]
    fn pic_action_matches_ray_permutation((fan, d) in fan_and_divisor()) {
        let lat = PicardLattice::new(&fan).unwrap();
        let action = PicAction::new(fan_automorphisms(&fan), &lat).unwrap();
        let c = lat.class_of(&d).unwrap();
        for (k, g) in action.group().elements().iter().enumerate() {
            prop_assert_eq!(action.apply(k, &c), lat.class_of(&d.permuted(&g.ray_perm)).unwrap());
        }
    }
}

#[test]
fn automorphism_groups() {
    let expected = [
        (catalog::projective_space(1), 2),
        (catalog::projective_space(2), 6),
        (catalog::p1xp1(), 8),
        (catalog::hirzebruch(2), 2),
        (catalog::hirzebruch(5), 2),
        (catalog::dp6(), 12),
    ];
    for (fan, order) in expected {
        let group = fan_automorphisms(&fan);
        assert_eq!(group.order(), order, "{:?}", fan.rays());
        assert!(group.is_closed());
        for g in group.elements() {
            assert_eq!(order % g.order(), 0);
        }
    }
    // products of distinct factors multiply
    let p2p1 = catalog::projective_space(2).product(&catalog::projective_space(1));
    assert_eq!(fan_automorphisms(&p2p1).order(), 6 * 2);
    let f2p1 = catalog::hirzebruch(2).product(&catalog::projective_space(1));
    assert_eq!(fan_automorphisms(&f2p1).order(), 2 * 2);
    let p1_cubed = catalog::p1xp1().product(&catalog::projective_space(1));
    assert_eq!(fan_automorphisms(&p1_cubed).order(), 48);
}

#[test]
fn isomorphism_detection() {
    assert!(fan_isomorphism(&catalog::hirzebruch(0), &catalog::p1xp1()).is_some());
    assert!(fan_isomorphism(&catalog::hirzebruch(1), &catalog::dp8()).is_some());
    assert!(fan_isomorphism(&catalog::hirzebruch(1), &catalog::hirzebruch(2)).is_none());
    assert!(fan_isomorphism(&catalog::v_fano(2).unwrap().fan, &catalog::dp6()).is_some());
}

#[test]
fn frobenius_multisets_and_nesting() {
    for fan in [catalog::projective_space(2), catalog::hirzebruch(3), catalog::dp7(), catalog::fano3(11).unwrap().fan] {
        let lat = PicardLattice::new(&fan).unwrap();
        let exact = frob_set(&fan, &lat).unwrap().classes;
        let mut levels: Vec<BTreeSet<PicClass>> = Vec::new();
        for l in 1..=12u32 {
            let s = frob_summands(&fan, &lat, l).unwrap();
            assert_eq!(s.values().sum::<u64>(), u64::from(l).pow(fan.rank() as u32));
            let keys: BTreeSet<PicClass> = s.into_keys().collect();
            assert!(keys.is_subset(&exact));
            for (k, earlier) in levels.iter().enumerate() {
                if (l as usize).is_multiple_of(k + 1) {
                    assert!(earlier.is_subset(&keys), "level {} not inside level {l}", k + 1);
                }
            }
            levels.push(keys);
        }
    }
}

#[test]
fn projective_frobenius_sets() {
    for n in 1..=4 {
        let fan = catalog::projective_space(n);
        let lat = PicardLattice::new(&fan).unwrap();
        let expected: BTreeSet<PicClass> =
            (0..=n as i64).map(|k| lat.class_of(&TDivisor::prime(n + 1, 0).scale(-k)).unwrap()).collect();
        assert_eq!(frob_set(&fan, &lat).unwrap().classes, expected);
        assert_eq!(frob_antinef(&fan, &lat).unwrap(), expected);
    }
}

#[test]
fn exterior_products_of_strong_collections() {
    for (a, b) in [(catalog::beilinson(2), catalog::beilinson(1)), (catalog::beilinson(1), catalog::beilinson(1))] {
        let product = catalog::product_collection(&a, &b);
        let lat = PicardLattice::new(&product.fan).unwrap();
        let coll = product.collection(&lat).unwrap();
        let report = Verifier::new(&product.fan).unwrap().check_strong(&coll).unwrap();
        assert!(report.passed(), "{}: {report:?}", product.name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Twisting every item by a fixed class preserves the verdict, also for random collections.
    #[test]
    fn verdicts_are_twist_invariant(
        which in 0usize..3,
        items in proptest::collection::btree_set(proptest::collection::vec(-2i64..=2, 2), 2..5),
        twist in proptest::collection::vec(-3i64..=3, 2),
    ) {
        let fan = [catalog::p1xp1(), catalog::hirzebruch(2), catalog::dp8()][which].clone();
        let coll = Collection::new(items.into_iter().map(PicClass::new).collect()).unwrap();
        let mut verifier = Verifier::new(&fan).unwrap();
        let before = verifier.check_strong(&coll).unwrap();
        let after = verifier.check_strong(&coll.twisted(&PicClass::new(twist))).unwrap();
        prop_assert_eq!((before.exceptional, before.strong), (after.exceptional, after.strong));
        prop_assert_eq!(before.failures, after.failures);
    }
}

#[test]
fn unstable_collection_is_rejected() {
    let fan = catalog::p1xp1();
    let lat = PicardLattice::new(&fan).unwrap();
    let action = PicAction::new(fan_automorphisms(&fan), &lat).unwrap();
    let a = lat.class_of(&TDivisor::prime(4, fan.ray_index(&[1, 0]).unwrap())).unwrap();
    let coll = Collection::new(vec![PicClass::zero(2), a]).unwrap();
    let report = Verifier::new(&fan).unwrap().check(&coll, Some(&action), true).unwrap();
    assert_eq!(report.stable, Some(false));
    assert!(!report.passed());
    assert_eq!(Verifier::new(&fan).unwrap().decompose_blocks(&action, &coll), Err(Error::NotStable));
}

use proptest::prelude::*;

use toric_core::catalog;
use toric_core::cohomology::{line_bundle_cohomology, CohomologyEngine};
use toric_core::divisor::{anticanonical, is_nef, polytope_points, surface_self_intersection};
use toric_core::symmetry::fan_automorphisms;
use toric_core::{Fan, TDivisor};

fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Bott's formula for `O(k)` on `P^n`.
fn pn_oracle(n: usize, k: i64) -> Vec<u64> {
    let n_i = n as i64;
    let mut h = vec![0; n + 1];
    h[0] = binom(n_i + k, n_i);
    h[n] = binom(-k - 1, n_i);
    h
}

/// Künneth for a product of two factors.
fn kunneth(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn pairing(fan: &Fan, a: &TDivisor, b: &TDivisor) -> i64 {
    let sum = surface_self_intersection(fan, &(a + b)).unwrap();
    (sum - surface_self_intersection(fan, a).unwrap() - surface_self_intersection(fan, b).unwrap()) / 2
}

#[test]
fn projective_spaces_match_bott() {
    for n in 1..=3 {
        let fan = catalog::projective_space(n);
        let mut engine = CohomologyEngine::new(&fan).unwrap();
        for k in -8..=8 {
            let h = engine.line_bundle(&TDivisor::prime(n + 1, 0).scale(k)).unwrap();
            assert_eq!(h.dims(), pn_oracle(n, k).as_slice(), "P^{n}, O({k})");
        }
    }
}

#[test]
fn products_match_kunneth() {
    for (n1, n2) in [(1, 1), (2, 1), (1, 2)] {
        let (fan, left, right) = catalog::projective_space(n1).product_with_embeddings(&catalog::projective_space(n2));
        let mut engine = CohomologyEngine::new(&fan).unwrap();
        let m = fan.num_rays();
        for a in -5..=5 {
            for b in -5..=5 {
                let d = &TDivisor::prime(m, left[0]).scale(a) + &TDivisor::prime(m, right[0]).scale(b);
                let h = engine.line_bundle(&d).unwrap();
                assert_eq!(h.dims(), kunneth(&pn_oracle(n1, a), &pn_oracle(n2, b)).as_slice(), "({a}, {b})");
            }
        }
    }
}

fn surfaces() -> Vec<Fan> {
    vec![
        catalog::projective_space(2),
        catalog::p1xp1(),
        catalog::hirzebruch(2),
        catalog::hirzebruch(3),
        catalog::dp8(),
        catalog::dp7(),
        catalog::dp6(),
    ]
}

fn surface_and_divisor() -> impl Strategy<Value = (Fan, TDivisor)> {
    proptest::sample::select(surfaces()).prop_flat_map(|fan| {
        let m = fan.num_rays();
        (Just(fan), proptest::collection::vec(-5i64..=5, m).prop_map(TDivisor::new))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Riemann–Roch on a surface: `χ(D) = 1 + D·(D − K)/2`.
    #[test]
    fn euler_characteristic_matches_riemann_roch((fan, d) in surface_and_divisor()) {
        let h = line_bundle_cohomology(&fan, &d).unwrap();
        let k = -&anticanonical(&fan);
        let expected = 1 + pairing(&fan, &d, &(&d - &k)) / 2;
        prop_assert_eq!(h.euler_characteristic(), expected);
    }

    /// Global sections are the lattice points of `P_D`; nef divisors have no higher cohomology.
    #[test]
    fn sections_count_polytope_points((fan, d) in surface_and_divisor()) {
        let h = line_bundle_cohomology(&fan, &d).unwrap();
        prop_assert_eq!(h.dims()[0], polytope_points(&fan, &d).unwrap().len() as u64);
        if is_nef(&fan, &d).unwrap() {
            prop_assert!(h.higher_vanish());
        }
    }

    #[test]
    fn serre_duality_on_surfaces((fan, d) in surface_and_divisor()) {
        let h = line_bundle_cohomology(&fan, &d).unwrap();
        let k = -&anticanonical(&fan);
        let dual = line_bundle_cohomology(&fan, &(&k - &d)).unwrap();
        let flipped: Vec<u64> = dual.dims().iter().rev().copied().collect();
        prop_assert_eq!(h.dims(), flipped.as_slice());
    }

    #[test]
    fn depends_only_on_class((fan, d) in surface_and_divisor(), m in proptest::collection::vec(-3i64..=3, 2)) {
        let shifted = &d + &TDivisor::principal(&fan, &m);
        prop_assert_eq!(line_bundle_cohomology(&fan, &d).unwrap(), line_bundle_cohomology(&fan, &shifted).unwrap());
    }

    #[test]
    fn invariant_under_automorphisms((fan, d) in surface_and_divisor()) {
        let h = line_bundle_cohomology(&fan, &d).unwrap();
        for g in fan_automorphisms(&fan).elements() {
            prop_assert_eq!(&h, &line_bundle_cohomology(&fan, &d.permuted(&g.ray_perm)).unwrap());
        }
    }
}

#[test]
fn serre_duality_on_threefolds() {
    let fans = [catalog::fano3(2).unwrap().fan, catalog::fano3(11).unwrap().fan, catalog::fano3(17).unwrap().fan];
    for fan in fans {
        let mut engine = CohomologyEngine::new(&fan).unwrap();
        let k = -&anticanonical(&fan);
        let m = fan.num_rays();
        for seed in 0..40i64 {
            let d = TDivisor::new((0..m as i64).map(|i| ((seed * 7 + i * 13) % 7) - 3).collect());
            let h = engine.line_bundle(&d).unwrap();
            let dual = engine.line_bundle(&(&k - &d)).unwrap();
            let flipped: Vec<u64> = dual.dims().iter().rev().copied().collect();
            assert_eq!(h.dims(), flipped.as_slice(), "{d:?}");
        }
    }
}

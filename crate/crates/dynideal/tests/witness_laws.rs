use std::collections::BTreeSet;

use dynideal::perm::FinitePermutation;
use dynideal::witnesses::{
    a_large, a_large_symmetric, check_sigma, conjugate_factorization, cover_witness, enumerate_group, largeness_conjugation,
    normal_closure, sigma_witness_bounded_below, sigma_witness_wellordered, WitnessError,
};
use dynideal::{Elem, GroupElem, Instance};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn subsets_below(n: usize, k: usize) -> Vec<BTreeSet<usize>> {
    (0u32..1 << n).filter(|m| (m.count_ones() as usize) < k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| (0..=i).map(move |j| {
                let mut q = p.clone();
                q.insert(j, i);
                q
            }))
            .collect();
    }
    out
}

#[test]
fn symmetric_largeness_by_brute_force() {
    for n in 4..=7 {
        let perms = all_perms(n);
        for k in 2..=3 {
            for a in subsets_below(n, k) {
                let Ok((b, _)) = a_large_symmetric(&a, n, k) else {
                    assert!(n < a.len() + 2 * (k - 1));
                    continue;
                };
                let fixing: Vec<&Vec<usize>> = perms.iter().filter(|p| a.iter().all(|&x| p[x] == x)).collect();
                for c in subsets_below(n, k) {
                    let ok = fixing.iter().any(|p| c.iter().all(|x| b.iter().any(|y| p[*y] == *x)));
                    assert!(ok, "n={n} k={k} a={a:?} c={c:?}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cover_witnesses_verify(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for inst in [Instance::BoundedQ, Instance::FiniteSym { n: 10, k: 4 }] {
            let a = inst.sample_ideal_with(&mut rng, 3);
            let c = inst.sample_ideal_with(&mut rng, 3);
            let (b, cert) = a_large(&inst, &a).unwrap();
            let g = cover_witness(&inst, &cert, &c).unwrap();
            prop_assert!(inst.in_pstab(&g, &a).unwrap());
            prop_assert!(inst.is_subset(&c, &inst.act(&g, &b).unwrap()).unwrap());
            let d = inst.sample_group_with(&mut rng, 3);
            let moved = largeness_conjugation(&inst, &cert, &d).unwrap();
            prop_assert!(moved.is_valid());
            prop_assert_eq!(moved.base, inst.act(&d, &a).unwrap());
        }
    }

    #[test]
    fn sigma_witnesses_check(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = Instance::WellOrderedQ;
        let Elem::Blocks(a) = inst.sample_ideal_with(&mut rng, 3) else { unreachable!() };
        let bs: Vec<_> = (0..3).map(|_| match inst.sample_ideal_with(&mut rng, 2) { Elem::Blocks(b) => b, _ => unreachable!() }).collect();
        let w = sigma_witness_wellordered(&a, &bs);
        prop_assume!(!matches!(w, Err(WitnessError::UnboundedGapFamily(_))));
        let w = w.unwrap();
        prop_assert_eq!(check_sigma(&a, &bs, &w), Ok(()));
        prop_assert!(w.union.is_well_ordered());
        prop_assert!(w.maps.iter().all(|m| a.fixed_pointwise_by(m)));

        let inst = Instance::WellOrderedBoundedBelowQ;
        let Elem::Blocks(a) = inst.sample_ideal_with(&mut rng, 3) else { unreachable!() };
        let bs: Vec<_> = (0..3).map(|_| match inst.sample_ideal_with(&mut rng, 2) { Elem::Blocks(b) => b, _ => unreachable!() }).collect();
        let w = sigma_witness_bounded_below(&a, &bs);
        prop_assume!(!matches!(w, Err(WitnessError::UnboundedGapFamily(_))));
        let w = w.unwrap();
        prop_assert_eq!(check_sigma(&a, &bs, &w), Ok(()));
        prop_assert!(w.union.is_well_ordered() && w.union.is_bounded_below_every());
        prop_assert!(w.maps.iter().all(|m| a.fixed_pointwise_by(m)));
    }

    #[test]
    fn factorizations_recompose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 12;
        let mut pts: Vec<usize> = (0..n).collect();
        pts.shuffle(&mut rng);
        let nb = rng.gen_range(0..=4);
        let na = rng.gen_range(0..=nb);
        let b: BTreeSet<usize> = pts[..nb].iter().copied().collect();
        let a: BTreeSet<usize> = pts[..na].iter().copied().collect();
        let mut img: Vec<usize> = (0..n).filter(|x| !a.contains(x)).collect();
        img.shuffle(&mut rng);
        let mut map: Vec<usize> = (0..n).collect();
        for (x, y) in (0..n).filter(|x| !a.contains(x)).zip(img) {
            map[x] = y;
        }
        let g = FinitePermutation::from_images(map).unwrap();
        let w = conjugate_factorization(&g, &a, &b, n).unwrap();
        prop_assert_eq!(w.factors.len(), 2);
        prop_assert_eq!(w.recompose(), g);
        prop_assert_eq!(w.verify(), Ok(()));
    }
}

#[test]
fn normal_closure_is_idempotent_and_monotone() {
    let n = 5;
    let ambient = vec![FinitePermutation::transposition(n, 0, 1), FinitePermutation::swaps(n, &[(0, 1), (1, 2), (2, 3), (3, 4)])];
    let cores = [
        vec![],
        vec![FinitePermutation::transposition(n, 3, 4)],
        vec![FinitePermutation::swaps(n, &[(0, 1), (2, 3)])],
        vec![FinitePermutation::transposition(n, 3, 4), FinitePermutation::swaps(n, &[(0, 1), (2, 3)])],
    ];
    let closures: Vec<_> = cores.iter().map(|c| normal_closure(c, &ambient, n).unwrap()).collect();
    for (c, m) in cores.iter().zip(&closures) {
        assert_eq!(normal_closure(&m.elements(), &ambient, n).unwrap(), *m);
        let gen = enumerate_group(c, n).unwrap();
        assert!(gen.is_subgroup_of(m));
    }
    for (i, ci) in cores.iter().enumerate() {
        for (j, cj) in cores.iter().enumerate() {
            let gi = enumerate_group(ci, n).unwrap();
            let gj = enumerate_group(cj, n).unwrap();
            if gi.is_subgroup_of(&gj) {
                assert!(closures[i].is_subgroup_of(&closures[j]));
            }
        }
    }
    assert_eq!(closures[1].order(), 120);
    assert_eq!(closures[2].order(), 60);
    let _ = GroupElem::Perm(FinitePermutation::identity(n));
}

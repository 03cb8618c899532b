use std::collections::BTreeSet;

use dynideal::hfa::{
    abelian_refuter, act_hf, check_support, definable_closure, find_support, parity_pairs, sample_hf, selectors,
    support_invariance, HFSet,
};
use dynideal::perm::FinitePermutation;
use dynideal::{Elem, GroupElem, Instance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instances() -> [Instance; 2] {
    [Instance::FiniteSym { n: 6, k: 3 }, Instance::AbelianGrid { m: 3, modulus: 4 }]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_a_membership_automorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for inst in instances() {
            let x = sample_hf(&inst, &mut rng, 3, 3).unwrap();
            let y = sample_hf(&inst, &mut rng, 3, 3).unwrap();
            let g = inst.sample_group_with(&mut rng, 2);
            let h = inst.sample_group_with(&mut rng, 2);
            let gx = act_hf(&inst, &g, &x).unwrap();
            let gy = act_hf(&inst, &g, &y).unwrap();
            prop_assert_eq!(act_hf(&inst, &g, &HFSet::set([x, y])).unwrap(), HFSet::set([gx, gy]));
            let gh = inst.compose(&g, &h).unwrap();
            prop_assert_eq!(act_hf(&inst, &gh, &x).unwrap(), act_hf(&inst, &g, &act_hf(&inst, &h, &x).unwrap()).unwrap());
            let pure = HFSet::set([HFSet::empty(), HFSet::set([HFSet::empty()])]);
            prop_assert_eq!(act_hf(&inst, &g, &pure).unwrap(), pure);
        }
    }

    #[test]
    fn supports_move_with_the_set(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for inst in instances() {
            let x = sample_hf(&inst, &mut rng, 3, 2).unwrap();
            let Some(b) = find_support(&inst, &x, 10_000).unwrap() else { continue };
            prop_assert!(check_support(&inst, &x, &b).unwrap().verified);
            let g = inst.sample_group_with(&mut rng, 2);
            prop_assert!(support_invariance(&inst, &g, &b, &x).unwrap());
        }
    }
}

fn all_subsets(n: usize) -> Vec<BTreeSet<usize>> {
    (0u32..1 << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

#[test]
fn definable_closure_laws() {
    for n in 1..=6 {
        let inst = Instance::FiniteSym { n, k: n + 1 };
        let subsets = all_subsets(n);
        let dcl = |s: &BTreeSet<usize>| match definable_closure(&inst, &Elem::Points(s.clone())).unwrap() {
            Elem::Points(p) => p,
            _ => unreachable!(),
        };
        let closed: Vec<BTreeSet<usize>> = subsets.iter().map(dcl).collect();
        for (s, d) in subsets.iter().zip(&closed) {
            assert!(s.is_subset(d));
            assert_eq!(dcl(d), *d);
            for (t, e) in subsets.iter().zip(&closed) {
                if s.is_subset(t) {
                    assert!(d.is_subset(e));
                }
            }
            let g = FinitePermutation::from_images((0..n).map(|x| (x + 1) % n).collect()).unwrap();
            assert_eq!(dcl(&g.image_set(s)), g.image_set(d));
        }
    }
}

#[test]
fn refuter_handles_every_small_selector() {
    let inst = Instance::AbelianGrid { m: 2, modulus: 2 };
    let all = selectors(2, 2);
    assert_eq!(all.len(), 4);
    for f in all {
        let r = abelian_refuter(&inst, &f, &inst.empty()).unwrap();
        assert_ne!(act_hf(&inst, &r.gamma, &f).unwrap(), f);
        assert!(matches!(r.gamma, GroupElem::Grid(_)));
    }
    let big = Instance::AbelianGrid { m: 3, modulus: 4 };
    assert!(check_support(&big, &parity_pairs(3, 4), &big.empty()).unwrap().verified);
    for col in 0..3 {
        let b = Elem::Cells((0..4).map(|z| (col, z)).collect());
        for f in selectors(3, 4) {
            let r = abelian_refuter(&big, &f, &b).unwrap();
            assert_ne!(act_hf(&big, &r.gamma, &f).unwrap(), f);
            assert!(big.in_pstab(&r.gamma, &b).unwrap());
        }
    }
}

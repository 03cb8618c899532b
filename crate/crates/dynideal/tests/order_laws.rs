use dynideal::ideal::{pl_fixing, sample_closed, sample_pl};
use dynideal::rational::{int, rat};
use dynideal::{match_finite_sets, Elem, Instance, IntervalUnionSet, PLMap};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pl(seed: u64, k: usize) -> PLMap {
    sample_pl(&mut ChaCha8Rng::seed_from_u64(seed), k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pl_group_laws(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (f, g, h) = (pl(s1, 3), pl(s2, 3), pl(s3, 2));
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        prop_assert!(f.compose(&f.inverse()).is_identity());
        prop_assert!(f.inverse().compose(&f).is_identity());
        let back = PLMap::parse(&f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn action_laws(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (f, g) = (pl(s1, 3), pl(s2, 3));
        let inst = Instance::BoundedQ;
        let Elem::Intervals(s) = inst.sample_ideal(s3, 4) else { unreachable!() };
        prop_assert_eq!(s.image(&f.compose(&g)), s.image(&g).image(&f));
        let b = sample_closed(&mut ChaCha8Rng::seed_from_u64(s3), 3, 2);
        prop_assert_eq!(b.image(&f.compose(&g)), b.image(&g).image(&f));
    }

    #[test]
    fn ideal_predicates_are_invariant(s1 in any::<u64>(), s2 in any::<u64>()) {
        let f = pl(s1, 4);
        for inst in [Instance::WellOrderedQ, Instance::WellOrderedBoundedBelowQ] {
            let Elem::Blocks(b) = inst.sample_ideal(s2, 4) else { unreachable!() };
            let fb = b.image(&f);
            prop_assert_eq!(fb.is_well_ordered(), b.is_well_ordered());
            prop_assert_eq!(fb.is_bounded_below_every(), b.is_bounded_below_every());
            prop_assert_eq!(fb.cb_rank(), b.cb_rank());
        }
        let b = sample_closed(&mut ChaCha8Rng::seed_from_u64(s2), 3, 3);
        prop_assert_eq!(b.image(&f).cb_rank(), b.cb_rank());
        let Elem::Intervals(s) = Instance::BoundedQ.sample_ideal(s2, 4) else { unreachable!() };
        prop_assert_eq!(s.image(&f).is_bounded(), s.is_bounded());
    }

    #[test]
    fn rank_is_monotone(s1 in any::<u64>(), s2 in any::<u64>()) {
        let s = sample_closed(&mut ChaCha8Rng::seed_from_u64(s1), 3, 3);
        let t = s.union(&sample_closed(&mut ChaCha8Rng::seed_from_u64(s2), 2, 3));
        prop_assert!(s.is_subset(&t));
        prop_assert!(s.cb_rank() <= t.cb_rank());
    }

    #[test]
    fn matching_fixes_and_hits(s1 in any::<u64>(), s2 in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s1);
        let Elem::Intervals(fix) = Instance::BoundedQ.sample_ideal(s2, 3) else { unreachable!() };
        let mut d0 = Vec::new();
        while d0.len() < 4 {
            let x = rat(rng.gen_range(-400..400), rng.gen_range(1..20));
            if !fix.contains(&x) && !d0.contains(&x) {
                d0.push(x);
            }
        }
        let g = pl_fixing(&mut rng, &fix.closure(), 3);
        let d1: Vec<_> = d0.iter().map(|x| g.apply(x)).collect();
        let pi = match_finite_sets(&d0, &d1, &fix).unwrap();
        prop_assert!(fix.fixed_pointwise_by(&pi));
        let mut got: Vec<_> = d0.iter().map(|x| pi.apply(x)).collect();
        let mut want = d1.clone();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn enumeration_agrees_with_membership(s1 in any::<u64>()) {
        let b = sample_closed(&mut ChaCha8Rng::seed_from_u64(s1), 3, 3);
        for x in b.enumerate(50) {
            prop_assert!(b.contains(&x), "{} not in {}", x, b);
        }
        let Elem::Blocks(w) = Instance::WellOrderedBoundedBelowQ.sample_ideal(s1, 3) else { unreachable!() };
        for x in w.enumerate(50) {
            prop_assert!(w.contains(&x));
        }
    }
}

#[test]
fn empty_and_point_sets_round_trip() {
    assert_eq!(IntervalUnionSet::parse("empty").unwrap(), IntervalUnionSet::empty());
    let p = IntervalUnionSet::point(int(3));
    assert_eq!(IntervalUnionSet::parse(&p.to_string()).unwrap(), p);
}

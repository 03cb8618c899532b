use dynideal::{instance_catalog, Instance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ideals_are_invariant(seed in any::<u64>()) {
        for inst in instance_catalog() {
            let a = inst.sample_ideal(seed, 3);
            let g = inst.sample_group(seed ^ 0x9e37, 3);
            prop_assert!(inst.contains(&a).unwrap());
            prop_assert!(inst.contains(&inst.act(&g, &a).unwrap()).unwrap(), "{}", inst.label());
        }
    }

    #[test]
    fn pointwise_stabilizers_are_subgroups(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for inst in instance_catalog() {
            let a = inst.sample_ideal_with(&mut rng, 3);
            let g = inst.sample_pstab_with(&mut rng, &a, 3).unwrap();
            let h = inst.sample_pstab_with(&mut rng, &a, 3).unwrap();
            prop_assert!(inst.in_pstab(&g, &a).unwrap() && inst.in_pstab(&h, &a).unwrap());
            prop_assert!(inst.in_pstab(&inst.compose(&g, &h).unwrap(), &a).unwrap());
            prop_assert!(inst.in_pstab(&inst.inverse(&g), &a).unwrap());
        }
    }

    #[test]
    fn grid_action_commutes(seed in any::<u64>()) {
        let inst = Instance::AbelianGrid { m: 3, modulus: 4 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = inst.sample_ideal_with(&mut rng, 4);
        let g = inst.sample_group_with(&mut rng, 1);
        let h = inst.sample_group_with(&mut rng, 1);
        let gh = inst.act(&g, &inst.act(&h, &s).unwrap()).unwrap();
        let hg = inst.act(&h, &inst.act(&g, &s).unwrap()).unwrap();
        prop_assert_eq!(gh, hg);
    }
}

use dynideal::game::{
    cofinal_strategy_ii, interleave_strategy_i, random_strategy_i, random_strategy_ii, run_game, stratified_strategy_i,
    validate_transcript, RoundEvidence, DEFAULT_MOVE_CAP,
};
use dynideal::{Elem, Instance};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engine_transcripts_validate(seed in any::<u64>()) {
        for inst in dynideal::instance_catalog() {
            let (t, _) = run_game(&inst, &mut random_strategy_i(2), &mut random_strategy_ii(2), 5, seed, DEFAULT_MOVE_CAP);
            prop_assert!(validate_transcript(&t).is_empty());
        }
    }

    #[test]
    fn cofinal_invariant_every_round(seed in any::<u64>()) {
        for inst in [Instance::BoundedQ] {
            let (t, v) = run_game(&inst, &mut random_strategy_i(2), &mut cofinal_strategy_ii(), 8, seed, DEFAULT_MOVE_CAP);
            prop_assert!(validate_transcript(&t).is_empty());
            for r in &t.rounds {
                for (_, e) in &r.evidence {
                    if let RoundEvidence::Cover { accumulated_in_large, certificate_valid, .. } = e {
                        prop_assert!(*accumulated_in_large && *certificate_valid);
                    }
                }
            }
            prop_assert!(v.outcome_in_ideal);
        }
    }

    #[test]
    fn stratified_sizes_hold(seed in any::<u64>()) {
        let ks = vec![1, 2, 4, 8, 16];
        let inst = Instance::FiniteSym { n: 40, k: 41 };
        let (t, v) = run_game(&inst, &mut stratified_strategy_i(ks.clone()), &mut random_strategy_ii(3), ks.len(), seed, DEFAULT_MOVE_CAP);
        prop_assert!(t.forfeit.is_none() && v.invariants_held);
        for (n, r) in t.rounds.iter().enumerate() {
            let size = r.evidence.iter().find_map(|(_, e)| match e {
                RoundEvidence::Stratified { accumulated_size, .. } => Some(*accumulated_size),
                _ => None,
            });
            prop_assert!(size.unwrap() >= ks[n]);
        }
    }

    #[test]
    fn replays_are_identical(seed in any::<u64>()) {
        let inst = Instance::CountableClosedQ;
        let a = run_game(&inst, &mut interleave_strategy_i(), &mut random_strategy_ii(2), 5, seed, DEFAULT_MOVE_CAP);
        let b = run_game(&inst, &mut interleave_strategy_i(), &mut random_strategy_ii(2), 5, seed, DEFAULT_MOVE_CAP);
        prop_assert_eq!(format!("{:?}", a), format!("{:?}", b));
    }
}

#[test]
fn interleaving_keeps_its_predicate() {
    let inst = Instance::CountableClosedQ;
    for seed in 0..4 {
        let (t, v) = run_game(&inst, &mut interleave_strategy_i(), &mut random_strategy_ii(2), 6, seed, DEFAULT_MOVE_CAP);
        assert!(v.invariants_held);
        assert!(t.rounds.iter().all(|r| r.evidence.iter().all(|(_, e)| e.holds())));
        assert!(matches!(t.accumulated, Elem::Blocks(_)));
    }
}

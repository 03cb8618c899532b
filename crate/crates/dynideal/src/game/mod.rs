//! The DC game: Player I plays ideal sets, Player II answers with group
//! elements fixing everything accumulated so far.

mod strategies;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ideal::{Elem, GroupElem, Instance};
use crate::witnesses::LargenessCertificate;

pub use strategies::{
    cofinal_strategy_ii, interleave_strategy_i, random_strategy_i, random_strategy_ii, stratified_strategy_i,
    trivial_strategy_ii, CofinalII, InterleaveI, RandomI, RandomII, StratifiedI, TrivialII,
};

/// Default bound on the text length of a single move.
pub const DEFAULT_MOVE_CAP: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    I,
    II,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::I => write!(f, "I"),
            Player::II => write!(f, "II"),
        }
    }
}

/// Per-round evidence recorded by a strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundEvidence {
    Cover { large: Elem, certificate: LargenessCertificate, accumulated_in_large: bool, certificate_valid: bool },
    Stratified { threshold: usize, accumulated_size: usize },
    Interleave { holds: bool, cb_rank: usize, accumulated_size: usize },
}

impl RoundEvidence {
    pub fn holds(&self) -> bool {
        match self {
            RoundEvidence::Cover { accumulated_in_large, certificate_valid, .. } => {
                *accumulated_in_large && *certificate_valid
            }
            RoundEvidence::Stratified { threshold, accumulated_size } => accumulated_size >= threshold,
            RoundEvidence::Interleave { holds, .. } => *holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub a: Elem,
    pub gamma: GroupElem,
    pub evidence: Vec<(Player, RoundEvidence)>,
}

/// An illegal or failed move; the opponent wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyFault {
    pub round: usize,
    pub player: Player,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTranscript {
    pub instance: Instance,
    pub horizon: usize,
    pub rounds: Vec<Round>,
    pub accumulated: Elem,
    pub forfeit: Option<StrategyFault>,
    pub move_cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    /// Membership of the accumulated set at the horizon.
    pub outcome_in_ideal: bool,
    /// Every recorded strategy invariant held.
    pub invariants_held: bool,
    pub winner: Player,
    pub certificates: Vec<(usize, Player, RoundEvidence)>,
}

/// What a strategy sees before moving.
pub struct GameView<'a> {
    pub instance: &'a Instance,
    pub round: usize,
    pub rounds: &'a [Round],
    pub accumulated: &'a Elem,
}

pub trait StrategyI {
    fn name(&self) -> String;
    fn play(&mut self, view: &GameView<'_>, rng: &mut ChaCha8Rng) -> Result<Elem, String>;
    /// Evidence about the position after the round just played.
    fn evidence(&self, _view: &GameView<'_>) -> Option<RoundEvidence> {
        None
    }
}

pub trait StrategyII {
    fn name(&self) -> String;
    fn respond(&mut self, view: &GameView<'_>, a: &Elem, rng: &mut ChaCha8Rng) -> Result<GroupElem, String>;
    fn evidence(&self, _view: &GameView<'_>) -> Option<RoundEvidence> {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub round: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "round {}: {}", self.round, self.message)
    }
}

/// Every rule violation in `t`, by round.
pub fn validate_transcript(t: &GameTranscript) -> Vec<Violation> {
    let inst = &t.instance;
    let mut out = Vec::new();
    let mut push = |round: usize, message: String| out.push(Violation { round, message });
    if t.rounds.len() > t.horizon {
        push(t.rounds.len(), format!("{} rounds past horizon {}", t.rounds.len(), t.horizon));
    }
    if t.forfeit.is_none() && t.rounds.len() < t.horizon {
        push(t.rounds.len(), "game stopped early without a forfeit".into());
    }
    let mut acc = inst.empty();
    for (n, r) in t.rounds.iter().enumerate() {
        match inst.contains(&r.a) {
            Ok(true) => {}
            Ok(false) => push(n, format!("{} is not in the ideal", r.a)),
            Err(e) => push(n, e.to_string()),
        }
        if !inst.is_group_member(&r.gamma) {
            push(n, format!("{} is not a group element", r.gamma));
            continue;
        }
        if n == 0 && !inst.is_identity(&r.gamma) {
            push(0, "first answer must be the identity".into());
        }
        match inst.in_pstab(&r.gamma, &acc) {
            Ok(true) => {}
            Ok(false) => push(n, format!("{} moves a point of the accumulated set", r.gamma)),
            Err(e) => push(n, e.to_string()),
        }
        match inst.act(&r.gamma, &r.a).and_then(|m| inst.union(&acc, &m)) {
            Ok(u) => acc = u,
            Err(e) => push(n, e.to_string()),
        }
    }
    if acc != t.accumulated {
        push(t.rounds.len(), "recorded accumulated set differs from the recomputed one".into());
    }
    out
}

fn text_len(x: &impl fmt::Display) -> usize {
    x.to_string().len()
}

/// Play `horizon` rounds with one seeded stream shared by both players.
pub fn run_game(
    inst: &Instance,
    one: &mut dyn StrategyI,
    two: &mut dyn StrategyII,
    horizon: usize,
    seed: u64,
    move_cap: usize,
) -> (GameTranscript, Verdict) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rounds: Vec<Round> = Vec::new();
    let mut acc = inst.empty();
    let mut forfeit = None;
    for n in 0..horizon {
        let view = GameView { instance: inst, round: n, rounds: &rounds, accumulated: &acc };
        let fault = |player, reason: String| Some(StrategyFault { round: n, player, reason });
        let a = match one.play(&view, &mut rng) {
            Ok(a) => a,
            Err(e) => {
                forfeit = fault(Player::I, e);
                break;
            }
        };
        if text_len(&a) > move_cap {
            forfeit = fault(Player::I, format!("move exceeds the cap of {move_cap} characters"));
            break;
        }
        if !inst.contains(&a).unwrap_or(false) {
            forfeit = fault(Player::I, format!("{a} is not in the ideal"));
            break;
        }
        let gamma = match two.respond(&view, &a, &mut rng) {
            Ok(g) => g,
            Err(e) => {
                forfeit = fault(Player::II, e);
                break;
            }
        };
        let legal = inst.is_group_member(&gamma)
            && (n > 0 || inst.is_identity(&gamma))
            && inst.in_pstab(&gamma, &acc).unwrap_or(false);
        if !legal {
            forfeit = fault(Player::II, format!("illegal answer {gamma}"));
            break;
        }
        let moved = inst.act(&gamma, &a).expect("checked move");
        acc = inst.union(&acc, &moved).expect("same kind");
        rounds.push(Round { a, gamma, evidence: Vec::new() });
        let view = GameView { instance: inst, round: n, rounds: &rounds, accumulated: &acc };
        let mut ev = Vec::new();
        if let Some(e) = one.evidence(&view) {
            ev.push((Player::I, e));
        }
        if let Some(e) = two.evidence(&view) {
            ev.push((Player::II, e));
        }
        rounds.last_mut().expect("just pushed").evidence = ev;
    }
    let outcome_in_ideal = inst.contains(&acc).unwrap_or(false);
    let certificates: Vec<(usize, Player, RoundEvidence)> = rounds
        .iter()
        .enumerate()
        .flat_map(|(n, r)| r.evidence.iter().map(move |(p, e)| (n, *p, e.clone())))
        .collect();
    let invariants_held = certificates.iter().all(|(_, _, e)| e.holds());
    let winner = match &forfeit {
        Some(f) if f.player == Player::I => Player::II,
        Some(_) => Player::I,
        None if outcome_in_ideal => Player::II,
        None => Player::I,
    };
    let t = GameTranscript { instance: inst.clone(), horizon, rounds, accumulated: acc, forfeit, move_cap };
    let v = Verdict { outcome_in_ideal, invariants_held, winner, certificates };
    (t, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::IntervalUnionSet;
    use crate::plmap::PLMap;
    use crate::rational::int;

    fn iu(s: &str) -> Elem {
        Elem::Intervals(IntervalUnionSet::parse(s).unwrap())
    }

    fn transcript(rounds: Vec<(Elem, GroupElem)>) -> GameTranscript {
        let inst = Instance::BoundedQ;
        let mut acc = inst.empty();
        for (a, g) in &rounds {
            acc = inst.union(&acc, &inst.act(g, a).unwrap()).unwrap();
        }
        GameTranscript {
            instance: inst,
            horizon: rounds.len(),
            rounds: rounds.into_iter().map(|(a, gamma)| Round { a, gamma, evidence: vec![] }).collect(),
            accumulated: acc,
            forfeit: None,
            move_cap: DEFAULT_MOVE_CAP,
        }
    }

    #[test]
    fn validator_rules() {
        let id = GroupElem::PL(PLMap::identity());
        let t = transcript(vec![(iu("empty"), id.clone()), (iu("empty"), id.clone())]);
        assert!(validate_transcript(&t).is_empty());
        let shift = GroupElem::PL(PLMap::translation(int(1)));
        let t = transcript(vec![(iu("{0}"), shift.clone())]);
        assert_eq!(validate_transcript(&t)[0].round, 0);
        let t = transcript(vec![(iu("empty"), id.clone()), (iu("{5}"), id.clone()), (iu("empty"), shift)]);
        let v = validate_transcript(&t);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].round, 2);
    }

    #[test]
    fn empty_game_is_valid() {
        let inst = Instance::BoundedQ;
        let (t, v) = run_game(&inst, &mut random_strategy_i(2), &mut random_strategy_ii(2), 0, 1, DEFAULT_MOVE_CAP);
        assert!(validate_transcript(&t).is_empty());
        assert!(v.outcome_in_ideal);
    }

    #[test]
    fn cofinal_player_keeps_bounded_outcome() {
        let inst = Instance::BoundedQ;
        for seed in 0..5 {
            let (t, v) = run_game(&inst, &mut random_strategy_i(3), &mut cofinal_strategy_ii(), 20, seed, DEFAULT_MOVE_CAP);
            assert!(validate_transcript(&t).is_empty());
            assert!(t.forfeit.is_none(), "{:?}", t.forfeit);
            assert!(v.outcome_in_ideal && v.invariants_held);
            assert!(inst.is_identity(&t.rounds[0].gamma));
        }
    }

    #[test]
    fn random_answers_are_legal() {
        for inst in crate::ideal::instance_catalog() {
            for seed in 0..5 {
                let (t, _) = run_game(&inst, &mut random_strategy_i(2), &mut random_strategy_ii(2), 6, seed, DEFAULT_MOVE_CAP);
                assert!(validate_transcript(&t).is_empty(), "{}", inst.label());
                assert!(t.forfeit.is_none(), "{} {:?}", inst.label(), t.forfeit);
            }
        }
    }

    #[test]
    fn stratified_player_escapes() {
        let inst = Instance::FiniteSym { n: 12, k: 13 };
        let (t, v) =
            run_game(&inst, &mut stratified_strategy_i(vec![1, 2, 3, 4]), &mut random_strategy_ii(2), 4, 3, DEFAULT_MOVE_CAP);
        assert!(validate_transcript(&t).is_empty());
        assert!(v.invariants_held);
        let mut too_big = stratified_strategy_i(vec![6]);
        let (t, _) = run_game(&Instance::FiniteSym { n: 5, k: 6 }, &mut too_big, &mut trivial_strategy_ii(), 1, 0, DEFAULT_MOVE_CAP);
        assert_eq!(t.forfeit.map(|f| f.player), Some(Player::I));
    }

    #[test]
    fn interleaving_grows() {
        let inst = Instance::CountableClosedQ;
        let (t, v) = run_game(&inst, &mut interleave_strategy_i(), &mut random_strategy_ii(2), 8, 5, DEFAULT_MOVE_CAP);
        assert!(validate_transcript(&t).is_empty());
        assert!(v.invariants_held);
        let Elem::Blocks(acc) = &t.accumulated else { panic!() };
        assert!(acc.points().len() >= 1 << 4);
        assert_eq!(t.rounds[0].a.to_string(), "{1/4, 3/4}");
    }

    #[test]
    fn replays_match() {
        let inst = Instance::BoundedQ;
        let a = run_game(&inst, &mut random_strategy_i(3), &mut cofinal_strategy_ii(), 10, 9, DEFAULT_MOVE_CAP);
        let b = run_game(&inst, &mut random_strategy_i(3), &mut cofinal_strategy_ii(), 10, 9, DEFAULT_MOVE_CAP);
        assert_eq!(a, b);
    }
}

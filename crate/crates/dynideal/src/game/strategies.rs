//! Strategies for both players.

use std::collections::BTreeSet;

use rand_chacha::ChaCha8Rng;

use crate::blocks::BlockSet;
use crate::ideal::{Elem, GroupElem, Instance};
use crate::rational::{mid, one, rat, zero, Rational};
use crate::witnesses::{a_large, shrink_cover, LargenessCertificate};

use super::{GameView, RoundEvidence, StrategyI, StrategyII};

/// Player I sampling ideal elements of about `size_hint` pieces.
pub struct RandomI {
    size_hint: usize,
}

pub fn random_strategy_i(size_hint: usize) -> RandomI {
    RandomI { size_hint }
}

impl StrategyI for RandomI {
    fn name(&self) -> String {
        format!("random-I({})", self.size_hint)
    }

    fn play(&mut self, view: &GameView<'_>, rng: &mut ChaCha8Rng) -> Result<Elem, String> {
        Ok(view.instance.sample_ideal_with(rng, self.size_hint))
    }
}

/// Player II sampling elements of the pointwise stabilizer of the position.
pub struct RandomII {
    complexity: usize,
}

pub fn random_strategy_ii(complexity: usize) -> RandomII {
    RandomII { complexity }
}

impl StrategyII for RandomII {
    fn name(&self) -> String {
        format!("random-II({})", self.complexity)
    }

    fn respond(&mut self, view: &GameView<'_>, _a: &Elem, rng: &mut ChaCha8Rng) -> Result<GroupElem, String> {
        if view.round == 0 {
            return Ok(view.instance.identity());
        }
        view.instance.sample_pstab_with(rng, view.accumulated, self.complexity).map_err(|e| e.to_string())
    }
}

pub struct TrivialII;

pub fn trivial_strategy_ii() -> TrivialII {
    TrivialII
}

impl StrategyII for TrivialII {
    fn name(&self) -> String {
        "trivial-II".into()
    }

    fn respond(&mut self, view: &GameView<'_>, _a: &Elem, _rng: &mut ChaCha8Rng) -> Result<GroupElem, String> {
        Ok(view.instance.identity())
    }
}

/// Player II keeping the accumulated set inside one large set `b`,
/// compressing each new move into it with [`shrink_cover`].
#[derive(Default)]
pub struct CofinalII {
    state: Option<(Elem, LargenessCertificate)>,
}

pub fn cofinal_strategy_ii() -> CofinalII {
    CofinalII::default()
}

impl StrategyII for CofinalII {
    fn name(&self) -> String {
        "cofinal-II".into()
    }

    fn respond(&mut self, view: &GameView<'_>, a: &Elem, _rng: &mut ChaCha8Rng) -> Result<GroupElem, String> {
        let inst = view.instance;
        let Some((b, cert)) = &self.state else {
            let (b, cert) = a_large(inst, a).map_err(|e| e.to_string())?;
            self.state = Some((b, cert));
            return Ok(inst.identity());
        };
        // the accumulated set may be added to the move without changing the answer
        let grown = inst.union(a, view.accumulated).map_err(|e| e.to_string())?;
        let c = if inst.contains(&grown).map_err(|e| e.to_string())? { grown } else { a.clone() };
        let (gamma, next) = shrink_cover(inst, cert, &c).map_err(|e| e.to_string())?;
        self.state = Some((b.clone(), next));
        Ok(gamma)
    }

    fn evidence(&self, view: &GameView<'_>) -> Option<RoundEvidence> {
        let (b, cert) = self.state.as_ref()?;
        let inside = view.instance.is_subset(view.accumulated, b).unwrap_or(false);
        let valid = cert.is_valid() && cert.base == *view.accumulated;
        Some(RoundEvidence::Cover {
            large: b.clone(),
            certificate: cert.clone(),
            accumulated_in_large: inside,
            certificate_valid: valid,
        })
    }
}

/// Player I playing `{0, ..., k_n - 1}` in round `n`.
pub struct StratifiedI {
    thresholds: Vec<usize>,
}

pub fn stratified_strategy_i(thresholds: Vec<usize>) -> StratifiedI {
    StratifiedI { thresholds }
}

impl StrategyI for StratifiedI {
    fn name(&self) -> String {
        format!("stratified-I{:?}", self.thresholds)
    }

    fn play(&mut self, view: &GameView<'_>, _rng: &mut ChaCha8Rng) -> Result<Elem, String> {
        let Instance::FiniteSym { n, .. } = view.instance else {
            return Err(format!("stratified play needs a finite symmetric instance, got {}", view.instance.label()));
        };
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err("thresholds must increase".into());
        }
        let k = *self.thresholds.get(view.round).ok_or("no threshold for this round")?;
        if k > *n {
            return Err(format!("insufficient space: threshold {k} exceeds ground set of {n}"));
        }
        Ok(Elem::Points((0..k).collect()))
    }

    fn evidence(&self, view: &GameView<'_>) -> Option<RoundEvidence> {
        let Elem::Points(acc) = view.accumulated else { return None };
        Some(RoundEvidence::Stratified { threshold: self.thresholds[view.round], accumulated_size: acc.len() })
    }
}

/// Player I on `[0,1]` putting a point between every two accumulated points
/// and one on each side.
#[derive(Default)]
pub struct InterleaveI {
    before: Vec<Rational>,
    played: BTreeSet<Rational>,
}

pub fn interleave_strategy_i() -> InterleaveI {
    InterleaveI::default()
}

fn points_of(e: &Elem) -> Vec<Rational> {
    match e {
        Elem::Blocks(b) => b.points().to_vec(),
        _ => Vec::new(),
    }
}

impl StrategyI for InterleaveI {
    fn name(&self) -> String {
        "interleave-I".into()
    }

    fn play(&mut self, view: &GameView<'_>, _rng: &mut ChaCha8Rng) -> Result<Elem, String> {
        let pts: Vec<Rational> = points_of(view.accumulated).into_iter().filter(|p| *p > zero() && *p < one()).collect();
        let mv: BTreeSet<Rational> = if pts.is_empty() {
            [rat(1, 4), rat(3, 4)].into()
        } else {
            let mut m: BTreeSet<Rational> = pts.windows(2).map(|w| mid(&w[0], &w[1])).collect();
            m.insert(mid(&zero(), &pts[0]));
            m.insert(mid(pts.last().expect("nonempty"), &one()));
            m
        };
        self.before = pts;
        self.played = mv.clone();
        Ok(Elem::Blocks(BlockSet::from_points(mv)))
    }

    fn evidence(&self, view: &GameView<'_>) -> Option<RoundEvidence> {
        let Elem::Blocks(acc) = view.accumulated else { return None };
        let moved = points_of(&view.rounds.last()?.a);
        let holds = self.before.windows(2).all(|w| moved.iter().any(|x| *x > w[0] && *x < w[1]))
            && moved.iter().all(|x| self.played.contains(x));
        Some(RoundEvidence::Interleave { holds, cb_rank: acc.cb_rank(), accumulated_size: acc.points().len() })
    }
}

//! Order-preserving matching of finite sets over a fixed set.

use std::collections::BTreeMap;

use crate::error::OrderError;
use crate::intervals::{Endpoint, IntervalUnionSet};
use crate::plmap::PLMap;
use crate::rational::Rational;

/// Where a point sits relative to the closure of the fixed set: inside a
/// complementary component (keyed by its bounds) or on a boundary point
/// that every continuous bijection fixing the set must also fix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Gap(Endpoint, Endpoint),
    Pinned(Rational),
}

fn slot(gaps: &IntervalUnionSet, x: &Rational) -> Slot {
    match gaps.components().iter().find(|c| c.contains(x)) {
        Some(c) => Slot::Gap(c.lo.clone(), c.hi.clone()),
        None => Slot::Pinned(x.clone()),
    }
}

fn fmt_slot(s: &Slot) -> String {
    match s {
        Slot::Gap(lo, hi) => format!("({lo},{hi})"),
        Slot::Pinned(p) => format!("{{{p}}}"),
    }
}

/// An order-preserving PL bijection fixing `fix` pointwise and sending the
/// finite set `d0` onto `d1`.
pub fn match_finite_sets(d0: &[Rational], d1: &[Rational], fix: &IntervalUnionSet) -> Result<PLMap, OrderError> {
    let mut d0: Vec<Rational> = d0.to_vec();
    let mut d1: Vec<Rational> = d1.to_vec();
    d0.sort();
    d0.dedup();
    d1.sort();
    d1.dedup();
    if d0.len() != d1.len() {
        return Err(OrderError::SizeMismatch { left: d0.len(), right: d1.len() });
    }
    if d0.iter().chain(&d1).any(|x| fix.contains(x)) {
        return Err(OrderError::MeetsFixedSet);
    }
    let closed = fix.closure();
    let gaps = closed.complement();
    let mut slots: BTreeMap<Slot, (Vec<Rational>, Vec<Rational>)> = BTreeMap::new();
    for x in &d0 {
        slots.entry(slot(&gaps, x)).or_default().0.push(x.clone());
    }
    for y in &d1 {
        slots.entry(slot(&gaps, y)).or_default().1.push(y.clone());
    }
    for (s, (l, r)) in &slots {
        if l.len() != r.len() {
            return Err(OrderError::GapMismatch { gap: fmt_slot(s), left: l.len(), right: r.len() });
        }
    }
    let mut graph: Vec<(Rational, Rational)> = Vec::new();
    for c in closed.components() {
        for e in [&c.lo, &c.hi] {
            if let Some(p) = e.finite() {
                graph.push((p.clone(), p.clone()));
            }
        }
    }
    for (l, r) in slots.into_values() {
        graph.extend(l.into_iter().zip(r));
    }
    graph.sort();
    graph.dedup();
    Ok(PLMap::through_points(&graph).expect("matched graph is increasing"))
}

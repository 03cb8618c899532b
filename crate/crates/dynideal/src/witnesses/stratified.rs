//! One window of fresh points absorbing arbitrarily many small sets.

use std::collections::BTreeSet;

use crate::perm::FinitePermutation;

use super::WitnessError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedWitness {
    pub maps: Vec<FinitePermutation>,
    pub window: BTreeSet<usize>,
}

/// Maps every `b_m ∖ a` into the window of the `k_level` smallest points off `a`.
pub fn stratified_witness(
    a: &BTreeSet<usize>,
    bs: &[BTreeSet<usize>],
    n: usize,
    level: usize,
    thresholds: &[usize],
) -> Result<StratifiedWitness, WitnessError> {
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WitnessError::Precondition("thresholds must increase".into()));
    }
    let (Some(&k), Some(&next)) = (thresholds.get(level), thresholds.get(level + 1)) else {
        return Err(WitnessError::Precondition(format!("no thresholds for level {level}")));
    };
    if next < 2 * k {
        return Err(WitnessError::Precondition(format!("k_(n+1) = {next} < 2 k_n = {}", 2 * k)));
    }
    if a.len() >= k || bs.iter().any(|b| b.len() >= k) {
        return Err(WitnessError::Precondition(format!("sets must have fewer than {k} points")));
    }
    if a.iter().chain(bs.iter().flatten()).any(|&x| x >= n) {
        return Err(WitnessError::Precondition(format!("points outside 0..{n}")));
    }
    let window: BTreeSet<usize> = (0..n).filter(|x| !a.contains(x)).take(k).collect();
    if window.len() < k {
        return Err(WitnessError::InsufficientSpace(format!("N = {n} < |a| + k_n = {}", a.len() + k)));
    }
    let maps = bs
        .iter()
        .map(|b| {
            let d: BTreeSet<usize> = b.difference(a).copied().collect();
            let out: Vec<usize> = d.difference(&window).copied().collect();
            let room: Vec<usize> = window.difference(&d).copied().collect();
            FinitePermutation::swaps(n, &out.into_iter().zip(room).collect::<Vec<_>>())
        })
        .collect();
    Ok(StratifiedWitness { maps, window })
}

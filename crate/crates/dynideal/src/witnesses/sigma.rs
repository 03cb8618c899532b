//! Countable unions pushed into the gaps of a fixed set: each `b_n` is moved,
//! gap by gap, above a threshold `x_{i,n}` that climbs towards the right end
//! of the gap (or towards an irrational point inside it).

use std::collections::BTreeMap;

use num_traits::One;

use crate::blocks::{Block, BlockSet, Orientation, PellBlock};
use crate::plmap::PLMap;
use crate::quadext::{rational_between, QuadExt};
use crate::rational::{int, pow, rat, Rational};

use super::WitnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaKind {
    /// Well-ordered sets; thresholds approach the right end of each gap.
    WellOrdered,
    /// Well-ordered sets with no rational left limits; thresholds climb to
    /// an irrational point of the gap.
    BoundedBelow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapRecord {
    /// Supremum of the fixed set below the gap (`None` = -inf).
    pub lo: Option<QuadExt>,
    /// Least element of the fixed set above the gap (`None` = +inf).
    pub hi: Option<Rational>,
    pub thresholds: Vec<Rational>,
    pub limit: Option<QuadExt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaWitness {
    pub kind: SigmaKind,
    pub maps: Vec<PLMap>,
    pub gaps: Vec<GapRecord>,
    pub union: BlockSet,
}

type GapKey = (bool, Option<Rational>);
type Parts = BTreeMap<GapKey, (Option<QuadExt>, Vec<BlockSet>)>;

fn q(r: &Rational) -> QuadExt {
    QuadExt::rational(r.clone())
}

fn key(hi: &Option<Rational>) -> GapKey {
    (hi.is_none(), hi.clone())
}

fn add_part(out: &mut Parts, lo: Option<QuadExt>, hi: Option<Rational>, s: BlockSet) {
    out.entry(key(&hi)).or_insert_with(|| (lo, Vec::new())).1.push(s);
}

fn add_point(a: &BlockSet, p: &Rational, out: &mut Parts) {
    if a.contains(p) {
        return;
    }
    let x = q(p);
    let lo = a.sup_below(&x);
    if lo.as_ref() == Some(&x) {
        // a limit point of `a`: every map fixing `a` fixes it
        return;
    }
    let hi = a.min_above_q(Some(&x));
    add_part(out, lo, hi, BlockSet::from_points([p.clone()]));
}

fn collect(a: &BlockSet, s: &BlockSet, out: &mut Parts) -> Result<(), WitnessError> {
    for p in s.points() {
        add_point(a, p, out);
    }
    for b in s.blocks() {
        if BlockSet::from_block(b.clone()).is_subset(a) {
            continue;
        }
        if b.orientation() == Orientation::Descending {
            return Err(WitnessError::NotInIdeal(format!("descending block {b}")));
        }
        let l = b.limit();
        if a.accumulates_from_left(&l) {
            return Err(WitnessError::UnboundedGapFamily(format!("{b} shares a left limit with the fixed set")));
        }
        let lo = a.sup_below(&l);
        let l_in_a = l.as_rational().is_some_and(|r| a.contains(r));
        let hi = if l_in_a { l.as_rational().cloned() } else { a.min_above_q(Some(&l)) };
        let above_lo = |x: &Rational| lo.as_ref().is_none_or(|lo| q(x) > *lo);
        match b {
            Block::Geo(g) => {
                let mut k0 = 0;
                while !above_lo(&g.copy_start(k0)) {
                    k0 += 1;
                }
                for k in 0..k0 {
                    collect(a, &g.copy(k), out)?;
                }
                let tail = g.tail_from(k0).with_limit_included(g.limit_included() && !l_in_a);
                add_part(out, lo, hi, BlockSet::geo(tail));
            }
            Block::Pell(p) => {
                let k0 = p.first_index_where(above_lo);
                for k in p.first()..k0 {
                    add_point(a, &p.element(k), out);
                }
                let tail = PellBlock::new(p.offset().clone(), p.scale().clone(), k0).expect("nonzero scale");
                add_part(out, lo, hi, BlockSet::from_block(Block::Pell(tail)));
            }
        }
    }
    Ok(())
}

/// The parts of `s` in the gaps of the well-ordered set `a`, keyed by the
/// right end of the gap.
fn gap_parts(a: &BlockSet, s: &BlockSet) -> Result<BTreeMap<GapKey, (Option<QuadExt>, BlockSet)>, WitnessError> {
    let mut raw = Parts::new();
    collect(a, s, &mut raw)?;
    Ok(raw
        .into_iter()
        .map(|(k, (lo, sets))| {
            let u = sets.iter().fold(BlockSet::empty(), |acc, s| acc.union(s));
            (k, (lo, u))
        })
        .collect())
}

fn thresholds(kind: SigmaKind, lo: Option<&QuadExt>, hi: Option<&Rational>, count: usize) -> (Vec<Rational>, Option<QuadExt>) {
    let hq = hi.map(q);
    match kind {
        SigmaKind::WellOrdered => {
            let base = rational_between(lo, hq.as_ref());
            let xs = (0..count as u64)
                .map(|n| match hi {
                    Some(h) => h - (h - &base) * pow(&rat(1, 2), n + 1),
                    None => &base + pow(&int(2), n) - Rational::one(),
                })
                .collect();
            (xs, None)
        }
        SigmaKind::BoundedBelow => {
            let p = rational_between(lo, hq.as_ref());
            let r = match hi {
                Some(_) => rational_between(Some(&q(&p)), hq.as_ref()),
                None => &p + Rational::one(),
            };
            let d = (&r - &p) * int(2);
            let c = &p - &d;
            let seq = PellBlock::new(c, d, 0).expect("positive scale");
            ((0..count as u64 + 1).map(|n| seq.element(n)).collect(), Some(seq.limit()))
        }
    }
}

/// Graph points moving the part `part` of one gap.
fn gap_graph(
    kind: SigmaKind,
    lo: Option<&QuadExt>,
    hi: Option<&Rational>,
    part: &BlockSet,
    xs: &[Rational],
    n: usize,
) -> Vec<(Rational, Rational)> {
    let mn = part.min_elem().expect("well-ordered parts have a least element");
    let mut g = Vec::new();
    match kind {
        SigmaKind::WellOrdered => {
            if mn >= xs[n] {
                return g;
            }
            let qq = rational_between(lo, Some(&q(&mn)));
            g.push((qq.clone(), qq));
            g.push((mn, xs[n].clone()));
        }
        SigmaKind::BoundedBelow => {
            let sup = part.sup().expect("nonempty part");
            let y = match sup.as_rational() {
                Some(s) if part.contains(s) => s.clone(),
                _ => rational_between(Some(&sup), hi.map(q).as_ref()),
            };
            let low = if mn < xs[n] { mn.clone() } else { xs[n].clone() };
            let qq = rational_between(lo, Some(&q(&low)));
            g.push((qq.clone(), qq));
            if mn == y {
                g.push((mn, xs[n + 1].clone()));
            } else {
                g.push((mn, xs[n].clone()));
                g.push((y, xs[n + 1].clone()));
            }
        }
    }
    if let Some(h) = hi {
        g.push((h.clone(), h.clone()));
    }
    g
}

fn check_inputs(kind: SigmaKind, a: &BlockSet, bs: &[BlockSet]) -> Result<(), WitnessError> {
    for s in std::iter::once(a).chain(bs) {
        if !s.is_well_ordered() {
            return Err(WitnessError::NotInIdeal(format!("{s} is not well-ordered")));
        }
        if kind == SigmaKind::BoundedBelow && !s.is_bounded_below_every() {
            return Err(WitnessError::NotInIdeal(format!("{s} has a rational left limit")));
        }
    }
    Ok(())
}

fn sigma_witness(kind: SigmaKind, a: &BlockSet, bs: &[BlockSet]) -> Result<SigmaWitness, WitnessError> {
    check_inputs(kind, a, bs)?;
    let parts: Vec<_> = bs.iter().map(|b| gap_parts(a, b)).collect::<Result<_, _>>()?;
    let mut gaps: BTreeMap<GapKey, GapRecord> = BTreeMap::new();
    for p in &parts {
        for (k, (lo, _)) in p {
            gaps.entry(k.clone()).or_insert_with(|| {
                let hi = k.1.clone();
                let (xs, limit) = thresholds(kind, lo.as_ref(), hi.as_ref(), bs.len());
                GapRecord { lo: lo.clone(), hi, thresholds: xs, limit }
            });
        }
    }
    let mut maps = Vec::with_capacity(bs.len());
    let mut union = a.clone();
    for (n, p) in parts.iter().enumerate() {
        let mut graph = Vec::new();
        for (k, (_, part)) in p {
            let rec = &gaps[k];
            graph.extend(gap_graph(kind, rec.lo.as_ref(), rec.hi.as_ref(), part, &rec.thresholds, n));
        }
        graph.sort();
        graph.dedup();
        let f = PLMap::through_points(&graph).expect("gap graphs are increasing and disjoint");
        union = union.union(&bs[n].image(&f));
        maps.push(f);
    }
    Ok(SigmaWitness { kind, maps, gaps: gaps.into_values().collect(), union })
}

pub fn sigma_witness_wellordered(a: &BlockSet, bs: &[BlockSet]) -> Result<SigmaWitness, WitnessError> {
    sigma_witness(SigmaKind::WellOrdered, a, bs)
}

pub fn sigma_witness_bounded_below(a: &BlockSet, bs: &[BlockSet]) -> Result<SigmaWitness, WitnessError> {
    sigma_witness(SigmaKind::BoundedBelow, a, bs)
}

fn below(x: &QuadExt, hi: Option<&Rational>) -> bool {
    hi.is_none_or(|h| *x < q(h))
}

/// Independent re-check of a witness against its inputs.
pub fn check_sigma(a: &BlockSet, bs: &[BlockSet], w: &SigmaWitness) -> Result<(), String> {
    check_inputs(w.kind, a, bs).map_err(|e| e.to_string())?;
    if w.maps.len() != bs.len() {
        return Err(format!("{} maps for {} sets", w.maps.len(), bs.len()));
    }
    let want = if w.kind == SigmaKind::BoundedBelow { bs.len() + 1 } else { bs.len() };
    for g in &w.gaps {
        let xs = &g.thresholds;
        if xs.len() != want {
            return Err(format!("gap below {:?}: {} thresholds", g.hi, xs.len()));
        }
        if xs.windows(2).any(|p| p[0] >= p[1]) {
            return Err(format!("gap below {:?}: thresholds not increasing", g.hi));
        }
        let in_gap = |x: &QuadExt| g.lo.as_ref().is_none_or(|lo| lo < x) && below(x, g.hi.as_ref());
        if !xs.iter().all(|x| in_gap(&q(x))) {
            return Err(format!("gap below {:?}: threshold outside the gap", g.hi));
        }
        if let Some(l) = &g.limit {
            if !in_gap(l) || xs.iter().any(|x| q(x) >= *l) {
                return Err(format!("gap below {:?}: limit misplaced", g.hi));
            }
        }
    }
    let mut union = a.clone();
    for (n, (f, b)) in w.maps.iter().zip(bs).enumerate() {
        if !a.fixed_pointwise_by(f) {
            return Err(format!("map {n} moves the fixed set"));
        }
        for (i, piece) in f.pieces().iter().enumerate() {
            if piece.is_identity() {
                continue;
            }
            let (l, r) = f.piece_domain(i);
            let inside = w.gaps.iter().any(|g| {
                let left_ok = match (l, &g.lo) {
                    (_, None) => true,
                    (Some(l), Some(lo)) => q(l) >= *lo,
                    (None, Some(_)) => false,
                };
                let right_ok = match (r, &g.hi) {
                    (_, None) => true,
                    (Some(r), Some(h)) => r <= h,
                    (None, Some(_)) => false,
                };
                left_ok && right_ok
            });
            if !inside {
                return Err(format!("map {n} moves points outside the recorded gaps"));
            }
        }
        let image = b.image(f);
        let parts = gap_parts(a, &image).map_err(|e| e.to_string())?;
        for (k, (_, part)) in &parts {
            let Some(g) = w.gaps.iter().find(|g| key(&g.hi) == *k) else {
                return Err(format!("map {n} leaves points in an unrecorded gap"));
            };
            let mn = part.min_elem().ok_or("empty part")?;
            if mn < g.thresholds[n] {
                return Err(format!("map {n}: least point {mn} below threshold {}", g.thresholds[n]));
            }
            if w.kind == SigmaKind::BoundedBelow && part.sup().expect("nonempty") > q(&g.thresholds[n + 1]) {
                return Err(format!("map {n}: part above the next threshold"));
            }
        }
        union = union.union(&image);
    }
    if union != w.union {
        return Err("recorded union differs".into());
    }
    let ok = match w.kind {
        SigmaKind::WellOrdered => union.is_well_ordered(),
        SigmaKind::BoundedBelow => union.is_well_ordered() && union.is_bounded_below_every(),
    };
    if !ok {
        return Err("union leaves the ideal".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::GeoBlock;

    fn bs(s: &str) -> BlockSet {
        BlockSet::parse(s).unwrap()
    }

    #[test]
    fn subsets_of_a_stay() {
        let a = bs("{0, 1}");
        let w = sigma_witness_wellordered(&a, &[bs("{0}"), bs("{1}")]).unwrap();
        assert!(w.maps.iter().all(PLMap::is_identity));
        check_sigma(&a, &[bs("{0}"), bs("{1}")], &w).unwrap();
    }

    #[test]
    fn two_copies_below_zero() {
        let a = bs("{0}");
        let b = vec![bs("{-1}"), bs("{-1}")];
        let w = sigma_witness_wellordered(&a, &b).unwrap();
        let x1 = w.maps[0].apply(&int(-1));
        let x2 = w.maps[1].apply(&int(-1));
        assert!(x1 < x2 && x2 < int(0));
        assert_eq!(w.union, BlockSet::from_points([x1, x2, int(0)]));
        check_sigma(&a, &b, &w).unwrap();
    }

    #[test]
    fn blocks_into_gaps() {
        let a = BlockSet::geo(GeoBlock::flat(int(0), int(1), rat(1, 2), true).unwrap());
        let b = vec![bs("{-3, 1/3, 5}"), a.union(&bs("{7/8}")), BlockSet::geo(GeoBlock::flat(int(2), int(3), rat(1, 3), false).unwrap())];
        let w = sigma_witness_wellordered(&a, &b).unwrap();
        check_sigma(&a, &b, &w).unwrap();
    }

    #[test]
    fn irrational_targets() {
        let a = bs("{0}");
        let pell = BlockSet::from_block(Block::Pell(PellBlock::new(int(-3), int(1), 0).unwrap()));
        let b = vec![pell.clone(), bs("{-5, 2}"), pell];
        let w = sigma_witness_bounded_below(&a, &b).unwrap();
        check_sigma(&a, &b, &w).unwrap();
        assert!(w.union.is_bounded_below_every());
        assert!(w.gaps.iter().all(|g| g.limit.as_ref().is_some_and(|l| !l.is_rational())));
    }

    #[test]
    fn rational_left_limits_are_refused() {
        let a = bs("{0}");
        let b = vec![BlockSet::geo(GeoBlock::flat(int(-2), int(-1), rat(1, 2), false).unwrap())];
        assert!(matches!(sigma_witness_bounded_below(&a, &b), Err(WitnessError::NotInIdeal(_))));
    }
}

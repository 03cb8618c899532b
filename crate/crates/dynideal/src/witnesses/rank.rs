//! Closed countable sets of every finite rank inside `[0,1]`, refuting cofinal
//! orbits for the closed-set ideal.

use crate::blocks::{BlockSet, GeoBlock};
use crate::ideal::{Elem, Instance};
use crate::plmap::Affine;
use crate::rational::{int, rat};

use super::WitnessError;

pub const RANK_INVARIANT: &str = "cb_rank(γ·s) = cb_rank(s) for every order automorphism γ";
pub const MONOTONE_INVARIANT: &str = "s ⊆ t implies cb_rank(s) <= cb_rank(t)";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankRefutation {
    pub b: BlockSet,
    pub c: BlockSet,
    pub rank_b: usize,
    pub rank_c: usize,
    pub cited: [&'static str; 2],
}

/// A closed subset of `[0,1]` of rank `r`: `{1/2}` for `r = 1`, then a
/// sequence converging to 1 whose copies are quarter-scale towers of rank `r-1`.
pub fn rank_tower(r: usize) -> BlockSet {
    match r {
        0 => BlockSet::empty(),
        1 => BlockSet::from_points([rat(1, 2)]),
        _ => {
            let template = rank_tower(r - 1).affine(&Affine::new(rat(1, 4), int(0)));
            let start = template.min_elem().expect("nonempty tower");
            BlockSet::geo(GeoBlock::new(int(1), rat(1, 2), start, template, true).expect("template fits its domain"))
        }
    }
}

/// `c` of rank one more than `b`: no image of `b` can contain it.
pub fn refute_cofinal_countableclosed(b: &BlockSet) -> Result<RankRefutation, WitnessError> {
    if !Instance::CountableClosedQ.contains(&Elem::Blocks(b.clone()))? {
        return Err(WitnessError::NotInIdeal(b.to_string()));
    }
    let rank_b = b.cb_rank();
    let c = rank_tower(rank_b + 1);
    let rank_c = c.cb_rank();
    Ok(RankRefutation { b: b.clone(), c, rank_b, rank_c, cited: [RANK_INVARIANT, MONOTONE_INVARIANT] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn towers_have_their_rank() {
        for r in 0..6 {
            let t = rank_tower(r);
            assert_eq!(t.cb_rank(), r);
            assert!(Instance::CountableClosedQ.contains(&Elem::Blocks(t)).unwrap());
        }
    }

    #[test]
    fn refutes_each_rank() {
        let e = refute_cofinal_countableclosed(&BlockSet::empty()).unwrap();
        assert_eq!(e.c, BlockSet::from_points([rat(1, 2)]));
        assert_eq!((e.rank_b, e.rank_c), (0, 1));
        let f = refute_cofinal_countableclosed(&BlockSet::from_points([int(0), int(1)])).unwrap();
        assert_eq!(f.rank_c, 2);
        assert_eq!(f.c.blocks().len(), 1);
        let deep = refute_cofinal_countableclosed(&rank_tower(3)).unwrap();
        assert_eq!(deep.rank_c, 4);
    }
}

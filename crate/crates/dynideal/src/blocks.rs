//! Countable subsets of the rational line built from isolated points and
//! convergent blocks.
//!
//! A geometric block with limit `L`, ratio `r` and template `T` is the union of
//! the copies `psi^k(T)`, `k >= 0`, where `psi(t) = L + (t - L) * r`. The
//! template lives in the fundamental domain `[start, psi(start))` (ascending)
//! or `(psi(start), start]` (descending), so the copies are disjoint and move
//! monotonically towards `L`. A one-point template gives the plain sequence
//! `L - (L - start) * r^k`.
//!
//! A Pell block has the rational elements `offset + scale * u_k / v_k` where
//! `u_k / v_k` run through the convergents of sqrt2 from below, so its limit
//! `offset + scale * sqrt2` is irrational.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{OrderError, ParseError};
use crate::plmap::{Affine, PLMap};
use crate::quadext::QuadExt;
use crate::rational::{parse_rational, pow, Rational};

/// Copies examined before an inclusion test gives up.
const SUBSET_WINDOW: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ascending,
    Descending,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeoBlock {
    limit: Rational,
    ratio: Rational,
    start: Rational,
    template: BlockSet,
    limit_included: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PellBlock {
    offset: Rational,
    scale: Rational,
    first: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Geo(Box<GeoBlock>),
    Pell(PellBlock),
}

/// Canonical finite description of a countable set of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BlockSet {
    points: Vec<Rational>,
    blocks: Vec<Block>,
}

fn q(r: &Rational) -> QuadExt {
    QuadExt::rational(r.clone())
}

// ---------------------------------------------------------------- Pell

/// `k`-th convergent `(u, v)` of sqrt2 from below: (1,1), (7,5), (41,29), ...
pub fn pell(k: u64) -> (BigInt, BigInt) {
    let (mut u, mut v) = (BigInt::one(), BigInt::one());
    for _ in 0..k {
        let nu = &u * 3 + &v * 4;
        let nv = &u * 2 + &v * 3;
        u = nu;
        v = nv;
    }
    (u, v)
}

fn pell_ratio(k: u64) -> Rational {
    let (u, v) = pell(k);
    Rational::new(u, v)
}

/// Index `k` with `pell_ratio(k) == y`, if any.
fn pell_index(y: &Rational) -> Option<u64> {
    let (u, v) = (y.numer().clone(), y.denom().clone());
    if !u.is_positive() || &u * &u - &v * &v * 2 != BigInt::from(-1) {
        return None;
    }
    let (mut u, mut v) = (u, v);
    let mut k = 0;
    while !(u.is_one() && v.is_one()) {
        let pu = &u * 3 - &v * 4;
        let pv = &v * 3 - &u * 2;
        u = pu;
        v = pv;
        k += 1;
    }
    Some(k)
}

impl PellBlock {
    pub fn new(offset: Rational, scale: Rational, first: u64) -> Result<Self, OrderError> {
        if scale.is_zero() {
            return Err(OrderError::InvalidBlock("Pell block with zero scale".into()));
        }
        Ok(PellBlock { offset, scale, first })
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn first(&self) -> u64 {
        self.first
    }

    pub fn orientation(&self) -> Orientation {
        if self.scale.is_positive() {
            Orientation::Ascending
        } else {
            Orientation::Descending
        }
    }

    pub fn limit(&self) -> QuadExt {
        QuadExt::new(self.offset.clone(), self.scale.clone())
    }

    pub fn element(&self, k: u64) -> Rational {
        &self.offset + &self.scale * pell_ratio(k)
    }

    pub fn index_of(&self, x: &Rational) -> Option<u64> {
        let y = (x - &self.offset) / &self.scale;
        pell_index(&y).filter(|k| *k >= self.first)
    }

    fn contains(&self, x: &Rational) -> bool {
        self.index_of(x).is_some()
    }

    fn affine(&self, a: &Affine) -> PellBlock {
        PellBlock { offset: a.apply(&self.offset), scale: &a.slope * &self.scale, first: self.first }
    }

    /// Smallest index whose element and all later ones satisfy `pred`
    /// (`pred` is monotone along the sequence).
    pub fn first_index_where(&self, pred: impl Fn(&Rational) -> bool) -> u64 {
        let mut k = self.first;
        while !pred(&self.element(k)) {
            k += 1;
        }
        k
    }
}

// ---------------------------------------------------------------- geometric blocks

impl GeoBlock {
    /// Validates the template against the fundamental domain and moves
    /// `start` to the template's infimum when that is rational.
    pub fn new(
        limit: Rational,
        ratio: Rational,
        start: Rational,
        template: BlockSet,
        limit_included: bool,
    ) -> Result<Self, OrderError> {
        if !(ratio.is_positive() && ratio < Rational::one()) {
            return Err(OrderError::InvalidBlock(format!("ratio {ratio} outside (0,1)")));
        }
        if start == limit {
            return Err(OrderError::InvalidBlock("start equals limit".into()));
        }
        let (Some(lo), Some(hi)) = (template.inf(), template.sup()) else {
            return Err(OrderError::InvalidBlock("empty template".into()));
        };
        let end = &limit + (&start - &limit) * &ratio;
        let ok = if start < limit {
            lo >= q(&start) && hi < q(&end)
        } else {
            hi <= q(&start) && lo > q(&end)
        };
        if !ok {
            return Err(OrderError::InvalidBlock(format!(
                "template [{lo}, {hi}] outside fundamental domain of start {start}, limit {limit}"
            )));
        }
        let anchor = if start < limit { lo } else { hi };
        let start = anchor.as_rational().cloned().unwrap_or(start);
        Ok(GeoBlock { limit, ratio, start, template, limit_included })
    }

    /// The sequence `L - (L - start) * ratio^k`.
    pub fn flat(start: Rational, limit: Rational, ratio: Rational, limit_included: bool) -> Result<Self, OrderError> {
        let t = BlockSet::from_points([start.clone()]);
        GeoBlock::new(limit, ratio, start, t, limit_included)
    }

    pub fn limit(&self) -> &Rational {
        &self.limit
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn start(&self) -> &Rational {
        &self.start
    }

    pub fn template(&self) -> &BlockSet {
        &self.template
    }

    pub fn limit_included(&self) -> bool {
        self.limit_included
    }

    pub fn is_flat(&self) -> bool {
        self.template.blocks.is_empty() && self.template.points.len() == 1
    }

    pub fn orientation(&self) -> Orientation {
        if self.start < self.limit {
            Orientation::Ascending
        } else {
            Orientation::Descending
        }
    }

    pub fn ascending(&self) -> bool {
        self.start < self.limit
    }

    /// `psi^k` as an affine map.
    pub fn psi_pow(&self, k: u64) -> Affine {
        let rk = pow(&self.ratio, k);
        let offset = &self.limit * (Rational::one() - &rk);
        Affine { slope: rk, offset }
    }

    fn psi_inv(&self) -> Affine {
        self.psi_pow(1).inverse()
    }

    fn domain_end(&self) -> Rational {
        &self.limit + (&self.start - &self.limit) * &self.ratio
    }

    /// `psi^k(template)`.
    pub fn copy(&self, k: u64) -> BlockSet {
        self.template.affine(&self.psi_pow(k))
    }

    /// `psi^k(start)`, the start of the k-th fundamental domain.
    pub fn copy_start(&self, k: u64) -> Rational {
        self.psi_pow(k).apply(&self.start)
    }

    pub fn with_limit_included(&self, included: bool) -> GeoBlock {
        GeoBlock { limit_included: included, ..self.clone() }
    }

    /// k-th element of a flat block.
    pub fn element(&self, k: u64) -> Rational {
        self.psi_pow(k).apply(&self.start)
    }

    /// Index of the copy whose fundamental domain holds `x`, if `x` lies
    /// strictly between `start` (inclusive) and the limit.
    fn locate(&self, x: &QuadExt) -> Option<u64> {
        let l = q(&self.limit);
        let s = q(&self.start);
        let end = q(&self.domain_end());
        let inv = self.psi_inv();
        let mut y = x.clone();
        let mut k = 0;
        if self.ascending() {
            if *x < s || *x >= l {
                return None;
            }
            while y >= end {
                y = inv.apply_q(&y);
                k += 1;
            }
        } else {
            if *x > s || *x <= l {
                return None;
            }
            while y <= end {
                y = inv.apply_q(&y);
                k += 1;
            }
        }
        Some(k)
    }

    fn contains(&self, x: &Rational) -> bool {
        if *x == self.limit {
            return self.limit_included;
        }
        match self.locate(&q(x)) {
            Some(k) => {
                let y = self.psi_pow(k).inverse().apply(x);
                self.template.contains(&y)
            }
            None => false,
        }
    }

    fn affine(&self, a: &Affine) -> GeoBlock {
        GeoBlock {
            limit: a.apply(&self.limit),
            ratio: self.ratio.clone(),
            start: a.apply(&self.start),
            template: self.template.affine(a),
            limit_included: self.limit_included,
        }
    }

    /// First copy index from which every copy lies in the closed domain of
    /// the piece `i` of `f` adjacent to the limit.
    fn tail_start(&self, f: &PLMap, i: usize) -> u64 {
        let (lo, hi) = f.piece_domain(i);
        let mut k = 0;
        if self.ascending() {
            if let Some(lo) = lo {
                while self.psi_pow(k).apply(&self.start) < *lo {
                    k += 1;
                }
            }
        } else if let Some(hi) = hi {
            while self.psi_pow(k).apply(&self.start) > *hi {
                k += 1;
            }
        }
        k
    }

    fn tail_piece(&self, f: &PLMap) -> usize {
        if self.ascending() {
            f.piece_left_of(&self.limit)
        } else {
            f.piece_right_of(&self.limit)
        }
    }

    /// Block made of the copies `k0, k0+1, ...`.
    pub fn tail_from(&self, k0: u64) -> GeoBlock {
        let a = self.psi_pow(k0);
        GeoBlock {
            limit: self.limit.clone(),
            ratio: self.ratio.clone(),
            start: a.apply(&self.start),
            template: self.template.affine(&a),
            limit_included: self.limit_included,
        }
    }

    /// Structural inclusion in a block with the same limit, ratio and side.
    fn within(&self, other: &GeoBlock) -> bool {
        if self.limit != other.limit || self.ratio != other.ratio || self.orientation() != other.orientation() {
            return false;
        }
        if self.limit_included && !other.limit_included {
            return false;
        }
        let mut k = 0;
        loop {
            let s = other.psi_pow(k).apply(&other.start);
            match (s.cmp(&self.start), self.ascending()) {
                (Ordering::Equal, _) => return other.copy(k) == self.template,
                (Ordering::Less, true) | (Ordering::Greater, false) => k += 1,
                _ => return false,
            }
        }
    }
}

impl Block {
    pub fn limit(&self) -> QuadExt {
        match self {
            Block::Geo(g) => q(&g.limit),
            Block::Pell(p) => p.limit(),
        }
    }

    pub fn orientation(&self) -> Orientation {
        match self {
            Block::Geo(g) => g.orientation(),
            Block::Pell(p) => p.orientation(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Block::Geo(g) => g.contains(x),
            Block::Pell(p) => p.contains(x),
        }
    }

    fn affine(&self, a: &Affine) -> Block {
        match self {
            Block::Geo(g) => Block::Geo(Box::new(g.affine(a))),
            Block::Pell(p) => Block::Pell(p.affine(a)),
        }
    }

    fn within(&self, other: &Block) -> bool {
        match (self, other) {
            (Block::Geo(a), Block::Geo(b)) => a.within(b),
            (Block::Pell(a), Block::Pell(b)) => a.offset == b.offset && a.scale == b.scale && a.first >= b.first,
            _ => false,
        }
    }

    fn inf(&self) -> QuadExt {
        match self {
            Block::Geo(g) if g.ascending() => g.template.inf().expect("nonempty template"),
            Block::Geo(g) => q(&g.limit),
            Block::Pell(p) if p.scale.is_positive() => q(&p.element(p.first)),
            Block::Pell(p) => p.limit(),
        }
    }

    fn sup(&self) -> QuadExt {
        match self {
            Block::Geo(g) if g.ascending() => q(&g.limit),
            Block::Geo(g) => g.template.sup().expect("nonempty template"),
            Block::Pell(p) if p.scale.is_positive() => p.limit(),
            Block::Pell(p) => q(&p.element(p.first)),
        }
    }
}

// ---------------------------------------------------------------- block sets

impl BlockSet {
    pub fn empty() -> Self {
        BlockSet::default()
    }

    pub fn from_points<I: IntoIterator<Item = Rational>>(pts: I) -> Self {
        let mut points: Vec<Rational> = pts.into_iter().collect();
        points.sort();
        points.dedup();
        BlockSet { points, blocks: Vec::new() }
    }

    pub fn new(points: Vec<Rational>, blocks: Vec<Block>) -> Self {
        normalize(points, blocks)
    }

    pub fn from_block(b: Block) -> Self {
        normalize(Vec::new(), vec![b])
    }

    pub fn geo(b: GeoBlock) -> Self {
        BlockSet::from_block(Block::Geo(Box::new(b)))
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.blocks.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.points.binary_search(x).is_ok() || self.blocks.iter().any(|b| b.contains(x))
    }

    pub fn union(&self, other: &BlockSet) -> BlockSet {
        let mut p = self.points.clone();
        p.extend(other.points.iter().cloned());
        let mut b = self.blocks.clone();
        b.extend(other.blocks.iter().cloned());
        normalize(p, b)
    }

    /// Image under an increasing affine map.
    pub fn affine(&self, a: &Affine) -> BlockSet {
        normalize(
            self.points.iter().map(|p| a.apply(p)).collect(),
            self.blocks.iter().map(|b| b.affine(a)).collect(),
        )
    }

    /// Infimum of the closure.
    pub fn inf(&self) -> Option<QuadExt> {
        let p = self.points.first().map(q);
        p.into_iter().chain(self.blocks.iter().map(Block::inf)).min()
    }

    /// Supremum of the closure.
    pub fn sup(&self) -> Option<QuadExt> {
        let p = self.points.last().map(q);
        p.into_iter().chain(self.blocks.iter().map(Block::sup)).max()
    }

    /// Least element, when it exists (always for well-ordered sets).
    pub fn min_elem(&self) -> Option<Rational> {
        self.min_above(None)
    }

    /// Least element strictly above `x` (`None` = no lower constraint).
    /// Descending blocks have no least element and are skipped.
    pub fn min_above(&self, x: Option<&Rational>) -> Option<Rational> {
        self.min_above_q(x.map(q).as_ref())
    }

    /// As [`BlockSet::min_above`] for a bound in Q(sqrt2).
    pub fn min_above_q(&self, x: Option<&QuadExt>) -> Option<Rational> {
        let above = |p: &Rational| x.is_none_or(|x| q(p) > *x);
        let mut best: Option<Rational> = self.points.iter().find(|p| above(p)).cloned();
        let mut offer = |c: Rational| {
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        };
        for b in &self.blocks {
            match b {
                Block::Geo(g) if g.ascending() => {
                    let k = match x {
                        None => Some(0),
                        Some(x) if *x < q(&g.start) => Some(0),
                        Some(x) if *x >= q(&g.limit) => None,
                        Some(x) => g.locate(x),
                    };
                    if let Some(k) = k {
                        match g.copy(k).min_above_q(x) {
                            Some(c) => offer(c),
                            None => offer(g.copy(k + 1).min_elem().expect("copies are nonempty")),
                        }
                    }
                }
                Block::Pell(p) if p.scale.is_positive()
                    && x.is_none_or(|x| p.limit() > *x) => {
                        let k = p.first_index_where(|e| above(e));
                        offer(p.element(k));
                    }
                _ => {}
            }
        }
        best
    }

    /// `sup { z in s : z < x }`.
    pub fn sup_below(&self, x: &QuadExt) -> Option<QuadExt> {
        let mut best: Option<QuadExt> = self.points.iter().map(q).filter(|p| p < x).max();
        let mut offer = |c: QuadExt| {
            if best.as_ref().is_none_or(|b| c > *b) {
                best = Some(c);
            }
        };
        for b in &self.blocks {
            if b.sup() < *x {
                offer(b.sup());
                continue;
            }
            if b.inf() >= *x {
                continue;
            }
            match b {
                Block::Geo(g) => {
                    if *x == q(&g.limit) {
                        offer(q(&g.limit));
                        continue;
                    }
                    if g.ascending() {
                        let k = g.locate(x).expect("x inside the block's range");
                        match g.copy(k).sup_below(x) {
                            Some(c) => offer(c),
                            None if k > 0 => offer(g.copy(k - 1).sup().expect("nonempty")),
                            None => {}
                        }
                    } else {
                        let k = g.locate(x).expect("x inside the block's range");
                        match g.copy(k).sup_below(x) {
                            Some(c) => offer(c),
                            None => offer(g.copy(k + 1).sup().expect("nonempty")),
                        }
                    }
                }
                Block::Pell(p) => {
                    if p.scale.is_positive() {
                        if *x >= p.limit() {
                            offer(p.limit());
                            continue;
                        }
                        let k = p.first_index_where(|e| q(e) >= *x);
                        if k > p.first {
                            offer(q(&p.element(k - 1)));
                        }
                    } else {
                        let k = p.first_index_where(|e| q(e) < *x);
                        offer(q(&p.element(k)));
                    }
                }
            }
        }
        best
    }

    /// Whether elements of the set accumulate at `x` from the left.
    pub fn accumulates_from_left(&self, x: &QuadExt) -> bool {
        self.blocks.iter().any(|b| match b {
            Block::Geo(g) => {
                if *x == q(&g.limit) {
                    return g.ascending();
                }
                match g.locate(x) {
                    Some(k) => g.copy(k).accumulates_from_left(x),
                    None => false,
                }
            }
            Block::Pell(p) => p.scale.is_positive() && *x == p.limit(),
        })
    }

    /// Image under a PL bijection. Each block splits into finitely many head
    /// copies, mapped piece by piece, and a tail inside one affine piece.
    pub fn image(&self, f: &PLMap) -> BlockSet {
        let mut points: Vec<Rational> = self.points.iter().map(|p| f.apply(p)).collect();
        let mut blocks = Vec::new();
        for b in &self.blocks {
            match b {
                Block::Geo(g) => {
                    let i = g.tail_piece(f);
                    let k0 = g.tail_start(f, i);
                    for k in 0..k0 {
                        let head = g.copy(k).image(f);
                        points.extend(head.points);
                        blocks.extend(head.blocks);
                    }
                    let tail = g.tail_from(k0);
                    blocks.push(Block::Geo(Box::new(tail.affine(&f.pieces()[i]))));
                }
                Block::Pell(p) => {
                    let i = f.piece_index_q(&p.limit());
                    let (lo, hi) = f.piece_domain(i);
                    let k0 = if p.scale.is_positive() {
                        p.first_index_where(|e| lo.is_none_or(|lo| e >= lo))
                    } else {
                        p.first_index_where(|e| hi.is_none_or(|hi| e <= hi))
                    };
                    points.extend((p.first..k0).map(|k| f.apply(&p.element(k))));
                    let tail = PellBlock { first: k0, ..p.clone() };
                    blocks.push(Block::Pell(tail.affine(&f.pieces()[i])));
                }
            }
        }
        normalize(points, blocks)
    }

    /// Exact test that every element is fixed by `f`. A block's tail holds
    /// infinitely many elements, so its piece must be the identity.
    pub fn fixed_pointwise_by(&self, f: &PLMap) -> bool {
        if !self.points.iter().all(|p| f.apply(p) == *p) {
            return false;
        }
        self.blocks.iter().all(|b| match b {
            Block::Geo(g) => {
                let i = g.tail_piece(f);
                let k0 = g.tail_start(f, i);
                f.pieces()[i].is_identity() && (0..k0).all(|k| g.copy(k).fixed_pointwise_by(f))
            }
            Block::Pell(p) => {
                let i = f.piece_index_q(&p.limit());
                let (lo, hi) = f.piece_domain(i);
                let k0 = if p.scale.is_positive() {
                    p.first_index_where(|e| lo.is_none_or(|lo| e >= lo))
                } else {
                    p.first_index_where(|e| hi.is_none_or(|hi| e <= hi))
                };
                f.pieces()[i].is_identity() && (p.first..k0).all(|k| {
                    let e = p.element(k);
                    f.apply(&e) == e
                })
            }
        })
    }

    /// Cantor-Bendixson rank of the closure in the rationals.
    pub fn cb_rank(&self) -> usize {
        let p = usize::from(!self.points.is_empty());
        self.blocks
            .iter()
            .map(|b| match b {
                Block::Geo(g) => g.template.cb_rank() + 1,
                Block::Pell(_) => 1,
            })
            .max()
            .unwrap_or(0)
            .max(p)
    }

    /// No infinite descending sequence: no descending block at any depth.
    pub fn is_well_ordered(&self) -> bool {
        self.blocks.iter().all(|b| match b {
            Block::Geo(g) => g.ascending() && g.template.is_well_ordered(),
            Block::Pell(p) => p.scale.is_positive(),
        })
    }

    /// For every rational `z`, the part below `z` is bounded strictly below
    /// `z`: no ascending block at any depth converges to a rational.
    pub fn is_bounded_below_every(&self) -> bool {
        self.blocks.iter().all(|b| match b {
            Block::Geo(g) => !g.ascending() && g.template.is_bounded_below_every(),
            Block::Pell(_) => true,
        })
    }

    /// Closed in the rationals: every limit is rational and included.
    pub fn is_closed(&self) -> bool {
        self.blocks.iter().all(|b| match b {
            Block::Geo(g) => g.limit_included && g.template.is_closed(),
            Block::Pell(_) => false,
        })
    }

    /// Closure within the rationals (adds rational limits at every depth).
    pub fn closure(&self) -> BlockSet {
        let blocks = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Geo(g) => {
                    let mut g = (**g).clone();
                    g.template = g.template.closure();
                    g.limit_included = true;
                    Block::Geo(Box::new(g))
                }
                Block::Pell(_) => b.clone(),
            })
            .collect();
        normalize(self.points.clone(), blocks)
    }

    /// Inclusion decided on the representation. Exact for blocks whose tail
    /// is covered by blocks of `other` at the same limit with commensurable
    /// ratios; otherwise inclusion is only affirmed when it can be proved
    /// within a fixed window of copies.
    pub fn is_subset(&self, other: &BlockSet) -> bool {
        self.points.iter().all(|p| other.contains(p)) && self.blocks.iter().all(|b| block_in_set(b, other))
    }

    /// Elements in a fixed enumeration order (points, then copies of each
    /// block in order), stopping after about `budget` items.
    pub fn enumerate(&self, budget: usize) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.points.iter().take(budget).cloned().collect();
        for b in &self.blocks {
            if out.len() >= budget {
                break;
            }
            match b {
                Block::Geo(g) => {
                    if g.limit_included {
                        out.push(g.limit.clone());
                    }
                    let mut k = 0;
                    while out.len() < budget {
                        let room = (budget - out.len()).div_ceil(2).max(1);
                        out.extend(g.copy(k).enumerate(room));
                        k += 1;
                    }
                }
                Block::Pell(p) => {
                    let room = budget - out.len();
                    out.extend((0..room as u64).map(|k| p.element(p.first + k)));
                }
            }
        }
        out
    }

    pub fn parse(s: &str) -> Result<BlockSet, ParseError> {
        let mut p = Parser { s: s.as_bytes(), i: 0 };
        let set = p.set()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(ParseError::new(format!("trailing input at byte {}", p.i)));
        }
        if set.to_string() != s.trim() {
            return Err(ParseError::new("block set text is not canonical"));
        }
        Ok(set)
    }
}

/// Minimal `(d, g)` with `x^d == y^g` for positive integers, `None` when
/// the two are multiplicatively independent. `(1, 1)` pairs with anything,
/// reported as `Some((0, 0))`.
fn common_exponents(x: &BigInt, y: &BigInt) -> Option<(u64, u64)> {
    if x.is_one() && y.is_one() {
        return Some((0, 0));
    }
    if x.is_one() || y.is_one() {
        return None;
    }
    let (mut p, mut r) = (x.clone(), y.clone());
    while p != r {
        if p < r {
            std::mem::swap(&mut p, &mut r);
        }
        if !(&p % &r).is_zero() {
            return None;
        }
        p /= &r;
        if p.is_one() {
            return None;
        }
    }
    let base = p;
    let log = |mut n: BigInt| {
        let mut e = 0u64;
        while n > BigInt::one() {
            n /= &base;
            e += 1;
        }
        e
    };
    let (s, t) = (log(x.clone()), log(y.clone()));
    let g = s.gcd(&t);
    // x^d = y^g  <=>  s*d = t*g
    Some((t / g, s / g))
}

/// Minimal `(d, g)` with `r^d == rho^g`.
fn ratio_period(r: &Rational, rho: &Rational) -> Option<(u64, u64)> {
    let n = common_exponents(r.numer(), rho.numer())?;
    let d = common_exponents(r.denom(), rho.denom())?;
    match (n, d) {
        ((0, 0), d) => Some(d),
        (n, (0, 0)) => Some(n),
        (n, d) if n.0 * d.1 == n.1 * d.0 => Some(n),
        _ => None,
    }
}

fn block_in_set(b: &Block, t: &BlockSet) -> bool {
    if t.blocks.iter().any(|c| b.within(c)) {
        return true;
    }
    match b {
        Block::Pell(p) => {
            let cover = t.blocks.iter().filter_map(|c| match c {
                Block::Pell(c) if c.offset == p.offset && c.scale == p.scale => Some(c.first),
                _ => None,
            });
            match cover.min() {
                Some(f) => (p.first..f.max(p.first)).all(|k| t.contains(&p.element(k))),
                None => false,
            }
        }
        Block::Geo(g) => {
            if g.limit_included && !t.contains(&g.limit) {
                return false;
            }
            // blocks of t converging to the same point from the same side with
            // commensurable ratios; the tail must eventually live in them
            let mut period = 1u64;
            let mut same: Vec<Block> = Vec::new();
            for c in &t.blocks {
                if let Block::Geo(h) = c {
                    if h.limit == g.limit && h.orientation() == g.orientation() {
                        if let Some((d, _)) = ratio_period(&g.ratio, &h.ratio) {
                            period = period.lcm(&d.max(1));
                            same.push(c.clone());
                        }
                    }
                }
            }
            if same.is_empty() {
                return false;
            }
            let core = BlockSet { points: Vec::new(), blocks: same };
            let mut run = 0u64;
            for k in 0..SUBSET_WINDOW {
                let c = g.copy(k);
                if c.is_subset(&core) {
                    run += 1;
                    if run >= period {
                        return true;
                    }
                } else {
                    run = 0;
                    if !c.is_subset(t) {
                        return false;
                    }
                }
            }
            false
        }
    }
}

fn normalize(mut points: Vec<Rational>, mut blocks: Vec<Block>) -> BlockSet {
    loop {
        blocks.sort();
        blocks.dedup();
        // blocks structurally inside another block
        let mut keep = vec![true; blocks.len()];
        for i in 0..blocks.len() {
            for j in 0..blocks.len() {
                if i != j && keep[j] && blocks[i].within(&blocks[j]) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut it = keep.iter();
        blocks.retain(|_| *it.next().unwrap());

        points.sort();
        points.dedup();
        // a point at a rational limit switches that limit on
        points.retain(|p| {
            for b in blocks.iter_mut() {
                if let Block::Geo(g) = b {
                    if g.limit == *p {
                        g.limit_included = true;
                        return false;
                    }
                }
            }
            !blocks.iter().any(|b| b.contains(p))
        });

        // pull preceding copies that already belong to the set into the block
        let mut changed = false;
        let mut idx = 0;
        while idx < blocks.len() {
            match &blocks[idx] {
                Block::Geo(g) => {
                    let inv = g.psi_inv();
                    let prev = g.template.affine(&inv);
                    let pts_ok = prev.points.iter().all(|p| points.binary_search(p).is_ok());
                    let blk_ok = prev
                        .blocks
                        .iter()
                        .all(|pb| blocks.iter().enumerate().any(|(j, c)| j != idx && c == pb));
                    if pts_ok && blk_ok && !prev.is_empty() {
                        points.retain(|p| prev.points.binary_search(p).is_err());
                        let mut g2 = (**g).clone();
                        g2.start = inv.apply(&g2.start);
                        g2.template = prev.clone();
                        blocks[idx] = Block::Geo(Box::new(g2));
                        let mut j = 0;
                        blocks.retain(|c| {
                            let drop = j != idx && prev.blocks.contains(c);
                            j += 1;
                            !drop
                        });
                        changed = true;
                        idx = 0;
                        continue;
                    }
                }
                Block::Pell(p) => {
                    if p.first > 0 {
                        let e = p.element(p.first - 1);
                        if let Ok(pos) = points.binary_search(&e) {
                            points.remove(pos);
                            if let Block::Pell(p) = &mut blocks[idx] {
                                p.first -= 1;
                            }
                            changed = true;
                            continue;
                        }
                    }
                }
            }
            idx += 1;
        }
        if !changed {
            blocks.sort();
            return BlockSet { points, blocks };
        }
    }
}

// ---------------------------------------------------------------- text form

impl fmt::Display for BlockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for p in &self.points {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{p}")?;
        }
        for b in &self.blocks {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Geo(g) => write!(
                f,
                "geo({}, {}, {}, {}, {})",
                g.limit,
                g.ratio,
                g.start,
                if g.limit_included { "closed" } else { "open" },
                g.template
            ),
            Block::Pell(p) => write!(f, "pell({}, {}, {})", p.offset, p.scale, p.first),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn err(&self, what: &str) -> ParseError {
        ParseError::new(format!("{what} at byte {}", self.i))
    }

    fn eat(&mut self, c: u8) -> Result<(), ParseError> {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn word(&mut self) -> &str {
        self.ws();
        let st = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || b"-/".contains(&self.s[self.i])) {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[st..self.i]).unwrap_or("")
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let w = self.word().to_string();
        parse_rational(&w)
    }

    fn set(&mut self) -> Result<BlockSet, ParseError> {
        self.eat(b'{')?;
        let mut points = Vec::new();
        let mut blocks = Vec::new();
        if self.peek() == Some(b'}') {
            self.i += 1;
            return Ok(BlockSet::empty());
        }
        loop {
            let save = self.i;
            let w = self.word().to_string();
            match w.as_str() {
                "geo" => {
                    self.eat(b'(')?;
                    let limit = self.rational()?;
                    self.eat(b',')?;
                    let ratio = self.rational()?;
                    self.eat(b',')?;
                    let start = self.rational()?;
                    self.eat(b',')?;
                    let incl = match self.word() {
                        "closed" => true,
                        "open" => false,
                        _ => return Err(self.err("expected closed/open")),
                    };
                    self.eat(b',')?;
                    let template = self.set()?;
                    self.eat(b')')?;
                    let g = GeoBlock::new(limit, ratio, start, template, incl)
                        .map_err(|e| ParseError::new(e.to_string()))?;
                    blocks.push(Block::Geo(Box::new(g)));
                }
                "pell" => {
                    self.eat(b'(')?;
                    let offset = self.rational()?;
                    self.eat(b',')?;
                    let scale = self.rational()?;
                    self.eat(b',')?;
                    let first: u64 = self.word().parse().map_err(|_| self.err("expected index"))?;
                    self.eat(b')')?;
                    blocks.push(Block::Pell(PellBlock::new(offset, scale, first).map_err(|e| ParseError::new(e.to_string()))?));
                }
                _ => {
                    self.i = save;
                    points.push(self.rational()?);
                }
            }
            match self.peek() {
                Some(b',') => self.i += 1,
                Some(b'}') => {
                    self.i += 1;
                    break;
                }
                _ => return Err(self.err("expected ',' or '}'")),
            }
        }
        Ok(normalize(points, blocks))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn asc(start: Rational, limit: Rational, ratio: Rational, incl: bool) -> BlockSet {
        BlockSet::geo(GeoBlock::flat(start, limit, ratio, incl).unwrap())
    }

    #[test]
    fn pell_sequence() {
        assert_eq!(pell_ratio(0), int(1));
        assert_eq!(pell_ratio(1), rat(7, 5));
        assert_eq!(pell_ratio(2), rat(41, 29));
        assert_eq!(pell_index(&rat(41, 29)), Some(2));
        assert_eq!(pell_index(&rat(3, 2)), None);
        for k in 0..20 {
            let r = pell_ratio(k);
            assert_eq!(pell_index(&r), Some(k));
            assert!(QuadExt::new(int(0), int(1)).cmp_rational(&r) == Ordering::Greater);
        }
    }

    #[test]
    fn flat_membership() {
        let b = asc(int(0), int(1), rat(1, 2), false);
        assert!(b.contains(&int(0)));
        assert!(b.contains(&rat(1, 2)));
        assert!(b.contains(&rat(1023, 1024)));
        assert!(!b.contains(&rat(1, 3)));
        assert!(!b.contains(&int(1)));
        assert!(!b.contains(&rat(3, 2)));
        let d = BlockSet::geo(GeoBlock::flat(int(1), int(0), rat(1, 3), true).unwrap());
        assert!(d.contains(&rat(1, 27)));
        assert!(d.contains(&int(0)));
        assert!(!d.is_well_ordered());
    }

    #[test]
    fn image_splits_head() {
        // breakpoint at 3/4: identity below, slope 1/2 above
        let f = PLMap::from_graph(&[(rat(3, 4), rat(3, 4))], int(1), rat(1, 2)).unwrap();
        let b = asc(int(0), int(1), rat(1, 2), false);
        let img = b.image(&f);
        assert_eq!(img.to_string(), "{0, 1/2, geo(7/8, 1/2, 3/4, open, {3/4})}");
        for k in 0..20u32 {
            let x = int(1) - pow(&rat(1, 2), k as u64);
            assert!(img.contains(&f.apply(&x)), "element {k}");
        }
        assert_eq!(img.cb_rank(), 2);
        let g = match &b.blocks()[0] {
            Block::Geo(g) => g.clone(),
            _ => unreachable!(),
        };
        let i = g.tail_piece(&f);
        assert_eq!(g.tail_start(&f, i), 2);
    }

    #[test]
    fn ranks_and_predicates() {
        assert_eq!(BlockSet::empty().cb_rank(), 0);
        assert_eq!(BlockSet::from_points([int(0), int(5)]).cb_rank(), 1);
        let b = asc(int(0), int(1), rat(1, 2), true);
        assert_eq!(b.cb_rank(), 2);
        assert!(b.is_well_ordered());
        assert!(!b.is_bounded_below_every());
        let p = BlockSet::from_block(Block::Pell(PellBlock::new(int(0), int(1), 0).unwrap()));
        assert!(p.is_bounded_below_every());
        assert!(p.is_well_ordered());
        assert!(!p.is_closed());
        assert_eq!(p.cb_rank(), 1);
    }

    #[test]
    fn nested_rank() {
        // copies of a convergent sequence accumulating at 1
        let inner = asc(int(0), rat(1, 4), rat(1, 2), true);
        let g = GeoBlock::new(int(1), rat(1, 2), int(0), inner, true).unwrap();
        let s = BlockSet::geo(g);
        assert_eq!(s.cb_rank(), 3);
        assert!(s.contains(&rat(1, 4)));
        assert!(s.contains(&(rat(1, 2) + rat(1, 8))));
        assert!(!s.contains(&rat(3, 8)));
        assert!(s.is_closed());
        assert_eq!(BlockSet::parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn text_roundtrip() {
        let s = asc(int(0), int(1), rat(1, 2), false).union(&BlockSet::from_points([int(3), rat(-1, 2)]));
        let t = s.to_string();
        assert_eq!(t, "{-1/2, 3, geo(1, 1/2, 0, open, {0})}");
        assert_eq!(BlockSet::parse(&t).unwrap(), s);
        assert_eq!(BlockSet::parse("{}").unwrap(), BlockSet::empty());
        let p = BlockSet::from_block(Block::Pell(PellBlock::new(int(1), int(-1), 2).unwrap()));
        assert_eq!(BlockSet::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn canonical_backward_extension() {
        let tail = asc(rat(1, 2), int(1), rat(1, 2), false);
        let whole = tail.union(&BlockSet::from_points([int(0)]));
        assert_eq!(whole, asc(int(0), int(1), rat(1, 2), false));
        let with_limit = whole.union(&BlockSet::from_points([int(1)]));
        assert_eq!(with_limit, asc(int(0), int(1), rat(1, 2), true));
    }

    #[test]
    fn subset_commensurable() {
        let t = asc(int(0), int(1), rat(1, 2), false);
        let s = asc(int(0), int(1), rat(1, 4), false);
        assert!(s.is_subset(&t));
        assert!(!t.is_subset(&s));
        let u = asc(int(0), int(1), rat(1, 3), false);
        assert!(!u.is_subset(&t));
        assert_eq!(ratio_period(&rat(1, 4), &rat(1, 8)), Some((3, 2)));
        assert_eq!(ratio_period(&rat(1, 2), &rat(1, 3)), None);
    }

    #[test]
    fn sup_and_min() {
        let b = asc(int(0), int(1), rat(1, 2), false);
        assert_eq!(b.sup_below(&q(&rat(2, 3))), Some(q(&rat(1, 2))));
        assert_eq!(b.sup_below(&q(&int(5))), Some(q(&int(1))));
        assert_eq!(b.min_above(Some(&rat(2, 3))), Some(rat(3, 4)));
        assert_eq!(b.min_elem(), Some(int(0)));
        assert!(b.accumulates_from_left(&q(&int(1))));
        assert!(!b.accumulates_from_left(&q(&rat(1, 2))));
    }
}

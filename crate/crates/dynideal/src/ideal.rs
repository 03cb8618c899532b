//! The dynamical ideal interface and its concrete instances.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::blocks::{Block, BlockSet, GeoBlock, PellBlock};
use crate::error::ParseError;
use crate::intervals::{Interval, IntervalUnionSet};
use crate::perm::{FinitePermutation, GridElement};
use crate::plmap::PLMap;
use crate::quadext::QuadExt;
use crate::rational::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("unknown instance {0:?}")]
    UnknownInstance(String),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A group acting on a set together with an invariant ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Instance {
    /// PL maps of Q; bounded interval unions.
    BoundedQ,
    /// PL maps of Q; well-ordered block sets.
    WellOrderedQ,
    /// PL maps of Q; well-ordered block sets bounded below every rational.
    WellOrderedBoundedBelowQ,
    /// PL maps fixing 0 and 1; closed block sets inside `[0,1]`.
    CountableClosedQ,
    /// `Sym(n)`; subsets of size `< k`.
    FiniteSym { n: usize, k: usize },
    /// `(Z/modulus)^m` on `m` columns of `modulus` cells; sets meeting
    /// fewer than `m` columns.
    AbelianGrid { m: usize, modulus: usize },
}

/// An element of the underlying ideal's ambient power set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Intervals(IntervalUnionSet),
    Blocks(BlockSet),
    Points(BTreeSet<usize>),
    Cells(BTreeSet<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElem {
    PL(PLMap),
    Perm(FinitePermutation),
    Grid(GridElement),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Intervals(s) => write!(f, "{s}"),
            Elem::Blocks(s) => write!(f, "{s}"),
            Elem::Points(s) => {
                let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", v.join(", "))
            }
            Elem::Cells(s) => {
                let v: Vec<String> = s.iter().map(|(c, z)| format!("({c},{z})")).collect();
                write!(f, "{{{}}}", v.join(", "))
            }
        }
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElem::PL(g) => write!(f, "{g}"),
            GroupElem::Perm(g) => write!(f, "{g}"),
            GroupElem::Grid(g) => write!(f, "{g}"),
        }
    }
}

fn parse_usize_list(body: &str) -> Result<Vec<usize>, ParseError> {
    body.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| ParseError::new(format!("bad index {t:?}"))))
        .collect()
}

fn braces(s: &str) -> Result<&str, ParseError> {
    s.trim()
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| ParseError::new("expected {..}"))
}

impl Instance {
    pub fn name(&self) -> &'static str {
        match self {
            Instance::BoundedQ => "BoundedQ",
            Instance::WellOrderedQ => "WellOrderedQ",
            Instance::WellOrderedBoundedBelowQ => "WellOrderedBoundedBelowQ",
            Instance::CountableClosedQ => "CountableClosedQ",
            Instance::FiniteSym { .. } => "FiniteSym",
            Instance::AbelianGrid { .. } => "AbelianGrid",
        }
    }

    /// Build from a catalog name and the parameters `N, k` or `m, j`
    /// (the grid modulus is `2j`).
    pub fn from_name(name: &str, p: &[(String, usize)]) -> Result<Instance, IdealError> {
        let get = |key: &str, default: usize| p.iter().find(|(k, _)| k == key).map_or(default, |(_, v)| *v);
        let inst = match name {
            "BoundedQ" => Instance::BoundedQ,
            "WellOrderedQ" => Instance::WellOrderedQ,
            "WellOrderedBoundedBelowQ" => Instance::WellOrderedBoundedBelowQ,
            "CountableClosedQ" => Instance::CountableClosedQ,
            "FiniteSym" => Instance::FiniteSym { n: get("N", 8), k: get("k", 4) },
            "AbelianGrid" => Instance::AbelianGrid { m: get("m", 3), modulus: 2 * get("j", 2) },
            other => return Err(IdealError::UnknownInstance(other.to_string())),
        };
        match inst {
            Instance::FiniteSym { n, k } if n == 0 || k == 0 || n > 64 => {
                Err(IdealError::BadParameter(format!("FiniteSym({n},{k})")))
            }
            Instance::AbelianGrid { m, modulus } if m == 0 || modulus == 0 => {
                Err(IdealError::BadParameter(format!("AbelianGrid({m},{modulus})")))
            }
            i => Ok(i),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Instance::FiniteSym { n, k } => format!("FiniteSym({n},{k})"),
            Instance::AbelianGrid { m, modulus } => format!("AbelianGrid({m},{modulus})"),
            i => i.name().to_string(),
        }
    }

    pub fn is_pl(&self) -> bool {
        matches!(
            self,
            Instance::BoundedQ | Instance::WellOrderedQ | Instance::WellOrderedBoundedBelowQ | Instance::CountableClosedQ
        )
    }

    fn mismatch(&self, what: &str) -> IdealError {
        IdealError::KindMismatch(format!("{what} does not belong to {}", self.label()))
    }

    pub fn empty(&self) -> Elem {
        match self {
            Instance::BoundedQ => Elem::Intervals(IntervalUnionSet::empty()),
            Instance::FiniteSym { .. } => Elem::Points(BTreeSet::new()),
            Instance::AbelianGrid { .. } => Elem::Cells(BTreeSet::new()),
            _ => Elem::Blocks(BlockSet::empty()),
        }
    }

    pub fn identity(&self) -> GroupElem {
        match self {
            Instance::FiniteSym { n, .. } => GroupElem::Perm(FinitePermutation::identity(*n)),
            Instance::AbelianGrid { m, modulus } => GroupElem::Grid(GridElement::zero(*m, *modulus)),
            _ => GroupElem::PL(PLMap::identity()),
        }
    }

    fn check_elem(&self, s: &Elem) -> Result<(), IdealError> {
        let ok = match (self, s) {
            (Instance::BoundedQ, Elem::Intervals(_)) => true,
            (Instance::FiniteSym { n, .. }, Elem::Points(p)) => p.iter().all(|x| x < n),
            (Instance::AbelianGrid { m, modulus }, Elem::Cells(c)) => c.iter().all(|(i, z)| i < m && z < modulus),
            (i, Elem::Blocks(_)) => i.is_pl() && *i != Instance::BoundedQ,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch("set"))
        }
    }

    pub fn is_group_member(&self, g: &GroupElem) -> bool {
        match (self, g) {
            (Instance::CountableClosedQ, GroupElem::PL(f)) => {
                f.apply(&Rational::zero()).is_zero() && f.apply(&Rational::one()).is_one()
            }
            (i, GroupElem::PL(_)) => i.is_pl(),
            (Instance::FiniteSym { n, .. }, GroupElem::Perm(p)) => p.degree() == *n,
            (Instance::AbelianGrid { m, modulus }, GroupElem::Grid(g)) => g.columns() == *m && g.modulus() == *modulus,
            _ => false,
        }
    }

    fn check_group(&self, g: &GroupElem) -> Result<(), IdealError> {
        if self.is_group_member(g) {
            Ok(())
        } else {
            Err(self.mismatch("group element"))
        }
    }

    /// Ideal membership.
    pub fn contains(&self, s: &Elem) -> Result<bool, IdealError> {
        self.check_elem(s)?;
        Ok(match (self, s) {
            (Instance::BoundedQ, Elem::Intervals(s)) => s.is_bounded(),
            (Instance::WellOrderedQ, Elem::Blocks(s)) => s.is_well_ordered(),
            (Instance::WellOrderedBoundedBelowQ, Elem::Blocks(s)) => s.is_well_ordered() && s.is_bounded_below_every(),
            (Instance::CountableClosedQ, Elem::Blocks(s)) => {
                s.is_closed()
                    && s.inf().is_none_or(|x| x >= QuadExt::rational(Rational::zero()))
                    && s.sup().is_none_or(|x| x <= QuadExt::rational(Rational::one()))
            }
            (Instance::FiniteSym { k, .. }, Elem::Points(p)) => p.len() < *k,
            (Instance::AbelianGrid { m, .. }, Elem::Cells(c)) => columns_of(c).len() < *m,
            _ => unreachable!("checked above"),
        })
    }

    pub fn act(&self, g: &GroupElem, s: &Elem) -> Result<Elem, IdealError> {
        self.check_elem(s)?;
        self.check_group(g)?;
        Ok(match (g, s) {
            (GroupElem::PL(f), Elem::Intervals(s)) => Elem::Intervals(s.image(f)),
            (GroupElem::PL(f), Elem::Blocks(s)) => Elem::Blocks(s.image(f)),
            (GroupElem::Perm(p), Elem::Points(s)) => Elem::Points(p.image_set(s)),
            (GroupElem::Grid(v), Elem::Cells(s)) => Elem::Cells(s.iter().map(|c| v.apply(*c)).collect()),
            _ => return Err(self.mismatch("group element")),
        })
    }

    pub fn in_pstab(&self, g: &GroupElem, s: &Elem) -> Result<bool, IdealError> {
        self.check_elem(s)?;
        self.check_group(g)?;
        Ok(match (g, s) {
            (GroupElem::PL(f), Elem::Intervals(s)) => s.fixed_pointwise_by(f),
            (GroupElem::PL(f), Elem::Blocks(s)) => s.fixed_pointwise_by(f),
            (GroupElem::Perm(p), Elem::Points(s)) => p.fixes_pointwise(s),
            (GroupElem::Grid(v), Elem::Cells(s)) => s.iter().all(|c| v.apply(*c) == *c),
            _ => return Err(self.mismatch("group element")),
        })
    }

    /// `g ∘ h`.
    pub fn compose(&self, g: &GroupElem, h: &GroupElem) -> Result<GroupElem, IdealError> {
        Ok(match (g, h) {
            (GroupElem::PL(a), GroupElem::PL(b)) => GroupElem::PL(a.compose(b)),
            (GroupElem::Perm(a), GroupElem::Perm(b)) if a.degree() == b.degree() => GroupElem::Perm(a.compose(b)),
            (GroupElem::Grid(a), GroupElem::Grid(b)) if a.columns() == b.columns() => GroupElem::Grid(a.add(b)),
            _ => return Err(self.mismatch("group element")),
        })
    }

    pub fn inverse(&self, g: &GroupElem) -> GroupElem {
        match g {
            GroupElem::PL(a) => GroupElem::PL(a.inverse()),
            GroupElem::Perm(a) => GroupElem::Perm(a.inverse()),
            GroupElem::Grid(a) => GroupElem::Grid(a.neg()),
        }
    }

    pub fn is_identity(&self, g: &GroupElem) -> bool {
        match g {
            GroupElem::PL(a) => a.is_identity(),
            GroupElem::Perm(a) => a.is_identity(),
            GroupElem::Grid(a) => a.is_zero(),
        }
    }

    pub fn union(&self, a: &Elem, b: &Elem) -> Result<Elem, IdealError> {
        Ok(match (a, b) {
            (Elem::Intervals(x), Elem::Intervals(y)) => Elem::Intervals(x.union(y)),
            (Elem::Blocks(x), Elem::Blocks(y)) => Elem::Blocks(x.union(y)),
            (Elem::Points(x), Elem::Points(y)) => Elem::Points(x.union(y).copied().collect()),
            (Elem::Cells(x), Elem::Cells(y)) => Elem::Cells(x.union(y).copied().collect()),
            _ => return Err(self.mismatch("set")),
        })
    }

    /// Inclusion (decided on the representation for block sets).
    pub fn is_subset(&self, a: &Elem, b: &Elem) -> Result<bool, IdealError> {
        Ok(match (a, b) {
            (Elem::Intervals(x), Elem::Intervals(y)) => x.is_subset(y),
            (Elem::Blocks(x), Elem::Blocks(y)) => x.is_subset(y),
            (Elem::Points(x), Elem::Points(y)) => x.is_subset(y),
            (Elem::Cells(x), Elem::Cells(y)) => x.is_subset(y),
            _ => return Err(self.mismatch("set")),
        })
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem, IdealError> {
        let e = match self {
            Instance::BoundedQ => Elem::Intervals(IntervalUnionSet::parse(s)?),
            Instance::FiniteSym { .. } => Elem::Points(parse_usize_list(braces(s)?)?.into_iter().collect()),
            Instance::AbelianGrid { .. } => {
                let body = braces(s)?;
                let mut cells = BTreeSet::new();
                for part in body.split(')').map(str::trim).filter(|t| !t.is_empty()) {
                    let part = part.trim_start_matches(',').trim().trim_start_matches('(');
                    let v = parse_usize_list(part)?;
                    let [c, z] = v[..] else {
                        return Err(ParseError::new("cells are (column,z)").into());
                    };
                    cells.insert((c, z));
                }
                Elem::Cells(cells)
            }
            _ => Elem::Blocks(BlockSet::parse(s)?),
        };
        self.check_elem(&e)?;
        if e.to_string() != s.trim() {
            return Err(ParseError::new("set text is not canonical").into());
        }
        Ok(e)
    }

    pub fn parse_group(&self, s: &str) -> Result<GroupElem, IdealError> {
        let g = match self {
            Instance::FiniteSym { .. } => GroupElem::Perm(FinitePermutation::parse(s)?),
            Instance::AbelianGrid { .. } => GroupElem::Grid(GridElement::parse(s)?),
            _ => GroupElem::PL(PLMap::parse(s)?),
        };
        self.check_group(&g)?;
        Ok(g)
    }

    /// Seeded ideal element; the size grows with `size_hint`.
    pub fn sample_ideal(&self, seed: u64, size_hint: usize) -> Elem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_ideal_with(&mut rng, size_hint)
    }

    pub fn sample_ideal_with(&self, rng: &mut ChaCha8Rng, size_hint: usize) -> Elem {
        let count = sized(rng, size_hint);
        match self {
            Instance::BoundedQ => Elem::Intervals(sample_bounded(rng, count)),
            Instance::WellOrderedQ => Elem::Blocks(sample_well_ordered(rng, count, false)),
            Instance::WellOrderedBoundedBelowQ => Elem::Blocks(sample_well_ordered(rng, count, true)),
            Instance::CountableClosedQ => Elem::Blocks(sample_closed(rng, count, 3)),
            Instance::FiniteSym { n, k } => {
                let size = count.min(k.saturating_sub(1)).min(*n);
                let mut pts: Vec<usize> = (0..*n).collect();
                pts.shuffle(rng);
                Elem::Points(pts.into_iter().take(size).collect())
            }
            Instance::AbelianGrid { m, modulus } => {
                let ncols = rng.gen_range(0..*m);
                let mut cols: Vec<usize> = (0..*m).collect();
                cols.shuffle(rng);
                let mut cells = BTreeSet::new();
                for &c in cols.iter().take(ncols) {
                    for z in 0..*modulus {
                        if rng.gen_bool(0.5) {
                            cells.insert((c, z));
                        }
                    }
                }
                Elem::Cells(cells)
            }
        }
    }

    /// Seeded group element with about `complexity` breakpoints or moved points.
    pub fn sample_group(&self, seed: u64, complexity: usize) -> GroupElem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_group_with(&mut rng, complexity)
    }

    pub fn sample_group_with(&self, rng: &mut ChaCha8Rng, complexity: usize) -> GroupElem {
        match self {
            Instance::CountableClosedQ => {
                let fixed = IntervalUnionSet::from_intervals(vec![
                    Interval { lo: crate::Endpoint::NegInf, lo_closed: false, hi: crate::Endpoint::Fin(int(0)), hi_closed: true },
                    Interval { lo: crate::Endpoint::Fin(int(1)), lo_closed: true, hi: crate::Endpoint::PosInf, hi_closed: false },
                ]);
                GroupElem::PL(pl_fixing(rng, &fixed, complexity.max(1)))
            }
            Instance::FiniteSym { n, .. } => {
                let mut map: Vec<usize> = (0..*n).collect();
                map.shuffle(rng);
                GroupElem::Perm(FinitePermutation::from_images(map).expect("shuffle is a permutation"))
            }
            Instance::AbelianGrid { m, modulus } => {
                GroupElem::Grid(GridElement::new(*modulus, (0..*m).map(|_| rng.gen_range(0..*modulus)).collect()))
            }
            _ => GroupElem::PL(sample_pl(rng, complexity)),
        }
    }

    /// Seeded element of the pointwise stabilizer of `s`.
    pub fn sample_pstab_with(&self, rng: &mut ChaCha8Rng, s: &Elem, complexity: usize) -> Result<GroupElem, IdealError> {
        self.check_elem(s)?;
        Ok(match (self, s) {
            (Instance::FiniteSym { n, .. }, Elem::Points(p)) => {
                let free: Vec<usize> = (0..*n).filter(|x| !p.contains(x)).collect();
                let mut shuffled = free.clone();
                shuffled.shuffle(rng);
                let mut map: Vec<usize> = (0..*n).collect();
                for (x, y) in free.iter().zip(&shuffled) {
                    map[*x] = *y;
                }
                GroupElem::Perm(FinitePermutation::from_images(map).expect("permutation of the complement"))
            }
            (Instance::AbelianGrid { m, modulus }, Elem::Cells(c)) => {
                let used = columns_of(c);
                let shift = (0..*m).map(|i| if used.contains(&i) { 0 } else { rng.gen_range(0..*modulus) }).collect();
                GroupElem::Grid(GridElement::new(*modulus, shift))
            }
            _ => {
                let mut fixed = match s {
                    Elem::Intervals(x) => x.closure(),
                    Elem::Blocks(b) => match (b.inf(), b.sup()) {
                        (Some(lo), Some(hi)) => IntervalUnionSet::closed(
                            crate::quadext::rational_bounds(&lo, 2).0,
                            crate::quadext::rational_bounds(&hi, 2).1,
                        ),
                        _ => IntervalUnionSet::empty(),
                    },
                    _ => unreachable!("checked above"),
                };
                if *self == Instance::CountableClosedQ {
                    fixed = fixed.union(&IntervalUnionSet::from_intervals(vec![
                        Interval { lo: crate::Endpoint::NegInf, lo_closed: false, hi: crate::Endpoint::Fin(int(0)), hi_closed: true },
                        Interval { lo: crate::Endpoint::Fin(int(1)), lo_closed: true, hi: crate::Endpoint::PosInf, hi_closed: false },
                    ]));
                }
                if fixed.is_empty() {
                    GroupElem::PL(sample_pl(rng, complexity))
                } else {
                    GroupElem::PL(pl_fixing(rng, &fixed, complexity))
                }
            }
        })
    }
}

/// The catalog with default parameters.
pub fn instance_catalog() -> Vec<Instance> {
    vec![
        Instance::BoundedQ,
        Instance::WellOrderedQ,
        Instance::WellOrderedBoundedBelowQ,
        Instance::CountableClosedQ,
        Instance::FiniteSym { n: 8, k: 4 },
        Instance::AbelianGrid { m: 3, modulus: 4 },
    ]
}

pub fn columns_of(c: &BTreeSet<(usize, usize)>) -> BTreeSet<usize> {
    c.iter().map(|(i, _)| *i).collect()
}

fn sized(rng: &mut ChaCha8Rng, hint: usize) -> usize {
    // geometric around the hint: each extra item with probability hint/(hint+1)
    let p = hint as f64 / (hint as f64 + 1.0);
    let mut n = 0;
    while n < 8 * hint.max(1) && rng.gen_bool(p) {
        n += 1;
    }
    n
}

/// Uniform rational `p/q` in `[lo, hi]` with `q <= den`.
pub fn rand_rational(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, den: i64) -> Rational {
    let q = rng.gen_range(1..=den);
    let qq = Rational::from_integer(q.into());
    let a = (lo * &qq).ceil().to_integer();
    let b = (hi * &qq).floor().to_integer();
    if a > b {
        return (lo + hi) / int(2);
    }
    let span: i64 = (&b - &a).try_into().unwrap_or(i64::MAX);
    let p = &a + num_bigint::BigInt::from(rng.gen_range(0..=span));
    Rational::new(p, q.into())
}

fn sample_bounded(rng: &mut ChaCha8Rng, count: usize) -> IntervalUnionSet {
    let (lo, hi) = (int(-10), int(10));
    let items = (0..count)
        .map(|_| {
            let x = rand_rational(rng, &lo, &hi, 4);
            if rng.gen_bool(0.5) {
                Interval::point(x)
            } else {
                let w = rand_rational(rng, &rat(1, 4), &int(3), 4);
                Interval {
                    lo: crate::Endpoint::Fin(x.clone()),
                    lo_closed: rng.gen_bool(0.5),
                    hi: crate::Endpoint::Fin(x + w),
                    hi_closed: rng.gen_bool(0.5),
                }
            }
        })
        .collect();
    IntervalUnionSet::from_intervals(items)
}

const RATIOS: [(i64, i64); 5] = [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4)];

fn rand_ratio(rng: &mut ChaCha8Rng) -> Rational {
    let (p, q) = RATIOS[rng.gen_range(0..RATIOS.len())];
    rat(p, q)
}

/// Block inside `[lo, hi]`, ascending or descending, with nested templates
/// of the same orientation when `depth > 0`.
fn oriented_block(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, depth: usize, closed: bool, up: bool) -> GeoBlock {
    let w = hi - lo;
    let u = rand_rational(rng, &int(0), &rat(1, 4), 8);
    let v = rand_rational(rng, &rat(1, 2), &rat(7, 8), 8);
    let (start, limit) = if up { (lo + &w * u, lo + &w * v) } else { (hi - &w * u, hi - &w * v) };
    let ratio = rand_ratio(rng);
    let end = &limit + (&start - &limit) * &ratio;
    let template = if depth > 0 && rng.gen_bool(0.5) {
        let (a, b) = if up { (start.clone(), end) } else { (end, start.clone()) };
        // keep the inner block off the open end of the fundamental domain
        let b2 = &a + (&b - &a) * rat(7, 8);
        let a2 = &b - (&b - &a) * rat(7, 8);
        let inner = if up {
            oriented_block(rng, &a, &b2, depth - 1, closed, up)
        } else {
            oriented_block(rng, &a2, &b, depth - 1, closed, up)
        };
        BlockSet::geo(inner).union(&BlockSet::from_points([start.clone()]))
    } else {
        BlockSet::from_points([start.clone()])
    };
    let included = closed || rng.gen_bool(0.5);
    GeoBlock::new(limit, ratio, start, template, included).expect("template inside its fundamental domain")
}

fn ascending_block(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, depth: usize, closed: bool) -> GeoBlock {
    oriented_block(rng, lo, hi, depth, closed, true)
}

fn sample_well_ordered(rng: &mut ChaCha8Rng, count: usize, pell_only: bool) -> BlockSet {
    let (lo, hi) = (int(-10), int(10));
    let mut out = BlockSet::empty();
    for _ in 0..count {
        let roll = rng.gen_range(0..3);
        let piece = if roll == 0 {
            BlockSet::from_points([rand_rational(rng, &lo, &hi, 4)])
        } else if roll == 1 || pell_only {
            let offset = rand_rational(rng, &int(-12), &int(8), 4);
            let scale = rand_rational(rng, &rat(1, 4), &int(2), 4);
            let first = rng.gen_range(0..3);
            BlockSet::from_block(Block::Pell(PellBlock::new(offset, scale, first).expect("nonzero scale")))
        } else {
            let a = rand_rational(rng, &lo, &hi, 4);
            let b = &a + rand_rational(rng, &rat(1, 2), &int(4), 4);
            BlockSet::geo(ascending_block(rng, &a, &b, 1, false))
        };
        out = out.union(&piece);
    }
    out
}

/// Closed countable subset of `[0,1]` built from points and blocks with
/// limits included, nested up to `depth`.
pub fn sample_closed(rng: &mut ChaCha8Rng, count: usize, depth: usize) -> BlockSet {
    let mut out = BlockSet::empty();
    for _ in 0..count {
        let piece = if rng.gen_bool(0.4) {
            BlockSet::from_points([rand_rational(rng, &int(0), &int(1), 16)])
        } else {
            let a = rand_rational(rng, &int(0), &rat(3, 4), 16);
            let b = &a + rand_rational(rng, &rat(1, 16), &rat(1, 4), 16);
            let d = rng.gen_range(0..=depth);
            let up = rng.gen_bool(0.5);
            BlockSet::geo(oriented_block(rng, &a, &b, d, true, up))
        };
        out = out.union(&piece);
    }
    out
}

/// Random PL bijection with `complexity` interior graph points.
pub fn sample_pl(rng: &mut ChaCha8Rng, complexity: usize) -> PLMap {
    let (lo, hi) = (int(-10), int(10));
    let mut xs: Vec<Rational> = (0..complexity).map(|_| rand_rational(rng, &lo, &hi, 4)).collect();
    let mut ys: Vec<Rational> = (0..complexity).map(|_| rand_rational(rng, &lo, &hi, 4)).collect();
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    let n = xs.len().min(ys.len());
    let graph: Vec<(Rational, Rational)> = xs.into_iter().zip(ys).take(n).collect();
    if graph.is_empty() {
        return PLMap::identity();
    }
    let slopes = [rat(1, 2), int(1), int(2)];
    let l = slopes[rng.gen_range(0..3)].clone();
    let r = slopes[rng.gen_range(0..3)].clone();
    PLMap::from_graph(&graph, l, r).expect("sorted graph")
}

/// Random PL bijection that is the identity on the closed set `fixed`,
/// moving at most one pair of points inside each complementary gap.
pub fn pl_fixing(rng: &mut ChaCha8Rng, fixed: &IntervalUnionSet, complexity: usize) -> PLMap {
    let mut graph: Vec<(Rational, Rational)> = Vec::new();
    for c in fixed.components() {
        for e in [&c.lo, &c.hi] {
            if let Some(p) = e.finite() {
                graph.push((p.clone(), p.clone()));
            }
        }
    }
    let gaps = fixed.complement();
    let mut moves = 0;
    for g in gaps.components() {
        if moves >= complexity || !rng.gen_bool(0.7) {
            continue;
        }
        let (lo, hi) = match (g.lo.finite(), g.hi.finite()) {
            (Some(l), Some(h)) => (l.clone(), h.clone()),
            (Some(l), None) => (l.clone(), l + int(10)),
            (None, Some(h)) => (h - int(10), h.clone()),
            (None, None) => (int(-10), int(10)),
        };
        let x = rand_rational(rng, &lo, &hi, 8);
        let y = rand_rational(rng, &lo, &hi, 8);
        if x != lo && x != hi && y != lo && y != hi {
            graph.push((x, y));
            moves += 1;
        }
    }
    graph.sort();
    graph.dedup();
    PLMap::through_points(&graph).expect("moves stay inside their gaps")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_and_thresholds() {
        assert!(instance_catalog().iter().any(|i| i.name() == "BoundedQ"));
        let fs = Instance::FiniteSym { n: 6, k: 3 };
        assert!(fs.contains(&Elem::Points([0, 1].into())).unwrap());
        assert!(!fs.contains(&Elem::Points([0, 1, 2].into())).unwrap());
        let grid = Instance::AbelianGrid { m: 3, modulus: 4 };
        let col: BTreeSet<(usize, usize)> = (0..4).map(|z| (0, z)).collect();
        assert!(grid.contains(&Elem::Cells(col)).unwrap());
        assert!(matches!(Instance::from_name("Nope", &[]), Err(IdealError::UnknownInstance(_))));
    }

    #[test]
    fn actions_and_stabilizers() {
        let fs = Instance::FiniteSym { n: 6, k: 3 };
        let t = GroupElem::Perm(FinitePermutation::transposition(6, 0, 1));
        assert!(!fs.in_pstab(&t, &Elem::Points([0].into())).unwrap());
        let grid = Instance::AbelianGrid { m: 3, modulus: 4 };
        let g = GroupElem::Grid(GridElement::new(4, vec![0, 1, 0]));
        let col1: BTreeSet<(usize, usize)> = (0..4).map(|z| (1, z)).collect();
        assert!(!grid.in_pstab(&g, &Elem::Cells(col1.clone())).unwrap());
        let moved = grid.act(&g, &Elem::Cells([(1, 0)].into())).unwrap();
        assert_eq!(moved, Elem::Cells([(1, 1)].into()));
        assert!(fs.act(&g, &Elem::Points([0].into())).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        for inst in instance_catalog() {
            assert_eq!(inst.sample_ideal(7, 3), inst.sample_ideal(7, 3));
            assert_eq!(inst.sample_group(7, 3), inst.sample_group(7, 3));
        }
    }

    #[test]
    fn samples_lie_in_the_ideal() {
        for inst in instance_catalog() {
            for seed in 0..200 {
                let s = inst.sample_ideal(seed, 3);
                assert!(inst.contains(&s).unwrap(), "{} {s}", inst.label());
                let g = inst.sample_group(seed, 3);
                assert!(inst.is_group_member(&g));
                assert!(inst.contains(&inst.act(&g, &s).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn elem_text_roundtrip() {
        for inst in instance_catalog() {
            for seed in 0..20 {
                let s = inst.sample_ideal(seed, 2);
                assert_eq!(inst.parse_elem(&s.to_string()).unwrap(), s);
                let g = inst.sample_group(seed, 2);
                assert_eq!(inst.parse_group(&g.to_string()).unwrap(), g);
            }
        }
    }
}

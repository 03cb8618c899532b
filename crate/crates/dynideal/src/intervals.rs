//! Finite unions of points and intervals on the rational line.

use std::cmp::Ordering;
use std::fmt;

use crate::error::ParseError;
use crate::plmap::PLMap;
use crate::rational::{parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    NegInf,
    Fin(Rational),
    PosInf,
}

impl Endpoint {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Endpoint::Fin(r) => Some(r),
            _ => None,
        }
    }

    fn map(&self, f: &PLMap) -> Endpoint {
        match self {
            Endpoint::Fin(r) => Endpoint::Fin(f.apply(r)),
            e => e.clone(),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => write!(f, "-inf"),
            Endpoint::PosInf => write!(f, "inf"),
            Endpoint::Fin(r) => write!(f, "{r}"),
        }
    }
}

/// One component; a point is `[p,p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Endpoint,
    pub lo_closed: bool,
    pub hi: Endpoint,
    pub hi_closed: bool,
}

impl Interval {
    pub fn point(p: Rational) -> Self {
        Interval { lo: Endpoint::Fin(p.clone()), lo_closed: true, hi: Endpoint::Fin(p), hi_closed: true }
    }

    pub fn closed(a: Rational, b: Rational) -> Self {
        Interval { lo: Endpoint::Fin(a), lo_closed: true, hi: Endpoint::Fin(b), hi_closed: true }
    }

    pub fn open(a: Rational, b: Rational) -> Self {
        Interval { lo: Endpoint::Fin(a), lo_closed: false, hi: Endpoint::Fin(b), hi_closed: false }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed) || self.lo.finite().is_none(),
            Ordering::Greater => true,
        }
    }

    fn normalized(mut self) -> Self {
        if self.lo.finite().is_none() {
            self.lo_closed = false;
        }
        if self.hi.finite().is_none() {
            self.hi_closed = false;
        }
        self
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            Endpoint::NegInf => true,
            Endpoint::PosInf => false,
            Endpoint::Fin(l) => l < x || (self.lo_closed && l == x),
        };
        let below = match &self.hi {
            Endpoint::PosInf => true,
            Endpoint::NegInf => false,
            Endpoint::Fin(h) => x < h || (self.hi_closed && h == x),
        };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

/// Canonical union: sorted, pairwise disjoint, non-adjacent components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct IntervalUnionSet {
    comps: Vec<Interval>,
}

impl IntervalUnionSet {
    pub fn empty() -> Self {
        IntervalUnionSet { comps: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalUnionSet::from_intervals(vec![Interval {
            lo: Endpoint::NegInf,
            lo_closed: false,
            hi: Endpoint::PosInf,
            hi_closed: false,
        }])
    }

    pub fn point(p: Rational) -> Self {
        IntervalUnionSet { comps: vec![Interval::point(p)] }
    }

    pub fn closed(a: Rational, b: Rational) -> Self {
        IntervalUnionSet::from_intervals(vec![Interval::closed(a, b)])
    }

    pub fn from_points<I: IntoIterator<Item = Rational>>(pts: I) -> Self {
        IntervalUnionSet::from_intervals(pts.into_iter().map(Interval::point).collect())
    }

    pub fn from_intervals(items: Vec<Interval>) -> Self {
        let mut items: Vec<Interval> =
            items.into_iter().map(Interval::normalized).filter(|i| !i.is_empty()).collect();
        items.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(items.len());
        for it in items {
            if let Some(cur) = out.last_mut() {
                let touches = match it.lo.cmp(&cur.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => it.lo_closed || cur.hi_closed,
                    Ordering::Greater => false,
                };
                if touches {
                    match it.hi.cmp(&cur.hi) {
                        Ordering::Greater => {
                            cur.hi = it.hi;
                            cur.hi_closed = it.hi_closed;
                        }
                        Ordering::Equal => cur.hi_closed |= it.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(it);
        }
        IntervalUnionSet { comps: out }
    }

    pub fn components(&self) -> &[Interval] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.comps.iter().any(|c| c.contains(x))
    }

    pub fn is_bounded(&self) -> bool {
        match (self.comps.first(), self.comps.last()) {
            (Some(f), Some(l)) => f.lo.finite().is_some() && l.hi.finite().is_some(),
            _ => true,
        }
    }

    /// Finite infimum and supremum, when bounded and nonempty.
    pub fn hull(&self) -> Option<(Rational, Rational)> {
        let lo = self.comps.first()?.lo.finite()?.clone();
        let hi = self.comps.last()?.hi.finite()?.clone();
        Some((lo, hi))
    }

    /// `true` when the set is a finite set of points.
    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(Interval::is_point)
    }

    /// The points of a finite set, ascending.
    pub fn points(&self) -> Option<Vec<Rational>> {
        self.comps.iter().map(|c| if c.is_point() { c.lo.finite().cloned() } else { None }).collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.comps.clone();
        v.extend(other.comps.iter().cloned());
        IntervalUnionSet::from_intervals(v)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut prev = Endpoint::NegInf;
        let mut prev_closed = true;
        for c in &self.comps {
            out.push(Interval { lo: prev, lo_closed: !prev_closed, hi: c.lo.clone(), hi_closed: !c.lo_closed });
            prev = c.hi.clone();
            prev_closed = c.hi_closed;
        }
        out.push(Interval { lo: prev, lo_closed: !prev_closed, hi: Endpoint::PosInf, hi_closed: false });
        IntervalUnionSet::from_intervals(out)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn closure(&self) -> Self {
        IntervalUnionSet::from_intervals(
            self.comps
                .iter()
                .map(|c| Interval { lo_closed: true, hi_closed: true, ..c.clone() })
                .collect(),
        )
    }

    pub fn image(&self, f: &PLMap) -> Self {
        IntervalUnionSet::from_intervals(
            self.comps
                .iter()
                .map(|c| Interval { lo: c.lo.map(f), lo_closed: c.lo_closed, hi: c.hi.map(f), hi_closed: c.hi_closed })
                .collect(),
        )
    }

    /// Exact pointwise-fixing test: a point must solve the piece equation,
    /// a nondegenerate interval must only meet identity pieces.
    pub fn fixed_pointwise_by(&self, f: &PLMap) -> bool {
        self.comps.iter().all(|c| {
            if c.is_point() {
                let p = c.lo.finite().expect("points are finite");
                return f.apply(p) == *p;
            }
            (0..f.pieces().len()).all(|i| {
                let (lo, hi) = f.piece_domain(i);
                let dlo = lo.map_or(Endpoint::NegInf, |r| Endpoint::Fin(r.clone()));
                let dhi = hi.map_or(Endpoint::PosInf, |r| Endpoint::Fin(r.clone()));
                let overlap = dlo.max(c.lo.clone()) < dhi.min(c.hi.clone());
                !overlap || f.pieces()[i].is_identity()
            })
        })
    }

    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let t = s.trim();
        if t == "empty" {
            return Ok(IntervalUnionSet::empty());
        }
        let mut items = Vec::new();
        for part in t.split(" U ") {
            items.push(parse_interval(part.trim())?);
        }
        let set = IntervalUnionSet::from_intervals(items.clone());
        if set.comps != items {
            return Err(ParseError::new(format!("interval union not canonical: {t:?}")));
        }
        Ok(set)
    }
}

fn parse_endpoint(s: &str) -> Result<Endpoint, ParseError> {
    match s.trim() {
        "-inf" => Ok(Endpoint::NegInf),
        "inf" => Ok(Endpoint::PosInf),
        r => Ok(Endpoint::Fin(parse_rational(r)?)),
    }
}

fn parse_interval(s: &str) -> Result<Interval, ParseError> {
    if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        return Ok(Interval::point(parse_rational(inner)?));
    }
    let bad = || ParseError::new(format!("malformed interval {s:?}"));
    let mut chars = s.chars();
    let lo_closed = match chars.next() {
        Some('[') => true,
        Some('(') => false,
        _ => return Err(bad()),
    };
    let hi_closed = match s.chars().last() {
        Some(']') => true,
        Some(')') => false,
        _ => return Err(bad()),
    };
    let body = &s[1..s.len() - 1];
    let (a, b) = body.split_once(',').ok_or_else(bad)?;
    let it = Interval { lo: parse_endpoint(a)?, lo_closed, hi: parse_endpoint(b)?, hi_closed };
    if it.is_empty() || it.is_point() || it.clone().normalized() != it {
        return Err(bad());
    }
    Ok(it)
}

impl fmt::Display for IntervalUnionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "empty");
        }
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, " U ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn iv(lo: i64, lc: bool, hi: i64, hc: bool) -> Interval {
        Interval { lo: Endpoint::Fin(int(lo)), lo_closed: lc, hi: Endpoint::Fin(int(hi)), hi_closed: hc }
    }

    #[test]
    fn merge_adjacent() {
        let s = IntervalUnionSet::from_intervals(vec![iv(0, true, 1, false), iv(1, true, 2, true)]);
        assert_eq!(s.to_string(), "[0,2]");
        let gap = IntervalUnionSet::from_intervals(vec![iv(0, true, 1, false), iv(1, false, 2, true)]);
        assert_eq!(gap.components().len(), 2);
        let with_point = gap.union(&IntervalUnionSet::point(int(1)));
        assert_eq!(with_point.to_string(), "[0,2]");
    }

    #[test]
    fn boolean_ops() {
        let a = IntervalUnionSet::closed(int(0), int(2));
        let b = IntervalUnionSet::closed(int(1), int(3));
        assert_eq!(a.intersection(&b).to_string(), "[1,2]");
        assert_eq!(a.difference(&b).to_string(), "[0,1)");
        assert_eq!(a.complement().to_string(), "(-inf,0) U (2,inf)");
        assert_eq!(a.complement().complement(), a);
        assert_eq!(IntervalUnionSet::empty().complement(), IntervalUnionSet::full());
        let p = IntervalUnionSet::point(int(5));
        assert!(p.is_subset(&IntervalUnionSet::closed(int(4), int(6))));
        assert!(!p.is_subset(&a));
    }

    #[test]
    fn image_under_doubling() {
        let d = PLMap::through_points(&[(int(0), int(0)), (int(1), int(2))]).unwrap();
        let s = IntervalUnionSet::closed(int(0), int(1));
        assert_eq!(s.image(&d), IntervalUnionSet::closed(int(0), int(2)));
        assert_eq!(s.image(&PLMap::identity()), s);
    }

    #[test]
    fn pointwise_fixing() {
        let t = PLMap::translation(int(1));
        assert!(!IntervalUnionSet::point(int(0)).fixed_pointwise_by(&t));
        let m = PLMap::through_points(&[(int(-10), int(-10)), (int(10), int(10)), (int(11), int(20))]).unwrap();
        assert!(IntervalUnionSet::closed(int(0), int(1)).fixed_pointwise_by(&m));
        assert!(IntervalUnionSet::closed(int(-10), int(10)).fixed_pointwise_by(&m));
        assert!(!IntervalUnionSet::closed(int(0), rat(21, 2)).fixed_pointwise_by(&m));
        assert!(IntervalUnionSet::point(int(11)).fixed_pointwise_by(&PLMap::identity()));
    }

    #[test]
    fn text_roundtrip() {
        let s = IntervalUnionSet::from_intervals(vec![
            Interval { lo: Endpoint::NegInf, lo_closed: false, hi: Endpoint::Fin(rat(-1, 2)), hi_closed: true },
            Interval::point(int(0)),
            iv(1, false, 2, true),
        ]);
        let t = s.to_string();
        assert_eq!(t, "(-inf,-1/2] U {0} U (1,2]");
        assert_eq!(IntervalUnionSet::parse(&t).unwrap(), s);
        assert_eq!(IntervalUnionSet::parse("empty").unwrap(), IntervalUnionSet::empty());
        assert!(IntervalUnionSet::parse("[0,1] U [1,2]").is_err());
    }
}

//! Piecewise-linear increasing bijections of the rational line.

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::ParseError;
use crate::quadext::QuadExt;
use crate::rational::{parse_rational, Rational};

/// `x -> slope * x + offset` with `slope > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub slope: Rational,
    pub offset: Rational,
}

impl Affine {
    pub fn new(slope: Rational, offset: Rational) -> Self {
        debug_assert!(slope.is_positive());
        Affine { slope, offset }
    }

    pub fn identity() -> Self {
        Affine { slope: Rational::one(), offset: Rational::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.slope.is_one() && self.offset.is_zero()
    }

    /// The affine map sending `x0 -> y0` and `x1 -> y1` (`x0 < x1`, `y0 < y1`).
    pub fn through(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        let offset = y0 - &slope * x0;
        Affine::new(slope, offset)
    }

    /// Slope `slope` through `(x0, y0)`.
    pub fn with_slope(slope: Rational, x0: &Rational, y0: &Rational) -> Self {
        let offset = y0 - &slope * x0;
        Affine::new(slope, offset)
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.offset
    }

    pub fn apply_q(&self, x: &QuadExt) -> QuadExt {
        x.affine(&self.slope, &self.offset)
    }

    pub fn inverse(&self) -> Affine {
        let slope = self.slope.recip();
        let offset = -(&self.offset * &slope);
        Affine { slope, offset }
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Affine) -> Affine {
        Affine {
            slope: &self.slope * &other.slope,
            offset: &self.slope * &other.offset + &self.offset,
        }
    }

    /// The unique fixed point, if the map is not a translation.
    pub fn fixed_point(&self) -> Option<Rational> {
        if self.slope.is_one() {
            None
        } else {
            Some(&self.offset / (Rational::one() - &self.slope))
        }
    }
}

/// An increasing PL bijection: `pieces[i]` acts on `[breaks[i-1], breaks[i]]`,
/// with unbounded first and last pieces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLMap {
    breaks: Vec<Rational>,
    pieces: Vec<Affine>,
}

impl Default for PLMap {
    fn default() -> Self {
        PLMap::identity()
    }
}

impl PLMap {
    pub fn identity() -> Self {
        PLMap { breaks: Vec::new(), pieces: vec![Affine::identity()] }
    }

    pub fn translation(t: Rational) -> Self {
        PLMap { breaks: Vec::new(), pieces: vec![Affine::new(Rational::one(), t)] }
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Affine] {
        &self.pieces
    }

    /// Build from raw breakpoints and pieces, checking continuity and
    /// merging redundant breakpoints.
    pub fn from_parts(breaks: Vec<Rational>, pieces: Vec<Affine>) -> Result<Self, ParseError> {
        if pieces.len() != breaks.len() + 1 {
            return Err(ParseError::new("piece count must be breakpoint count plus one"));
        }
        if pieces.iter().any(|p| !p.slope.is_positive()) {
            return Err(ParseError::new("slopes must be positive"));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ParseError::new("breakpoints must increase strictly"));
        }
        for (i, b) in breaks.iter().enumerate() {
            if pieces[i].apply(b) != pieces[i + 1].apply(b) {
                return Err(ParseError::new(format!("discontinuity at breakpoint {b}")));
            }
        }
        Ok(PLMap { breaks, pieces }.canonical())
    }

    /// Interpolate through a strictly increasing graph, with end pieces of
    /// the given slopes. An empty graph with equal end slopes gives a linear map
    /// through the origin.
    pub fn from_graph(
        points: &[(Rational, Rational)],
        left_slope: Rational,
        right_slope: Rational,
    ) -> Result<Self, ParseError> {
        if points.is_empty() {
            if left_slope != right_slope {
                return Err(ParseError::new("empty graph needs one slope"));
            }
            return Ok(PLMap { breaks: vec![], pieces: vec![Affine::new(left_slope, Rational::zero())] });
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(ParseError::new("graph must be strictly increasing"));
            }
        }
        if !left_slope.is_positive() || !right_slope.is_positive() {
            return Err(ParseError::new("slopes must be positive"));
        }
        let mut breaks = Vec::with_capacity(points.len());
        let mut pieces = Vec::with_capacity(points.len() + 1);
        let (x0, y0) = &points[0];
        pieces.push(Affine::with_slope(left_slope, x0, y0));
        for w in points.windows(2) {
            breaks.push(w[0].0.clone());
            pieces.push(Affine::through(&w[0].0, &w[0].1, &w[1].0, &w[1].1));
        }
        let (xn, yn) = points.last().unwrap();
        breaks.push(xn.clone());
        pieces.push(Affine::with_slope(right_slope, xn, yn));
        Ok(PLMap { breaks, pieces }.canonical())
    }

    /// Interpolation with slope-1 ends.
    pub fn through_points(points: &[(Rational, Rational)]) -> Result<Self, ParseError> {
        PLMap::from_graph(points, Rational::one(), Rational::one())
    }

    fn canonical(self) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut pieces: Vec<Affine> = Vec::with_capacity(self.pieces.len());
        let mut it = self.pieces.into_iter();
        pieces.push(it.next().expect("at least one piece"));
        for (b, p) in self.breaks.into_iter().zip(it) {
            if pieces.last() == Some(&p) {
                continue;
            }
            breaks.push(b);
            pieces.push(p);
        }
        PLMap { breaks, pieces }
    }

    pub fn is_identity(&self) -> bool {
        self.breaks.is_empty() && self.pieces[0].is_identity()
    }

    /// Index of a piece whose closed domain contains `x`.
    pub fn piece_index(&self, x: &Rational) -> usize {
        self.breaks.partition_point(|b| b < x)
    }

    /// Index of the piece whose domain contains `x`, for irrational `x`
    /// (unique, no breakpoint can equal it).
    pub fn piece_index_q(&self, x: &QuadExt) -> usize {
        self.breaks.partition_point(|b| x.cmp_rational(b) == Ordering::Greater)
    }

    /// Piece acting on a left neighbourhood `(x - e, x)`.
    pub fn piece_left_of(&self, x: &Rational) -> usize {
        self.breaks.partition_point(|b| b < x)
    }

    /// Piece acting on a right neighbourhood `(x, x + e)`.
    pub fn piece_right_of(&self, x: &Rational) -> usize {
        self.breaks.partition_point(|b| b <= x)
    }

    /// Closed domain bounds of piece `i` (`None` for an infinite side).
    pub fn piece_domain(&self, i: usize) -> (Option<&Rational>, Option<&Rational>) {
        let lo = if i == 0 { None } else { Some(&self.breaks[i - 1]) };
        let hi = self.breaks.get(i);
        (lo, hi)
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        self.pieces[self.piece_index(x)].apply(x)
    }

    pub fn apply_q(&self, x: &QuadExt) -> QuadExt {
        match x.as_rational() {
            Some(r) => QuadExt::rational(self.apply(r)),
            None => self.pieces[self.piece_index_q(x)].apply_q(x),
        }
    }

    pub fn inverse(&self) -> PLMap {
        let breaks = self.breaks.iter().enumerate().map(|(i, b)| self.pieces[i].apply(b)).collect();
        let pieces = self.pieces.iter().map(Affine::inverse).collect();
        PLMap { breaks, pieces }
    }

    /// `self ∘ g`: apply `g` first.
    pub fn compose(&self, g: &PLMap) -> PLMap {
        let ginv = g.inverse();
        let mut cuts: Vec<Rational> = g.breaks.clone();
        cuts.extend(self.breaks.iter().map(|b| ginv.apply(b)));
        cuts.sort();
        cuts.dedup();
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        for i in 0..=cuts.len() {
            // a point strictly inside the i-th cell
            let probe = match (i.checked_sub(1).map(|j| &cuts[j]), cuts.get(i)) {
                (None, None) => Rational::zero(),
                (None, Some(hi)) => hi - Rational::one(),
                (Some(lo), None) => lo + Rational::one(),
                (Some(lo), Some(hi)) => (lo + hi) / Rational::from_integer(2.into()),
            };
            let gp = &g.pieces[g.piece_index(&probe)];
            let y = gp.apply(&probe);
            let fp = &self.pieces[self.piece_index(&y)];
            pieces.push(fp.after(gp));
        }
        PLMap { breaks: cuts, pieces }.canonical()
    }

    /// Parse the table form `{s0 o0} b1 {s1 o1} ... bn {sn on}`.
    pub fn parse(s: &str) -> Result<PLMap, ParseError> {
        let mut breaks = Vec::new();
        let mut pieces = Vec::new();
        let mut rest = s.trim();
        loop {
            let body_start = rest
                .strip_prefix('{')
                .ok_or_else(|| ParseError::new(format!("expected '{{' in PL table near {rest:?}")))?;
            let close = body_start.find('}').ok_or_else(|| ParseError::new("unclosed PL piece"))?;
            let body = &body_start[..close];
            let mut parts = body.split_whitespace();
            let (Some(sl), Some(of), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(ParseError::new(format!("PL piece needs slope and offset: {body:?}")));
            };
            pieces.push(Affine { slope: parse_rational(sl)?, offset: parse_rational(of)? });
            rest = body_start[close + 1..].trim_start();
            if rest.is_empty() {
                break;
            }
            let next = rest.find('{').ok_or_else(|| ParseError::new("dangling breakpoint"))?;
            breaks.push(parse_rational(&rest[..next])?);
            rest = &rest[next..];
        }
        let canon = PLMap::from_parts(breaks.clone(), pieces.clone())?;
        if canon.breaks != breaks {
            return Err(ParseError::new("PL table is not in canonical form"));
        }
        Ok(canon)
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", self.breaks[i - 1])?;
            }
            write!(f, "{{{} {}}}", p.slope, p.offset)?;
        }
        Ok(())
    }
}

//! Finite structures in the four signatures, with exact embedding search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::error::ParseError;
use crate::rational::{parse_rational, Rational};

use super::linalg::{is_prime, solve, Echelon};
use super::FraisseError;

pub type Label = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signature {
    PureSet,
    VectorSpace { q: u32 },
    Ultrametric,
    QuadSelector,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::PureSet => write!(f, "pure-set"),
            Signature::VectorSpace { q } => write!(f, "vector-space-{q}"),
            Signature::Ultrametric => write!(f, "ultrametric"),
            Signature::QuadSelector => write!(f, "quad-selector"),
        }
    }
}

impl Signature {
    pub fn parse(s: &str) -> Result<Signature, ParseError> {
        match s.trim() {
            "pure-set" => Ok(Signature::PureSet),
            "ultrametric" => Ok(Signature::Ultrametric),
            "quad-selector" => Ok(Signature::QuadSelector),
            t => {
                let q = t
                    .strip_prefix("vector-space-")
                    .and_then(|q| q.parse().ok())
                    .ok_or_else(|| ParseError::new(format!("unknown signature {t:?}")))?;
                Ok(Signature::VectorSpace { q })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tables {
    Pure,
    /// Coordinates in the basis of the label-least independent elements.
    Vector { q: u32, coords: BTreeMap<Label, Vec<u32>> },
    /// Distance of each pair `(x, y)` with `x < y`.
    Metric(BTreeMap<(Label, Label), Rational>),
    /// Chosen pair of each 4-set, both sorted.
    Selector(BTreeMap<[Label; 4], [Label; 2]>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinStructure {
    universe: BTreeSet<Label>,
    tables: Tables,
    /// Label of each coordinate vector (vector spaces only).
    index: BTreeMap<Vec<u32>, Label>,
}

fn key(x: Label, y: Label) -> (Label, Label) {
    if x < y {
        (x, y)
    } else {
        (y, x)
    }
}

fn quads(u: &[Label]) -> Vec<[Label; 4]> {
    let mut out = Vec::new();
    let n = u.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    out.push([u[i], u[j], u[k], u[l]]);
                }
            }
        }
    }
    out
}

fn sorted2(a: Label, b: Label) -> [Label; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn sorted4(mut q: [Label; 4]) -> [Label; 4] {
    q.sort();
    q
}

impl FinStructure {
    pub(crate) fn from_tables(universe: BTreeSet<Label>, tables: Tables) -> FinStructure {
        FinStructure { universe, tables, index: BTreeMap::new() }
    }

    pub fn pure(universe: impl IntoIterator<Item = Label>) -> FinStructure {
        FinStructure::from_tables(universe.into_iter().collect(), Tables::Pure)
    }

    /// Ultrametric space from the distances of all pairs.
    pub fn ultrametric(
        universe: impl IntoIterator<Item = Label>,
        dist: impl IntoIterator<Item = ((Label, Label), Rational)>,
    ) -> Result<FinStructure, FraisseError> {
        let universe: BTreeSet<Label> = universe.into_iter().collect();
        let d: BTreeMap<(Label, Label), Rational> = dist.into_iter().map(|((x, y), r)| (key(x, y), r)).collect();
        let s = FinStructure::from_tables(universe, Tables::Metric(d));
        s.check_axioms()?;
        Ok(s)
    }

    /// Vector space over `F_q` from a bijection of labels onto `F_q^dim`.
    pub fn vector(q: u32, coords: BTreeMap<Label, Vec<u32>>) -> Result<FinStructure, FraisseError> {
        if !is_prime(q) {
            return Err(FraisseError::AxiomViolation(format!("{q} is not prime")));
        }
        let dim = coords.values().next().map_or(0, Vec::len);
        let distinct: BTreeSet<&Vec<u32>> = coords.values().collect();
        let size = (q as usize).checked_pow(dim as u32).unwrap_or(usize::MAX);
        if distinct.len() != coords.len() || coords.len() != size || coords.values().any(|v| v.len() != dim || v.iter().any(|&c| c >= q)) {
            return Err(FraisseError::AxiomViolation("labels are not a bijection onto F_q^d".into()));
        }
        // re-express in the basis of the label-least independent elements
        let mut ech = Echelon::new(q, dim);
        let mut basis = Vec::new();
        for v in coords.values() {
            if ech.insert(v) {
                basis.push(v.clone());
            }
        }
        let coords = coords
            .iter()
            .map(|(l, v)| (*l, solve(q, &basis, v).expect("basis spans the space")))
            .collect::<BTreeMap<_, _>>();
        let index = coords.iter().map(|(l, v)| (v.clone(), *l)).collect();
        Ok(FinStructure { universe: coords.keys().copied().collect(), tables: Tables::Vector { q, coords }, index })
    }

    pub fn selector(
        universe: impl IntoIterator<Item = Label>,
        table: impl IntoIterator<Item = ([Label; 4], [Label; 2])>,
    ) -> Result<FinStructure, FraisseError> {
        let universe: BTreeSet<Label> = universe.into_iter().collect();
        let table = table.into_iter().map(|(q, p)| (sorted4(q), sorted2(p[0], p[1]))).collect();
        let s = FinStructure::from_tables(universe, Tables::Selector(table));
        s.check_axioms()?;
        Ok(s)
    }

    pub fn empty(sig: Signature) -> FinStructure {
        match sig {
            Signature::PureSet => FinStructure::pure([]),
            Signature::Ultrametric => FinStructure::from_tables(BTreeSet::new(), Tables::Metric(BTreeMap::new())),
            Signature::QuadSelector => FinStructure::from_tables(BTreeSet::new(), Tables::Selector(BTreeMap::new())),
            Signature::VectorSpace { q } => FinStructure::vector(q, BTreeMap::from([(0, vec![])])).expect("zero space"),
        }
    }

    pub fn signature(&self) -> Signature {
        match &self.tables {
            Tables::Pure => Signature::PureSet,
            Tables::Vector { q, .. } => Signature::VectorSpace { q: *q },
            Tables::Metric(_) => Signature::Ultrametric,
            Tables::Selector(_) => Signature::QuadSelector,
        }
    }

    pub fn universe(&self) -> &BTreeSet<Label> {
        &self.universe
    }

    pub fn tables(&self) -> &Tables {
        &self.tables
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn dist(&self, x: Label, y: Label) -> Option<&Rational> {
        match &self.tables {
            Tables::Metric(d) => d.get(&key(x, y)),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.tables {
            Tables::Vector { coords, .. } => coords.values().next().map_or(0, Vec::len),
            _ => 0,
        }
    }

    pub fn coords(&self, x: Label) -> Option<&Vec<u32>> {
        match &self.tables {
            Tables::Vector { coords, .. } => coords.get(&x),
            _ => None,
        }
    }

    /// The element with the given coordinates.
    pub fn at(&self, v: &[u32]) -> Option<Label> {
        match &self.tables {
            Tables::Vector { .. } => self.index.get(v).copied(),
            _ => None,
        }
    }

    pub fn check_axioms(&self) -> Result<(), FraisseError> {
        let u: Vec<Label> = self.universe.iter().copied().collect();
        match &self.tables {
            Tables::Pure | Tables::Vector { .. } => Ok(()),
            Tables::Metric(d) => {
                let pairs = u.len() * u.len().saturating_sub(1) / 2;
                if d.len() != pairs || d.keys().any(|(x, y)| !self.universe.contains(x) || !self.universe.contains(y) || x == y) {
                    return Err(FraisseError::AxiomViolation("distance table does not match the universe".into()));
                }
                if d.values().any(|r| *r <= Rational::from_integer(0.into())) {
                    return Err(FraisseError::AxiomViolation("distances must be positive".into()));
                }
                for &x in &u {
                    for &y in &u {
                        for &z in &u {
                            if x == y || y == z || x == z {
                                continue;
                            }
                            let (a, b, c) = (&d[&key(x, z)], &d[&key(x, y)], &d[&key(y, z)]);
                            if a > b.max(c) {
                                return Err(FraisseError::AxiomViolation(format!(
                                    "d({x},{z}) = {a} exceeds max(d({x},{y}), d({y},{z}))"
                                )));
                            }
                        }
                    }
                }
                Ok(())
            }
            Tables::Selector(t) => {
                let qs = quads(&u);
                if t.len() != qs.len() {
                    return Err(FraisseError::AxiomViolation("selector table must cover every 4-set".into()));
                }
                for q in qs {
                    let Some(p) = t.get(&q) else {
                        return Err(FraisseError::AxiomViolation(format!("no pair for {q:?}")));
                    };
                    if !q.contains(&p[0]) || !q.contains(&p[1]) || p[0] == p[1] {
                        return Err(FraisseError::AxiomViolation(format!("pair {p:?} not inside {q:?}")));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn add(&self, x: Label, y: Label) -> Option<Label> {
        let (Tables::Vector { q, .. }, Some(a), Some(b)) = (&self.tables, self.coords(x), self.coords(y)) else {
            return None;
        };
        let v: Vec<u32> = a.iter().zip(b).map(|(s, t)| (s + t) % q).collect();
        self.at(&v)
    }

    pub fn scale(&self, c: u32, x: Label) -> Option<Label> {
        let (Tables::Vector { q, .. }, Some(a)) = (&self.tables, self.coords(x)) else {
            return None;
        };
        let v: Vec<u32> = a.iter().map(|s| (s * c) % q).collect();
        self.at(&v)
    }

    /// Closure under the functions: the span for vector spaces, the set itself otherwise.
    pub fn acl(&self, s: &BTreeSet<Label>) -> BTreeSet<Label> {
        match &self.tables {
            Tables::Vector { q, coords } => {
                let dim = self.dim();
                let mut ech = Echelon::new(*q, dim);
                for x in s {
                    ech.insert(&coords[x]);
                }
                coords.iter().filter(|(_, v)| ech.contains(v)).map(|(l, _)| *l).collect()
            }
            _ => s.intersection(&self.universe).copied().collect(),
        }
    }

    pub fn is_closed(&self, s: &BTreeSet<Label>) -> bool {
        s.is_subset(&self.universe) && self.acl(s) == *s
    }

    /// Induced substructure on a closed set.
    pub fn restrict(&self, s: &BTreeSet<Label>) -> Result<FinStructure, FraisseError> {
        if !self.is_closed(s) {
            return Err(FraisseError::Precondition(format!("{s:?} is not a substructure")));
        }
        Ok(match &self.tables {
            Tables::Pure => FinStructure::pure(s.iter().copied()),
            Tables::Metric(d) => {
                let pairs = s.iter().flat_map(|x| s.range(x + 1..).map(move |y| (*x, *y)));
                FinStructure::from_tables(s.clone(), Tables::Metric(pairs.map(|k| (k, d[&k].clone())).collect()))
            }
            Tables::Selector(t) => FinStructure::from_tables(
                s.clone(),
                Tables::Selector(t.iter().filter(|(q, _)| q.iter().all(|x| s.contains(x))).map(|(k, v)| (*k, *v)).collect()),
            ),
            Tables::Vector { q, coords } => {
                let mut ech = Echelon::new(*q, self.dim());
                let basis: Vec<Vec<u32>> = s.iter().map(|l| &coords[l]).filter(|v| ech.insert(v)).cloned().collect();
                let sub = s.iter().map(|l| (*l, solve(*q, &basis, &coords[l]).expect("closed set"))).collect();
                FinStructure::vector(*q, sub)?
            }
        })
    }

    /// Rename labels by an injective map defined on the universe.
    pub fn relabel(&self, m: &BTreeMap<Label, Label>) -> FinStructure {
        let f = |x: &Label| m[x];
        match &self.tables {
            Tables::Pure => FinStructure::pure(self.universe.iter().map(f)),
            Tables::Metric(d) => FinStructure::from_tables(
                self.universe.iter().map(f).collect(),
                Tables::Metric(d.iter().map(|((x, y), r)| (key(f(x), f(y)), r.clone())).collect()),
            ),
            Tables::Selector(t) => FinStructure::from_tables(
                self.universe.iter().map(f).collect(),
                Tables::Selector(t.iter().map(|(q, p)| (sorted4(q.map(|x| f(&x))), sorted2(f(&p[0]), f(&p[1])))).collect()),
            ),
            Tables::Vector { q, coords } => {
                FinStructure::vector(*q, coords.iter().map(|(l, v)| (f(l), v.clone())).collect()).expect("relabelled space")
            }
        }
    }

    /// Whether `m` (defined on part of the universe) preserves all structure
    /// among its domain.
    pub fn is_partial_iso(&self, other: &FinStructure, m: &BTreeMap<Label, Label>) -> bool {
        let img: BTreeSet<Label> = m.values().copied().collect();
        if img.len() != m.len() || !m.keys().all(|x| self.universe.contains(x)) || !img.is_subset(&other.universe) {
            return false;
        }
        match (&self.tables, &other.tables) {
            (Tables::Pure, Tables::Pure) => true,
            (Tables::Metric(_), Tables::Metric(_)) => m.iter().all(|(x, fx)| {
                m.iter().all(|(y, fy)| x == y || self.dist(*x, *y) == other.dist(*fx, *fy))
            }),
            (Tables::Selector(t), Tables::Selector(u)) => t.iter().all(|(q, p)| {
                if !q.iter().all(|x| m.contains_key(x)) {
                    return true;
                }
                u.get(&sorted4(q.map(|x| m[&x]))) == Some(&sorted2(m[&p[0]], m[&p[1]]))
            }),
            (Tables::Vector { q, .. }, Tables::Vector { q: q2, .. }) if q == q2 => {
                m.iter().all(|(x, fx)| {
                    (1..*q).all(|c| match (self.scale(c, *x), other.scale(c, *fx)) {
                        (Some(s), Some(t)) => m.get(&s).is_none_or(|ms| *ms == t),
                        _ => false,
                    }) && m.iter().all(|(y, fy)| match (self.add(*x, *y), other.add(*fx, *fy)) {
                        (Some(s), Some(t)) => m.get(&s).is_none_or(|ms| *ms == t),
                        _ => false,
                    })
                })
            }
            _ => false,
        }
    }

    /// An embedding into `dst` extending `partial`; with `onto` it must be an
    /// isomorphism. A random stream shuffles the candidate order.
    pub fn find_embedding(
        &self,
        dst: &FinStructure,
        partial: &BTreeMap<Label, Label>,
        onto: bool,
        rng: Option<&mut ChaCha8Rng>,
    ) -> Option<BTreeMap<Label, Label>> {
        if self.signature() != dst.signature() || (onto && self.len() != dst.len()) || self.len() > dst.len() {
            return None;
        }
        if !self.is_partial_iso(dst, partial) {
            return None;
        }
        match &self.tables {
            Tables::Vector { q, .. } => self.linear_embedding(dst, *q, partial, rng),
            _ => {
                let mut order: Vec<Label> = partial.keys().copied().collect();
                order.extend(self.universe.iter().filter(|x| !partial.contains_key(x)));
                let mut cands: Vec<Label> = dst.universe.iter().copied().collect();
                if let Some(r) = rng {
                    cands.shuffle(r);
                }
                let mut m = partial.clone();
                let mut used: BTreeSet<Label> = m.values().copied().collect();
                self.backtrack(dst, &order, partial.len(), &cands, &mut m, &mut used).then_some(m)
            }
        }
    }

    fn backtrack(
        &self,
        dst: &FinStructure,
        order: &[Label],
        i: usize,
        cands: &[Label],
        m: &mut BTreeMap<Label, Label>,
        used: &mut BTreeSet<Label>,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let x = order[i];
        // nearest assigned point: a cheap first filter for metrics
        let anchor = match &self.tables {
            Tables::Metric(_) => m.keys().min_by_key(|z| self.dist(x, **z)).map(|z| (*z, self.dist(x, *z).cloned())),
            _ => None,
        };
        for &y in cands {
            if let Some((z, ref dz)) = anchor {
                if used.contains(&y) || dst.dist(y, m[&z]).cloned() != *dz {
                    continue;
                }
            }
            if used.contains(&y) || !self.compatible(dst, m, x, y) {
                continue;
            }
            m.insert(x, y);
            used.insert(y);
            if self.backtrack(dst, order, i + 1, cands, m, used) {
                return true;
            }
            m.remove(&x);
            used.remove(&y);
        }
        false
    }

    fn compatible(&self, dst: &FinStructure, m: &BTreeMap<Label, Label>, x: Label, y: Label) -> bool {
        match (&self.tables, &dst.tables) {
            (Tables::Metric(_), Tables::Metric(_)) => m.iter().all(|(z, fz)| self.dist(x, *z) == dst.dist(y, *fz)),
            (Tables::Selector(t), Tables::Selector(u)) => {
                let mut m2 = m.clone();
                m2.insert(x, y);
                t.iter().filter(|(q, _)| q.contains(&x)).all(|(q, p)| {
                    if !q.iter().all(|z| m2.contains_key(z)) {
                        return true;
                    }
                    u.get(&sorted4(q.map(|z| m2[&z]))) == Some(&sorted2(m2[&p[0]], m2[&p[1]]))
                })
            }
            _ => true,
        }
    }

    fn linear_embedding(
        &self,
        dst: &FinStructure,
        q: u32,
        partial: &BTreeMap<Label, Label>,
        rng: Option<&mut ChaCha8Rng>,
    ) -> Option<BTreeMap<Label, Label>> {
        let dim = self.dim();
        let mut ech = Echelon::new(q, dim);
        let mut basis: Vec<Label> = Vec::new();
        for x in partial.keys().chain(self.universe.iter()) {
            if ech.insert(self.coords(*x).expect("label")) {
                basis.push(*x);
            }
        }
        let fixed = basis.iter().take_while(|x| partial.contains_key(x)).count();
        let mut images: Vec<Label> = basis[..fixed].iter().map(|x| partial[x]).collect();
        let mut cands: Vec<Label> = dst.universe.iter().copied().collect();
        if let Some(r) = rng {
            cands.shuffle(r);
        }
        let basis_coords: Vec<Vec<u32>> = basis.iter().map(|x| self.coords(*x).expect("label").clone()).collect();
        self.extend_basis(dst, q, &basis_coords, &mut images, &cands, partial)
    }

    fn extend_basis(
        &self,
        dst: &FinStructure,
        q: u32,
        basis: &[Vec<u32>],
        images: &mut Vec<Label>,
        cands: &[Label],
        partial: &BTreeMap<Label, Label>,
    ) -> Option<BTreeMap<Label, Label>> {
        let mut ech = Echelon::new(q, dst.dim());
        for y in images.iter() {
            if !ech.insert(dst.coords(*y).expect("label")) {
                return None;
            }
        }
        if images.len() == basis.len() {
            let imgs: Vec<&Vec<u32>> = images.iter().map(|y| dst.coords(*y).expect("label")).collect();
            let mut m = BTreeMap::new();
            for x in &self.universe {
                let c = solve(q, basis, self.coords(*x).expect("label")).expect("basis spans");
                let mut v = vec![0u32; dst.dim()];
                for (ci, img) in c.iter().zip(&imgs) {
                    for (vj, ij) in v.iter_mut().zip(img.iter()) {
                        *vj = (*vj + ci * ij) % q;
                    }
                }
                m.insert(*x, dst.at(&v).expect("closed under operations"));
            }
            return partial.iter().all(|(x, y)| m[x] == *y).then_some(m);
        }
        for &y in cands {
            if ech.contains(dst.coords(y).expect("label")) {
                continue;
            }
            images.push(y);
            if let Some(m) = self.extend_basis(dst, q, basis, images, cands, partial) {
                return Some(m);
            }
            images.pop();
        }
        None
    }

    pub fn parse(s: &str) -> Result<FinStructure, FraisseError> {
        parse_structure(s).map_err(FraisseError::Parse)
    }
}

impl fmt::Display for FinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u: Vec<String> = self.universe.iter().map(|x| x.to_string()).collect();
        write!(f, "{} {{{}}}", self.signature(), u.join(","))?;
        match &self.tables {
            Tables::Pure => {}
            Tables::Metric(d) => {
                for ((x, y), r) in d {
                    write!(f, " d({x},{y})={r}")?;
                }
            }
            Tables::Selector(t) => {
                for (q, p) in t {
                    write!(f, " s({},{},{},{})=({},{})", q[0], q[1], q[2], q[3], p[0], p[1])?;
                }
            }
            Tables::Vector { coords, .. } => {
                for (l, v) in coords {
                    let c: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    write!(f, " {l}:[{}]", c.join(","))?;
                }
            }
        }
        Ok(())
    }
}

fn nums(s: &str) -> Result<Vec<u32>, ParseError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| ParseError::new(format!("bad number {t:?}"))))
        .collect()
}

fn parse_structure(s: &str) -> Result<FinStructure, ParseError> {
    let s = s.trim();
    let (sig, rest) = s.split_once(' ').ok_or_else(|| ParseError::new("expected signature and universe"))?;
    let sig = Signature::parse(sig)?;
    let rest = rest.trim_start();
    let close = rest.find('}').ok_or_else(|| ParseError::new("unclosed universe"))?;
    let universe = nums(rest.strip_prefix('{').ok_or_else(|| ParseError::new("expected '{'"))?[..close - 1].as_ref())?;
    let items: Vec<&str> = rest[close + 1..].split_whitespace().collect();
    let bad = |t: &str| ParseError::new(format!("bad table entry {t:?}"));
    let wrap = |e: FraisseError| ParseError::new(e.to_string());
    let out = match sig {
        Signature::PureSet => {
            if !items.is_empty() {
                return Err(bad(items[0]));
            }
            FinStructure::pure(universe)
        }
        Signature::Ultrametric => {
            let mut d = Vec::new();
            for t in items {
                let (lhs, r) = t.split_once('=').ok_or_else(|| bad(t))?;
                let xy = nums(lhs.strip_prefix("d(").and_then(|x| x.strip_suffix(')')).ok_or_else(|| bad(t))?)?;
                let [x, y] = xy[..] else { return Err(bad(t)) };
                d.push(((x, y), parse_rational(r)?));
            }
            FinStructure::ultrametric(universe, d).map_err(wrap)?
        }
        Signature::QuadSelector => {
            let mut tab = Vec::new();
            for t in items {
                let (lhs, r) = t.split_once('=').ok_or_else(|| bad(t))?;
                let q = nums(lhs.strip_prefix("s(").and_then(|x| x.strip_suffix(')')).ok_or_else(|| bad(t))?)?;
                let p = nums(r.strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(|| bad(t))?)?;
                let (&[a, b, c, e], &[x, y]) = (&q[..], &p[..]) else { return Err(bad(t)) };
                tab.push(([a, b, c, e], [x, y]));
            }
            FinStructure::selector(universe, tab).map_err(wrap)?
        }
        Signature::VectorSpace { q } => {
            let mut coords = BTreeMap::new();
            for t in items {
                let (l, v) = t.split_once(':').ok_or_else(|| bad(t))?;
                let l: Label = l.parse().map_err(|_| bad(t))?;
                let v = nums(v.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(|| bad(t))?)?;
                coords.insert(l, v);
            }
            if coords.keys().copied().collect::<Vec<_>>() != universe {
                return Err(ParseError::new("coordinates must cover the universe"));
            }
            FinStructure::vector(q, coords).map_err(wrap)?
        }
    };
    if out.to_string() != s {
        return Err(ParseError::new("structure text is not canonical"));
    }
    Ok(out)
}

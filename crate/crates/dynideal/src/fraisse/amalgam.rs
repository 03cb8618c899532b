//! Canonical amalgamation per signature, its laws, and Fraïssé chains.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{int, Rational};

use super::linalg::{solve, Echelon};
use super::structure::{FinStructure, Label, Signature, Tables};
use super::FraisseError;

/// Distances used when structures are enumerated or sampled.
pub const PALETTE: [i64; 3] = [1, 2, 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamResult {
    pub amalgam: FinStructure,
    pub embed_a: BTreeMap<Label, Label>,
    pub embed_b: BTreeMap<Label, Label>,
}

fn identity_on(s: &BTreeSet<Label>) -> BTreeMap<Label, Label> {
    s.iter().map(|x| (*x, *x)).collect()
}

/// The shared labels, after checking both sides induce the same structure there.
pub fn common_part(a: &FinStructure, b: &FinStructure) -> Result<BTreeSet<Label>, FraisseError> {
    if a.signature() != b.signature() {
        return Err(FraisseError::NotInPosition("signatures differ".into()));
    }
    a.check_axioms()?;
    b.check_axioms()?;
    let common: BTreeSet<Label> = a.universe().intersection(b.universe()).copied().collect();
    let ca = a.restrict(&common).map_err(|_| FraisseError::NotInPosition("common part is not closed in A".into()))?;
    let cb = b.restrict(&common).map_err(|_| FraisseError::NotInPosition("common part is not closed in B".into()))?;
    if ca != cb {
        return Err(FraisseError::NotInPosition("A and B disagree on the common part".into()));
    }
    Ok(common)
}

fn palette_max() -> Rational {
    int(*PALETTE.iter().max().expect("palette"))
}

/// Distance between `x` of A and `y` of B outside the common part.
pub fn ultrametric_rule(a: &FinStructure, b: &FinStructure, common: &BTreeSet<Label>, x: Label, y: Label) -> Rational {
    if common.is_empty() {
        let top = |s: &FinStructure| match s.tables() {
            Tables::Metric(d) => d.values().max().cloned(),
            _ => None,
        };
        return [top(a), top(b), Some(palette_max())].into_iter().flatten().max().expect("palette");
    }
    for z in common {
        let (s, t) = (a.dist(x, *z).expect("metric"), b.dist(*z, y).expect("metric"));
        if s != t {
            return s.max(t).clone();
        }
    }
    common.iter().map(|z| a.dist(x, *z).expect("metric").clone()).min().expect("nonempty")
}

/// The canonical amalgam of `a` and `b` over their common labels.
pub fn amalgamate(a: &FinStructure, b: &FinStructure) -> Result<AmalgamResult, FraisseError> {
    let common = common_part(a, b)?;
    let amalgam = match a.signature() {
        Signature::QuadSelector => return Err(FraisseError::NotAmalgamable),
        Signature::PureSet => FinStructure::pure(a.universe().union(b.universe()).copied()),
        Signature::Ultrametric => {
            let mut d: Vec<((Label, Label), Rational)> = Vec::new();
            for s in [a, b] {
                if let Tables::Metric(m) = s.tables() {
                    d.extend(m.iter().map(|(k, v)| (*k, v.clone())));
                }
            }
            for x in a.universe().difference(&common) {
                for y in b.universe().difference(&common) {
                    d.push(((*x, *y), ultrametric_rule(a, b, &common, *x, *y)));
                }
            }
            FinStructure::ultrametric(a.universe().union(b.universe()).copied(), d)?
        }
        Signature::VectorSpace { q } => vector_pushout(q, a, b, &common)?,
    };
    Ok(AmalgamResult { embed_a: identity_on(a.universe()), embed_b: identity_on(b.universe()), amalgam })
}

fn greedy_basis(s: &FinStructure, q: u32, start: &[Label]) -> Vec<Label> {
    let mut ech = Echelon::new(q, s.dim());
    let mut out = Vec::new();
    for x in start.iter().chain(s.universe().iter()) {
        if ech.insert(s.coords(*x).expect("label")) {
            out.push(*x);
        }
    }
    out
}

/// Pushout of two spaces over a shared subspace: coordinates `(common, A-only, B-only)`.
fn vector_pushout(q: u32, a: &FinStructure, b: &FinStructure, common: &BTreeSet<Label>) -> Result<FinStructure, FraisseError> {
    let bi = greedy_basis(&a.restrict(common)?, q, &[]);
    let ba = greedy_basis(a, q, &bi);
    let bb = greedy_basis(b, q, &bi);
    let (r, s, t) = (bi.len(), ba.len() - bi.len(), bb.len() - bi.len());
    let coords_in = |st: &FinStructure, basis: &[Label], x: Label| {
        let bv: Vec<Vec<u32>> = basis.iter().map(|l| st.coords(*l).expect("label").clone()).collect();
        solve(q, &bv, st.coords(x).expect("label")).expect("basis spans")
    };
    let mut map: BTreeMap<Vec<u32>, Label> = BTreeMap::new();
    for x in a.universe() {
        let c = coords_in(a, &ba, *x);
        let mut v = c[..r].to_vec();
        v.extend_from_slice(&c[r..]);
        v.extend(std::iter::repeat_n(0, t));
        map.insert(v, *x);
    }
    for y in b.universe() {
        let c = coords_in(b, &bb, *y);
        let mut v = c[..r].to_vec();
        v.extend(std::iter::repeat_n(0, s));
        v.extend_from_slice(&c[r..]);
        if let Some(prev) = map.insert(v, *y) {
            if prev != *y {
                return Err(FraisseError::NotInPosition(format!("{prev} and {y} collide in the pushout")));
            }
        }
    }
    let dim = r + s + t;
    let mut next = a.universe().iter().chain(b.universe()).max().map_or(0, |m| m + 1);
    let mut coords = BTreeMap::new();
    for v in all_vectors(q, dim) {
        let l = match map.get(&v) {
            Some(l) => *l,
            None => {
                next += 1;
                next - 1
            }
        };
        coords.insert(l, v);
    }
    FinStructure::vector(q, coords)
}

/// `F_q^dim` in lexicographic order.
pub fn all_vectors(q: u32, dim: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|v| (0..q).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

/// Checks on one amalgam: axioms, genuine embeddings, disjointness, minimality.
pub fn check_amalgam(a: &FinStructure, b: &FinStructure, r: &AmalgamResult) -> Result<(), String> {
    let c = &r.amalgam;
    c.check_axioms().map_err(|e| e.to_string())?;
    for (name, s, e) in [("A", a, &r.embed_a), ("B", b, &r.embed_b)] {
        if e.keys().collect::<BTreeSet<_>>() != s.universe().iter().collect() || !s.is_partial_iso(c, e) {
            return Err(format!("{name} does not embed"));
        }
    }
    let common: BTreeSet<Label> = a.universe().intersection(b.universe()).copied().collect();
    let ia: BTreeSet<Label> = a.universe().difference(&common).map(|x| r.embed_a[x]).collect();
    let ib: BTreeSet<Label> = b.universe().difference(&common).map(|x| r.embed_b[x]).collect();
    if !ia.is_disjoint(&ib) || common.iter().any(|x| r.embed_a[x] != r.embed_b[x]) {
        return Err("images collide outside the common part".into());
    }
    let gen: BTreeSet<Label> = r.embed_a.values().chain(r.embed_b.values()).copied().collect();
    if c.acl(&gen) != *c.universe() {
        return Err("amalgam is not generated by the two images".into());
    }
    if let Signature::VectorSpace { .. } = c.signature() {
        let dc = a.restrict(&common).map(|s| s.dim()).unwrap_or(0);
        if c.dim() + dc != a.dim() + b.dim() {
            return Err("dimension count fails".into());
        }
    }
    Ok(())
}

/// Invariance of `op` under `phi` on A and `psi` on B.
pub fn check_invariance_with<F>(op: F, a: &FinStructure, b: &FinStructure, phi: &BTreeMap<Label, Label>, psi: &BTreeMap<Label, Label>) -> Result<bool, FraisseError>
where
    F: Fn(&FinStructure, &FinStructure) -> Result<AmalgamResult, FraisseError>,
{
    let common: BTreeSet<Label> = a.universe().intersection(b.universe()).copied().collect();
    if common.iter().any(|x| phi.get(x) != psi.get(x)) {
        return Err(FraisseError::Precondition("phi and psi disagree on the common part".into()));
    }
    let (a2, b2) = (a.relabel(phi), b.relabel(psi));
    let (r1, r2) = (op(a, b)?, op(&a2, &b2)?);
    let mut partial = BTreeMap::new();
    for (x, cx) in &r1.embed_a {
        partial.insert(*cx, r2.embed_a[&phi[x]]);
    }
    for (y, cy) in &r1.embed_b {
        if partial.insert(*cy, r2.embed_b[&psi[y]]).is_some_and(|p| p != r2.embed_b[&psi[y]]) {
            return Ok(false);
        }
    }
    Ok(r1.amalgam.find_embedding(&r2.amalgam, &partial, true, None).is_some())
}

pub fn check_invariance(a: &FinStructure, b: &FinStructure, phi: &BTreeMap<Label, Label>, psi: &BTreeMap<Label, Label>) -> Result<bool, FraisseError> {
    check_invariance_with(amalgamate, a, b, phi, psi)
}

/// Heredity of `op` in the left argument for a substructure `a_sub` of `a`.
pub fn check_heredity_with<F>(op: F, a_sub: &BTreeSet<Label>, a: &FinStructure, b: &FinStructure) -> Result<bool, FraisseError>
where
    F: Fn(&FinStructure, &FinStructure) -> Result<AmalgamResult, FraisseError>,
{
    let common: BTreeSet<Label> = a.universe().intersection(b.universe()).copied().collect();
    if !common.is_subset(a_sub) {
        return Err(FraisseError::Precondition("substructure must contain the common part".into()));
    }
    let a2 = a.restrict(a_sub)?;
    let (big, small) = (op(a, b)?, op(&a2, b)?);
    let gen: BTreeSet<Label> = a_sub.iter().map(|x| big.embed_a[x]).chain(big.embed_b.values().copied()).collect();
    let closure = big.amalgam.restrict(&big.amalgam.acl(&gen))?;
    let mut partial = BTreeMap::new();
    for (x, cx) in &small.embed_a {
        partial.insert(*cx, big.embed_a[x]);
    }
    for (y, cy) in &small.embed_b {
        partial.insert(*cy, big.embed_b[y]);
    }
    Ok(small.amalgam.find_embedding(&closure, &partial, true, None).is_some())
}

pub fn check_heredity(a_sub: &BTreeSet<Label>, a: &FinStructure, b: &FinStructure) -> Result<bool, FraisseError> {
    check_heredity_with(amalgamate, a_sub, a, b)
}

fn permutations(items: &[Label]) -> Vec<Vec<Label>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Every bijection of a small label list onto itself.
pub fn label_permutations(items: &[Label]) -> Vec<BTreeMap<Label, Label>> {
    permutations(items).into_iter().map(|p| items.iter().copied().zip(p).collect()).collect()
}

/// All structures of a signature on exactly `labels` (distances from the palette).
pub fn enumerate_structures(sig: Signature, labels: &[Label]) -> Vec<FinStructure> {
    match sig {
        Signature::PureSet => vec![FinStructure::pure(labels.iter().copied())],
        Signature::Ultrametric => {
            let pairs: Vec<(Label, Label)> =
                labels.iter().enumerate().flat_map(|(i, x)| labels[i + 1..].iter().map(move |y| (*x, *y))).collect();
            let mut out = Vec::new();
            let total = PALETTE.len().pow(pairs.len() as u32);
            for code in 0..total {
                let mut c = code;
                let d: Vec<_> = pairs
                    .iter()
                    .map(|p| {
                        let v = PALETTE[c % PALETTE.len()];
                        c /= PALETTE.len();
                        (*p, int(v))
                    })
                    .collect();
                if let Ok(s) = FinStructure::ultrametric(labels.iter().copied(), d) {
                    out.push(s);
                }
            }
            out
        }
        Signature::VectorSpace { q } => {
            let n = labels.len();
            let Some(dim) = (0..=n).find(|d| (q as usize).pow(*d as u32) == n) else { return vec![] };
            let vecs = all_vectors(q, dim);
            let mut out: BTreeSet<String> = BTreeSet::new();
            let mut res = Vec::new();
            for p in permutations(labels) {
                let coords = p.iter().copied().zip(vecs.iter().cloned()).collect();
                let s = FinStructure::vector(q, coords).expect("bijection");
                if out.insert(s.to_string()) {
                    res.push(s);
                }
            }
            res
        }
        Signature::QuadSelector => {
            let mut u = labels.to_vec();
            u.sort();
            let qs: Vec<[Label; 4]> = subsets(&u, 4).into_iter().map(|v| [v[0], v[1], v[2], v[3]]).collect();
            let mut out = Vec::new();
            for code in 0..6usize.pow(qs.len() as u32) {
                let mut c = code;
                let tab: Vec<_> = qs
                    .iter()
                    .map(|q| {
                        let pairs = subsets(q, 2);
                        let p = &pairs[c % 6];
                        c /= 6;
                        (*q, [p[0], p[1]])
                    })
                    .collect();
                out.push(FinStructure::selector(u.iter().copied(), tab).expect("valid table"));
            }
            out
        }
    }
}

/// Subsets of `items` of size `k`, in lexicographic order.
pub fn subsets(items: &[Label], k: usize) -> Vec<Vec<Label>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out: Vec<Vec<Label>> = subsets(&items[1..], k - 1).into_iter().map(|mut s| {
        s.insert(0, items[0]);
        s
    }).collect();
    out.extend(subsets(&items[1..], k));
    out
}

/// Closed subsets of a structure.
pub fn substructures(s: &FinStructure) -> Vec<BTreeSet<Label>> {
    let u: Vec<Label> = s.universe().iter().copied().collect();
    let mut out = BTreeSet::new();
    for k in 0..=u.len() {
        for sub in subsets(&u, k) {
            let set: BTreeSet<Label> = sub.into_iter().collect();
            if s.is_closed(&set) {
                out.insert(set);
            }
        }
    }
    out.into_iter().collect()
}

/// All pairs `(A, B)` in amalgamation position with `|A| <= max_a`, `|B| <= max_b`.
/// A uses labels from 0, the new points of B from 10.
pub fn amalgamation_positions(sig: Signature, max_a: usize, max_b: usize) -> Vec<(FinStructure, FinStructure)> {
    let mut out = Vec::new();
    for na in 0..=max_a {
        let la: Vec<Label> = (0..na as Label).collect();
        for a in enumerate_structures(sig, &la) {
            for common in substructures(&a) {
                let ca: Vec<Label> = common.iter().copied().collect();
                for nb in common.len()..=max_b {
                    let lb: Vec<Label> = ca.iter().copied().chain(10..10 + (nb - ca.len()) as Label).collect();
                    for b in enumerate_structures(sig, &lb) {
                        if common_part(&a, &b).is_ok() {
                            out.push((a.clone(), b));
                        }
                    }
                }
            }
        }
    }
    out
}

/// One tried amalgam table and the automorphism pair that breaks it, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseLog {
    pub table: String,
    pub violation: Option<(BTreeMap<Label, Label>, BTreeMap<Label, Label>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImpossibilityRecord {
    pub signature: Signature,
    pub a_size: usize,
    pub b_size: usize,
    pub possible: bool,
    pub cases: Vec<CaseLog>,
}

/// Exhaustive search for an invariant amalgam of bare disjoint sets of the
/// given sizes: every candidate table on the union is tested against every
/// pair of permutations of the two sides.
pub fn no_canonical_amalgam_search(sig: Signature, a_size: usize, b_size: usize) -> Result<ImpossibilityRecord, FraisseError> {
    if a_size > 3 || b_size > 3 || a_size + b_size > 5 {
        return Err(FraisseError::Precondition("shape too large for exhaustive search".into()));
    }
    let la: Vec<Label> = (0..a_size as Label).collect();
    let lb: Vec<Label> = (a_size as Label..(a_size + b_size) as Label).collect();
    let union: Vec<Label> = la.iter().chain(&lb).copied().collect();
    let candidates = match sig {
        Signature::QuadSelector => enumerate_structures(sig, &union),
        Signature::PureSet => vec![FinStructure::pure(union.iter().copied())],
        _ => return Err(FraisseError::Precondition(format!("{sig} has no bare sets of points"))),
    };
    let pa = label_permutations(&la);
    let pb = label_permutations(&lb);
    let mut cases = Vec::new();
    for c in candidates {
        let mut violation = None;
        'outer: for s in &pa {
            for t in &pb {
                let m: BTreeMap<Label, Label> = s.iter().chain(t.iter()).map(|(x, y)| (*x, *y)).collect();
                if c.relabel(&m) != c {
                    violation = Some((s.clone(), t.clone()));
                    break 'outer;
                }
            }
        }
        cases.push(CaseLog { table: c.to_string(), violation });
    }
    let possible = cases.iter().any(|c| c.violation.is_none());
    Ok(ImpossibilityRecord { signature: sig, a_size, b_size, possible, cases })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FraisseChain {
    pub structures: Vec<FinStructure>,
    pub log: Vec<String>,
    /// Realized and total (substructure, one-point extension) pairs.
    pub score: (usize, usize),
}

impl FraisseChain {
    pub fn last(&self) -> &FinStructure {
        self.structures.last().expect("chain starts at M_0")
    }

    pub fn score_ratio(&self) -> f64 {
        if self.score.1 == 0 {
            1.0
        } else {
            self.score.0 as f64 / self.score.1 as f64
        }
    }
}

/// One-point extensions of `s` with the new point labelled `fresh`, up to
/// isomorphism over `s`.
pub fn one_point_extensions(s: &FinStructure, fresh: Label) -> Vec<FinStructure> {
    match s.tables() {
        Tables::Pure => vec![FinStructure::pure(s.universe().iter().copied().chain([fresh]))],
        Tables::Metric(d) => {
            let u: Vec<Label> = s.universe().iter().copied().collect();
            let mut out = Vec::new();
            for code in 0..PALETTE.len().pow(u.len() as u32) {
                let mut c = code;
                let mut dist: Vec<_> = d.iter().map(|(k, v)| (*k, v.clone())).collect();
                for x in &u {
                    dist.push(((*x, fresh), int(PALETTE[c % PALETTE.len()])));
                    c /= PALETTE.len();
                }
                if let Ok(e) = FinStructure::ultrametric(u.iter().copied().chain([fresh]), dist) {
                    out.push(e);
                }
            }
            out
        }
        Tables::Vector { q, coords } => {
            let q = *q;
            let mut next = fresh;
            let mut c = BTreeMap::new();
            for v in all_vectors(q, s.dim() + 1) {
                let head = &v[..s.dim()];
                let l = if v[s.dim()] == 0 {
                    *coords.iter().find(|(_, w)| w.as_slice() == head).expect("old vector").0
                } else {
                    next += 1;
                    next - 1
                };
                c.insert(l, v);
            }
            vec![FinStructure::vector(q, c).expect("extension")]
        }
        Tables::Selector(_) => vec![],
    }
}

/// Fraction of (substructure of size <= 3, one-point extension) pairs realized in `m`.
pub fn extension_score(m: &FinStructure) -> (usize, usize) {
    let fresh = m.universe().iter().max().map_or(0, |x| x + 1);
    let (mut hit, mut total) = (0, 0);
    for s in substructures(m).into_iter().filter(|s| s.len() <= 3) {
        let sub = m.restrict(&s).expect("closed");
        for e in one_point_extensions(&sub, fresh) {
            total += 1;
            if e.find_embedding(m, &identity_on(&s), false, None).is_some() {
                hit += 1;
            }
        }
    }
    (hit, total)
}

/// Iterated amalgamation with sampled one-point extensions.
pub fn fraisse_chain(sig: Signature, steps: usize, seed: u64) -> Result<FraisseChain, FraisseError> {
    if sig == Signature::QuadSelector {
        return Err(FraisseError::NotAmalgamable);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = FinStructure::empty(sig);
    let mut structures = vec![m.clone()];
    let mut log = Vec::new();
    for i in 0..steps {
        let subs = substructures(&m);
        let s = subs[rng.gen_range(0..subs.len())].clone();
        let sub = m.restrict(&s)?;
        let fresh = m.universe().iter().max().map_or(0, |x| x + 1);
        let exts = one_point_extensions(&sub, fresh);
        let e = exts[rng.gen_range(0..exts.len())].clone();
        log.push(format!("step {i}: extend {sub} by {e}"));
        m = amalgamate(&m, &e)?.amalgam;
        structures.push(m.clone());
    }
    let score = extension_score(&m);
    Ok(FraisseChain { structures, log, score })
}

//! Largeness certificates and the cover/shrink witnesses built from them.

use std::collections::BTreeSet;

use crate::ideal::{Elem, GroupElem, Instance};
use crate::intervals::{Interval, IntervalUnionSet};
use crate::perm::FinitePermutation;
use crate::plmap::PLMap;
use crate::rational::{int, mid, one, Rational};

use super::WitnessError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// `[l,u]` inside the large set, the base inside `(l,u)`.
    Margins { l: Rational, u: Rational },
    /// Points of the large set outside the base.
    Fresh { count: usize },
}

/// Finite evidence that `large` is `base`-large.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargenessCertificate {
    pub instance: Instance,
    pub base: Elem,
    pub large: Elem,
    pub evidence: Evidence,
}

fn invalid(msg: impl Into<String>) -> WitnessError {
    WitnessError::CertificateInvalid(msg.into())
}

impl LargenessCertificate {
    pub fn check(&self) -> Result<(), WitnessError> {
        match (&self.instance, &self.base, &self.large, &self.evidence) {
            (Instance::BoundedQ, Elem::Intervals(x), Elem::Intervals(b), Evidence::Margins { l, u }) => {
                if l >= u {
                    return Err(invalid(format!("margins {l} >= {u}")));
                }
                if !IntervalUnionSet::closed(l.clone(), u.clone()).is_subset(b) {
                    return Err(invalid(format!("[{l},{u}] not inside {b}")));
                }
                let open = IntervalUnionSet::from_intervals(vec![Interval::open(l.clone(), u.clone())]);
                if !x.is_subset(&open) {
                    return Err(invalid(format!("{x} not inside ({l},{u})")));
                }
                if !b.is_bounded() {
                    return Err(invalid("large set unbounded"));
                }
                Ok(())
            }
            (Instance::FiniteSym { n, k }, Elem::Points(x), Elem::Points(b), Evidence::Fresh { count }) => {
                if b.iter().any(|p| p >= n) || !x.is_subset(b) {
                    return Err(invalid("base not inside large set"));
                }
                if b.difference(x).count() != *count {
                    return Err(invalid(format!("fresh count {count} does not match")));
                }
                if *count + 1 < *k {
                    return Err(invalid(format!("fresh count {count} below k-1 = {}", k - 1)));
                }
                Ok(())
            }
            (i, ..) => Err(invalid(format!("no certificate shape for {}", i.label()))),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }
}

/// `b = [min a - 1, max a + 1]` (`[-1,1]` for empty `a`).
pub fn a_large_bounded(a: &IntervalUnionSet) -> Result<(IntervalUnionSet, LargenessCertificate), WitnessError> {
    if !a.is_bounded() {
        return Err(WitnessError::Unbounded);
    }
    let (lo, hi) = a.hull().unwrap_or((int(0), int(0)));
    let (l, u) = (lo - one(), hi + one());
    let b = a.union(&IntervalUnionSet::closed(l.clone(), u.clone()));
    let cert = LargenessCertificate {
        instance: Instance::BoundedQ,
        base: Elem::Intervals(a.clone()),
        large: Elem::Intervals(b.clone()),
        evidence: Evidence::Margins { l, u },
    };
    Ok((b, cert))
}

/// `b = a` plus the `k-1` smallest points outside `a`.
pub fn a_large_symmetric(
    a: &BTreeSet<usize>,
    n: usize,
    k: usize,
) -> Result<(BTreeSet<usize>, LargenessCertificate), WitnessError> {
    if a.iter().any(|&p| p >= n) || a.len() >= k {
        return Err(WitnessError::NotInIdeal(format!("{a:?} for FiniteSym({n},{k})")));
    }
    let need = a.len() + 2 * (k - 1);
    if n < need {
        return Err(WitnessError::InsufficientSpace(format!("N = {n} < |a| + 2(k-1) = {need}")));
    }
    let mut b = a.clone();
    b.extend((0..n).filter(|p| !a.contains(p)).take(k - 1));
    let cert = LargenessCertificate {
        instance: Instance::FiniteSym { n, k },
        base: Elem::Points(a.clone()),
        large: Elem::Points(b.clone()),
        evidence: Evidence::Fresh { count: k - 1 },
    };
    Ok((b, cert))
}

pub fn a_large(inst: &Instance, a: &Elem) -> Result<(Elem, LargenessCertificate), WitnessError> {
    match (inst, a) {
        (Instance::BoundedQ, Elem::Intervals(a)) => a_large_bounded(a).map(|(b, c)| (Elem::Intervals(b), c)),
        (Instance::FiniteSym { n, k }, Elem::Points(a)) => {
            a_large_symmetric(a, *n, *k).map(|(b, c)| (Elem::Points(b), c))
        }
        (i, _) => Err(WitnessError::Unsupported(i.label())),
    }
}

fn margins(cert: &LargenessCertificate) -> Result<(&IntervalUnionSet, &IntervalUnionSet, &Rational, &Rational), WitnessError> {
    cert.check()?;
    match (&cert.base, &cert.large, &cert.evidence) {
        (Elem::Intervals(a), Elem::Intervals(b), Evidence::Margins { l, u }) => Ok((a, b, l, u)),
        _ => Err(invalid("expected a bounded-line certificate")),
    }
}

fn fresh(cert: &LargenessCertificate) -> Result<(&BTreeSet<usize>, &BTreeSet<usize>, usize, usize), WitnessError> {
    cert.check()?;
    match (&cert.instance, &cert.base, &cert.large) {
        (Instance::FiniteSym { n, k }, Elem::Points(a), Elem::Points(b)) => Ok((a, b, *n, *k)),
        _ => Err(invalid("expected a finite-symmetric certificate")),
    }
}

/// Identity on the hull of `a`, stretching `[l,u]` past the extremes of `c`.
pub fn cover_witness_bounded(cert: &LargenessCertificate, c: &IntervalUnionSet) -> Result<PLMap, WitnessError> {
    let (a, b, l, u) = margins(cert)?;
    if !c.is_bounded() {
        return Err(WitnessError::Unbounded);
    }
    if c.is_subset(b) {
        return Ok(PLMap::identity());
    }
    let (cl, cu) = c.hull().expect("nonempty bounded set");
    let mut graph = Vec::new();
    if let Some((alpha, beta)) = a.hull() {
        graph.push((alpha.clone(), alpha));
        graph.push((beta.clone(), beta));
    }
    let lo = if cl < *l { cl - one() } else { l.clone() };
    let hi = if cu > *u { cu + one() } else { u.clone() };
    graph.push((l.clone(), lo));
    graph.push((u.clone(), hi));
    graph.sort();
    graph.dedup();
    Ok(PLMap::through_points(&graph).expect("increasing graph"))
}

/// Swap the points of `c` outside `b` with unused fresh points of `b`.
pub fn cover_witness_symmetric(
    cert: &LargenessCertificate,
    c: &BTreeSet<usize>,
    n: usize,
) -> Result<FinitePermutation, WitnessError> {
    let (a, b, deg, k) = fresh(cert)?;
    if deg != n || c.iter().any(|&p| p >= n) {
        return Err(WitnessError::Precondition(format!("points outside 0..{n}")));
    }
    if c.len() >= k {
        return Err(WitnessError::NotInIdeal(format!("|c| = {} >= k = {k}", c.len())));
    }
    let missing: Vec<usize> = c.difference(b).copied().collect();
    let spare: Vec<usize> = b.difference(a).filter(|p| !c.contains(p)).copied().collect();
    if missing.len() > spare.len() {
        return Err(WitnessError::InsufficientSpace(format!(
            "{} points to cover, {} fresh points free",
            missing.len(),
            spare.len()
        )));
    }
    let pairs: Vec<(usize, usize)> = spare.into_iter().zip(missing).collect();
    Ok(FinitePermutation::swaps(n, &pairs))
}

pub fn cover_witness(inst: &Instance, cert: &LargenessCertificate, c: &Elem) -> Result<GroupElem, WitnessError> {
    match (inst, c) {
        (Instance::BoundedQ, Elem::Intervals(c)) => cover_witness_bounded(cert, c).map(GroupElem::PL),
        (Instance::FiniteSym { n, .. }, Elem::Points(c)) => cover_witness_symmetric(cert, c, *n).map(GroupElem::Perm),
        (i, _) => Err(WitnessError::Unsupported(i.label())),
    }
}

/// Move `c` into `b` while fixing `a`, returning the certificate for
/// `(a ∪ γc, b)`. On the line `c` lands strictly inside `(l,u)`.
pub fn shrink_cover(
    inst: &Instance,
    cert: &LargenessCertificate,
    c: &Elem,
) -> Result<(GroupElem, LargenessCertificate), WitnessError> {
    if !inst.contains(c)? {
        return Err(WitnessError::NotInIdeal(c.to_string()));
    }
    if inst.is_subset(c, &cert.base)? {
        cert.check()?;
        return Ok((inst.identity(), cert.clone()));
    }
    match (inst, c) {
        (Instance::BoundedQ, Elem::Intervals(c)) => {
            let (a, _, l, u) = margins(cert)?;
            let (cl, cu) = c.hull().expect("nonempty bounded set");
            let graph = match a.hull() {
                None => {
                    let q = (u - l) / int(4);
                    if cl == cu {
                        vec![(cl, mid(l, u))]
                    } else {
                        vec![(cl, l + &q), (cu, u - &q)]
                    }
                }
                Some((alpha, beta)) => {
                    let mut g = vec![(alpha.clone(), alpha.clone()), (beta.clone(), beta.clone())];
                    if cl <= *l {
                        g.push((cl, mid(l, &alpha)));
                    }
                    if cu >= *u {
                        g.push((cu, mid(&beta, u)));
                    }
                    g.sort();
                    g.dedup();
                    g
                }
            };
            let gamma = PLMap::through_points(&graph).expect("increasing graph");
            let moved = c.image(&gamma);
            let out = LargenessCertificate { base: Elem::Intervals(a.union(&moved)), ..cert.clone() };
            Ok((GroupElem::PL(gamma), out))
        }
        (Instance::FiniteSym { .. }, Elem::Points(c)) => {
            let (a, b, n, _) = fresh(cert)?;
            let free: BTreeSet<usize> = b.difference(a).copied().collect();
            let d: BTreeSet<usize> = c.difference(a).copied().collect();
            if d.len() > free.len() {
                return Err(WitnessError::InsufficientSpace(format!(
                    "{} new points, {} fresh points",
                    d.len(),
                    free.len()
                )));
            }
            let out_of_b: Vec<usize> = d.difference(&free).copied().collect();
            let room: Vec<usize> = free.difference(&d).copied().collect();
            let pairs: Vec<(usize, usize)> = out_of_b.into_iter().zip(room).collect();
            let gamma = FinitePermutation::swaps(n, &pairs);
            let base: BTreeSet<usize> = a.union(&gamma.image_set(c)).copied().collect();
            let count = b.difference(&base).count();
            let out = LargenessCertificate { base: Elem::Points(base), evidence: Evidence::Fresh { count }, ..cert.clone() };
            Ok((GroupElem::Perm(gamma), out))
        }
        (i, _) => Err(WitnessError::Unsupported(i.label())),
    }
}

/// Transport a certificate along `delta`; the result is re-validated.
pub fn largeness_conjugation(
    inst: &Instance,
    cert: &LargenessCertificate,
    delta: &GroupElem,
) -> Result<LargenessCertificate, WitnessError> {
    cert.check()?;
    let evidence = match (&cert.evidence, delta) {
        (Evidence::Margins { l, u }, GroupElem::PL(f)) => Evidence::Margins { l: f.apply(l), u: f.apply(u) },
        (Evidence::Fresh { count }, GroupElem::Perm(_)) => Evidence::Fresh { count: *count },
        _ => return Err(WitnessError::Unsupported(inst.label())),
    };
    let out = LargenessCertificate {
        instance: inst.clone(),
        base: inst.act(delta, &cert.base)?,
        large: inst.act(delta, &cert.large)?,
        evidence,
    };
    out.check()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::Affine;

    fn iu(s: &str) -> IntervalUnionSet {
        IntervalUnionSet::parse(s).unwrap()
    }

    #[test]
    fn bounded_large_sets() {
        let (b, cert) = a_large_bounded(&iu("{0}")).unwrap();
        assert_eq!(b, iu("[-1,1]"));
        assert_eq!(cert.evidence, Evidence::Margins { l: int(-1), u: int(1) });
        assert_eq!(a_large_bounded(&iu("[0,1]")).unwrap().0, iu("[-1,2]"));
        assert_eq!(a_large_bounded(&IntervalUnionSet::empty()).unwrap().0, iu("[-1,1]"));
        assert_eq!(a_large_bounded(&iu("[0,inf)")).unwrap_err(), WitnessError::Unbounded);
    }

    #[test]
    fn stretch_to_cover() {
        let (b, cert) = a_large_bounded(&iu("{0}")).unwrap();
        let g = cover_witness_bounded(&cert, &iu("{5}")).unwrap();
        assert_eq!(g.apply(&int(-3)), int(-3));
        assert_eq!(g.apply(&int(1)), int(6));
        assert!(iu("{5}").is_subset(&b.image(&g)));
        let c = iu("{-7} U {7}");
        let g = cover_witness_bounded(&cert, &c).unwrap();
        assert!(c.is_subset(&b.image(&g)));
        assert!(iu("{0}").fixed_pointwise_by(&g));
        assert!(cover_witness_bounded(&cert, &iu("[0,1/2]")).unwrap().is_identity());
    }

    #[test]
    fn shrink_keeps_strict_margin() {
        let (_, cert) = a_large_bounded(&iu("{0}")).unwrap();
        let (g, out) = shrink_cover(&Instance::BoundedQ, &cert, &Elem::Intervals(iu("{10}"))).unwrap();
        let GroupElem::PL(g) = g else { panic!() };
        let y = g.apply(&int(10));
        assert!(y > int(0) && y < int(1));
        assert_eq!(g.apply(&int(0)), int(0));
        assert!(out.is_valid());
    }

    #[test]
    fn conjugation_by_doubling() {
        let (_, cert) = a_large_bounded(&iu("{0}")).unwrap();
        let double = PLMap::from_parts(vec![], vec![Affine::new(int(2), int(0))]).unwrap();
        let out = largeness_conjugation(&Instance::BoundedQ, &cert, &GroupElem::PL(double)).unwrap();
        assert_eq!(out.evidence, Evidence::Margins { l: int(-2), u: int(2) });
        assert_eq!(out.large, Elem::Intervals(iu("[-2,2]")));
        assert_eq!(out.base, Elem::Intervals(iu("{0}")));
    }

    #[test]
    fn symmetric_large_sets() {
        let (b, _) = a_large_symmetric(&BTreeSet::new(), 6, 3).unwrap();
        assert_eq!(b, BTreeSet::from([0, 1]));
        let (b, _) = a_large_symmetric(&BTreeSet::from([0]), 8, 4).unwrap();
        assert_eq!(b, BTreeSet::from([0, 1, 2, 3]));
        assert!(matches!(a_large_symmetric(&BTreeSet::from([0]), 4, 3), Err(WitnessError::InsufficientSpace(_))));
    }

    #[test]
    fn symmetric_covers() {
        let (b, cert) = a_large_symmetric(&BTreeSet::new(), 6, 3).unwrap();
        let c = BTreeSet::from([3, 5]);
        let g = cover_witness_symmetric(&cert, &c, 6).unwrap();
        assert!(c.is_subset(&g.image_set(&b)));
        let cert = LargenessCertificate {
            instance: Instance::FiniteSym { n: 8, k: 3 },
            base: Elem::Points(BTreeSet::from([0])),
            large: Elem::Points(BTreeSet::from([0, 1, 2])),
            evidence: Evidence::Fresh { count: 2 },
        };
        let c = BTreeSet::from([0, 4, 5]);
        assert!(matches!(cover_witness_symmetric(&cert, &c, 8), Err(WitnessError::NotInIdeal(_))));
        let c = BTreeSet::from([4, 5]);
        let g = cover_witness_symmetric(&cert, &c, 8).unwrap();
        assert_eq!(g.apply(0), 0);
        assert!(c.is_subset(&g.image_set(&BTreeSet::from([0, 1, 2]))));
    }

    #[test]
    fn symmetric_shrink_decrements() {
        let inst = Instance::FiniteSym { n: 8, k: 4 };
        let (b, cert) = a_large_symmetric(&BTreeSet::from([0]), 8, 4).unwrap();
        let (g, out) = shrink_cover(&inst, &cert, &Elem::Points(BTreeSet::from([6]))).unwrap();
        let GroupElem::Perm(g) = g else { panic!() };
        assert!(b.contains(&g.apply(6)) && g.apply(0) == 0);
        assert_eq!(out.evidence, Evidence::Fresh { count: 2 });
    }
}

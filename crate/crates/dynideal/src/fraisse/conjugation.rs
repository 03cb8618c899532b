//! Conjugation witnesses on homogeneous finite hosts.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::rational::int;

use super::amalgam::{all_vectors, amalgamate};
use super::structure::{FinStructure, Label, Signature, Tables};
use super::FraisseError;

pub type Automorphism = BTreeMap<Label, Label>;

pub fn pure_host(n: u32) -> FinStructure {
    FinStructure::pure(0..n)
}

/// `F_q^dim`, each vector labelled by its base-`q` value.
pub fn vector_host(q: u32, dim: usize) -> FinStructure {
    let coords = all_vectors(q, dim)
        .into_iter()
        .map(|v| (v.iter().fold(0, |acc, c| acc * q + c), v))
        .collect();
    FinStructure::vector(q, coords).expect("full space")
}

/// Leaves of the rooted tree of depth 3 with the given branching, at
/// distance 3 minus the length of their common prefix.
pub fn tree_host(branching: u32) -> FinStructure {
    let n = branching.pow(3);
    let digits = |x: u32| [x / (branching * branching), (x / branching) % branching, x % branching];
    let mut d = BTreeMap::new();
    for x in 0..n {
        for y in x + 1..n {
            let (dx, dy) = (digits(x), digits(y));
            let lcp = dx.iter().zip(&dy).take_while(|(s, t)| s == t).count();
            d.insert((x, y), int(3 - lcp as i64));
        }
    }
    FinStructure::from_metric_unchecked((0..n).collect(), d)
}

pub fn compose(g: &Automorphism, h: &Automorphism) -> Automorphism {
    h.iter().map(|(x, y)| (*x, g[y])).collect()
}

pub fn invert(g: &Automorphism) -> Automorphism {
    g.iter().map(|(x, y)| (*y, *x)).collect()
}

fn fixes(g: &Automorphism, s: &BTreeSet<Label>) -> bool {
    s.iter().all(|x| g.get(x) == Some(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationWitness {
    /// The host the automorphisms act on, enlarged when growth was needed.
    pub host: FinStructure,
    pub grown: bool,
    pub a: BTreeSet<Label>,
    pub b: BTreeSet<Label>,
    pub pi: BTreeMap<Label, Label>,
    pub e: BTreeSet<Label>,
    pub f: BTreeSet<Label>,
    pub theta: BTreeMap<Label, Label>,
    pub delta: Automorphism,
    pub gamma: Automorphism,
    /// `delta^-1 gamma delta`, which fixes `e` pointwise.
    pub kappa: Automorphism,
}

impl ConjugationWitness {
    /// Re-derive every claimed membership from the stored maps.
    pub fn verify(&self) -> Result<(), String> {
        let m = &self.host;
        let u = m.universe();
        for (name, g) in [("delta", &self.delta), ("gamma", &self.gamma), ("kappa", &self.kappa)] {
            let img: BTreeSet<Label> = g.values().copied().collect();
            if g.keys().collect::<BTreeSet<_>>() != u.iter().collect() || img != *u || !m.is_partial_iso(m, g) {
                return Err(format!("{name} is not an automorphism of the host"));
            }
        }
        if self.e.intersection(&self.f).copied().collect::<BTreeSet<_>>() != self.a {
            return Err("f meets e outside a".into());
        }
        if !self.b.is_subset(&self.e) || !m.is_closed(&self.e) || !m.is_closed(&self.f) {
            return Err("e or f is not a closed set containing b".into());
        }
        let ti: BTreeSet<Label> = self.theta.values().copied().collect();
        if self.theta.keys().copied().collect::<BTreeSet<_>>() != self.e || ti != self.f || !fixes(&self.theta, &self.a) {
            return Err("theta is not a bijection e -> f over a".into());
        }
        if self.theta.iter().any(|(x, y)| self.delta[x] != *y) || !fixes(&self.delta, &self.a) {
            return Err("delta does not extend theta".into());
        }
        if !fixes(&self.gamma, &self.f) {
            return Err("gamma moves a point of f".into());
        }
        if self.pi.iter().any(|(x, y)| self.gamma[x] != *y) {
            return Err("gamma does not extend pi".into());
        }
        if compose(&invert(&self.delta), &compose(&self.gamma, &self.delta)) != self.kappa {
            return Err("kappa is not delta^-1 gamma delta".into());
        }
        if !fixes(&self.kappa, &self.e) {
            return Err("kappa moves a point of e".into());
        }
        let back = compose(&self.delta, &compose(&self.kappa, &invert(&self.delta)));
        if back != self.gamma {
            return Err("recomposition differs from gamma".into());
        }
        // the span of e and f sits in the host as the canonical amalgam
        let ef: BTreeSet<Label> = self.e.union(&self.f).copied().collect();
        let span = m.restrict(&m.acl(&ef)).map_err(|e| e.to_string())?;
        let c = amalgamate(&m.restrict(&self.e).map_err(|e| e.to_string())?, &m.restrict(&self.f).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let id: BTreeMap<Label, Label> = ef.iter().map(|x| (*x, *x)).collect();
        if c.amalgam.find_embedding(&span, &id, true, None).is_none() {
            return Err("e and f are not freely amalgamated over a".into());
        }
        Ok(())
    }
}

/// Split `pi` on `b`: an automorphism `gamma` extending `pi` and conjugate,
/// by `delta`, to one fixing `b`.
pub fn conjugation_witness(
    host: &FinStructure,
    a: &BTreeSet<Label>,
    b: &BTreeSet<Label>,
    pi: &BTreeMap<Label, Label>,
    allow_growth: bool,
) -> Result<ConjugationWitness, FraisseError> {
    let sig = host.signature();
    if sig == Signature::QuadSelector {
        return Err(FraisseError::NotAmalgamable);
    }
    let c: BTreeSet<Label> = pi.keys().copied().collect();
    let d: BTreeSet<Label> = pi.values().copied().collect();
    if !a.is_subset(b) || !host.is_closed(a) || !host.is_closed(b) {
        return Err(FraisseError::Precondition("need closed a inside closed b".into()));
    }
    if !host.is_closed(&c) || !host.is_closed(&d) || !a.is_subset(&c) || !fixes(pi, a) || !host.is_partial_iso(host, pi) {
        return Err(FraisseError::Precondition("pi must be a partial isomorphism of closed sets fixing a".into()));
    }
    let mut m = host.clone();
    let e = m.acl(&b.iter().chain(&c).chain(&d).copied().collect());
    let big_e = m.restrict(&e)?;
    let mut next = m.universe().iter().max().map_or(0, |x| x + 1);
    let rel: BTreeMap<Label, Label> = e
        .iter()
        .map(|x| {
            if a.contains(x) {
                (*x, *x)
            } else {
                next += 1;
                (*x, next - 1)
            }
        })
        .collect();
    let cm = amalgamate(&big_e, &big_e.relabel(&rel))?.amalgam;
    let id_e: BTreeMap<Label, Label> = e.iter().map(|x| (*x, *x)).collect();
    let mut grown = false;
    let iota = match cm.find_embedding(&m, &id_e, false, None) {
        Some(i) => i,
        None if allow_growth && matches!(sig, Signature::PureSet | Signature::VectorSpace { .. }) => {
            m = amalgamate(&m, &cm)?.amalgam;
            grown = true;
            cm.universe().iter().map(|x| (*x, *x)).collect()
        }
        None => return Err(FraisseError::HostTooSmall(format!("no copy of {} over a inside the host", big_e))),
    };
    let theta: BTreeMap<Label, Label> = e.iter().map(|x| (*x, iota[&rel[x]])).collect();
    let f: BTreeSet<Label> = theta.values().copied().collect();
    let delta = m
        .find_embedding(&m, &theta, true, None)
        .ok_or_else(|| FraisseError::HostTooSmall("theta does not extend to an automorphism".into()))?;
    let mut sigma = pi.clone();
    sigma.extend(f.iter().map(|x| (*x, *x)));
    let gamma = m
        .find_embedding(&m, &sigma, true, None)
        .ok_or_else(|| FraisseError::HostTooSmall("pi with the identity on f does not extend".into()))?;
    let kappa = compose(&invert(&delta), &compose(&gamma, &delta));
    let w = ConjugationWitness { host: m, grown, a: a.clone(), b: b.clone(), pi: pi.clone(), e, f, theta, delta, gamma, kappa };
    w.verify().map_err(FraisseError::AxiomViolation)?;
    Ok(w)
}

/// A random automorphism of `m` fixing `a` pointwise.
pub fn random_automorphism(m: &FinStructure, a: &BTreeSet<Label>, rng: &mut ChaCha8Rng) -> Option<Automorphism> {
    let id: BTreeMap<Label, Label> = a.iter().map(|x| (*x, *x)).collect();
    m.find_embedding(m, &id, true, Some(rng))
}

/// A random input `(a, b, pi)` for the witness: `pi` is the restriction of
/// a random automorphism fixing `a` to the closure of `a` and one point.
#[allow(clippy::type_complexity)]
pub fn random_case(m: &FinStructure, rng: &mut ChaCha8Rng) -> (BTreeSet<Label>, BTreeSet<Label>, BTreeMap<Label, Label>) {
    let u: Vec<Label> = m.universe().iter().copied().collect();
    let pick = |rng: &mut ChaCha8Rng| u[rng.gen_range(0..u.len())];
    let seed_a: BTreeSet<Label> = if rng.gen_bool(0.5) { BTreeSet::from([pick(rng)]) } else { BTreeSet::new() };
    let a = m.acl(&seed_a);
    let mut sb = a.clone();
    sb.insert(pick(rng));
    let b = m.acl(&sb);
    let mut sc = a.clone();
    sc.insert(pick(rng));
    let c = m.acl(&sc);
    let g = random_automorphism(m, &a, rng).expect("homogeneous host");
    let pi = c.iter().map(|x| (*x, g[x])).collect();
    (a, b, pi)
}

impl FinStructure {
    pub(crate) fn from_metric_unchecked(universe: BTreeSet<Label>, d: BTreeMap<(Label, Label), crate::rational::Rational>) -> FinStructure {
        FinStructure::from_tables(universe, Tables::Metric(d))
    }
}

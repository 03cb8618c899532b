//! Supports, definable closure and the finite renderings of the choice
//! transfer results.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::ideal::{columns_of, Elem, GroupElem, Instance};
use crate::perm::GridElement;
use crate::witnesses::{cover_witness, LargenessCertificate};

use super::{HFSet, HfaError};

fn unsupported(inst: &Instance) -> HfaError {
    HfaError::UnsupportedInstance(inst.label())
}

/// Number of atoms of a finite instance; grid cells `(col, z)` are atom `col * modulus + z`.
fn ground(inst: &Instance) -> Result<usize, HfaError> {
    match inst {
        Instance::FiniteSym { n, .. } => Ok(*n),
        Instance::AbelianGrid { m, modulus } => Ok(m * modulus),
        i => Err(unsupported(i)),
    }
}

fn atoms_elem(inst: &Instance, atoms: &BTreeSet<usize>) -> Result<Elem, HfaError> {
    match inst {
        Instance::FiniteSym { .. } => Ok(Elem::Points(atoms.clone())),
        Instance::AbelianGrid { modulus, .. } => Ok(Elem::Cells(atoms.iter().map(|a| (a / modulus, a % modulus)).collect())),
        i => Err(unsupported(i)),
    }
}

fn act_atom(g: &GroupElem, modulus: usize, x: usize) -> usize {
    match g {
        GroupElem::Perm(p) => p.apply(x),
        GroupElem::Grid(v) => {
            let (c, z) = v.apply((x / modulus, x % modulus));
            c * modulus + z
        }
        GroupElem::PL(_) => unreachable!("checked by caller"),
    }
}

/// The action extended to sets by recursion on membership.
pub fn act_hf(inst: &Instance, g: &GroupElem, a: &HFSet) -> Result<HFSet, HfaError> {
    let n = ground(inst)?;
    if !inst.is_group_member(g) {
        return Err(HfaError::Precondition(format!("{g} does not act on {}", inst.label())));
    }
    if a.atoms().iter().any(|&x| x >= n) {
        return Err(HfaError::Precondition(format!("{a} has atoms outside the ground set")));
    }
    let modulus = match inst {
        Instance::AbelianGrid { modulus, .. } => *modulus,
        _ => 1,
    };
    Ok(a.map_atoms(&|x| act_atom(g, modulus, x)))
}

/// Generators of the pointwise stabilizer of `b`.
pub fn pstab_generators(inst: &Instance, b: &Elem) -> Result<Vec<GroupElem>, HfaError> {
    match (inst, b) {
        (Instance::FiniteSym { n, .. }, Elem::Points(p)) => {
            Ok(crate::perm::pstab_generators(*n, p).into_iter().map(GroupElem::Perm).collect())
        }
        (Instance::AbelianGrid { m, modulus }, Elem::Cells(c)) => {
            let used = columns_of(c);
            Ok((0..*m)
                .filter(|i| !used.contains(i))
                .map(|i| GroupElem::Grid(GridElement::unit(*m, *modulus, i)))
                .collect())
        }
        (i, _) => Err(unsupported(i)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportClaim {
    pub set: HFSet,
    pub support: Elem,
    pub verified: bool,
}

pub fn check_support(inst: &Instance, a: &HFSet, b: &Elem) -> Result<SupportClaim, HfaError> {
    let gens = pstab_generators(inst, b)?;
    let mut verified = true;
    for g in &gens {
        if act_hf(inst, g, a)? != *a {
            verified = false;
            break;
        }
    }
    Ok(SupportClaim { set: *a, support: b.clone(), verified })
}

fn subsets_of_size(items: &[usize], k: usize, out: &mut Vec<BTreeSet<usize>>) {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), out);
}

/// Ideal elements in search order: by size, then lexicographically. For the
/// grid only whole columns matter, so candidates are unions of columns.
fn candidates(inst: &Instance, budget: usize) -> Result<Vec<Elem>, HfaError> {
    let mut out = Vec::new();
    match inst {
        Instance::FiniteSym { n, k } => {
            let pts: Vec<usize> = (0..*n).collect();
            for size in 0..(*k).min(n + 1) {
                let mut layer = Vec::new();
                subsets_of_size(&pts, size, &mut layer);
                out.extend(layer.into_iter().map(Elem::Points));
                if out.len() > budget {
                    return Err(HfaError::SearchBudgetExceeded(budget));
                }
            }
        }
        Instance::AbelianGrid { m, modulus } => {
            let cols: Vec<usize> = (0..*m).collect();
            for size in 0..*m {
                let mut layer = Vec::new();
                subsets_of_size(&cols, size, &mut layer);
                for cs in layer {
                    out.push(Elem::Cells(cs.iter().flat_map(|&c| (0..*modulus).map(move |z| (c, z))).collect()));
                }
                if out.len() > budget {
                    return Err(HfaError::SearchBudgetExceeded(budget));
                }
            }
        }
        i => return Err(unsupported(i)),
    }
    Ok(out)
}

fn first_fixing(inst: &Instance, sets: &[HFSet], budget: usize) -> Result<Option<Elem>, HfaError> {
    for b in candidates(inst, budget)? {
        let gens = pstab_generators(inst, &b)?;
        let mut ok = true;
        'outer: for g in &gens {
            for s in sets {
                if act_hf(inst, g, s)? != *s {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Least support of `a` in the ideal, searching at most `budget` candidates.
pub fn find_support(inst: &Instance, a: &HFSet, budget: usize) -> Result<Option<Elem>, HfaError> {
    first_fixing(inst, &[*a], budget)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub symmetric: bool,
    /// Least support of each node of the transitive closure, when found.
    pub supports: Vec<(HFSet, Option<Elem>)>,
}

pub fn is_hereditarily_symmetric(
    inst: &Instance,
    a: &HFSet,
    max_rank: usize,
    budget: usize,
) -> Result<SymmetryReport, HfaError> {
    if a.rank() > max_rank {
        return Err(HfaError::Precondition(format!("rank {} above {max_rank}", a.rank())));
    }
    let mut supports = Vec::new();
    for x in a.transitive_closure() {
        supports.push((x, find_support(inst, &x, budget)?));
    }
    let symmetric = supports.iter().all(|(_, s)| s.is_some());
    Ok(SymmetryReport { symmetric, supports })
}

/// Atoms fixed by every generator of `pstab(a)`.
pub fn definable_closure(inst: &Instance, a: &Elem) -> Result<Elem, HfaError> {
    let n = ground(inst)?;
    let gens = pstab_generators(inst, a)?;
    let mut out = BTreeSet::new();
    for x in 0..n {
        let atom = HFSet::atom(x);
        let mut fixed = true;
        for g in &gens {
            if act_hf(inst, g, &atom)? != atom {
                fixed = false;
                break;
            }
        }
        if fixed {
            out.insert(x);
        }
    }
    atoms_elem(inst, &out)
}

/// `check_support(γ·A, γ·b)` for a verified claim `(A, b)`.
pub fn support_invariance(inst: &Instance, g: &GroupElem, b: &Elem, a: &HFSet) -> Result<bool, HfaError> {
    let ga = act_hf(inst, g, a)?;
    let gb = inst.act(g, b)?;
    Ok(check_support(inst, &ga, &gb)?.verified)
}

/// Least `b` whose pointwise stabilizer fixes every member of `family`.
pub fn wo_criterion(inst: &Instance, family: &HFSet, budget: usize) -> Result<Option<Elem>, HfaError> {
    first_fixing(inst, &family.members(), budget)
}

/// Orbit of `a` under the group generated by `gens`.
pub fn orbit(inst: &Instance, gens: &[GroupElem], a: &HFSet) -> Result<BTreeSet<HFSet>, HfaError> {
    let mut seen = BTreeSet::from([*a]);
    let mut queue = VecDeque::from([*a]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = act_hf(inst, g, &x)?;
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// A selector `{⟨B, C⟩ : B ∈ family}` supported by the large set of `cert`.
pub fn choice_selector(
    inst: &Instance,
    family: &HFSet,
    a: &Elem,
    cert: &LargenessCertificate,
    budget: usize,
) -> Result<(HFSet, SupportClaim), HfaError> {
    if cert.base != *a {
        return Err(HfaError::Precondition("certificate is not for a".into()));
    }
    for b in family.members() {
        if b.is_atom() || b.members().is_empty() {
            return Err(HfaError::Precondition(format!("member {b} has nothing to choose")));
        }
        if !check_support(inst, &b, a)?.verified {
            return Err(HfaError::Precondition(format!("a does not support member {b}")));
        }
    }
    let mut pairs = Vec::new();
    for b in family.members() {
        let d = b.members()[0];
        let sd = find_support(inst, &d, budget)?.ok_or(HfaError::NoSupportFound)?;
        let gamma = cover_witness(inst, cert, &sd).map_err(|e| HfaError::CoverFailed(e.to_string()))?;
        let c = act_hf(inst, &inst.inverse(&gamma), &d)?;
        pairs.push(HFSet::pair(b, c));
    }
    let f = HFSet::set(pairs);
    let claim = check_support(inst, &f, &cert.large)?;
    Ok((f, claim))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub orbits: HFSet,
    /// Each orbit is fixed setwise by `pstab(a)`.
    pub orbits_invariant: bool,
    /// For each member `D` with support `d ⊇ a`, `pstab(d)` fixes every
    /// element of the orbit of `D`.
    pub supports_spread: bool,
}

pub fn orbit_decomposition(inst: &Instance, a_set: &HFSet, a: &Elem, budget: usize) -> Result<OrbitDecomposition, HfaError> {
    if !matches!(inst, Instance::AbelianGrid { .. }) {
        return Err(HfaError::NotAbelian(inst.label()));
    }
    if !check_support(inst, a_set, a)?.verified {
        return Err(HfaError::Precondition(format!("{a} does not support the set")));
    }
    let gens = pstab_generators(inst, a)?;
    let mut orbits = BTreeSet::new();
    for d in a_set.members() {
        orbits.insert(HFSet::set(orbit(inst, &gens, &d)?));
    }
    let mut orbits_invariant = true;
    for o in &orbits {
        for g in &gens {
            orbits_invariant &= act_hf(inst, g, o)? == *o;
        }
    }
    let mut supports_spread = true;
    for o in &orbits {
        for d in o.members() {
            let sd = find_support(inst, &d, budget)?.ok_or(HfaError::NoSupportFound)?;
            let big = inst.union(&sd, a)?;
            for g in pstab_generators(inst, &big)? {
                for e in o.members() {
                    supports_spread &= act_hf(inst, &g, &e)? == e;
                }
            }
        }
    }
    Ok(OrbitDecomposition { orbits: HFSet::set(orbits), orbits_invariant, supports_spread })
}

/// The two parity classes of column `c`.
pub fn column_classes(modulus: usize, c: usize) -> (HFSet, HFSet) {
    let class = |r: usize| HFSet::set((0..modulus).filter(|z| z % 2 == r).map(|z| HFSet::atom(c * modulus + z)));
    (class(0), class(1))
}

/// The family `{{E_c, O_c} : c < m}` of class pairs.
pub fn parity_pairs(m: usize, modulus: usize) -> HFSet {
    HFSet::set((0..m).map(|c| {
        let (e, o) = column_classes(modulus, c);
        HFSet::set([e, o])
    }))
}

/// All `2^m` selectors on the class pairs.
pub fn selectors(m: usize, modulus: usize) -> Vec<HFSet> {
    (0..1usize << m)
        .map(|mask| {
            HFSet::set((0..m).map(|c| {
                let (e, o) = column_classes(modulus, c);
                let pick = if mask >> c & 1 == 1 { o } else { e };
                HFSet::pair(HFSet::set([e, o]), pick)
            }))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub gamma: GroupElem,
    pub column: usize,
    /// The class pair whose chosen value is moved.
    pub pair: HFSet,
}

/// A unit shift on a column off `b` that moves `f` although it fixes `b`.
pub fn abelian_refuter(inst: &Instance, f: &HFSet, b: &Elem) -> Result<Refutation, HfaError> {
    let Instance::AbelianGrid { m, modulus } = inst else {
        return Err(HfaError::NotAbelian(inst.label()));
    };
    let Elem::Cells(cells) = b else {
        return Err(unsupported(inst));
    };
    let used = columns_of(cells);
    if used.len() >= *m {
        return Err(HfaError::NoWitness("b meets every column".into()));
    }
    for c in (0..*m).filter(|c| !used.contains(c)) {
        let gamma = GroupElem::Grid(GridElement::unit(*m, *modulus, c));
        if act_hf(inst, &gamma, f)? != *f {
            let (e, o) = column_classes(*modulus, c);
            return Ok(Refutation { gamma, column: c, pair: HFSet::set([e, o]) });
        }
    }
    Err(HfaError::NoWitness("every free unit shift fixes the candidate".into()))
}

/// Seeded set of the given depth over the instance's atoms.
pub fn sample_hf(inst: &Instance, rng: &mut ChaCha8Rng, depth: usize, width: usize) -> Result<HFSet, HfaError> {
    let n = ground(inst)?;
    Ok(sample_rec(rng, n, depth, width))
}

fn sample_rec(rng: &mut ChaCha8Rng, n: usize, depth: usize, width: usize) -> HFSet {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.8) { HFSet::atom(rng.gen_range(0..n)) } else { HFSet::empty() };
    }
    let size = rng.gen_range(0..=width);
    HFSet::set((0..size).map(|_| sample_rec(rng, n, depth - 1, width)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::FinitePermutation;
    use crate::witnesses::a_large_symmetric;

    fn pts(xs: &[usize]) -> Elem {
        Elem::Points(xs.iter().copied().collect())
    }

    fn hf(s: &str) -> HFSet {
        HFSet::parse(s).unwrap()
    }

    #[test]
    fn recursive_action() {
        let inst = Instance::FiniteSym { n: 4, k: 3 };
        let g = GroupElem::Perm(FinitePermutation::transposition(4, 0, 1));
        assert_eq!(act_hf(&inst, &g, &hf("{@0, {@1}}")).unwrap(), hf("{@1, {@0}}"));
        assert_eq!(act_hf(&inst, &g, &hf("{{}, {{}}}")).unwrap(), hf("{{}, {{}}}"));
    }

    #[test]
    fn generators() {
        let inst = Instance::FiniteSym { n: 5, k: 3 };
        let g = pstab_generators(&inst, &pts(&[0, 1])).unwrap();
        let s: Vec<String> = g.iter().map(|g| g.to_string()).collect();
        assert_eq!(s, ["5:(2 3)", "5:(3 4)"]);
        assert!(pstab_generators(&inst, &pts(&[0, 1, 2, 3, 4])).unwrap().is_empty());
        let grid = Instance::AbelianGrid { m: 3, modulus: 4 };
        let col0 = Elem::Cells((0..4).map(|z| (0, z)).collect());
        let g: Vec<String> = pstab_generators(&grid, &col0).unwrap().iter().map(|g| g.to_string()).collect();
        assert_eq!(g, ["4:[0,1,0]", "4:[0,0,1]"]);
        assert!(pstab_generators(&Instance::BoundedQ, &Instance::BoundedQ.empty()).is_err());
    }

    #[test]
    fn supports() {
        let inst = Instance::FiniteSym { n: 4, k: 3 };
        assert!(check_support(&inst, &hf("{@0}"), &pts(&[0])).unwrap().verified);
        assert!(!check_support(&inst, &hf("{@0}"), &pts(&[])).unwrap().verified);
        let grid = Instance::AbelianGrid { m: 3, modulus: 4 };
        assert!(check_support(&grid, &parity_pairs(3, 4), &grid.empty()).unwrap().verified);
        let chain = is_hereditarily_symmetric(&inst, &hf("{{{@0}}}"), 5, 1000).unwrap();
        assert!(chain.symmetric);
        assert_eq!(chain.supports.iter().find(|(x, _)| *x == hf("{{{@0}}}")).unwrap().1, Some(pts(&[0])));
        let all = HFSet::set((0..4).map(HFSet::atom));
        assert_eq!(find_support(&inst, &all, 100).unwrap(), Some(pts(&[])));
    }

    #[test]
    fn closures() {
        let inst = Instance::FiniteSym { n: 6, k: 7 };
        assert_eq!(definable_closure(&inst, &pts(&[0])).unwrap(), pts(&[0]));
        assert_eq!(definable_closure(&inst, &pts(&[0, 1, 2, 3, 4])).unwrap(), pts(&[0, 1, 2, 3, 4, 5]));
        let grid = Instance::AbelianGrid { m: 3, modulus: 4 };
        let cell = Elem::Cells([(1, 2)].into());
        assert_eq!(definable_closure(&grid, &cell).unwrap(), Elem::Cells((0..4).map(|z| (1, z)).collect()));
    }

    #[test]
    fn well_ordering_supports() {
        let inst = Instance::FiniteSym { n: 5, k: 4 };
        assert_eq!(wo_criterion(&inst, &hf("{{}, {{}}}"), 100).unwrap(), Some(pts(&[])));
        assert_eq!(wo_criterion(&inst, &hf("{{@0}, {@1}}"), 100).unwrap(), Some(pts(&[0, 1])));
        let grid = Instance::AbelianGrid { m: 3, modulus: 4 };
        let (e, o) = column_classes(4, 1);
        let found = wo_criterion(&grid, &HFSet::set([e, o]), 100).unwrap().unwrap();
        assert_eq!(found, Elem::Cells((0..4).map(|z| (1, z)).collect()));
    }

    #[test]
    fn selector_pipeline() {
        let inst = Instance::FiniteSym { n: 8, k: 3 };
        let all = pstab_generators(&inst, &pts(&[])).unwrap();
        let o1 = HFSet::set(orbit(&inst, &all, &hf("{@5}")).unwrap());
        let o2 = HFSet::set(orbit(&inst, &all, &hf("{@3, @6}")).unwrap());
        let family = HFSet::set([o1, o2]);
        let (_, cert) = a_large_symmetric(&BTreeSet::new(), 8, 3).unwrap();
        let (f, claim) = choice_selector(&inst, &family, &pts(&[]), &cert, 1000).unwrap();
        assert!(claim.verified);
        assert_eq!(f.members().len(), 2);
        let bad = HFSet::set([HFSet::empty()]);
        assert!(matches!(choice_selector(&inst, &bad, &pts(&[]), &cert, 1000), Err(HfaError::Precondition(_))));
    }

    #[test]
    fn grid_orbits_and_refuter() {
        let grid = Instance::AbelianGrid { m: 3, modulus: 4 };
        let col = HFSet::set((0..4).map(|z| HFSet::atom(4 + z)));
        let d = orbit_decomposition(&grid, &col, &grid.empty(), 100).unwrap();
        assert_eq!(d.orbits.members().len(), 1);
        assert!(d.orbits_invariant && d.supports_spread);
        let small = Instance::AbelianGrid { m: 2, modulus: 2 };
        for f in selectors(2, 2) {
            let r = abelian_refuter(&small, &f, &small.empty()).unwrap();
            assert_ne!(act_hf(&small, &r.gamma, &f).unwrap(), f);
        }
        let full = Elem::Cells([(0, 0), (1, 0)].into());
        assert!(matches!(abelian_refuter(&small, &selectors(2, 2)[0], &full), Err(HfaError::NoWitness(_))));
    }
}

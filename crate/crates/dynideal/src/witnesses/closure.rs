//! Exact subgroup enumeration in small symmetric groups, normal closures,
//! and two-factor conjugation witnesses.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::perm::{pstab_generators, FinitePermutation};

use super::WitnessError;

pub const MAX_ENUMERATION_DEGREE: usize = 9;

// Permutations of at most 16 points packed 4 bits per image.
type Packed = u64;

fn pack(p: &FinitePermutation) -> Packed {
    p.images().iter().enumerate().fold(0, |acc, (i, &x)| acc | ((x as u64) << (4 * i)))
}

fn unpack(x: Packed, n: usize) -> FinitePermutation {
    let map = (0..n).map(|i| ((x >> (4 * i)) & 0xf) as usize).collect();
    FinitePermutation::from_images(map).expect("packed permutation")
}

fn image(x: Packed, i: usize) -> u64 {
    (x >> (4 * i)) & 0xf
}

/// `a ∘ b`.
fn mul(a: Packed, b: Packed, n: usize) -> Packed {
    (0..n).fold(0, |acc, i| acc | (image(a, image(b, i) as usize) << (4 * i)))
}

fn identity(n: usize) -> Packed {
    (0..n).fold(0, |acc, i| acc | ((i as u64) << (4 * i)))
}

fn closure(gens: &[Packed], n: usize) -> HashSet<Packed> {
    let id = identity(n);
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = mul(g, x, n);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// An explicitly enumerated subgroup of `Sym(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    degree: usize,
    elements: BTreeSet<Packed>,
}

impl Subgroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &FinitePermutation) -> bool {
        p.degree() == self.degree && self.elements.contains(&pack(p))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.degree == other.degree && self.elements.is_subset(&other.elements)
    }

    pub fn elements(&self) -> Vec<FinitePermutation> {
        self.elements.iter().map(|&x| unpack(x, self.degree)).collect()
    }
}

fn budget(n: usize) -> Result<(), WitnessError> {
    if n > MAX_ENUMERATION_DEGREE {
        Err(WitnessError::BudgetExceeded(n))
    } else {
        Ok(())
    }
}

fn packed_all(gens: &[FinitePermutation], n: usize) -> Result<Vec<Packed>, WitnessError> {
    gens.iter()
        .map(|g| {
            if g.degree() == n {
                Ok(pack(g))
            } else {
                Err(WitnessError::Precondition(format!("{g} is not of degree {n}")))
            }
        })
        .collect()
}

/// The subgroup generated by `gens`.
pub fn enumerate_group(gens: &[FinitePermutation], n: usize) -> Result<Subgroup, WitnessError> {
    budget(n)?;
    let g = packed_all(gens, n)?;
    Ok(Subgroup { degree: n, elements: closure(&g, n).into_iter().collect() })
}

/// Least subgroup of `⟨ambient⟩` containing `core` and closed under
/// conjugation by the ambient generators.
pub fn normal_closure(
    core: &[FinitePermutation],
    ambient: &[FinitePermutation],
    n: usize,
) -> Result<Subgroup, WitnessError> {
    budget(n)?;
    let amb = packed_all(ambient, n)?;
    let whole = closure(&amb, n);
    let mut gens = packed_all(core, n)?;
    if let Some(x) = gens.iter().find(|x| !whole.contains(x)) {
        return Err(WitnessError::Precondition(format!("{} outside the ambient group", unpack(*x, n))));
    }
    let inv: Vec<Packed> = ambient.iter().map(|g| pack(&g.inverse())).collect();
    let mut h = closure(&gens, n);
    loop {
        let mut fresh = None;
        'search: for (g, gi) in amb.iter().zip(&inv) {
            for &x in &gens {
                let c = mul(mul(*g, x, n), *gi, n);
                if !h.contains(&c) {
                    fresh = Some(c);
                    break 'search;
                }
            }
        }
        match fresh {
            None => break,
            Some(c) => {
                gens.push(c);
                h = closure(&gens, n);
            }
        }
    }
    Ok(Subgroup { degree: n, elements: h.into_iter().collect() })
}

/// Whether the normal closure of `pstab(b)` in `pstab(a)` is all of `pstab(a)`.
pub fn simplicity_check(n: usize, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Result<bool, WitnessError> {
    budget(n)?;
    if !a.is_subset(b) || b.iter().any(|&x| x >= n) {
        return Err(WitnessError::Precondition(format!("need a ⊆ b ⊆ 0..{n}")));
    }
    let ambient = pstab_generators(n, a);
    let core = pstab_generators(n, b);
    let h = normal_closure(&core, &ambient, n)?;
    let g = enumerate_group(&ambient, n)?;
    Ok(h == g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub conjugator: FinitePermutation,
    pub core: FinitePermutation,
    /// A set containing `b` that `core` fixes pointwise.
    pub fixes: BTreeSet<usize>,
}

/// `γ = ∏ δ_i κ_i δ_i⁻¹` with every `κ_i` fixing `b` and every `δ_i` fixing `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationWitness {
    pub target: FinitePermutation,
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
    pub factors: Vec<Factor>,
}

impl FactorizationWitness {
    pub fn recompose(&self) -> FinitePermutation {
        self.factors.iter().fold(FinitePermutation::identity(self.target.degree()), |acc, f| {
            acc.compose(&f.conjugator.compose(&f.core).compose(&f.conjugator.inverse()))
        })
    }

    pub fn verify(&self) -> Result<(), String> {
        if self.recompose() != self.target {
            return Err("recomposition differs from the target".into());
        }
        for (i, f) in self.factors.iter().enumerate() {
            if !f.conjugator.fixes_pointwise(&self.a) {
                return Err(format!("conjugator {i} moves a"));
            }
            if !self.b.is_subset(&f.fixes) || !f.core.fixes_pointwise(&f.fixes) {
                return Err(format!("core {i} does not fix its annotated set"));
            }
        }
        Ok(())
    }
}

/// Split `γ ∈ pstab(a)` as `δ(δ⁻¹αδ)δ⁻¹ · (α⁻¹γ)` where `α` agrees with `γ`
/// on `b` and is supported on `e = b ∪ γb`, and `δ` moves `b∖a` off `e`.
pub fn conjugate_factorization(
    gamma: &FinitePermutation,
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
    n: usize,
) -> Result<FactorizationWitness, WitnessError> {
    if gamma.degree() != n || b.iter().any(|&x| x >= n) || !a.is_subset(b) {
        return Err(WitnessError::Precondition(format!("need a ⊆ b ⊆ 0..{n} and γ of degree {n}")));
    }
    if !gamma.fixes_pointwise(a) {
        return Err(WitnessError::Precondition("γ moves a".into()));
    }
    let mut out = FactorizationWitness { target: gamma.clone(), a: a.clone(), b: b.clone(), factors: Vec::new() };
    if gamma.is_identity() {
        return Ok(out);
    }
    let gb = gamma.image_set(b);
    let c: BTreeSet<usize> = b.union(&gb).copied().collect();
    let mut images: Vec<usize> = (0..n).collect();
    for &x in b {
        images[x] = gamma.apply(x);
    }
    // the rest of e goes onto the rest of e in order
    for (x, y) in c.difference(b).zip(c.difference(&gb)) {
        images[*x] = *y;
    }
    let moving: Vec<usize> = b.difference(a).copied().collect();
    let outside: Vec<usize> = (0..n).filter(|x| !c.contains(x)).take(moving.len()).collect();
    if outside.len() < moving.len() {
        return Err(WitnessError::InsufficientSpace(format!(
            "N = {n} < |e| + |b∖a| = {}",
            c.len() + moving.len()
        )));
    }
    let alpha = FinitePermutation::from_images(images).expect("bijection of e");
    let delta = FinitePermutation::swaps(n, &moving.iter().copied().zip(outside).collect::<Vec<_>>());
    let core1 = delta.inverse().compose(&alpha).compose(&delta);
    // α fixes a and everything off e, so the conjugate fixes δ⁻¹ of that set
    let still: BTreeSet<usize> = (0..n).filter(|x| !c.contains(x) || a.contains(x)).collect();
    let fixes1 = delta.inverse().image_set(&still);
    let core2 = alpha.inverse().compose(gamma);
    out.factors.push(Factor { conjugator: delta, core: core1, fixes: fixes1 });
    out.factors.push(Factor { conjugator: FinitePermutation::identity(n), core: core2, fixes: b.clone() });
    Ok(out)
}

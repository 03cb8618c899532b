//! Hereditarily finite sets over a finite set of atoms, hash-consed so that
//! equal sets share one id, with the group action extended by recursion.

mod support;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use dashmap::mapref::entry::Entry;
use dashmap::DashMap;
use thiserror::Error;

use crate::error::ParseError;
use crate::ideal::IdealError;

pub use support::{
    abelian_refuter, act_hf, check_support, choice_selector, column_classes, definable_closure, find_support,
    is_hereditarily_symmetric, orbit, orbit_decomposition, parity_pairs, pstab_generators, sample_hf, selectors,
    support_invariance, wo_criterion, OrbitDecomposition, Refutation, SupportClaim, SymmetryReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HfaError {
    #[error("unsupported instance {0}")]
    UnsupportedInstance(String),
    #[error("support search budget of {0} candidates exceeded")]
    SearchBudgetExceeded(usize),
    #[error("no support found")]
    NoSupportFound,
    #[error("cover failed: {0}")]
    CoverFailed(String),
    #[error("instance {0} is not abelian")]
    NotAbelian(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Atom(usize),
    Set(Vec<HFSet>),
}

/// Handle into the global table; equal sets have equal handles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HFSet(u32);

struct Table {
    ids: DashMap<Node, u32>,
    nodes: RwLock<Vec<Arc<Node>>>,
}

static TABLE: LazyLock<Table> = LazyLock::new(|| Table { ids: DashMap::new(), nodes: RwLock::new(Vec::new()) });

fn intern(node: Node) -> HFSet {
    if let Some(id) = TABLE.ids.get(&node) {
        return HFSet(*id);
    }
    match TABLE.ids.entry(node) {
        Entry::Occupied(e) => HFSet(*e.get()),
        Entry::Vacant(v) => {
            let mut nodes = TABLE.nodes.write().expect("table lock");
            let id = u32::try_from(nodes.len()).expect("table overflow");
            nodes.push(Arc::new(v.key().clone()));
            v.insert(id);
            HFSet(id)
        }
    }
}

fn node(x: HFSet) -> Arc<Node> {
    TABLE.nodes.read().expect("table lock")[x.0 as usize].clone()
}

impl HFSet {
    pub fn atom(i: usize) -> HFSet {
        intern(Node::Atom(i))
    }

    pub fn set<I: IntoIterator<Item = HFSet>>(members: I) -> HFSet {
        let mut v: Vec<HFSet> = members.into_iter().collect();
        v.sort();
        v.dedup();
        intern(Node::Set(v))
    }

    pub fn empty() -> HFSet {
        HFSet::set([])
    }

    /// Kuratowski pair `{{x}, {x, y}}`.
    pub fn pair(x: HFSet, y: HFSet) -> HFSet {
        HFSet::set([HFSet::set([x]), HFSet::set([x, y])])
    }

    /// Components of a Kuratowski pair.
    pub fn unpair(&self) -> Option<(HFSet, HFSet)> {
        let m = self.members();
        match m.as_slice() {
            [one] => {
                let x = one.members();
                (x.len() == 1).then(|| (x[0], x[0]))
            }
            [s, t] => {
                let (s, t) = if s.members().len() == 1 { (s, t) } else { (t, s) };
                let x = *s.members().first()?;
                let rest: Vec<HFSet> = t.members().into_iter().filter(|z| *z != x).collect();
                (s.members().len() == 1 && rest.len() == 1 && t.members().contains(&x)).then(|| (x, rest[0]))
            }
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<usize> {
        match *node(*self) {
            Node::Atom(i) => Some(i),
            Node::Set(_) => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        self.as_atom().is_some()
    }

    /// Members in canonical order; atoms have none.
    pub fn members(&self) -> Vec<HFSet> {
        match &*node(*self) {
            Node::Atom(_) => Vec::new(),
            Node::Set(v) => v.clone(),
        }
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        match &*node(*self) {
            Node::Atom(_) => false,
            Node::Set(v) => v.binary_search(x).is_ok(),
        }
    }

    /// Atoms have rank 0, a set one more than its highest member.
    pub fn rank(&self) -> usize {
        match &*node(*self) {
            Node::Atom(_) => 0,
            Node::Set(v) => v.iter().map(|m| m.rank() + 1).max().unwrap_or(0),
        }
    }

    /// Atoms in the transitive closure.
    pub fn atoms(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<usize>) {
        match &*node(*self) {
            Node::Atom(i) => {
                out.insert(*i);
            }
            Node::Set(v) => v.iter().for_each(|m| m.collect_atoms(out)),
        }
    }

    pub fn is_pure(&self) -> bool {
        self.atoms().is_empty()
    }

    /// Every set and atom below and including `self`.
    pub fn transitive_closure(&self) -> BTreeSet<HFSet> {
        let mut out = BTreeSet::new();
        let mut stack = vec![*self];
        while let Some(x) = stack.pop() {
            if out.insert(x) {
                stack.extend(x.members());
            }
        }
        out
    }

    /// Rename atoms by `f`, recursively.
    pub fn map_atoms(&self, f: &impl Fn(usize) -> usize) -> HFSet {
        match &*node(*self) {
            Node::Atom(i) => HFSet::atom(f(*i)),
            Node::Set(v) => HFSet::set(v.iter().map(|m| m.map_atoms(f))),
        }
    }

    /// Parse `@k` atoms and `{...}` sets.
    pub fn parse(s: &str) -> Result<HFSet, ParseError> {
        let b = s.as_bytes();
        let mut i = 0;
        let x = parse_at(b, &mut i)?;
        skip_ws(b, &mut i);
        if i != b.len() {
            return Err(ParseError::new(format!("trailing input at byte {i}")));
        }
        Ok(x)
    }
}

fn skip_ws(b: &[u8], i: &mut usize) {
    while *i < b.len() && b[*i].is_ascii_whitespace() {
        *i += 1;
    }
}

fn parse_at(b: &[u8], i: &mut usize) -> Result<HFSet, ParseError> {
    skip_ws(b, i);
    match b.get(*i) {
        Some(b'@') => {
            *i += 1;
            let start = *i;
            while *i < b.len() && b[*i].is_ascii_digit() {
                *i += 1;
            }
            let t = std::str::from_utf8(&b[start..*i]).expect("ascii digits");
            t.parse().map(HFSet::atom).map_err(|_| ParseError::new(format!("bad atom at byte {start}")))
        }
        Some(b'{') => {
            *i += 1;
            let mut members = Vec::new();
            skip_ws(b, i);
            if b.get(*i) == Some(&b'}') {
                *i += 1;
                return Ok(HFSet::empty());
            }
            loop {
                members.push(parse_at(b, i)?);
                skip_ws(b, i);
                match b.get(*i) {
                    Some(b',') => *i += 1,
                    Some(b'}') => {
                        *i += 1;
                        return Ok(HFSet::set(members));
                    }
                    _ => return Err(ParseError::new(format!("expected ',' or '}}' at byte {i}"))),
                }
            }
        }
        _ => Err(ParseError::new(format!("expected '@' or '{{' at byte {i}"))),
    }
}

impl Ord for HFSet {
    /// Atoms first by index, then sets by their member lists.
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match (&*node(*self), &*node(*other)) {
            (Node::Atom(a), Node::Atom(b)) => a.cmp(b),
            (Node::Atom(_), Node::Set(_)) => Ordering::Less,
            (Node::Set(_), Node::Atom(_)) => Ordering::Greater,
            (Node::Set(a), Node::Set(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for HFSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*node(*self) {
            Node::Atom(i) => write!(f, "@{i}"),
            Node::Set(v) => {
                write!(f, "{{")?;
                for (i, m) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

//! Permutations of `{0, ..., n-1}` and the abelian grid group.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::ParseError;

/// A bijection of `{0, ..., n-1}` stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePermutation {
    map: Vec<usize>,
}

impl FinitePermutation {
    pub fn identity(n: usize) -> Self {
        FinitePermutation { map: (0..n).collect() }
    }

    pub fn from_images(map: Vec<usize>) -> Result<Self, ParseError> {
        let mut seen = vec![false; map.len()];
        for &x in &map {
            if x >= map.len() || seen[x] {
                return Err(ParseError::new(format!("not a permutation: {map:?}")));
            }
            seen[x] = true;
        }
        Ok(FinitePermutation { map })
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(i, j);
        FinitePermutation { map }
    }

    /// Product of disjoint swaps `(x y)`.
    pub fn swaps(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        for &(x, y) in pairs {
            map.swap(x, y);
        }
        FinitePermutation { map }
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FinitePermutation) -> FinitePermutation {
        FinitePermutation { map: other.map.iter().map(|&x| self.map[x]).collect() }
    }

    pub fn inverse(&self) -> FinitePermutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        FinitePermutation { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn image_set(&self, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        s.iter().map(|&x| self.map[x]).collect()
    }

    pub fn fixes_pointwise(&self, s: &BTreeSet<usize>) -> bool {
        s.iter().all(|&x| self.map[x] == x)
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> BTreeSet<usize> {
        self.map.iter().enumerate().filter(|(i, x)| i != *x).map(|(i, _)| i).collect()
    }

    /// Parse `n:(a b c)(d e)` cycle notation; `n:()` is the identity.
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let (n, cycles) = s.trim().split_once(':').ok_or_else(|| ParseError::new("expected degree prefix"))?;
        let n: usize = n.trim().parse().map_err(|_| ParseError::new("bad degree"))?;
        let mut map: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let mut rest = cycles.trim();
        if rest == "()" {
            return Ok(FinitePermutation { map });
        }
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| ParseError::new("expected '('"))?;
            let close = body.find(')').ok_or_else(|| ParseError::new("unclosed cycle"))?;
            let pts: Vec<usize> = body[..close]
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| ParseError::new(format!("bad point {t:?}"))))
                .collect::<Result<_, _>>()?;
            if pts.len() < 2 {
                return Err(ParseError::new("cycles need two points"));
            }
            for (i, &p) in pts.iter().enumerate() {
                if p >= n || seen[p] {
                    return Err(ParseError::new("repeated or out-of-range point"));
                }
                seen[p] = true;
                map[p] = pts[(i + 1) % pts.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        let out = FinitePermutation { map };
        if out.to_string() != s.trim() {
            return Err(ParseError::new("permutation text is not canonical"));
        }
        Ok(out)
    }
}

impl fmt::Display for FinitePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.map.len())?;
        let mut seen = vec![false; self.map.len()];
        let mut any = false;
        for start in 0..self.map.len() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.map[x];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Adjacent transpositions of the sorted complement of `b` in `{0..n-1}`;
/// they generate the pointwise stabilizer of `b`.
pub fn pstab_generators(n: usize, b: &BTreeSet<usize>) -> Vec<FinitePermutation> {
    let free: Vec<usize> = (0..n).filter(|x| !b.contains(x)).collect();
    free.windows(2).map(|w| FinitePermutation::transposition(n, w[0], w[1])).collect()
}

/// A vector in `(Z/modulus)^m`, acting on cells `(column, z)` by shifting
/// each column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridElement {
    modulus: usize,
    shift: Vec<usize>,
}

impl GridElement {
    pub fn new(modulus: usize, shift: Vec<usize>) -> Self {
        let shift = shift.into_iter().map(|s| s % modulus).collect();
        GridElement { modulus, shift }
    }

    pub fn zero(m: usize, modulus: usize) -> Self {
        GridElement { modulus, shift: vec![0; m] }
    }

    pub fn unit(m: usize, modulus: usize, col: usize) -> Self {
        let mut shift = vec![0; m];
        shift[col] = 1 % modulus;
        GridElement { modulus, shift }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shift
    }

    pub fn columns(&self) -> usize {
        self.shift.len()
    }

    pub fn add(&self, o: &GridElement) -> GridElement {
        let shift = self.shift.iter().zip(&o.shift).map(|(a, b)| (a + b) % self.modulus).collect();
        GridElement { modulus: self.modulus, shift }
    }

    pub fn neg(&self) -> GridElement {
        let shift = self.shift.iter().map(|a| (self.modulus - a) % self.modulus).collect();
        GridElement { modulus: self.modulus, shift }
    }

    pub fn is_zero(&self) -> bool {
        self.shift.iter().all(|&a| a == 0)
    }

    pub fn apply(&self, cell: (usize, usize)) -> (usize, usize) {
        (cell.0, (cell.1 + self.shift[cell.0]) % self.modulus)
    }

    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let (m, body) = s.trim().split_once(':').ok_or_else(|| ParseError::new("expected modulus prefix"))?;
        let modulus: usize = m.trim().parse().map_err(|_| ParseError::new("bad modulus"))?;
        let body = body.trim().strip_prefix('[').and_then(|b| b.strip_suffix(']'));
        let body = body.ok_or_else(|| ParseError::new("expected [..]"))?;
        let shift: Vec<usize> = body
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse().map_err(|_| ParseError::new("bad shift")))
            .collect::<Result<_, _>>()?;
        if modulus == 0 || shift.iter().any(|&x| x >= modulus) {
            return Err(ParseError::new("shift out of range"));
        }
        Ok(GridElement { modulus, shift })
    }
}

impl fmt::Display for GridElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.shift.iter().map(|x| x.to_string()).collect();
        write!(f, "{}:[{}]", self.modulus, parts.join(","))
    }
}

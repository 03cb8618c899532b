//! Linear algebra over a prime field `F_q`.

pub fn is_prime(q: u32) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

pub fn inv(x: u32, q: u32) -> u32 {
    // Fermat
    let (mut r, mut b, mut e) = (1u64, x as u64 % q as u64, q as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q as u64;
        }
        b = b * b % q as u64;
        e >>= 1;
    }
    r as u32
}

/// Rows in reduced echelon form with unit pivots.
pub struct Echelon {
    q: u32,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(q: u32, _dim: usize) -> Self {
        Echelon { q, rows: Vec::new() }
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let q = self.q;
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let c = v[*p];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + (q - c) * r) % q;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Add `v`; `false` when it was already in the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let q = self.q;
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv(v[p], q);
        v.iter_mut().for_each(|x| *x = *x * s % q);
        for (_, row) in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = (*x + (q - c) * r) % q;
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Coefficients of `v` in the independent vectors `basis`, if it lies in their span.
pub fn solve(q: u32, basis: &[Vec<u32>], v: &[u32]) -> Option<Vec<u32>> {
    let k = basis.len();
    let n = v.len();
    // augmented columns: basis vectors then v
    let mut m: Vec<Vec<u32>> = (0..n).map(|i| basis.iter().map(|b| b[i]).chain([v[i]]).collect()).collect();
    let mut row = 0;
    let mut piv = Vec::new();
    for col in 0..k {
        let Some(r) = (row..n).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, r);
        let s = inv(m[row][col], q);
        m[row].iter_mut().for_each(|x| *x = *x * s % q);
        for r2 in 0..n {
            if r2 != row && m[r2][col] != 0 {
                let c = m[r2][col];
                let pr = m[row].clone();
                for (x, p) in m[r2].iter_mut().zip(&pr) {
                    *x = (*x + (q - c) * p) % q;
                }
            }
        }
        piv.push(col);
        row += 1;
    }
    if (row..n).any(|r| m[r][k] != 0) {
        return None;
    }
    let mut out = vec![0; k];
    for (r, &c) in piv.iter().enumerate() {
        out[c] = m[r][k];
    }
    Some(out)
}

//! Linear algebra over `F_p` and `Z/p^E`: reduced echelon subspaces and the
//! solution lattice of a homogeneous congruence system.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::arith::{inv_mod, mul_mod, sub_mod, vp_capped};

/// A subspace of `F_p^n` stored as its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpSubspace {
    pub p: u64,
    pub ambient: usize,
    pub rows: Vec<Vec<u64>>,
}

fn rref(p: u64, ambient: usize, vectors: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
    let mut rank = 0;
    for col in 0..ambient {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, piv);
        let iv = inv_mod(m[rank][col], p).unwrap();
        m[rank].iter_mut().for_each(|x| *x = mul_mod(*x, iv, p));
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = sub_mod(*x, mul_mod(f, *y, p), p);
                }
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

impl FpSubspace {
    /// The span of `vectors`, each of length `ambient`.
    pub fn span(p: u64, ambient: usize, vectors: &[Vec<u64>]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(Error::Precondition(format!("vectors must have length {ambient}")));
        }
        Ok(FpSubspace { p, ambient, rows: rref(p, ambient, vectors) })
    }

    /// The span of integer vectors reduced mod `p`.
    pub fn span_signed(p: u64, ambient: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        let v: Vec<Vec<u64>> =
            vectors.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect()).collect();
        Self::span(p, ambient, &v)
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        let rows = (0..ambient).map(|i| (0..ambient).map(|j| u64::from(i == j)).collect()).collect();
        FpSubspace { p, ambient, rows }
    }

    pub fn zero(p: u64, ambient: usize) -> Self {
        FpSubspace { p, ambient, rows: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut all = self.rows.clone();
        all.push(v.to_vec());
        rref(self.p, self.ambient, &all).len() == self.dim()
    }

    /// The orthogonal complement under the standard pairing.
    pub fn perp(&self) -> Self {
        let p = self.p;
        let pivots: Vec<usize> = self.rows.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
        let mut basis = vec![];
        for free in (0..self.ambient).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u64; self.ambient];
            v[free] = 1;
            for (row, &pc) in self.rows.iter().zip(&pivots) {
                v[pc] = sub_mod(0, row[free], p);
            }
            basis.push(v);
        }
        FpSubspace { p, ambient: self.ambient, rows: rref(p, self.ambient, &basis) }
    }

    pub fn sum(&self, o: &Self) -> Self {
        let mut all = self.rows.clone();
        all.extend(o.rows.iter().cloned());
        FpSubspace { p: self.p, ambient: self.ambient, rows: rref(self.p, self.ambient, &all) }
    }

    pub fn intersect(&self, o: &Self) -> Result<Self> {
        if self.p != o.p || self.ambient != o.ambient {
            return Err(Error::Precondition("subspaces live in different spaces".into()));
        }
        Ok(self.perp().sum(&o.perp()).perp())
    }

    /// The image under the coordinate permutation sending coordinate `i` to
    /// `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.ambient];
        if perm.len() != self.ambient || perm.iter().any(|&i| i >= self.ambient || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::Precondition("permutation is not a bijection of the fiber labels".into()));
        }
        let moved: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![0u64; self.ambient];
                for (i, &x) in r.iter().enumerate() {
                    v[perm[i]] = x;
                }
                v
            })
            .collect();
        Self::span(self.p, self.ambient, &moved)
    }

    /// Rows with entries in `(−p/2, p/2]`.
    pub fn signed_rows(&self) -> Vec<Vec<i64>> {
        let p = self.p as i64;
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| if 2 * x as i64 > p { x as i64 - p } else { x as i64 }).collect())
            .collect()
    }
}

/// The solution lattice of `A·x ≡ 0 mod p^e` in `Z_p^n`.
#[derive(Clone, Debug)]
pub struct CongruenceKernel {
    /// Generators mod `p^e`; together with `p^e·Z_p^n` they span the lattice.
    pub generators: Vec<Vec<u64>>,
    /// Valuations of the diagonal entries found by elimination.
    pub diagonal: Vec<u32>,
}

/// Diagonalizes `A` over `Z/p^e` by row and column operations, always
/// pivoting on an entry of least valuation, and reads off the kernel.
pub fn congruence_kernel(rows: &[Vec<u64>], ncols: usize, p: u64, e: u32) -> CongruenceKernel {
    let q = p.pow(e);
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % q).collect()).collect();
    let mut v: Vec<Vec<u64>> = (0..ncols).map(|i| (0..ncols).map(|j| u64::from(i == j)).collect()).collect();
    let mut diagonal = vec![];
    let nrows = a.len();
    for t in 0..nrows.min(ncols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                let val = vp_capped(x, p, e);
                if best.is_none_or(|b| val < b.0) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((val, i, j)) = best else { break };
        if val >= e {
            break;
        }
        a.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        for row in v.iter_mut() {
            row.swap(t, j);
        }
        let pv = p.pow(val);
        let uinv = inv_mod(a[t][t] / pv, q).unwrap();
        let pivot_row = a[t].clone();
        for (i2, row) in a.iter_mut().enumerate() {
            if i2 != t && row[t] != 0 {
                let f = mul_mod(row[t] / pv, uinv, q);
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = sub_mod(*x, mul_mod(f, *y, q), q);
                }
            }
        }
        for j2 in 0..ncols {
            if j2 != t && a[t][j2] != 0 {
                let f = mul_mod(a[t][j2] / pv, uinv, q);
                for row in a.iter_mut().chain(v.iter_mut()) {
                    row[j2] = sub_mod(row[j2], mul_mod(f, row[t], q), q);
                }
            }
        }
        diagonal.push(val);
    }
    let generators = (0..ncols)
        .map(|c| {
            let mult = p.pow(e - diagonal.get(c).copied().unwrap_or(e));
            v.iter().map(|row| mul_mod(row[c], mult, q)).collect()
        })
        .collect();
    CongruenceKernel { generators, diagonal }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_and_perp() {
        let a = FpSubspace::span_signed(5, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let b = FpSubspace::span_signed(5, 3, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(a.intersect(&b).unwrap().rows, vec![vec![0, 1, 0]]);
        assert_eq!(a.perp().rows, vec![vec![0, 0, 1]]);
        assert_eq!(FpSubspace::full(5, 3).intersect(&a).unwrap(), a);
        assert!(a.contains(&[2, 3, 0]));
        assert!(!a.contains(&[0, 0, 1]));
        assert!(a.permuted(&[0, 0, 1]).is_err());
        assert_eq!(a.permuted(&[2, 1, 0]).unwrap(), b);
    }

    #[test]
    fn kernel_of_single_congruence() {
        // 7x + 2y ≡ 0 mod 49: y ≡ −7x/2, so x is free and y ≡ 0 mod 7.
        let k = congruence_kernel(&[vec![7, 2]], 2, 7, 2);
        for g in &k.generators {
            assert_eq!((7 * g[0] + 2 * g[1]) % 49, 0);
        }
        let res: Vec<Vec<u64>> = k.generators.iter().map(|g| vec![g[0] % 7, g[1] % 7]).collect();
        let img = FpSubspace::span(7, 2, &res).unwrap();
        assert_eq!(img.rows, vec![vec![1, 0]]);
    }
}

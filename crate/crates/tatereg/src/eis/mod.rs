//! Lambert decompositions `f = Σ_{j≤0} b_j q^j + Σ_{i,j} a_{ij} ζ_i q^j/(1 − ζ_i q^j)`,
//! the Eisenstein-type conditions (E1)/(E2), residue images of the congruence
//! system they impose, Galois intersections and the C(p)-2 solver.

pub mod linalg;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use linalg::{congruence_kernel, CongruenceKernel, FpSubspace};

use crate::error::{Error, Result};
use crate::padic::arith::{divisors, inv_mod, mul_mod, sub_mod, vp, vp_capped};
use crate::padic::{Ring, RingElem};
use crate::series::LaurentSeries;

/// A `Z_p`-basis of the coefficient ring made of roots of unity: the powers
/// `1, ω, …, ω^{d−1}` of a primitive `(p^d − 1)`-th Teichmüller root `ω`.
#[derive(Clone, Debug)]
pub struct TeichBasis {
    ring: Ring,
    elems: Vec<RingElem>,
    /// Inverse of the matrix whose columns are the power-basis coordinates of the `ζ_i`.
    inverse: Vec<Vec<u64>>,
}

/// Inverts a square matrix over `Z/m` whose reduction mod `p` is invertible.
fn invert_mod(a: &[Vec<u64>], p: u64, m: u64) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let mut aug: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().copied().chain((0..n).map(|j| u64::from(i == j) % m)).collect())
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !aug[i][c].is_multiple_of(p))?;
        aug.swap(c, piv);
        let iv = inv_mod(aug[c][c], m)?;
        aug[c].iter_mut().for_each(|x| *x = mul_mod(*x, iv, m));
        let prow = aug[c].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != c && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = sub_mod(*x, mul_mod(f, *y, m), m);
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl TeichBasis {
    /// Uses the `choice`-th primitive `(p^d − 1)`-th root of unity (in order of
    /// exponent `e` coprime to `p^d − 1`, applied to the default generator).
    pub fn new(ring: &Ring, choice: usize) -> Result<Self> {
        let d = ring.d();
        let q1 = ring.residue_size().ok_or_else(|| Error::Unsupported("residue field too large".into()))? - 1;
        let omega0 = ring.teichmuller_root(q1 as u64)?;
        let e = (1..=q1)
            .filter(|&e| num_integer::gcd(e, q1) == 1)
            .nth(choice)
            .ok_or_else(|| Error::Precondition(format!("no primitive root with index {choice}")))?;
        let omega = omega0.pow(e);
        let mut elems = vec![ring.one()];
        for _ in 1..d {
            elems.push(elems.last().unwrap().mul(&omega));
        }
        let m = ring.modulus();
        let cols: Vec<Vec<u64>> = (0..d).map(|r| elems.iter().map(|z| z.coords()[r]).collect()).collect();
        let inverse = invert_mod(&cols, ring.p(), m).ok_or_else(|| Error::Internal("roots of unity are not a basis".into()))?;
        Ok(TeichBasis { ring: ring.clone(), elems, inverse })
    }

    pub fn elems(&self) -> &[RingElem] {
        &self.elems
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Coordinates of `x` against the basis.
    pub fn coords_of(&self, x: &RingElem) -> Vec<u64> {
        let m = self.ring.modulus();
        self.inverse
            .iter()
            .map(|row| row.iter().zip(x.coords()).fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, m)) % m))
            .collect()
    }

    pub fn combine(&self, coords: &[u64]) -> RingElem {
        self.elems.iter().zip(coords).fold(self.ring.zero(), |acc, (z, &c)| acc.add(&z.scale(c)))
    }
}

/// The coefficients of a Lambert expansion.
#[derive(Clone, Debug)]
pub struct LambertDecomposition {
    basis: TeichBasis,
    /// `b_j` for `j ≤ 0`, as basis coordinates.
    pub principal: BTreeMap<i64, Vec<u64>>,
    /// `table[j − 1][i] = a_{ij}` for `1 ≤ j < order`.
    pub table: Vec<Vec<u64>>,
    pub order: i64,
    pub digits: u32,
}

impl LambertDecomposition {
    pub fn basis(&self) -> &TeichBasis {
        &self.basis
    }

    pub fn ring(&self) -> &Ring {
        &self.basis.ring
    }

    /// `a_{ij}` with `i` counted from 0.
    pub fn a(&self, i: usize, j: i64) -> u64 {
        self.table[(j - 1) as usize][i]
    }

    pub fn b(&self, j: i64) -> Vec<u64> {
        self.principal.get(&j).cloned().unwrap_or_else(|| vec![0; self.basis.elems.len()])
    }
}

fn root_powers(basis: &TeichBasis, upto: usize) -> Vec<Vec<RingElem>> {
    basis
        .elems
        .iter()
        .map(|z| {
            let mut v = vec![basis.ring.one()];
            for _ in 0..upto {
                v.push(v.last().unwrap().mul(z));
            }
            v
        })
        .collect()
}

/// Peels `c_n − Σ_{j|n, j<n} Σ_i a_{ij} ζ_i^{n/j}` into the basis to find `a_{in}`.
pub fn lambert_decompose(f: &LaurentSeries, basis: &TeichBasis) -> Result<LambertDecomposition> {
    if f.ring().params() != basis.ring.params() {
        return Err(Error::RingMismatch);
    }
    let order = f.order();
    let mut principal = BTreeMap::new();
    for j in f.val().min(1)..=0.min(order - 1) {
        let c = basis.coords_of(&f.coeff(j));
        if c.iter().any(|&x| x != 0) {
            principal.insert(j, c);
        }
    }
    let len = order.max(1) as usize;
    let pw = root_powers(basis, len);
    let mut table: Vec<Vec<u64>> = Vec::with_capacity(len);
    for n in 1..order {
        let mut r = f.try_coeff(n).unwrap_or_else(|| f.ring().zero());
        for j in divisors(n as u64) {
            let j = j as i64;
            if j == n {
                continue;
            }
            for (i, &a) in table[(j - 1) as usize].iter().enumerate() {
                if a != 0 {
                    r = r.sub(&pw[i][(n / j) as usize].scale(a));
                }
            }
        }
        table.push(basis.coords_of(&r));
    }
    Ok(LambertDecomposition { basis: basis.clone(), principal, table, order, digits: f.digits() })
}

/// The series `Σ_{j≤0} b_j q^j + Σ a_{ij} ζ_i q^j/(1 − ζ_i q^j)`.
pub fn resum(dec: &LambertDecomposition) -> LaurentSeries {
    let ring = dec.ring().clone();
    let basis = &dec.basis;
    let val = dec.principal.keys().next().copied().unwrap_or(0).min(0);
    let pw = root_powers(basis, dec.order.max(1) as usize);
    let mut c: Vec<RingElem> = (val..dec.order).map(|_| ring.zero()).collect();
    for (&j, b) in &dec.principal {
        c[(j - val) as usize] = basis.combine(b);
    }
    for j in 1..dec.order {
        for (i, &a) in dec.table[(j - 1) as usize].iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut n = j;
            while n < dec.order {
                let idx = (n - val) as usize;
                c[idx] = c[idx].add(&pw[i][(n / j) as usize].scale(a));
                n += j;
            }
        }
    }
    LaurentSeries::from_coeffs(&ring, val, &c, dec.order).with_digits(dec.digits)
}

/// A violated (E2) congruence `v_p(a_{ij}) ≥ 2·v_p(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Failure {
    pub i: usize,
    pub j: i64,
    pub found: u32,
    pub required: u32,
}

/// The Eisenstein-type verdict of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisVerdict {
    /// No `q^j` terms with `j < 0`, and `b_0 ∈ Z_p`.
    pub e1_ok: bool,
    pub e2_failures: Vec<E2Failure>,
    /// Largest `n` such that (E2) was decided for every `j ≤ n`.
    pub certified_n: i64,
    /// First index whose (E2) test exceeds the certified digits.
    pub uncertified_at: Option<i64>,
}

impl EisVerdict {
    pub fn is_eisenstein(&self) -> bool {
        self.e1_ok && self.e2_failures.is_empty() && self.uncertified_at.is_none()
    }
}

fn e1_holds(dec: &LambertDecomposition) -> bool {
    dec.principal.iter().all(|(&j, b)| if j < 0 { b.iter().all(|&x| x == 0) } else { b[1..].iter().all(|&x| x == 0) })
}

/// Tests (E1) and (E2) for `1 ≤ j ≤ n_max`.
pub fn eisenstein_report(dec: &LambertDecomposition, n_max: i64) -> Result<EisVerdict> {
    if n_max >= dec.order {
        return Err(Error::Precondition(format!("decomposition known below {} only", dec.order)));
    }
    let p = dec.ring().p();
    let mut failures = vec![];
    let mut uncertified_at = None;
    let mut certified_n = n_max;
    for j in 1..=n_max {
        let need = 2 * vp(j as u64, p).unwrap();
        if need == 0 {
            continue;
        }
        if need > dec.digits {
            uncertified_at = Some(j);
            certified_n = j - 1;
            break;
        }
        for (i, &a) in dec.table[(j - 1) as usize].iter().enumerate() {
            let found = vp_capped(a, p, dec.digits);
            if found < need {
                failures.push(E2Failure { i, j, found, required: need });
            }
        }
    }
    Ok(EisVerdict { e1_ok: e1_holds(dec), e2_failures: failures, certified_n, uncertified_at })
}

/// One form entering [`eis_image`]: its decomposition at each fiber and its
/// residue vector over `F_p`.
#[derive(Clone, Debug)]
pub struct EisForm {
    pub fibers: Vec<LambertDecomposition>,
    pub residue: Vec<u64>,
}

/// The image of the `Z_p`-lattice of combinations satisfying (E1) and
/// (E2) up to `n` under the residue map mod `p`.
#[derive(Clone, Debug)]
pub struct EisImage {
    pub span: FpSubspace,
    /// Valuations of the diagonal found while solving.
    pub diagonal: Vec<u32>,
    /// Number of congruences imposed.
    pub constraints: usize,
    /// Exponent `E` of the modulus `p^E` the system was solved over.
    pub exponent: u32,
}

/// Solves `Σ_α x_α a^{(α)}_{ij} ≡ 0 mod p^{2v_p(j)}` for every fiber, basis
/// index `i` and `j ≤ n` with `p | j`, together with (E1) (negative terms and
/// the non-constant basis coordinates of `b_0` cancel mod `p^digits`), and
/// reduces the residue vectors of the solution lattice mod `p`.
pub fn eis_image(forms: &[EisForm], p: u64, n: i64) -> Result<EisImage> {
    let s = forms.first().map_or(0, |f| f.residue.len());
    if forms.iter().any(|f| f.residue.len() != s || f.fibers.len() != forms[0].fibers.len()) {
        return Err(Error::Precondition("forms disagree in fiber count or residue length".into()));
    }
    let nfib = forms.first().map_or(0, |f| f.fibers.len());
    let digits = forms.iter().flat_map(|f| f.fibers.iter().map(|d| d.digits)).min().unwrap_or(1);
    let mut rows: Vec<(Vec<u64>, u32)> = vec![];
    if n < p as i64 {
        log::warn!("n = {n} < p = {p}: no (E2) constraints");
    }
    for fib in 0..nfib {
        let d0 = &forms[0].fibers[fib];
        if d0.ring().p() != p || n >= d0.order {
            return Err(Error::Precondition(format!("fiber {fib} decomposition does not reach n = {n} over p = {p}")));
        }
        let dim = d0.basis.elems.len();
        let mut j = p as i64;
        while j <= n {
            let e = 2 * vp(j as u64, p).unwrap();
            if e > digits {
                return Err(Error::Uncertified(format!("index {j} needs {e} digits, {digits} certified")));
            }
            let q = p.pow(e);
            for i in 0..dim {
                rows.push((forms.iter().map(|f| f.fibers[fib].a(i, j) % q).collect(), e));
            }
            j += p as i64;
        }
        let keys: std::collections::BTreeSet<i64> =
            forms.iter().flat_map(|f| f.fibers[fib].principal.keys().copied()).collect();
        for k in keys {
            let first = if k < 0 { 0 } else { 1 };
            for i in first..dim {
                rows.push((forms.iter().map(|f| f.fibers[fib].b(k)[i]).collect(), digits));
            }
        }
    }
    let exponent = rows.iter().map(|r| r.1).max().unwrap_or(1).max(1);
    let big_q = p.pow(exponent);
    let scaled: Vec<Vec<u64>> = rows
        .iter()
        .filter(|(r, _)| r.iter().any(|&x| x != 0))
        .map(|(r, e)| r.iter().map(|&x| mul_mod(x % p.pow(*e), p.pow(exponent - e), big_q)).collect())
        .collect();
    let kernel = congruence_kernel(&scaled, forms.len(), p, exponent);
    let residues: Vec<Vec<u64>> = kernel
        .generators
        .iter()
        .map(|g| {
            (0..s)
                .map(|c| forms.iter().zip(g).fold(0, |acc, (f, &x)| (acc + (x % p) * (f.residue[c] % p)) % p))
                .collect()
        })
        .collect();
    Ok(EisImage { span: FpSubspace::span(p, s, &residues)?, diagonal: kernel.diagonal, constraints: rows.len(), exponent })
}

/// `⋂_σ σ(span)` over the given coordinate permutations. Entries are in
/// `F_p`, so only the labels move.
pub fn intersect_galois(span: &FpSubspace, perms: &[Vec<usize>]) -> Result<FpSubspace> {
    let mut acc = span.clone();
    for perm in perms {
        acc = acc.intersect(&span.permuted(perm)?)?;
    }
    Ok(acc)
}

/// Outcome of [`cp2_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cp2Verdict {
    /// No `n ∈ Z_p` solves every congruence.
    pub holds: bool,
    /// When some `n` works: the class `n ≡ residue mod modulus` of all of them.
    pub witness: Option<(u64, u64)>,
}

/// Decides whether `a_{ip} − b_{ip} + n·c_{ip} ≡ 0 mod p²` for `1 ≤ i ≤ p−1`
/// and `a_{p²} − b_{p²} + n·c_{p²} ≡ 0 mod p⁴` have a common solution `n ∈ Z_p`.
pub fn cp2_check(
    a: &LambertDecomposition,
    b: &LambertDecomposition,
    c: &LambertDecomposition,
    p: u64,
) -> Result<Cp2Verdict> {
    for dec in [a, b, c] {
        if dec.ring().p() != p || dec.ring().d() != 1 {
            return Err(Error::Precondition("C(p)-2 expects decompositions over Z_p".into()));
        }
        if dec.order <= (p * p) as i64 {
            return Err(Error::Precondition(format!("decomposition must reach q^{}", p * p)));
        }
        if dec.digits < 4 {
            return Err(Error::Uncertified("C(p)-2 needs four certified digits".into()));
        }
    }
    let conds = (1..p).map(|i| (i * p, 2)).chain(std::iter::once((p * p, 4)));
    // Current solution class n ≡ r mod p^k (k = 0: unconstrained).
    let (mut r, mut k) = (0u64, 0u32);
    for (j, e) in conds {
        let q = p.pow(e);
        let j = j as i64;
        let lhs = sub_mod(a.a(0, j) % q, b.a(0, j) % q, q);
        let cc = c.a(0, j) % q;
        let vc = vp_capped(cc, p, e);
        if vc >= e {
            if lhs != 0 {
                return Ok(Cp2Verdict { holds: true, witness: None });
            }
            continue;
        }
        if vp_capped(lhs, p, e) < vc {
            return Ok(Cp2Verdict { holds: true, witness: None });
        }
        let m = p.pow(e - vc);
        let pv = p.pow(vc);
        let n0 = mul_mod(sub_mod(0, lhs / pv % m, m), inv_mod(cc / pv % m, m).unwrap(), m);
        let common = p.pow(k.min(e - vc));
        if !(n0 + common - r % common).is_multiple_of(common) {
            return Ok(Cp2Verdict { holds: true, witness: None });
        }
        if e - vc > k {
            r = n0;
            k = e - vc;
        }
    }
    Ok(Cp2Verdict { holds: false, witness: Some((r, p.pow(k))) })
}

#[cfg(test)]
mod tests;

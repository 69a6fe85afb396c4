//! Dense kernels on flat coefficient arrays.
//!
//! A flat array stores `len` ring elements as `len * d` residues; index `n`
//! holds the coefficient of `q^n` relative to the array start.

use crate::padic::arith::{add_mod, inv_mod, mul_mod, sub_mod};
use crate::padic::RingSpec;

/// Accumulates products of ring elements in wide integers.
pub(crate) struct Acc<'a> {
    ring: &'a RingSpec,
    w: Vec<u128>,
    count: usize,
}

impl<'a> Acc<'a> {
    pub fn new(ring: &'a RingSpec) -> Self {
        let d = ring.d();
        Acc { ring, w: vec![0; 2 * d - 1], count: 0 }
    }

    #[inline]
    pub fn add_prod(&mut self, a: &[u64], b: &[u64]) {
        let d = a.len();
        if self.count + d > self.ring.acc_limit() {
            self.fold();
        }
        if d == 1 {
            self.w[0] += a[0] as u128 * b[0] as u128;
        } else {
            for i in 0..d {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..d {
                    self.w[i + j] += a[i] as u128 * b[j] as u128;
                }
            }
        }
        self.count += d;
    }

    fn fold(&mut self) {
        let m = self.ring.modulus() as u128;
        for x in self.w.iter_mut() {
            *x %= m;
        }
        self.count = 1;
    }

    /// Writes the reduced sum into `out` and resets the accumulator.
    pub fn finish(&mut self, out: &mut [u64]) {
        self.ring.finish_wide(&self.w, out);
        self.w.iter_mut().for_each(|x| *x = 0);
        self.count = 0;
    }
}

pub(crate) fn mul(ring: &RingSpec, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    let d = ring.d();
    let la = a.len() / d;
    let lb = b.len() / d;
    let mut out = vec![0u64; len * d];
    if la == 0 || lb == 0 {
        return out;
    }
    if d == 1 {
        let m = ring.modulus() as u128;
        let limit = ring.acc_limit();
        for n in 0..len.min(la + lb - 1) {
            let lo = n.saturating_sub(lb - 1);
            let hi = n.min(la - 1);
            let mut acc: u128 = 0;
            let mut cnt = 0;
            for i in lo..=hi {
                acc += a[i] as u128 * b[n - i] as u128;
                cnt += 1;
                if cnt == limit {
                    acc %= m;
                    cnt = 1;
                }
            }
            out[n] = (acc % m) as u64;
        }
        return out;
    }
    let mut acc = Acc::new(ring);
    for n in 0..len.min(la + lb - 1) {
        let lo = n.saturating_sub(lb - 1);
        let hi = n.min(la - 1);
        for i in lo..=hi {
            acc.add_prod(&a[i * d..(i + 1) * d], &b[(n - i) * d..(n - i + 1) * d]);
        }
        acc.finish(&mut out[n * d..(n + 1) * d]);
    }
    out
}

pub(crate) fn add(ring: &RingSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let m = ring.modulus();
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), m))
        .collect()
}

pub(crate) fn sub(ring: &RingSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let m = ring.modulus();
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), m))
        .collect()
}

/// Multiplies every coefficient by the ring element `s`.
pub(crate) fn scale(ring: &RingSpec, a: &[u64], s: &[u64]) -> Vec<u64> {
    let d = ring.d();
    let mut out = vec![0u64; a.len()];
    if d == 1 {
        let m = ring.modulus();
        for (o, &x) in out.iter_mut().zip(a) {
            *o = mul_mod(x, s[0], m);
        }
        return out;
    }
    for (i, chunk) in a.chunks(d).enumerate() {
        ring.mul_slices(chunk, s, &mut out[i * d..(i + 1) * d]);
    }
    out
}

pub(crate) fn scale_int(ring: &RingSpec, a: &[u64], s: u64) -> Vec<u64> {
    let m = ring.modulus();
    let s = s % m;
    a.iter().map(|&x| mul_mod(x, s, m)).collect()
}

/// Inverse of a single ring element given by coordinates (must be a unit).
pub(crate) fn inv_elem(ring: &RingSpec, a: &[u64]) -> Option<Vec<u64>> {
    let p = ring.p();
    if a.iter().all(|&x| x % p == 0) {
        return None;
    }
    if ring.d() == 1 {
        return inv_mod(a[0], ring.modulus()).map(|x| vec![x]);
    }
    // Newton iteration from the residue inverse, computed by exponentiation.
    let d = ring.d();
    let q = ring.residue_size()?;
    let mut x = pow_elem(ring, a, q - 2);
    let m = ring.modulus();
    let mut t = vec![0u64; d];
    for _ in 0..70 {
        ring.mul_slices(a, &x, &mut t);
        let mut two_minus: Vec<u64> = t.iter().map(|&v| sub_mod(0, v, m)).collect();
        two_minus[0] = add_mod(two_minus[0], 2, m);
        let mut nx = vec![0u64; d];
        ring.mul_slices(&x, &two_minus, &mut nx);
        if nx == x {
            break;
        }
        x = nx;
    }
    Some(x)
}

fn pow_elem(ring: &RingSpec, a: &[u64], mut e: u128) -> Vec<u64> {
    let d = ring.d();
    let mut r = vec![0u64; d];
    r[0] = 1;
    let mut b = a.to_vec();
    let mut t = vec![0u64; d];
    while e > 0 {
        if e & 1 == 1 {
            ring.mul_slices(&r, &b, &mut t);
            r.copy_from_slice(&t);
        }
        ring.mul_slices(&b, &b, &mut t);
        b.copy_from_slice(&t);
        e >>= 1;
    }
    r
}

/// Power-series inverse of `a` (constant term a unit) to `len` terms.
pub(crate) fn inv(ring: &RingSpec, a: &[u64], len: usize) -> Option<Vec<u64>> {
    let d = ring.d();
    let la = a.len() / d;
    let g0 = inv_elem(ring, &a[..d])?;
    let neg_g0: Vec<u64> = g0.iter().map(|&x| sub_mod(0, x, ring.modulus())).collect();
    let mut g = vec![0u64; len * d];
    if len == 0 {
        return Some(g);
    }
    g[..d].copy_from_slice(&g0);
    let mut acc = Acc::new(ring);
    let mut s = vec![0u64; d];
    for n in 1..len {
        for i in 1..=n.min(la.saturating_sub(1)) {
            acc.add_prod(&a[i * d..(i + 1) * d], &g[(n - i) * d..(n - i + 1) * d]);
        }
        acc.finish(&mut s);
        let mut out = vec![0u64; d];
        ring.mul_slices(&s, &neg_g0, &mut out);
        g[n * d..(n + 1) * d].copy_from_slice(&out);
    }
    Some(g)
}

pub(crate) fn pow(ring: &RingSpec, a: &[u64], mut e: u64, len: usize) -> Vec<u64> {
    let d = ring.d();
    let mut r = vec![0u64; len * d];
    if len == 0 {
        return r;
    }
    r[0] = 1 % ring.modulus();
    let mut b: Vec<u64> = a.iter().copied().take(len * d).collect();
    while e > 0 {
        if e & 1 == 1 {
            r = mul(ring, &r, &b, len);
        }
        e >>= 1;
        if e > 0 {
            b = mul(ring, &b, &b, len);
        }
    }
    r
}

/// `f(g)` to `len` terms where `g` has zero constant term. Baby-step
/// giant-step evaluation: `O(sqrt K)` full products plus scalar passes.
pub(crate) fn compose(ring: &RingSpec, f: &[u64], g: &[u64], len: usize) -> Vec<u64> {
    let d = ring.d();
    let k = f.len() / d;
    let mut result = vec![0u64; len * d];
    if k == 0 || len == 0 {
        return result;
    }
    let step = ((k as f64).sqrt().ceil() as usize).max(1);
    let mut pows: Vec<Vec<u64>> = Vec::with_capacity(step + 1);
    let mut one = vec![0u64; len * d];
    one[0] = 1 % ring.modulus();
    pows.push(one);
    for i in 1..=step {
        let next = mul(ring, &pows[i - 1], g, len);
        pows.push(next);
    }
    let blocks = k.div_ceil(step);
    let m = ring.modulus();
    let mut tmp = vec![0u64; d];
    for b in (0..blocks).rev() {
        if b + 1 < blocks {
            result = mul(ring, &result, &pows[step], len);
        }
        for i in 0..step {
            let idx = b * step + i;
            if idx >= k {
                break;
            }
            let c = &f[idx * d..(idx + 1) * d];
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let pw = &pows[i];
            for n in 0..len {
                let src = &pw[n * d..(n + 1) * d];
                if src.iter().all(|&x| x == 0) {
                    continue;
                }
                if d == 1 {
                    result[n] = add_mod(result[n], mul_mod(c[0], src[0], m), m);
                } else {
                    ring.mul_slices(c, src, &mut tmp);
                    for r in 0..d {
                        result[n * d + r] = add_mod(result[n * d + r], tmp[r], m);
                    }
                }
            }
        }
    }
    result
}

/// Formal derivative scaled by q: coefficient n becomes n·a_n.
pub(crate) fn theta_derivative(ring: &RingSpec, a: &[u64], start: i64) -> Vec<u64> {
    let d = ring.d();
    let m = ring.modulus();
    let mut out = vec![0u64; a.len()];
    for (i, chunk) in a.chunks(d).enumerate() {
        let n = start + i as i64;
        let s = crate::padic::arith::reduce_i128(n as i128, m);
        for r in 0..d {
            out[i * d + r] = mul_mod(chunk[r], s, m);
        }
    }
    out
}

//! Word-size integer helpers shared by the ring and the linear algebra.

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(reduce_i128(s0, m))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn vp(mut n: u64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Valuation of `n` capped at `cap` (zero counts as `cap`).
pub fn vp_capped(n: u64, p: u64, cap: u32) -> u32 {
    vp(n, p).map_or(cap, |v| v.min(cap))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut q = 2u128;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `p` modulo `m` (requires `gcd(p, m) = 1`).
pub fn mult_order(p: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(p, m) != 1 {
        return None;
    }
    let mut x = p % m;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, p, m);
        k += 1;
    }
    Some(k)
}

pub fn checked_pow(p: u64, e: u32) -> Option<u64> {
    let mut r: u64 = 1;
    for _ in 0..e {
        r = r.checked_mul(p)?;
    }
    Some(r)
}

/// Möbius function by trial division.
pub fn mobius(mut n: u64) -> i64 {
    let mut res = 1;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            n /= q;
            if n.is_multiple_of(q) {
                return 0;
            }
            res = -res;
        }
        q += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut q = 1;
    while q * q <= n {
        if n.is_multiple_of(q) {
            small.push(q);
            if q * q != n {
                large.push(n / q);
            }
        }
        q += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

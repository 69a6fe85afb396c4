//! Exact residues in unramified rings `W(F_{p^d}) / p^M`.
//!
//! The ring is modelled as `Z/p^M [x] / (f)` where `f` is the naive lift of the
//! first monic irreducible polynomial of degree `d` over `F_p`, ordering
//! candidates by the integer `sum c_i p^i` of their low coefficients. The
//! Frobenius lift `σ` is the ring map sending `x` to the unique root of `f`
//! congruent to `x^p`.

pub mod arith;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use arith::{add_mod, checked_pow, inv_mod, is_prime, mul_mod, prime_factors, sub_mod, vp_capped};

/// Largest modulus accepted; keeps sums of two residues inside a `u64`.
pub const MAX_MODULUS: u64 = 1 << 62;

/// Residue fields larger than this are not enumerated when searching roots.
const ENUMERATION_LIMIT: u128 = 1 << 22;

/// Shared handle to an immutable ring description.
pub type Ring = Arc<RingSpec>;

/// Parameters identifying a ring; two rings with equal parameters are identical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingParams {
    pub p: u64,
    pub d: usize,
    #[serde(rename = "M")]
    pub m: u32,
}

#[derive(Debug)]
pub struct RingSpec {
    params: RingParams,
    modulus: u64,
    /// Low coefficients `c_0..c_{d-1}` of the monic minimal polynomial.
    minpoly: Vec<u64>,
    /// `frob[i]` holds the coordinates of `σ(x^i)`.
    frob: Vec<Vec<u64>>,
    /// Number of products of two residues that fit in a `u128` accumulator.
    acc_limit: usize,
}

/// Valuation of a residue, saturating at the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    AtLeast(u32),
}

impl Valuation {
    /// True when the valuation is known to be at least `k`, `None` when unknown.
    pub fn at_least(self, k: u32) -> Option<bool> {
        match self {
            Valuation::Finite(v) => Some(v >= k),
            Valuation::AtLeast(m) if m >= k => Some(true),
            Valuation::AtLeast(_) => None,
        }
    }

    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }
}

/// How to pick among the residue-field roots of a polynomial equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueChoice {
    /// The first root in the residue enumeration order.
    Smallest,
    /// The root with these residue coordinates.
    Residue(Vec<u64>),
}

/// Builds the ring `W(F_{p^d}) / p^M`.
pub fn make_ring(p: u64, d: usize, m: u32) -> Result<Ring> {
    RingSpec::new(p, d, m).map(Arc::new)
}

impl RingSpec {
    pub fn new(p: u64, d: usize, m: u32) -> Result<RingSpec> {
        if p < 5 || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        if d == 0 || m == 0 {
            return Err(Error::Precondition("residue degree and precision must be positive".into()));
        }
        let modulus = match checked_pow(p, m) {
            Some(q) if q <= MAX_MODULUS => q,
            _ => return Err(Error::ModulusTooLarge { p, m }),
        };
        let minpoly = if d == 1 { vec![0] } else { first_irreducible(p, d)? };
        let wide = (modulus as u128 - 1) * (modulus as u128 - 1);
        let acc_limit = (u128::MAX / wide.max(1)).min(1 << 20) as usize;
        let mut spec = RingSpec {
            params: RingParams { p, d, m },
            modulus,
            minpoly,
            frob: Vec::new(),
            acc_limit: acc_limit.max(1),
        };
        spec.frob = spec.compute_frobenius()?;
        Ok(spec)
    }

    pub fn params(&self) -> RingParams {
        self.params
    }
    pub fn p(&self) -> u64 {
        self.params.p
    }
    pub fn d(&self) -> usize {
        self.params.d
    }
    /// Working precision `M`.
    pub fn precision(&self) -> u32 {
        self.params.m
    }
    /// `p^M`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    /// Size of the residue field `p^d`, if it fits.
    pub fn residue_size(&self) -> Option<u128> {
        (self.params.p as u128).checked_pow(self.params.d as u32)
    }

    /// Coefficients `c_0..c_d` of the monic minimal polynomial (leading 1 last).
    pub fn minpoly(&self) -> Vec<u64> {
        let mut f = self.minpoly.clone();
        f.push(1);
        f
    }

    /// Matrix of `σ` on the power basis; column `i` is `σ(x^i)`.
    pub fn frobenius_matrix(&self) -> Vec<Vec<u64>> {
        let d = self.d();
        (0..d).map(|r| (0..d).map(|c| self.frob[c][r]).collect()).collect()
    }

    pub(crate) fn acc_limit(&self) -> usize {
        self.acc_limit
    }

    // ---- slice-level kernels -------------------------------------------

    /// Reduces a product polynomial of length `2d - 1` (entries already mod p^M).
    pub(crate) fn poly_reduce(&self, t: &mut [u64]) {
        let d = self.d();
        let m = self.modulus;
        for k in (d..t.len()).rev() {
            let c = t[k];
            if c == 0 {
                continue;
            }
            t[k] = 0;
            for (i, &mi) in self.minpoly.iter().enumerate() {
                if mi != 0 {
                    let idx = k - d + i;
                    t[idx] = sub_mod(t[idx], mul_mod(c, mi, m), m);
                }
            }
        }
    }

    pub(crate) fn mul_slices(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let d = self.d();
        let m = self.modulus;
        if d == 1 {
            out[0] = mul_mod(a[0], b[0], m);
            return;
        }
        let mut t = vec![0u64; 2 * d - 1];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                t[i + j] = add_mod(t[i + j], mul_mod(a[i], b[j], m), m);
            }
        }
        self.poly_reduce(&mut t);
        out.copy_from_slice(&t[..d]);
    }

    /// Reduces a wide accumulator of length `2d - 1` into `out` (length `d`).
    pub(crate) fn finish_wide(&self, wide: &[u128], out: &mut [u64]) {
        let d = self.d();
        let m = self.modulus as u128;
        if d == 1 {
            out[0] = (wide[0] % m) as u64;
            return;
        }
        let mut t: Vec<u64> = wide.iter().map(|&w| (w % m) as u64).collect();
        self.poly_reduce(&mut t);
        out.copy_from_slice(&t[..d]);
    }

    fn frob_slice(&self, a: &[u64], out: &mut [u64]) {
        let d = self.d();
        let m = self.modulus;
        if d == 1 {
            out[0] = a[0];
            return;
        }
        out.iter_mut().for_each(|o| *o = 0);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for r in 0..d {
                out[r] = add_mod(out[r], mul_mod(ai, self.frob[i][r], m), m);
            }
        }
    }

    pub(crate) fn frob_in_place(&self, a: &mut [u64]) {
        let mut out = vec![0u64; self.d()];
        self.frob_slice(a, &mut out);
        a.copy_from_slice(&out);
    }

    fn compute_frobenius(&self) -> Result<Vec<Vec<u64>>> {
        let d = self.d();
        if d == 1 {
            return Ok(vec![vec![1]]);
        }
        // Newton iteration on f starting from x^p.
        let x = self.gen_raw();
        let mut y = x.pow(self.p() as u128);
        for _ in 0..80 {
            let fy = self.eval_minpoly(&y, false);
            if fy.is_zero() {
                break;
            }
            let dfy = self.eval_minpoly(&y, true);
            let step = fy.mul(&dfy.inv_raw()?);
            y = y.sub(&step);
        }
        if !self.eval_minpoly(&y, false).is_zero() {
            return Err(Error::Internal("Frobenius lift did not converge".into()));
        }
        let mut frob = Vec::with_capacity(d);
        let mut pw = self.one_raw();
        for _ in 0..d {
            frob.push(pw.c.clone());
            pw = pw.mul(&y);
        }
        Ok(frob)
    }

    fn eval_minpoly<'a>(&'a self, y: &RawElem<'a>, derivative: bool) -> RawElem<'a> {
        let full = self.minpoly();
        let mut acc = self.zero_raw();
        let deg = full.len() - 1;
        if derivative {
            for k in (1..=deg).rev() {
                let coef = mul_mod(full[k], k as u64 % self.modulus, self.modulus);
                acc = acc.mul(y).add_scalar(coef);
            }
        } else {
            for k in (0..=deg).rev() {
                acc = acc.mul(y).add_scalar(full[k]);
            }
        }
        acc
    }

    fn gen_raw(&self) -> RawElem<'_> {
        let mut c = vec![0; self.d()];
        c[1 % self.d()] = if self.d() == 1 { self.modulus - self.minpoly[0] } else { 1 };
        if self.d() == 1 {
            c[0] %= self.modulus;
        }
        RawElem { spec: self, c }
    }
    fn one_raw(&self) -> RawElem<'_> {
        let mut c = vec![0; self.d()];
        c[0] = 1 % self.modulus;
        RawElem { spec: self, c }
    }
    fn zero_raw(&self) -> RawElem<'_> {
        RawElem { spec: self, c: vec![0; self.d()] }
    }
}

/// Borrowing element used while the spec itself is still being built.
struct RawElem<'a> {
    spec: &'a RingSpec,
    c: Vec<u64>,
}

impl<'a> RawElem<'a> {
    fn mul(&self, o: &RawElem<'a>) -> RawElem<'a> {
        let mut c = vec![0; self.spec.d()];
        self.spec.mul_slices(&self.c, &o.c, &mut c);
        RawElem { spec: self.spec, c }
    }
    fn sub(&self, o: &RawElem<'a>) -> RawElem<'a> {
        let m = self.spec.modulus;
        let c = self.c.iter().zip(&o.c).map(|(&a, &b)| sub_mod(a, b, m)).collect();
        RawElem { spec: self.spec, c }
    }
    fn add_scalar(mut self, s: u64) -> RawElem<'a> {
        self.c[0] = add_mod(self.c[0], s % self.spec.modulus, self.spec.modulus);
        self
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    fn pow(&self, mut e: u128) -> RawElem<'a> {
        let mut r = self.spec.one_raw();
        let mut b = RawElem { spec: self.spec, c: self.c.clone() };
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }
    fn inv_raw(&self) -> Result<RawElem<'a>> {
        let q = self
            .spec
            .residue_size()
            .ok_or_else(|| Error::Unsupported("residue field too large".into()))?;
        let one = self.spec.one_raw();
        let mut x = self.pow(q - 2);
        let p = self.spec.p();
        if self.mul(&x).c.iter().enumerate().any(|(i, &v)| (v % p) != u64::from(i == 0)) {
            return Err(Error::NonUnit("derivative of the minimal polynomial".into()));
        }
        for _ in 0..70 {
            let ax = self.mul(&x);
            let two_minus = one.sub(&ax).add_scalar(1);
            let nx = x.mul(&two_minus);
            if nx.c == x.c {
                break;
            }
            x = nx;
        }
        Ok(x)
    }
}

/// An element of `W(F_{p^d}) / p^M` in power-basis coordinates.
#[derive(Clone)]
pub struct RingElem {
    ring: Ring,
    c: Vec<u64>,
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring.params == other.ring.params && self.c == other.c
    }
}
impl Eq for RingElem {}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ring.d() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c)
        }
    }
}

impl RingElem {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn coords(&self) -> &[u64] {
        &self.c
    }
    pub fn into_coords(self) -> Vec<u64> {
        self.c
    }

    fn check(&self, o: &RingElem) {
        assert!(
            self.ring.params == o.ring.params,
            "ring mismatch: {:?} vs {:?}",
            self.ring.params,
            o.ring.params
        );
    }

    pub fn add(&self, o: &RingElem) -> RingElem {
        self.check(o);
        let m = self.ring.modulus;
        let c = self.c.iter().zip(&o.c).map(|(&a, &b)| add_mod(a, b, m)).collect();
        RingElem { ring: self.ring.clone(), c }
    }
    pub fn sub(&self, o: &RingElem) -> RingElem {
        self.check(o);
        let m = self.ring.modulus;
        let c = self.c.iter().zip(&o.c).map(|(&a, &b)| sub_mod(a, b, m)).collect();
        RingElem { ring: self.ring.clone(), c }
    }
    pub fn neg(&self) -> RingElem {
        let m = self.ring.modulus;
        let c = self.c.iter().map(|&a| sub_mod(0, a, m)).collect();
        RingElem { ring: self.ring.clone(), c }
    }
    pub fn mul(&self, o: &RingElem) -> RingElem {
        self.check(o);
        let mut c = vec![0; self.ring.d()];
        self.ring.mul_slices(&self.c, &o.c, &mut c);
        RingElem { ring: self.ring.clone(), c }
    }
    pub fn scale(&self, s: u64) -> RingElem {
        let m = self.ring.modulus;
        let s = s % m;
        let c = self.c.iter().map(|&a| mul_mod(a, s, m)).collect();
        RingElem { ring: self.ring.clone(), c }
    }
    pub fn pow(&self, mut e: u128) -> RingElem {
        let mut r = self.ring.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }
    /// Integer power, allowing negative exponents for units.
    pub fn powi(&self, e: i64) -> Result<RingElem> {
        if e >= 0 {
            Ok(self.pow(e as u128))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs() as u128))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    pub fn is_one(&self) -> bool {
        self.c[0] == 1 % self.ring.modulus && self.c[1..].iter().all(|&x| x == 0)
    }
    /// A unit is an element whose reduction mod p is nonzero.
    pub fn is_unit(&self) -> bool {
        let p = self.ring.p();
        self.c.iter().any(|&x| x % p != 0)
    }
    /// True when the element lies in `Z/p^M` (all non-constant coordinates vanish).
    pub fn is_in_zp(&self) -> bool {
        self.c[1..].iter().all(|&x| x == 0)
    }
    /// Residue coordinates modulo p.
    pub fn residue(&self) -> Vec<u64> {
        let p = self.ring.p();
        self.c.iter().map(|&x| x % p).collect()
    }
    /// Coordinates reduced modulo `p^k`.
    pub fn reduce_digits(&self, k: u32) -> RingElem {
        let m = checked_pow(self.ring.p(), k.min(self.ring.precision())).unwrap_or(self.ring.modulus);
        RingElem { ring: self.ring.clone(), c: self.c.iter().map(|&x| x % m).collect() }
    }
    /// Symmetric integer representative of the constant coordinate.
    pub fn to_signed(&self) -> i128 {
        let m = self.ring.modulus;
        let x = self.c[0];
        if x > m / 2 {
            x as i128 - m as i128
        } else {
            x as i128
        }
    }

    pub fn inv(&self) -> Result<RingElem> {
        if !self.is_unit() {
            return Err(Error::NonUnit(format!("{self}")));
        }
        let q = self
            .ring
            .residue_size()
            .ok_or_else(|| Error::Unsupported("residue field too large".into()))?;
        let mut x = if self.ring.d() == 1 {
            let inv = inv_mod(self.c[0], self.ring.modulus).expect("unit");
            return Ok(self.ring.from_u64(inv));
        } else {
            self.pow(q - 2)
        };
        let two = self.ring.from_u64(2);
        for _ in 0..70 {
            let nx = x.mul(&two.sub(&self.mul(&x)));
            if nx == x {
                break;
            }
            x = nx;
        }
        Ok(x)
    }

    pub fn frobenius(&self) -> RingElem {
        let mut c = vec![0; self.ring.d()];
        self.ring.frob_slice(&self.c, &mut c);
        RingElem { ring: self.ring.clone(), c }
    }

    /// p-adic valuation of the element (minimum over coordinates).
    pub fn valuation(&self) -> Valuation {
        self.valuation_at(self.ring.precision())
    }

    /// Valuation when only `digits` p-adic digits are certified.
    pub fn valuation_at(&self, digits: u32) -> Valuation {
        let digits = digits.min(self.ring.precision());
        let p = self.ring.p();
        let v = self.c.iter().map(|&x| vp_capped(x, p, digits)).min().unwrap_or(digits);
        if v >= digits {
            Valuation::AtLeast(digits)
        } else {
            Valuation::Finite(v)
        }
    }
}

impl RingSpec {
    pub fn zero(self: &Arc<Self>) -> RingElem {
        RingElem { ring: self.clone(), c: vec![0; self.d()] }
    }
    pub fn one(self: &Arc<Self>) -> RingElem {
        self.from_u64(1)
    }
    pub fn from_u64(self: &Arc<Self>, v: u64) -> RingElem {
        let mut c = vec![0; self.d()];
        c[0] = v % self.modulus;
        RingElem { ring: self.clone(), c }
    }
    pub fn from_i64(self: &Arc<Self>, v: i64) -> RingElem {
        self.from_i128(v as i128)
    }
    pub fn from_i128(self: &Arc<Self>, v: i128) -> RingElem {
        let mut c = vec![0; self.d()];
        c[0] = arith::reduce_i128(v, self.modulus);
        RingElem { ring: self.clone(), c }
    }
    /// The rational number `num/den`, requiring `den` prime to p.
    pub fn from_ratio(self: &Arc<Self>, num: i128, den: i128) -> Result<RingElem> {
        let den_r = arith::reduce_i128(den, self.modulus);
        let inv = inv_mod(den_r, self.modulus)
            .ok_or_else(|| Error::NonUnit(format!("denominator {den} at p = {}", self.p())))?;
        let n = arith::reduce_i128(num, self.modulus);
        Ok(self.from_u64(mul_mod(n, inv, self.modulus)))
    }
    /// Element with the given coordinates (reduced mod p^M).
    pub fn elem(self: &Arc<Self>, coords: &[u64]) -> Result<RingElem> {
        if coords.len() != self.d() {
            return Err(Error::Precondition(format!(
                "expected {} coordinates, got {}",
                self.d(),
                coords.len()
            )));
        }
        let c = coords.iter().map(|&x| x % self.modulus).collect();
        Ok(RingElem { ring: self.clone(), c })
    }
    pub(crate) fn elem_unchecked(self: &Arc<Self>, c: Vec<u64>) -> RingElem {
        RingElem { ring: self.clone(), c }
    }
    /// The power-basis generator `x`.
    pub fn generator(self: &Arc<Self>) -> RingElem {
        let raw = self.gen_raw();
        RingElem { ring: self.clone(), c: raw.c }
    }

    /// Residue-field element number `idx` in the enumeration order
    /// (base-p digits of `idx` as coordinates, constant coordinate first).
    pub fn residue_by_index(self: &Arc<Self>, mut idx: u128) -> RingElem {
        let p = self.p() as u128;
        let mut c = vec![0; self.d()];
        for ci in c.iter_mut() {
            *ci = (idx % p) as u64;
            idx /= p;
        }
        RingElem { ring: self.clone(), c }
    }

    fn residue_eq(&self, a: &RingElem, b: &RingElem) -> bool {
        let p = self.p();
        a.c.iter().zip(&b.c).all(|(&x, &y)| x % p == y % p)
    }

    /// A root of unity of exact order `m`, the Teichmüller lift of the first
    /// residue of exact order `m` in the enumeration order.
    pub fn teichmuller_root(self: &Arc<Self>, m: u64) -> Result<RingElem> {
        let q = self
            .residue_size()
            .ok_or_else(|| Error::Unsupported("residue field too large".into()))?;
        if m == 0 || (q - 1) % m as u128 != 0 {
            return Err(Error::Precondition(format!("{m} does not divide {}^{} - 1", self.p(), self.d())));
        }
        if m == 1 {
            return Ok(self.one());
        }
        let one = self.one();
        let primes = prime_factors(m as u128);
        let exact = |z: &RingElem| {
            self.residue_eq(&z.pow(m as u128), &one)
                && primes.iter().all(|&l| !self.residue_eq(&z.pow(m as u128 / l), &one))
        };
        let mut found = None;
        if q <= ENUMERATION_LIMIT {
            for idx in 1..q {
                let z = self.residue_by_index(idx);
                if exact(&z) {
                    found = Some(z);
                    break;
                }
            }
        } else {
            let e = (q - 1) / m as u128;
            for idx in 2..q.min(1 << 16) {
                let z = self.residue_by_index(idx).pow(e).reduce_digits(1);
                if exact(&z) {
                    found = Some(z);
                    break;
                }
            }
        }
        let z = found.ok_or_else(|| Error::Internal(format!("no residue of order {m} found")))?;
        self.hensel_root(&z, &one, m)
    }

    /// Hensel-lifts a residue root `z` of `X^n = a` to full precision.
    fn hensel_root(self: &Arc<Self>, z: &RingElem, a: &RingElem, n: u64) -> Result<RingElem> {
        let nn = self.from_u64(n);
        let mut y = z.clone();
        for _ in 0..80 {
            let yn1 = y.pow(n as u128 - 1);
            let f = yn1.mul(&y).sub(a);
            if f.is_zero() {
                return Ok(y);
            }
            let df = nn.mul(&yn1);
            y = y.sub(&f.mul(&df.inv()?));
        }
        if y.pow(n as u128) == *a {
            Ok(y)
        } else {
            Err(Error::Internal("Hensel lift did not converge".into()))
        }
    }

    /// True when `a` (a unit) has an `n`-th root in this ring.
    pub fn has_nth_root(self: &Arc<Self>, a: &RingElem, n: u64) -> Result<bool> {
        let q = self
            .residue_size()
            .ok_or_else(|| Error::Unsupported("residue field too large".into()))?;
        let e = (q - 1) / num_integer::Integer::gcd(&(q - 1), &(n as u128));
        Ok(self.residue_eq(&a.pow(e), &self.one()))
    }

    /// `n`-th root of the unit `a`, lifting the selected residue root.
    pub fn nth_root(self: &Arc<Self>, a: &RingElem, n: u64, choice: &ResidueChoice) -> Result<RingElem> {
        if n == 0 || n.is_multiple_of(self.p()) {
            return Err(Error::Precondition(format!("root index {n} must be prime to p")));
        }
        if !a.is_unit() {
            return Err(Error::NonUnit(format!("{a}")));
        }
        if n == 1 {
            return Ok(a.clone());
        }
        if !self.has_nth_root(a, n)? {
            let minimal = if a.is_in_zp() {
                minimal_root_degree(self.p(), a.c[0] % self.p(), n, 64)
            } else {
                None
            };
            return Err(Error::NoRoot { minimal_degree: minimal });
        }
        let q = self.residue_size().unwrap();
        let z = match choice {
            ResidueChoice::Residue(r) => {
                let z = self.elem(r)?.reduce_digits(1);
                if !self.residue_eq(&z.pow(n as u128), a) {
                    return Err(Error::Precondition(format!("chosen residue {r:?} is not an {n}-th root")));
                }
                z
            }
            ResidueChoice::Smallest => {
                if q > ENUMERATION_LIMIT {
                    return Err(Error::Unsupported("root search in a residue field this large".into()));
                }
                (1..q)
                    .map(|i| self.residue_by_index(i))
                    .find(|z| self.residue_eq(&z.pow(n as u128), a))
                    .ok_or_else(|| Error::Internal("residue root not found".into()))?
            }
        };
        self.hensel_root(&z, a, n)
    }
}

/// Smallest residue degree `d ≤ limit` for which the residue `a ∈ F_p^×` has an
/// `n`-th root in `F_{p^d}`.
pub fn minimal_root_degree(p: u64, a: u64, n: u64, limit: usize) -> Option<usize> {
    if a.is_multiple_of(p) {
        return None;
    }
    let ord_a = {
        let mut x = a % p;
        let mut k = 1u64;
        while x != 1 {
            x = mul_mod(x, a, p);
            k += 1;
        }
        k
    };
    // a = g^{(p-1)/ord_a · s}; a root exists in F_{p^d} iff ord_a · n' | p^d - 1
    // where n' is the part of n needed: a^{(q-1)/gcd(n,q-1)} = 1.
    for d in 1..=limit {
        let q = (p as u128).checked_pow(d as u32)?;
        let g = num_integer::Integer::gcd(&(q - 1), &(n as u128));
        let e = (q - 1) / g;
        if e.is_multiple_of(ord_a as u128) {
            return Some(d);
        }
    }
    None
}

/// Smallest residue degree for which the ring contains a primitive `m`-th root of unity.
pub fn minimal_degree_for_roots_of_unity(p: u64, m: u64) -> Option<usize> {
    arith::mult_order(p % m.max(1), m).map(|d| d as usize)
}

/// Frobenius `σ(x)`.
pub fn frobenius(x: &RingElem) -> RingElem {
    x.frobenius()
}

/// p-adic valuation of `x`, saturating at the precision.
pub fn valuation(x: &RingElem) -> Valuation {
    x.valuation()
}

/// Tests `a ∈ k² Z_p`, i.e. `v_p(a) ≥ 2 v_p(k)`. `None` means the precision
/// cannot decide.
pub fn divides_k_squared(a: &RingElem, k: u64) -> Option<bool> {
    let need = 2 * arith::vp(k, a.ring.p()).unwrap_or(0);
    a.valuation().at_least(need)
}

// ---- polynomials over F_p, used only to find the minimal polynomial -------

fn first_irreducible(p: u64, d: usize) -> Result<Vec<u64>> {
    let total = (p as u128).pow(d as u32);
    for idx in 0..total {
        let mut low = Vec::with_capacity(d);
        let mut r = idx;
        for _ in 0..d {
            low.push((r % p as u128) as u64);
            r /= p as u128;
        }
        let mut f = low.clone();
        f.push(1);
        if fp_is_irreducible(&f, p) {
            return Ok(low);
        }
    }
    Err(Error::Internal(format!("no irreducible polynomial of degree {d} over F_{p}")))
}

fn fp_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn fp_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p).expect("nonzero leading coefficient");
    while r.len() > df && !(r.len() == 1 && r[0] == 0) {
        let k = r.len() - 1;
        let c = mul_mod(r[k], lead_inv, p);
        for i in 0..=df {
            let idx = k - df + i;
            r[idx] = sub_mod(r[idx], mul_mod(c, f[i], p), p);
        }
        fp_trim(&mut r);
        if r.len() - 1 < df || (r.len() == 1 && r[0] == 0) {
            break;
        }
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut t = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            t[i + j] = add_mod(t[i + j], mul_mod(x, y, p), p);
        }
    }
    fp_rem(&t, f, p)
}

fn fp_pow_mod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = fp_rem(a, f, p);
    while e > 0 {
        if e & 1 == 1 {
            r = fp_mulmod(&r, &b, f, p);
        }
        b = fp_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    r
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// `x^{p^k} mod f`.
fn fp_frob_power(f: &[u64], k: usize, p: u64) -> Vec<u64> {
    let mut h = vec![0u64, 1];
    for _ in 0..k {
        h = fp_pow_mod(&h, p, f, p);
    }
    h
}

fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    let sub_x = |mut h: Vec<u64>| {
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = sub_mod(h[1], 1, p);
        fp_trim(&mut h);
        h
    };
    let full = sub_x(fp_frob_power(f, d, p));
    if !(full.len() == 1 && full[0] == 0) {
        return false;
    }
    for l in prime_factors(d as u128) {
        let h = sub_x(fp_frob_power(f, d / l as usize, p));
        let g = fp_gcd(f, &h, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Irreducibility of a polynomial over `F_p` (coefficients low to high).
pub fn is_irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let mut g: Vec<u64> = f.iter().map(|&c| c % p).collect();
    fp_trim(&mut g);
    g.len() >= 2 && fp_is_irreducible(&g, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let r = make_ring(7, 1, 6).unwrap();
        assert_eq!(r.modulus(), 117_649);
        let x = r.from_i64(-3);
        assert_eq!(x.frobenius(), x);
        assert_eq!(x.mul(&x.inv().unwrap()), r.one());
        assert!(make_ring(9, 1, 2).is_err());
        assert!(make_ring(3, 1, 2).is_err());
    }

    #[test]
    fn teichmuller_lift_of_three_mod_eleven() {
        let r = make_ring(11, 1, 4).unwrap();
        let z = r.teichmuller_root(5).unwrap();
        assert_eq!(z.coords()[0] % 11, 3);
        assert!(z.pow(5).is_one());
        assert!(!z.is_one());
        assert!(r.teichmuller_root(3).is_err());
        assert!(r.teichmuller_root(1).unwrap().is_one());
    }

    #[test]
    fn degree_two_ring_for_zeta5_at_19() {
        assert_eq!(minimal_degree_for_roots_of_unity(19, 5), Some(2));
        let r = make_ring(19, 2, 4).unwrap();
        assert!(is_irreducible_mod_p(&r.minpoly(), 19));
        let z = r.teichmuller_root(5).unwrap();
        assert!(z.pow(5).is_one());
        assert_eq!(z.frobenius(), z.pow(19));
        let x = r.generator();
        assert_eq!(x.frobenius().frobenius(), x);
    }

    #[test]
    fn square_root_of_four() {
        let r = make_ring(7, 1, 4).unwrap();
        let four = r.from_u64(4);
        let s = r.nth_root(&four, 2, &ResidueChoice::Residue(vec![2])).unwrap();
        assert_eq!(s, r.from_u64(2));
        let s5 = r.nth_root(&four, 2, &ResidueChoice::Residue(vec![5])).unwrap();
        assert_eq!(s5, r.from_i64(-2));
        let three = r.from_u64(3);
        match r.nth_root(&three, 2, &ResidueChoice::Smallest) {
            Err(Error::NoRoot { minimal_degree }) => assert_eq!(minimal_degree, Some(2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn divides_k_squared_cases() {
        let r = make_ring(7, 1, 4).unwrap();
        assert_eq!(divides_k_squared(&r.from_u64(2), 2), Some(true));
        assert_eq!(divides_k_squared(&r.from_u64(7), 7), Some(false));
        assert_eq!(divides_k_squared(&r.from_u64(49), 7), Some(true));
        assert_eq!(divides_k_squared(&r.zero(), 7 * 7 * 7), None);
        assert_eq!(valuation(&r.zero()), Valuation::AtLeast(4));
    }
}

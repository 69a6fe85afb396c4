//! Series in `q` whose coefficients are Laurent polynomials in `u` divided by
//! a power of `(1 − u)`: the ring `lim B[u, u⁻¹]/(qⁿ)` localized at `(1 − u)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::arith::{add_mod, sub_mod};
use crate::padic::{make_ring, Ring, RingElem, RingParams};
use crate::series::LaurentSeries;

/// `u^lo · (num[0] + num[1] u + …) / (1 − u)^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPart {
    pub e: u32,
    pub lo: i64,
    /// Flat coefficients, `d` residues per power of `u`.
    pub num: Vec<u64>,
}

impl UPart {
    pub fn zero() -> Self {
        UPart { e: 0, lo: 0, num: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&x| x == 0)
    }

    fn len(&self, d: usize) -> usize {
        self.num.len() / d
    }

    /// Lowest and highest u-exponent of the numerator.
    pub fn u_range(&self, d: usize) -> Option<(i64, i64)> {
        (!self.is_zero()).then(|| (self.lo, self.lo + self.len(d) as i64 - 1))
    }

    fn trim(&mut self, d: usize) {
        while self.num.len() >= d && self.num[self.num.len() - d..].iter().all(|&x| x == 0) {
            self.num.truncate(self.num.len() - d);
        }
        let lead = self.num.chunks(d).take_while(|c| c.iter().all(|&x| x == 0)).count();
        if lead > 0 {
            self.num.drain(..lead * d);
            self.lo += lead as i64;
        }
        if self.num.is_empty() {
            self.lo = 0;
            self.e = 0;
        }
    }

    fn at_one_is_zero(&self, ring: &Ring) -> bool {
        let d = ring.d();
        let m = ring.modulus();
        let mut s = vec![0u64; d];
        for c in self.num.chunks(d) {
            for r in 0..d {
                s[r] = add_mod(s[r], c[r], m);
            }
        }
        s.iter().all(|&x| x == 0)
    }

    /// Brings the part into normal form: trimmed numerator, and no common
    /// factor `(1 − u)` between numerator and denominator.
    pub fn normalize(&mut self, ring: &Ring) {
        let d = ring.d();
        self.trim(d);
        let m = ring.modulus();
        while self.e > 0 && !self.num.is_empty() && self.at_one_is_zero(ring) {
            // P = (1 − u) Q with Q_k = Σ_{j ≤ k} P_j.
            let len = self.len(d);
            let mut q = vec![0u64; (len - 1) * d];
            let mut acc = vec![0u64; d];
            for k in 0..len - 1 {
                for r in 0..d {
                    acc[r] = add_mod(acc[r], self.num[k * d + r], m);
                }
                q[k * d..(k + 1) * d].copy_from_slice(&acc);
            }
            self.num = q;
            self.e -= 1;
            self.trim(d);
        }
        if self.num.is_empty() {
            self.e = 0;
        }
    }

    /// Multiplies the numerator by `(1 − u)^k`.
    fn times_one_minus_u(&self, ring: &Ring, k: u32) -> Vec<u64> {
        let d = ring.d();
        let m = ring.modulus();
        let mut c = self.num.clone();
        for _ in 0..k {
            let len = c.len() / d;
            let mut out = vec![0u64; (len + 1) * d];
            for i in 0..=len {
                for r in 0..d {
                    let a = if i < len { c[i * d + r] } else { 0 };
                    let b = if i > 0 { c[(i - 1) * d + r] } else { 0 };
                    out[i * d + r] = sub_mod(a, b, m);
                }
            }
            c = out;
        }
        c
    }

    pub fn add(&self, o: &UPart, ring: &Ring, negate: bool) -> UPart {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() && !negate {
            return o.clone();
        }
        let d = ring.d();
        let m = ring.modulus();
        let e = self.e.max(o.e);
        let a = self.times_one_minus_u(ring, e - self.e);
        let b = o.times_one_minus_u(ring, e - o.e);
        let lo = if self.is_zero() { o.lo } else { self.lo.min(o.lo) };
        let hi = (self.lo + (a.len() / d) as i64).max(o.lo + (b.len() / d) as i64);
        let mut num = vec![0u64; ((hi - lo).max(0) as usize) * d];
        for (src, start, neg) in [(&a, self.lo, false), (&b, o.lo, negate)] {
            for (k, c) in src.chunks(d).enumerate() {
                let pos = (start - lo) as usize + k;
                for r in 0..d {
                    let slot = &mut num[pos * d + r];
                    *slot = if neg { sub_mod(*slot, c[r], m) } else { add_mod(*slot, c[r], m) };
                }
            }
        }
        let mut out = UPart { e, lo, num };
        out.normalize(ring);
        out
    }

    pub fn mul(&self, o: &UPart, ring: &Ring) -> UPart {
        if self.is_zero() || o.is_zero() {
            return UPart::zero();
        }
        let d = ring.d();
        let len = self.len(d) + o.len(d) - 1;
        let num = crate::series::mul_flat(ring, &self.num, &o.num, len);
        let mut out = UPart { e: self.e + o.e, lo: self.lo + o.lo, num };
        out.normalize(ring);
        out
    }

    fn scale(&self, c: &[u64], ring: &Ring) -> UPart {
        let mut out = UPart { e: self.e, lo: self.lo, num: crate::series::scale_flat(ring, &self.num, c) };
        out.normalize(ring);
        out
    }
}

/// A truncated series `Σ_{n<N} P_n(u)/(1−u)^{e_n} · qⁿ`.
#[derive(Clone, Debug)]
pub struct TwoVarSeries {
    ring: Ring,
    parts: Vec<UPart>,
}

impl PartialEq for TwoVarSeries {
    fn eq(&self, o: &Self) -> bool {
        self.ring.params() == o.ring.params() && self.parts == o.parts
    }
}

#[derive(Serialize, Deserialize)]
struct PartJson {
    e: u32,
    lo: i64,
    num: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct TwoVarJson {
    spec: RingParams,
    #[serde(rename = "N")]
    n: usize,
    label: String,
    parts: Vec<PartJson>,
}

impl TwoVarSeries {
    pub fn zero(ring: &Ring, order: usize) -> Self {
        TwoVarSeries { ring: ring.clone(), parts: vec![UPart::zero(); order] }
    }

    pub fn from_parts(ring: &Ring, mut parts: Vec<UPart>) -> Self {
        for p in parts.iter_mut() {
            p.normalize(ring);
        }
        TwoVarSeries { ring: ring.clone(), parts }
    }

    /// Embeds a power series in `q` (no negative exponents) as constants in `u`.
    pub fn from_q_series(f: &LaurentSeries) -> Result<Self> {
        let ring = f.ring().clone();
        if f.order() < 0 {
            return Ok(Self::zero(&ring, 0));
        }
        let g = f.normalize();
        if g.val() < 0 {
            return Err(Error::Precondition("negative q-exponents are not representable".into()));
        }
        let order = f.order() as usize;
        let parts = (0..order)
            .map(|n| {
                let c = g.coeff(n as i64);
                UPart { e: 0, lo: 0, num: c.into_coords() }
            })
            .collect();
        Ok(Self::from_parts(&ring, parts))
    }

    /// `c · q^n · u^k`.
    pub fn monomial(c: &RingElem, n: usize, k: i64, order: usize) -> Self {
        let ring = c.ring().clone();
        let mut s = Self::zero(&ring, order);
        if n < order {
            s.parts[n] = UPart { e: 0, lo: k, num: c.coords().to_vec() };
            s.parts[n].normalize(&ring);
        }
        s
    }

    pub fn one(ring: &Ring, order: usize) -> Self {
        Self::monomial(&ring.one(), 0, 0, order)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    /// Number of known q-exponents.
    pub fn order(&self) -> usize {
        self.parts.len()
    }
    pub fn part(&self, n: usize) -> &UPart {
        &self.parts[n]
    }
    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = self.clone();
        s.parts.truncate(order);
        s
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.ring.params() != o.ring.params() {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.order().min(o.order());
        let parts = (0..n).map(|i| self.parts[i].add(&o.parts[i], &self.ring, false)).collect();
        Ok(TwoVarSeries { ring: self.ring.clone(), parts })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.order().min(o.order());
        let parts = (0..n).map(|i| self.parts[i].add(&o.parts[i], &self.ring, true)).collect();
        Ok(TwoVarSeries { ring: self.ring.clone(), parts })
    }

    pub fn neg(&self) -> Self {
        let z = Self::zero(&self.ring, self.order());
        z.sub(self).expect("same ring")
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.order().min(o.order());
        let mut parts = vec![UPart::zero(); n];
        for i in 0..n {
            if self.parts[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if o.parts[j].is_zero() {
                    continue;
                }
                let prod = self.parts[i].mul(&o.parts[j], &self.ring);
                parts[i + j] = parts[i + j].add(&prod, &self.ring, false);
            }
        }
        Ok(TwoVarSeries { ring: self.ring.clone(), parts })
    }

    pub fn scale(&self, c: &RingElem) -> Self {
        let parts = self.parts.iter().map(|p| p.scale(c.coords(), &self.ring)).collect();
        TwoVarSeries { ring: self.ring.clone(), parts }
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut r = Self::one(&self.ring, self.order());
        for _ in 0..e {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    /// Inverse, available when the `q⁰` part is `c·u^k·(1 − u)^j` for a unit `c`.
    pub fn inv(&self) -> Result<Self> {
        let d = self.ring.d();
        let p0 = &self.parts[0];
        let mut core = p0.clone();
        core.e = 0;
        let mut j = 0u32;
        while !core.is_zero() && core.at_one_is_zero(&self.ring) {
            core.e = 1;
            core.normalize(&self.ring);
            core.e = 0;
            j += 1;
        }
        if core.len(d) != 1 {
            return Err(Error::NonUnit("q⁰ part is not a monomial times a power of (1 − u)".into()));
        }
        let c_inv = self
            .ring
            .elem_unchecked(core.num.clone())
            .inv()
            .map_err(|_| Error::NonUnit("q⁰ coefficient is not a unit".into()))?;
        let g0 = UPart { e: j, lo: -core.lo, num: c_inv.into_coords() };
        let g0 = {
            let mut g = g0;
            let num = g.times_one_minus_u(&self.ring, p0.e);
            g.num = num;
            g.normalize(&self.ring);
            g
        };
        let n = self.order();
        let mut g = vec![UPart::zero(); n];
        if n == 0 {
            return Ok(Self::zero(&self.ring, 0));
        }
        g[0] = g0.clone();
        for k in 1..n {
            let mut s = UPart::zero();
            for i in 1..=k {
                if self.parts[i].is_zero() || g[k - i].is_zero() {
                    continue;
                }
                s = s.add(&self.parts[i].mul(&g[k - i], &self.ring), &self.ring, false);
            }
            g[k] = UPart::zero().add(&s.mul(&g0, &self.ring), &self.ring, true);
        }
        Ok(TwoVarSeries { ring: self.ring.clone(), parts: g })
    }

    /// Substitutes `u ↦ u⁻¹`.
    pub fn invert_u(&self) -> Self {
        let d = self.ring.d();
        let m = self.ring.modulus();
        let parts = self
            .parts
            .iter()
            .map(|p| {
                if p.is_zero() {
                    return UPart::zero();
                }
                // P(u⁻¹)/(1 − u⁻¹)^e = (−1)^e u^e P(u⁻¹)/(1 − u)^e
                let len = p.len(d);
                let mut num = vec![0u64; len * d];
                for (k, c) in p.num.chunks(d).enumerate() {
                    let dst = len - 1 - k;
                    for r in 0..d {
                        num[dst * d + r] = if p.e % 2 == 1 { sub_mod(0, c[r], m) } else { c[r] };
                    }
                }
                let lo = -(p.lo + len as i64 - 1) + p.e as i64;
                let mut out = UPart { e: p.e, lo, num };
                out.normalize(&self.ring);
                out
            })
            .collect();
        TwoVarSeries { ring: self.ring.clone(), parts }
    }

    /// Substitutes `u ↦ q^a·u` for `a ≥ 1`, keeping exponents below `order`.
    ///
    /// Only terms below the input order contribute, so the output is exact to
    /// `order` when no unknown term `qⁿuᵏ` (n ≥ N) has `n + a·k < order`; the
    /// caller chooses `order` accordingly.
    pub fn substitute_u_scaled(&self, a: usize, order: usize) -> Result<Self> {
        if a == 0 {
            return Ok(self.truncate(order));
        }
        let d = self.ring.d();
        let mut out = vec![UPart::zero(); order];
        for (n, p) in self.parts.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            // (1 − q^a u)^{−e} = Σ_j C(e−1+j, j) q^{aj} u^j
            let binom = binomial_row(&self.ring, p.e, order / a + 1);
            for (k, c) in p.num.chunks(d).enumerate() {
                let uexp = p.lo + k as i64;
                for (j, b) in binom.iter().enumerate() {
                    let qexp = n as i64 + a as i64 * (uexp + j as i64);
                    if qexp < 0 {
                        return Err(Error::Precondition(format!(
                            "substitution produces q^{qexp}; the result is not a power series"
                        )));
                    }
                    if qexp >= order as i64 {
                        break;
                    }
                    let coef = crate::series::scale_flat(&self.ring, c, b);
                    let term = UPart { e: 0, lo: uexp + j as i64, num: coef };
                    let q = qexp as usize;
                    out[q] = out[q].add(&term, &self.ring, false);
                }
            }
        }
        Ok(TwoVarSeries { ring: self.ring.clone(), parts: out })
    }

    /// Specializes `u = q₀^m`, `q = q₀^r` (`m ≥ 1`), giving a Laurent series in
    /// `q₀` truncated at `order`; the caller vouches that the unknown tail
    /// lies beyond `order`.
    pub fn specialize(&self, m: i64, r: i64, order: i64) -> Result<LaurentSeries> {
        if m < 1 || r < 1 {
            return Err(Error::Precondition("specialization needs m ≥ 1 and r ≥ 1".into()));
        }
        let d = self.ring.d();
        let mut lo = order;
        for (n, p) in self.parts.iter().enumerate() {
            if let Some((a, _)) = p.u_range(d) {
                lo = lo.min(r * n as i64 + m * a);
            }
        }
        let len = (order - lo).max(0) as usize;
        let mut acc = vec![0u64; len * d];
        let modulus = self.ring.modulus();
        for (n, p) in self.parts.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let binom = binomial_row(&self.ring, p.e, len + 1);
            for (k, c) in p.num.chunks(d).enumerate() {
                let base = r * n as i64 + m * (p.lo + k as i64);
                for (j, b) in binom.iter().enumerate() {
                    let ex = base + m * j as i64;
                    if ex >= order {
                        break;
                    }
                    let idx = (ex - lo) as usize;
                    let t = crate::series::scale_flat(&self.ring, c, b);
                    for rr in 0..d {
                        acc[idx * d + rr] = add_mod(acc[idx * d + rr], t[rr], modulus);
                    }
                }
            }
        }
        Ok(LaurentSeries::from_flat(&self.ring, lo, acc, order, self.ring.precision()).with_label("q0"))
    }

    /// JSON form: header fields plus one `(e, lo, numerator)` entry per q-exponent.
    pub fn to_json(&self, label: &str) -> String {
        let d = self.ring.d();
        let j = TwoVarJson {
            spec: self.ring.params(),
            n: self.order(),
            label: label.to_string(),
            parts: self
                .parts
                .iter()
                .map(|p| PartJson { e: p.e, lo: p.lo, num: p.num.chunks(d).map(|c| c.to_vec()).collect() })
                .collect(),
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: TwoVarJson = serde_json::from_str(s)?;
        let ring = make_ring(j.spec.p, j.spec.d, j.spec.m)?;
        if j.parts.len() != j.n {
            return Err(Error::Precondition("part count does not match N".into()));
        }
        let parts = j
            .parts
            .into_iter()
            .map(|p| UPart { e: p.e, lo: p.lo, num: p.num.into_iter().flatten().collect() })
            .collect();
        Ok(Self::from_parts(&ring, parts))
    }
}

/// `C(e−1+j, j)` for `j < len` as ring elements (all ones when `e = 1`, and
/// only `j = 0` when `e = 0`).
fn binomial_row(ring: &Ring, e: u32, len: usize) -> Vec<Vec<u64>> {
    if e == 0 {
        return vec![ring.one().into_coords()];
    }
    let mut row = Vec::with_capacity(len);
    // Pascal's rule: the row for e is the prefix sums of the row for e − 1.
    let mut prev: Vec<RingElem> = vec![ring.one(); len];
    for _ in 1..e {
        let mut cur = Vec::with_capacity(len);
        let mut s = ring.zero();
        for x in prev.iter() {
            s = s.add(x);
            cur.push(s.clone());
        }
        prev = cur;
    }
    for x in prev {
        row.push(x.into_coords());
    }
    row
}

/// `x(u)` and `y(u)` of the Tate curve to `q`-order `order`, the divisor sums
/// starting at `d = 1`.
pub fn tate_xy(ring: &Ring, order: usize) -> (TwoVarSeries, TwoVarSeries) {
    let d = ring.d();
    let mut xs = vec![UPart::zero(); order];
    let mut ys = vec![UPart::zero(); order];
    if order > 0 {
        xs[0] = UPart { e: 2, lo: 1, num: ring.one().into_coords() };
        ys[0] = UPart { e: 3, lo: 2, num: ring.one().into_coords() };
    }
    for n in 1..order {
        let divs = crate::padic::arith::divisors(n as u64);
        let mmax = n as i64;
        let width = (2 * mmax + 1) as usize;
        let mut xn = vec![ring.zero(); width];
        let mut yn = vec![ring.zero(); width];
        for &m in &divs {
            let mi = m as i64;
            let me = ring.from_i64(mi);
            // x: m(u^m + u^{-m} − 2)
            xn[(mmax + mi) as usize] = xn[(mmax + mi) as usize].add(&me);
            xn[(mmax - mi) as usize] = xn[(mmax - mi) as usize].add(&me);
            xn[mmax as usize] = xn[mmax as usize].sub(&me.scale(2));
            // y: m((m−1)/2 u^m − (m+1)/2 u^{-m} + 1)
            let a = ring.from_i64(mi * (mi - 1) / 2);
            let b = ring.from_i64(mi * (mi + 1) / 2);
            yn[(mmax + mi) as usize] = yn[(mmax + mi) as usize].add(&a);
            yn[(mmax - mi) as usize] = yn[(mmax - mi) as usize].sub(&b);
            yn[mmax as usize] = yn[mmax as usize].add(&me);
        }
        let flat = |v: Vec<RingElem>| -> Vec<u64> {
            let mut out = Vec::with_capacity(v.len() * d);
            for x in v {
                out.extend_from_slice(x.coords());
            }
            out
        };
        xs[n] = UPart { e: 0, lo: -mmax, num: flat(xn) };
        ys[n] = UPart { e: 0, lo: -mmax, num: flat(yn) };
    }
    (TwoVarSeries::from_parts(ring, xs), TwoVarSeries::from_parts(ring, ys))
}

/// `θ(u, q) = (1 − u)∏_{n≥1}(1 − qⁿu)(1 − qⁿu⁻¹)` to `q`-order `order`.
pub fn theta_series(ring: &Ring, order: usize) -> TwoVarSeries {
    let one = ring.one();
    let mut acc = TwoVarSeries::one(ring, order)
        .sub(&TwoVarSeries::monomial(&one, 0, 1, order))
        .expect("same ring");
    for n in 1..order {
        for k in [1i64, -1] {
            let f = TwoVarSeries::one(ring, order)
                .sub(&TwoVarSeries::monomial(&one, n, k, order))
                .expect("same ring");
            acc = acc.mul(&f).expect("same ring");
        }
    }
    acc
}

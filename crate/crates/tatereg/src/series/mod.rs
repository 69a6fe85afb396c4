//! Truncated Laurent series over `W(F_{p^d}) / p^M`.
//!
//! A [`LaurentSeries`] stores the coefficients of `q^v, …, q^{N-1}` densely and
//! knows two precisions: the order `N` (coefficients from `q^N` on are unknown)
//! and the number of certified p-adic digits (coefficients are only meaningful
//! modulo `p^digits`, which can be below the ring precision after divisions
//! by p).

mod kernels;
pub mod serial;

use std::fmt;

use crate::error::{Error, Result};
use crate::padic::arith::{mul_mod, sub_mod};
use crate::padic::{ResidueChoice, Ring, RingElem};

#[derive(Clone)]
pub struct LaurentSeries {
    ring: Ring,
    val: i64,
    order: i64,
    digits: u32,
    coeffs: Vec<u64>,
    label: &'static str,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in self.val..self.order {
            let c = self.coeff(n);
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*{}^{n}", self.label)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.label, self.order)
    }
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring.params() == other.ring.params()
            && self.order == other.order
            && (self.val.min(other.val)..self.order).all(|n| self.coeff_raw(n) == other.coeff_raw(n))
    }
}

impl LaurentSeries {
    // ---- construction ---------------------------------------------------

    pub(crate) fn from_flat(ring: &Ring, val: i64, mut coeffs: Vec<u64>, order: i64, digits: u32) -> Self {
        let d = ring.d();
        let len = (order - val).max(0) as usize;
        coeffs.resize(len * d, 0);
        LaurentSeries {
            ring: ring.clone(),
            val: val.min(order),
            order,
            digits: digits.min(ring.precision()),
            coeffs,
            label: "q",
        }
    }

    /// The zero series known to order `order`.
    pub fn zero(ring: &Ring, order: i64) -> Self {
        Self::from_flat(ring, order, Vec::new(), order, ring.precision())
    }

    pub fn constant(c: &RingElem, order: i64) -> Self {
        Self::monomial(c, 0, order)
    }

    pub fn one(ring: &Ring, order: i64) -> Self {
        Self::constant(&ring.one(), order)
    }

    /// `c·q^k + O(q^order)`.
    pub fn monomial(c: &RingElem, k: i64, order: i64) -> Self {
        let ring = c.ring().clone();
        if k >= order {
            return Self::zero(&ring, order);
        }
        Self::from_flat(&ring, k, c.coords().to_vec(), order, ring.precision())
    }

    /// The variable `q + O(q^order)`.
    pub fn var(ring: &Ring, order: i64) -> Self {
        Self::monomial(&ring.one(), 1, order)
    }

    /// Series with the given coefficients starting at `q^val`.
    pub fn from_coeffs(ring: &Ring, val: i64, coeffs: &[RingElem], order: i64) -> Self {
        let mut flat = Vec::with_capacity(coeffs.len() * ring.d());
        for c in coeffs.iter().take((order - val).max(0) as usize) {
            flat.extend_from_slice(c.coords());
        }
        Self::from_flat(ring, val, flat, order, ring.precision())
    }

    /// Series with integer coefficients starting at `q^val`.
    pub fn from_ints(ring: &Ring, val: i64, coeffs: &[i64], order: i64) -> Self {
        let elems: Vec<RingElem> = coeffs.iter().map(|&c| ring.from_i64(c)).collect();
        Self::from_coeffs(ring, val, &elems, order)
    }

    /// Series from a coefficient function on `val..order`.
    pub fn from_fn(ring: &Ring, val: i64, order: i64, mut f: impl FnMut(i64) -> RingElem) -> Self {
        let elems: Vec<RingElem> = (val..order).map(&mut f).collect();
        Self::from_coeffs(ring, val, &elems, order)
    }

    // ---- accessors ------------------------------------------------------

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    /// Lowest stored exponent.
    pub fn val(&self) -> i64 {
        self.val
    }
    /// Order precision: coefficients of `q^n` for `n ≥ order` are unknown.
    pub fn order(&self) -> i64 {
        self.order
    }
    /// Certified p-adic digits of every coefficient.
    pub fn digits(&self) -> u32 {
        self.digits
    }
    pub fn label(&self) -> &'static str {
        self.label
    }
    pub fn with_label(mut self, label: &'static str) -> Self {
        self.label = label;
        self
    }
    /// Caps the certified digits.
    pub fn with_digits(mut self, digits: u32) -> Self {
        self.digits = self.digits.min(digits);
        self
    }

    fn coeff_raw(&self, n: i64) -> &[u64] {
        const ZEROS: [u64; 64] = [0; 64];
        let d = self.ring.d();
        if n < self.val || n >= self.order {
            return &ZEROS[..d.min(64)];
        }
        let i = (n - self.val) as usize;
        &self.coeffs[i * d..(i + 1) * d]
    }

    /// Coefficient of `q^n`. Panics if `n ≥ order` (the coefficient is unknown).
    pub fn coeff(&self, n: i64) -> RingElem {
        assert!(n < self.order, "coefficient of {}^{n} is beyond the order {}", self.label, self.order);
        self.ring.elem_unchecked(self.coeff_raw(n).to_vec())
    }

    /// Coefficient of `q^n`, or `None` past the order.
    pub fn try_coeff(&self, n: i64) -> Option<RingElem> {
        (n < self.order).then(|| self.coeff(n))
    }

    /// Coefficients of `q^val .. q^{order-1}`.
    pub fn coeffs(&self) -> Vec<RingElem> {
        (self.val..self.order).map(|n| self.coeff(n)).collect()
    }

    /// Exponent of the first nonzero coefficient, if any is known.
    pub fn first_nonzero(&self) -> Option<i64> {
        (self.val..self.order).find(|&n| self.coeff_raw(n).iter().any(|&x| x != 0))
    }

    /// Drops leading zero coefficients so that `val` is the first nonzero exponent.
    pub fn normalize(&self) -> Self {
        match self.first_nonzero() {
            Some(v) if v > self.val => self.truncate_below(v),
            Some(_) => self.clone(),
            None => Self::from_flat(&self.ring, self.order, Vec::new(), self.order, self.digits)
                .with_label(self.label),
        }
    }

    fn truncate_below(&self, v: i64) -> Self {
        let d = self.ring.d();
        let skip = ((v - self.val).max(0) as usize) * d;
        Self::from_flat(&self.ring, v, self.coeffs[skip.min(self.coeffs.len())..].to_vec(), self.order, self.digits)
            .with_label(self.label)
    }

    /// Leading coefficient after normalization.
    pub fn leading(&self) -> Option<RingElem> {
        self.first_nonzero().map(|n| self.coeff(n))
    }

    /// True when the first nonzero coefficient is a unit.
    pub fn is_unit_led(&self) -> bool {
        self.leading().is_some_and(|c| c.is_unit())
    }

    /// Lowers the order precision.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let d = self.ring.d();
        let len = (order - self.val).max(0) as usize;
        Self::from_flat(&self.ring, self.val.min(order), self.coeffs[..len * d].to_vec(), order, self.digits)
            .with_label(self.label)
    }

    /// Dense coefficients of exponents `start..order` (zeros below `val`).
    pub(crate) fn dense_from(&self, start: i64) -> Vec<u64> {
        let d = self.ring.d();
        let len = (self.order - start).max(0) as usize;
        let mut out = vec![0u64; len * d];
        for n in start.max(self.val)..self.order {
            let i = (n - start) as usize;
            out[i * d..(i + 1) * d].copy_from_slice(self.coeff_raw(n));
        }
        out
    }

    fn same_ring(&self, o: &Self) -> Result<()> {
        if self.ring.params() != o.ring.params() {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// Agreement of all coefficients below the smaller of the two orders.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.ring.params() == o.ring.params() && {
            let top = self.order.min(o.order);
            (self.val.min(o.val)..top).all(|n| self.coeff_raw(n) == o.coeff_raw(n))
        }
    }

    /// Coefficient-wise equality modulo `p^k` below the smaller order.
    pub fn agrees_mod(&self, o: &Self, k: u32) -> bool {
        self.ring.params() == o.ring.params() && {
            let top = self.order.min(o.order);
            (self.val.min(o.val)..top).all(|n| {
                let a = self.ring.elem_unchecked(self.coeff_raw(n).to_vec()).reduce_digits(k);
                let b = self.ring.elem_unchecked(o.coeff_raw(n).to_vec()).reduce_digits(k);
                a == b
            })
        }
    }

    // ---- ring operations ------------------------------------------------

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_ring(o)?;
        let v = self.val.min(o.val);
        let order = self.order.min(o.order);
        let a = self.truncate(order).dense_from(v);
        let b = o.truncate(order).dense_from(v);
        let s = kernels::add(&self.ring, &a, &b);
        Ok(Self::from_flat(&self.ring, v, s, order, self.digits.min(o.digits)).with_label(self.label))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_ring(o)?;
        let v = self.val.min(o.val);
        let order = self.order.min(o.order);
        let a = self.truncate(order).dense_from(v);
        let b = o.truncate(order).dense_from(v);
        let s = kernels::sub(&self.ring, &a, &b);
        Ok(Self::from_flat(&self.ring, v, s, order, self.digits.min(o.digits)).with_label(self.label))
    }

    pub fn neg(&self) -> Self {
        let m = self.ring.modulus();
        let c = self.coeffs.iter().map(|&x| sub_mod(0, x, m)).collect();
        Self::from_flat(&self.ring, self.val, c, self.order, self.digits).with_label(self.label)
    }

    /// Product; order is `min(N_f + v_g, N_g + v_f)`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_ring(o)?;
        let a = self.normalize();
        let b = o.normalize();
        let v = a.val + b.val;
        let order = (a.order + b.val).min(b.order + a.val);
        let len = (order - v).max(0) as usize;
        let c = kernels::mul(&self.ring, &a.coeffs, &b.coeffs, len);
        Ok(Self::from_flat(&self.ring, v, c, order, self.digits.min(o.digits)).with_label(self.label))
    }

    pub fn scale(&self, s: &RingElem) -> Self {
        let c = kernels::scale(&self.ring, &self.coeffs, s.coords());
        Self::from_flat(&self.ring, self.val, c, self.order, self.digits).with_label(self.label)
    }

    pub fn scale_int(&self, s: i64) -> Self {
        self.scale(&self.ring.from_i64(s))
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_flat(&self.ring, self.val + k, self.coeffs.clone(), self.order + k, self.digits)
            .with_label(self.label)
    }

    /// Inverse of a unit-led series; order is `N − 2v`.
    pub fn inv(&self) -> Result<Self> {
        let a = self.normalize();
        if a.first_nonzero().is_none() {
            return Err(Error::NonUnit("series with no known nonzero coefficient".into()));
        }
        let len = (a.order - a.val) as usize;
        let g = kernels::inv(&self.ring, &a.coeffs, len)
            .ok_or_else(|| Error::NonUnit(format!("leading coefficient {}", a.coeff(a.val))))?;
        Ok(Self::from_flat(&self.ring, -a.val, g, a.order - 2 * a.val, self.digits).with_label(self.label))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        if e == 0 {
            let ord = if self.first_nonzero().is_some() { self.order - self.normalize().val } else { self.order };
            return Ok(Self::one(&self.ring, ord.max(0)).with_label(self.label));
        }
        let a = self.normalize();
        let len = (a.order - a.val).max(0) as usize;
        let c = kernels::pow(&self.ring, &a.coeffs, e, len);
        let v = a.val * e as i64;
        Ok(Self::from_flat(&self.ring, v, c, v + len as i64, self.digits).with_label(self.label))
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv()?.pow(e.unsigned_abs())
        }
    }

    // ---- substitutions --------------------------------------------------

    /// `f(g)` for `v(g) ≥ 1`. The order is `min(N_f·v_g, N_g + (k₁−1)·v_g)`
    /// where `k₁ = max(v_f, 1)`; Laurent `f` requires a unit-led `g`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.same_ring(g)?;
        let g = g.normalize();
        let vg = match g.first_nonzero() {
            Some(v) if v >= 1 => v,
            Some(_) => return Err(Error::Precondition("compose needs v(g) ≥ 1".into())),
            None => {
                return Err(Error::Precondition("compose with a series of unknown valuation".into()));
            }
        };
        let f = self.normalize();
        if f.val < 0 {
            let shifted = f.shift(-f.val);
            let inner = shifted.compose(&g)?;
            let gp = g.powi(f.val)?;
            return inner.mul(&gp).map(|s| s.with_label(g.label));
        }
        let k1 = f.val.max(1);
        let order = (f.order * vg).min(g.order + (k1 - 1) * vg);
        let fd = f.dense_from(0);
        let gd = g.truncate(order).dense_from(0);
        let len = order.max(0) as usize;
        let c = kernels::compose(&self.ring, &fd, &gd, len);
        Ok(Self::from_flat(&self.ring, 0, c, order, self.digits.min(g.digits)).with_label(g.label))
    }

    /// Compositional inverse of a series with `v = 1` and unit leading coefficient.
    pub fn reversion(&self) -> Result<Self> {
        let f = self.normalize();
        if f.val != 1 || !f.coeff(1).is_unit() {
            return Err(Error::Precondition("reversion needs v(f) = 1 with a unit leading coefficient".into()));
        }
        let ring = &self.ring;
        let d = ring.d();
        let n = f.order as usize;
        let fd = f.dense_from(0);
        let dfd: Vec<u64> = {
            // derivative f'(q) as a dense array starting at q^0
            let t = kernels::theta_derivative(ring, &fd, 0);
            t[d..].to_vec()
        };
        let c1 = kernels::inv_elem(ring, &fd[d..2 * d]).expect("unit");
        let mut g = vec![0u64; 2 * d];
        g[d..].copy_from_slice(&c1);
        let mut prec = 2usize;
        while prec < n {
            prec = (2 * prec).min(n);
            g.resize(prec * d, 0);
            let fg = kernels::compose(ring, &fd[..prec.min(fd.len() / d) * d], &g, prec);
            let dfg = kernels::compose(ring, &dfd[..prec.min(dfd.len() / d) * d], &g, prec);
            let mut resid = fg;
            resid[d] = sub_mod(resid[d], 1, ring.modulus());
            let corr = kernels::mul(ring, &resid, &kernels::inv(ring, &dfg, prec).expect("unit"), prec);
            g = kernels::sub(ring, &g, &corr);
        }
        g.truncate(n * d);
        Ok(Self::from_flat(ring, 0, g, f.order, self.digits).with_label(self.label).normalize())
    }

    /// `q ↦ q^k`: exponents are multiplied by `k ≥ 1`.
    pub fn power_substitute(&self, k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::Precondition("power_substitute needs k ≥ 1".into()));
        }
        let d = self.ring.d();
        let a = self.normalize();
        let len = ((a.order - a.val) * k) as usize;
        let mut c = vec![0u64; len * d];
        for (i, chunk) in a.coeffs.chunks(d).enumerate() {
            let j = i * k as usize;
            c[j * d..(j + 1) * d].copy_from_slice(chunk);
        }
        Ok(Self::from_flat(&self.ring, a.val * k, c, a.order * k, self.digits).with_label(self.label))
    }

    /// Reinterprets a series in `q` as a series in `q_i` with `q_i^r = q`.
    pub fn rescale_root(&self, r: i64) -> Result<Self> {
        Ok(self.power_substitute(r)?.with_label("q_i"))
    }

    /// Inverse of [`rescale_root`](Self::rescale_root): every exponent must be
    /// divisible by `r`.
    pub fn collapse_root(&self, r: i64) -> Result<Self> {
        if r < 1 {
            return Err(Error::Precondition("collapse_root needs r ≥ 1".into()));
        }
        let a = self.normalize();
        for n in a.val..a.order {
            if n.rem_euclid(r) != 0 && !a.coeff(n).is_zero() {
                return Err(Error::Precondition(format!("exponent {n} is not divisible by {r}")));
            }
        }
        let lo = a.val.div_euclid(r) + i64::from(a.val.rem_euclid(r) != 0);
        let hi = (a.order + r - 1).div_euclid(r);
        let d = self.ring.d();
        let mut c = Vec::with_capacity(((hi - lo).max(0) as usize) * d);
        for m in lo..hi {
            c.extend_from_slice(a.coeff_raw(m * r));
        }
        Ok(Self::from_flat(&self.ring, lo, c, hi, self.digits).with_label("q"))
    }

    /// `n`-th root with the leading coefficient's root chosen by `choice`.
    pub fn nth_root_series(&self, n: u64, choice: &ResidueChoice) -> Result<Self> {
        let a = self.normalize();
        let v = match a.first_nonzero() {
            Some(v) => v,
            None => return Err(Error::Precondition("root of a series with no known term".into())),
        };
        if v % n as i64 != 0 {
            return Err(Error::Precondition(format!("{n} does not divide the valuation {v}")));
        }
        let lead = a.coeff(v);
        let root = self.ring.nth_root(&lead, n, choice)?;
        let ring = &self.ring;
        let d = ring.d();
        let len = (a.order - v) as usize;
        let h = kernels::scale(ring, &a.coeffs, lead.inv()?.coords());
        let nn = n % ring.modulus();
        let mut y = vec![0u64; d];
        y[0] = 1;
        let mut prec = 1usize;
        while prec < len {
            prec = (2 * prec).min(len);
            y.resize(prec * d, 0);
            let yn1 = kernels::pow(ring, &y, n - 1, prec);
            let yn = kernels::mul(ring, &yn1, &y, prec);
            let resid = kernels::sub(ring, &yn, &h[..prec * d]);
            let denom = kernels::scale_int(ring, &yn1, nn);
            let corr = kernels::mul(ring, &resid, &kernels::inv(ring, &denom, prec).expect("unit"), prec);
            y = kernels::sub(ring, &y, &corr);
        }
        y.truncate(len * d);
        let y = kernels::scale(ring, &y, root.coords());
        let nv = v / n as i64;
        Ok(Self::from_flat(ring, nv, y, nv + len as i64, self.digits).with_label(self.label))
    }

    /// Formal derivative `d/dq`.
    pub fn derivative(&self) -> Self {
        let c = kernels::theta_derivative(&self.ring, &self.coeffs, self.val);
        Self::from_flat(&self.ring, self.val - 1, c, self.order - 1, self.digits).with_label(self.label)
    }

    /// Logarithmic derivative `q f'/f` of a unit-led series.
    pub fn qdlog(&self) -> Result<Self> {
        let a = self.normalize();
        if !a.is_unit_led() {
            return Err(Error::NonUnit("qdlog needs a unit-led series".into()));
        }
        let ring = &self.ring;
        let len = (a.order - a.val) as usize;
        let du = kernels::theta_derivative(ring, &a.coeffs, 0);
        let inv = kernels::inv(ring, &a.coeffs, len).expect("unit");
        let mut c = kernels::mul(ring, &du, &inv, len);
        if len > 0 {
            let m = ring.modulus();
            c[0] = (c[0] + crate::padic::arith::reduce_i128(a.val as i128, m)) % m;
        }
        Ok(Self::from_flat(ring, 0, c, len as i64, self.digits).with_label(self.label))
    }

    /// Applies `σ` to every coefficient (exponents unchanged).
    pub fn frobenius_coeffs(&self) -> Self {
        let d = self.ring.d();
        let mut c = self.coeffs.clone();
        if d > 1 {
            for chunk in c.chunks_mut(d) {
                self.ring.frob_in_place(chunk);
            }
        }
        Self::from_flat(&self.ring, self.val, c, self.order, self.digits).with_label(self.label)
    }

    /// `φ(f)`: `σ` on coefficients and `q ↦ q^p`. Known to order `p·N`.
    pub fn phi_substitute(&self) -> Self {
        let p = self.ring.p() as i64;
        self.frobenius_coeffs().power_substitute(p).expect("p ≥ 1").with_label(self.label)
    }

    // ---- logarithm and exponential ---------------------------------------

    fn p_divided_part(&self, a: &Self, what: &str) -> Result<Vec<u64>> {
        let p = self.ring.p();
        let mut z = a.dense_from(0);
        if z.iter().any(|&x| x % p != 0) {
            return Err(Error::Precondition(format!("{what}: series is not divisible by p")));
        }
        z.iter_mut().for_each(|x| *x /= p);
        Ok(z)
    }

    /// `log f` for `f ≡ 1 mod p` (every coefficient of `f − 1` divisible by p).
    /// Certified digits are those of `f`.
    pub fn log1(&self) -> Result<Self> {
        if self.val < 0 && (self.val..0.min(self.order)).any(|n| !self.coeff(n).is_zero()) {
            return Err(Error::Precondition("log1 of a series with negative exponents".into()));
        }
        let one = Self::one(&self.ring, self.order);
        let y = self.sub(&one)?;
        let z = self.p_divided_part(&y, "log1")?;
        let len = self.order.max(0) as usize;
        let c = log_series(&self.ring, &z, len, 0);
        Ok(Self::from_flat(&self.ring, 0, c, self.order, self.digits).with_label(self.label))
    }

    /// `exp y` for `y ≡ 0 mod p` with no negative exponents.
    pub fn exp0(&self) -> Result<Self> {
        if self.val < 0 && (self.val..0.min(self.order)).any(|n| !self.coeff(n).is_zero()) {
            return Err(Error::Precondition("exp0 of a series with negative exponents".into()));
        }
        let z = self.p_divided_part(self, "exp0")?;
        let ring = &self.ring;
        let d = ring.d();
        let p = ring.p();
        let m = ring.modulus();
        let big_m = ring.precision();
        let len = self.order.max(0) as usize;
        let mut out = vec![0u64; len * d];
        if len > 0 {
            out[0] = 1 % m;
        }
        let mut zk = vec![0u64; len * d];
        if len > 0 {
            zk[0] = 1 % m;
        }
        // k!/p^{v(k!)} as a unit and v(k!)
        let mut unit_fact = 1u64 % m;
        let mut v_fact = 0u32;
        let mut k = 0u64;
        loop {
            k += 1;
            let vk = crate::padic::arith::vp(k, p).unwrap();
            v_fact += vk;
            unit_fact = mul_mod(unit_fact, k / p.pow(vk) % m, m);
            let e = k as i64 - v_fact as i64;
            // v_p(k!) ≤ (k−1)/(p−1) bounds every later term from below.
            if k as i64 - ((k as i64 - 1) / (p as i64 - 1)) >= big_m as i64 {
                break;
            }
            zk = kernels::mul(ring, &zk, &z, len);
            if e >= big_m as i64 {
                continue;
            }
            let coef = mul_mod(p.pow(e as u32) % m, crate::padic::arith::inv_mod(unit_fact, m).unwrap(), m);
            let term = kernels::scale_int(ring, &zk, coef);
            out = kernels::add(ring, &out, &term);
        }
        Ok(Self::from_flat(ring, 0, out, self.order, self.digits).with_label(self.label))
    }

    /// `ℓ_φ(f) = (1/p)·log(φ(f)/f^p)` for a unit-led `f`. Uses one guard digit:
    /// the result is certified to `digits − 1` digits.
    pub fn ell_phi(&self) -> Result<Self> {
        let a = self.normalize();
        if !a.is_unit_led() {
            return Err(Error::NonUnit("ell_phi needs a unit-led series".into()));
        }
        if self.digits < 2 {
            return Err(Error::Uncertified("ell_phi needs at least one guard digit".into()));
        }
        let ring = &self.ring;
        let d = ring.d();
        let p = ring.p();
        let len = (a.order - a.val) as usize;
        let u = Self::from_flat(ring, 0, a.coeffs.clone(), len as i64, self.digits);
        let phi_u = u.phi_substitute().truncate(len as i64);
        let up = kernels::pow(ring, &u.coeffs, p, len);
        let inv = kernels::inv(ring, &up, len).expect("unit");
        let quot = kernels::mul(ring, &phi_u.dense_from(0), &inv, len);
        let mut y = quot;
        if len > 0 {
            y[0] = sub_mod(y[0], 1, ring.modulus());
        }
        if y.iter().any(|&x| x % p != 0) {
            return Err(Error::Internal("φ(f)/f^p is not congruent to 1 mod p".into()));
        }
        y.iter_mut().for_each(|x| *x /= p);
        let c = log_series(ring, &y, len, 1);
        debug_assert_eq!(c.len(), len * d);
        Ok(Self::from_flat(ring, 0, c, len as i64, self.digits - 1).with_label(self.label))
    }
}

/// `Σ_{k≥1} (−1)^{k+1} p^{k−v_p(k)−shift} z^k / (k/p^{v_p(k)})`, i.e.
/// `log(1 + p z) / p^shift`, with terms dropped once they vanish mod p^M.
fn log_series(ring: &Ring, z: &[u64], len: usize, shift: i64) -> Vec<u64> {
    let d = ring.d();
    let p = ring.p();
    let m = ring.modulus();
    let big_m = ring.precision() as i64;
    let mut out = vec![0u64; len * d];
    let mut zk = vec![0u64; len * d];
    if len == 0 {
        return out;
    }
    zk[0] = 1 % m;
    let mut k = 0u64;
    loop {
        k += 1;
        let s = crate::padic::arith::vp(k, p).unwrap();
        let e = k as i64 - s as i64 - shift;
        // k − ⌊log_p k⌋ is non-decreasing and bounds k − v_p(k) from below.
        if k as i64 - ilog(k, p) as i64 - shift >= big_m {
            break;
        }
        if e >= big_m {
            zk = kernels::mul(ring, &zk, z, len);
            continue;
        }
        zk = kernels::mul(ring, &zk, z, len);
        let unit = k / p.pow(s);
        let mut coef = mul_mod(p.pow(e as u32) % m, crate::padic::arith::inv_mod(unit % m, m).unwrap(), m);
        if k.is_multiple_of(2) {
            coef = sub_mod(0, coef, m);
        }
        let term = kernels::scale_int(ring, &zk, coef);
        out = kernels::add(ring, &out, &term);
    }
    out
}

pub(crate) fn mul_flat(ring: &Ring, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    kernels::mul(ring, a, b, len)
}

pub(crate) fn scale_flat(ring: &Ring, a: &[u64], s: &[u64]) -> Vec<u64> {
    kernels::scale(ring, a, s)
}

fn ilog(k: u64, p: u64) -> u32 {
    let mut r = 0;
    let mut x = k;
    while x >= p {
        x /= p;
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests;

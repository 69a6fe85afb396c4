//! Canonical q-expansions: divisor sums, level-one forms and `j`, the Tate
//! curve coefficients and parameterization, theta products, the weight one
//! and three Eisenstein series of level `Γ₁(3)` with the Hauptmodul `t`, the
//! product `S(α)`, the closed residue value and the `ℓ_φ` integrality test.

pub mod twovar;

use serde::{Deserialize, Serialize};

pub use twovar::{tate_xy, theta_series, TwoVarSeries, UPart};

use crate::error::{Error, Result};
use crate::padic::arith::{divisors, sub_mod, vp};
use crate::padic::{ResidueChoice, Ring, RingElem};
use crate::series::LaurentSeries;

/// `Σ_{n≥1} σ_k(n) qⁿ + O(q^order)`.
pub fn divisor_series(ring: &Ring, k: u32, order: i64) -> LaurentSeries {
    let m = ring.modulus();
    let len = order.max(0) as usize;
    let mut sig = vec![0u64; len];
    for dv in 1..len {
        let pk = ring.from_u64(dv as u64).pow(k as u128).coords()[0];
        let mut n = dv;
        while n < len {
            sig[n] = (sig[n] + pk) % m;
            n += dv;
        }
    }
    LaurentSeries::from_fn(ring, 0, order, |n| ring.from_u64(sig[n as usize]))
}

/// Names accepted by [`level1_series`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level1 {
    E4,
    E6,
    Delta,
    J,
}

/// `∏_{n≥1}(1 − qⁿ)` by the pentagonal number theorem.
pub fn euler_product(ring: &Ring, order: i64) -> LaurentSeries {
    let len = order.max(0);
    let mut c = vec![0i64; len as usize];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = kk * (3 * kk - 1) / 2;
            if e < len {
                c[e as usize] += if kk % 2 == 0 { 1 } else { -1 };
                any = true;
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    LaurentSeries::from_ints(ring, 0, &c, order)
}

/// `E4`, `E6`, `Δ = q∏(1 − qⁿ)²⁴` and `j = E4³/Δ`, each known to `order`.
pub fn level1_series(ring: &Ring, name: Level1, order: i64) -> LaurentSeries {
    let work = order + 2;
    let e4 = || divisor_series(ring, 3, work).scale_int(240).add(&LaurentSeries::one(ring, work)).unwrap();
    let delta = || euler_product(ring, work).pow(24).unwrap().shift(1).truncate(work);
    let s = match name {
        Level1::E4 => e4(),
        Level1::E6 => LaurentSeries::one(ring, work).sub(&divisor_series(ring, 5, work).scale_int(504)).unwrap(),
        Level1::Delta => delta(),
        Level1::J => e4().pow(3).unwrap().div(&delta()).unwrap(),
    };
    s.truncate(order)
}

/// The Tate-curve coefficients `a₄ = −5Σσ₃(n)qⁿ` and `a₆ = −Σ(5σ₃+7σ₅)(n)qⁿ/12`.
pub fn tate_coeffs(ring: &Ring, order: i64) -> (LaurentSeries, LaurentSeries) {
    let s3 = divisor_series(ring, 3, order);
    let s5 = divisor_series(ring, 5, order);
    let a4 = s3.scale_int(-5);
    let twelfth = ring.from_ratio(-1, 12).expect("p ≥ 5");
    let a6 = s3.scale_int(5).add(&s5.scale_int(7)).unwrap().scale(&twelfth);
    (a4, a6)
}

/// Standard invariants of a long Weierstrass equation.
#[derive(Clone, Debug)]
pub struct WeierstrassInvariants<T> {
    pub b2: T,
    pub b4: T,
    pub b6: T,
    pub b8: T,
    pub c4: T,
    pub c6: T,
    pub disc: T,
}

/// Invariants of `y² + xy = x³ + a₄x + a₆` for the Tate coefficients.
pub fn tate_invariants(ring: &Ring, order: i64) -> WeierstrassInvariants<LaurentSeries> {
    let (a4, a6) = tate_coeffs(ring, order);
    let one = LaurentSeries::one(ring, order);
    let b2 = one.clone();
    let b4 = a4.scale_int(2);
    let b6 = a6.scale_int(4);
    let b8 = a6.sub(&a4.mul(&a4).unwrap()).unwrap();
    let c4 = b2.mul(&b2).unwrap().sub(&b4.scale_int(24)).unwrap();
    let c6 = b2
        .pow(3)
        .unwrap()
        .neg()
        .add(&b2.mul(&b4).unwrap().scale_int(36))
        .unwrap()
        .sub(&b6.scale_int(216))
        .unwrap();
    let disc = b2
        .mul(&b2)
        .unwrap()
        .mul(&b8)
        .unwrap()
        .neg()
        .sub(&b4.pow(3).unwrap().scale_int(8))
        .unwrap()
        .sub(&b6.mul(&b6).unwrap().scale_int(27))
        .unwrap()
        .add(&b2.mul(&b4).unwrap().mul(&b6).unwrap().scale_int(9))
        .unwrap();
    WeierstrassInvariants { b2, b4, b6, b8, c4, c6, disc }
}

/// `j = c₄³/Δ` computed from the Tate-curve coefficients, known to `order`.
pub fn j_from_tate(ring: &Ring, order: i64) -> LaurentSeries {
    let inv = tate_invariants(ring, order + 2);
    inv.c4.pow(3).unwrap().div(&inv.disc).unwrap().truncate(order)
}

/// The non-trivial character modulo 3.
pub fn chi3(n: i64) -> i64 {
    match n.rem_euclid(3) {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

/// Names accepted by [`gamma13_series`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gamma13 {
    E1,
    E3a,
    E3b,
    T,
    F1,
    F2,
    G,
}

fn lambert_chi(ring: &Ring, order: i64, constant: i64, scale: i64, f: impl Fn(i64, i64) -> i64) -> LaurentSeries {
    LaurentSeries::from_fn(ring, 0, order, |n| {
        if n == 0 {
            return ring.from_i64(constant);
        }
        let mut s = ring.zero();
        for dv in divisors(n as u64) {
            let c = f(dv as i64, n / dv as i64);
            if c != 0 {
                s = s.add(&ring.from_i64(c));
            }
        }
        s.mul(&ring.from_i64(scale))
    })
}

/// The series `E₁`, `E₃,a`, `E₃,b`, `t = (E₃,a/E₁³)^{1/4}` (constant term 1)
/// and `f₁ = −27t/(4(t−1))·E₃,b`, `f₂ = −27t/(4(t+1))·E₃,b`, `g = −27t/4·E₃,b`.
pub fn gamma13_series(ring: &Ring, name: Gamma13, order: i64) -> Result<LaurentSeries> {
    let work = order + 2;
    let e1 = || lambert_chi(ring, work, 1, 6, |d, _| chi3(d));
    let e3a = || lambert_chi(ring, work, 1, -9, |d, _| chi3(d) * d * d);
    let e3b = || lambert_chi(ring, work, 0, 1, |d, e| chi3(e) * d * d);
    let t = || -> Result<LaurentSeries> {
        e3a()
            .div(&e1().pow(3)?)?
            .nth_root_series(4, &ResidueChoice::Residue(ring.one().residue()))
    };
    let k = ring.from_ratio(-27, 4)?;
    let s = match name {
        Gamma13::E1 => e1(),
        Gamma13::E3a => e3a(),
        Gamma13::E3b => e3b(),
        Gamma13::T => t()?,
        Gamma13::G => t()?.mul(&e3b())?.scale(&k),
        Gamma13::F1 | Gamma13::F2 => {
            let t = t()?;
            let one = LaurentSeries::one(ring, work);
            let den = if name == Gamma13::F1 { t.sub(&one)? } else { t.add(&one)? };
            t.mul(&e3b())?.scale(&k).div(&den)?
        }
    };
    if s.order() < order {
        return Err(Error::Internal(format!("{name:?} lost order precision")));
    }
    Ok(s.truncate(order))
}

/// `∏ (1 − q₀^s)` over the given positive exponents, as a flat series to `len`.
fn prod_one_minus(ring: &Ring, exps: &[i64], len: usize) -> LaurentSeries {
    let m = ring.modulus();
    let d = ring.d();
    let mut c = vec![0u64; len * d];
    if len == 0 {
        return LaurentSeries::zero(ring, 0);
    }
    c[0] = 1 % m;
    for &s in exps {
        let s = s as usize;
        if s >= len {
            continue;
        }
        for i in (s..len).rev() {
            for r in 0..d {
                c[i * d + r] = sub_mod(c[i * d + r], c[(i - s) * d + r], m);
            }
        }
    }
    LaurentSeries::from_flat(ring, 0, c, len as i64, ring.precision())
}

/// `θ(q₀^e)` with `q = q₀^r`, evaluated as the one-variable product
/// `(1 − q₀^e)∏_{n≥1}(1 − q₀^{rn+e})(1 − q₀^{rn−e})`; factors with a negative
/// exponent `s` are rewritten as `−q₀^s(1 − q₀^{−s})`. Known to `order`.
pub fn theta_at_power(ring: &Ring, e: i64, r: i64, order: i64) -> Result<LaurentSeries> {
    if r < 1 || e.rem_euclid(r) == 0 {
        return Err(Error::Precondition(format!("θ(q₀^{e}) vanishes or r = {r} is invalid")));
    }
    let mut raw = vec![e];
    let mut n = 1;
    while r * n - e.abs() < 0 {
        raw.push(r * n + e);
        raw.push(r * n - e);
        n += 1;
    }
    let shift: i64 = raw.iter().filter(|&&s| s < 0).sum();
    let negatives = raw.iter().filter(|&&s| s < 0).count();
    let len = (order - shift).max(0);
    let mut exps: Vec<i64> = raw.iter().map(|s| s.abs()).collect();
    loop {
        let a = r * n + e;
        let b = r * n - e;
        if a >= len && b >= len {
            break;
        }
        exps.push(a.abs());
        exps.push(b.abs());
        n += 1;
    }
    let unit = prod_one_minus(ring, &exps, len as usize);
    let unit = if negatives % 2 == 1 { unit.neg() } else { unit };
    Ok(unit.shift(shift).with_label("q0"))
}

/// `S(α) = ∏_{k≥1}((1 − αq^k)/(1 − α⁻¹q^k))^k` with `q = q₀^r`, for a unit-led
/// `α` with `|v(α)| < r`. Known to `order`.
pub fn s_alpha_series(alpha: &LaurentSeries, r: i64, order: i64) -> Result<LaurentSeries> {
    let a = alpha.normalize();
    let v = match a.first_nonzero() {
        Some(v) if a.coeff(v).is_unit() => v,
        _ => return Err(Error::Precondition("α must be unit-led".into())),
    };
    if v.abs() >= r {
        return Err(Error::Precondition(format!("|v(α)| = {} must be below r = {r}", v.abs())));
    }
    let ring = alpha.ring();
    let ainv = a.inv()?;
    let mut acc = LaurentSeries::one(ring, order);
    let mut k = 1;
    while r * k + v < order || r * k - v < order {
        let one = LaurentSeries::one(ring, order);
        let num = one.sub(&a.shift(r * k))?;
        let den = one.sub(&ainv.shift(r * k))?;
        acc = acc.mul(&num.div(&den)?.pow(k as u64)?)?;
        k += 1;
    }
    Ok(acc.truncate(order).with_label("q0"))
}

fn check_abr(ring: &Ring, a: i64, b: i64, r: i64) -> Result<()> {
    if !(0 < a && a < b && b < r) {
        return Err(Error::Precondition(format!("need 0 < a < b < r, got ({a}, {b}, {r})")));
    }
    if r % ring.p() as i64 == 0 {
        return Err(Error::Precondition(format!("p = {} divides 6r", ring.p())));
    }
    Ok(())
}

/// The closed residue value
/// `(−1)^{a(r−b)} q₀^{a(b−a)(b−r)} (θ(q₀^b)^b/(θ(q₀^{b−a})^{b−a}θ(q₀^a)^a))^r
/// (S(q₀^b)/(S(q₀^{b−a})S(q₀^a)))^{r²}` with `q = q₀^r`, known to `order`.
pub fn xi_closed_value(ring: &Ring, a: i64, b: i64, r: i64, order: i64) -> Result<LaurentSeries> {
    check_abr(ring, a, b, r)?;
    let shift = a * (b - a) * (b - r);
    let len = order - shift;
    let th = |m: i64| theta_at_power(ring, m, r, len);
    let sa = |m: i64| s_alpha_series(&LaurentSeries::monomial(&ring.one(), m, len + r), r, len);
    let theta_part = th(b)?
        .pow(b as u64)?
        .div(&th(b - a)?.pow((b - a) as u64)?.mul(&th(a)?.pow(a as u64)?)?)?
        .pow(r as u64)?;
    let s_part = sa(b)?.div(&sa(b - a)?.mul(&sa(a)?)?)?.pow((r * r) as u64)?;
    let mut v = theta_part.mul(&s_part)?;
    if (a * (r - b)) % 2 != 0 {
        v = v.neg();
    }
    Ok(v.shift(shift).truncate(order).with_label("q0"))
}

/// Outcome of [`check_dlog_integrality`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DlogVerdict {
    /// Every coefficient of `q₀^j`, `1 ≤ j < checked_to`, is divisible by `j`.
    Pass { checked_to: i64 },
    /// The coefficient of `q₀^index` has valuation below `v_p(index)`.
    Fail { index: i64, valuation: u32 },
    /// The certified digits cannot decide divisibility at `index`.
    Uncertified { index: i64 },
}

/// Checks `v_p([q₀^j] ℓ_φ(h)) ≥ v_p(j)` for `1 ≤ j < N`.
pub fn check_dlog_integrality(h: &LaurentSeries) -> Result<DlogVerdict> {
    let l = h.ell_phi()?;
    let p = h.ring().p();
    for j in 1..l.order() {
        let need = vp(j as u64, p).unwrap();
        if need == 0 {
            continue;
        }
        match l.coeff(j).valuation_at(l.digits()).at_least(need) {
            Some(true) => {}
            Some(false) => {
                return Ok(DlogVerdict::Fail { index: j, valuation: l.coeff(j).valuation_at(l.digits()).lower_bound() })
            }
            None => return Ok(DlogVerdict::Uncertified { index: j }),
        }
    }
    Ok(DlogVerdict::Pass { checked_to: l.order() })
}

/// Helper used by tests and reports: the constant `c` as a series element.
pub fn rational(ring: &Ring, num: i128, den: i128) -> Result<RingElem> {
    ring.from_ratio(num, den)
}

#[cfg(test)]
mod tests;

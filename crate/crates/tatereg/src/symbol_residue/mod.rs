//! Residues of symbols `{F, G}` of factored units on the Tate curve, computed
//! by bilinearity from the basic rules, and the resulting oracle for the
//! closed residue value of a pair of theta quotients.

use crate::error::{Error, Result};
use crate::padic::Ring;
use crate::qexp::theta_at_power;
use crate::series::LaurentSeries;

/// A unit `g(u) = Σ cᵢuⁱ` of `R[[q₀, u]]`, stored as a polynomial in `u` whose
/// coefficients are power series in `q₀`; `c₀` must be a unit.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularUnit {
    pub coeffs: Vec<LaurentSeries>,
}

impl RegularUnit {
    /// `1 − c·u`.
    pub fn linear(c: &LaurentSeries) -> Self {
        let one = LaurentSeries::one(c.ring(), c.order().max(1));
        RegularUnit { coeffs: vec![one, c.neg()] }
    }

    pub fn at_zero(&self) -> &LaurentSeries {
        &self.coeffs[0]
    }

    /// `g(b)` by Horner's rule.
    pub fn eval(&self, b: &LaurentSeries) -> Result<LaurentSeries> {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(b)?.add(c)?;
        }
        Ok(acc)
    }

    fn validate(&self) -> Result<()> {
        let c0 = self.coeffs.first().ok_or_else(|| Error::Precondition("empty regular unit".into()))?;
        let ok = c0.normalize().first_nonzero() == Some(0) && c0.coeff(0).is_unit();
        if !ok || self.coeffs.iter().any(|c| c.normalize().first_nonzero().is_some_and(|v| v < 0)) {
            return Err(Error::Precondition("regular unit needs integral coefficients and a unit constant term".into()));
        }
        Ok(())
    }
}

/// `scalar · u^{u_power} · ∏ gᵢ(u)^{eᵢ} · ∏ (1 − bⱼu⁻¹)^{fⱼ}` with scalars in
/// `A^×`, regular units `gᵢ` and antipolar parameters `bⱼ ∈ (p, q₀)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredUnit {
    pub scalar: LaurentSeries,
    pub u_power: i64,
    pub regular: Vec<(RegularUnit, i64)>,
    pub antipolar: Vec<(LaurentSeries, i64)>,
}

impl FactoredUnit {
    pub fn from_scalar(s: LaurentSeries) -> Self {
        FactoredUnit { scalar: s, u_power: 0, regular: vec![], antipolar: vec![] }
    }

    /// The unit `u`.
    pub fn u(ring: &Ring, order: i64) -> Self {
        FactoredUnit { u_power: 1, ..Self::from_scalar(LaurentSeries::one(ring, order)) }
    }

    pub fn ring(&self) -> &Ring {
        self.scalar.ring()
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut regular = self.regular.clone();
        regular.extend(o.regular.iter().cloned());
        let mut antipolar = self.antipolar.clone();
        antipolar.extend(o.antipolar.iter().cloned());
        Ok(FactoredUnit { scalar: self.scalar.mul(&o.scalar)?, u_power: self.u_power + o.u_power, regular, antipolar })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(FactoredUnit {
            scalar: self.scalar.powi(e)?,
            u_power: self.u_power * e,
            regular: self.regular.iter().map(|(g, x)| (g.clone(), x * e)).collect(),
            antipolar: self.antipolar.iter().map(|(b, x)| (b.clone(), x * e)).collect(),
        })
    }

    /// Merges repeated factors by adding their exponents and drops the
    /// factors whose exponent becomes zero.
    pub fn simplify(&self) -> Self {
        fn merge<T: PartialEq + Clone>(v: &[(T, i64)]) -> Vec<(T, i64)> {
            let mut out: Vec<(T, i64)> = vec![];
            for (t, e) in v {
                match out.iter_mut().find(|(o, _)| o == t) {
                    Some((_, x)) => *x += e,
                    None => out.push((t.clone(), *e)),
                }
            }
            out.retain(|(_, e)| *e != 0);
            out
        }
        FactoredUnit {
            scalar: self.scalar.clone(),
            u_power: self.u_power,
            regular: merge(&self.regular),
            antipolar: merge(&self.antipolar),
        }
    }

    /// Checks the scalar is unit-led and every `b` lies in `(p, q₀)`.
    pub fn validate(&self) -> Result<()> {
        if !self.scalar.is_unit_led() {
            return Err(Error::Precondition("scalar must be unit-led".into()));
        }
        for (g, _) in &self.regular {
            g.validate()?;
        }
        let p = self.ring().p();
        for (b, _) in &self.antipolar {
            let b = b.normalize();
            let ok = match b.first_nonzero() {
                None => true,
                Some(v) if v >= 1 => true,
                Some(0) => b.coeff(0).residue().iter().all(|&c| c % p == 0),
                _ => false,
            };
            if !ok {
                return Err(Error::Precondition("antipolar parameter must lie in (p, q₀)".into()));
            }
        }
        Ok(())
    }
}

/// Factors `∏ θ(q₀^α u)^e` with `q = q₀^r`, keeping theta factors whose
/// `q₀`-exponent is below `order`. Each `α = rs + m`, `0 ≤ m < r`, is first
/// normalized by `θ(q^s w) = (−1)^s w^{−s} q^{−s(s−1)/2} θ(w)`.
pub fn factor_theta_quotient(ring: &Ring, exponents: &[(i64, i64)], r: i64, order: i64) -> Result<FactoredUnit> {
    if r < 1 {
        return Err(Error::Precondition(format!("r = {r} must be positive")));
    }
    let mut acc = FactoredUnit::from_scalar(LaurentSeries::one(ring, order));
    for &(alpha, e) in exponents {
        let (s, m) = (alpha.div_euclid(r), alpha.rem_euclid(r));
        let mut sc = LaurentSeries::monomial(&ring.one(), -m * s - r * s * (s - 1) / 2, order + r * s.abs() * (s.abs() + 1));
        if s % 2 != 0 {
            sc = sc.neg();
        }
        let mono = |k: i64| LaurentSeries::monomial(&ring.one(), k, order);
        let mut regular = vec![(RegularUnit::linear(&mono(m)), e)];
        let mut antipolar = vec![];
        let mut n = 1;
        while r * n - m < order {
            if r * n + m < order {
                regular.push((RegularUnit::linear(&mono(r * n + m)), e));
            }
            antipolar.push((mono(r * n - m), e));
            n += 1;
        }
        let t = FactoredUnit { scalar: sc.powi(e)?, u_power: -s * e, regular, antipolar };
        acc = acc.mul(&t)?;
    }
    Ok(acc)
}

/// The residue of `{F, G}`: expanded by bilinearity into
/// `{a,b} = 1`, `{a,u} = a`, `{a,g} = 1`, `{a,1−bu⁻¹} = 1`, `{u,u} = −1`,
/// `{u,g} = g(0)⁻¹`, `{u,1−bu⁻¹} = 1`, `{g,h} = 1`,
/// `{g,1−bu⁻¹} = g(0)⁻¹g(b)`, `{1−bu⁻¹,1−cu⁻¹} = 1`, and `{f,g} = {g,f}⁻¹`.
pub fn residue_of_pair(f: &FactoredUnit, g: &FactoredUnit) -> Result<LaurentSeries> {
    if f.ring().params() != g.ring().params() {
        return Err(Error::RingMismatch);
    }
    f.validate()?;
    g.validate()?;
    let (m1, m2) = (f.u_power, g.u_power);
    let mut out = f.scalar.powi(m2)?.mul(&g.scalar.powi(-m1)?)?;
    if (m1 * m2) % 2 != 0 {
        out = out.neg();
    }
    // {u^{m1}, h^x} = h(0)^{−m1·x}, {h^x, u^{m2}} = h(0)^{m2·x}
    for (h, x) in &g.regular {
        out = out.mul(&h.at_zero().powi(-m1 * x)?)?;
    }
    for (h, x) in &f.regular {
        out = out.mul(&h.at_zero().powi(m2 * x)?)?;
    }
    // {h^x, (1 − bu⁻¹)^y} = (h(b)/h(0))^{xy}; equal values are collected first.
    let (f, g) = (f.simplify(), g.simplify());
    let mut values: Vec<(LaurentSeries, i64)> = vec![];
    let pairs = f.regular.iter().flat_map(|(h, x)| g.antipolar.iter().map(move |(b, y)| (h, b, x * y)));
    let rev = g.regular.iter().flat_map(|(h, x)| f.antipolar.iter().map(move |(b, y)| (h, b, -x * y)));
    for (h, b, e) in pairs.chain(rev) {
        let mut v = h.eval(b)?;
        if !is_one(h.at_zero()) {
            v = v.div(h.at_zero())?;
        }
        match values.iter_mut().find(|(w, _)| *w == v) {
            Some((_, x)) => *x += e,
            None => values.push((v, e)),
        }
    }
    for (v, e) in values {
        out = out.mul(&v.powi(e)?)?;
    }
    Ok(out)
}

fn is_one(s: &LaurentSeries) -> bool {
    s.val() <= 0 && (s.val()..s.order()).all(|k| if k == 0 { s.coeff(k).is_one() } else { s.coeff(k).is_zero() })
}

fn check_abr(ring: &Ring, a: i64, b: i64, r: i64) -> Result<()> {
    if !(0 < a && a < b && b < r) || r < 3 {
        return Err(Error::Precondition(format!("need 0 < a < b < r, r ≥ 3, got ({a}, {b}, {r})")));
    }
    if r % ring.p() as i64 == 0 || ring.p() <= 3 {
        return Err(Error::Precondition(format!("p = {} divides 6r", ring.p())));
    }
    Ok(())
}

/// `f_a(u) = θ(q₀^a u)^r / (θ(u)^{r−a} θ(qu)^a)` normalized by its value at
/// `u = q₀^{−x}`, factored with theta factors below `work`.
fn normalized_quotient(ring: &Ring, a: i64, x: i64, r: i64, work: i64) -> Result<FactoredUnit> {
    let mut f = factor_theta_quotient(ring, &[(a, r), (0, -(r - a)), (r, -a)], r, work)?;
    let th = |e: i64| theta_at_power(ring, e, r, work);
    let at = th(a - x)?.powi(r)?.mul(&th(-x)?.powi(-(r - a))?)?.mul(&th(r - x)?.powi(-a)?)?;
    f.scalar = f.scalar.div(&at)?;
    Ok(f)
}

/// The residue of `{f_a(u)/f_a(q₀^{−b}), f_b(u)/f_b(q₀^{−a})}` computed by the
/// symbol rules, known to `order`. Equal to the closed residue value.
pub fn xi_rule_value(ring: &Ring, a: i64, b: i64, r: i64, order: i64) -> Result<LaurentSeries> {
    check_abr(ring, a, b, r)?;
    let mut work = order + r * r;
    for _ in 0..6 {
        let f = normalized_quotient(ring, a, b, r, work)?;
        let g = normalized_quotient(ring, b, a, r, work)?;
        let v = residue_of_pair(&f, &g)?.normalize();
        // Dropped theta factors are ≡ 1 mod q₀^work relative to the value.
        let known = v.order().min(work + v.first_nonzero().unwrap_or(v.order()));
        if known >= order {
            return Ok(v.truncate(order).with_label("q0"));
        }
        work += order - known + r;
    }
    Err(Error::Internal("residue value did not reach the requested order".into()))
}

#[cfg(test)]
mod tests;

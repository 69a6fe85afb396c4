//! Local analysis at a split multiplicative fiber: the Tate period
//! `t_i(q_i)`, the differential ratio `λ` and the κ map on 2-forms.

use serde::Serialize;

use super::{fiber_scan, FiberLocation, Kodaira, WeierstrassFamily};
use crate::error::{Error, Result};
use crate::padic::arith::mult_order;
use crate::padic::{minimal_root_degree, ResidueChoice, Ring, RingElem};
use crate::qexp::{level1_series, tate_invariants, Level1};
use crate::series::LaurentSeries;

/// A split multiplicative fiber with its local Tate uniformization.
#[derive(Clone, Debug)]
pub struct FiberData {
    pub location: FiberLocation,
    pub kodaira: Kodaira,
    /// The fiber is of type `I_r`.
    pub r: u32,
    /// Leading coefficient of `t_i^r·j`.
    pub a_inv: RingElem,
    pub ring: Ring,
    /// The value of `t` at the fiber.
    pub theta: RingElem,
    /// `t_i = t − θ` as a series in `q_i = q^{1/r}`.
    pub t_of_q: LaurentSeries,
    /// `λ = (dX/Y)/(du/u)` in `q_i`, once computed.
    pub lambda: Option<LaurentSeries>,
}

/// The value `θ` of `t` at a finite fiber: `ζ_k^i` when `ζ_k` is in the ring,
/// otherwise `ζ_{k/g}^{i/g}` with `g = gcd(i, k)`.
pub fn location_value(fam: &WeierstrassFamily, loc: FiberLocation, ring: &Ring) -> Result<RingElem> {
    match loc {
        FiberLocation::Zero => Ok(ring.zero()),
        FiberLocation::Infinity => Err(Error::Unsupported("the fiber at infinity is additive or smooth".into())),
        FiberLocation::Root { i } => {
            let k = fam.k as u64;
            if i == 0 || i as u64 > k {
                return Err(Error::Precondition(format!("root index {i} outside 1..={k}")));
            }
            if let Ok(z) = ring.teichmuller_root(k) {
                return Ok(z.pow(i as u128));
            }
            let g = num_integer::gcd(i as u64, k);
            Ok(ring.teichmuller_root(k / g)?.pow((i as u64 / g) as u128))
        }
    }
}

/// The smallest residue degree `d` such that every selected root fiber is
/// rational over the ring.
pub fn required_degree(fam: &WeierstrassFamily, locs: &[FiberLocation], p: u64) -> Result<usize> {
    let mut d = 1u64;
    for loc in locs {
        if let FiberLocation::Root { i } = loc {
            let k = fam.k as u64;
            let order = k / num_integer::gcd(*i as u64, k);
            let e = mult_order(p, order).ok_or(Error::BadPrime(p))?;
            d = num_integer::lcm(d, e);
        }
    }
    Ok(d as usize)
}

/// `1/j(q) = Δ/E₄³` inverted: the series `q(ψ)`.
fn inverse_modular(ring: &Ring, order: i64) -> Result<LaurentSeries> {
    let psi = level1_series(ring, Level1::J, order).inv()?;
    psi.reversion()
}

/// Computes `t_i(q_i)` from `j(q(t_i)) = j(t_i)`, known to `order`.
pub fn tate_period(fam: &WeierstrassFamily, loc: FiberLocation, ring: &Ring, order: i64) -> Result<FiberData> {
    super::check_prime(ring.p(), fam.k)?;
    let scan = fiber_scan(fam)?;
    let kodaira = scan
        .iter()
        .find(|f| f.location == loc)
        .map(|f| f.kodaira)
        .ok_or_else(|| Error::Precondition(format!("no singular fiber at {loc}")))?;
    let Kodaira::I(r) = kodaira else {
        return Err(Error::Precondition(format!("fiber at {loc} is {kodaira}, not multiplicative")));
    };
    let theta = location_value(fam, loc, ring)?;
    let (num, den) = fam.j();
    let (num, den) = (num.expand_power(fam.k), den.expand_power(fam.k));
    let ri = r as i64;
    let work = order + ri + 2;
    // 1/J(t_i) = den(θ + t_i)/num(θ + t_i), of valuation r.
    let inv_j = den.taylor(&theta, work + ri)?.div(&num.taylor(&theta, work)?)?;
    if inv_j.normalize().first_nonzero() != Some(ri) {
        return Err(Error::Internal(format!("1/j has unexpected order at {loc}")));
    }
    let q_of_t = inverse_modular(ring, work)?.compose(&inv_j)?;
    let a_inv = q_of_t.coeff(ri).inv()?;
    let qi_of_t = if r == 1 {
        q_of_t
    } else {
        let w = q_of_t.shift(-ri);
        let lead = w.coeff(0);
        if !ring.has_nth_root(&lead, r as u64)? {
            let need = minimal_root_degree(ring.p(), lead.residue()[0], r as u64, 64);
            return Err(Error::NoRoot { minimal_degree: need.map(|d| d * ring.d()) });
        }
        w.nth_root_series(r as u64, &ResidueChoice::Smallest)?.shift(1)
    };
    let t_of_q = qi_of_t.reversion()?.truncate(order).with_label("q_i");
    if t_of_q.order() < order {
        return Err(Error::Internal("Tate period lost precision".into()));
    }
    Ok(FiberData { location: loc, kodaira, r, a_inv, ring: ring.clone(), theta, t_of_q, lambda: None })
}

/// `P(θ + t_i(q_i))` for a polynomial `P` in `s = t^k`.
fn eval_at_fiber(fam: &WeierstrassFamily, fib: &FiberData, poly: &super::QPoly) -> Result<LaurentSeries> {
    let t = fib.t_of_q.add(&LaurentSeries::constant(&fib.theta, fib.t_of_q.order()))?;
    poly.expand_power(fam.k).eval_series(&t)
}

/// `λ = (dX/Y)/(du/u)` up to sign: `λ² = c₄,fam·c₆,Tate/(c₆,fam·c₄,Tate)`,
/// checked against `λ⁴·c₄,fam = c₄,Tate`.
pub fn differential_ratio(fam: &WeierstrassFamily, fib: &mut FiberData) -> Result<LaurentSeries> {
    let order = fib.t_of_q.order();
    let r = fib.r as i64;
    let inv = tate_invariants(&fib.ring, order / r + 2);
    let c4t = inv.c4.power_substitute(r)?.truncate(order);
    let c6t = inv.c6.power_substitute(r)?.truncate(order);
    let c4f = eval_at_fiber(fam, fib, &fam.c4)?;
    let c6f = eval_at_fiber(fam, fib, &fam.c6)?;
    let l2 = c4f.mul(&c6t)?.div(&c6f.mul(&c4t)?)?;
    let lambda = l2.nth_root_series(2, &ResidueChoice::Smallest)?.with_label("q_i");
    if lambda.pow(4)?.mul(&c4f)? != c4t {
        return Err(Error::SelfCheck(format!("λ⁴·c₄ mismatch at {}", fib.location)));
    }
    fib.lambda = Some(lambda.clone());
    Ok(lambda)
}

/// A 2-form `h(t) dt∧dX/Y` of the candidate log basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogForm {
    /// `h = t^m`.
    Holomorphic { m: u32 },
    /// `h = 1/(t − θ)` for the fiber at `at`.
    Log { at: FiberLocation },
}

/// `κ(h dt∧dX/Y) = h(t(q_i))·q_i dt/dq_i·λ` in `q_i`, up to the fiber's sign.
/// Known to one order less than `t_i(q_i)`, since the log form divides by `t_i`.
pub fn kappa(fam: &WeierstrassFamily, fib: &FiberData, form: LogForm) -> Result<LaurentSeries> {
    let lambda = fib.lambda.as_ref().ok_or_else(|| Error::Precondition("differential ratio not computed".into()))?;
    let ti = &fib.t_of_q;
    let order = ti.order();
    let t = ti.add(&LaurentSeries::constant(&fib.theta, order))?;
    let qdt = ti.derivative().shift(1);
    let h = match form {
        LogForm::Holomorphic { m } => t.pow(m as u64)?,
        LogForm::Log { at } if at == fib.location => ti.inv()?,
        LogForm::Log { at } => {
            let th = location_value(fam, at, &fib.ring)?;
            t.sub(&LaurentSeries::constant(&th, order))?.inv()?
        }
    };
    Ok(h.mul(&qdt)?.mul(lambda)?.truncate(order - 1).with_label("q_i"))
}

/// `{t^m dt∧dX/Y : m < ℓ} ∪ {dt/(t − θ)∧dX/Y : θ selected}` with residue
/// vectors `Res_{t=θ_j}(h dt)` over the selection. `ℓ = w − 1` where `w` is
/// the least weight with `deg a_i ≤ i·w`.
pub fn logform_basis(fam: &WeierstrassFamily, selection: &[FiberLocation]) -> Result<Vec<(LogForm, Vec<u64>)>> {
    let scan = fiber_scan(fam)?;
    for (n, loc) in selection.iter().enumerate() {
        if selection[..n].contains(loc) {
            return Err(Error::Precondition(format!("fiber {loc} selected twice")));
        }
        if !scan.iter().any(|f| f.location == *loc && f.kodaira.is_multiplicative()) {
            return Err(Error::Precondition(format!("{loc} is not a multiplicative fiber")));
        }
    }
    let weights = [1u32, 2, 3, 4, 6];
    let w = fam
        .a
        .iter()
        .zip(weights)
        .map(|(a, i)| a.degree().map_or(0, |dg| (dg as u32 * fam.k).div_ceil(i)))
        .max()
        .unwrap()
        .max(1);
    let mut out: Vec<(LogForm, Vec<u64>)> =
        (0..w - 1).map(|m| (LogForm::Holomorphic { m }, vec![0; selection.len()])).collect();
    for (n, &loc) in selection.iter().enumerate() {
        let mut res = vec![0; selection.len()];
        res[n] = 1;
        out.push((LogForm::Log { at: loc }, res));
    }
    Ok(out)
}

//! The elliptic-surface catalog over `P¹_t` with `s = t^k`: Weierstrass
//! invariants, fiber types, local Tate periods and differential ratios, the
//! κ maps, log-form bases, Cartier matrices and the resulting bound reports.

pub mod bound;
pub mod cartier;
pub mod local;
pub mod qpoly;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use bound::{bound_report, check_cp, parse_fibers, BoundReport, BoundRequest, CpVerdict};
pub use cartier::{cartier_matrix, condition_checks, geometric_genus, hasse_coefficient, semilinear_fixed_points, Conditions};
pub use local::{differential_ratio, kappa, location_value, logform_basis, required_degree, tate_period, FiberData, LogForm};
pub use qpoly::QPoly;

use crate::error::{Error, Result};

/// Catalog entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    /// `3Y² + X³ + (3X + 4t^k)² = 0`.
    Ex1,
    /// `3Y² = 2X³ − 3X² + t^k`.
    Ex2,
    /// `Ex1` with `k = 4`.
    K3,
}

impl std::str::FromStr for FamilyName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex1" => Ok(FamilyName::Ex1),
            "ex2" => Ok(FamilyName::Ex2),
            "k3" => Ok(FamilyName::K3),
            _ => Err(Error::Usage(format!("unknown family {s:?} (expected ex1, ex2 or k3)"))),
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyName::Ex1 => "ex1",
            FamilyName::Ex2 => "ex2",
            FamilyName::K3 => "k3",
        })
    }
}

/// `y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆` with coefficients polynomial in
/// `s = t^k`, scaled so that `dx/(2y + a₁x + a₃)` is the family's `dX/Y`.
#[derive(Clone, Debug)]
pub struct WeierstrassFamily {
    pub name: FamilyName,
    pub k: u32,
    /// `[a₁, a₂, a₃, a₄, a₆]` as polynomials in `s`.
    pub a: [QPoly; 5],
    pub b2: QPoly,
    pub b4: QPoly,
    pub b6: QPoly,
    pub b8: QPoly,
    pub c4: QPoly,
    pub c6: QPoly,
    pub disc: QPoly,
}

impl WeierstrassFamily {
    pub fn from_coeffs(name: FamilyName, k: u32, a: [QPoly; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = a.clone();
        let b2 = a1.mul(&a1).add(&a2.scale_int(4));
        let b4 = a1.mul(&a3).add(&a4.scale_int(2));
        let b6 = a3.mul(&a3).add(&a6.scale_int(4));
        let b8 = a1
            .mul(&a1)
            .mul(&a6)
            .add(&a2.mul(&a6).scale_int(4))
            .sub(&a1.mul(&a3).mul(&a4))
            .add(&a2.mul(&a3).mul(&a3))
            .sub(&a4.mul(&a4));
        let c4 = b2.mul(&b2).sub(&b4.scale_int(24));
        let c6 = b2.pow(3).neg().add(&b2.mul(&b4).scale_int(36)).sub(&b6.scale_int(216));
        let disc = b2
            .mul(&b2)
            .mul(&b8)
            .neg()
            .sub(&b4.pow(3).scale_int(8))
            .sub(&b6.mul(&b6).scale_int(27))
            .add(&b2.mul(&b4).mul(&b6).scale_int(9));
        WeierstrassFamily { name, k, a, b2, b4, b6, b8, c4, c6, disc }
    }

    /// `j = c₄³/Δ` as (numerator, denominator) in `s`.
    pub fn j(&self) -> (QPoly, QPoly) {
        (self.c4.pow(3), self.disc.clone())
    }
}

/// The catalog entry `name` with parameter `k` (`k3` forces `k = 4`).
pub fn family_catalog(name: FamilyName, k: u32) -> Result<WeierstrassFamily> {
    let s = QPoly::monomial_int(1, 1);
    let zero = QPoly::zero();
    let q = QPoly::constant_ratio;
    let (k, a) = match name {
        FamilyName::Ex1 | FamilyName::K3 => {
            let k = if name == FamilyName::K3 { 4 } else { k };
            (k, [zero.clone(), q(-3, 4), zero, s.scale_ratio(1, 6), s.mul(&s).scale_ratio(-1, 108)])
        }
        FamilyName::Ex2 => (k, [zero.clone(), q(-1, 4), zero.clone(), zero, s.scale_ratio(1, 432)]),
    };
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    Ok(WeierstrassFamily::from_coeffs(name, k, a))
}

/// Checks `p ≥ 5` and `p ∤ 6k`.
pub fn check_prime(p: u64, k: u32) -> Result<()> {
    if !crate::padic::arith::is_prime(p) || p < 5 {
        return Err(Error::BadPrime(p));
    }
    if (k as u64).is_multiple_of(p) {
        return Err(Error::Precondition(format!("p = {p} divides 6k = {}", 6 * k)));
    }
    Ok(())
}

/// Where a fiber lies: `t = 0`, `t = ζ_k^i` (`1 ≤ i ≤ k`) or `t = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberLocation {
    Zero,
    Root { i: u32 },
    Infinity,
}

impl fmt::Display for FiberLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberLocation::Zero => f.write_str("t=0"),
            FiberLocation::Root { i } => write!(f, "t=z^{i}"),
            FiberLocation::Infinity => f.write_str("t=inf"),
        }
    }
}

/// Kodaira fiber types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl Kodaira {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, Kodaira::I(n) if n > 0)
    }

    pub fn is_additive(self) -> bool {
        !matches!(self, Kodaira::I(_))
    }

    /// Classification from `(ord c₄, ord c₆, ord Δ)` in residue characteristic 0
    /// (`None` means the invariant vanishes identically).
    pub fn classify(o4: Option<u32>, o6: Option<u32>, od: u32) -> Result<Self> {
        if od == 0 {
            return Ok(Kodaira::I(0));
        }
        if o4 == Some(0) {
            return Ok(Kodaira::I(od));
        }
        if od > 6 && o4 == Some(2) && o6 == Some(3) {
            return Ok(Kodaira::IStar(od - 6));
        }
        Ok(match od {
            2 => Kodaira::II,
            3 => Kodaira::III,
            4 => Kodaira::IV,
            6 => Kodaira::IStar(0),
            8 => Kodaira::IVStar,
            9 => Kodaira::IIIStar,
            10 => Kodaira::IIStar,
            _ => return Err(Error::Internal(format!("non-minimal model: ord Δ = {od}"))),
        })
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::II => f.write_str("II"),
            Kodaira::III => f.write_str("III"),
            Kodaira::IV => f.write_str("IV"),
            Kodaira::IVStar => f.write_str("IV*"),
            Kodaira::IIIStar => f.write_str("III*"),
            Kodaira::IIStar => f.write_str("II*"),
        }
    }
}

impl Serialize for Kodaira {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A singular (or, at infinity, possibly smooth) fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberType {
    pub location: FiberLocation,
    pub kodaira: Kodaira,
}

/// The fiber at infinity as printed in the catalog tables.
fn catalog_infinity(name: FamilyName, k: u32) -> Kodaira {
    match name {
        FamilyName::Ex1 | FamilyName::K3 => [Kodaira::I(0), Kodaira::IVStar, Kodaira::IV][(k % 3) as usize],
        FamilyName::Ex2 => [
            Kodaira::I(0),
            Kodaira::IIStar,
            Kodaira::IVStar,
            Kodaira::IStar(0),
            Kodaira::IV,
            Kodaira::II,
        ][(k % 6) as usize],
    }
}

/// Fiber types at `t = 0`, at each `t = ζ_k^i` and at `t = ∞`, computed from
/// the orders of `c₄`, `c₆`, `Δ` and checked against the catalog tables.
pub fn fiber_scan(fam: &WeierstrassFamily) -> Result<Vec<FiberType>> {
    let k = fam.k;
    let at_zero = |f: &QPoly| f.ord_at_zero().map(|o| o * k);
    let at_one = |f: &QPoly| f.ord_at_one();
    let m = [(&fam.c4, 4u32), (&fam.c6, 6), (&fam.disc, 12)]
        .iter()
        .map(|(f, w)| f.degree().map_or(0, |dg| (dg as u32 * k).div_ceil(*w)))
        .max()
        .unwrap();
    let at_inf = |f: &QPoly, w: u32| f.degree().map(|dg| w * m - dg as u32 * k);
    let mut out = vec![];
    let z = Kodaira::classify(at_zero(&fam.c4), at_zero(&fam.c6), at_zero(&fam.disc).unwrap())?;
    if z != Kodaira::I(0) {
        out.push(FiberType { location: FiberLocation::Zero, kodaira: z });
    }
    let r = Kodaira::classify(at_one(&fam.c4), at_one(&fam.c6), at_one(&fam.disc).unwrap())?;
    if r != Kodaira::I(0) {
        out.extend((1..=k).map(|i| FiberType { location: FiberLocation::Root { i }, kodaira: r }));
    }
    let inf = Kodaira::classify(at_inf(&fam.c4, 4), at_inf(&fam.c6, 6), at_inf(&fam.disc, 12).unwrap())?;
    let expected = catalog_infinity(fam.name, k);
    if inf != expected {
        return Err(Error::SelfCheck(format!("fiber at infinity computed as {inf}, catalog says {expected}")));
    }
    out.push(FiberType { location: FiberLocation::Infinity, kodaira: inf });
    Ok(out)
}

#[cfg(test)]
mod tests;

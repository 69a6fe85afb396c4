//! The Cartier operator on holomorphic 2-forms in characteristic `p` and the
//! conditions (A′), (B′) and C(p)-1.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{check_prime, fiber_scan, FamilyName, WeierstrassFamily};
use crate::eis::FpSubspace;
use crate::error::Result;
use crate::padic::arith::{inv_mod, mul_mod, pow_mod, reduce_i128};
use crate::padic::make_ring;

/// `Y² = c·G(X)` for the catalog's printed model, with `G` integral, given as
/// `(c_num, c_den, [(coefficient, X-degree, s-degree)])`.
fn printed_model(name: FamilyName) -> (i64, i64, Vec<(i64, u32, u32)>) {
    match name {
        // 3Y² = −(X³ + (3X + 4s)²)
        FamilyName::Ex1 | FamilyName::K3 => (-1, 3, vec![(1, 3, 0), (9, 2, 0), (24, 1, 1), (16, 0, 2)]),
        // 3Y² = 2X³ − 3X² + s
        FamilyName::Ex2 => (1, 3, vec![(2, 3, 0), (-3, 2, 0), (1, 0, 1)]),
    }
}

/// Coefficient of `X^x s^s` in `(Σ cᵢ X^{xᵢ} s^{sᵢ})^e`, exactly.
fn power_coeff(terms: &[(i64, u32, u32)], e: u32, x: u32, s: u32) -> BigInt {
    fn rec(terms: &[(i64, u32, u32)], e: u32, x: i64, s: i64, fact: &[BigInt]) -> BigInt {
        let Some((&(c, dx, ds), rest)) = terms.split_first() else {
            return if e == 0 && x == 0 && s == 0 { BigInt::one() } else { BigInt::zero() };
        };
        let mut acc = BigInt::zero();
        for n in 0..=e {
            let (x2, s2) = (x - (n * dx) as i64, s - (n * ds) as i64);
            if x2 < 0 || s2 < 0 {
                break;
            }
            let sub = rec(rest, e - n, x2, s2, fact);
            if !sub.is_zero() {
                acc += sub * BigInt::from(c).pow(n) * &fact[e as usize] / (&fact[n as usize] * &fact[(e - n) as usize]);
            }
        }
        acc
    }
    let fact: Vec<BigInt> = (0..=e as u64).scan(BigInt::one(), |f, n| {
        if n > 0 {
            *f *= n;
        }
        Some(f.clone())
    }).collect();
    rec(terms, e, x as i64, s as i64, &fact)
}

/// Coefficient of `X^{p−1} t^n` in `G(X)^{(p−1)/2}` with `s = t^k`.
fn g_power_coeff(fam: &WeierstrassFamily, p: u64, n: u64) -> BigInt {
    let (_, _, terms) = printed_model(fam.name);
    if !n.is_multiple_of(fam.k as u64) {
        return BigInt::zero();
    }
    power_coeff(&terms, ((p - 1) / 2) as u32, (p - 1) as u32, (n / fam.k as u64) as u32)
}

/// The integer `k_p`: coefficient of `X^{p−1}t^{p−1}` in `(9c·G)^{(p−1)/2}`
/// (for `ex1`, `(−3(X³ + (3X + 4t^k)²))^{(p−1)/2}`).
pub fn hasse_coefficient(fam: &WeierstrassFamily, p: u64) -> BigInt {
    let (cn, cd, _) = printed_model(fam.name);
    let nine_c = BigInt::from(9 * cn / cd);
    g_power_coeff(fam, p, p - 1) * nine_c.pow(((p - 1) / 2) as u32)
}

/// Number of holomorphic forms `t^m dt∧dX/Y`.
pub fn geometric_genus(fam: &WeierstrassFamily) -> u32 {
    let weights = [1u32, 2, 3, 4, 6];
    let w = fam
        .a
        .iter()
        .zip(weights)
        .map(|(a, i)| a.degree().map_or(0, |dg| (dg as u32 * fam.k).div_ceil(i)))
        .max()
        .unwrap()
        .max(1);
    w - 1
}

/// The `ℓ×ℓ` matrix over `F_p` with entry `(r′, i) = a_{r′p−i−1}`
/// (`r′ = 1..ℓ`, `i = 0..ℓ−1`), where `a_n` is the coefficient of
/// `X^{p−1}t^n` in `f(X)^{(p−1)/2}` for the printed model `Y² = f(X)`.
pub fn cartier_matrix(fam: &WeierstrassFamily, p: u64) -> Result<Vec<Vec<u64>>> {
    check_prime(p, fam.k)?;
    let l = geometric_genus(fam) as u64;
    let (cn, cd, _) = printed_model(fam.name);
    let c = mul_mod(reduce_i128(cn as i128, p), inv_mod(reduce_i128(cd as i128, p), p).unwrap(), p);
    let ce = pow_mod(c, (p - 1) / 2, p);
    let pb = BigInt::from(p);
    Ok((1..=l)
        .map(|r| {
            (0..l)
                .map(|i| {
                    let a = g_power_coeff(fam, p, r * p - i - 1);
                    let a = ((a % &pb + &pb) % &pb).to_u64().unwrap();
                    mul_mod(a, ce, p)
                })
                .collect()
        })
        .collect())
}

/// Whether `A·α^{(p)} = α` has a nonzero solution `α ∈ F_{p^d}^ℓ`, for `A`
/// with entries in `F_p`. The map is linearized over `F_p` using the
/// Frobenius matrix of `F_{p^d}`.
pub fn semilinear_fixed_points(a: &[Vec<u64>], p: u64, d: usize) -> Result<bool> {
    let l = a.len();
    if l == 0 {
        return Ok(false);
    }
    let frob = make_ring(p, d, 1)?.frobenius_matrix();
    let n = l * d;
    // Row (r, u) of L − I: Σ_c A[r][c]·F[u][v] on coordinate (c, v).
    let mut rows = vec![vec![0u64; n]; n];
    for r in 0..l {
        for u in 0..d {
            for c in 0..l {
                for v in 0..d {
                    rows[r * d + u][c * d + v] = mul_mod(a[r][c] % p, frob[v][u] % p, p);
                }
            }
            let x = &mut rows[r * d + u][r * d + u];
            *x = (*x + p - 1) % p;
        }
    }
    Ok(FpSubspace::span(p, n, &rows)?.dim() < n)
}

/// The conditions feeding the bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conditions {
    /// Some fiber is additive.
    pub a_prime: bool,
    /// The Cartier operator has no nonzero fixed point.
    pub b_prime: bool,
    pub cartier: Vec<Vec<u64>>,
    /// The integer `k_p`, in decimal.
    pub k_p: String,
    pub k_p_mod_p: u64,
    /// `k_p ≢ 1 mod p`.
    pub cp1_ok: bool,
    /// Ordinary under the convention "Hasse invariant nonzero".
    pub ordinary: bool,
    /// For `k3`: whether `k_p ≡ 0` exactly when `p ≡ 3 mod 4`.
    pub p_mod_4_consistent: Option<bool>,
}

pub fn condition_checks(fam: &WeierstrassFamily, p: u64) -> Result<Conditions> {
    check_prime(p, fam.k)?;
    let a_prime = fiber_scan(fam)?.iter().any(|f| f.kodaira.is_additive());
    let cartier = cartier_matrix(fam, p)?;
    let b_prime = !semilinear_fixed_points(&cartier, p, 1)?;
    let k_p = hasse_coefficient(fam, p);
    let pb = BigInt::from(p);
    let k_p_mod_p = ((&k_p % &pb + &pb) % &pb).to_u64().unwrap();
    let p_mod_4_consistent = (fam.name == FamilyName::K3).then_some((k_p_mod_p == 0) == (p % 4 == 3));
    Ok(Conditions {
        a_prime,
        b_prime,
        cartier,
        k_p: k_p.to_string(),
        k_p_mod_p,
        cp1_ok: k_p_mod_p != 1,
        ordinary: k_p_mod_p != 0,
        p_mod_4_consistent,
    })
}

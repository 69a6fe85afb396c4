//! Property checks shared by the proptest suites and the acceptance runner.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use tatereg::eis::{eisenstein_report, lambert_decompose, resum, TeichBasis};
use tatereg::padic::arith::{divisors, mobius};
use tatereg::padic::{make_ring, Ring, RingElem};
use tatereg::qexp::{tate_coeffs, tate_xy, theta_at_power, TwoVarSeries};
use tatereg::series::LaurentSeries;

type Check = std::result::Result<(), TestCaseError>;

pub fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![5u64, 7, 11, 13])
}

/// `(p, d, M, coordinate seeds)` for ring-level checks.
pub fn ring_case() -> impl Strategy<Value = (u64, usize, u32, Vec<u64>)> {
    (primes(), 1usize..=3, 1u32..=6, prop::collection::vec(any::<u64>(), 9))
}

fn elem(r: &Ring, seeds: &[u64]) -> RingElem {
    let m = r.modulus();
    r.elem(&seeds[..r.d()].iter().map(|s| s % m).collect::<Vec<_>>()).unwrap()
}

pub fn ring_axioms((p, d, m, seeds): (u64, usize, u32, Vec<u64>)) -> Check {
    let r = make_ring(p, d, m).unwrap();
    let a = elem(&r, &seeds[0..3]);
    let b = elem(&r, &seeds[3..6]);
    let c = elem(&r, &seeds[6..9]);
    prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    prop_assert_eq!(a.mul(&b), b.mul(&a));
    prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    prop_assert_eq!(a.add(&b).sub(&b), a.clone());
    prop_assert!(a.add(&a.neg()).is_zero());
    if a.is_unit() {
        prop_assert!(a.mul(&a.inv().unwrap()).is_one());
    } else {
        prop_assert!(a.inv().is_err());
    }
    Ok(())
}

pub fn frobenius_laws((p, d, m, seeds): (u64, usize, u32, Vec<u64>)) -> Check {
    let r = make_ring(p, d, m).unwrap();
    let a = elem(&r, &seeds[0..3]);
    let b = elem(&r, &seeds[3..6]);
    prop_assert_eq!(a.mul(&b).frobenius(), a.frobenius().mul(&b.frobenius()));
    prop_assert_eq!(a.add(&b).frobenius(), a.frobenius().add(&b.frobenius()));
    let mut x = a.clone();
    for _ in 0..d {
        x = x.frobenius();
    }
    prop_assert_eq!(x, a.clone());
    prop_assert_eq!(a.frobenius().residue(), a.pow(p as u128).residue());
    Ok(())
}

/// `y² + xy = x³ + a₄x + a₆` for the Tate curve at the given order.
pub fn weierstrass_identity((p, order): (u64, usize)) -> Check {
    let r = make_ring(p, 1, 6).unwrap();
    let (x, y) = tate_xy(&r, order);
    let (a4, a6) = tate_coeffs(&r, order as i64);
    let a4 = TwoVarSeries::from_q_series(&a4).unwrap();
    let a6 = TwoVarSeries::from_q_series(&a6).unwrap();
    let lhs = y.mul(&y).unwrap().add(&x.mul(&y).unwrap()).unwrap();
    let rhs = x.pow(3).unwrap().add(&a4.mul(&x).unwrap()).unwrap().add(&a6).unwrap();
    prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    Ok(())
}

/// `θ(qu) = −u⁻¹θ(u)` and `θ(u⁻¹) = −u⁻¹θ(u)` at `u = q₀^e`, `q = q₀^r`.
pub fn theta_laws((p, r, e): (u64, i64, i64)) -> Check {
    prop_assume!(e.rem_euclid(r) != 0);
    let ring = make_ring(p, 1, 6).unwrap();
    let n = 30;
    let w = n + e.abs() + r;
    let base = theta_at_power(&ring, e, r, w).unwrap();
    let shifted = theta_at_power(&ring, e + r, r, n).unwrap();
    prop_assert!(shifted.agrees_with(&base.shift(-e).neg()));
    let inverted = theta_at_power(&ring, -e, r, n).unwrap();
    prop_assert!(inverted.agrees_with(&base.shift(-e).neg()));
    Ok(())
}

pub fn series_case() -> impl Strategy<Value = (u64, u32, i64, Vec<i64>)> {
    (primes(), 2u32..=5, -3i64..=2, prop::collection::vec(-1000i64..1000, 25..40))
}

fn build(p: u64, m: u32, val: i64, c: &[i64]) -> LaurentSeries {
    let r = make_ring(p, 1, m).unwrap();
    LaurentSeries::from_ints(&r, val, c, val + c.len() as i64)
}

pub fn lambert_round_trip((p, m, val, c): (u64, u32, i64, Vec<i64>)) -> Check {
    let f = build(p, m, val, &c);
    let b = TeichBasis::new(f.ring(), 0).unwrap();
    prop_assert_eq!(resum(&lambert_decompose(&f, &b).unwrap()), f);
    Ok(())
}

/// Over `Z_p` the decomposition reduces to Möbius inversion of the coefficients.
pub fn mobius_oracle((p, m, _val, c): (u64, u32, i64, Vec<i64>)) -> Check {
    let f = build(p, m, 0, &c);
    let r = f.ring().clone();
    let dec = lambert_decompose(&f, &TeichBasis::new(&r, 0).unwrap()).unwrap();
    for n in 1..c.len() as u64 {
        let a: i64 = divisors(n).iter().map(|&e| mobius(n / e) * c[e as usize]).sum();
        prop_assert_eq!(r.from_u64(dec.a(0, n as i64)), r.from_i64(a));
    }
    Ok(())
}

pub fn unit_case() -> impl Strategy<Value = (u64, Vec<i64>, Vec<i64>)> {
    (primes(), prop::collection::vec(-50i64..50, 20), prop::collection::vec(-50i64..50, 20))
}

/// `ℓ_φ(fg) = ℓ_φ(f) + ℓ_φ(g)` for series with constant term 1.
pub fn ell_phi_additive((p, a, b): (u64, Vec<i64>, Vec<i64>)) -> Check {
    let r = make_ring(p, 1, 5).unwrap();
    let mk = |c: &[i64]| {
        let mut c = c.to_vec();
        c[0] = 1;
        LaurentSeries::from_ints(&r, 0, &c, 20)
    };
    let (f, g) = (mk(&a), mk(&b));
    let lhs = f.mul(&g).unwrap().ell_phi().unwrap();
    let rhs = f.ell_phi().unwrap().add(&g.ell_phi().unwrap()).unwrap();
    prop_assert!(lhs.agrees_mod(&rhs, lhs.digits().min(rhs.digits())));
    Ok(())
}

/// The verdict over `Z_p` equals the verdict over a degree-2 extension in
/// any Teichmüller basis.
pub fn verdict_independence((p, c, scale): (u64, Vec<i64>, bool)) -> Check {
    let r1 = make_ring(p, 1, 4).unwrap();
    let r2 = make_ring(p, 2, 4).unwrap();
    // Optionally force (E2) by multiplying the j-th Lambert coefficient by j².
    let coeffs: Vec<i64> = c.iter().enumerate().map(|(j, &x)| if scale { x * (j as i64).pow(2) } else { x }).collect();
    let lam1 = LaurentSeries::from_ints(&r1, 0, &coeffs, coeffs.len() as i64);
    let order = lam1.order();
    let expand = |r: &Ring| {
        // Σ_j c_j q^j/(1 − q^j)
        LaurentSeries::from_fn(r, 0, order, |n| {
            let s: i64 = if n == 0 {
                coeffs[0]
            } else {
                divisors(n as u64).iter().map(|&j| coeffs[j as usize]).sum()
            };
            r.from_i64(s)
        })
    };
    let n_max = (p * p).min(order as u64 - 1) as i64;
    let v1 = eisenstein_report(&lambert_decompose(&expand(&r1), &TeichBasis::new(&r1, 0).unwrap()).unwrap(), n_max)
        .unwrap()
        .is_eisenstein();
    for choice in [0, 1] {
        let b2 = TeichBasis::new(&r2, choice).unwrap();
        let v2 = eisenstein_report(&lambert_decompose(&expand(&r2), &b2).unwrap(), n_max).unwrap().is_eisenstein();
        prop_assert_eq!(v1, v2);
    }
    Ok(())
}

pub fn verdict_case() -> impl Strategy<Value = (u64, Vec<i64>, bool)> {
    (prop::sample::select(vec![5u64, 7]), prop::collection::vec(-30i64..30, 30..60), any::<bool>())
}

/// Runs `check` on `cases` inputs drawn from `strategy`.
pub fn run<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Check) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, check).map_err(|e| e.to_string())
}

pub type Suite = (&'static str, Box<dyn Fn() -> Result<(), String>>);

/// Every property suite as `(name, runner)`.
pub fn suites() -> Vec<Suite> {
    vec![
        ("ring axioms", Box::new(|| run(100, ring_case(), ring_axioms))),
        ("frobenius laws", Box::new(|| run(100, ring_case(), frobenius_laws))),
        ("weierstrass identity", Box::new(|| run(4, (primes(), Just(30usize)), weierstrass_identity))),
        ("theta laws", Box::new(|| run(50, (primes(), 2i64..8, -20i64..20), theta_laws))),
        ("lambert round trip", Box::new(|| run(100, series_case(), lambert_round_trip))),
        ("mobius oracle", Box::new(|| run(100, series_case(), mobius_oracle))),
        ("ell_phi additivity", Box::new(|| run(100, unit_case(), ell_phi_additive))),
        ("verdict independence", Box::new(|| run(30, verdict_case(), verdict_independence))),
    ]
}

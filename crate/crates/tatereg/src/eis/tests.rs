use super::*;
use crate::padic::arith::mobius;
use crate::padic::make_ring;
use crate::qexp::{divisor_series, gamma13_series, Gamma13};

fn zp(p: u64, m: u32) -> (Ring, TeichBasis) {
    let r = make_ring(p, 1, m).unwrap();
    let b = TeichBasis::new(&r, 0).unwrap();
    (r, b)
}

fn geometric(r: &Ring, j: i64, order: i64) -> LaurentSeries {
    LaurentSeries::from_fn(r, 0, order, |n| if n > 0 && n % j == 0 { r.one() } else { r.zero() })
}

#[test]
fn simple_decompositions() {
    let (r, b) = zp(7, 4);
    let d = lambert_decompose(&geometric(&r, 1, 30), &b).unwrap();
    assert_eq!(d.a(0, 1), 1);
    assert!((2..30).all(|j| d.a(0, j) == 0));
    let s1 = divisor_series(&r, 1, 30);
    let d = lambert_decompose(&s1, &b).unwrap();
    assert!((1..30).all(|j| d.a(0, j) == j as u64));
}

#[test]
fn mobius_oracle() {
    let (r, b) = zp(11, 3);
    let m = r.modulus() as i64;
    let c: Vec<i64> = (0..60).map(|n| (n * n * 37 + 11 * n + 5) % m).collect();
    let f = LaurentSeries::from_ints(&r, 0, &c, 60);
    let d = lambert_decompose(&f, &b).unwrap();
    for n in 1..60u64 {
        let a: i64 = divisors(n).iter().map(|&e| mobius(n / e) * c[e as usize]).sum();
        assert_eq!(d.a(0, n as i64), a.rem_euclid(m) as u64);
    }
}

#[test]
fn round_trip_over_extension() {
    let r = make_ring(5, 2, 4).unwrap();
    let b = TeichBasis::new(&r, 1).unwrap();
    let f = LaurentSeries::from_fn(&r, -2, 25, |n| {
        r.elem(&[(n * n + 3).rem_euclid(625) as u64, (7 * n + 1).rem_euclid(625) as u64]).unwrap()
    });
    let d = lambert_decompose(&f, &b).unwrap();
    assert_eq!(resum(&d), f);
    assert_eq!(d.principal.keys().copied().collect::<Vec<_>>(), vec![-2, -1, 0]);
}

#[test]
fn eisenstein_examples() {
    let (r, b) = zp(7, 4);
    let e3b = gamma13_series(&r, Gamma13::E3b, 99).unwrap();
    let v = eisenstein_report(&lambert_decompose(&e3b, &b).unwrap(), 98).unwrap();
    assert!(v.is_eisenstein(), "{v:?}");
    let mut f = geometric(&r, 1, 30);
    f = f.add(&geometric(&r, 7, 30)).unwrap();
    let v = eisenstein_report(&lambert_decompose(&f, &b).unwrap(), 29).unwrap();
    assert_eq!(v.e2_failures[0], E2Failure { i: 0, j: 7, found: 0, required: 2 });
    let c = LaurentSeries::constant(&r.from_u64(5), 30);
    let v = eisenstein_report(&lambert_decompose(&c, &b).unwrap(), 29).unwrap();
    assert!(v.is_eisenstein());
    let (r2, b2) = zp(7, 3);
    let v = eisenstein_report(&lambert_decompose(&gamma13_series(&r2, Gamma13::E3b, 60).unwrap(), &b2).unwrap(), 59).unwrap();
    assert_eq!(v.uncertified_at, Some(49));
    assert_eq!(v.certified_n, 48);
}

#[test]
fn basis_and_extension_independence() {
    let (r1, b1) = zp(5, 4);
    let r2 = make_ring(5, 2, 4).unwrap();
    for name in [Gamma13::E3a, Gamma13::E1, Gamma13::T] {
        let f1 = gamma13_series(&r1, name, 30).unwrap();
        let f2 = gamma13_series(&r2, name, 30).unwrap();
        let v1 = eisenstein_report(&lambert_decompose(&f1, &b1).unwrap(), 29).unwrap();
        for choice in [0, 1, 3] {
            let b2 = TeichBasis::new(&r2, choice).unwrap();
            let v2 = eisenstein_report(&lambert_decompose(&f2, &b2).unwrap(), 29).unwrap();
            assert_eq!(v1.is_eisenstein(), v2.is_eisenstein(), "{name:?} basis {choice}");
        }
    }
}

#[test]
fn image_edge_cases() {
    let (r, b) = zp(7, 4);
    let f = geometric(&r, 7, 30);
    let form = EisForm { fibers: vec![lambert_decompose(&f, &b).unwrap()], residue: vec![1] };
    let img = eis_image(std::slice::from_ref(&form), 7, 20).unwrap();
    assert_eq!(img.span.dim(), 0);
    let img = eis_image(std::slice::from_ref(&form), 7, 6).unwrap();
    assert_eq!(img.span.dim(), 1);
    let pole = LaurentSeries::from_ints(&r, -1, &[1], 30);
    let form2 = EisForm { fibers: vec![lambert_decompose(&pole, &b).unwrap()], residue: vec![1] };
    assert_eq!(eis_image(&[form2], 7, 6).unwrap().span.dim(), 0);
}

#[test]
fn galois_intersection() {
    let span = FpSubspace::span_signed(11, 5, &[vec![-4, 0, 0, -4, 1], vec![3, 3, 0, 1, 0], vec![1, -3, 1, 0, 0]]).unwrap();
    assert_eq!(intersect_galois(&span, &[vec![0, 1, 2, 3, 4]]).unwrap(), span);
    // D_i lies over ζ^i; ζ ↦ ζ^a sends D_i to D_{ai mod 5} with D_5 fixed.
    let perms: Vec<Vec<usize>> = (1..5).map(|a| (1..=5).map(|i| (a * i - 1) % 5).collect()).collect();
    let inter = intersect_galois(&span, &perms).unwrap();
    assert_eq!(inter.rows, vec![vec![1, 1, 1, 1, 1]]);
}

fn dec_with(r: &Ring, b: &TeichBasis, entries: &[(i64, i64)], order: i64) -> LambertDecomposition {
    let f = LaurentSeries::from_fn(r, 0, order, |n| {
        let s: i64 = entries.iter().filter(|(j, _)| n > 0 && n % j == 0).map(|(_, a)| a).sum();
        r.from_i64(s)
    });
    lambert_decompose(&f, b).unwrap()
}

#[test]
fn cp2_examples() {
    let (r, b) = zp(5, 4);
    let zero = dec_with(&r, &b, &[], 26);
    let one = dec_with(&r, &b, &[(5, 1)], 26);
    let v = cp2_check(&one, &zero, &zero, 5).unwrap();
    assert!(v.holds);
    let v = cp2_check(&zero, &zero, &zero, 5).unwrap();
    assert_eq!(v, Cp2Verdict { holds: false, witness: Some((0, 1)) });
    // a − b = 3·25 at j = 5, c = 25: n ≡ −3 mod 25 is forced there, and
    // compatibility with j = 25 (c ≡ 1) pins n mod 625.
    let a = dec_with(&r, &b, &[(5, 75)], 26);
    let c = dec_with(&r, &b, &[(5, 25), (25, 1)], 26);
    let v = cp2_check(&a, &zero, &c, 5).unwrap();
    assert!(!v.holds);
    let (n, m) = v.witness.unwrap();
    assert_eq!(m, 625);
    let q = r.modulus();
    for j in [5i64, 10, 15, 20, 25] {
        let e = if j == 25 { 4 } else { 2 };
        let lhs = (a.a(0, j) + n * c.a(0, j)) % q;
        assert_eq!(lhs % 5u64.pow(e), 0, "j={j}");
    }
}

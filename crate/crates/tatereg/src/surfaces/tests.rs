use super::*;
use crate::padic::make_ring;
use crate::qexp::{gamma13_series, Gamma13};
use crate::series::LaurentSeries;

fn ratio(ring: &crate::padic::Ring, n: i128, d: i128) -> crate::padic::RingElem {
    ring.from_ratio(n, d).unwrap()
}

#[test]
fn catalog_identities() {
    for (name, ks) in [(FamilyName::Ex1, 1..=7), (FamilyName::Ex2, 1..=7), (FamilyName::K3, 4..=4)] {
        for k in ks {
            let f = family_catalog(name, k).unwrap();
            let lhs = f.c4.pow(3).sub(&f.c6.pow(2));
            assert_eq!(lhs, f.disc.scale_int(1728), "{name} k={k}");
        }
    }
    let k3 = family_catalog(FamilyName::K3, 4).unwrap();
    let (num, den) = k3.j();
    let (num, den) = (num.expand_power(4), den.expand_power(4));
    // j = 27(9 − 8t⁴)³ / ((1 − t⁴)t¹²)
    let want_num = QPoly::from_ints(&[9, 0, 0, 0, -8]).pow(3).scale_int(27);
    let want_den = QPoly::from_ints(&[1, 0, 0, 0, -1]).mul(&QPoly::monomial_int(1, 12));
    assert_eq!(num.mul(&want_den), den.mul(&want_num));
    let ex1 = family_catalog(FamilyName::Ex1, 1).unwrap();
    assert_eq!(ex1.j().1.ord_at_one(), Some(1));
}

#[test]
fn fiber_tables() {
    let scan = fiber_scan(&family_catalog(FamilyName::K3, 4).unwrap()).unwrap();
    let get = |s: &[FiberType], l| s.iter().find(|f| f.location == l).map(|f| f.kodaira);
    assert_eq!(get(&scan, FiberLocation::Zero), Some(Kodaira::I(12)));
    for i in 1..=4 {
        assert_eq!(get(&scan, FiberLocation::Root { i }), Some(Kodaira::I(1)));
    }
    assert_eq!(get(&scan, FiberLocation::Infinity), Some(Kodaira::IVStar));
    let ex1 = fiber_scan(&family_catalog(FamilyName::Ex1, 3).unwrap()).unwrap();
    assert_eq!(get(&ex1, FiberLocation::Infinity), Some(Kodaira::I(0)));
    assert_eq!(get(&ex1, FiberLocation::Zero), Some(Kodaira::I(9)));
    let ex2 = fiber_scan(&family_catalog(FamilyName::Ex2, 9).unwrap()).unwrap();
    assert_eq!(get(&ex2, FiberLocation::Infinity), Some(Kodaira::IStar(0)));
    for k in 1..=12 {
        assert!(fiber_scan(&family_catalog(FamilyName::Ex1, k).unwrap()).is_ok());
        assert!(fiber_scan(&family_catalog(FamilyName::Ex2, k).unwrap()).is_ok());
    }
}

#[test]
fn k3_tate_period() {
    let fam = family_catalog(FamilyName::K3, 4).unwrap();
    for p in [7, 11] {
        let ring = make_ring(p, 1, 6).unwrap();
        let fib = tate_period(&fam, FiberLocation::Root { i: 4 }, &ring, 50).unwrap();
        assert_eq!(fib.r, 1);
        assert_eq!(fib.a_inv, ratio(&ring, -27, 4));
        let want = [(1, 1), (-27, 4), (1053, 32), (-23085, 128), (2130003, 2048), (-49565277, 8192)];
        for (n, (a, b)) in want.iter().enumerate() {
            let c = if n == 0 { fib.theta.add(&fib.t_of_q.coeff(0)) } else { fib.t_of_q.coeff(n as i64) };
            assert_eq!(c, ratio(&ring, *a, *b), "p={p} n={n}");
        }
        // t⁴·E₁³ = E_{3,a}
        let t = fib.t_of_q.add(&LaurentSeries::one(&ring, 50)).unwrap();
        let e1 = gamma13_series(&ring, Gamma13::E1, 50).unwrap();
        let e3a = gamma13_series(&ring, Gamma13::E3a, 50).unwrap();
        assert_eq!(t.pow(4).unwrap().mul(&e1.pow(3).unwrap()).unwrap(), e3a);
    }
}

#[test]
fn k3_kappa_cross_check() {
    let fam = family_catalog(FamilyName::K3, 4).unwrap();
    let ring = make_ring(7, 1, 6).unwrap();
    let one = FiberLocation::Root { i: 4 };
    let minus = FiberLocation::Root { i: 2 };
    let mut fib = tate_period(&fam, one, &ring, 51).unwrap();
    let lambda = differential_ratio(&fam, &mut fib).unwrap();
    let e1 = gamma13_series(&ring, Gamma13::E1, 51).unwrap();
    assert!(lambda == e1 || lambda == e1.neg());
    let sign = |a: &LaurentSeries, b: &LaurentSeries| {
        if a == b {
            Some(1)
        } else if *a == b.neg() {
            Some(-1)
        } else {
            None
        }
    };
    let basis = logform_basis(&fam, &[one, minus]).unwrap();
    let forms: Vec<LogForm> = basis.iter().map(|b| b.0).collect();
    assert_eq!(forms, vec![LogForm::Holomorphic { m: 0 }, LogForm::Log { at: one }, LogForm::Log { at: minus }]);
    let want = [Gamma13::G, Gamma13::F1, Gamma13::F2];
    let signs: Vec<_> = forms
        .iter()
        .zip(want)
        .map(|(f, w)| sign(&kappa(&fam, &fib, *f).unwrap(), &gamma13_series(&ring, w, 50).unwrap()))
        .collect();
    assert!(signs[0].is_some() && signs.iter().all(|s| *s == signs[0]), "{signs:?}");
    // dt/t ↦ ±(27/4)·E_{3,b}
    let e3b = gamma13_series(&ring, Gamma13::E3b, 50).unwrap().scale(&ratio(&ring, 27, 4));
    let dt_over_t = {
        let t = fib.t_of_q.add(&LaurentSeries::one(&ring, 51)).unwrap();
        let qdt = fib.t_of_q.derivative().shift(1);
        t.inv().unwrap().mul(&qdt).unwrap().mul(&lambda).unwrap().truncate(50)
    };
    assert!(sign(&dt_over_t, &e3b).is_some());
}

#[test]
fn cartier_regressions() {
    let k3 = family_catalog(FamilyName::K3, 4).unwrap();
    assert_eq!(hasse_coefficient(&k3, 5).to_string(), "432");
    assert_eq!(hasse_coefficient(&k3, 7).to_string(), "0");
    for p in [5, 7, 11, 13] {
        let c = condition_checks(&k3, p).unwrap();
        assert_eq!(c.cartier, vec![vec![c.k_p_mod_p]], "p={p}");
        assert_eq!(c.p_mod_4_consistent, Some(true));
    }
    let c = condition_checks(&family_catalog(FamilyName::Ex1, 5).unwrap(), 11).unwrap();
    assert!(c.a_prime && c.b_prime);
    let c = condition_checks(&family_catalog(FamilyName::Ex1, 3).unwrap(), 7).unwrap();
    assert!(!c.a_prime);
}

#[test]
fn semilinear_examples() {
    assert!(semilinear_fixed_points(&[vec![1]], 7, 1).unwrap());
    assert!(!semilinear_fixed_points(&[vec![3]], 7, 1).unwrap());
    assert!(semilinear_fixed_points(&[vec![1, 0], vec![0, 1]], 5, 2).unwrap());
    assert!(!semilinear_fixed_points(&[vec![0, 0], vec![0, 0]], 5, 2).unwrap());
}

#[test]
fn ex1_bound_small() {
    let fibers = parse_fibers("roots", 5).unwrap();
    let req = BoundRequest {
        family: FamilyName::Ex1,
        k: 5,
        p: 11,
        n: 99,
        fibers,
        embeddings: vec![1, 2, 3, 4],
        exclusions: vec![vec![1, 1, 1, 1, 1], vec![1, 0, 0, 0, 0]],
        precision: 4,
        guard: 2,
    };
    let rep = bound_report(&req).unwrap();
    assert_eq!(rep.bound, 3);
    let published = [vec![-4, 0, 0, -4, 1], vec![3, 3, 0, 1, 0], vec![1, -3, 1, 0, 0]];
    let published = crate::eis::FpSubspace::span_signed(11, 5, &published).unwrap();
    assert_eq!(bound::image_span(&rep).unwrap(), published);
    assert_eq!(rep.intersected_bound, Some(1));
    assert_eq!(rep.intersected_basis, Some(vec![vec![1, 1, 1, 1, 1]]));
    assert_eq!(rep.excluded.iter().map(|e| e.excluded).collect::<Vec<_>>(), vec![false, true]);
}

#[test]
fn k3_condition_cp() {
    for p in [7, 11] {
        let v = check_cp(p, 6).unwrap();
        assert!(v.holds, "{v:?}");
        assert_eq!(v.k_p, "0");
    }
    let v = check_cp(5, 6).unwrap();
    assert_eq!(v.k_p, "432");
    assert!(v.cp1);
}

#[test]
fn k3_bound_two_fibers() {
    let req = BoundRequest {
        family: FamilyName::K3,
        k: 4,
        p: 7,
        n: 49,
        fibers: parse_fibers("1,-1", 4).unwrap(),
        embeddings: vec![],
        exclusions: vec![vec![1, -1]],
        precision: 4,
        guard: 2,
    };
    let rep = bound_report(&req).unwrap();
    assert_eq!(rep.forms.len(), 3);
    assert_eq!(rep.excluded[0].excluded, check_cp(7, 6).unwrap().holds);
}

#[test]
fn fiber_parsing() {
    let f = parse_fibers("z1, 0 ,-1", 4).unwrap();
    assert_eq!(f, vec![FiberLocation::Root { i: 1 }, FiberLocation::Zero, FiberLocation::Root { i: 2 }]);
    assert!(parse_fibers("-1", 5).is_err());
    assert!(parse_fibers("z6", 5).is_err());
    assert!(parse_fibers("x", 5).is_err());
}

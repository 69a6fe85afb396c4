use super::*;
use crate::padic::make_ring;

fn ints(s: &LaurentSeries, from: i64, to: i64) -> Vec<i128> {
    (from..to).map(|n| s.coeff(n).to_signed()).collect()
}

#[test]
fn level_one_coefficients() {
    let r = make_ring(5, 1, 20).unwrap();
    assert_eq!(ints(&level1_series(&r, Level1::E4, 5), 0, 5), vec![1, 240, 2160, 6720, 17520]);
    assert_eq!(ints(&level1_series(&r, Level1::E6, 4), 0, 4), vec![1, -504, -16632, -122976]);
    assert_eq!(ints(&level1_series(&r, Level1::Delta, 6), 1, 6), vec![1, -24, 252, -1472, 4830]);
    let j = level1_series(&r, Level1::J, 3);
    assert_eq!(j.val(), -1);
    assert_eq!(ints(&j, -1, 3), vec![1, 744, 196884, 21493760]);
    assert_eq!(j.order(), 3);
}

#[test]
fn j_two_ways() {
    let r = make_ring(7, 1, 12).unwrap();
    let a = level1_series(&r, Level1::J, 40);
    let b = j_from_tate(&r, 40);
    assert_eq!(a, b);
    let inv = tate_invariants(&r, 30);
    let e4 = level1_series(&r, Level1::E4, 30);
    let e6 = level1_series(&r, Level1::E6, 30);
    assert_eq!(inv.c4, e4);
    assert_eq!(inv.c6.neg(), e6);
    assert_eq!(inv.disc, level1_series(&r, Level1::Delta, 30));
}

#[test]
fn weierstrass_identity_two_variable() {
    let r = make_ring(5, 1, 10).unwrap();
    let n = 12;
    let (x, y) = tate_xy(&r, n);
    let (a4, a6) = tate_coeffs(&r, n as i64);
    let a4 = TwoVarSeries::from_q_series(&a4).unwrap();
    let a6 = TwoVarSeries::from_q_series(&a6).unwrap();
    let lhs = y.mul(&y).unwrap().add(&x.mul(&y).unwrap()).unwrap();
    let rhs = x.pow(3).unwrap().add(&a4.mul(&x).unwrap()).unwrap().add(&a6).unwrap();
    assert!(lhs.sub(&rhs).unwrap().is_zero());
}

#[test]
fn gamma13_identities() {
    let r = make_ring(7, 1, 10).unwrap();
    let n = 30;
    let e1 = gamma13_series(&r, Gamma13::E1, n).unwrap();
    let e3a = gamma13_series(&r, Gamma13::E3a, n).unwrap();
    let e3b = gamma13_series(&r, Gamma13::E3b, n).unwrap();
    assert_eq!(ints(&e1, 0, 5), vec![1, 6, 0, 6, 6]);
    assert_eq!(e1.pow(3).unwrap(), e3a.add(&e3b.scale_int(27)).unwrap());
    let t = gamma13_series(&r, Gamma13::T, n).unwrap();
    assert!(t.coeff(0).is_one());
    assert_eq!(t.pow(4).unwrap().mul(&e1.pow(3).unwrap()).unwrap(), e3a);
    let g = gamma13_series(&r, Gamma13::G, n).unwrap();
    let f1 = gamma13_series(&r, Gamma13::F1, n).unwrap();
    let f2 = gamma13_series(&r, Gamma13::F2, n).unwrap();
    let one = LaurentSeries::one(&r, n);
    assert_eq!(f1.mul(&t.sub(&one).unwrap()).unwrap(), g);
    assert_eq!(f2.mul(&t.add(&one).unwrap()).unwrap(), g);
    assert_eq!(f1.order(), n);
}

#[test]
fn theta_quasi_periodicity() {
    let r = make_ring(5, 1, 8).unwrap();
    let n = 40;
    for rr in [3i64, 4, 7] {
        for e in [-9i64, -2, 1, 2, 5, 8] {
            if e.rem_euclid(rr) == 0 {
                continue;
            }
            let a = theta_at_power(&r, e + rr, rr, n).unwrap();
            let b = theta_at_power(&r, e, rr, n + e.abs()).unwrap().shift(-e).neg();
            assert!(a.agrees_with(&b), "r={rr} e={e}");
        }
    }
    assert!(theta_at_power(&r, 6, 3, 10).is_err());
}

#[test]
fn theta_matches_two_variable_product() {
    let r = make_ring(5, 1, 8).unwrap();
    let th = theta_series(&r, 8);
    for (m, rr) in [(1i64, 3i64), (2, 5), (1, 4)] {
        let a = th.specialize(m, rr, 20).unwrap();
        let b = theta_at_power(&r, m, rr, 20).unwrap();
        assert!(a.agrees_with(&b), "m={m} r={rr}");
    }
}

#[test]
fn s_alpha_basic() {
    let r = make_ring(5, 1, 8).unwrap();
    let one = LaurentSeries::one(&r, 30);
    assert_eq!(s_alpha_series(&one, 3, 20).unwrap(), LaurentSeries::one(&r, 20));
    let a = LaurentSeries::monomial(&r.one(), 1, 30);
    let s = s_alpha_series(&a, 3, 20).unwrap();
    let sinv = s_alpha_series(&a.inv().unwrap(), 3, 20).unwrap();
    assert_eq!(s.mul(&sinv).unwrap(), LaurentSeries::one(&r, 20));
    assert!(s_alpha_series(&LaurentSeries::monomial(&r.one(), 3, 30), 3, 20).is_err());
}

#[test]
fn xi_is_unit_led_with_expected_shift() {
    let r = make_ring(5, 1, 8).unwrap();
    let x = xi_closed_value(&r, 1, 2, 3, 20).unwrap();
    assert_eq!(x.first_nonzero(), Some(-1));
    assert!(x.coeff(-1).is_unit());
    assert_eq!(x.order(), 20);
    assert!(xi_closed_value(&r, 2, 1, 3, 20).is_err());
    let r7 = make_ring(7, 1, 4).unwrap();
    for (a, b, rr) in [(1, 2, 3), (1, 2, 5), (2, 3, 5)] {
        let x = xi_closed_value(&r7, a, b, rr, 40).unwrap();
        assert!(matches!(check_dlog_integrality(&x).unwrap(), DlogVerdict::Pass { .. }));
    }
    assert!(xi_closed_value(&r, 1, 2, 5, 20).is_err());
}

#[test]
fn dlog_integrality_verdicts() {
    let r = make_ring(5, 1, 6).unwrap();
    let t = r.teichmuller_root(4).unwrap();
    let good = LaurentSeries::from_coeffs(&r, 0, &[r.one(), t.neg()], 60);
    assert_eq!(check_dlog_integrality(&good).unwrap(), DlogVerdict::Pass { checked_to: 60 });
    let bad = LaurentSeries::from_ints(&r, 0, &[1, 2], 60);
    assert_eq!(check_dlog_integrality(&bad).unwrap(), DlogVerdict::Fail { index: 5, valuation: 0 });
    // ℓ_φ(1 − q⁵) contributes −q⁵, a unit at j = 5.
    let e = euler_product(&r, 60);
    assert_eq!(check_dlog_integrality(&e).unwrap(), DlogVerdict::Fail { index: 5, valuation: 0 });
}

use super::*;
use crate::padic::make_ring;

fn ring(p: u64, d: usize, m: u32) -> Ring {
    make_ring(p, d, m).unwrap()
}

fn geometric(r: &Ring, n: i64) -> LaurentSeries {
    LaurentSeries::from_fn(r, 0, n, |_| r.one())
}

#[test]
fn one_minus_q_times_geometric_is_one() {
    let r = ring(7, 1, 4);
    let f = LaurentSeries::from_ints(&r, 0, &[1, -1], 20);
    let g = geometric(&r, 20);
    assert_eq!(f.mul(&g).unwrap(), LaurentSeries::one(&r, 20));
    assert_eq!(f.inv().unwrap(), g);
}

#[test]
fn negative_valuations_are_tracked() {
    let r = ring(7, 1, 4);
    let q = LaurentSeries::var(&r, 10);
    let qi = q.inv().unwrap();
    assert_eq!(qi.val(), -1);
    assert_eq!(qi.order(), 8);
    let one = q.mul(&qi).unwrap();
    assert_eq!(one.val(), 0);
    assert!(one.coeff(0).is_one());
    assert!((1..one.order()).all(|n| one.coeff(n).is_zero()));
}

#[test]
fn composition_examples() {
    let r = ring(11, 1, 3);
    let q = LaurentSeries::var(&r, 12);
    let f = LaurentSeries::from_ints(&r, 0, &[3, 1, 4, 1, 5, 9, 2, 6], 12);
    assert!(f.compose(&q).unwrap().agrees_with(&f));
    let q2 = LaurentSeries::from_ints(&r, 2, &[1], 12);
    let g = LaurentSeries::from_ints(&r, 1, &[1, 1], 12);
    let h = q2.compose(&g).unwrap();
    assert!(h.agrees_with(&LaurentSeries::from_ints(&r, 2, &[1, 2, 1], 12)));
    let two_q = LaurentSeries::from_ints(&r, 1, &[2], 12);
    let e = geometric(&r, 12).compose(&two_q).unwrap();
    for n in 0..12 {
        assert_eq!(e.coeff(n), r.from_u64(2).pow(n as u128));
    }
    assert!(f.compose(&LaurentSeries::one(&r, 5)).is_err());
}

#[test]
fn reversion_of_q_plus_q2() {
    let r = ring(7, 1, 5);
    let f = LaurentSeries::from_ints(&r, 1, &[1, 1], 15);
    let g = f.reversion().unwrap();
    // Catalan numbers with alternating signs.
    let expect = [1i64, -1, 2, -5, 14, -42, 132, -429];
    for (i, &c) in expect.iter().enumerate() {
        assert_eq!(g.coeff(i as i64 + 1), r.from_i64(c));
    }
    let id = f.compose(&g).unwrap();
    assert!(id.agrees_with(&LaurentSeries::var(&r, 15)));
    assert!(LaurentSeries::var(&r, 9).reversion().unwrap().agrees_with(&LaurentSeries::var(&r, 9)));
}

#[test]
fn substitutions() {
    let r = ring(7, 1, 3);
    let q = LaurentSeries::var(&r, 10);
    let q3 = q.power_substitute(3).unwrap();
    assert_eq!(q3.val(), 3);
    assert_eq!(q3.order(), 30);
    let gi = LaurentSeries::from_ints(&r, 0, &[1, -1], 10).inv().unwrap();
    let g2 = gi.power_substitute(2).unwrap();
    let expect = LaurentSeries::from_ints(&r, 0, &[1, 0, -1], 20).inv().unwrap();
    assert_eq!(g2, expect);
    let qi = q.rescale_root(2).unwrap();
    assert_eq!(qi.label(), "q_i");
    assert!(qi.coeff(2).is_one());
    assert!(qi.collapse_root(2).unwrap().agrees_with(&q));
    assert!(LaurentSeries::from_ints(&r, 1, &[1, 1], 10).collapse_root(2).is_err());
}

#[test]
fn roots_of_series() {
    let r = ring(7, 1, 5);
    let f = LaurentSeries::from_ints(&r, 0, &[1, 1], 12);
    let f4 = f.pow(4).unwrap();
    let root = f4.nth_root_series(4, &ResidueChoice::Residue(vec![1])).unwrap();
    assert!(root.agrees_with(&f));
    let q2 = LaurentSeries::from_ints(&r, 2, &[1], 12);
    let s = q2.nth_root_series(2, &ResidueChoice::Residue(vec![1])).unwrap();
    assert!(s.agrees_with(&LaurentSeries::var(&r, 12)));
    assert!(LaurentSeries::var(&r, 5).nth_root_series(2, &ResidueChoice::Smallest).is_err());
}

#[test]
fn log_exp_and_qdlog() {
    let r = ring(5, 1, 6);
    let one = LaurentSeries::one(&r, 10);
    assert!(one.log1().unwrap().coeffs().iter().all(|c| c.is_zero()));
    let f = LaurentSeries::from_ints(&r, 0, &[1 + 5, 10, -25, 5], 10);
    let back = f.log1().unwrap().exp0().unwrap();
    assert_eq!(back, f);
    let qm = LaurentSeries::from_ints(&r, 3, &[1], 10);
    let d = qm.qdlog().unwrap();
    assert_eq!(d.coeff(0), r.from_u64(3));
    assert!((1..d.order()).all(|n| d.coeff(n).is_zero()));
    // q f' = f · qdlog(f) for f = 1 − q.
    let g = LaurentSeries::from_ints(&r, 0, &[1, -1], 10);
    let lhs = g.derivative().shift(1);
    let rhs = g.mul(&g.qdlog().unwrap()).unwrap();
    assert!(lhs.agrees_with(&rhs));
    assert!(LaurentSeries::from_ints(&r, 0, &[1, 1], 10).log1().is_err());
}

#[test]
fn ell_phi_of_one_minus_rq() {
    let r = ring(5, 1, 5);
    let n = 30;
    assert!(LaurentSeries::var(&r, n).ell_phi().unwrap().coeffs().iter().all(|c| c.is_zero()));
    // The closed form needs σ(r) = r^p, so r is taken Teichmüller.
    let rr = r.teichmuller_root(4).unwrap();
    let f = LaurentSeries::one(&r, n).sub(&LaurentSeries::monomial(&rr, 1, n)).unwrap();
    let l = f.ell_phi().unwrap();
    assert_eq!(l.digits(), 4);
    for k in 1..n {
        let expect = if k % 5 == 0 {
            r.zero()
        } else {
            rr.pow(k as u128).mul(&r.from_i64(k).inv().unwrap())
        };
        assert_eq!(l.coeff(k).reduce_digits(4), expect.reduce_digits(4), "k = {k}");
    }
    let teich = LaurentSeries::constant(&make_ring(5, 1, 5).unwrap().teichmuller_root(4).unwrap(), n);
    assert!(teich.ell_phi().unwrap().coeffs().iter().all(|c| c.reduce_digits(4).is_zero()));
}

#[test]
fn phi_over_extension_uses_frobenius() {
    let r = ring(19, 2, 3);
    let x = r.generator();
    let f = LaurentSeries::monomial(&x, 1, 5);
    let phi = f.phi_substitute();
    assert_eq!(phi.val(), 19);
    assert_eq!(phi.coeff(19), x.frobenius());
}

#[test]
fn serialization_round_trip() {
    let r = ring(19, 2, 3);
    let x = r.generator();
    let f = LaurentSeries::monomial(&x, -2, 7).add(&LaurentSeries::one(&r, 7)).unwrap();
    let bytes = f.to_bytes();
    let g = LaurentSeries::from_bytes(&bytes).unwrap();
    assert_eq!(f, g);
    assert_eq!(g.to_bytes(), bytes);
}

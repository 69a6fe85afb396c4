use super::*;
use crate::padic::make_ring;
use crate::qexp::xi_closed_value;

fn ring() -> Ring {
    make_ring(7, 1, 4).unwrap()
}

fn unit(r: &Ring, c: &[i64]) -> LaurentSeries {
    LaurentSeries::from_ints(r, 0, c, 20)
}

fn antipolar(b: LaurentSeries) -> FactoredUnit {
    let one = LaurentSeries::one(b.ring(), 20);
    FactoredUnit { antipolar: vec![(b, 1)], ..FactoredUnit::from_scalar(one) }
}

fn regular(g: RegularUnit) -> FactoredUnit {
    let one = LaurentSeries::one(g.at_zero().ring(), 20);
    FactoredUnit { regular: vec![(g, 1)], ..FactoredUnit::from_scalar(one) }
}

#[test]
fn basic_rules() {
    let r = ring();
    let a = FactoredUnit::from_scalar(unit(&r, &[3, 1]));
    let b = FactoredUnit::from_scalar(unit(&r, &[2, 0, 5]));
    let u = FactoredUnit::u(&r, 20);
    assert_eq!(residue_of_pair(&a, &b).unwrap(), LaurentSeries::one(&r, 20));
    assert_eq!(residue_of_pair(&a, &u).unwrap(), a.scalar);
    assert_eq!(residue_of_pair(&u, &a).unwrap(), a.scalar.inv().unwrap());
    assert_eq!(residue_of_pair(&u, &u).unwrap(), LaurentSeries::one(&r, 20).neg());
    let g = RegularUnit { coeffs: vec![unit(&r, &[2, 1]), unit(&r, &[1, 4])] };
    let gu = regular(g.clone());
    assert_eq!(residue_of_pair(&u, &gu).unwrap(), g.at_zero().inv().unwrap());
    let bq = LaurentSeries::monomial(&r.one(), 2, 20);
    let bu = antipolar(bq.clone());
    let expect = g.eval(&bq).unwrap().div(g.at_zero()).unwrap();
    assert_eq!(residue_of_pair(&gu, &bu).unwrap(), expect);
    assert_eq!(residue_of_pair(&bu, &gu).unwrap(), expect.inv().unwrap());
    assert_eq!(residue_of_pair(&a, &bu).unwrap(), LaurentSeries::one(&r, 20));
    assert_eq!(residue_of_pair(&u, &bu).unwrap(), LaurentSeries::one(&r, 20));
    assert!(residue_of_pair(&gu, &antipolar(unit(&r, &[1]))).is_err());
}

#[test]
fn theta_factorization() {
    let r = ring();
    let t = factor_theta_quotient(&r, &[(0, 1)], 3, 10).unwrap();
    assert!(t.scalar.coeff(0).is_one());
    assert_eq!(t.u_power, 0);
    assert_eq!(t.regular.len(), 1 + 3);
    assert_eq!(t.antipolar.len(), 3);
    let tq = factor_theta_quotient(&r, &[(3, 1)], 3, 10).unwrap();
    assert_eq!(tq.u_power, -1);
    assert_eq!(tq.scalar.coeff(0).to_signed(), -1);
    // f(u) = θ(q₀^a u)^r/(θ(u)^{r−a}θ(qu)^a) equals (−u)^a θ(q₀^a u)^r/θ(u)^r.
    let f = factor_theta_quotient(&r, &[(1, 3), (0, -2), (3, -1)], 3, 10).unwrap();
    let h = factor_theta_quotient(&r, &[(1, 3), (0, -3)], 3, 10).unwrap();
    assert_eq!(f.u_power, h.u_power + 1);
    assert_eq!(f.scalar, h.scalar.neg());
}

#[test]
fn oracle_equivalence() {
    for p in [7u64, 11] {
        let r = make_ring(p, 1, 4).unwrap();
        for rr in (3..=7i64).filter(|rr| rr % p as i64 != 0) {
            for b in 2..rr {
                for a in 1..b {
                    let x = xi_rule_value(&r, a, b, rr, 40).unwrap();
                    let y = xi_closed_value(&r, a, b, rr, 40).unwrap();
                    assert_eq!(x, y, "p={p} (a,b,r)=({a},{b},{rr})");
                }
            }
        }
    }
}

#[test]
fn rejects_bad_parameters() {
    let r = ring();
    assert!(xi_rule_value(&r, 1, 2, 7, 10).is_err());
    assert!(xi_rule_value(&r, 2, 2, 5, 10).is_err());
}

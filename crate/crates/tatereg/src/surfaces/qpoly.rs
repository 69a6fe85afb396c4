//! Polynomials with rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{Ring, RingElem};
use crate::series::LaurentSeries;

/// `Σ cᵢ xⁱ` over `Q`, with no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(Vec<BigRational>);

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn zero() -> Self {
        QPoly(vec![])
    }

    pub fn constant_ratio(n: i64, d: i64) -> Self {
        Self::new(vec![ratio(n, d)])
    }

    pub fn monomial_int(c: i64, deg: usize) -> Self {
        let mut v = vec![BigRational::zero(); deg + 1];
        v[deg] = ratio(c, 1);
        Self::new(v)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| ratio(x, 1)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self) -> Self {
        QPoly(self.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale_int(&self, s: i64) -> Self {
        self.scale_ratio(s, 1)
    }

    pub fn scale_ratio(&self, n: i64, d: i64) -> Self {
        let r = ratio(n, d);
        Self::new(self.0.iter().map(|x| x * &r).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant_ratio(1, 1), |acc, _| acc.mul(self))
    }

    /// `f(x^k)`.
    pub fn expand_power(&self, k: u32) -> Self {
        let k = k as usize;
        let mut c = vec![BigRational::zero(); self.0.len().saturating_sub(1) * k + 1];
        for (i, a) in self.0.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::new(c)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Order of vanishing at `x = 0` (`None` for the zero polynomial).
    pub fn ord_at_zero(&self) -> Option<u32> {
        self.0.iter().position(|c| !c.is_zero()).map(|i| i as u32)
    }

    /// Order of vanishing at `x = 1`.
    pub fn ord_at_one(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut f = self.0.clone();
        let mut ord = 0;
        loop {
            // Synthetic division by (x − 1).
            let mut q = vec![BigRational::zero(); f.len() - 1];
            let mut acc = BigRational::zero();
            for i in (0..f.len()).rev() {
                acc = &acc + &f[i];
                if i > 0 {
                    q[i - 1] = acc.clone();
                }
            }
            if !acc.is_zero() {
                return Some(ord);
            }
            ord += 1;
            f = q;
        }
    }

    /// Coefficients reduced into `ring`.
    pub fn to_ring(&self, ring: &Ring) -> Result<Vec<RingElem>> {
        let m = BigInt::from(ring.modulus());
        self.0
            .iter()
            .map(|c| {
                let n = (c.numer() % &m + &m) % &m;
                let d = (c.denom() % &m + &m) % &m;
                let n = ring.from_u64(n.to_u64().unwrap());
                let d = ring.from_u64(d.to_u64().unwrap());
                d.inv().map(|di| n.mul(&di)).map_err(|_| Error::NonUnit(format!("denominator of {c} in Z/{m}")))
            })
            .collect()
    }

    /// `f(θ + x)` as a power series in `x` known to `order`.
    pub fn taylor(&self, theta: &RingElem, order: i64) -> Result<LaurentSeries> {
        let ring = theta.ring();
        let shift = LaurentSeries::from_coeffs(ring, 0, &[theta.clone(), ring.one()], order);
        let mut acc = LaurentSeries::zero(ring, order);
        for c in self.to_ring(ring)?.iter().rev() {
            acc = acc.mul(&shift)?.add(&LaurentSeries::constant(c, order))?;
        }
        Ok(acc)
    }

    /// `f(g)` for a series `g`.
    pub fn eval_series(&self, g: &LaurentSeries) -> Result<LaurentSeries> {
        let ring = g.ring();
        let mut acc = LaurentSeries::zero(ring, g.order());
        for c in self.to_ring(ring)?.iter().rev() {
            acc = acc.mul(g)?.add(&LaurentSeries::constant(c, g.order()))?;
        }
        Ok(acc)
    }

    /// Integer coefficients, if all are integral.
    pub fn to_ints(&self) -> Option<Vec<BigInt>> {
        self.0.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let a = c.abs();
            let body = match (i, a.is_one()) {
                (0, _) => a.to_string(),
                (_, true) => String::new(),
                _ => format!("{a}*"),
            };
            let var = match i {
                0 => String::new(),
                1 => "s".to_string(),
                _ => format!("s^{i}"),
            };
            write!(f, "{sign}{body}{var}")?;
            first = false;
        }
        Ok(())
    }
}

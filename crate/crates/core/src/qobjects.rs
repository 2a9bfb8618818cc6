//! q-factorial combinatorics: Pochhammer symbols, Gaussian binomials,
//! triangular q-powers and cyclotomic valuations.

use std::collections::BTreeMap;
use std::ops::{Div, Mul};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::{divisors, split_cyclotomic, CycloRat};
use crate::error::{ArithError, Error, Result};
use crate::poly::QPoly;
use crate::ratfunc::QRat;

/// `sign * q^qpower * prod_j (1 - q^j)^{e_j}`, exponents of either sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredQProduct {
    sign: i8,
    qpower: i64,
    factors: BTreeMap<u32, i64>,
}

impl Default for FactoredQProduct {
    fn default() -> Self {
        Self::one()
    }
}

impl FactoredQProduct {
    pub fn one() -> Self {
        FactoredQProduct { sign: 1, qpower: 0, factors: BTreeMap::new() }
    }

    pub fn monomial(e: i64) -> Self {
        FactoredQProduct { qpower: e, ..Self::one() }
    }

    /// `(1 - q^j)^e`, `j >= 1`.
    pub fn factor(j: u32, e: i64) -> Self {
        assert!(j >= 1, "factor index must be positive");
        let mut out = Self::one();
        out.push(j, e);
        out
    }

    fn push(&mut self, j: u32, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.factors.entry(j).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&j);
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn qpower(&self) -> i64 {
        self.qpower
    }

    pub fn factors(&self) -> &BTreeMap<u32, i64> {
        &self.factors
    }

    pub fn negated(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    pub fn inv(&self) -> Self {
        FactoredQProduct {
            sign: self.sign,
            qpower: -self.qpower,
            factors: self.factors.iter().map(|(&j, &e)| (j, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let sign = if n % 2 == 0 { 1 } else { self.sign };
        FactoredQProduct {
            sign,
            qpower: self.qpower * n,
            factors: self
                .factors
                .iter()
                .filter(|_| n != 0)
                .map(|(&j, &e)| (j, e * n))
                .collect(),
        }
    }

    /// Exponent of `Phi_d`: `sum_{d | j} e_j`. For `d = 1` this counts every
    /// factor.
    pub fn cyclo_valuation(&self, d: u32) -> i64 {
        assert!(d >= 1);
        self.factors
            .iter()
            .filter(|(&j, _)| j % d == 0)
            .map(|(_, &e)| e)
            .sum()
    }

    /// Nonzero cyclotomic valuations, keyed by `d`.
    pub fn valuations(&self) -> BTreeMap<u32, i64> {
        let mut out = BTreeMap::new();
        for (&j, &e) in &self.factors {
            for d in divisors(j) {
                *out.entry(d).or_insert(0) += e;
            }
        }
        out.retain(|_, e| *e != 0);
        out
    }

    pub fn to_cyclo_rat(&self) -> CycloRat {
        let mut out = CycloRat::from_int(self.sign as i64);
        // positive factors first so the numerator is built before the den
        for (&j, &e) in self.factors.iter().filter(|(_, &e)| e > 0) {
            out.mul_one_minus_q_pow(j, e);
        }
        for (&j, &e) in self.factors.iter().filter(|(_, &e)| e < 0) {
            out.mul_one_minus_q_pow(j, e);
        }
        out.mul_q_pow(self.qpower);
        out
    }

    pub fn expand(&self) -> QRat {
        self.to_cyclo_rat().to_qrat()
    }

    /// The expanded polynomial, when the product is one.
    pub fn expand_poly(&self) -> Option<QPoly> {
        if self.qpower < 0 || self.valuations().values().any(|&e| e < 0) {
            return None;
        }
        self.to_cyclo_rat().to_poly()
    }

    pub fn eval(&self, x: &BigRational) -> std::result::Result<BigRational, ArithError> {
        let mut acc = BigRational::from_integer((self.sign as i64).into());
        if self.qpower != 0 {
            if x.is_zero() {
                if self.qpower < 0 {
                    return Err(ArithError::Pole(x.clone()));
                }
                return Ok(BigRational::zero());
            }
            let p = num_traits::pow(x.clone(), self.qpower.unsigned_abs() as usize);
            acc *= if self.qpower > 0 { p } else { BigRational::one() / p };
        }
        for (&j, &e) in &self.factors {
            let f = BigRational::one() - num_traits::pow(x.clone(), j as usize);
            if f.is_zero() {
                if e < 0 {
                    return Err(ArithError::Pole(x.clone()));
                }
                return Ok(BigRational::zero());
            }
            let p = num_traits::pow(f, e.unsigned_abs() as usize);
            acc *= if e > 0 { p } else { BigRational::one() / p };
        }
        Ok(acc)
    }
}

impl Mul for &FactoredQProduct {
    type Output = FactoredQProduct;
    fn mul(self, rhs: &FactoredQProduct) -> FactoredQProduct {
        let mut out = self.clone();
        out.sign *= rhs.sign;
        out.qpower += rhs.qpower;
        for (&j, &e) in &rhs.factors {
            out.push(j, e);
        }
        out
    }
}

impl Mul for FactoredQProduct {
    type Output = FactoredQProduct;
    fn mul(self, rhs: FactoredQProduct) -> FactoredQProduct {
        &self * &rhs
    }
}

impl Div for &FactoredQProduct {
    type Output = FactoredQProduct;
    fn div(self, rhs: &FactoredQProduct) -> FactoredQProduct {
        self * &rhs.inv()
    }
}

impl Div for FactoredQProduct {
    type Output = FactoredQProduct;
    fn div(self, rhs: FactoredQProduct) -> FactoredQProduct {
        &self / &rhs
    }
}

/// `(q)_n = (1-q)(1-q^2)...(1-q^n)`, with `(q)_0 = 1`.
pub fn qpochhammer(n: i64) -> Result<FactoredQProduct> {
    if n < 0 {
        return Err(Error::usage(format!("qpochhammer needs n >= 0, got {n}")));
    }
    Ok(poch(n as u32))
}

/// `(q^2; q^2)_n = prod_{j=1}^n (1 - q^{2j})`.
pub fn qpochhammer_even(n: i64) -> Result<FactoredQProduct> {
    if n < 0 {
        return Err(Error::usage(format!("qpochhammer_even needs n >= 0, got {n}")));
    }
    Ok(poch_even(n as u32))
}

pub(crate) fn poch(n: u32) -> FactoredQProduct {
    let mut out = FactoredQProduct::one();
    for j in 1..=n {
        out.push(j, 1);
    }
    out
}

pub(crate) fn poch_even(n: u32) -> FactoredQProduct {
    let mut out = FactoredQProduct::one();
    for j in 1..=n {
        out.push(2 * j, 1);
    }
    out
}

/// `prod_{t=1}^n (1 + q^t) = (q^2;q^2)_n / (q)_n`.
pub(crate) fn plus_product(n: u32) -> FactoredQProduct {
    &poch_even(n) / &poch(n)
}

/// Gaussian binomial as a factored product; `None` outside `0 <= k <= n`.
pub fn qbinom_factored(n: i64, k: i64) -> Option<FactoredQProduct> {
    if k < 0 || k > n {
        return None;
    }
    let (n, k) = (n as u32, k as u32);
    Some(&poch(n) / &(&poch(k) * &poch(n - k)))
}

/// The Gaussian binomial `[n, k]_q` as a polynomial; zero outside
/// `0 <= k <= n`.
pub fn qbinom(n: i64, k: i64) -> QPoly {
    if k < 0 || k > n {
        return QPoly::zero();
    }
    let k = k.min(n - k) as usize;
    let n = n as usize;
    // prod_{i=1}^k (1 - q^{n-k+i}) / (1 - q^i); every partial quotient is
    // itself a Gaussian binomial, so each division is exact.
    let mut p = QPoly::one();
    for i in 1..=k {
        p.mul_one_minus_q_pow(n - k + i);
        let exact = p.div_one_minus_q_pow(i);
        debug_assert!(exact);
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triangular {
    /// `k(k+1)/2`
    Upper,
    /// `k(k-1)/2 = binom(k, 2)`
    Lower,
}

pub fn triangular_qpower(k: u64, variant: Triangular) -> FactoredQProduct {
    let e = match variant {
        Triangular::Upper => k * (k + 1) / 2,
        Triangular::Lower => k * k.saturating_sub(1) / 2,
    };
    FactoredQProduct::monomial(e as i64)
}

/// Exponent of `Phi_d` in `p`.
pub fn cyclo_valuation(p: &FactoredQProduct, d: u32) -> i64 {
    p.cyclo_valuation(d)
}

/// `[n+k, k] [k, m] = [n+m, m] [n+k, k-m]` as exact polynomials.
pub fn check_binom_transfer(n: i64, k: i64, m: i64) -> bool {
    let lhs = &qbinom(n + k, k) * &qbinom(k, m);
    let rhs = &qbinom(n + m, m) * &qbinom(n + k, k - m);
    lhs == rhs
}

/// Cyclotomic valuations of a rational function, found by trial division of
/// its numerator and denominator; the returned map records `d -> e_d` with
/// negative exponents for denominator factors, together with the cofactors
/// that are free of cyclotomic factors.
pub fn refactor_valuations(r: &QRat) -> (BTreeMap<u32, i64>, QPoly, QPoly) {
    let mut out = BTreeMap::new();
    let mut rests = Vec::new();
    for (poly, sign) in [(r.numer(), 1i64), (r.denom(), -1i64)] {
        let (_, exps, rest) = split_cyclotomic(poly);
        for (d, e) in exps {
            *out.entry(d).or_insert(0) += sign * e as i64;
        }
        rests.push(rest);
    }
    out.retain(|_, e| *e != 0);
    let den_rest = rests.pop().expect("two entries");
    let num_rest = rests.pop().expect("two entries");
    (out, num_rest, den_rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    fn at(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(qpochhammer(0).unwrap().expand_poly(), Some(QPoly::one()));
        assert_eq!(qpochhammer(2).unwrap().expand_poly(), Some(p(&[1, -1, -1, 1])));
        assert_eq!(qpochhammer(3).unwrap().eval(&at(2)).unwrap(), at(-21));
        assert!(qpochhammer(-1).is_err());
    }

    #[test]
    fn even_pochhammer_examples() {
        assert_eq!(qpochhammer_even(1).unwrap().expand_poly(), Some(p(&[1, 0, -1])));
        let ratio = &qpochhammer_even(3).unwrap() / &qpochhammer(3).unwrap();
        let expect = &(&p(&[1, 1]) * &p(&[1, 0, 1])) * &p(&[1, 0, 0, 1]);
        assert_eq!(ratio.expand_poly(), Some(expect));
        assert_eq!(qpochhammer_even(3).unwrap().eval(&at(2)).unwrap(), at(-2835));
        assert!(qpochhammer_even(-2).is_err());
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(4, 2), p(&[1, 1, 2, 1, 1]));
        for n in 0..6 {
            assert_eq!(qbinom(n, 0), QPoly::one());
        }
        assert!(qbinom(5, 7).is_zero());
        assert!(qbinom(5, -1).is_zero());
    }

    #[test]
    fn qbinom_factored_agrees_with_product_formula() {
        for n in 0..12 {
            for k in 0..=n {
                assert_eq!(qbinom_factored(n, k).unwrap().expand_poly(), Some(qbinom(n, k)));
            }
        }
    }

    #[test]
    fn triangular_examples() {
        for v in [Triangular::Upper, Triangular::Lower] {
            assert_eq!(triangular_qpower(0, v).expand_poly(), Some(QPoly::one()));
        }
        assert_eq!(triangular_qpower(3, Triangular::Upper).qpower(), 6);
        assert_eq!(triangular_qpower(3, Triangular::Lower).qpower(), 3);
    }

    #[test]
    fn valuation_examples() {
        let p4 = qpochhammer(4).unwrap();
        assert_eq!(cyclo_valuation(&p4, 2), 2);
        assert_eq!(cyclo_valuation(&qbinom_factored(4, 2).unwrap(), 3), 1);
        assert_eq!(cyclo_valuation(&p4, 5), 0);
    }

    #[test]
    fn transfer_examples() {
        assert!(check_binom_transfer(2, 1, 1));
        assert!(check_binom_transfer(3, 2, 1));
    }

    #[test]
    fn refactoring_roundtrips_valuations() {
        let f = &(&poch(6) / &poch_even(2)) * &FactoredQProduct::factor(9, -1);
        let (vals, num_rest, den_rest) = refactor_valuations(&f.expand());
        assert_eq!(vals, f.valuations());
        assert_eq!(num_rest.degree(), Some(0));
        assert_eq!(den_rest, QPoly::one());
    }
}

//! Cyclotomic polynomials and rational functions with cyclotomic denominators.
//!
//! Every denominator that occurs in the q-WZ schemes is a power of `q` times
//! a product of cyclotomic polynomials. [`CycloRat`] keeps that denominator
//! as an exponent map `d -> e_d`, so common denominators are exponent-wise
//! maxima and reduction is trial division by known factors. No polynomial
//! gcd is ever needed on this path.
//!
//! Multiplying or dividing by `Phi_d` is done through
//! `Phi_d = prod_{e | d} (1 - q^e)^{mu(d/e)}` (for `d >= 2`), so each step is
//! a handful of linear-time passes over the coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ArithError;
use crate::poly::QPoly;
use crate::ratfunc::QRat;

pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mobius(n: u32) -> i8 {
    let mut n = n;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Binomial factors `(1 - q^e)` whose quotient is `±Phi_d`: the first list
/// multiplies, the second divides.
fn mobius_factors(d: u32) -> (Vec<u32>, Vec<u32>) {
    let mut up = Vec::new();
    let mut down = Vec::new();
    for e in divisors(d) {
        match mobius(d / e) {
            1 => up.push(e),
            -1 => down.push(e),
            _ => {}
        }
    }
    (up, down)
}

/// The `d`-th cyclotomic polynomial.
pub fn cyclotomic(d: u32) -> Result<QPoly, ArithError> {
    if d == 0 {
        return Err(ArithError::ZeroCyclotomicIndex);
    }
    let mut p = QPoly::one();
    mul_phi(&mut p, d);
    Ok(p)
}

/// Multiplies `p` by `Phi_d` in place.
pub(crate) fn mul_phi(p: &mut QPoly, d: u32) {
    if d == 1 {
        // q - 1 = -(1 - q)
        p.mul_one_minus_q_pow(1);
        *p = -std::mem::take(p);
        return;
    }
    let (up, down) = mobius_factors(d);
    for e in up {
        p.mul_one_minus_q_pow(e as usize);
    }
    for e in down {
        let ok = p.div_one_minus_q_pow(e as usize);
        debug_assert!(ok, "Mobius product must divide exactly");
    }
}

/// Divides `p` by `Phi_d` if exact; otherwise leaves it untouched.
pub(crate) fn try_div_phi(p: &mut QPoly, d: u32) -> bool {
    if p.is_zero() {
        return true;
    }
    let mut work = p.clone();
    if d == 1 {
        if !work.div_one_minus_q_pow(1) {
            return false;
        }
        *p = -work;
        return true;
    }
    let (up, down) = mobius_factors(d);
    for e in down {
        work.mul_one_minus_q_pow(e as usize);
    }
    for e in up {
        if !work.div_one_minus_q_pow(e as usize) {
            return false;
        }
    }
    *p = work;
    true
}

/// Factors a nonzero polynomial as `c * q^k * prod Phi_d^{e_d} * rest`,
/// where `rest` has no cyclotomic factor and no factor `q`.
pub fn split_cyclotomic(p: &QPoly) -> (usize, BTreeMap<u32, u32>, QPoly) {
    let mut rest = p.clone();
    let k = rest.low_degree().unwrap_or(0);
    rest = rest.shift_down(k).expect("low coefficients vanish");
    let mut exps = BTreeMap::new();
    let mut d = 1u32;
    loop {
        let deg = rest.degree().unwrap_or(0) as u32;
        if deg == 0 || d > 6 * deg + 6 {
            break;
        }
        if euler_phi(d) <= deg {
            while rest.degree().unwrap_or(0) as u32 >= euler_phi(d) && try_div_phi(&mut rest, d) {
                *exps.entry(d).or_insert(0) += 1;
            }
        }
        d += 1;
    }
    (k, exps, rest)
}

/// Denominator `q^q_pow * prod_d Phi_d^{e_d}`; monic by construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CycloDen {
    q_pow: u32,
    phi: BTreeMap<u32, u32>,
}

impl CycloDen {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.q_pow == 0 && self.phi.is_empty()
    }

    pub fn q_power(&self) -> u32 {
        self.q_pow
    }

    pub fn phi_exponents(&self) -> &BTreeMap<u32, u32> {
        &self.phi
    }

    pub fn valuation(&self, d: u32) -> u32 {
        self.phi.get(&d).copied().unwrap_or(0)
    }

    fn add_phi(&mut self, d: u32, e: u32) {
        if e > 0 {
            *self.phi.entry(d).or_insert(0) += e;
        }
    }

    fn lcm(&self, other: &CycloDen) -> CycloDen {
        let mut phi = self.phi.clone();
        for (&d, &e) in &other.phi {
            let slot = phi.entry(d).or_insert(0);
            *slot = (*slot).max(e);
        }
        CycloDen { q_pow: self.q_pow.max(other.q_pow), phi }
    }

    /// Multiplies `p` by `lcm / self`, where `lcm` is a multiple of `self`.
    fn lift(&self, lcm: &CycloDen, p: &QPoly) -> QPoly {
        let mut out = p.shift_up((lcm.q_pow - self.q_pow) as usize);
        for (&d, &e) in &lcm.phi {
            for _ in self.valuation(d)..e {
                mul_phi(&mut out, d);
            }
        }
        out
    }

    pub fn expand(&self) -> QPoly {
        let mut p = QPoly::q_pow(self.q_pow as usize);
        // larger factors first keeps intermediate products short
        for (&d, &e) in self.phi.iter().rev() {
            for _ in 0..e {
                mul_phi(&mut p, d);
            }
        }
        p
    }

    pub fn degree(&self) -> u64 {
        self.q_pow as u64 + self.phi.iter().map(|(&d, &e)| euler_phi(d) as u64 * e as u64).sum::<u64>()
    }

    fn eval(&self, x: &BigRational) -> Result<BigRational, ArithError> {
        let mut acc = BigRational::one();
        if self.q_pow > 0 {
            if x.is_zero() {
                return Err(ArithError::Pole(x.clone()));
            }
            acc *= num_traits::pow(x.clone(), self.q_pow as usize);
        }
        for (&d, &e) in &self.phi {
            let v = phi_value(d, x);
            if v.is_zero() {
                return Err(ArithError::Pole(x.clone()));
            }
            acc *= num_traits::pow(v, e as usize);
        }
        Ok(acc)
    }
}

/// `Phi_d(x)` for a rational `x`.
pub fn phi_value(d: u32, x: &BigRational) -> BigRational {
    if d == 1 {
        return x - BigRational::one();
    }
    let (up, down) = mobius_factors(d);
    let f = |e: u32| BigRational::one() - num_traits::pow(x.clone(), e as usize);
    let num: BigRational = up.iter().map(|&e| f(e)).product();
    let den: BigRational = down.iter().map(|&e| f(e)).product();
    if den.is_zero() {
        // x is a root of unity (x = ±1); fall back to the explicit polynomial
        return cyclotomic(d).expect("d >= 1").eval(x);
    }
    num / den
}

/// Rational function `num / den` whose denominator is a power of `q` times
/// cyclotomic polynomials. Reduction is lazy: arithmetic never cancels, and
/// [`CycloRat::reduce`] or [`CycloRat::to_qrat`] produce the lowest terms.
#[derive(Clone, Debug, Default)]
pub struct CycloRat {
    num: QPoly,
    den: CycloDen,
}

impl CycloRat {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(QPoly::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(QPoly::constant_int(c))
    }

    pub fn from_poly(num: QPoly) -> Self {
        CycloRat { num, den: CycloDen::one() }
    }

    pub fn from_parts(num: QPoly, den: CycloDen) -> Self {
        CycloRat { num, den }
    }

    /// `q^e` for any integer `e`.
    pub fn q_pow(e: i64) -> Self {
        if e >= 0 {
            Self::from_poly(QPoly::q_pow(e as usize))
        } else {
            CycloRat { num: QPoly::one(), den: CycloDen { q_pow: (-e) as u32, phi: BTreeMap::new() } }
        }
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &CycloDen {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplies by `(1 - q^j)^e`.
    pub fn mul_one_minus_q_pow(&mut self, j: u32, e: i64) {
        assert!(j >= 1);
        if e >= 0 {
            for _ in 0..e {
                self.num.mul_one_minus_q_pow(j as usize);
            }
        } else {
            for _ in 0..(-e) {
                // 1 - q^j = -prod_{d | j} Phi_d
                for d in divisors(j) {
                    self.den.add_phi(d, 1);
                }
                self.num = -std::mem::take(&mut self.num);
            }
        }
    }

    /// Multiplies by `q^e`.
    pub fn mul_q_pow(&mut self, e: i64) {
        if e >= 0 {
            let e = e as u32;
            let cancel = e.min(self.den.q_pow);
            self.den.q_pow -= cancel;
            self.num = self.num.shift_up((e - cancel) as usize);
        } else {
            self.den.q_pow += (-e) as u32;
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CycloRat { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &QPoly) -> Self {
        CycloRat { num: &self.num * p, den: self.den.clone() }
    }

    /// Exact division by a nonzero polynomial. Fails with
    /// [`ArithError::NonCyclotomic`] if the part of `p` coprime to all
    /// cyclotomic polynomials does not divide the numerator.
    pub fn div_poly(&self, p: &QPoly) -> Result<Self, ArithError> {
        if p.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let (k, exps, rest) = split_cyclotomic(p);
        let num = if rest.degree() == Some(0) {
            let c = rest.coeff(0);
            self.num.scale(&(BigRational::one() / c))
        } else {
            match self.num.exact_div(&rest) {
                Some(q) => q,
                None => return Err(ArithError::NonCyclotomic(rest)),
            }
        };
        let mut den = self.den.clone();
        den.q_pow += k as u32;
        for (d, e) in exps {
            den.add_phi(d, e);
        }
        Ok(CycloRat { num, den })
    }

    /// Exact division by another cyclotomic fraction (see [`Self::div_poly`]).
    pub fn checked_div(&self, rhs: &CycloRat) -> Result<Self, ArithError> {
        let mut out = self.div_poly(&rhs.num)?;
        // multiply by rhs.den, cancelling against our own denominator first
        let qc = rhs.den.q_pow.min(out.den.q_pow);
        out.den.q_pow -= qc;
        out.num = out.num.shift_up((rhs.den.q_pow - qc) as usize);
        for (&d, &e) in &rhs.den.phi {
            let have = out.den.valuation(d);
            let c = have.min(e);
            if c == have {
                out.den.phi.remove(&d);
            } else {
                out.den.phi.insert(d, have - c);
            }
            for _ in c..e {
                mul_phi(&mut out.num, d);
            }
        }
        Ok(out)
    }

    /// Cancels every common factor; the result is in lowest terms.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = CycloDen::one();
            return;
        }
        let low = self.num.low_degree().unwrap_or(0) as u32;
        let c = low.min(self.den.q_pow);
        if c > 0 {
            self.num = self.num.shift_down(c as usize).expect("low coefficients vanish");
            self.den.q_pow -= c;
        }
        let ds: Vec<u32> = self.den.phi.keys().copied().collect();
        for d in ds {
            let mut e = self.den.phi[&d];
            while e > 0 && self.num.degree().unwrap_or(0) as u32 >= euler_phi(d) && try_div_phi(&mut self.num, d) {
                e -= 1;
            }
            if e == 0 {
                self.den.phi.remove(&d);
            } else {
                self.den.phi.insert(d, e);
            }
        }
    }

    pub fn reduced(mut self) -> Self {
        self.reduce();
        self
    }

    /// Canonical general rational function.
    pub fn to_qrat(&self) -> QRat {
        let r = self.clone().reduced();
        // The expanded denominator is monic with integer coefficients and
        // coprime to the numerator after reduction.
        QRat::from_canonical_parts(r.num, r.den.expand())
    }

    /// The polynomial this fraction equals, if any.
    pub fn to_poly(&self) -> Option<QPoly> {
        let r = self.clone().reduced();
        r.den.is_one().then_some(r.num)
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational, ArithError> {
        let r = self.clone().reduced();
        let d = r.den.eval(x)?;
        Ok(r.num.eval(x) / d)
    }
}

impl<'a> Add<&'a CycloRat> for &'a CycloRat {
    type Output = CycloRat;
    fn add(self, rhs: &CycloRat) -> CycloRat {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            return CycloRat { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        let den = self.den.lcm(&rhs.den);
        let a = self.den.lift(&den, &self.num);
        let b = rhs.den.lift(&den, &rhs.num);
        CycloRat { num: &a + &b, den }
    }
}

impl<'a> Sub<&'a CycloRat> for &'a CycloRat {
    type Output = CycloRat;
    fn sub(self, rhs: &CycloRat) -> CycloRat {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CycloRat> for &'a CycloRat {
    type Output = CycloRat;
    fn mul(self, rhs: &CycloRat) -> CycloRat {
        if self.is_zero() || rhs.is_zero() {
            return CycloRat::zero();
        }
        let mut den = self.den.clone();
        den.q_pow += rhs.den.q_pow;
        for (&d, &e) in &rhs.den.phi {
            den.add_phi(d, e);
        }
        let mut out = CycloRat { num: &self.num * &rhs.num, den };
        // cheap cancellation of q powers keeps Laurent expressions tidy
        let low = out.num.low_degree().unwrap_or(0) as u32;
        let c = low.min(out.den.q_pow);
        if c > 0 {
            out.num = out.num.shift_down(c as usize).expect("low coefficients vanish");
            out.den.q_pow -= c;
        }
        out
    }
}

impl Neg for &CycloRat {
    type Output = CycloRat;
    fn neg(self) -> CycloRat {
        CycloRat { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for CycloRat {
    type Output = CycloRat;
    fn neg(self) -> CycloRat {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloRat> for CycloRat {
            type Output = CycloRat;
            fn $m(self, rhs: CycloRat) -> CycloRat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycloRat> for CycloRat {
            type Output = CycloRat;
            fn $m(self, rhs: &CycloRat) -> CycloRat {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CycloRat> for &'a CycloRat {
            type Output = CycloRat;
            fn $m(self, rhs: CycloRat) -> CycloRat {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<QPoly> for CycloRat {
    fn from(p: QPoly) -> Self {
        CycloRat::from_poly(p)
    }
}

impl From<i64> for CycloRat {
    fn from(c: i64) -> Self {
        CycloRat::from_int(c)
    }
}

impl std::iter::Sum for CycloRat {
    fn sum<I: Iterator<Item = CycloRat>>(iter: I) -> Self {
        iter.fold(CycloRat::zero(), |acc, x| &acc + &x)
    }
}

/// Sign-aware check used by tests and reports: `true` if the two fractions
/// are equal as rational functions.
pub fn cyclo_eq(a: &CycloRat, b: &CycloRat) -> bool {
    (a - b).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).unwrap(), p(&[-1, 1]));
        assert_eq!(cyclotomic(2).unwrap(), p(&[1, 1]));
        assert_eq!(cyclotomic(6).unwrap(), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12).unwrap(), p(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(0), Err(ArithError::ZeroCyclotomicIndex));
    }

    #[test]
    fn cyclotomic_products_give_q_pow_minus_one() {
        for m in 1..=30u32 {
            let prod = divisors(m)
                .into_iter()
                .fold(QPoly::one(), |acc, d| &acc * &cyclotomic(d).unwrap());
            let mut expect = QPoly::q_pow(m as usize);
            expect = &expect - &QPoly::one();
            assert_eq!(prod, expect, "m = {m}");
        }
    }

    #[test]
    fn phi_value_matches_polynomial() {
        let x = BigRational::new(5.into(), 3.into());
        for d in 1..=20 {
            assert_eq!(phi_value(d, &x), cyclotomic(d).unwrap().eval(&x));
        }
        let minus_one = BigRational::from_integer((-1).into());
        assert!(phi_value(2, &minus_one).is_zero());
        assert_eq!(phi_value(4, &minus_one), BigRational::from_integer(2.into()));
    }

    #[test]
    fn split_recovers_factors() {
        // 3 q^2 (q^2 - 1)(q^2 + q + 1)(q + 2)
        let f = &(&(&QPoly::from_i64s(&[0, 0, 3]) * &p(&[-1, 0, 1])) * &p(&[1, 1, 1])) * &p(&[2, 1]);
        let (k, exps, rest) = split_cyclotomic(&f);
        assert_eq!(k, 2);
        assert_eq!(exps, BTreeMap::from([(1, 1), (2, 1), (3, 1)]));
        assert_eq!(rest, p(&[6, 3]));
    }

    #[test]
    fn cyclo_rat_sum_cancels() {
        let mut a = CycloRat::one();
        a.mul_one_minus_q_pow(1, -1);
        let b = -&a;
        assert!((&a + &b).is_zero());
        // 1/(1-q) - 1/(1-q^2) = q/(1-q^2)
        let mut c = CycloRat::one();
        c.mul_one_minus_q_pow(2, -1);
        let diff = (&a - &c).to_qrat();
        let mut expect = CycloRat::q_pow(1);
        expect.mul_one_minus_q_pow(2, -1);
        assert_eq!(diff, expect.to_qrat());
    }

    #[test]
    fn laurent_powers_cancel() {
        let x = &CycloRat::q_pow(-3) * &CycloRat::q_pow(5);
        assert_eq!(x.to_poly(), Some(QPoly::q_pow(2)));
        let mut y = CycloRat::q_pow(-2);
        y.mul_q_pow(2);
        assert_eq!(y.to_poly(), Some(QPoly::one()));
    }

    #[test]
    fn div_poly_handles_noncyclotomic_part() {
        // (q+2)(q^2-1) / ((q+2)(q-1)) = q + 1
        let num = &p(&[2, 1]) * &p(&[-1, 0, 1]);
        let x = CycloRat::from_poly(num);
        let r = x.div_poly(&(&p(&[2, 1]) * &p(&[-1, 1]))).unwrap();
        assert_eq!(r.to_poly(), Some(p(&[1, 1])));
        let err = CycloRat::one().div_poly(&p(&[2, 1])).unwrap_err();
        assert!(matches!(err, ArithError::NonCyclotomic(_)));
    }
}

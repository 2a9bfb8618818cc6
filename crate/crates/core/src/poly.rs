//! Dense univariate polynomials in `q` with exact rational coefficients.
//!
//! A [`QPoly`] is stored as an integer coefficient vector over a single
//! positive common denominator. Almost every polynomial this crate produces
//! has integer coefficients, so the common case never touches rational
//! arithmetic; the rational view is available through [`QPoly::coeff`] and
//! [`QPoly::coeffs`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Below this operand length products use the schoolbook method.
const KRONECKER_THRESHOLD: usize = 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    /// Integer numerators, ascending degree, no trailing zeros.
    num: Vec<BigInt>,
    /// Positive, coprime to the content of `num`; 1 for the zero polynomial.
    den: BigInt,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { num: Vec::new(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::constant_int(1)
    }

    pub fn constant_int(c: i64) -> Self {
        Self::from_bigints(vec![BigInt::from(c)])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_rationals(vec![c])
    }

    /// The monomial `q^d`.
    pub fn q_pow(d: usize) -> Self {
        let mut num = vec![BigInt::zero(); d + 1];
        num[d] = BigInt::one();
        QPoly { num, den: BigInt::one() }
    }

    /// `1 - q^j`; for `j = 0` this is the zero polynomial.
    pub fn one_minus_q_pow(j: usize) -> Self {
        if j == 0 {
            return Self::zero();
        }
        let mut num = vec![BigInt::zero(); j + 1];
        num[0] = BigInt::one();
        num[j] = -BigInt::one();
        QPoly { num, den: BigInt::one() }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_bigints(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_bigints(num: Vec<BigInt>) -> Self {
        Self::from_parts(num, BigInt::one())
    }

    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(num, den)
    }

    /// Builds `num / den` and brings it to canonical form.
    ///
    /// Panics if `den` is zero.
    pub(crate) fn from_parts(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero coefficient denominator");
        trim(&mut num);
        if num.is_empty() {
            return Self::zero();
        }
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -std::mem::take(c));
        }
        if !den.is_one() {
            let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
            if !g.is_one() {
                num.iter_mut().for_each(|c| *c /= &g);
                den /= &g;
            }
        }
        QPoly { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.num[0].is_one() && self.den.is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    /// Number of stored coefficients (`degree + 1`, or 0 for zero).
    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.den.is_one()
    }

    /// Integer numerators sharing the common denominator [`Self::denom`].
    pub fn numer_coeffs(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        match self.num.get(i) {
            Some(c) => BigRational::new(c.clone(), self.den.clone()),
            None => BigRational::zero(),
        }
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn leading_coeff(&self) -> Option<BigRational> {
        self.degree().map(|d| self.coeff(d))
    }

    /// Lowest index carrying a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.num.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_parts(
            self.num.iter().map(|x| x * c.numer()).collect(),
            &self.den * c.denom(),
        )
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_parts(self.num.iter().map(|x| x * c).collect(), self.den.clone())
    }

    /// Multiplies by `q^d`.
    pub fn shift_up(&self, d: usize) -> Self {
        if self.is_zero() || d == 0 {
            return self.clone();
        }
        let mut num = vec![BigInt::zero(); d];
        num.extend(self.num.iter().cloned());
        QPoly { num, den: self.den.clone() }
    }

    /// Divides by `q^d`; `None` unless the low `d` coefficients vanish.
    pub fn shift_down(&self, d: usize) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.num.iter().take(d).any(|c| !c.is_zero()) || d > self.num.len() {
            return None;
        }
        Some(QPoly { num: self.num[d..].to_vec(), den: self.den.clone() })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by `1 - q^j` in place (`j >= 1`), linear time.
    pub fn mul_one_minus_q_pow(&mut self, j: usize) {
        assert!(j >= 1);
        if self.is_zero() {
            return;
        }
        let n = self.num.len();
        self.num.resize(n + j, BigInt::zero());
        for i in (j..n + j).rev() {
            let (lo, hi) = self.num.split_at_mut(i);
            hi[0] -= &lo[i - j];
        }
        trim(&mut self.num);
    }

    /// Divides by `1 - q^j` in place if the division is exact; on failure the
    /// polynomial is left untouched and `false` is returned.
    pub fn div_one_minus_q_pow(&mut self, j: usize) -> bool {
        assert!(j >= 1);
        if self.is_zero() {
            return true;
        }
        let n = self.num.len();
        if n <= j {
            return false;
        }
        // Power-series quotient g_i = f_i + g_{i-j}; exact iff the top j
        // entries of the series vanish.
        let mut g = self.num.clone();
        for i in j..n {
            let (lo, hi) = g.split_at_mut(i);
            hi[0] += &lo[i - j];
        }
        if g[n - j..].iter().any(|c| !c.is_zero()) {
            return false;
        }
        g.truncate(n - j);
        trim(&mut g);
        self.num = g;
        true
    }

    /// Euclidean division over Q: returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let Some(sd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if sd < dd {
            return (Self::zero(), self.clone());
        }
        // Work over Z: scale self so every quotient step stays integral.
        let lc = divisor.num[dd].clone();
        let steps = (sd - dd + 1) as u32;
        let scale = num_traits::pow(lc.clone(), steps as usize);
        let mut rem: Vec<BigInt> = self.num.iter().map(|c| c * &scale).collect();
        let mut quo = vec![BigInt::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let top = std::mem::take(&mut rem[i + dd]);
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(&lc);
            debug_assert!(r.is_zero());
            for (j, d) in divisor.num.iter().enumerate().take(dd) {
                if !d.is_zero() {
                    rem[i + j] -= &qc * d;
                }
            }
            quo[i] = qc;
        }
        rem.truncate(dd);
        // quotient = quo * divisor.den / (self.den * scale); same scale for rem.
        let qden = &self.den * &scale;
        let quotient = Self::from_parts(quo.into_iter().map(|c| c * &divisor.den).collect(), qden.clone());
        let remainder = Self::from_parts(rem, qden);
        (quotient, remainder)
    }

    /// Exact quotient `self / divisor`, or `None` when the remainder is nonzero.
    pub fn exact_div(&self, divisor: &QPoly) -> Option<QPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        // Homogeneous Horner over the integers: sum c_i p^i r^(d-i) / r^d.
        let (p, r) = (x.numer(), x.denom());
        let mut coeffs = self.num.iter().rev();
        let mut acc = coeffs.next().cloned().unwrap_or_default();
        let mut rpow = BigInt::one();
        for c in coeffs {
            rpow *= r;
            acc = acc * p + c * &rpow;
        }
        BigRational::new(acc, rpow * &self.den)
    }

    /// The polynomial `p(-q)`.
    pub fn reflect(&self) -> Self {
        let num = self
            .num
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        QPoly { num, den: self.den.clone() }
    }

    /// Integer content with the sign of the leading coefficient, and the
    /// primitive integer part. Defined on integer polynomials only.
    pub(crate) fn int_content_primitive(num: &[BigInt]) -> (BigInt, Vec<BigInt>) {
        let mut g = num.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return (BigInt::zero(), Vec::new());
        }
        if num.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let pp = num.iter().map(|c| c / &g).collect();
        (g, pp)
    }

    /// Splits off the rational content: `self = content * primitive` where
    /// the primitive part has integer coefficients, content 1 and a positive
    /// leading coefficient.
    pub fn content_primitive(&self) -> (BigRational, QPoly) {
        if self.is_zero() {
            return (BigRational::zero(), Self::zero());
        }
        let (g, pp) = Self::int_content_primitive(&self.num);
        (
            BigRational::new(g, self.den.clone()),
            QPoly { num: pp, den: BigInt::one() },
        )
    }
}

impl Default for QPoly {
    fn default() -> Self {
        QPoly::zero()
    }
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn add_vecs(a: &[BigInt], b: &[BigInt], sa: &BigInt, sb: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x * sa + y * sb,
            (Some(x), None) => x * sa,
            (None, Some(y)) => y * sb,
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    out
}

fn add_same_den(a: &[BigInt], b: &[BigInt], negate_b: bool) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigInt> = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) if negate_b => x - y,
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) if negate_b => -y,
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    out
}

/// Product of two integer coefficient vectors.
pub(crate) fn mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) < KRONECKER_THRESHOLD {
        mul_schoolbook(a, b)
    } else {
        mul_kronecker(a, b)
    }
}

pub(crate) fn mul_schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|c| c.bits()).max().unwrap_or(0)
}

/// Kronecker substitution: evaluate both operands at `2^B`, multiply the
/// resulting integers and read the balanced base-`2^B` digits back off.
pub(crate) fn mul_kronecker(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let min_len = a.len().min(b.len()) as u64;
    let guard = 64 - min_len.leading_zeros() as u64;
    let need = max_bits(a) + max_bits(b) + guard + 2;
    let words = need.div_ceil(32) as usize;
    let slot_bits = (words * 32) as u64;

    let pa = pack(a, words);
    let pb = pack(b, words);
    let prod = pa * pb;

    let out_len = a.len() + b.len() - 1;
    let (sign, mag) = prod.into_parts();
    let digits = mag.to_u32_digits();
    let half = BigInt::one() << (slot_bits - 1);
    let full = BigInt::one() << slot_bits;
    let mut out = Vec::with_capacity(out_len);
    let mut carry = BigInt::zero();
    for i in 0..out_len {
        let lo = (i * words).min(digits.len());
        let hi = ((i + 1) * words).min(digits.len());
        let mut v = BigInt::from(BigUint::from_slice(&digits[lo..hi])) + &carry;
        if v >= half {
            v -= &full;
            carry = BigInt::one();
        } else {
            carry = BigInt::zero();
        }
        out.push(v);
    }
    debug_assert!(carry.is_zero());
    if sign == Sign::Minus {
        out.iter_mut().for_each(|c| *c = -std::mem::take(c));
    }
    out
}

fn pack(v: &[BigInt], words: usize) -> BigInt {
    let mut pos = vec![0u32; v.len() * words];
    let mut neg = vec![0u32; v.len() * words];
    for (i, c) in v.iter().enumerate() {
        let (sign, digits) = c.to_u32_digits();
        let target = if sign == Sign::Minus { &mut neg } else { &mut pos };
        target[i * words..i * words + digits.len()].copy_from_slice(&digits);
    }
    BigInt::from(BigUint::new(pos)) - BigInt::from(BigUint::new(neg))
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        if self.den == rhs.den {
            QPoly::from_parts(add_same_den(&self.num, &rhs.num, false), self.den.clone())
        } else {
            let den = &self.den * &rhs.den;
            QPoly::from_parts(add_vecs(&self.num, &rhs.num, &rhs.den, &self.den), den)
        }
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        if self.den == rhs.den {
            QPoly::from_parts(add_same_den(&self.num, &rhs.num, true), self.den.clone())
        } else {
            let den = &self.den * &rhs.den;
            let neg = -&self.den;
            QPoly::from_parts(add_vecs(&self.num, &rhs.num, &rhs.den, &neg), den)
        }
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let num = mul_int(&self.num, &rhs.num);
        if self.den.is_one() && rhs.den.is_one() {
            QPoly { num, den: BigInt::one() }
        } else {
            QPoly::from_parts(num, &self.den * &rhs.den)
        }
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QPoly> for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QPoly> for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: &QPoly) -> QPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<QPoly> for &'a QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

impl PartialOrd for QPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order (degree first), used only for deterministic
/// sorting.
impl Ord for QPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num
            .len()
            .cmp(&other.num.len())
            .then_with(|| self.num.iter().rev().cmp(other.num.iter().rev()))
            .then_with(|| self.den.cmp(&other.den))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.num.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let r = BigRational::new(c.clone(), self.den.clone());
            let neg = r.is_negative();
            let a = r.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = a.is_one();
            match (i, unit) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}*q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{a}*q^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

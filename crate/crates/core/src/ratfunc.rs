//! Canonical rational functions in `q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ArithError;
use crate::poly::QPoly;

/// `num / den` in lowest terms.
///
/// The denominator has integer coefficients, content 1 and a positive
/// leading coefficient; the numerator carries all rational content. Two
/// `QRat`s are equal as rational functions exactly when they are
/// structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Why [`QRat::as_integer_poly`] rejected a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotIntegral {
    /// The reduced denominator is not constant.
    Denominator(QPoly),
    /// A coefficient of the polynomial is not an integer.
    Coefficient { index: usize, value: BigRational },
}

impl fmt::Display for NotIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotIntegral::Denominator(d) => write!(f, "denominator {d} remains"),
            NotIntegral::Coefficient { index, value } => {
                write!(f, "coefficient of q^{index} is {value}")
            }
        }
    }
}

impl QRat {
    pub fn zero() -> Self {
        Self::from_poly(QPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(QPoly::one())
    }

    pub fn from_poly(p: QPoly) -> Self {
        QRat { num: p, den: QPoly::one() }
    }

    /// Reduces `num / den` to canonical form.
    pub fn new(num: QPoly, den: QPoly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        // num/den = (N * dden) / (D * nden) with integer N, D.
        let n: Vec<BigInt> = num.numer_coeffs().iter().map(|c| c * den.denom()).collect();
        let d: Vec<BigInt> = den.numer_coeffs().iter().map(|c| c * num.denom()).collect();
        let g = gcd_primitive(&n, &d);
        let (n, d) = if g.len() > 1 {
            let g = QPoly::from_bigints(g);
            (
                QPoly::from_bigints(n).exact_div(&g).expect("gcd divides numerator"),
                QPoly::from_bigints(d).exact_div(&g).expect("gcd divides denominator"),
            )
        } else {
            (QPoly::from_bigints(n), QPoly::from_bigints(d))
        };
        let (c, dp) = QPoly::int_content_primitive(d.numer_coeffs());
        let num = QPoly::from_parts(n.numer_coeffs().to_vec(), c);
        Ok(QRat { num, den: QPoly::from_bigints(dp) })
    }

    /// Caller guarantees canonical form (monic or primitive positive-leading
    /// integer denominator, coprime to the numerator).
    pub(crate) fn from_canonical_parts(num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        debug_assert!(den.has_integer_coeffs());
        QRat { num, den }
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn checked_div(&self, rhs: &QRat) -> Result<QRat, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        self.mul_cross(&rhs.den, &rhs.num)
    }

    pub fn inv(&self) -> Result<QRat, ArithError> {
        QRat::one().checked_div(self)
    }

    /// `self * n2 / d2` with cross cancellation.
    fn mul_cross(&self, n2: &QPoly, d2: &QPoly) -> Result<QRat, ArithError> {
        if d2.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        QRat::new(&self.num * n2, &self.den * d2)
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational, ArithError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(ArithError::Pole(x.clone()));
        }
        Ok(self.num.eval(x) / d)
    }

    /// The integer-coefficient polynomial this value equals, or the reason
    /// it is not one.
    pub fn as_integer_poly(&self) -> Result<QPoly, NotIntegral> {
        if !self.is_polynomial() {
            return Err(NotIntegral::Denominator(self.den.clone()));
        }
        let p = self.num.scale(&(BigRational::one() / self.den.coeff(0)));
        if !p.has_integer_coeffs() {
            let (index, value) = p
                .coeffs()
                .into_iter()
                .enumerate()
                .find(|(_, c)| !c.is_integer())
                .expect("some coefficient is fractional");
            return Err(NotIntegral::Coefficient { index, value });
        }
        Ok(p)
    }

    pub fn as_poly(&self) -> Option<QPoly> {
        self.is_polynomial()
            .then(|| self.num.scale(&(BigRational::one() / self.den.coeff(0))))
    }
}

/// Applies one field operation.
pub fn rat_arith(a: &QRat, b: &QRat, op: RatOp) -> Result<QRat, ArithError> {
    match op {
        RatOp::Add => Ok(a + b),
        RatOp::Sub => Ok(a - b),
        RatOp::Mul => Ok(a * b),
        RatOp::Div => a.checked_div(b),
    }
}

/// Primitive gcd of two integer polynomials (positive leading coefficient),
/// by the primitive remainder sequence.
pub(crate) fn gcd_primitive(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (_, mut a) = QPoly::int_content_primitive(a);
    let (_, mut b) = QPoly::int_content_primitive(b);
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = pseudo_rem(&a, &b);
        let (_, rp) = QPoly::int_content_primitive(&r);
        a = b;
        b = rp;
    }
    a
}

fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lr = r.last().cloned().expect("nonempty");
        let g = lr.gcd(lb);
        let (mr, mb) = (lb / &g, &lr / &g);
        for c in r.iter_mut() {
            *c *= &mr;
        }
        for (j, c) in b.iter().enumerate() {
            r[k + j] -= &mb * c;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        // keep coefficients small inside the loop
        r = QPoly::int_content_primitive(&r).1;
    }
    r
}

impl<'a> Add<&'a QRat> for &'a QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        if self.den == rhs.den {
            return QRat::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        QRat::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
            .expect("nonzero den")
    }
}

impl<'a> Sub<&'a QRat> for &'a QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QRat> for &'a QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        self.mul_cross(&rhs.num, &rhs.den).expect("nonzero den")
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QRat> for QRat {
            type Output = QRat;
            fn $m(self, rhs: QRat) -> QRat {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<QPoly> for QRat {
    fn from(p: QPoly) -> Self {
        QRat::from_poly(p)
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRat({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    fn r(n: &[i64], d: &[i64]) -> QRat {
        QRat::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(r(&[-1, 0, 1], &[-1, 1]), QRat::from_poly(p(&[1, 1])));
        assert_eq!(r(&[0], &[1, 0, 0, 7]), QRat::zero());
        assert_eq!(r(&[1, 0, 0, -1], &[1, -1]), QRat::from_poly(p(&[1, 1, 1])));
        assert_eq!(QRat::new(p(&[1]), QPoly::zero()), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn canonical_denominator_is_primitive_positive() {
        let x = r(&[3], &[-2, -4]);
        assert_eq!(x.denom(), &p(&[1, 2]));
        assert_eq!(x.numer().coeff(0), BigRational::new((-3).into(), 2.into()));
    }

    #[test]
    fn arithmetic_examples() {
        let a = r(&[1], &[1, -1]);
        assert!((&a + &(-&a)).is_zero());
        let b = r(&[0, 1], &[1, -1]);
        let c = r(&[1, -1], &[0, 1]);
        assert_eq!(&b * &c, QRat::one());
        let d = r(&[1], &[1, 0, -1]);
        let e = QRat::new(p(&[1]), &p(&[1, -1]) * &p(&[1, 1])).unwrap();
        assert!((&d - &e).is_zero());
        assert_eq!(rat_arith(&a, &QRat::zero(), RatOp::Div), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn integer_poly_detection() {
        assert_eq!(r(&[0, 1, 1], &[0, 1]).as_integer_poly(), Ok(p(&[1, 1])));
        let half = QRat::from_poly(QPoly::from_rationals(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new(1.into(), 2.into()),
        ]));
        assert!(matches!(half.as_integer_poly(), Err(NotIntegral::Coefficient { index: 0, .. })));
        assert!(matches!(r(&[1], &[1, 1]).as_integer_poly(), Err(NotIntegral::Denominator(_))));
    }

    #[test]
    fn eval_examples() {
        let two = BigRational::from_integer(2.into());
        assert_eq!(r(&[1], &[1, -1]).eval(&two).unwrap(), BigRational::from_integer((-1).into()));
        assert_eq!(r(&[0, 1], &[1, -2, 1]).eval(&two).unwrap(), two);
        assert_eq!(r(&[0, 2, 1], &[1, -1]).eval(&two).unwrap(), BigRational::from_integer((-8).into()));
        assert!(matches!(r(&[1], &[-2, 1]).eval(&two), Err(ArithError::Pole(_))));
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = &p(&[1, 1]) * &p(&[2, 0, 3]);
        let g = &p(&[1, 1]) * &p(&[5, 7]);
        let d = gcd_primitive(f.numer_coeffs(), g.numer_coeffs());
        assert_eq!(d, vec![BigInt::one(), BigInt::one()]);
    }
}

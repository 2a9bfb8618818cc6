//! Certified evaluation of the target constants, the accelerated series and
//! the convergent errors at a concrete rational point `q0` with `|q0| > 1`.
//!
//! Values are fixed-point intervals `[lo, hi] * 2^-bits` with outward
//! rounding. Every series term is an exact rational rounded outward, and
//! every truncation carries an explicit tail bound.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::SchemeId;
use crate::sequence::ConvergentRecord;
use crate::serial::{format_rational, parse_rational};

/// Closed interval `[lo, hi] * 2^-bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn floor_scaled(r: &BigRational, bits: u32) -> BigInt {
    (r.numer() << bits as usize).div_floor(r.denom())
}

fn ceil_scaled(r: &BigRational, bits: u32) -> BigInt {
    -((-r.numer()) << bits as usize).div_floor(r.denom())
}

impl Interval {
    pub fn zero(bits: u32) -> Self {
        Interval { lo: BigInt::zero(), hi: BigInt::zero(), bits }
    }

    /// Smallest interval at this precision containing `r`.
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        Interval { lo: floor_scaled(r, bits), hi: ceil_scaled(r, bits), bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.bits))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.bits))
    }

    pub fn midpoint(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, pow2(self.bits + 1))
    }

    pub fn radius(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, pow2(self.bits + 1))
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        &self.lower() <= r && r <= &self.upper()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.sign() != Sign::Plus && self.hi.sign() != Sign::Minus
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Widens both ends by `r >= 0`.
    pub fn widen(&mut self, r: &BigRational) {
        let u = ceil_scaled(r, self.bits);
        self.lo -= &u;
        self.hi += &u;
    }

    pub fn add_rational(&mut self, r: &BigRational) {
        self.lo += floor_scaled(r, self.bits);
        self.hi += ceil_scaled(r, self.bits);
    }

    /// Lower bound of `|x|` over the interval, zero if it contains zero.
    pub fn abs_lower(&self) -> BigRational {
        if self.contains_zero() {
            BigRational::zero()
        } else if self.lo.is_positive() {
            self.lower()
        } else {
            -self.upper()
        }
    }

    pub fn abs_upper(&self) -> BigRational {
        self.lower().abs().max(self.upper().abs())
    }

    /// `self - value`, with `value` exact.
    pub fn sub_rational(&self, value: &BigRational) -> Interval {
        Interval {
            lo: &self.lo - ceil_scaled(value, self.bits),
            hi: &self.hi - floor_scaled(value, self.bits),
            bits: self.bits,
        }
    }

    /// Decimal record with `digits` places after the point; the radius
    /// covers the interval and the rounding of the midpoint.
    pub fn to_record(&self, digits: u32) -> ValueRecord {
        let scale = BigInt::from(10u32).pow(digits);
        let mid = self.midpoint();
        let scaled = &mid * BigRational::from_integer(scale.clone());
        let rounded = scaled.round().to_integer();
        let shown = BigRational::new(rounded.clone(), scale);
        let radius = self.radius() + (&shown - &mid).abs();
        ValueRecord {
            value: format_fixed(&rounded, digits),
            radius: format_upper_sci(&radius),
            precision_bits: self.bits,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_record(30);
        write!(f, "{} +/- {}", r.value, r.radius)
    }
}

/// A value with an explicit error radius, as serialized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueRecord {
    pub value: String,
    pub radius: String,
    pub precision_bits: u32,
}

fn format_fixed(scaled: &BigInt, digits: u32) -> String {
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let d = digits as usize;
    let s = if s.len() <= d { format!("{}{s}", "0".repeat(d + 1 - s.len())) } else { s };
    let (int, frac) = s.split_at(s.len() - d);
    let sign = if neg { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// `m.mme-x` with the mantissa rounded up, so the string never understates.
pub fn format_upper_sci(r: &BigRational) -> String {
    sci(r, 3, true)
}

/// Signed scientific notation with `sig` significant digits, rounded to nearest.
pub fn format_sci(r: &BigRational, sig: u32) -> String {
    let s = sci(r, sig.max(1), false);
    if r.is_negative() {
        format!("-{s}")
    } else {
        s
    }
}

fn sci(r: &BigRational, sig: u32, up: bool) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let r = r.abs();
    // e with 10^e <= r < 10^(e+1), from a float estimate corrected exactly
    let mut e = (log2_rational(&r) / std::f64::consts::LOG2_10).floor() as i64;
    let ten = BigRational::from_integer(10.into());
    let p10 = |e: i64| {
        let p = num_traits::pow(ten.clone(), e.unsigned_abs() as usize);
        if e >= 0 {
            p
        } else {
            p.recip()
        }
    };
    while p10(e) > r {
        e -= 1;
    }
    while p10(e + 1) <= r {
        e += 1;
    }
    let scaled = &r / p10(e - sig as i64 + 1);
    let m = if up { scaled.ceil() } else { scaled.round() }.to_integer();
    let (m, e) = if m >= BigInt::from(10u32).pow(sig) { (m / 10, e + 1) } else { (m, e) };
    let ms = m.to_string();
    if ms.len() == 1 {
        format!("{ms}e{e}")
    } else {
        format!("{}.{}e{}", &ms[..1], &ms[1..], e)
    }
}

fn log2_big(x: &BigInt) -> f64 {
    let b = x.bits();
    if b <= 900 {
        x.to_f64().expect("finite").abs().log2()
    } else {
        let shift = b - 64;
        (x >> shift as usize).to_f64().expect("finite").abs().log2() + shift as f64
    }
}

/// `log2 |r|` for nonzero `r`, to double precision.
pub fn log2_rational(r: &BigRational) -> f64 {
    log2_big(r.numer()) - log2_big(r.denom())
}

/// Working precision and base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    pub bits: u32,
    /// Guaranteed tail majorants when set; otherwise the first omitted term
    /// stands in for the tail.
    pub rigorous: bool,
    pub q: BigRational,
    pub max_terms: u32,
}

impl PrecisionContext {
    pub fn new(q: BigRational, bits: u32) -> Result<Self> {
        if q.abs() <= BigRational::one() {
            return Err(Error::usage(format!(
                "base point q = {} must satisfy |q| > 1",
                format_rational(&q)
            )));
        }
        if bits < 16 {
            return Err(Error::usage(format!("precision {bits} bits is below the minimum of 16")));
        }
        Ok(PrecisionContext { bits, rigorous: true, q, max_terms: 100_000 })
    }

    pub fn parse(q: &str, bits: u32) -> Result<Self> {
        let q = parse_rational(q).map_err(|_| Error::usage(format!("cannot parse q = `{q}`")))?;
        Self::new(q, bits)
    }

    /// Bits needed for `digits` decimal digits plus a guard margin.
    pub fn bits_for_digits(digits: u32) -> u32 {
        (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }

    fn target_width(&self) -> BigRational {
        BigRational::new(BigInt::one(), pow2(self.bits.saturating_sub(4)))
    }

    /// `L = 1 / (1 - 1/|q|)`.
    fn l_const(&self) -> BigRational {
        let a = self.q.abs();
        &a / (&a - BigRational::one())
    }
}

/// Majorant `L^{ln*n + l0} |q|^{(qa*n^2 + qb*n) / 2}` for the `n`-th term.
#[derive(Clone, Copy, Debug)]
struct Majorant {
    ln: i64,
    l0: i64,
    qa: i64,
    qb: i64,
}

impl Majorant {
    fn at(&self, ctx: &PrecisionContext, n: u32) -> BigRational {
        let n = n as i64;
        let l = rpow(&ctx.l_const(), self.ln * n + self.l0);
        let e2 = self.qa * n * n + self.qb * n;
        let a = ctx.q.abs();
        // |q|^{e2/2} bounded above by rounding the exponent up
        let e = if e2 >= 0 { (e2 + 1) / 2 } else { e2 / 2 };
        l * rpow(&a, e)
    }
}

fn rpow(x: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    /// The defining series.
    Defining,
    /// The single-Pochhammer accelerated form.
    Accelerated1,
    /// The central-binomial accelerated form.
    Accelerated2,
}

impl Series {
    pub const ALL: [Series; 3] = [Series::Defining, Series::Accelerated1, Series::Accelerated2];

    pub fn name(self) -> &'static str {
        match self {
            Series::Defining => "defining",
            Series::Accelerated1 => "accelerated1",
            Series::Accelerated2 => "accelerated2",
        }
    }

    pub fn from_variant(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Series::Accelerated1),
            2 => Ok(Series::Accelerated2),
            _ => Err(Error::usage(format!("variant must be 1 or 2, got {v}"))),
        }
    }

    fn majorant(self, s: SchemeId) -> Option<Majorant> {
        let m = |ln, l0, qa, qb| Some(Majorant { ln, l0, qa, qb });
        match (self, s) {
            (Series::Defining, _) => None,
            (Series::Accelerated1, SchemeId::Harmonic) => m(1, 1, -1, -1),
            (Series::Accelerated2, SchemeId::Harmonic) => m(5, 2, -3, 1),
            (Series::Accelerated1, SchemeId::Ln2) => m(2, 1, -1, -1),
            (Series::Accelerated2, SchemeId::Ln2) => m(6, 3, -3, 1),
        }
    }
}

/// Exact terms `t(1), t(2), ...` of a series at `q`.
struct Terms<'a> {
    s: SchemeId,
    series: Series,
    q: &'a BigRational,
    n: u32,
    qn: BigRational,
    /// `(q)_n`, `(q)_{2n}`, `(q^2)_n`
    poch: BigRational,
    poch2n: BigRational,
    poch_even: BigRational,
}

impl<'a> Terms<'a> {
    fn new(s: SchemeId, series: Series, q: &'a BigRational) -> Self {
        let one = BigRational::one();
        Terms { s, series, q, n: 0, qn: one.clone(), poch: one.clone(), poch2n: one.clone(), poch_even: one }
    }
}

impl Iterator for Terms<'_> {
    type Item = BigRational;
    fn next(&mut self) -> Option<BigRational> {
        let one = BigRational::one();
        self.n += 1;
        let n = self.n;
        self.qn *= self.q;
        let qn = &self.qn;
        let q2n = qn * qn;
        if self.series != Series::Defining {
            self.poch *= &one - qn;
            // (q)_{2n} = (q)_{2n-2} (1 - q^{2n-1}) (1 - q^{2n})
            self.poch2n *= (&one - &q2n / self.q) * (&one - &q2n);
            self.poch_even *= &one - &q2n;
        }
        let odd = n % 2 == 1;
        let t = match (self.series, self.s) {
            (Series::Defining, _) => {
                let t = (qn - &one).recip();
                if self.s == SchemeId::Ln2 && odd {
                    -t
                } else {
                    t
                }
            }
            (Series::Accelerated1, SchemeId::Harmonic) => qn / ((&one - qn) * &self.poch),
            (Series::Accelerated1, SchemeId::Ln2) => {
                qn * &self.poch / ((&one - qn) * &self.poch_even)
            }
            (Series::Accelerated2, _) => {
                // binom(2n, n) (q)_n = (q)_{2n} / (q)_n
                let binom_poch = &self.poch2n / &self.poch;
                match self.s {
                    SchemeId::Harmonic => (&one - qn - &q2n) / ((qn - &one) * binom_poch),
                    SchemeId::Ln2 => {
                        let v = &self.poch * (&one - &q2n * qn)
                            / ((&one - qn) * (&one - qn) * binom_poch * &self.poch_even)
                            * &self.poch;
                        if odd {
                            v
                        } else {
                            -v
                        }
                    }
                }
            }
        };
        Some(t)
    }
}

/// Tail bound after summing terms `1..=n` of the defining series.
fn defining_tail(s: SchemeId, ctx: &PrecisionContext, n: u32) -> BigRational {
    let a = ctx.q.abs();
    if s == SchemeId::Ln2 && ctx.q.is_positive() {
        // alternating with decreasing magnitudes: the first omitted term
        return (rpow(&ctx.q, n as i64 + 1) - BigRational::one()).recip();
    }
    // |1/(q^k - 1)| <= L |q|^{-k}, summed geometrically from k = n+1
    ctx.l_const() * rpow(&a, -(n as i64)) / (&a - BigRational::one())
}

/// Partial sum of `terms` terms with its tail bound.
fn sum_series(s: SchemeId, series: Series, ctx: &PrecisionContext, terms: u32) -> (Interval, BigRational) {
    let mut acc = Interval::zero(ctx.bits);
    for t in Terms::new(s, series, &ctx.q).take(terms as usize) {
        acc.add_rational(&t);
    }
    let tail = tail_after(s, series, ctx, terms);
    (acc, tail)
}

fn tail_after(s: SchemeId, series: Series, ctx: &PrecisionContext, n: u32) -> BigRational {
    if !ctx.rigorous {
        let t = Terms::new(s, series, &ctx.q).nth(n as usize).expect("infinite");
        return t.abs();
    }
    match series.majorant(s) {
        None => defining_tail(s, ctx, n),
        Some(m) => {
            // ratios M(k+1)/M(k) decrease, so once one is <= 1/2 the tail
            // is at most twice its first majorant
            let next = m.at(ctx, n + 1);
            let ratio = m.at(ctx, n + 2) / &next;
            if ratio * BigRational::from_integer(2.into()) <= BigRational::one() {
                next * BigRational::from_integer(2.into())
            } else {
                // not yet in the geometric regime: no finite bound claimed
                BigRational::from_integer(BigInt::one() << 64usize)
            }
        }
    }
}

/// The series value to the context's precision.
pub fn eval_series(s: SchemeId, series: Series, ctx: &PrecisionContext) -> Result<Interval> {
    let goal = ctx.target_width();
    let mut acc = Interval::zero(ctx.bits);
    for (i, t) in Terms::new(s, series, &ctx.q).enumerate().take(ctx.max_terms as usize) {
        acc.add_rational(&t);
        let n = i as u32 + 1;
        let tail = tail_after(s, series, ctx, n);
        if tail <= goal {
            acc.widen(&tail);
            return Ok(acc);
        }
    }
    Err(Error::Precision(format!(
        "{s} {series:?} series did not reach 2^-{} within {} terms",
        ctx.bits.saturating_sub(4),
        ctx.max_terms
    )))
}

/// The target constant from its defining series.
pub fn eval_target(s: SchemeId, ctx: &PrecisionContext) -> Result<Interval> {
    eval_series(s, Series::Defining, ctx)
}

/// Partial sum of the first `terms` terms of an accelerated series, with the
/// tail bound folded into the radius.
pub fn eval_accelerated(s: SchemeId, variant: u8, ctx: &PrecisionContext, terms: u32) -> Result<Interval> {
    Ok(eval_truncated(s, Series::from_variant(variant)?, ctx, terms))
}

/// The first `terms` terms of any series, widened by the tail bound.
pub fn eval_truncated(s: SchemeId, series: Series, ctx: &PrecisionContext, terms: u32) -> Interval {
    let (mut acc, tail) = sum_series(s, series, ctx, terms);
    acc.widen(&tail);
    acc
}

/// Partial sum only, without the tail (for inspecting truncations).
pub fn partial_sum(s: SchemeId, series: Series, ctx: &PrecisionContext, terms: u32) -> Interval {
    sum_series(s, series, ctx, terms).0
}

/// Defining series and both accelerated forms, each to `digits` digits, and
/// whether their enclosures agree pairwise.
pub fn verify_acceleration_consistency(s: SchemeId, q: &BigRational, digits: u32) -> Result<(bool, [Interval; 3])> {
    let ctx = PrecisionContext::new(q.clone(), PrecisionContext::bits_for_digits(digits))?;
    let v = [
        eval_series(s, Series::Defining, &ctx)?,
        eval_series(s, Series::Accelerated1, &ctx)?,
        eval_series(s, Series::Accelerated2, &ctx)?,
    ];
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits)) / BigRational::from_integer(2.into());
    let narrow = v.iter().all(|x| x.radius() <= tol);
    let agree = v[0].intersects(&v[1]) && v[0].intersects(&v[2]) && v[1].intersects(&v[2]);
    Ok((narrow && agree, v))
}

/// Precision that resolves the convergent error at `n` for base `q`.
pub fn bits_for_convergent(q: &BigRational, n: u32) -> u32 {
    let l = log2_rational(&q.abs()).max(1.0);
    (3.5 * (n as f64).powi(2) * l).ceil() as u32 + 96
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub n: u32,
    /// `target - a_n(q0) / b_n(q0)`.
    pub err: ValueRecord,
    /// `-log|err| / (n^2 log|q0|)`, from the midpoint of the enclosure.
    pub eps: f64,
    /// `deg z_n / n^2`.
    pub zeta: f64,
    pub delta: f64,
    pub mu: f64,
    pub deg_z: usize,
}

/// `|err|` bounds and the exact convergent value at `q0`.
pub struct ConvergentError {
    pub convergent: BigRational,
    pub err: Interval,
}

pub fn convergent_value(rec: &ConvergentRecord, q: &BigRational) -> Result<BigRational> {
    let b = rec.b_n.eval(q);
    if b.is_zero() {
        return Err(Error::Precision(format!("b_{} vanishes at q = {}", rec.n, format_rational(q))));
    }
    let a = rec.a_n.eval(q)?;
    Ok(a / b)
}

pub fn convergent_interval(target: &Interval, rec: &ConvergentRecord, q: &BigRational) -> Result<ConvergentError> {
    let c = convergent_value(rec, q)?;
    let err = target.sub_rational(&c);
    Ok(ConvergentError { convergent: c, err })
}

/// Error exponents of one convergent against a precomputed target.
pub fn convergent_error_with(target: &Interval, ctx: &PrecisionContext, rec: &ConvergentRecord) -> Result<MeasureEstimate> {
    if rec.n == 0 {
        return Err(Error::usage("error exponents need n >= 1"));
    }
    let ce = convergent_interval(target, rec, &ctx.q)?;
    if ce.err.contains_zero() {
        return Err(Error::Precision(format!(
            "error at n = {} not resolved with {} bits",
            rec.n, ctx.bits
        )));
    }
    let n2 = (rec.n as f64).powi(2);
    let lq = log2_rational(&ctx.q.abs());
    let eps = -log2_rational(&ce.err.midpoint()) / (n2 * lq);
    let deg_z = rec.deg_z.unwrap_or(0);
    let zeta = deg_z as f64 / n2;
    let delta = eps / zeta - 1.0;
    Ok(MeasureEstimate {
        n: rec.n,
        err: ValueRecord {
            value: format_sci(&ce.err.midpoint(), 12),
            radius: format_upper_sci(&ce.err.radius()),
            precision_bits: ce.err.bits(),
        },
        eps,
        zeta,
        delta,
        mu: 1.0 + 1.0 / delta,
        deg_z,
    })
}

pub fn convergent_error(s: SchemeId, ctx: &PrecisionContext, rec: &ConvergentRecord) -> Result<MeasureEstimate> {
    let target = eval_target(s, ctx)?;
    convergent_error_with(&target, ctx, rec)
}

/// Limits of `eps`, `zeta`, `delta`, `mu` as exact rationals: 3, 19/8, 5/19, 24/5.
pub fn asymptotes() -> [BigRational; 4] {
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let eps = r(3, 1);
    let zeta = r(19, 8);
    let delta = &eps / &zeta - BigRational::one();
    let mu = BigRational::one() + delta.recip();
    [eps, zeta, delta, mu]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn ctx(v: i64, bits: u32) -> PrecisionContext {
        PrecisionContext::new(q(v), bits).unwrap()
    }

    fn parse(s: &str) -> BigRational {
        // decimal string to exact rational
        let (int, frac) = s.split_once('.').unwrap();
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let v = BigRational::new(digits.parse().unwrap(), BigInt::from(10u32).pow(frac.len() as u32));
        if neg {
            -v
        } else {
            v
        }
    }

    // 50-digit references computed independently with mpmath
    const H2: &str = "1.6066951524152917637833015231909245804805796715058";
    const LN2_2: &str = "-0.76449978034844420919131974725549848255769699885753";
    const H3: &str = "0.68215350260523806676126318622660";

    #[test]
    fn target_values() {
        let c = ctx(2, 200);
        let h = eval_target(SchemeId::Harmonic, &c).unwrap();
        assert!((h.midpoint() - parse(H2)).abs() < parse("0.000000000000000000000000000000000000000000001"));
        assert!(h.radius() < parse("0.000000000000000000000000000000000000000000001"));
        let l = eval_target(SchemeId::Ln2, &c).unwrap();
        assert!((l.midpoint() - parse(LN2_2)).abs() < parse("0.000000000000000000000000000000000000000001"));
        let h3 = eval_target(SchemeId::Harmonic, &ctx(3, 160)).unwrap();
        assert!((h3.midpoint() - parse(H3)).abs() < parse("0.0000000000000000000000000000001"));
    }

    #[test]
    fn widening_precision_stays_inside() {
        for s in SchemeId::ALL {
            let lo = eval_target(s, &ctx(2, 120)).unwrap();
            let hi = eval_target(s, &ctx(2, 240)).unwrap();
            assert!(lo.contains(&hi.midpoint()));
            assert!(lo.contains(&hi.lower()) && lo.contains(&hi.upper()));
        }
    }

    #[test]
    fn accelerated_first_terms() {
        let t: Vec<_> = Terms::new(SchemeId::Harmonic, Series::Accelerated1, &q(2)).take(3).collect();
        assert_eq!(t, vec![q(2), BigRational::new((-4).into(), 9.into()), BigRational::new(8.into(), 147.into())]);
        let t: Vec<_> = Terms::new(SchemeId::Harmonic, Series::Accelerated2, &q(2)).take(2).collect();
        assert_eq!(t, vec![BigRational::new(5.into(), 3.into()), BigRational::new((-19).into(), 315.into())]);
    }

    #[test]
    fn accelerated_partial_sums() {
        let c = ctx(2, 200);
        let h = partial_sum(SchemeId::Harmonic, Series::Accelerated2, &c, 3);
        assert!((h.midpoint() - parse("1.6066954380318435617974788481700924097")).abs() < parse("0.0000000000000000000000000000001"));
        let l = partial_sum(SchemeId::Ln2, Series::Accelerated2, &c, 3);
        assert!((l.midpoint() - parse("-0.76449981984032163243632777682956894")).abs() < parse("0.0000000000000000000000000000001"));
        let v1 = eval_accelerated(SchemeId::Harmonic, 1, &c, 8).unwrap();
        assert!((v1.midpoint() - parse(H2)).abs() < parse("0.000001"));
        assert!(v1.contains(&parse(H2)));
    }

    #[test]
    fn consistency() {
        for (s, v) in [(SchemeId::Harmonic, 2), (SchemeId::Ln2, 2), (SchemeId::Ln2, -2)] {
            let (ok, _) = verify_acceleration_consistency(s, &q(v), 30).unwrap();
            assert!(ok, "{s} {v}");
        }
    }

    #[test]
    fn rejects_bad_points() {
        for v in [0, 1, -1] {
            assert!(PrecisionContext::new(q(v), 64).is_err());
        }
        assert!(PrecisionContext::parse("1/2", 64).is_err());
        assert!(PrecisionContext::parse("5/2", 64).is_ok());
    }

    #[test]
    fn asymptote_values() {
        let [eps, zeta, delta, mu] = asymptotes();
        assert_eq!(eps, q(3));
        assert_eq!(zeta, BigRational::new(19.into(), 8.into()));
        assert_eq!(delta, BigRational::new(5.into(), 19.into()));
        assert_eq!(mu, BigRational::new(24.into(), 5.into()));
    }

    #[test]
    fn decimal_records() {
        let i = Interval::from_rational(&BigRational::new(1.into(), 3.into()), 100);
        let r = i.to_record(10);
        assert_eq!(r.value, "0.3333333333");
        assert!(r.radius.starts_with("3.34e-11") || r.radius.starts_with("3.33e-11"));
        let n = Interval::from_rational(&BigRational::new((-1).into(), 80.into()), 64).to_record(3);
        assert_eq!(n.value, "-0.013");
        assert_eq!(format_upper_sci(&BigRational::new(1.into(), 1000.into())), "1.00e-3");
        assert_eq!(format_upper_sci(&q(12345)), "1.24e4");
        assert_eq!(format_sci(&q(-12345), 2), "-1.2e4");
        assert_eq!(format_sci(&BigRational::new(5.into(), 7.into()), 4), "7.143e-1");
        assert_eq!(format_sci(&q(99999), 3), "1.00e5");
    }
}

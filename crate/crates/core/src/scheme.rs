//! The two schemes as data: q-WZ forms, potentials, mollifiers and the
//! second-order recurrence operator.
//!
//! Throughout, `alpha_n = q^{n+1}` and `beta_k = q^{k+1}`. Every evaluator
//! takes concrete integers and returns a univariate object in `q`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate;
use crate::cyclo::{cyclo_eq, CycloRat};
use crate::error::Error;
use crate::poly::QPoly;
use crate::qobjects::{plus_product, poch, poch_even, qbinom, FactoredQProduct};
use crate::ratfunc::QRat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeId {
    Harmonic,
    Ln2,
}

impl SchemeId {
    pub const ALL: [SchemeId; 2] = [SchemeId::Harmonic, SchemeId::Ln2];

    pub fn def(self) -> &'static SchemeDef {
        match self {
            SchemeId::Harmonic => &HARMONIC,
            SchemeId::Ln2 => &LN2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Harmonic => "harmonic",
            SchemeId::Ln2 => "ln2",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "harmonic" => Ok(SchemeId::Harmonic),
            "ln2" => Ok(SchemeId::Ln2),
            _ => Err(Error::usage(format!("unknown scheme `{s}` (expected harmonic or ln2)"))),
        }
    }
}

/// Which reading of the published formulas to use. The two readings differ
/// only where a transcription defect was found; `Corrected` is the one that
/// verifies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transcription {
    Printed,
    #[default]
    Corrected,
}

/// Where the integrality normalizer's `(1 - q^s)` product starts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizerStart {
    /// `s` from `max(1, ceil(n/2))`.
    #[default]
    Ceil,
    /// `s` from `max(1, floor(n/2))`.
    Floor,
}

impl NormalizerStart {
    pub fn first(self, n: u32) -> u32 {
        let s = match self {
            NormalizerStart::Ceil => n.div_ceil(2),
            NormalizerStart::Floor => n / 2,
        };
        s.max(1)
    }
}

/// A scheme's evaluators.
pub struct SchemeDef {
    pub id: SchemeId,
    /// `F(n, k)`.
    pub form_f: fn(u32, u32) -> FactoredQProduct,
    /// `G(n, k) / F(n, k)`, which depends on `n` only.
    pub dn_multiplier: fn(u32) -> FactoredQProduct,
    /// `m`-th term of the first (n-only) sum in the potential.
    pub potential_n_term: fn(u32) -> FactoredQProduct,
    /// `m`-th term of the second (k) sum in the potential at row `n`.
    pub potential_k_term: fn(u32, u32) -> FactoredQProduct,
    /// `true` when the mollifier carries the factor `(-1)^k`.
    pub mollifier_alternates: bool,
    pub l_coeffs: fn(u32, Transcription) -> [QPoly; 3],
    pub cert_p1: fn(u32, i64, Transcription) -> CycloRat,
    pub cert_p2: fn(u32, i64, Transcription) -> CycloRat,
    /// The factor multiplying `P^2(n,k)` in `A(n,k)`, without the
    /// `binom(n+1, k)` and `q^{binom(k,2)}` parts shared by both schemes.
    pub cert_a_prefactor: fn(u32) -> FactoredQProduct,
    /// The product `D_n` that clears denominators of `a_n` and `b_n`.
    pub normalizer: fn(u32, NormalizerStart) -> FactoredQProduct,
    /// `m`-th term (`m >= 1`) of the defining series at a rational point.
    pub target_term: fn(u32, &BigRational) -> BigRational,
}

impl SchemeDef {
    /// Evaluation points where the defining series converges.
    pub fn valid_point(&self, q: &BigRational) -> bool {
        q.abs() > BigRational::one()
    }
}

fn sign(neg: bool) -> FactoredQProduct {
    if neg {
        FactoredQProduct::one().negated()
    } else {
        FactoredQProduct::one()
    }
}

fn harmonic_f(n: u32, k: u32) -> FactoredQProduct {
    // -1 / (binom(n+k+1, k) (q)_{n+1}) = -(q)_k / (q)_{n+k+1}
    (&poch(k) / &poch(n + k + 1)).negated()
}

fn harmonic_dn(n: u32) -> FactoredQProduct {
    // q^{n+1} / (q^{n+1} - 1)
    (&FactoredQProduct::monomial(n as i64 + 1) * &FactoredQProduct::factor(n + 1, -1)).negated()
}

fn harmonic_c_n(m: u32) -> FactoredQProduct {
    &FactoredQProduct::monomial(m as i64) / &(&FactoredQProduct::factor(m, 1) * &poch(m))
}

fn harmonic_c_k(n: u32, m: u32) -> FactoredQProduct {
    // 1 / ((q^m - 1) binom(n+m, m) (q)_n) = -(q)_{m-1} / (q)_{n+m}
    (&poch(m - 1) / &poch(n + m)).negated()
}

fn harmonic_normalizer(n: u32, start: NormalizerStart) -> FactoredQProduct {
    &poch(n + 1) * &tail_product(n, start)
}

fn harmonic_term(m: u32, q: &BigRational) -> BigRational {
    BigRational::one() / (num_traits::pow(q.clone(), m as usize) - BigRational::one())
}

fn ln2_f(n: u32, k: u32) -> FactoredQProduct {
    // (-1)^k/(1-q^{k+1}) (q)_n / (binom(n+k+1, k+1) (q^2)_n)
    //   = (-1)^k (q)_k (q)_n^2 / ((q)_{n+k+1} (q^2)_n)
    let num = &poch(k) * &poch(n).pow(2);
    let den = &poch(n + k + 1) * &poch_even(n);
    &(&num / &den) * &sign(k % 2 == 1)
}

fn ln2_dn(n: u32) -> FactoredQProduct {
    // q^{n+1} / (1 + q^{n+1}), with 1 + q^j = (1 - q^{2j}) / (1 - q^j)
    let j = n + 1;
    &(&FactoredQProduct::monomial(j as i64) * &FactoredQProduct::factor(j, 1))
        * &FactoredQProduct::factor(2 * j, -1)
}

fn ln2_c_n(m: u32) -> FactoredQProduct {
    let num = &FactoredQProduct::monomial(m as i64) * &poch(m);
    &num / &(&FactoredQProduct::factor(m, 1) * &poch_even(m))
}

fn ln2_c_k(n: u32, m: u32) -> FactoredQProduct {
    // (-1)^{m-1}/(1-q^m) (q)_n / (binom(n+m, m) (q^2)_n)
    //   = (-1)^{m-1} (q)_{m-1} (q)_n^2 / ((q)_{n+m} (q^2)_n)
    let num = &poch(m - 1) * &poch(n).pow(2);
    let den = &poch(n + m) * &poch_even(n);
    &(&num / &den) * &sign(m % 2 == 0)
}

fn ln2_normalizer(n: u32, start: NormalizerStart) -> FactoredQProduct {
    &plus_product(n) * &tail_product(n, start)
}

fn ln2_term(m: u32, q: &BigRational) -> BigRational {
    let t = harmonic_term(m, q);
    if m % 2 == 1 {
        -t
    } else {
        t
    }
}

fn tail_product(n: u32, start: NormalizerStart) -> FactoredQProduct {
    let mut out = FactoredQProduct::one();
    for s in start.first(n)..=n {
        out = &out * &FactoredQProduct::factor(s, 1);
    }
    out
}

fn c(v: i64) -> QPoly {
    QPoly::constant_int(v)
}

fn qp(coeffs: &[i64]) -> QPoly {
    QPoly::from_i64s(coeffs)
}

fn harmonic_l(n: u32, _: Transcription) -> [QPoly; 3] {
    let a = &QPoly::q_pow(n as usize + 1);
    let q = &QPoly::q_pow(1);
    let a2 = &(a * a);
    let a3 = &(a2 * a);
    let y0 = q * &(a - &c(1)) * &(q * a + c(2));
    let y2 = (q * a - c(1)) * (a + &c(2));
    let y1 = &q.pow(3) * &(a3 * a2)
        + &qp(&[0, 0, 2, 2]) * &(a2 * a2)
        + &qp(&[0, 0, 1]) * a3
        - &qp(&[0, 4, 4]) * a2
        + &qp(&[1, -4, 1]) * a
        + qp(&[2, 2]);
    [y0, y1, y2]
}

fn ln2_l(n: u32, t: Transcription) -> [QPoly; 3] {
    let a = &QPoly::q_pow(n as usize + 1);
    let q = &QPoly::q_pow(1);
    let one = &c(1);
    let a2 = &(a * a);
    let a3 = &(a2 * a);
    let a4 = &(a2 * a2);
    let y0 = -(q * &(a - one) * (a + one) * (&qp(&[0, 0, 1]) * a2 + q * a + c(2)));
    let y2 = -((q * a - one) * (q * a + one) * (a2 + a + &c(2)));
    let one_plus_q2 = &qp(&[1, 0, 1]);
    let tail = match t {
        Transcription::Printed => one_plus_q2 * &(a + &c(2)),
        Transcription::Corrected => one_plus_q2 * a + qp(&[2, 2]),
    };
    let y1 = &q.pow(4) * &(a4 * a3)
        + &qp(&[0, 0, 1, 1]) * &(q * &(a4 * a2) + a4)
        + &qp(&[0, 1, 1, 1]) * &(&qp(&[0, 2]) * &(a4 * a) + a3)
        - &qp(&[1, 3, 3, 1]) * a2
        - tail;
    [y0, y1, y2]
}

fn harmonic_a_prefactor(n: u32) -> FactoredQProduct {
    // q^{2n+3} / ((q^{n+1} - 1) (q)_{n+2})
    let m = &FactoredQProduct::monomial(2 * n as i64 + 3) * &FactoredQProduct::factor(n + 1, -1);
    (&m / &poch(n + 2)).negated()
}

fn ln2_a_prefactor(n: u32) -> FactoredQProduct {
    // q^{2n+3} / (1 - q^{n+1}) (q)_{n+1} / (q^2)_{n+1}
    let m = &FactoredQProduct::monomial(2 * n as i64 + 3) * &FactoredQProduct::factor(n + 1, -1);
    &m * &(&poch(n + 1) / &poch_even(n + 1))
}

pub static HARMONIC: SchemeDef = SchemeDef {
    id: SchemeId::Harmonic,
    form_f: harmonic_f,
    dn_multiplier: harmonic_dn,
    potential_n_term: harmonic_c_n,
    potential_k_term: harmonic_c_k,
    mollifier_alternates: true,
    l_coeffs: harmonic_l,
    cert_p1: certificate::harmonic_p1,
    cert_p2: certificate::harmonic_p2,
    cert_a_prefactor: harmonic_a_prefactor,
    normalizer: harmonic_normalizer,
    target_term: harmonic_term,
};

pub static LN2: SchemeDef = SchemeDef {
    id: SchemeId::Ln2,
    form_f: ln2_f,
    dn_multiplier: ln2_dn,
    potential_n_term: ln2_c_n,
    potential_k_term: ln2_c_k,
    mollifier_alternates: false,
    l_coeffs: ln2_l,
    cert_p1: certificate::ln2_p1,
    cert_p2: certificate::ln2_p2,
    cert_a_prefactor: ln2_a_prefactor,
    normalizer: ln2_normalizer,
    target_term: ln2_term,
};

pub fn form_f_cyclo(s: SchemeId, n: u32, k: u32) -> CycloRat {
    (s.def().form_f)(n, k).to_cyclo_rat()
}

pub fn form_g_cyclo(s: SchemeId, n: u32, k: u32) -> CycloRat {
    let d = s.def();
    (&(d.form_f)(n, k) * &(d.dn_multiplier)(n)).to_cyclo_rat()
}

pub fn form_f(s: SchemeId, n: u32, k: u32) -> QRat {
    form_f_cyclo(s, n, k).to_qrat()
}

pub fn form_g(s: SchemeId, n: u32, k: u32) -> QRat {
    form_g_cyclo(s, n, k).to_qrat()
}

/// `F(n+1,k) - F(n,k) == G(n,k+1) - G(n,k)`.
pub fn check_closed(s: SchemeId, n: u32, k: u32) -> bool {
    check_closed_with(&|n, k| form_f_cyclo(s, n, k), &|n, k| form_g_cyclo(s, n, k), n, k)
}

/// Closedness for arbitrary evaluators (used for negative controls).
pub fn check_closed_with(
    f: &dyn Fn(u32, u32) -> CycloRat,
    g: &dyn Fn(u32, u32) -> CycloRat,
    n: u32,
    k: u32,
) -> bool {
    let dn = f(n + 1, k) - f(n, k);
    let dk = g(n, k + 1) - g(n, k);
    cyclo_eq(&dn, &dk)
}

/// `c(n, 0), c(n, 1), ..., c(n, k_max)`.
pub fn potential_row(s: SchemeId, n: u32, k_max: u32) -> Vec<CycloRat> {
    let d = s.def();
    let mut acc: CycloRat = (1..=n).map(|m| (d.potential_n_term)(m).to_cyclo_rat()).sum();
    let mut out = Vec::with_capacity(k_max as usize + 1);
    out.push(acc.clone());
    for m in 1..=k_max {
        acc = acc + (d.potential_k_term)(n, m).to_cyclo_rat();
        out.push(acc.clone());
    }
    out
}

pub fn potential_c_cyclo(s: SchemeId, n: u32, k: u32) -> CycloRat {
    potential_row(s, n, k).pop().expect("row is nonempty")
}

pub fn potential_c(s: SchemeId, n: u32, k: u32) -> QRat {
    potential_c_cyclo(s, n, k).to_qrat()
}

/// `c(n,k+1) - c(n,k) == F(n,k)` and `c(n+1,k) - c(n,k) == G(n,k)`.
pub fn check_potential(s: SchemeId, n: u32, k: u32) -> bool {
    check_potential_with(s, &|n, k| potential_c_cyclo(s, n, k), n, k)
}

pub fn check_potential_with(s: SchemeId, c: &dyn Fn(u32, u32) -> CycloRat, n: u32, k: u32) -> bool {
    let base = c(n, k);
    cyclo_eq(&(c(n, k + 1) - &base), &form_f_cyclo(s, n, k))
        && cyclo_eq(&(c(n + 1, k) - &base), &form_g_cyclo(s, n, k))
}

/// `(-1)^k q^{k(k+1)/2} binom(n+k, k) binom(n, k)` (harmonic) or the same
/// without the sign (ln2); zero for `k` outside `0..=n`.
pub fn mollifier_b(s: SchemeId, n: u32, k: i64) -> QPoly {
    if k < 0 || k > n as i64 {
        return QPoly::zero();
    }
    let n = n as i64;
    let p = (&qbinom(n + k, k) * &qbinom(n, k)).shift_up((k * (k + 1) / 2) as usize);
    if s.def().mollifier_alternates && k % 2 == 1 {
        -p
    } else {
        p
    }
}

/// `(y0(n), y1(n), y2(n))` of `L = y2 N^2 + y1 N + y0`.
pub fn l_coeffs(s: SchemeId, n: u32, t: Transcription) -> [QPoly; 3] {
    (s.def().l_coeffs)(n, t)
}

/// `y2(n) f(n+2) + y1(n) f(n+1) + y0(n) f(n)`.
pub fn apply_l(s: SchemeId, f: &dyn Fn(u32) -> QRat, n: u32, t: Transcription) -> QRat {
    let [y0, y1, y2] = l_coeffs(s, n, t);
    let terms = [(y0, f(n)), (y1, f(n + 1)), (y2, f(n + 2))];
    terms
        .iter()
        .fold(QRat::zero(), |acc, (y, v)| &acc + &(&QRat::from_poly(y.clone()) * v))
}

/// Same as [`apply_l`] on cyclotomic fractions, without reduction.
pub fn apply_l_cyclo(s: SchemeId, f: &[CycloRat; 3], n: u32, t: Transcription) -> CycloRat {
    let [y0, y1, y2] = l_coeffs(s, n, t);
    f[0].mul_poly(&y0) + f[1].mul_poly(&y1) + f[2].mul_poly(&y2)
}

/// First failing grid point of a check over `0..=n_max` x `0..=k_max`.
pub fn grid_failures(
    n_max: u32,
    k_max: u32,
    check: impl Fn(u32, u32) -> bool + Sync,
) -> Vec<(u32, u32)> {
    let pts: Vec<(u32, u32)> =
        (0..=n_max).flat_map(|n| (0..=k_max).map(move |k| (n, k))).collect();
    let mut bad: Vec<(u32, u32)> =
        pts.into_par_iter().filter(|&(n, k)| !check(n, k)).collect();
    bad.sort_unstable();
    bad
}

/// `deg b(n,k) = k(k+1)/2 + 2nk - k^2` for `0 <= k <= n`.
pub fn mollifier_degree(n: u32, k: u32) -> Option<usize> {
    (k <= n).then(|| {
        let (n, k) = (n as usize, k as usize);
        k * (k + 1) / 2 + 2 * n * k - k * k
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(num: &[i64], den: &[i64]) -> QRat {
        QRat::new(QPoly::from_i64s(num), QPoly::from_i64s(den)).unwrap()
    }

    #[test]
    fn forms_at_origin() {
        assert_eq!(form_f(SchemeId::Harmonic, 0, 0), rat(&[-1], &[1, -1]));
        assert_eq!(form_f(SchemeId::Ln2, 0, 0), rat(&[1], &[1, -1]));
        assert_eq!(form_f(SchemeId::Harmonic, 1, 0), rat(&[-1], &[1, -1, -1, 1]));
        assert_eq!(form_g(SchemeId::Harmonic, 0, 0), rat(&[0, 1], &[1, -2, 1]));
        assert_eq!(form_g(SchemeId::Ln2, 0, 0), rat(&[0, 1], &[1, 0, -1]));
    }

    #[test]
    fn g_over_f_is_the_multiplier() {
        for n in 0..5 {
            for k in 0..5 {
                let r = form_g(SchemeId::Harmonic, n, k).checked_div(&form_f(SchemeId::Harmonic, n, k));
                let a = QPoly::q_pow(n as usize + 1);
                assert_eq!(r.unwrap(), QRat::new(a.clone(), &a - &QPoly::one()).unwrap());
                let r = form_g(SchemeId::Ln2, n, k).checked_div(&form_f(SchemeId::Ln2, n, k));
                assert_eq!(r.unwrap(), QRat::new(a.clone(), &a + &QPoly::one()).unwrap());
            }
        }
    }

    #[test]
    fn closedness_small_grid() {
        for s in SchemeId::ALL {
            assert!(grid_failures(6, 6, |n, k| check_closed(s, n, k)).is_empty());
        }
    }

    #[test]
    fn perturbed_form_is_not_closed() {
        let s = SchemeId::Harmonic;
        let f = |n, k| form_f_cyclo(s, n, k) * CycloRat::q_pow(1);
        let g = |n, k| form_g_cyclo(s, n, k);
        assert!(!check_closed_with(&f, &g, 1, 1));
    }

    #[test]
    fn potential_examples() {
        for s in SchemeId::ALL {
            assert!(potential_c(s, 0, 0).is_zero());
        }
        assert_eq!(potential_c(SchemeId::Harmonic, 1, 0), rat(&[0, 1], &[1, -2, 1]));
        let diff = &potential_c(SchemeId::Harmonic, 1, 1) - &potential_c(SchemeId::Harmonic, 1, 0);
        assert_eq!(diff, form_f(SchemeId::Harmonic, 1, 0));
    }

    #[test]
    fn potential_small_grid() {
        for s in SchemeId::ALL {
            assert!(grid_failures(5, 5, |n, k| check_potential(s, n, k)).is_empty());
        }
    }

    #[test]
    fn potential_without_first_sum_fails() {
        let s = SchemeId::Harmonic;
        let d = s.def();
        let c = |n: u32, k: u32| -> CycloRat {
            (1..=k).map(|m| (d.potential_k_term)(n, m).to_cyclo_rat()).sum()
        };
        assert!(!check_potential_with(s, &c, 1, 1));
    }

    #[test]
    fn mollifier_examples() {
        for s in SchemeId::ALL {
            assert_eq!(mollifier_b(s, 0, 0), QPoly::one());
            assert!(mollifier_b(s, 3, 4).is_zero());
            assert!(mollifier_b(s, 3, -1).is_zero());
        }
        assert_eq!(mollifier_b(SchemeId::Harmonic, 1, 1), QPoly::from_i64s(&[0, -1, -1]));
        assert_eq!(mollifier_b(SchemeId::Ln2, 1, 1), QPoly::from_i64s(&[0, 1, 1]));
    }

    #[test]
    fn mollifier_degrees() {
        for n in 0..8 {
            for k in 0..=n {
                let b = mollifier_b(SchemeId::Ln2, n, k as i64);
                assert_eq!(b.degree(), mollifier_degree(n, k));
            }
        }
    }

    #[test]
    fn recurrence_coefficients_at_zero() {
        let [y0, _, y2] = l_coeffs(SchemeId::Harmonic, 0, Transcription::Corrected);
        // q(q-1)(q^2+2) and (q^2-1)(q+2)
        assert_eq!(y0, QPoly::from_i64s(&[0, -2, 2, -1, 1]));
        assert_eq!(y2, QPoly::from_i64s(&[-2, -1, 2, 1]));
        let [_, _, y2] = l_coeffs(SchemeId::Ln2, 0, Transcription::Corrected);
        // -(q^2-1)(q^2+1)(q^2+q+2)
        assert_eq!(y2, QPoly::from_i64s(&[2, 1, 1, 0, -2, -1, -1]));
    }

    #[test]
    fn transcriptions_differ_only_in_y1() {
        let p = l_coeffs(SchemeId::Ln2, 2, Transcription::Printed);
        let c = l_coeffs(SchemeId::Ln2, 2, Transcription::Corrected);
        assert_eq!(p[0], c[0]);
        assert_eq!(p[2], c[2]);
        assert_ne!(p[1], c[1]);
    }

    #[test]
    fn l_on_constant_is_nonzero() {
        let r = apply_l(SchemeId::Harmonic, &|_| QRat::one(), 0, Transcription::Corrected);
        assert!(!r.is_zero());
    }

    #[test]
    fn parse_scheme() {
        assert_eq!("ln2".parse::<SchemeId>().unwrap(), SchemeId::Ln2);
        assert!("zeta3".parse::<SchemeId>().is_err());
    }

    #[test]
    fn normalizer_start() {
        assert_eq!(NormalizerStart::Ceil.first(1), 1);
        assert_eq!(NormalizerStart::Ceil.first(5), 3);
        assert_eq!(NormalizerStart::Floor.first(5), 2);
        assert_eq!(NormalizerStart::Floor.first(1), 1);
    }
}

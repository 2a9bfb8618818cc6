//! Telescoping certificates `B = P1 b(n+1, k)` and `A = c B + (...) P2` for
//!
//! ```text
//! L(b(n,k))      = B(n,k) - B(n,k-1)
//! L(b(n,k)c(n,k)) = A(n,k) - A(n,k-1)
//! ```
//!
//! The published certificates are treated as hypotheses. An independent
//! certificate is recovered as the prefix sum of `L` applied to the summand,
//! which is the unique certificate vanishing at `k = -1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{cyclo_eq, CycloRat};
use crate::error::ArithError;
use crate::poly::QPoly;
use crate::qobjects::{qbinom, FactoredQProduct};
use crate::ratfunc::QRat;
use crate::scheme::{self, l_coeffs, mollifier_b, potential_row, SchemeId, Transcription};

fn k(v: i64) -> CycloRat {
    CycloRat::from_int(v)
}

fn qp(e: i64) -> CycloRat {
    CycloRat::q_pow(e)
}

/// `alpha_n^e`.
fn alpha(n: u32, e: i64) -> CycloRat {
    qp((n as i64 + 1) * e)
}

/// `beta_k^e`; `beta_{-1} = 1`.
fn beta(kk: i64, e: i64) -> CycloRat {
    qp((kk + 1) * e)
}

pub(crate) fn harmonic_p1(n: u32, kk: i64, _: Transcription) -> CycloRat {
    let (q, q2) = (&qp(1), &qp(2));
    let (a, a2, a3) = (&alpha(n, 1), &alpha(n, 2), &alpha(n, 3));
    let (b, bi) = (&beta(kk, 1), &beta(kk, -1));
    let first = -(q * a2 * bi * (q2 * a + k(2) * q));
    let inner = q2 * a3 + k(2) * q * (q + k(1)) * a2 + k(3) * q * a
        - (q + k(1))
        - (a + &k(2)) * b;
    first + q * a2 * inner
}

pub(crate) fn harmonic_p2(n: u32, kk: i64, _: Transcription) -> CycloRat {
    let (q, q2, qi) = (&qp(1), &qp(2), &qp(-1));
    let (a, a2, a3, a4, a5) =
        (&alpha(n, 1), &alpha(n, 2), &alpha(n, 3), &alpha(n, 4), &alpha(n, 5));
    let b = &beta(kk, 1);
    let bracket = q2 * a5 + q * (k(2) * q + k(1)) * a4
        - k(2) * a3
        - a3 * b
        - (k(2) - qi) * a2 * b
        - (k(3) * q + k(5)) * a2
        + k(2) * qi * a * b
        + (q - &k(1) + k(2) * qi) * a
        + (k(1) + k(3) * qi);
    q2 * a2 + q * a - k(2) + b * bracket
}

/// The published ln2 `P1`, with its `alpha_k` supplied by the caller.
pub fn ln2_p1_printed_with(n: u32, kk: i64, alpha_k: &CycloRat) -> CycloRat {
    let (q, q2, q3) = (&qp(1), &qp(2), &qp(3));
    let (a, a2, a3, a4, a5) =
        (&alpha(n, 1), &alpha(n, 2), &alpha(n, 3), &alpha(n, 4), &alpha(n, 5));
    let bi = &beta(kk, -1);
    let first = q3 * a5 + q2 * (k(1) + q) * a4 + k(2) * q * (k(1) + q2) * a3
        - (k(1) - q + q2) * a
        - k(3) * (k(1) + q);
    let second = q * bi * (q2 * a3 + q * (k(1) + q) * a2 + (k(2) - q) * a - k(2))
        + (q * a3 + (q - &k(1)) * a2 + (k(2) * q - k(1)) * a) * alpha_k
        - k(2);
    q * a2 * (first + second)
}

/// The published ln2 `P2`, with its `alpha_k` supplied by the caller.
pub fn ln2_p2_printed_with(n: u32, alpha_k: &CycloRat) -> CycloRat {
    let (q, q2, qi) = (&qp(1), &qp(2), &qp(-1));
    let (a, a2, a3, a4, a5, a6) = (
        &alpha(n, 1),
        &alpha(n, 2),
        &alpha(n, 3),
        &alpha(n, 4),
        &alpha(n, 5),
        &alpha(n, 6),
    );
    let head = q2 * a3 + q * (k(1) + q) * a2 + (k(2) + q) * a + k(2);
    let mid = a3 + (k(1) - qi) * a2 + (k(2) - q) * a - k(2) * qi;
    let tail = q2 * a6 + q * (k(1) + q) * a5 + (k(2) + q + k(2) * q2) * a4 + (k(1) + q) * a3
        + k(2) * a2
        - (k(2) + q + qi) * a
        + (qi - &k(1));
    head - a * alpha_k * alpha_k * mid - alpha_k * tail
}

pub(crate) fn ln2_p1(n: u32, kk: i64, t: Transcription) -> CycloRat {
    let b = &beta(kk, 1);
    match t {
        Transcription::Printed => ln2_p1_printed_with(n, kk, b),
        Transcription::Corrected => {
            let (q, q2, q3) = (&qp(1), &qp(2), &qp(3));
            let (a, a2, a3, a4, a5) =
                (&alpha(n, 1), &alpha(n, 2), &alpha(n, 3), &alpha(n, 4), &alpha(n, 5));
            let bi = &beta(kk, -1);
            let first = q3 * a5 + q2 * (k(1) + q) * a4 + k(2) * q * (k(1) + q2) * a3
                - (k(1) - q + q2) * a
                - k(3) * (k(1) + q);
            let second = q * bi * (q2 * a3 + q * (k(1) - q) * a2 + (k(2) - q) * a - k(2))
                + (q * a3 + (q - &k(1)) * a2 + (k(2) * q - k(1)) * a - k(2)) * b;
            q * a2 * (first + second)
        }
    }
}

pub(crate) fn ln2_p2(n: u32, kk: i64, t: Transcription) -> CycloRat {
    let b = &beta(kk, 1);
    match t {
        Transcription::Printed => ln2_p2_printed_with(n, b),
        Transcription::Corrected => {
            let (q, q2, qi) = (&qp(1), &qp(2), &qp(-1));
            let (a, a2, a3, a4, a5, a6) = (
                &alpha(n, 1),
                &alpha(n, 2),
                &alpha(n, 3),
                &alpha(n, 4),
                &alpha(n, 5),
                &alpha(n, 6),
            );
            let head = q2 * a3 + q * (k(1) + q) * a2 + (k(2) + q) * a + k(2);
            let mid = a3 + (k(1) - qi) * a2 + (k(2) - qi) * a - k(2) * qi;
            let tail = q2 * a6
                + q * (k(1) + q) * a5
                + (k(2) + q + k(2) * q2) * a4
                + (k(1) + q) * a3
                + k(2) * a2
                - (k(2) + q + qi) * a
                + (qi - &k(1));
            -(head - a * b * b * mid - b * tail)
        }
    }
}

pub fn cert_p1_cyclo(s: SchemeId, n: u32, kk: i64, t: Transcription) -> CycloRat {
    (s.def().cert_p1)(n, kk, t)
}

pub fn cert_p2_cyclo(s: SchemeId, n: u32, kk: i64, t: Transcription) -> CycloRat {
    (s.def().cert_p2)(n, kk, t)
}

pub fn cert_p1(s: SchemeId, n: u32, kk: i64, t: Transcription) -> QRat {
    cert_p1_cyclo(s, n, kk, t).to_qrat()
}

pub fn cert_p2(s: SchemeId, n: u32, kk: i64, t: Transcription) -> QRat {
    cert_p2_cyclo(s, n, kk, t).to_qrat()
}

/// `(-1)^k pre(n) binom(n+1, k) q^{binom(k, 2)}`, the weight of `P2` in `A`.
fn p2_weight(s: SchemeId, n: u32, kk: i64) -> Option<CycloRat> {
    if kk < 0 || kk > n as i64 + 1 {
        return None;
    }
    let mut w = (s.def().cert_a_prefactor)(n)
        * FactoredQProduct::monomial(kk * (kk - 1) / 2);
    if kk % 2 == 1 {
        w = w.negated();
    }
    Some(w.to_cyclo_rat().mul_poly(&qbinom(n as i64 + 1, kk)))
}

pub fn cert_b_cyclo(s: SchemeId, n: u32, kk: i64, t: Transcription) -> CycloRat {
    let b = mollifier_b(s, n + 1, kk);
    if b.is_zero() {
        return CycloRat::zero();
    }
    cert_p1_cyclo(s, n, kk, t).mul_poly(&b)
}

/// `A(n,k)` given `c(n,k)`; avoids recomputing the potential along a row.
fn cert_a_with(s: SchemeId, n: u32, kk: i64, t: Transcription, c: &CycloRat) -> CycloRat {
    let Some(w) = p2_weight(s, n, kk) else {
        return CycloRat::zero();
    };
    c * cert_b_cyclo(s, n, kk, t) + w * cert_p2_cyclo(s, n, kk, t)
}

pub fn cert_a_cyclo(s: SchemeId, n: u32, kk: i64, t: Transcription) -> CycloRat {
    if kk < 0 || kk > n as i64 + 1 {
        return CycloRat::zero();
    }
    let c = scheme::potential_c_cyclo(s, n, kk as u32);
    cert_a_with(s, n, kk, t, &c)
}

pub fn cert_b(s: SchemeId, n: u32, kk: i64, t: Transcription) -> QRat {
    cert_b_cyclo(s, n, kk, t).to_qrat()
}

pub fn cert_a(s: SchemeId, n: u32, kk: i64, t: Transcription) -> QRat {
    cert_a_cyclo(s, n, kk, t).to_qrat()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    A,
    B,
}

/// `L` applied in `n` to `b(n,k)` and `b(n,k) c(n,k)` for `k = 0..=k_max`,
/// with the verified operator.
pub struct Summands {
    pub lb: Vec<CycloRat>,
    pub lbc: Vec<CycloRat>,
    /// `c(n, k)` for `k = 0..=k_max`.
    pub c: Vec<CycloRat>,
}

pub fn l_summands(s: SchemeId, n: u32, k_max: u32) -> Summands {
    let ys = l_coeffs(s, n, Transcription::Corrected);
    let rows: Vec<(Vec<QPoly>, Vec<CycloRat>)> = (n..=n + 2)
        .into_par_iter()
        .map(|m| {
            let b = (0..=k_max as i64).map(|kk| mollifier_b(s, m, kk)).collect();
            (b, potential_row(s, m, k_max))
        })
        .collect();
    let (lb, lbc): (Vec<_>, Vec<_>) = (0..=k_max as usize)
        .into_par_iter()
        .map(|j| {
            let mut lb = CycloRat::zero();
            let mut lbc = CycloRat::zero();
            for (y, (b, c)) in ys.iter().zip(&rows) {
                let yb = &b[j] * y;
                if yb.is_zero() {
                    continue;
                }
                lb = lb + CycloRat::from_poly(yb.clone());
                lbc = lbc + c[j].mul_poly(&yb);
            }
            (lb, lbc)
        })
        .unzip();
    let c = rows.into_iter().next().expect("three rows").1;
    Summands { lb, lbc, c }
}

fn prefix_sums(v: &[CycloRat]) -> Vec<CycloRat> {
    let mut acc = CycloRat::zero();
    v.iter()
        .map(|x| {
            acc = &acc + x;
            acc.clone()
        })
        .collect()
}

/// `sum_{j=0}^{k} L(g(n, .))(j)` with `g = b` (for `B`) or `g = b c` (for `A`).
pub fn recover_certificate(s: SchemeId, which: Which, n: u32, kk: i64) -> QRat {
    if kk < 0 {
        return QRat::zero();
    }
    let sm = l_summands(s, n, kk as u32);
    let v = match which {
        Which::B => sm.lb,
        Which::A => sm.lbc,
    };
    v.into_iter().sum::<CycloRat>().to_qrat()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub scheme: SchemeId,
    pub n: u32,
    pub identity: Which,
    pub k: i64,
    pub status: Status,
    pub printed: QRat,
    pub recovered: QRat,
}

/// Laurent presentation of the recovered certificates in `beta_k`:
/// `P1 = sum_i p1[i] beta^{i-1}` and `P2 = sum_i p2[i] beta^i`, fitted at
/// `k = 0, 1, 2` and checked on the whole range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaPresentation {
    pub p1: [QRat; 3],
    pub p2: [QRat; 3],
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub scheme: SchemeId,
    pub n: u32,
    pub k_max: u32,
    pub transcription: Transcription,
    /// Identity at `k` for `k = 0..=k_max`.
    pub b_pass: Vec<bool>,
    pub a_pass: Vec<bool>,
    pub first_failure_b: Option<i64>,
    pub first_failure_a: Option<i64>,
    /// `sum_k L(b(n,k)) = 0`.
    pub b_sum_zero: bool,
    /// `sum_k L(b(n,k) c(n,k)) = 0`.
    pub a_sum_zero: bool,
    /// One entry per identity and `k = -1..=k_max`.
    pub entries: Vec<CertificateEntry>,
    pub presentation: Option<BetaPresentation>,
}

impl CertificateReport {
    pub fn printed_ok(&self) -> bool {
        self.first_failure_a.is_none() && self.first_failure_b.is_none()
    }

    /// The recovered certificates telescope to zero across the full support.
    pub fn recovered_ok(&self) -> bool {
        self.b_sum_zero && self.a_sum_zero
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &CertificateEntry> {
        self.entries.iter().filter(|e| e.status == Status::Mismatch)
    }
}

/// Checks both identities for `k = 0..=k_max` (`k_max >= n + 2`).
pub fn verify_telescope(s: SchemeId, n: u32, k_max: u32, t: Transcription) -> CertificateReport {
    assert!(k_max >= n + 2, "k range must cover the support");
    let sm = l_summands(s, n, k_max);
    let rec_b = prefix_sums(&sm.lb);
    let rec_a = prefix_sums(&sm.lbc);
    let printed: Vec<(CycloRat, CycloRat)> = (-1..=k_max as i64)
        .into_par_iter()
        .map(|kk| {
            let b = cert_b_cyclo(s, n, kk, t);
            let a = match usize::try_from(kk).ok().and_then(|i| sm.c.get(i)) {
                Some(c) => cert_a_with(s, n, kk, t, c),
                None => CycloRat::zero(),
            };
            (b, a)
        })
        .collect();
    // printed[i] is the certificate at k = i - 1
    let check = |lv: &[CycloRat], pick: fn(&(CycloRat, CycloRat)) -> &CycloRat| -> Vec<bool> {
        (0..=k_max as usize)
            .into_par_iter()
            .map(|j| cyclo_eq(&lv[j], &(pick(&printed[j + 1]) - pick(&printed[j]))))
            .collect()
    };
    let b_pass = check(&sm.lb, |p| &p.0);
    let a_pass = check(&sm.lbc, |p| &p.1);
    let first = |v: &[bool]| v.iter().position(|ok| !ok).map(|j| j as i64);

    let mut entries: Vec<CertificateEntry> = [Which::B, Which::A]
        .into_par_iter()
        .flat_map_iter(|which| {
            let printed = &printed;
            let (rec, pass) = match which {
                Which::B => (&rec_b, &b_pass),
                Which::A => (&rec_a, &a_pass),
            };
            (-1..=k_max as i64).map(move |kk| {
                let p = match which {
                    Which::B => &printed[(kk + 1) as usize].0,
                    Which::A => &printed[(kk + 1) as usize].1,
                };
                let (recovered, ok) = if kk < 0 {
                    (CycloRat::zero(), p.is_zero())
                } else {
                    let r = &rec[kk as usize];
                    (r.clone(), pass[kk as usize] && cyclo_eq(p, r))
                };
                CertificateEntry {
                    scheme: s,
                    n,
                    identity: which,
                    k: kk,
                    status: if ok { Status::Pass } else { Status::Mismatch },
                    printed: p.to_qrat(),
                    recovered: recovered.to_qrat(),
                }
            })
        })
        .collect();
    entries.sort_by_key(|e| (e.identity == Which::A, e.k));

    let presentation = (n >= 1).then(|| beta_presentation(s, n, &rec_b, &rec_a, &sm.c)).flatten();

    CertificateReport {
        scheme: s,
        n,
        k_max,
        transcription: t,
        first_failure_b: first(&b_pass),
        first_failure_a: first(&a_pass),
        b_pass,
        a_pass,
        b_sum_zero: rec_b.last().is_some_and(CycloRat::is_zero),
        a_sum_zero: rec_a.last().is_some_and(CycloRat::is_zero),
        entries,
        presentation,
    }
}

/// Quadratic through `(x_i, v_i)`, returned as coefficients of `1, x, x^2`.
fn interpolate(x: [&CycloRat; 3], v: [&CycloRat; 3]) -> Result<[CycloRat; 3], ArithError> {
    let dd = |a: &CycloRat, b: &CycloRat, xa: &CycloRat, xb: &CycloRat| {
        (a - b).checked_div(&(xa - xb))
    };
    let d0 = v[0].clone();
    let d01 = dd(v[1], v[0], x[1], x[0])?;
    let d12 = dd(v[2], v[1], x[2], x[1])?;
    let d2 = dd(&d12, &d01, x[2], x[0])?;
    let c2 = d2.clone();
    let c1 = &d01 - &(&d2 * &(x[0] + x[1]));
    let c0 = d0 - &d01 * x[0] + &d2 * &(x[0] * x[1]);
    Ok([c0, c1, c2])
}

fn beta_presentation(
    s: SchemeId,
    n: u32,
    rec_b: &[CycloRat],
    rec_a: &[CycloRat],
    c: &[CycloRat],
) -> Option<BetaPresentation> {
    // P1(k) = B(k) / b(n+1, k), P2(k) = (A(k) - c(k) B(k)) / weight(k)
    let p1_at = |kk: usize| rec_b[kk].div_poly(&mollifier_b(s, n + 1, kk as i64)).ok();
    let p2_at = |kk: usize| {
        let w = p2_weight(s, n, kk as i64)?;
        (&rec_a[kk] - &(&c[kk] * &rec_b[kk])).checked_div(&w).ok()
    };
    let xs: Vec<CycloRat> = (0..3).map(|kk| beta(kk, 1)).collect();
    let x = [&xs[0], &xs[1], &xs[2]];
    let v1: Vec<CycloRat> = (0..3).map(|kk| p1_at(kk).map(|p| p * x[kk])).collect::<Option<_>>()?;
    let v2: Vec<CycloRat> = (0..3).map(p2_at).collect::<Option<_>>()?;
    let p1 = interpolate(x, [&v1[0], &v1[1], &v1[2]]).ok()?;
    let p2 = interpolate(x, [&v2[0], &v2[1], &v2[2]]).ok()?;

    let verified = (0..=n as usize + 1).all(|kk| {
        let (bi, b, b2) = (beta(kk as i64, -1), beta(kk as i64, 1), beta(kk as i64, 2));
        let p1k = &p1[0] * &bi + p1[1].clone() + &p1[2] * &b;
        let p2k = p2[0].clone() + &p2[1] * &b + &p2[2] * &b2;
        let bk = p1k.mul_poly(&mollifier_b(s, n + 1, kk as i64));
        let ak = &c[kk] * &bk + p2k * p2_weight(s, n, kk as i64).expect("k in support");
        cyclo_eq(&bk, &rec_b[kk]) && cyclo_eq(&ak, &rec_a[kk])
    });
    let q = |v: &[CycloRat; 3]| [v[0].to_qrat(), v[1].to_qrat(), v[2].to_qrat()];
    Some(BetaPresentation { p1: q(&p1), p2: q(&p2), verified })
}

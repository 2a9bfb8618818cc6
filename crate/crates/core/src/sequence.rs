//! The sequences `a(n) = sum_k c(n,k) b(n,k)` and `b(n) = sum_k b(n,k)`,
//! computed by direct summation and by the recurrence, and their
//! integrality-normalized forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{cyclo_eq, CycloRat};
use crate::poly::QPoly;
use crate::ratfunc::QRat;
use crate::scheme::{l_coeffs, mollifier_b, potential_row, NormalizerStart, SchemeId, Transcription};

/// `(a(n), b(n))` by summation over `k = 0..=n`.
pub fn ab_direct_cyclo(s: SchemeId, n: u32) -> (CycloRat, QPoly) {
    let c = potential_row(s, n, n);
    let mut a = CycloRat::zero();
    let mut b = QPoly::zero();
    for (k, ck) in c.iter().enumerate() {
        let bk = mollifier_b(s, n, k as i64);
        a = a + ck.mul_poly(&bk);
        b = &b + &bk;
    }
    (a.reduced(), b)
}

pub fn ab_direct(s: SchemeId, n: u32) -> (QRat, QPoly) {
    let (a, b) = ab_direct_cyclo(s, n);
    (a.to_qrat(), b)
}

/// Direct table for `n = 0..=n_max`, computed in parallel.
pub fn ab_direct_table(s: SchemeId, n_max: u32) -> Vec<(CycloRat, QPoly)> {
    (0..=n_max).into_par_iter().map(|n| ab_direct_cyclo(s, n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecurrenceError {
    #[error("leading coefficient y2({0}) vanishes")]
    SingularLeading(u32),
    #[error("recurrence needs n_max >= 2, got {0}")]
    TooShort(u32),
    /// The seeds do not generate a sequence with cyclotomic denominators.
    #[error("division by y2({0}) is not exact")]
    Inexact(u32),
}

/// Extends the seeds `(a(0), b(0)), (a(1), b(1))` to `n = 0..=n_max` with
/// `y2(n) u(n+2) = -(y1(n) u(n+1) + y0(n) u(n))`.
pub fn ab_recurrence_from(
    s: SchemeId,
    seeds: [(CycloRat, QPoly); 2],
    n_max: u32,
    t: Transcription,
) -> Result<Vec<(CycloRat, QPoly)>, RecurrenceError> {
    if n_max < 2 {
        return Err(RecurrenceError::TooShort(n_max));
    }
    let mut out: Vec<(CycloRat, QPoly)> = seeds.into();
    for n in 0..=n_max - 2 {
        let [y0, y1, y2] = l_coeffs(s, n, t);
        if y2.is_zero() {
            return Err(RecurrenceError::SingularLeading(n));
        }
        let (a0, b0) = &out[n as usize];
        let (a1, b1) = &out[n as usize + 1];
        let rhs_a = -(a1.mul_poly(&y1) + a0.mul_poly(&y0));
        let rhs_b = -(&(b1 * &y1) + &(b0 * &y0));
        let a = rhs_a.div_poly(&y2).map_err(|_| RecurrenceError::Inexact(n))?.reduced();
        let b = rhs_b.exact_div(&y2).ok_or(RecurrenceError::Inexact(n))?;
        out.push((a, b));
    }
    Ok(out)
}

pub fn ab_recurrence_cyclo(s: SchemeId, n_max: u32) -> Result<Vec<(CycloRat, QPoly)>, RecurrenceError> {
    let seeds = [ab_direct_cyclo(s, 0), ab_direct_cyclo(s, 1)];
    ab_recurrence_from(s, seeds, n_max, Transcription::Corrected)
}

pub fn ab_recurrence(s: SchemeId, n_max: u32) -> Result<Vec<(QRat, QPoly)>, RecurrenceError> {
    Ok(ab_recurrence_cyclo(s, n_max)?
        .into_iter()
        .map(|(a, b)| (a.to_qrat(), b))
        .collect())
}

/// First `n` where two tables disagree.
pub fn first_disagreement(x: &[(CycloRat, QPoly)], y: &[(CycloRat, QPoly)]) -> Option<usize> {
    x.iter()
        .zip(y)
        .position(|((a1, b1), (a2, b2))| b1 != b2 || !cyclo_eq(a1, a2))
}

/// `L u(n)` for `n = 0..=len-3` over a table.
pub fn annihilation_residues(s: SchemeId, table: &[(CycloRat, QPoly)], t: Transcription) -> Vec<(bool, bool)> {
    (0..table.len().saturating_sub(2))
        .into_par_iter()
        .map(|n| {
            let [y0, y1, y2] = l_coeffs(s, n as u32, t);
            let la = table[n].0.mul_poly(&y0) + table[n + 1].0.mul_poly(&y1) + table[n + 2].0.mul_poly(&y2);
            let lb = &(&(&table[n].1 * &y0) + &(&table[n + 1].1 * &y1)) + &(&table[n + 2].1 * &y2);
            (la.is_zero() || la.reduced().is_zero(), lb.is_zero())
        })
        .collect()
}

/// One row of the convergent table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergentRecord {
    pub scheme: SchemeId,
    pub n: u32,
    pub a_n: QRat,
    pub b_n: QPoly,
    /// `a_n D_n` (`u_n` or `v_n`).
    pub u_n: QRat,
    /// `b_n D_n` (`z_n` or `w_n`).
    pub z_n: QPoly,
    /// Both normalized values are polynomials with integer coefficients.
    pub integral: bool,
    /// Why integrality failed, if it did.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrality_failure: Option<String>,
    pub deg_b: Option<usize>,
    pub deg_z: Option<usize>,
}

impl ConvergentRecord {
    pub fn new(s: SchemeId, n: u32, a_n: QRat, b_n: QPoly) -> Self {
        ConvergentRecord {
            scheme: s,
            n,
            deg_b: b_n.degree(),
            u_n: a_n.clone(),
            z_n: b_n.clone(),
            a_n,
            b_n,
            integral: false,
            integrality_failure: Some("not normalized".into()),
            deg_z: None,
        }
    }

    /// The integer-coefficient polynomial `u_n`, when it is one.
    pub fn u_poly(&self) -> Option<QPoly> {
        self.u_n.as_integer_poly().ok()
    }
}

/// `D_n` expanded.
pub fn normalizer(s: SchemeId, n: u32, start: NormalizerStart) -> QPoly {
    (s.def().normalizer)(n, start)
        .expand_poly()
        .expect("normalizer is a polynomial")
}

/// Multiplies `a_n`, `b_n` by `D_n` and records whether both results are
/// integer polynomials.
pub fn normalize_integral(rec: ConvergentRecord, start: NormalizerStart) -> ConvergentRecord {
    let d = normalizer(rec.scheme, rec.n, start);
    // a_n is reduced, so u_n is a polynomial iff den(a_n) divides num(a_n) D_n
    let u = match (rec.a_n.numer() * &d).exact_div(rec.a_n.denom()) {
        Some(p) => QRat::from_poly(p),
        None => &rec.a_n * &QRat::from_poly(d.clone()),
    };
    let z = &rec.b_n * &d;
    let failure = match (u.as_integer_poly(), z.has_integer_coeffs()) {
        (Err(e), _) => Some(format!("u_{}: {e}", rec.n)),
        (Ok(_), false) => Some(format!("z_{}: non-integer coefficient", rec.n)),
        (Ok(_), true) if z.is_zero() => Some(format!("z_{} vanishes", rec.n)),
        _ => None,
    };
    ConvergentRecord {
        deg_z: z.degree(),
        integral: failure.is_none(),
        integrality_failure: failure,
        u_n: u,
        z_n: z,
        ..rec
    }
}

/// Normalized records for `n = 0..=n_max`, from the recurrence table.
pub fn convergents(s: SchemeId, n_max: u32, start: NormalizerStart) -> Vec<ConvergentRecord> {
    let table = if n_max >= 2 {
        ab_recurrence_cyclo(s, n_max).expect("y2 never vanishes")
    } else {
        (0..=n_max).map(|n| ab_direct_cyclo(s, n)).collect()
    };
    table
        .into_par_iter()
        .enumerate()
        .map(|(n, (a, b))| {
            let rec = ConvergentRecord::new(s, n as u32, a.to_qrat(), b);
            normalize_integral(rec, start)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub n: u32,
    pub deg_b: usize,
    pub deg_z: usize,
    /// `deg z_n / n^2`.
    pub ratio: f64,
}

/// Exact degrees of `b_n` and `z_n` (or `w_n`), `n = 1..=n_max`.
pub fn degree_stats(s: SchemeId, n_max: u32, start: NormalizerStart) -> Vec<DegreeRow> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let b: QPoly = (0..=n as i64).map(|k| mollifier_b(s, n, k)).fold(QPoly::zero(), |a, x| &a + &x);
            let deg_b = b.degree().expect("b_n is nonzero");
            let deg_d = normalizer(s, n, start).degree().unwrap_or(0);
            let deg_z = deg_b + deg_d;
            DegreeRow { n, deg_b, deg_z, ratio: deg_z as f64 / (n as f64 * n as f64) }
        })
        .collect()
}

/// `(3n^2 + n) / 2`.
pub fn expected_deg_b(n: u32) -> usize {
    let n = n as usize;
    (3 * n * n + n) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    #[test]
    fn direct_small_values() {
        let (a0, b0) = ab_direct(SchemeId::Harmonic, 0);
        assert!(a0.is_zero());
        assert_eq!(b0, QPoly::one());
        let (a1, b1) = ab_direct(SchemeId::Harmonic, 1);
        assert_eq!(b1, p(&[1, -1, -1]));
        // q(q+2)/(1-q)
        assert_eq!(a1, QRat::new(p(&[0, 2, 1]), p(&[1, -1])).unwrap());
    }

    #[test]
    fn recurrence_matches_direct() {
        for s in SchemeId::ALL {
            let rec = ab_recurrence_cyclo(s, 8).unwrap();
            let dir = ab_direct_table(s, 8);
            assert_eq!(first_disagreement(&rec, &dir), None);
        }
    }

    #[test]
    fn perturbed_seeds_diverge() {
        let s = SchemeId::Harmonic;
        // shifting a seed by a multiple of y2(0) keeps every division exact
        let [_, _, y2] = l_coeffs(s, 0, Transcription::Corrected);
        let (a1, b1) = ab_direct_cyclo(s, 1);
        let seeds = [ab_direct_cyclo(s, 0), (a1 + CycloRat::from_poly(y2.clone()), &b1 + &y2)];
        let rec = ab_recurrence_from(s, seeds, 2, Transcription::Corrected).unwrap();
        let dir = ab_direct_table(s, 2);
        assert_ne!(rec[2].1, dir[2].1);
        assert_eq!(first_disagreement(&rec, &dir), Some(1));
        assert!(!cyclo_eq(&rec[2].0, &dir[2].0));
        assert!(ab_recurrence(s, 1).is_err());
    }

    #[test]
    fn printed_ln2_operator_does_not_annihilate() {
        let t = ab_direct_table(SchemeId::Ln2, 4);
        let printed = annihilation_residues(SchemeId::Ln2, &t, Transcription::Printed);
        assert!(printed.iter().any(|&(a, b)| !a || !b));
        let fixed = annihilation_residues(SchemeId::Ln2, &t, Transcription::Corrected);
        assert!(fixed.iter().all(|&(a, b)| a && b));
    }

    #[test]
    fn normalized_small_values() {
        let recs = convergents(SchemeId::Harmonic, 3, NormalizerStart::Ceil);
        assert_eq!(recs[0].z_n, p(&[1, -1]));
        // q(q+2)(1-q^2)(1-q)
        let u1 = &(&p(&[0, 2, 1]) * &p(&[1, 0, -1])) * &p(&[1, -1]);
        assert_eq!(recs[1].u_poly(), Some(u1));
        assert!(recs.iter().all(|r| r.integral));
    }

    #[test]
    fn floor_start_is_clamped() {
        let recs = convergents(SchemeId::Harmonic, 4, NormalizerStart::Floor);
        assert!(recs.iter().all(|r| r.integral && !r.z_n.is_zero()));
    }

    #[test]
    fn degrees() {
        for s in SchemeId::ALL {
            for row in degree_stats(s, 8, NormalizerStart::Ceil) {
                assert_eq!(row.deg_b, expected_deg_b(row.n));
            }
        }
    }

    #[test]
    fn ln2_integrality_small() {
        for r in convergents(SchemeId::Ln2, 8, NormalizerStart::Ceil) {
            assert!(r.integral, "{:?}", r.integrality_failure);
        }
    }
}

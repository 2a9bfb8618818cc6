//! The full verification pipeline for one scheme up to a given `n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{verify_telescope, CertificateReport, Status};
use crate::qobjects::{check_binom_transfer, qbinom_factored};
use crate::scheme::{check_closed, check_potential, grid_failures, NormalizerStart, SchemeId, Transcription};
use crate::sequence::{
    ab_direct_table, ab_recurrence_cyclo, annihilation_residues, convergents, degree_stats,
    expected_deg_b, first_disagreement,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// Whether a failure makes the run fail.
    pub required: bool,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckResult {
    fn new(name: &str, required: bool, cases: usize, failed: Vec<String>) -> Self {
        CheckResult {
            name: name.into(),
            required,
            passed: failed.is_empty(),
            cases,
            failures: failed.len(),
            first_failure: failed.into_iter().next(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub n: u32,
    pub transcription: Transcription,
    pub printed: Status,
    pub mismatches: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure_b: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure_a: Option<i64>,
    /// The prefix-sum certificates telescope to zero.
    pub recovered: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation_verified: Option<bool>,
}

impl From<&CertificateReport> for CertificateSummary {
    fn from(r: &CertificateReport) -> Self {
        let st = |ok: bool| if ok { Status::Pass } else { Status::Mismatch };
        CertificateSummary {
            n: r.n,
            transcription: r.transcription,
            printed: st(r.printed_ok()),
            mismatches: r.discrepancies().count(),
            first_failure_b: r.first_failure_b,
            first_failure_a: r.first_failure_a,
            recovered: st(r.recovered_ok()),
            presentation_verified: r.presentation.as_ref().map(|p| p.verified),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Treat a mismatch of the published certificates as a failure.
    pub strict: bool,
    pub start: NormalizerStart,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub scheme: SchemeId,
    pub n_max: u32,
    pub strict: bool,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub certificates: Vec<CertificateSummary>,
}

fn grid_check(name: &str, n_max: u32, f: impl Fn(u32, u32) -> bool + Sync) -> CheckResult {
    let bad = grid_failures(n_max, n_max, f);
    let cases = ((n_max + 1) * (n_max + 1)) as usize;
    CheckResult::new(name, true, cases, bad.iter().map(|(n, k)| format!("n={n} k={k}")).collect())
}

/// Runs every identity check for `n <= n_max`.
pub fn verify_scheme(s: SchemeId, n_max: u32, opts: VerifyOptions) -> VerifyReport {
    let mut checks = vec![
        grid_check("closedness", n_max, |n, k| check_closed(s, n, k)),
        grid_check("potential", n_max, |n, k| check_potential(s, n, k)),
    ];

    let reports: Vec<[CertificateReport; 2]> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            [Transcription::Corrected, Transcription::Printed].map(|t| verify_telescope(s, n, n + 2, t))
        })
        .collect();
    let mut certificates = Vec::new();
    let mut tele_fail = Vec::new();
    let mut printed_fail = Vec::new();
    for [fixed, printed] in &reports {
        if !(fixed.printed_ok() && fixed.recovered_ok()) {
            tele_fail.push(format!("n={}", fixed.n));
        }
        if !printed.printed_ok() {
            printed_fail.push(format!("n={}", printed.n));
        }
        certificates.push(CertificateSummary::from(fixed));
        certificates.push(CertificateSummary::from(printed));
    }
    let cases = n_max as usize + 1;
    checks.push(CheckResult::new("telescoping", true, cases, tele_fail));
    checks.push(CheckResult::new("published certificates", opts.strict, cases, printed_fail));

    let direct = ab_direct_table(s, n_max + 2);
    let residues = annihilation_residues(s, &direct, Transcription::Corrected);
    let bad = residues
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| !(a && b))
        .map(|(n, _)| format!("n={n}"))
        .collect();
    checks.push(CheckResult::new("annihilation", true, residues.len(), bad));

    let bad = match ab_recurrence_cyclo(s, n_max + 2) {
        Ok(rec) => first_disagreement(&rec, &direct).map(|n| format!("n={n}")).into_iter().collect(),
        Err(e) => vec![e.to_string()],
    };
    checks.push(CheckResult::new("recurrence", true, direct.len(), bad));

    let recs = convergents(s, n_max, opts.start);
    let bad = recs
        .iter()
        .filter(|r| !r.integral)
        .map(|r| r.integrality_failure.clone().unwrap_or_default())
        .collect();
    checks.push(CheckResult::new("integrality", true, recs.len(), bad));

    let rows = degree_stats(s, n_max.max(1), opts.start);
    let bad = rows
        .iter()
        .filter(|r| r.n <= n_max && r.deg_b != expected_deg_b(r.n))
        .map(|r| format!("n={}: deg b = {}", r.n, r.deg_b))
        .collect();
    checks.push(CheckResult::new("degree", true, n_max as usize, bad));

    let bad = binomial_failures(n_max);
    let cases = (n_max as usize + 1).pow(3);
    checks.push(CheckResult::new("binomial transfer", true, cases, bad));

    let bad = valuation_failures(n_max);
    checks.push(CheckResult::new("binomial valuations", true, cases_valuation(n_max), bad));

    let passed = checks.iter().all(|c| c.passed || !c.required);
    VerifyReport { scheme: s, n_max, strict: opts.strict, passed, checks, certificates }
}

/// Transfer identity for all `n, k, m <= n_max`.
pub fn binomial_failures(n_max: u32) -> Vec<String> {
    let n_max = n_max as i64;
    let pts: Vec<(i64, i64, i64)> = (0..=n_max)
        .flat_map(|n| (0..=n_max).flat_map(move |k| (0..=n_max).map(move |m| (n, k, m))))
        .collect();
    pts.into_par_iter()
        .filter(|&(n, k, m)| !check_binom_transfer(n, k, m))
        .map(|(n, k, m)| format!("n={n} k={k} m={m}"))
        .collect()
}

/// `Phi_d`-valuation of `binom(n, k)` lies in `{0, 1}` for `2 <= d <= n <= n_max`.
pub fn valuation_failures(n_max: u32) -> Vec<String> {
    let mut bad = Vec::new();
    for n in 2..=n_max {
        for k in 0..=n {
            let b = qbinom_factored(n as i64, k as i64).expect("k in range");
            for d in 2..=n {
                let v = b.cyclo_valuation(d);
                if !(0..=1).contains(&v) {
                    bad.push(format!("n={n} k={k} d={d}: {v}"));
                }
            }
        }
    }
    bad
}

fn cases_valuation(n_max: u32) -> usize {
    (2..=n_max as usize).map(|n| (n + 1) * (n - 1)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for s in SchemeId::ALL {
            let r = verify_scheme(s, 3, VerifyOptions::default());
            assert!(r.passed, "{:?}", r.checks);
        }
    }

    #[test]
    fn strict_ln2_fails_on_published_certificates() {
        let r = verify_scheme(SchemeId::Ln2, 2, VerifyOptions { strict: true, ..Default::default() });
        assert!(!r.passed);
        let c = r.checks.iter().find(|c| c.name == "published certificates").unwrap();
        assert!(!c.passed && c.required);
        let h = verify_scheme(SchemeId::Harmonic, 2, VerifyOptions { strict: true, ..Default::default() });
        assert!(h.passed);
    }
}

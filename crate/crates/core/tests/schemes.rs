use num_rational::BigRational;
use num_traits::Signed;
use qapery::certificate::{ln2_p1_printed_with, recover_certificate, verify_telescope, Which};
use qapery::scheme::{mollifier_b, NormalizerStart, SchemeId, Transcription};
use qapery::sequence::{convergents, ConvergentRecord};
use qapery::verify::{verify_scheme, VerifyOptions};
use qapery::CycloRat;

/// `B(n,k)` built from the published ln2 `P1` with a chosen reading of `alpha_k`.
fn ln2_b_with(n: u32, k: i64, alpha_k: &CycloRat) -> qapery::QRat {
    ln2_p1_printed_with(n, k, alpha_k).mul_poly(&mollifier_b(SchemeId::Ln2, n + 1, k)).to_qrat()
}

#[test]
fn ln2_published_p1_fails_under_both_readings_of_alpha_k() {
    for n in 1..4u32 {
        let mut shifted_ok = true;
        let mut unshifted_ok = true;
        for k in 0..=(n as i64 + 1) {
            let want = recover_certificate(SchemeId::Ln2, Which::B, n, k);
            unshifted_ok &= ln2_b_with(n, k, &CycloRat::q_pow(k)) == want;
            shifted_ok &= ln2_b_with(n, k, &CycloRat::q_pow(k + 1)) == want;
        }
        assert!(!unshifted_ok, "alpha_k = q^k unexpectedly verifies at n = {n}");
        assert!(!shifted_ok, "published P1 unexpectedly verifies at n = {n}");
    }
}

#[test]
fn corrected_certificates_match_recovery_entrywise() {
    for s in SchemeId::ALL {
        for n in 0..5 {
            let r = verify_telescope(s, n, n + 3, Transcription::Corrected);
            assert!(r.printed_ok() && r.recovered_ok(), "{s} n={n}");
            assert!(r.entries.iter().all(|e| e.printed == e.recovered));
            assert_eq!(r.entries.len(), 2 * (n as usize + 5));
        }
    }
}

#[test]
fn full_pipeline_passes_for_both_schemes() {
    for s in SchemeId::ALL {
        let r = verify_scheme(s, 6, VerifyOptions::default());
        assert!(r.passed, "{s}: {:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        assert_eq!(r.certificates.len(), 14);
    }
}

#[test]
fn convergent_records_round_trip_through_json() {
    for s in SchemeId::ALL {
        for rec in convergents(s, 5, NormalizerStart::Ceil) {
            let text = serde_json::to_string(&rec).unwrap();
            let back: ConvergentRecord = serde_json::from_str(&text).unwrap();
            assert_eq!(back, rec);
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert!(v["deg_b"].is_u64());
            assert!(v["b_n"].as_array().unwrap().iter().all(|c| c.is_string()));
        }
    }
}

#[test]
fn convergents_approach_the_target_values() {
    // ln2 at q = 2 is sum (-1)^m / (2^m - 1) = -0.76449978...
    let q = BigRational::from_integer(2.into());
    let last = convergents(SchemeId::Ln2, 6, NormalizerStart::Ceil).pop().unwrap();
    let v = last.a_n.eval(&q).unwrap() / last.b_n.eval(&q);
    let target = BigRational::new((-76449978).into(), 100000000.into());
    assert!((v - target).abs() < BigRational::new(1.into(), 100000000.into()));
}

#[test]
fn normalizer_floor_variant_stays_integral() {
    // The floor start only adds factors, so integrality persists.
    for s in SchemeId::ALL {
        assert!(convergents(s, 12, NormalizerStart::Floor).iter().all(|r| r.integral));
    }
}

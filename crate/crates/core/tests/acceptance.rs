//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::Instant;

use num_rational::BigRational;
use qapery::certificate::verify_telescope;
use qapery::numerics::{
    asymptotes, bits_for_convergent, convergent_error_with, convergent_interval, eval_target,
    verify_acceleration_consistency, PrecisionContext,
};
use qapery::qobjects::qbinom_factored;
use qapery::scheme::{check_closed, check_potential, grid_failures, NormalizerStart, SchemeId, Transcription};
use qapery::sequence::{
    ab_direct_table, ab_recurrence_cyclo, annihilation_residues, convergents, degree_stats, expected_deg_b,
    first_disagreement,
};
use qapery::verify::binomial_failures;

const CLOSED_MAX: u32 = 12;
const POTENTIAL_MAX: u32 = 10;
const TELESCOPE_MAX: u32 = 10;
const ANNIHILATION_MAX: usize = 18;
const RECURRENCE_MAX: u32 = 20;
const INTEGRALITY_MAX: u32 = 25;
const DEGREE_MAX: u32 = 20;
/// Window around 19/8 for `deg z_n / n^2` at `n = DEGREE_MAX`.
const ZETA_TOL: f64 = 0.15;
const MEASURE_N: u32 = 15;
const EPS_WINDOW: (f64, f64) = (2.7, 3.3);
const SERIES_DIGITS: u32 = 30;
const BINOM_MAX: u32 = 12;
const VALUATION_MAX: u32 = 20;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn closedness() -> Outcome {
    let mut msg = Vec::new();
    let mut ok = true;
    for s in SchemeId::ALL {
        let bad = grid_failures(CLOSED_MAX, CLOSED_MAX, |n, k| check_closed(s, n, k));
        ok &= bad.is_empty();
        msg.push(format!("{s}: {} failures", bad.len()));
    }
    ensure(ok, format!("n, k <= {CLOSED_MAX}; {}", msg.join(", ")))
}

fn potential() -> Outcome {
    let mut msg = Vec::new();
    let mut ok = true;
    for s in SchemeId::ALL {
        let bad = grid_failures(POTENTIAL_MAX, POTENTIAL_MAX, |n, k| check_potential(s, n, k));
        ok &= bad.is_empty();
        msg.push(format!("{s}: {} failures", bad.len()));
    }
    ensure(ok, format!("n, k <= {POTENTIAL_MAX}; {}", msg.join(", ")))
}

fn telescoping() -> Outcome {
    let mut ok = true;
    let mut msg = Vec::new();
    for s in SchemeId::ALL {
        let mut printed_bad = 0;
        for n in 0..=TELESCOPE_MAX {
            let printed = verify_telescope(s, n, n + 2, Transcription::Printed);
            let fixed = verify_telescope(s, n, n + 2, Transcription::Corrected);
            // sums vanish and either the published forms or the recovered ones verify
            let sums = fixed.b_sum_zero && fixed.a_sum_zero;
            let reported = printed.printed_ok() || (fixed.recovered_ok() && printed.discrepancies().count() > 0);
            ok &= sums && reported && fixed.printed_ok();
            if !printed.printed_ok() {
                printed_bad += 1;
            }
        }
        msg.push(format!("{s}: published forms mismatch for {printed_bad} of {} n", TELESCOPE_MAX + 1));
    }
    ensure(ok, format!("n <= {TELESCOPE_MAX}; {}", msg.join(", ")))
}

fn annihilation() -> Outcome {
    let mut ok = true;
    for s in SchemeId::ALL {
        let direct = ab_direct_table(s, RECURRENCE_MAX);
        let res = annihilation_residues(s, &direct, Transcription::Corrected);
        ok &= res.len() > ANNIHILATION_MAX && res[..=ANNIHILATION_MAX].iter().all(|&(a, b)| a && b);
        match ab_recurrence_cyclo(s, RECURRENCE_MAX) {
            Ok(rec) => ok &= first_disagreement(&rec, &direct).is_none(),
            Err(_) => ok = false,
        }
    }
    ensure(ok, format!("L annihilates a, b for n <= {ANNIHILATION_MAX}; tables agree for n <= {RECURRENCE_MAX}"))
}

fn integrality() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for s in SchemeId::ALL {
        for r in convergents(s, INTEGRALITY_MAX, NormalizerStart::Ceil) {
            if !r.integral {
                bad.push(format!("{s} n={}", r.n));
            }
        }
    }
    ensure(
        bad.is_empty(),
        format!("n <= {INTEGRALITY_MAX}; {} failures; {:.1}s", bad.len(), t.elapsed().as_secs_f64()),
    )
}

fn degrees() -> Outcome {
    let target = 19.0 / 8.0;
    let mut ok = true;
    let mut msg = Vec::new();
    for s in SchemeId::ALL {
        let rows = degree_stats(s, DEGREE_MAX, NormalizerStart::Ceil);
        ok &= rows.iter().all(|r| r.deg_b == expected_deg_b(r.n));
        let last = rows.iter().find(|r| r.n == DEGREE_MAX).ok_or("missing row")?;
        ok &= (last.ratio - target).abs() <= ZETA_TOL;
        msg.push(format!("{s}: deg z_{DEGREE_MAX}/n^2 = {:.4}", last.ratio));
    }
    ensure(ok, format!("deg b_n = (3n^2+n)/2 for n <= {DEGREE_MAX}; {}", msg.join(", ")))
}

fn measure_trend() -> Outcome {
    let q = int(2);
    let ctx = PrecisionContext::new(q.clone(), bits_for_convergent(&q, MEASURE_N)).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut msg = Vec::new();
    for s in SchemeId::ALL {
        let target = eval_target(s, &ctx).map_err(|e| e.to_string())?;
        let recs = convergents(s, MEASURE_N, NormalizerStart::Ceil);
        let mut prev: Option<BigRational> = None;
        for r in &recs {
            let e = convergent_interval(&target, r, &q).map_err(|e| e.to_string())?.err;
            if let Some(p) = &prev {
                ok &= e.abs_upper() < *p;
            }
            prev = Some(e.abs_lower());
        }
        let m = convergent_error_with(&target, &ctx, &recs[MEASURE_N as usize]).map_err(|e| e.to_string())?;
        ok &= (EPS_WINDOW.0..=EPS_WINDOW.1).contains(&m.eps);
        msg.push(format!("{s}: eps_{MEASURE_N} = {:.4}", m.eps));
    }
    let [_, _, delta, mu] = asymptotes();
    ok &= delta == BigRational::new(5.into(), 19.into()) && mu == BigRational::new(24.into(), 5.into());
    ensure(ok, format!("q = 2, errors strictly decreasing; {}; delta = 5/19, mu = 24/5", msg.join(", ")))
}

fn series() -> Outcome {
    let cases = [
        (SchemeId::Harmonic, 2),
        (SchemeId::Harmonic, 3),
        (SchemeId::Ln2, 2),
        (SchemeId::Ln2, -2),
        (SchemeId::Ln2, 3),
    ];
    let mut ok = true;
    for (s, q) in cases {
        let (agree, _) = verify_acceleration_consistency(s, &int(q), SERIES_DIGITS).map_err(|e| e.to_string())?;
        ok &= agree;
    }
    let bits = PrecisionContext::bits_for_digits(SERIES_DIGITS);
    let at = |b| {
        let ctx = PrecisionContext::new(int(2), b).map_err(|e| e.to_string())?;
        eval_target(SchemeId::Harmonic, &ctx).map_err(|e| e.to_string())
    };
    let (lo, hi) = (at(bits)?, at(2 * bits)?);
    ok &= lo.intersects(&hi) && lo.to_record(SERIES_DIGITS).value == hi.to_record(SERIES_DIGITS).value;
    ensure(ok, format!("{} cases agree to {SERIES_DIGITS} digits; h_2(1) stable under doubling", cases.len()))
}

fn binomials() -> Outcome {
    let transfer = binomial_failures(BINOM_MAX);
    let mut val_bad = 0;
    for n in 1..=VALUATION_MAX {
        for k in 0..=n {
            let b = qbinom_factored(n as i64, k as i64).ok_or("k out of range")?;
            val_bad += (1..=n).filter(|&d| !(0..=1).contains(&b.cyclo_valuation(d))).count();
        }
    }
    ensure(
        transfer.is_empty() && val_bad == 0,
        format!(
            "transfer for n, k, m <= {BINOM_MAX}: {} failures; valuations for d <= n <= {VALUATION_MAX}: {val_bad} failures",
            transfer.len()
        ),
    )
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_qapery");
    let runs: [&[&str]; 2] = [
        &["verify", "--scheme", "ln2", "--n-max", "6"],
        &["convergents", "--scheme", "harmonic", "--q", "2", "--n-max", "10", "--format", "csv"],
    ];
    for args in runs {
        let go = || Command::new(exe).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (go()?, go()?);
        if !a.status.success() || a.stdout != b.stdout || a.status.code() != b.status.code() {
            return Err(format!("`{}` differs between runs or failed", args.join(" ")));
        }
    }
    Ok("verify and convergents output byte-identical across runs".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closedness", closedness),
        ("potential relations", potential),
        ("telescoping", telescoping),
        ("annihilation and recurrence", annihilation),
        ("integrality", integrality),
        ("degree growth", degrees),
        ("convergence and measure trend", measure_trend),
        ("accelerated series", series),
        ("q-binomial identities", binomials),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} [{tag}] {name}: {detail}", i + 1);
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}

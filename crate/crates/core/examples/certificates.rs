//! Telescoping certificates: published forms against those recovered from
//! the recurrence operator.

use qapery::certificate::verify_telescope;
use qapery::scheme::{SchemeId, Transcription};

fn main() {
    for s in SchemeId::ALL {
        for t in [Transcription::Printed, Transcription::Corrected] {
            let r = verify_telescope(s, 2, 4, t);
            println!(
                "{s:<8} {:<9} printed ok: {:<5} recovered ok: {:<5} mismatched entries: {}",
                format!("{t:?}"),
                r.printed_ok(),
                r.recovered_ok(),
                r.discrepancies().count()
            );
        }
    }

    let r = verify_telescope(SchemeId::Ln2, 2, 4, Transcription::Corrected);
    if let Some(p) = r.presentation {
        println!("ln2, n = 2: P1 coefficients of beta^-1, 1, beta:");
        for c in &p.p1 {
            println!("  {c}");
        }
        println!("fitted presentation holds on the whole range: {}", p.verified);
    }
}

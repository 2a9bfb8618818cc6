//! The defining series against its two accelerated forms.

use num_rational::BigRational;
use qapery::numerics::{eval_truncated, verify_acceleration_consistency, PrecisionContext, Series};
use qapery::scheme::SchemeId;

fn main() -> qapery::Result<()> {
    let q = BigRational::from_integer(2.into());
    let ctx = PrecisionContext::new(q.clone(), 200)?;
    for s in SchemeId::ALL {
        println!("[{s}]");
        for series in Series::ALL {
            for terms in [5, 10, 20] {
                let v = eval_truncated(s, series, &ctx, terms);
                println!("{:<13} {terms:>2} terms: {v}", series.name());
            }
        }
        let (agree, _) = verify_acceleration_consistency(s, &q, 40)?;
        println!("all three agree to 40 digits: {agree}");
    }
    Ok(())
}

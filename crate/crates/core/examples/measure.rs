//! Error exponents of the convergents at q = 2 and the measure they suggest.

use num_rational::BigRational;
use qapery::numerics::{asymptotes, bits_for_convergent, convergent_error_with, eval_target, PrecisionContext};
use qapery::scheme::{NormalizerStart, SchemeId};
use qapery::sequence::convergents;
use qapery::serial::format_rational;

fn main() -> qapery::Result<()> {
    let q = BigRational::from_integer(2.into());
    let n_max = 14;
    for s in SchemeId::ALL {
        let ctx = PrecisionContext::new(q.clone(), bits_for_convergent(&q, n_max))?;
        let target = eval_target(s, &ctx)?;
        println!("[{s}] target {target}");
        for rec in convergents(s, n_max, NormalizerStart::Ceil).iter().skip(1).step_by(3) {
            let m = convergent_error_with(&target, &ctx, rec)?;
            println!(
                "n={:>2} err={} eps={:.4} zeta={:.4} delta={:.4} mu={:.4}",
                m.n, m.err.value, m.eps, m.zeta, m.delta, m.mu
            );
        }
    }
    let names = ["eps", "zeta", "delta", "mu"];
    for (name, v) in names.iter().zip(asymptotes()) {
        println!("limit {name} = {}", format_rational(&v));
    }
    Ok(())
}

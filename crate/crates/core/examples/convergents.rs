//! Recurrence, integrality normalization and degree growth of the convergents.

use qapery::scheme::{NormalizerStart, SchemeId};
use qapery::sequence::{ab_direct_table, ab_recurrence_cyclo, convergents, degree_stats, first_disagreement};

fn main() {
    for s in SchemeId::ALL {
        let direct = ab_direct_table(s, 12);
        let rec = ab_recurrence_cyclo(s, 12).expect("leading coefficient nonzero");
        println!("[{s}] direct vs recurrence disagreement: {:?}", first_disagreement(&direct, &rec));

        for r in convergents(s, 4, NormalizerStart::Ceil) {
            println!("n={} integral={} b_n={}", r.n, r.integral, r.b_n);
        }
        for row in degree_stats(s, 12, NormalizerStart::Ceil).iter().skip(9) {
            println!("n={:>2} deg b={:>3} deg z={:>3} deg z / n^2 = {:.4}", row.n, row.deg_b, row.deg_z, row.ratio);
        }
    }
}

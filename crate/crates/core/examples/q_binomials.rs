//! Gaussian binomials, Pochhammer products and cyclotomic valuations.

use qapery::qobjects::{check_binom_transfer, qbinom, qbinom_factored, qpochhammer, qpochhammer_even};

fn main() -> qapery::Result<()> {
    for n in 0..=5 {
        let row: Vec<String> = (0..=n).map(|k| qbinom(n, k).to_string()).collect();
        println!("n={n}: {}", row.join(" | "));
    }

    let b = qbinom_factored(10, 4).expect("0 <= k <= n");
    println!("binom(10,4) cyclotomic valuations: {:?}", b.valuations());

    let poch = qpochhammer(4)?;
    let even = qpochhammer_even(4)?;
    println!("(q;q)_4 = {}", poch.expand());
    println!("(q^2;q^2)_4 / (q;q)_4 = {}", (&even / &poch).expand());

    let ok = (0..6).all(|n| (0..6).all(|k| (0..6).all(|m| check_binom_transfer(n, k, m))));
    println!("binomial transfer identity for n, k, m < 6: {ok}");
    Ok(())
}

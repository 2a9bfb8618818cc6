//! Exact polynomial and rational-function arithmetic in q.

use num_rational::BigRational;
use qapery::cyclo::{cyclotomic, split_cyclotomic};
use qapery::serial::{poly_from_strings, poly_to_strings};
use qapery::{QPoly, QRat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = QPoly::from_i64s(&[1, 1]); // 1 + q
    let r = QPoly::from_i64s(&[1, 0, 1]); // 1 + q^2
    println!("(1+q)(1+q^2) = {}", &p * &r);

    let f = QRat::new(QPoly::one_minus_q_pow(6), QPoly::one_minus_q_pow(2))?;
    println!("(1-q^6)/(1-q^2) = {f}");
    println!("at q = 1/2: {}", f.eval(&BigRational::new(1.into(), 2.into()))?);

    for d in [1, 2, 3, 6, 12] {
        println!("Phi_{d} = {}", cyclotomic(d)?);
    }
    let (qpow, phis, rest) = split_cyclotomic(&QPoly::one_minus_q_pow(12));
    println!("1 - q^12 = q^{qpow} * {phis:?} * ({rest})");

    let strings = poly_to_strings(&QPoly::from_rationals(vec![
        BigRational::new(1.into(), 3.into()),
        BigRational::from_integer((-2).into()),
    ]));
    println!("serialized: {}", serde_json::to_string(&strings)?);
    println!("round trip: {}", poly_from_strings(&strings)?);
    Ok(())
}

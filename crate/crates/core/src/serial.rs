//! JSON forms shared by the CLI and the reports.
//!
//! A polynomial is an array of coefficient strings in ascending degree,
//! each either a decimal integer (`"-12"`) or a reduced fraction (`"3/4"`).
//! A rational function is `{"num": [...], "den": [...]}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ArithError;
use crate::poly::QPoly;
use crate::ratfunc::QRat;

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ArithError> {
    let bad = || ArithError::Parse(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let valid = |x: &str, signed: bool| {
        let digits = if signed { x.strip_prefix('-').unwrap_or(x) } else { x };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(n, true) || !valid(d, false) {
        return Err(bad());
    }
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn poly_to_strings(p: &QPoly) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

pub fn poly_from_strings<S: AsRef<str>>(v: &[S]) -> Result<QPoly, ArithError> {
    let coeffs = v
        .iter()
        .map(|s| parse_rational(s.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QPoly::from_rationals(coeffs))
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        poly_to_strings(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        poly_from_strings(&v).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RatJson {
    num: QPoly,
    den: QPoly,
}

impl Serialize for QRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatJson { num: self.numer().clone(), den: self.denom().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let RatJson { num, den } = RatJson::deserialize(d)?;
        QRat::new(num, den).map_err(D::Error::custom)
    }
}

/// Serde adapter writing a `BigRational` as a coefficient string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        format_rational(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_strings() {
        let p = QPoly::from_rationals(vec![
            BigRational::new((-3).into(), 4.into()),
            BigRational::zero(),
            BigRational::from_integer(12.into()),
        ]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["-3/4","0","12"]"#);
        let back: QPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn zero_polynomial_is_empty_array() {
        assert_eq!(serde_json::to_string(&QPoly::zero()).unwrap(), "[]");
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1.5", "1/0", "--2", "3/-4", "x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert!(serde_json::from_str::<QPoly>(r#"["1","a"]"#).is_err());
    }

    #[test]
    fn rational_function_json() {
        let r = QRat::new(QPoly::from_i64s(&[0, 1]), QPoly::from_i64s(&[1, -1])).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"num":["0","-1"],"den":["-1","1"]}"#);
        let back: QRat = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}

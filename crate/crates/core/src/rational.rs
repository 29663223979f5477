//! Exact rational helpers shared by the reports and the command line.
//!
//! Verdict-bearing parameters are always exact rationals; floating point
//! never decides a comparison anywhere in this crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(value: impl Into<BigInt>) -> Rat {
    Rat::from_integer(value.into())
}

/// Parses an exact rational from `"p/q"`, an integer, or a finite decimal
/// such as `"0.25"`.
pub fn parse_rat(text: &str) -> Result<Rat, Error> {
    let text = text.trim();
    let bad = || Error::InvalidInput(format!("malformed rational `{text}`"));
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!(
                "zero denominator in rational `{text}`"
            )));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac: BigInt = frac_part.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = int.abs() * &scale + frac;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rat::new(signed, scale));
    }
    let n: BigInt = text.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

/// Canonical `p/q` rendering (integers keep a `/1` suffix off).
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal() {
        assert_eq!(parse_rat("69/140").unwrap(), rat(69, 140));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rat("6/8").unwrap(), rat(3, 4));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1/0", "a/b", "1.2.3", "1/", "0x2"] {
            assert!(parse_rat(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(fmt_rat(&rat(6, 8)), "3/4");
        assert_eq!(fmt_rat(&rat(4, 2)), "2");
        assert_eq!(fmt_rat(&rat(-1, 3)), "-1/3");
    }
}

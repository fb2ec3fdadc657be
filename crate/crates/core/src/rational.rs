//! Exact rational helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.2"`.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Spec(format!("cannot parse rational {text:?}"));
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(whole * &scale + frac_num, scale);
        return Ok(if negative { -value } else { value });
    }
    let p: BigInt = text.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// `base^exp` for a nonnegative rational base and rational exponent `p/q`
/// compared exactly: returns true iff `lhs <= 2^exp` where lhs >= 0.
pub fn le_pow2(lhs: &Rational, exp: &Rational) -> bool {
    if lhs.is_negative() {
        return true;
    }
    // lhs <= 2^(p/q)  <=>  lhs^q <= 2^p   (q > 0)
    let p = exp.numer().clone();
    let q = exp.denom().clone();
    let q: u32 = u32::try_from(q).expect("exponent denominator too large");
    let lhs_q = num_traits::pow(lhs.clone(), q as usize);
    if p.is_negative() {
        let p: u32 = u32::try_from(-p).expect("exponent numerator too large");
        // lhs^q <= 2^-p  <=>  lhs^q * 2^p <= 1
        lhs_q * Rational::from_integer(num_traits::pow(BigInt::from(2), p as usize)) <= Rational::one()
    } else {
        let p: u32 = u32::try_from(p).expect("exponent numerator too large");
        lhs_q <= Rational::from_integer(num_traits::pow(BigInt::from(2), p as usize))
    }
}

pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("1/5").unwrap(), rat(1, 5));
        assert_eq!(parse("0.2").unwrap(), rat(1, 5));
        assert_eq!(parse("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(format(&rat(6, 4)), "3/2");
        assert_eq!(format(&int(3)), "3");
    }

    #[test]
    fn pow2_comparison() {
        assert!(le_pow2(&int(2), &int(1)));
        assert!(!le_pow2(&rat(21, 10), &int(1)));
        // 2^(1/2) ~ 1.414
        assert!(le_pow2(&rat(141, 100), &rat(1, 2)));
        assert!(!le_pow2(&rat(142, 100), &rat(1, 2)));
        assert!(le_pow2(&rat(1, 2), &int(-1)));
        assert!(!le_pow2(&rat(51, 100), &int(-1)));
    }
}

//! Scalar arithmetic in two modes: exact rationals and 64-bit floats.
//!
//! Exact values are [`num_rational::BigRational`]: always in lowest terms with
//! a positive denominator, so the representation is canonical. Float values are
//! plain `f64` and must stay finite; constructors that accept external floats
//! are expected to check with [`ensure_finite`].

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GeomError;

/// Exact rational scalar.
pub type Rat = BigRational;

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Integer-valued rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// n/d as a rational. Panics on d = 0.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact conversion of a finite f64 into the dyadic rational it denotes.
pub fn rat_from_f64(x: f64) -> Result<Rat, GeomError> {
    Rat::from_float(x).ok_or(GeomError::NonFinite)
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Out-of-range ratio of big integers; fall back to a sign-correct infinity.
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn ensure_finite(x: f64) -> Result<f64, GeomError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(GeomError::NonFinite)
    }
}

/// Parses "p/q", an integer string, or a decimal string into an exact rational.
///
/// Decimal strings denote exact decimal rationals: "0.125" is 1/8, "-2.5" is
/// -5/2. Scientific notation is accepted ("1e-3" is 1/1000).
pub fn parse_rat(s: &str) -> Result<Rat, GeomError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(GeomError::Invalid("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| GeomError::Invalid(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| GeomError::Invalid(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(GeomError::Invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rat, GeomError> {
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| GeomError::Invalid(format!("bad exponent in {s:?}")))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(GeomError::Invalid(format!("bad number {s:?}")));
    }
    let n: BigInt = digits
        .parse()
        .map_err(|_| GeomError::Invalid(format!("bad number {s:?}")))?;
    let shift = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        Rat::from_integer(n * ten.pow(shift as u32))
    } else {
        Rat::new(n, ten.pow((-shift) as u32))
    })
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sign as -1, 0, or +1.
pub fn rat_sign(x: &Rat) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert_eq!(parse_rat("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rat("-2.5").unwrap(), rat(-5, 2));
        assert_eq!(parse_rat("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rat("2.5e2").unwrap(), rat_int(250));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn format_round_trips() {
        for r in [rat(3, 4), rat(-7, 2), rat_int(5), rat_zero()] {
            assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
        }
    }

    #[test]
    fn f64_conversion_is_exact_dyadic() {
        let r = rat_from_f64(0.1).unwrap();
        // 0.1 is not 1/10 as a double; the conversion preserves the dyadic value.
        assert_ne!(r, rat(1, 10));
        assert_eq!(rat_to_f64(&r), 0.1);
        assert!(rat_from_f64(f64::NAN).is_err());
        assert!(rat_from_f64(f64::INFINITY).is_err());
    }
}

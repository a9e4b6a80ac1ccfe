//! Scalar types usable as coordinates, distances and resolutions.
//!
//! Floating point scalars compare `d <= eps` with a fixed absolute slack of
//! `1e-12`; rational scalars compare exactly.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, Zero};

/// Arithmetic needed by carriers, metrics and the builtin maps.
pub trait Scalar: Clone + PartialOrd + Debug + Display + Num + Signed + Send + Sync + 'static {
    /// Absolute slack added to every `d <= eps` comparison.
    fn tolerance() -> Self;

    /// `true` when arithmetic is exact (no rounding).
    fn is_exact() -> bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn floor(&self) -> Self;

    /// Parses `"0.0625"`, `"1e-3"`, `"-2"` or `"1/16"`.
    fn parse_decimal(s: &str) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Representative of `self` in `[0, 1)`.
    fn frac(&self) -> Self {
        self.clone() - self.floor()
    }

    /// `a <= b` up to the scalar's tolerance.
    fn le_tol(a: &Self, b: &Self) -> bool {
        *a <= b.clone() + Self::tolerance()
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

fn split_fraction(s: &str) -> Option<(&str, &str)> {
    let mut parts = s.splitn(2, '/');
    let num = parts.next()?;
    parts.next().map(|den| (num.trim(), den.trim()))
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn tolerance() -> Self {
                1e-12
            }

            fn is_exact() -> bool {
                false
            }

            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn floor(&self) -> Self {
                <$t>::floor(*self)
            }

            fn parse_decimal(s: &str) -> Option<Self> {
                let s = s.trim();
                if let Some((n, d)) = split_fraction(s) {
                    let n: $t = n.parse().ok()?;
                    let d: $t = d.parse().ok()?;
                    if d == 0.0 {
                        return None;
                    }
                    return Some(n / d);
                }
                let v: $t = s.parse().ok()?;
                v.is_finite().then_some(v)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

/// Parses a plain decimal literal (optional sign, fraction, exponent) exactly.
fn parse_decimal_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

fn parse_exact(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = split_fraction(s) {
        let n = parse_decimal_ratio(n)?;
        let d = parse_decimal_ratio(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    parse_decimal_ratio(s)
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        Self::zero()
    }

    fn is_exact() -> bool {
        true
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        parse_exact(s)
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for Ratio<i64> {
    fn tolerance() -> Self {
        Self::zero()
    }

    fn is_exact() -> bool {
        true
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        use num_traits::ToPrimitive;
        let big = parse_exact(s)?;
        Some(Ratio::new(big.numer().to_i64()?, big.denom().to_i64()?))
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_decimal_parsing() {
        let q = BigRational::parse_decimal("0.0625").unwrap();
        assert_eq!(q, BigRational::from_ratio(1, 16));
        assert_eq!(BigRational::parse_decimal("1/16").unwrap(), q);
        assert_eq!(BigRational::parse_decimal("6.25e-2").unwrap(), q);
        assert_eq!(
            BigRational::parse_decimal("-3").unwrap(),
            BigRational::from_ratio(-3, 1)
        );
        assert_eq!(BigRational::parse_decimal(".5").unwrap(), BigRational::from_ratio(1, 2));
        assert!(BigRational::parse_decimal("1/0").is_none());
        assert!(BigRational::parse_decimal("abc").is_none());
        assert!(BigRational::parse_decimal("").is_none());
    }

    #[test]
    fn float_parsing_and_tolerance() {
        assert_eq!(f64::parse_decimal("1/4"), Some(0.25));
        assert!(f64::parse_decimal("inf").is_none());
        assert!(f64::le_tol(&(0.1 + 0.2), &0.3));
        assert!(!BigRational::le_tol(
            &BigRational::from_ratio(3, 10),
            &BigRational::from_ratio(29, 100)
        ));
    }

    #[test]
    fn fractional_part() {
        assert_eq!(BigRational::from_ratio(5, 4).frac(), BigRational::from_ratio(1, 4));
        assert_eq!(BigRational::from_ratio(-1, 4).frac(), BigRational::from_ratio(3, 4));
        assert!((1.25f64.frac() - 0.25).abs() < 1e-15);
        assert_eq!(Ratio::<i64>::from_ratio(7, 3).frac(), Ratio::new(1, 3));
    }
}

//! Exact rational arithmetic backing every distance, distortion, and bound.
//!
//! All quantities in this crate are rationals kept in lowest terms with a
//! positive denominator. Parsing and formatting round-trip exactly, so no
//! floating point ever enters the pipeline.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest decimal exponent accepted when parsing scientific notation.
/// Anything bigger is a typo or an attempt to allocate 10^huge digits.
const MAX_DECIMAL_EXPONENT: i64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("empty scalar literal")]
    Empty,
    #[error("invalid scalar literal {literal:?}")]
    Invalid { literal: String },
    #[error("zero denominator in {literal:?}")]
    ZeroDenominator { literal: String },
    #[error("decimal exponent out of range in {literal:?}")]
    ExponentOutOfRange { literal: String },
}

/// An exact rational number.
///
/// Stored in lowest terms with a positive denominator (the backing
/// representation normalizes on construction). Ordering and equality are
/// exact. Display emits the canonical `p/q` form, or just `p` for integers,
/// and `FromStr` accepts `p/q`, integers, and decimal literals (parsed
/// exactly from their written digits, never through a float).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(value: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(value)))
    }

    /// Builds `numer/denom`. Panics on a zero denominator; use the `FromStr`
    /// implementation for untrusted input.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(value: BigRational) -> Self {
        Scalar(value)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.denom().is_one()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    /// `|self - other|`.
    pub fn abs_diff(&self, other: &Scalar) -> Self {
        Scalar((&self.0 - &other.0).abs())
    }

    pub fn half(&self) -> Self {
        Scalar(&self.0 / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn double(&self) -> Self {
        Scalar(&self.0 * BigRational::from_integer(BigInt::from(2)))
    }

    /// Smallest integer scalar `>= self`.
    pub fn ceil(&self) -> Self {
        Scalar(self.0.ceil())
    }

    /// Lossy float view, for approximate display only.
    pub fn approx_f64(&self) -> f64 {
        self.0
            .to_f64()
            .unwrap_or_else(|| self.0.numer().to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl From<i64> for Scalar {
    fn from(value: i64) -> Self {
        Scalar::from_int(value)
    }
}

impl FromStr for Scalar {
    type Err = ScalarParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        if text.is_empty() {
            return Err(ScalarParseError::Empty);
        }
        if let Some((numer, denom)) = text.split_once('/') {
            let invalid = || ScalarParseError::Invalid {
                literal: text.to_owned(),
            };
            let n = BigInt::from_str(numer.trim()).map_err(|_| invalid())?;
            let d = BigInt::from_str(denom.trim()).map_err(|_| invalid())?;
            if d.is_zero() {
                return Err(ScalarParseError::ZeroDenominator {
                    literal: text.to_owned(),
                });
            }
            return Ok(Scalar(BigRational::new(n, d)));
        }
        parse_decimal(text)
    }
}

/// Parses `[+-]digits[.digits][(e|E)[+-]digits]` exactly as the rational its
/// digits denote.
fn parse_decimal(text: &str) -> Result<Scalar, ScalarParseError> {
    let invalid = || ScalarParseError::Invalid {
        literal: text.to_owned(),
    };
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|_| invalid())?;
            if exp.abs() > MAX_DECIMAL_EXPONENT {
                return Err(ScalarParseError::ExponentOutOfRange {
                    literal: text.to_owned(),
                });
            }
            (m, exp)
        }
        None => (text, 0),
    };

    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    // Aligned with the JSON number grammar: integer digits are mandatory,
    // fractional digits are mandatory when a '.' is present.
    if int_part.is_empty()
        || (digits.contains('.') && frac_part.is_empty())
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(invalid());
    }

    let mut numer = BigInt::from_str(&format!("{int_part}{frac_part}")).map_err(|_| invalid())?;
    if sign < 0 {
        numer = -numer;
    }
    let frac_scale = frac_part.len() as i64;
    let net_exp = exponent - frac_scale;
    let ten = BigInt::from(10);
    let rational = if net_exp >= 0 {
        BigRational::from_integer(numer * ten.pow(net_exp as u32))
    } else {
        BigRational::new(numer, ten.pow((-net_exp) as u32))
    };
    Ok(Scalar(rational))
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }

        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

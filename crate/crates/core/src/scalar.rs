//! Scalar fields the geometry is generic over.
//!
//! Two families are supported: binary floating point (`f64`, `f32`) and
//! exact arbitrary-precision rationals ([`Rational`]). Exact mode never
//! rounds, so strict comparisons such as `gain > 0` are decidable.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Relative tolerance used when comparing float results against an
/// independent recomputation.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// Relative improvement threshold for float-mode local search.
pub const FLOAT_GAIN_THRESHOLD: f64 = 1e-12;

/// A field element usable by every algorithm in this crate.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// `true` for exact rational arithmetic.
    const EXACT: bool;

    /// Short name of the field, used in output metadata.
    const NAME: &'static str;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar field")
    }

    /// Lossy conversion for reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest gain that counts as a strict improvement when the current
    /// potential is `potential`. Exact fields use zero.
    fn improvement_threshold(potential: &Self) -> Self;

    /// Equality up to rounding: exact fields compare exactly, float fields
    /// with relative tolerance [`FLOAT_REL_TOL`].
    fn approx_eq(&self, other: &Self) -> bool;

    /// Parses a decimal literal such as `-12.5e3`, or `num/den` for
    /// exact fields.
    fn parse_literal(text: &str) -> Option<Self>;

    /// Text form that parses back to the identical value.
    fn encode(&self) -> String;
}

macro_rules! float_scalar {
    ($t:ty, $name:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;
            const NAME: &'static str = $name;

            fn improvement_threshold(potential: &Self) -> Self {
                (FLOAT_GAIN_THRESHOLD as $t) * potential.max(1.0)
            }

            fn approx_eq(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= (FLOAT_REL_TOL as $t) * scale
            }

            fn parse_literal(text: &str) -> Option<Self> {
                let text = text.trim();
                if let Some((num, den)) = text.split_once('/') {
                    let num: $t = num.trim().parse().ok()?;
                    let den: $t = den.trim().parse().ok()?;
                    return (den != 0.0).then(|| num / den);
                }
                let value: $t = text.parse().ok()?;
                value.is_finite().then_some(value)
            }

            fn encode(&self) -> String {
                // `Display` for floats is the shortest string that round-trips.
                format!("{}", self)
            }
        }
    };
}

float_scalar!(f64, "f64");
float_scalar!(f32, "f32");

impl Scalar for Rational {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn improvement_threshold(_potential: &Self) -> Self {
        Rational::zero()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn parse_literal(text: &str) -> Option<Self> {
        parse_exact_decimal(text)
    }

    fn encode(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

/// Parses a decimal (optionally with exponent) or `num/den` literal into an
/// exact rational without passing through binary floating point.
pub fn parse_exact_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_exact_decimal(num)?;
        let den = parse_exact_decimal(den)?;
        return (!den.is_zero()).then(|| num / den);
    }

    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], i64::from_str(&text[pos + 1..]).ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }

    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str_radix(&all_digits, 10).ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let power = num_traits::pow(ten, usize::try_from(scale.unsigned_abs()).ok()?);
    let value = if scale >= 0 {
        Rational::from_integer(numer * power)
    } else {
        Rational::new(numer, power)
    };
    Some(value)
}

/// Builds an exact rational from an integer.
pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Fixed-point decimal rendering of an exact rational, rounded half away
/// from zero at `places` digits.
pub fn rational_to_decimal(value: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = value * Rational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let digits = rounded.abs().to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

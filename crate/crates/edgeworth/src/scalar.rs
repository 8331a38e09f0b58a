//! Arithmetic abstraction shared by the exact-rational and floating pipelines.
//!
//! Every moment/cumulant container and every polynomial built from them is
//! generic over [`Scalar`], so the same conversion and expansion code runs in
//! both modes. Exact mode uses [`BigRational`] (arbitrary-precision `p/q`) and
//! is what the zero-tolerance round-trip and closed-form equivalence tests run
//! on; float mode is plain `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which arithmetic a container is carrying. Serialized into file headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithmeticMode {
    Exact,
    Float,
}

impl ArithmeticMode {
    pub fn name(self) -> &'static str {
        match self {
            ArithmeticMode::Exact => "exact",
            ArithmeticMode::Float => "float",
        }
    }
}

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    const MODE: ArithmeticMode;

    fn from_int(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Lossy view, used for diagnostics and for handing exact results to
    /// floating consumers.
    fn to_f64(&self) -> f64;

    /// Exact embedding of a finite `f64` (every finite float is a dyadic
    /// rational, so this is lossless in both modes). Errors on NaN/±∞.
    fn from_f64_exact(v: f64) -> Result<Self>;

    /// Text form used in moment/cumulant files (`p/q` in exact mode, 17
    /// significant digits in float mode).
    fn encode(&self) -> String;

    fn decode(s: &str) -> Result<Self>;
}

impl Scalar for f64 {
    const MODE: ArithmeticMode = ArithmeticMode::Float;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64_exact(v: f64) -> Result<Self> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numeric(format!("{v} is not a finite number")))
        }
    }

    fn encode(&self) -> String {
        format!("{:.16e}", self)
    }

    fn decode(s: &str) -> Result<Self> {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad float '{s}': {e}")))
    }
}

impl Scalar for BigRational {
    const MODE: ArithmeticMode = ArithmeticMode::Exact;

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64_exact(v: f64) -> Result<Self> {
        rational_from_f64(v)
    }

    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad numerator '{p}': {e}")))?;
                let q: BigInt = q
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad denominator '{q}': {e}")))?;
                if q.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in '{t}'")));
                }
                Ok(BigRational::new(p, q))
            }
            None => {
                let p: BigInt = t
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad rational '{t}': {e}")))?;
                Ok(BigRational::from_integer(p))
            }
        }
    }
}

/// Exact conversion of an `f64` into a rational (every finite float is a
/// dyadic rational). Errors on NaN and infinities.
pub fn rational_from_f64(v: f64) -> Result<BigRational> {
    BigRational::from_f64(v).ok_or_else(|| Error::Numeric(format!("{v} is not a finite number")))
}

/// Absolute value of the lossy float view; convenient for tolerance checks on
/// generic scalars.
pub fn abs_f64<T: Scalar>(v: &T) -> f64 {
    v.to_f64().abs()
}

/// `|a − b|` through the float view.
pub fn diff_f64<T: Scalar>(a: &T, b: &T) -> f64 {
    (a.to_f64() - b.to_f64()).abs()
}

pub fn is_negative_rational(v: &BigRational) -> bool {
    v.is_negative()
}

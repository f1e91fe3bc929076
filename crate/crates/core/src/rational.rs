//! Exact rational arithmetic helpers.
//!
//! Everything downstream (weights, areas, bounds, margins) is computed in
//! arbitrary-precision rationals; floats appear only as presentation hints
//! when rendering figures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// The one number type used throughout the engine.
pub type Rat = BigRational;

/// Shorthand for `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer as an exact rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn from_u64(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Floor toward negative infinity, as a `BigInt`.
pub fn floor_int(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// Ceiling toward positive infinity, as a `BigInt`.
pub fn ceil_int(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

/// Fractional part `⟨x⟩ = x − ⌊x⌋`, always in `[0, 1)`.
pub fn fract(x: &Rat) -> Rat {
    x - x.floor()
}

/// Parses `"p/q"` (or a bare integer `"p"`) into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let mk_err = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| mk_err())?;
    let d: BigInt = den.parse().map_err(|_| mk_err())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational as `"p/q"` in lowest terms, denominator always explicit
/// so that serialized files round-trip byte-for-byte.
pub fn fmt_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Lossy conversion for figure coordinates.
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // fall back to a quotient of lossy parts for out-of-range big ints
        let n = x.numer().to_f64().unwrap_or(if x.numer().is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

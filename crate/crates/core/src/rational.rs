//! Exact rational values used for valuations, scores and epsilons.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn int(v: i128) -> Rational {
    Rational::from_integer(v)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn fmt(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::Parse {
        line: 0,
        msg: format!("bad rational `{s}`"),
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(rat(p, q))
        }
        None => Ok(int(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Greatest common divisor of two non-negative rationals.
pub fn gcd(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = a.numer().abs().gcd(&b.numer().abs());
    let den = a.denom().lcm(b.denom());
    rat(num, den)
}

/// `1 + ln(1/eps)` rounded up to a multiple of 1e-9.
pub fn alpha(eps: &Rational) -> Rational {
    const SCALE: i128 = 1_000_000_000;
    let a = 1.0 + (1.0 / to_f64(eps)).ln();
    rat((a * SCALE as f64).ceil() as i128, SCALE)
}

/// `ceil(c)` for a non-negative rational.
pub fn ceil_u64(c: &Rational) -> u64 {
    c.ceil().to_integer().max(0) as u64
}

/// Checkpoint time `ceil(mult * 2^j)`.
pub fn checkpoint(mult: &Rational, j: u32) -> u64 {
    ceil_u64(&(mult * int(1i128 << j)))
}

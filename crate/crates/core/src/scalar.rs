//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number; `BigRational` keeps the denominator
/// positive and the fraction reduced.
pub type Rat = BigRational;

pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Parse "a" or "a/b" with optional sign.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let t = s.trim();
    let parse_int = |x: &str| -> Result<BigInt> {
        x.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::ParseError { line: 0, col: 0, msg: format!("bad rational `{s}`") })
    };
    if let Some((a, b)) = t.split_once('/') {
        let num = parse_int(a)?;
        let den = parse_int(b)?;
        if den.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(Rat::new(num, den))
    } else {
        Ok(Rat::from_integer(parse_int(t)?))
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back through a scaled division for extreme magnitudes
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn rat_pow(r: &Rat, k: i64) -> Result<Rat> {
    if k >= 0 {
        Ok(num_traits::pow::pow(r.clone(), k as usize))
    } else {
        if r.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(num_traits::pow::pow(r.clone(), (-k) as usize).recip())
    }
}

/// Exact square root when `r` is a perfect square of a rational; `None` otherwise.
pub fn rat_sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// gcd over Q normalising contents: gcd(a/b, c/d) = gcd(a*d, c*b)/(b*d).
pub fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    use num_integer::Integer;
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = a.numer().gcd(b.numer());
    let den = a.denom().lcm(b.denom());
    Rat::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_sqrt() {
        assert_eq!(rat_from_str("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(rat_from_str(" 7 ").unwrap(), rat_i(7));
        assert_eq!(rat_sqrt_exact(&rat(9, 4)).unwrap(), rat(3, 2));
        assert!(rat_sqrt_exact(&rat(2, 1)).is_none());
        assert!(rat_sqrt_exact(&rat(-4, 1)).is_none());
    }

    #[test]
    fn gcd_contents() {
        assert_eq!(rat_gcd(&rat(4, 3), &rat(2, 9)), rat(2, 9));
        assert_eq!(rat_gcd(&rat_zero(), &rat(-5, 2)), rat(5, 2));
    }
}

//! Exact rational scalars used everywhere in the engine.
//!
//! All arithmetic is over Q; floats never appear. `BigRational` keeps values
//! reduced with a positive denominator, which makes hashing and text output
//! deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// `p/q` as an exact rational. Panics on `q == 0`, which is always a
/// programming error here, not an input condition.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    BigRational::zero()
}

pub fn one() -> Rat {
    BigRational::one()
}

/// Binomial coefficient as an exact rational (small arguments only).
pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    BigRational::new(num, den)
}

/// Renders `3`, `-3`, or `3/4`; integers drop the denominator.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"3"`, `"-3"`, or `"3/4"`.
pub fn parse_rat(s: &str) -> Result<Rat, crate::error::QcharError> {
    let s = s.trim();
    let mk_err = || crate::error::QcharError::InvalidInput(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| mk_err())?;
            let q: BigInt = q.trim().parse().map_err(|_| mk_err())?;
            if q.is_zero() {
                return Err(crate::error::QcharError::InvalidInput(format!(
                    "zero denominator in {s:?}"
                )));
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| mk_err())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// Sign prefix helper for pretty-printed linear combinations: returns
/// `(" + ", "x")` or `(" - ", "x")` with the magnitude rendered.
pub fn signed_parts(r: &Rat) -> (&'static str, String) {
    if r.is_negative() {
        ("-", fmt_rat(&-r.clone()))
    } else {
        ("+", fmt_rat(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_positive_denominator() {
        let r = rat(2, -4);
        assert_eq!(fmt_rat(&r), "-1/2");
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3", "-3", "3/4", "-7/2", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&parse_rat(" 2 / 6 ").unwrap()), "1/3");
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(3, 2), int(3));
        assert_eq!(binomial(7, 4), int(35));
        assert_eq!(binomial(2, 5), zero());
    }
}

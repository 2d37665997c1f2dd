use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rationals, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Serialized form used everywhere in JSON: always `a/b`.
pub fn fmt_q(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| bad())?;
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Scale a rational vector to coprime integers with the first nonzero entry positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Result<Vec<BigInt>> {
    let first = v.iter().find(|x| !x.is_zero()).ok_or(Error::ZeroVector)?;
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    let neg = first.is_negative();
    for x in ints.iter_mut() {
        *x /= &g;
        if neg {
            *x = -&*x;
        }
    }
    Ok(ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        let x = q(-6, 4);
        assert_eq!(fmt_q(&x), "-3/2");
        assert_eq!(parse_q("-3/2").unwrap(), x);
        assert_eq!(parse_q("5").unwrap(), qi(5));
        assert_eq!(fmt_q(&qi(0)), "0/1");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer_vector(&[qi(0), q(-1, 2), q(3, 4)]).unwrap();
        assert_eq!(v, vec![BigInt::from(0), BigInt::from(2), BigInt::from(-3)]);
        assert_eq!(primitive_integer_vector(&[qi(0)]), Err(Error::ZeroVector));
    }
}

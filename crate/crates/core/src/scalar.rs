//! Exact rational scalars.
//!
//! Every structure constant and every intermediate value is an arbitrary
//! precision rational in lowest terms, so equality of canonical forms is
//! mathematical equality.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Scalar = num_rational::BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: usize) -> Scalar {
    (1..=n).fold(Scalar::one(), |acc, k| acc * int(k as i64))
}

/// `n! / (n - k)!`, zero when `k > n`.
pub fn falling(n: usize, k: usize) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    ((n - k + 1)..=n).fold(Scalar::one(), |acc, j| acc * int(j as i64))
}

pub fn binomial(n: usize, k: usize) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    falling(n, k) / factorial(k)
}

pub fn sign(n: usize) -> Scalar {
    if n.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Parses `p/q` or an integer literal. A zero denominator is rejected.
pub fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("invalid rational numerator `{num}`"))?;
    let den: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| format!("invalid rational denominator `{d}`"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Scalar::new(num, den))
}

pub fn format_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_zero_denominator() {
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let s = parse_scalar("6/-4").unwrap();
        assert_eq!(format_scalar(&s), "-3/2");
        assert_eq!(format_scalar(&parse_scalar("10/5").unwrap()), "2");
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), int(120));
        assert_eq!(falling(5, 2), int(20));
        assert_eq!(falling(2, 3), int(0));
        assert_eq!(binomial(6, 3), int(20));
        assert_eq!(sign(3), int(-1));
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(n in -10_000i64..10_000, d in 1i64..500) {
            let s = ratio(n, d);
            prop_assert_eq!(parse_scalar(&format_scalar(&s)).unwrap(), s);
        }
    }
}

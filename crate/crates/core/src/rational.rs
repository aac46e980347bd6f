//! Exact rational helpers shared by the library and the CLI.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Always `p/q`, including integers (`0/1`, `1/1`).
pub fn to_ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer `p`; the result is reduced.
pub fn parse_ratio(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(num, den))
}

/// Smallest multiple of `1/scale` that is `>= sqrt(x)`; `x` must be
/// nonnegative. The result overshoots `sqrt(x)` by less than `1/scale`.
pub fn sqrt_upper(x: &BigRational, scale: u64) -> BigRational {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let scale = BigUint::from(scale);
    let num = x.numer().magnitude() * &scale * &scale;
    let den = x.denom().magnitude();
    // ceil(num / den)
    let (q, r) = num.div_rem(den);
    let target = if r.is_zero() { q } else { q + 1u32 };
    let mut root = target.sqrt();
    if &root * &root < target {
        root += 1u32;
    }
    BigRational::new(BigInt::from_biguint(Sign::Plus, root), BigInt::from_biguint(Sign::Plus, scale))
}

pub fn is_unit_interval_open(r: &BigRational) -> bool {
    r.is_positive() && r < &BigRational::one()
}

/// Serde adapter storing a rational as a `"p/q"` string.
pub mod serde_ratio {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_ratio_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_integers_with_denominator() {
        assert_eq!(to_ratio_string(&BigRational::zero()), "0/1");
        assert_eq!(to_ratio_string(&ratio(6, 9)), "2/3");
    }

    #[test]
    fn parse_accepts_both_forms() {
        assert_eq!(parse_ratio("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_ratio("2").unwrap(), ratio(2, 1));
        assert_eq!(parse_ratio("-1/4").unwrap(), ratio(-1, 4));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("0.5").is_err());
        assert!(parse_ratio("").is_err());
    }

    #[test]
    fn sqrt_upper_brackets_the_root() {
        let scale = 1_000_000_000u64;
        for (p, q) in [(1, 2), (1, 5), (1, 10), (9, 16), (2, 1), (0, 1)] {
            let x = ratio(p, q);
            let d = sqrt_upper(&x, scale);
            assert!(&d * &d >= x, "{p}/{q}");
            let lower = &d - ratio(1, scale as i64);
            assert!(lower.is_negative() || &lower * &lower < x, "{p}/{q}");
        }
        assert_eq!(sqrt_upper(&ratio(9, 16), scale), ratio(3, 4));
    }
}

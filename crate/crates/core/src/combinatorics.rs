//! Binomial coefficients, exact rationals and small parsing helpers.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `C(a, b)`, with `C(a, b) = 0` whenever `b > a`. `None` on `u128` overflow.
pub fn binom_checked(a: u64, b: u64) -> Option<u128> {
    if b > a {
        return Some(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc * (a - i) is divisible by (i + 1) at every step.
        let num = u128::from(a - i);
        let g = num_integer::gcd(acc, u128::from(i + 1));
        let den = u128::from(i + 1) / g;
        acc = (acc / g).checked_mul(num / den)?;
    }
    Some(acc)
}

/// `C(a, b)` for desk-scale arguments. Panics on `u128` overflow.
pub fn binom(a: u64, b: u64) -> u128 {
    binom_checked(a, b).unwrap_or_else(|| panic!("C({a}, {b}) overflows u128"))
}

/// `C(a, b)` where `a` may be negative; negative tops give 0.
pub fn binom_signed(a: i64, b: u64) -> u128 {
    if a < 0 {
        0
    } else {
        binom(a as u64, b)
    }
}

pub fn factorial(k: u64) -> u128 {
    (1..=u128::from(k)).product()
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// `n^e` as an exact rational.
pub fn pow_int(n: usize, e: usize) -> Rational {
    int(BigInt::from(n).pow(e as u32))
}

/// Smallest integer `>= x`, clamped at zero.
pub fn ceil_nonneg(x: &Rational) -> usize {
    if x.is_negative() {
        return 0;
    }
    x.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// Lowest-terms `p/q` display (`p` alone when `q = 1`).
pub fn format_ratio(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in `{t}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in `{t}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{t}`")));
    }
    Ok(Rational::new(num, den))
}

/// Parse a comma-separated vertex list such as `"0, 3,7"`. The empty string is the empty list.
pub fn parse_vertex_list(s: &str) -> Result<Vec<u32>> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad vertex `{}`", tok.trim())))
        })
        .collect()
}

/// Integer `b`-th root of `x`, rounded down.
pub(crate) fn iroot(x: &BigUint, b: u32) -> BigUint {
    num_integer::Roots::nth_root(x, b)
}

/// Exact `sqrt(x) * scale >= value` test for nonnegative rational `x`.
pub fn le_sqrt_times(value: &Rational, x: &Rational, scale: &Rational) -> bool {
    // value <= scale * sqrt(x)  <=>  value <= 0 or value^2 <= scale^2 * x (scale >= 0)
    if !value.is_positive() {
        return true;
    }
    value * value <= scale * scale * x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom_pascal(a: u64, b: u64) -> u128 {
        let mut row = vec![1u128];
        for _ in 0..a {
            let mut next = vec![1u128; row.len() + 1];
            for j in 1..row.len() {
                next[j] = row[j - 1] + row[j];
            }
            row = next;
        }
        row.get(b as usize).copied().unwrap_or(0)
    }

    #[test]
    fn binom_matches_pascal_triangle() {
        for a in 0..40 {
            for b in 0..45 {
                assert_eq!(binom(a, b), binom_pascal(a, b), "C({a},{b})");
            }
        }
    }

    #[test]
    fn binom_conventions() {
        assert_eq!(binom(3, 5), 0);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom_signed(-2, 1), 0);
        assert_eq!(binom(9, 3) - binom(7, 3), 49);
        assert!(binom_checked(300, 150).is_none());
    }

    #[test]
    fn parse_ratio_forms() {
        assert_eq!(parse_ratio("7/3").unwrap(), ratio(7, 3));
        assert_eq!(parse_ratio(" 2 ").unwrap(), int(2));
        assert_eq!(parse_ratio("4/6").unwrap(), ratio(2, 3));
        assert_eq!(parse_ratio("-1/2").unwrap(), ratio(-1, 2));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("").is_err());
        assert!(parse_ratio("a/b").is_err());
        assert!(parse_ratio("0.5").is_err());
    }

    #[test]
    fn format_lowest_terms() {
        assert_eq!(format_ratio(&ratio(14, 6)), "7/3");
        assert_eq!(format_ratio(&ratio(4, 2)), "2");
        assert_eq!(format_ratio(&ratio(0, 5)), "0");
    }

    #[test]
    fn vertex_lists() {
        assert_eq!(parse_vertex_list("0, 3,7").unwrap(), vec![0, 3, 7]);
        assert!(parse_vertex_list("").unwrap().is_empty());
        assert!(parse_vertex_list("1,,2").is_err());
        assert!(parse_vertex_list("-1").is_err());
    }

    #[test]
    fn sqrt_comparison_is_exact() {
        // 3 <= 1 * sqrt(9) but 3 > 1 * sqrt(8)
        assert!(le_sqrt_times(&int(3), &int(9), &int(1)));
        assert!(!le_sqrt_times(&int(3), &int(8), &int(1)));
        assert!(le_sqrt_times(&int(0), &int(0), &int(1)));
    }

    #[test]
    fn ceil_clamps() {
        assert_eq!(ceil_nonneg(&ratio(39, 8)), 5);
        assert_eq!(ceil_nonneg(&ratio(-3, 2)), 0);
        assert_eq!(ceil_nonneg(&int(4)), 4);
    }
}

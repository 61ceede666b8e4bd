//! Seeded random streams and exact Bernoulli thresholds.
//!
//! Every random stage draws from ChaCha8 seeded with the user seed and a fixed stream
//! number, so results depend only on `(seed, stage, index)` and not on scheduling.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{format_ratio, iroot, parse_ratio, Rational};
use crate::error::{Error, Result};

/// Stream numbers of the random stages.
pub mod streams {
    pub const ABSORB_FAMILY: u64 = 1;
    pub const ABSORB_PROBES: u64 = 2;
    pub const ABSORB_SETS: u64 = 3;
    pub const GENERATOR: u64 = 4;
    /// Round 1 uses `ROUND1 + i` for copy `i`.
    pub const ROUND1: u64 = 1 << 32;
    /// Round 2 uses `ROUND2 + i` for copy `i`.
    pub const ROUND2: u64 = 2 << 32;
}

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exclusive upper bound for a `u64` draw: a draw `u` succeeds iff `u < threshold`.
/// `threshold = floor(p · 2^64)`, so `0` never succeeds and `2^64` always does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold(pub u128);

impl Threshold {
    pub fn from_rational(p: &Rational) -> Result<Self> {
        if p.is_negative() || *p > Rational::one() {
            return Err(Error::domain(format!("probability {} outside [0, 1]", format_ratio(p))));
        }
        let scaled = p * Rational::from_integer(num_bigint::BigInt::one() << 64);
        Ok(Threshold(scaled.floor().to_integer().to_u128().expect("at most 2^64")))
    }

    pub fn accept(self, draw: u64) -> bool {
        u128::from(draw) < self.0
    }

    pub fn draw(self, rng: &mut ChaCha8Rng) -> bool {
        self.accept(rng.next_u64())
    }
}

/// A sampling probability, either an exact rational or a power `n^{−a/b}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Probability {
    Exact(Rational),
    /// `n^{−num/den}` with `num/den >= 0`.
    NegPower { num: u32, den: u32 },
}

impl Probability {
    /// Parse the `p/q` form.
    pub fn parse_exact(s: &str) -> Result<Self> {
        let p = parse_ratio(s)?;
        Threshold::from_rational(&p)?;
        Ok(Probability::Exact(p))
    }

    /// Parse an exponent `a/b`, meaning `n^{−a/b}`.
    pub fn parse_exponent(s: &str) -> Result<Self> {
        let e = parse_ratio(s)?;
        if e.is_negative() {
            return Err(Error::domain("probability exponent must be nonnegative"));
        }
        let num = e.numer().to_u32().ok_or_else(|| Error::domain("exponent too large"))?;
        let den = e.denom().to_u32().ok_or_else(|| Error::domain("exponent too large"))?;
        Ok(Probability::NegPower { num, den })
    }

    pub fn threshold(&self, n: usize) -> Result<Threshold> {
        match self {
            Probability::Exact(p) => Threshold::from_rational(p),
            Probability::NegPower { num, den } => {
                if n == 0 {
                    return Err(Error::domain("n^(-a/b) needs n >= 1"));
                }
                if *num == 0 {
                    return Ok(Threshold(1u128 << 64));
                }
                // floor(2^64 · n^{−a/b}) = floor((2^{64b} / n^a)^{1/b})
                let top = BigUint::one() << (64 * *den as usize);
                let q = top / BigUint::from(n).pow(*num);
                Ok(Threshold(iroot(&q, *den).to_u128().expect("at most 2^64")))
            }
        }
    }

    /// Floating value, for reporting and band arithmetic only.
    pub fn value(&self, n: usize) -> f64 {
        match self {
            Probability::Exact(p) => p.to_f64().unwrap_or(f64::NAN),
            Probability::NegPower { num, den } => (n as f64).powf(-(*num as f64) / (*den as f64)),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Probability::Exact(p) if p.is_zero())
    }

    pub fn describe(&self) -> String {
        match self {
            Probability::Exact(p) => format_ratio(p),
            Probability::NegPower { num, den } if *den == 1 => format!("n^(-{num})"),
            Probability::NegPower { num, den } => format!("n^(-{num}/{den})"),
        }
    }
}

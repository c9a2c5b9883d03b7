use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::integer::Integer;

use crate::error::{Error, Result};

/// An element `numerator / modulus` of `(1/M)Z/Z ⊂ U(1)`, written additively.
#[derive(Clone, Copy, Debug)]
pub struct PhaseValue {
    numerator: u64,
    modulus: u64,
}

impl PhaseValue {
    pub fn new(numerator: i64, modulus: u64) -> Self {
        assert!(modulus > 0, "phase modulus must be positive");
        PhaseValue {
            numerator: numerator.rem_euclid(modulus as i64) as u64,
            modulus,
        }
    }

    pub fn zero() -> Self {
        PhaseValue { numerator: 0, modulus: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    /// The same value with the smallest possible modulus.
    pub fn reduced(&self) -> Self {
        let g = self.numerator.gcd(&self.modulus);
        PhaseValue {
            numerator: self.numerator / g,
            modulus: self.modulus / g,
        }
    }

    /// Rewrite over modulus `m`, which must be a multiple of the reduced modulus.
    pub fn with_modulus(&self, m: u64) -> Option<Self> {
        let r = self.reduced();
        m.is_multiple_of(r.modulus).then(|| PhaseValue {
            numerator: r.numerator * (m / r.modulus),
            modulus: m,
        })
    }

    pub fn scale(&self, k: i64) -> Self {
        let m = self.modulus as i128;
        PhaseValue {
            numerator: ((self.numerator as i128 * k as i128).rem_euclid(m)) as u64,
            modulus: self.modulus,
        }
    }

    fn combine(self, other: Self, sign: i128) -> Self {
        let m = self.modulus.lcm(&other.modulus);
        let a = self.numerator as i128 * (m / self.modulus) as i128;
        let b = other.numerator as i128 * (m / other.modulus) as i128;
        PhaseValue {
            numerator: (a + sign * b).rem_euclid(m as i128) as u64,
            modulus: m,
        }
    }

    /// Parse `p/q` (or an integer, meaning `0`).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: i64 = p.parse().map_err(|_| Error::Format(format!("bad phase `{s}`")))?;
        let q: u64 = q.parse().map_err(|_| Error::Format(format!("bad phase `{s}`")))?;
        if q == 0 {
            return Err(Error::Format(format!("zero denominator in `{s}`")));
        }
        Ok(PhaseValue::new(p, q))
    }
}

impl PartialEq for PhaseValue {
    fn eq(&self, other: &Self) -> bool {
        self.numerator as u128 * other.modulus as u128 == other.numerator as u128 * self.modulus as u128
    }
}

impl Eq for PhaseValue {}

impl std::hash::Hash for PhaseValue {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        let r = self.reduced();
        r.numerator.hash(state);
        r.modulus.hash(state);
    }
}

impl PartialOrd for PhaseValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PhaseValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.numerator as u128 * other.modulus as u128).cmp(&(other.numerator as u128 * self.modulus as u128))
    }
}

impl Add for PhaseValue {
    type Output = PhaseValue;
    fn add(self, rhs: Self) -> Self {
        self.combine(rhs, 1)
    }
}

impl Sub for PhaseValue {
    type Output = PhaseValue;
    fn sub(self, rhs: Self) -> Self {
        self.combine(rhs, -1)
    }
}

impl Neg for PhaseValue {
    type Output = PhaseValue;
    fn neg(self) -> Self {
        PhaseValue::new(-(self.numerator as i64), self.modulus)
    }
}

impl fmt::Display for PhaseValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.numerator == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", r.numerator, r.modulus)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_moduli() {
        let a = PhaseValue::new(1, 2);
        let b = PhaseValue::new(1, 3);
        let c = a + b;
        assert_eq!(c, PhaseValue::new(5, 6));
        assert_eq!(c.modulus(), 6);
        assert_eq!(a + a, PhaseValue::zero());
    }

    #[test]
    fn equality_ignores_modulus() {
        assert_eq!(PhaseValue::new(2, 4), PhaseValue::new(1, 2));
        assert_eq!(PhaseValue::new(-1, 4), PhaseValue::new(3, 4));
        assert_eq!(PhaseValue::new(2, 4).to_string(), "1/2");
    }

    #[test]
    fn parse_roundtrip() {
        let p = PhaseValue::parse("3/8").unwrap();
        assert_eq!(p.to_string(), "3/8");
        assert!(PhaseValue::parse("1/0").is_err());
        assert_eq!(PhaseValue::parse("0").unwrap(), PhaseValue::zero());
    }
}

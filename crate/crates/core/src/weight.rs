//! Exact nonnegative weights.
//!
//! All matrix entries, densities, thresholds and distances in this crate are
//! [`Weight`]s: arbitrary-precision nonnegative rationals. Keeping the
//! arithmetic exact makes every downstream equality test (element
//! deduplication in semigroup closures, rounding, image thresholds)
//! deterministic and platform-independent — binary floating point never
//! enters the pipeline.
//!
//! Weights parse from decimal strings (`"0.25"`, `".5"`, `"1"`) or explicit
//! fractions (`"3/4"`), and display as the shortest terminating decimal when
//! the reduced denominator is of the form 2^a·5^b, falling back to `p/q`
//! otherwise. Parsing and display round-trip exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;

/// An exact nonnegative rational weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(BigRational);

impl Weight {
    /// The additive identity.
    pub fn zero() -> Self {
        Weight(BigRational::zero())
    }

    /// The multiplicative identity.
    pub fn one() -> Self {
        Weight(BigRational::one())
    }

    /// Builds a weight from a nonnegative integer fraction `num/den`.
    ///
    /// # Panics
    /// Panics if `den` is zero.
    pub fn from_ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "weight denominator must be nonzero");
        Weight(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Builds a weight from a nonnegative integer.
    pub fn from_integer(value: u64) -> Self {
        Weight(BigRational::from_integer(BigInt::from(value)))
    }

    /// True iff the weight is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// True iff the weight is exactly one.
    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// True iff the weight lies in the closed unit interval.
    pub fn in_unit_interval(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    /// True iff the weight is 0 or 1.
    pub fn is_boolean(&self) -> bool {
        self.is_zero() || self.is_one()
    }

    /// The larger of two weights.
    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Rounds to `digits` decimal places with ties going to the even
    /// neighbour (banker's rounding), computed exactly on the rational
    /// value. Ties-to-even is what makes repeated rounding of max-times
    /// products well behaved at grid midpoints such as 0.005 and 0.015.
    pub fn round_to_digits(&self, digits: u32) -> Self {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let floor = scaled.floor().to_integer();
        let remainder = &scaled - BigRational::from_integer(floor.clone());
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let rounded = match remainder.cmp(&half) {
            Ordering::Less => floor,
            Ordering::Greater => floor + 1,
            Ordering::Equal => {
                // Tie: pick the even neighbour.
                if (&floor % 2u8).is_zero() {
                    floor
                } else {
                    floor + 1
                }
            }
        };
        Weight(BigRational::new(rounded, scale))
    }

    /// Squared value, used for exact distance comparisons.
    pub fn square(&self) -> Self {
        Weight(&self.0 * &self.0)
    }

    /// Absolute difference of two weights.
    pub fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            Weight(&self.0 - &other.0)
        } else {
            Weight(&other.0 - &self.0)
        }
    }

    /// Exposes the underlying rational (read-only).
    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    /// Wraps an already-validated nonnegative rational.
    pub(crate) fn from_rational(value: BigRational) -> Self {
        debug_assert!(!value.is_negative(), "weights must be nonnegative");
        Weight(value)
    }

    /// Renders as a minimal terminating decimal when possible, else `p/q`.
    fn render(&self) -> String {
        let numer = self.0.numer();
        let denom = self.0.denom();
        if denom.is_one() {
            return numer.to_string();
        }
        // A reduced fraction has a terminating decimal expansion exactly when
        // the denominator is 2^a * 5^b; the expansion needs max(a, b) digits.
        let mut rest = denom.clone();
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        let mut twos = 0u32;
        let mut fives = 0u32;
        while (&rest % &two).is_zero() {
            rest /= &two;
            twos += 1;
        }
        while (&rest % &five).is_zero() {
            rest /= &five;
            fives += 1;
        }
        if !rest.is_one() {
            return format!("{}/{}", numer, denom);
        }
        let digits = twos.max(fives);
        let scaled = numer * BigInt::from(10u32).pow(digits) / denom;
        let text = scaled.to_string();
        let digits = digits as usize;
        let (int_part, frac_part) = if text.len() > digits {
            let split = text.len() - digits;
            (text[..split].to_string(), text[split..].to_string())
        } else {
            ("0".to_string(), format!("{:0>width$}", text, width = digits))
        };
        let frac_part = frac_part.trim_end_matches('0');
        if frac_part.is_empty() {
            int_part
        } else {
            format!("{}.{}", int_part, frac_part)
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self, Error> {
        let trimmed = input.trim();
        let fail = |message: &str| Error::InvalidWeight {
            input: input.to_string(),
            message: message.to_string(),
        };
        if trimmed.is_empty() {
            return Err(fail("empty string"));
        }
        if trimmed.starts_with('-') {
            return Err(fail("weights must be nonnegative"));
        }
        if let Some((num, den)) = trimmed.split_once('/') {
            let num: BigInt = num.parse().map_err(|_| fail("invalid numerator"))?;
            let den: BigInt = den.parse().map_err(|_| fail("invalid denominator"))?;
            if den.is_zero() {
                return Err(fail("zero denominator"));
            }
            if num.is_negative() || den.is_negative() {
                return Err(fail("weights must be nonnegative"));
            }
            return Ok(Weight(BigRational::new(num, den)));
        }
        let (int_text, frac_text) = match trimmed.split_once('.') {
            Some((i, f)) => (i, f),
            None => (trimmed, ""),
        };
        if int_text.is_empty() && frac_text.is_empty() {
            return Err(fail("no digits"));
        }
        if !int_text.chars().all(|c| c.is_ascii_digit())
            || !frac_text.chars().all(|c| c.is_ascii_digit())
        {
            return Err(fail("expected a nonnegative decimal or p/q fraction"));
        }
        let int_part: BigInt = if int_text.is_empty() {
            BigInt::zero()
        } else {
            int_text.parse().map_err(|_| fail("invalid integer part"))?
        };
        let mut value = BigRational::from_integer(int_part);
        if !frac_text.is_empty() {
            let frac: BigInt = frac_text
                .parse()
                .map_err(|_| fail("invalid fractional part"))?;
            let scale = BigInt::from(10u32).pow(frac_text.len() as u32);
            value += BigRational::new(frac, scale);
        }
        Ok(Weight(value))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl Add<&Weight> for Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0 + &rhs.0)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        assert!(self >= rhs, "weight subtraction would go negative");
        Weight(self.0 - rhs.0)
    }
}

impl Mul<&Weight> for &Weight {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        Weight(&self.0 * &rhs.0)
    }
}

impl Mul for Weight {
    type Output = Weight;
    fn mul(self, rhs: Weight) -> Weight {
        Weight(self.0 * rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(w("0.25"), Weight::from_ratio(1, 4));
        assert_eq!(w(".5"), Weight::from_ratio(1, 2));
        assert_eq!(w("1"), Weight::one());
        assert_eq!(w("3/4"), Weight::from_ratio(3, 4));
        assert_eq!(w("0.050"), Weight::from_ratio(1, 20));
        assert_eq!(w("14/36"), Weight::from_ratio(7, 18));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "-1", "1/-2", "a", "1.2.3", "1/0", "1e-2", "+3"] {
            assert!(bad.parse::<Weight>().is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn displays_minimal_decimal_or_fraction() {
        assert_eq!(w("0.25").to_string(), "0.25");
        assert_eq!(w("0.50").to_string(), "0.5");
        assert_eq!(w("2/4").to_string(), "0.5");
        assert_eq!(w("7/18").to_string(), "7/18");
        assert_eq!(w("5/36").to_string(), "5/36");
        assert_eq!(w("0").to_string(), "0");
        assert_eq!(w("3").to_string(), "3");
        assert_eq!(w("0.0475").to_string(), "0.0475");
    }

    #[test]
    fn display_round_trips() {
        for s in ["0.11", "0.0475", "7/18", "1", "0", "0.00171875", "123/7"] {
            let value = w(s);
            let again: Weight = value.to_string().parse().unwrap();
            assert_eq!(value, again);
        }
    }

    #[test]
    fn rounds_non_ties_to_nearest() {
        assert_eq!(w("0.0475").round_to_digits(2), w("0.05"));
        assert_eq!(w("0.038").round_to_digits(2), w("0.04"));
        assert_eq!(w("0.00171875").round_to_digits(2), w("0"));
        assert_eq!(w("0.0625").round_to_digits(2), w("0.06"));
        assert_eq!(w("0.0095").round_to_digits(2), w("0.01"));
    }

    #[test]
    fn rounds_ties_to_even() {
        assert_eq!(w("0.005").round_to_digits(2), w("0"));
        assert_eq!(w("0.015").round_to_digits(2), w("0.02"));
        assert_eq!(w("0.025").round_to_digits(2), w("0.02"));
        assert_eq!(w("0.035").round_to_digits(2), w("0.04"));
        assert_eq!(w("0.5").round_to_digits(0), w("0"));
        assert_eq!(w("1.5").round_to_digits(0), w("2"));
    }

    #[test]
    fn rounding_is_idempotent_on_the_grid() {
        for s in ["0.05", "0.11", "0.2", "1", "0"] {
            assert_eq!(w(s).round_to_digits(2), w(s));
        }
    }

    #[test]
    fn arithmetic_and_order() {
        assert_eq!(&w("0.11") * &w("0.25"), w("0.0275"));
        assert_eq!(w("0.03").max(w("0.06")), w("0.06"));
        assert!(w("0.04") < w("0.0475"));
        assert_eq!(w("0.3") + w("0.2"), w("0.5"));
        assert_eq!(w("0.3").abs_diff(&w("0.5")), w("0.2"));
        assert!(w("1").in_unit_interval());
        assert!(!w("1.01").in_unit_interval());
    }
}

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// An element of ½ℤ, stored as twice its value. Serialized as `[num, den]` in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "(i64, i64)", try_from = "(i64, i64)")]
pub struct Half(i32);

impl From<Half> for (i64, i64) {
    fn from(h: Half) -> Self {
        h.num_den()
    }
}

impl TryFrom<(i64, i64)> for Half {
    type Error = String;

    fn try_from((n, d): (i64, i64)) -> Result<Self, Self::Error> {
        Half::from_frac(n, d).ok_or_else(|| format!("{n}/{d} is not an element of ½ℤ"))
    }
}

impl Half {
    pub const ZERO: Half = Half(0);
    pub const ONE: Half = Half(2);

    pub const fn from_twice(twice: i32) -> Self {
        Half(twice)
    }

    pub const fn int(n: i32) -> Self {
        Half(2 * n)
    }

    /// Builds `num/den` when it lies in ½ℤ.
    pub fn from_frac(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let Some(twice) = num.checked_mul(2) else { return None };
        if twice % den != 0 {
            return None;
        }
        i32::try_from(twice / den).ok().map(Half)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The integer value, if there is one.
    pub fn as_int(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn abs(self) -> Self {
        Half(self.0.abs())
    }

    /// Numerator and denominator in lowest terms.
    pub fn num_den(self) -> (i64, i64) {
        if self.is_integer() {
            (i64::from(self.0 / 2), 1)
        } else {
            (i64::from(self.0), 2)
        }
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.0), BigInt::from(2))
    }
}

impl std::str::FromStr for Half {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("{s:?} is not an element of ½ℤ");
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Half::from_frac(n, d).ok_or_else(bad)
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, o: Half) -> Half {
        Half(self.0 + o.0)
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, o: Half) -> Half {
        Half(self.0 - o.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        assert_eq!(Half::from_twice(3).to_string(), "3/2");
        assert_eq!(Half::int(-2).to_string(), "-2");
        assert_eq!(Half::from_frac(5, 2), Some(Half::from_twice(5)));
        assert_eq!(Half::from_frac(4, 2), Some(Half::int(2)));
        assert_eq!(Half::from_frac(1, 3), None);
        assert_eq!(Half::from_twice(-3).num_den(), (-3, 2));
        assert_eq!("7/2".parse::<Half>(), Ok(Half::from_twice(7)));
        assert_eq!("-3".parse::<Half>(), Ok(Half::int(-3)));
        assert!("1/3".parse::<Half>().is_err());
        assert_eq!(Half::from_frac(i64::MAX, 1), None);
    }

    #[test]
    fn serde_as_pair() {
        let h = Half::from_twice(5);
        assert_eq!(serde_json::to_string(&h).unwrap(), "[5,2]");
        assert_eq!(serde_json::from_str::<Half>("[6,2]").unwrap(), Half::int(3));
        assert!(serde_json::from_str::<Half>("[1,3]").is_err());
    }
}

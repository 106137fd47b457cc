//! Exact rationals used for thresholds, cycle means and optimal values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;

/// A rational number kept in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        Rational(Ratio::new(num, den))
    }

    pub fn integer(n: i128) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn num(&self) -> i128 {
        *self.0.numer()
    }

    pub fn den(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.den() == 1
    }

    pub fn floor(&self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i128 {
        self.0.ceil().to_integer()
    }

    pub fn abs(&self) -> Self {
        if self.num() < 0 {
            -*self
        } else {
            *self
        }
    }

    /// `"a/b"` form, also for integers.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.num(), self.den())
    }

    /// The rational with the smallest denominator in the half-open interval
    /// `[lo, hi)`. Among integers the smallest one is chosen.
    ///
    /// Walks the Stern–Brocot tree, taking runs of equal-direction steps at once.
    pub fn simplest_in(lo: Rational, hi: Rational) -> Option<Rational> {
        if lo >= hi {
            return None;
        }
        let base = lo.floor();
        if lo.is_integer() {
            return Some(lo);
        }
        if hi > Rational::integer(base + 1) {
            return Some(Rational::integer(base + 1));
        }
        // lo, hi now lie in (base, base + 1]; search the tree between 0/1 and 1/1.
        let lo = lo - Rational::integer(base);
        let hi = hi - Rational::integer(base);
        let (p, q) = (lo.num(), lo.den());
        let (r, s) = (hi.num(), hi.den());
        let (mut a, mut b, mut c, mut d) = (0i128, 1i128, 1i128, 1i128);
        loop {
            let (mn, md) = (a + c, b + d);
            // mediant < lo  <=>  mn * q < p * md
            if mn * q < p * md {
                // Largest t >= 1 with (a + t c) / (b + t d) < lo.
                let top = p * b - a * q;
                let bot = c * q - p * d;
                let t = (top + bot - 1) / bot - 1;
                let t = t.max(1);
                a += t * c;
                b += t * d;
            } else if mn * s >= r * md {
                // Largest t >= 1 with (c + t a) / (d + t b) >= hi.
                let top = c * s - r * d;
                let bot = r * b - a * s;
                let t = (top / bot).max(1);
                c += t * a;
                d += t * b;
            } else {
                return Some(Rational::new(mn, md) + Rational::integer(base));
            }
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n as i128)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.num())
        } else {
            write!(f, "{}/{}", self.num(), self.den())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected `<int>` or `<int>/<posint>`, got `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i128>().map(Rational::integer).map_err(|_| err()),
            Some((n, d)) => {
                let n: i128 = n.parse().map_err(|_| err())?;
                if d.starts_with('+') || d.starts_with('-') {
                    return Err(err());
                }
                let d: i128 = d.parse().map_err(|_| err())?;
                if d <= 0 {
                    return Err(err());
                }
                Ok(Rational::new(n, d))
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        *self == Rational::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rational::from(*other)))
    }
}

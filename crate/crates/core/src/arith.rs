//! Exact rationals and the negative continued fractions `[a1, ..., ah]`
//! with every `ai <= -2`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always `>= 1`.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("reciprocal of zero"));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn cmp_integer(&self, n: i64) -> Ordering {
        self.0.cmp(&BigRational::from_integer(n.into()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `a/b` or a bare integer `a`; signs allowed on both parts.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |part: &str| -> Result<BigInt> {
            let part = part.trim();
            let digits = part.strip_prefix(['+', '-']).unwrap_or(part);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(part, "expected an integer"));
            }
            part.parse::<BigInt>()
                .map_err(|_| Error::parse(part, "expected an integer"))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(Error::parse(s, "zero denominator"));
                }
                Rational::new(parse_int(n)?, den)
            }
            None => Ok(Rational::from_integer(parse_int(s)?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// Panics on division by zero, like the integer types.
impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division of a rational by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// `[a1, ..., ah] = a1 - 1/(a2 - 1/(... - 1/ah))` with every `ai <= -2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    coeffs: Vec<i64>,
}

impl ContinuedFraction {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("continued fraction needs at least one coefficient"));
        }
        if let Some(bad) = coeffs.iter().find(|&&a| a > -2) {
            return Err(Error::domain(format!(
                "continued fraction coefficient {bad} is not <= -2"
            )));
        }
        Ok(ContinuedFraction { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> Rational {
        eval_coeffs(&self.coeffs)
    }
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

fn eval_coeffs(coeffs: &[i64]) -> Rational {
    let (&last, rest) = coeffs.split_last().expect("nonempty continued fraction");
    let mut value = Rational::from(last);
    for &a in rest.iter().rev() {
        // value <= -1 at every stage, so the reciprocal exists
        value = Rational::from(a) - value.recip().expect("nonzero partial value");
    }
    value
}

/// Expands `t < -1` as the unique continued fraction with all
/// coefficients `<= -2`.
pub fn cf_expand(t: &Rational) -> Result<ContinuedFraction> {
    if t.cmp_integer(-1) != Ordering::Less {
        return Err(Error::domain(format!("cannot expand {t}: value must be < -1")));
    }
    let mut coeffs = Vec::new();
    let mut rest = t.clone();
    loop {
        let head = if rest.is_integer() {
            rest.numer().clone()
        } else {
            rest.floor()
        };
        let a = head
            .to_i64()
            .ok_or_else(|| Error::domain(format!("coefficient {head} exceeds 64 bits")))?;
        coeffs.push(a);
        if rest.is_integer() {
            break;
        }
        // rest - a lies in (0, 1), so the next tail is < -1
        rest = (Rational::from(a) - rest).recip()?;
    }
    ContinuedFraction::new(coeffs)
}

pub fn cf_eval(cf: &ContinuedFraction) -> Rational {
    cf.value()
}

/// `r` with `-1/r = [a1, ..., a_len]`; always in `(0, 1)`.
pub fn prefix_r(cf: &ContinuedFraction, len: usize) -> Result<Rational> {
    if len == 0 || len > cf.len() {
        return Err(Error::domain(format!(
            "prefix length {len} outside 1..={}",
            cf.len()
        )));
    }
    let value = eval_coeffs(&cf.coeffs[..len]);
    Ok(-value.recip()?)
}

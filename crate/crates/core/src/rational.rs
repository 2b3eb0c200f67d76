//! Exact scalars: rationals, signed square roots and the `+∞` sentinel.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

/// Parses `p`, `p/q` or a plain decimal such as `-1.25` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, fractional)) = s.split_once('.') {
        if fractional.is_empty() || !fractional.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(fractional.len() as u32);
        let digits: BigInt = fractional.parse().map_err(|_| bad())?;
        let magnitude = Rational::new(whole.abs() * &scale + digits, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Lowest-terms `p/q`, or `p` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Clears denominators and divides by the gcd. Only positive scalings are
/// applied, so the sign pattern is preserved.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|x| x / &gcd).collect()
}

/// The real number `sign · √square`, kept exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedSquare {
    sign: i8,
    square: Rational,
}

impl SignedSquare {
    pub fn new(sign: i8, square: Rational) -> Result<Self> {
        if square.is_negative() {
            return Err(Error::InvalidInput("negative square".into()));
        }
        let sign = match sign.signum() {
            _ if square.is_zero() => 0,
            0 => return Err(Error::InvalidInput("sign 0 with nonzero square".into())),
            s => s,
        };
        Ok(Self { sign, square })
    }

    pub fn zero() -> Self {
        Self {
            sign: 0,
            square: Rational::zero(),
        }
    }

    /// `−√square`.
    pub fn neg_sqrt(square: Rational) -> Self {
        Self::new(-1, square).expect("square must be nonnegative")
    }

    /// `+√square`.
    pub fn pos_sqrt(square: Rational) -> Self {
        Self::new(1, square).expect("square must be nonnegative")
    }

    /// The rational `x` itself.
    pub fn from_rational(x: &Rational) -> Self {
        Self {
            sign: if x.is_zero() {
                0
            } else if x.is_positive() {
                1
            } else {
                -1
            },
            square: x * x,
        }
    }

    /// `num / √den` with `den > 0`.
    pub fn quotient_by_sqrt(num: &Rational, den: &Rational) -> Self {
        let mut out = Self::from_rational(num);
        out.square /= den;
        out
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn square(&self) -> &Rational {
        &self.square
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * to_f64(&self.square).sqrt()
    }
}

impl Ord for SignedSquare {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.square.cmp(&other.square),
                _ => other.square.cmp(&self.square),
            },
            unequal => unequal,
        }
    }
}

impl PartialOrd for SignedSquare {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignedSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "√({})", format_rational(&self.square)),
            _ => write!(f, "-√({})", format_rational(&self.square)),
        }
    }
}

/// A finite value or `+∞`, ordered above every finite value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended<T> {
    Finite(T),
    Infinity,
}

impl<T> Extended<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => x.fmt(f),
            Extended::Infinity => write!(f, "+inf"),
        }
    }
}

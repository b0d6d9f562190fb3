//! Exact Gaussian rationals `a + bi` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact complex number with arbitrary-precision rational parts.
///
/// `BigRational` keeps denominators positive and reduced, so structural
/// equality is numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Scalar::real(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        Scalar::real(BigRational::from_integer(BigInt::from(n.clone())))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `|z|² = re² + im²`.
    pub fn abs_squared(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -&self.im }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.abs_squared();
        if n.is_zero() {
            return None;
        }
        Some(Scalar { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        Scalar { re: &self.re * q, im: &self.im * q }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        Scalar { re: &self.re * n, im: &self.im * n }
    }
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}

/// Parses `p/q` or `p` with an optional leading sign.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.is_empty() {
        return Err(Error::Parse(format!("empty rational in {s:?}")));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(BigRational::new(p, q))
    } else {
        let p = BigInt::from_str(t).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(BigRational::from_integer(p))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::real(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::real(&self.re * &rhs.re);
        }
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like the rational division it wraps.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic_is_exact() {
        let a = Scalar::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer(1.into()));
        let b = Scalar::new(BigRational::new(3.into(), 4.into()), BigRational::new((-1).into(), 3.into()));
        let q = &a / &b;
        assert_eq!(&q * &b, a);
        assert_eq!(&(&a - &b) + &b, a);
        // (1/2 + i)(1/2 - i) = 1/4 + 1
        assert_eq!((&a * &a.conj()).re, BigRational::new(5.into(), 4.into()));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("-6/4").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert_eq!(parse_rational("+7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!(format_rational(&BigRational::new((-3).into(), 2.into())), "-3/2");
        assert_eq!(format_rational(&BigRational::from_integer(4.into())), "4");
    }

    #[test]
    fn powers() {
        assert_eq!(Scalar::i().pow(2), Scalar::from_int(-1));
        assert_eq!(Scalar::from_int(3).pow(0), Scalar::one());
        assert_eq!(Scalar::from_ratio(1, 2).pow(3), Scalar::from_ratio(1, 8));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(Scalar::zero().inv().is_none());
    }
}

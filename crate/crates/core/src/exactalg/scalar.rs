use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds the reduced fraction `num / den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::parse(format!("{text:?}"), "expected a rational \"p\" or \"p/q\"");
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::parse(format!("{text:?}"), "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Returns `Some(r)` with `r >= 0` and `r * r == value` when `value` is the
/// square of a rational.
pub fn rational_sqrt(value: &Rational) -> Option<Rational> {
    if value.is_negative() {
        return None;
    }
    let n = value.numer().sqrt();
    let d = value.denom().sqrt();
    if &(&n * &n) == value.numer() && &(&d * &d) == value.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub fn rational_to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

/// Closest dyadic rational `m / 2^bits` to a float.
pub fn dyadic_approx(value: f64, bits: u32) -> Rational {
    let scale = 2f64.powi(bits as i32);
    let m = (value * scale).round();
    let den = BigInt::one() << bits;
    BigRational::new(BigInt::from(m as i128), den)
}

/// An exact complex number `re + i im` with rational parts.
///
/// Both parts are kept as reduced fractions with positive denominators, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rational(rat_int(value))
    }

    /// `(re_num/re_den) + i (im_num/im_den)`.
    pub fn from_fracs(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational {
            re: rat(re_num, re_den),
            im: rat(im_num, im_den),
        }
    }

    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `a * conj(a)`, returned as a rational.
    pub fn modulus_squared(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        let m = self.modulus_squared();
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(GaussianRational {
            re: &self.re / &m,
            im: -&self.im / &m,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        GaussianRational {
            re: &self.re * factor,
            im: &self.im * factor,
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Componentwise dyadic rounding of a float complex number.
    pub fn from_complex64(value: num_complex::Complex64, bits: u32) -> Self {
        GaussianRational {
            re: dyadic_approx(value.re, bits),
            im: dyadic_approx(value.im, bits),
        }
    }

    /// Wire form: `["re", "im"]`.
    pub fn to_pair(&self) -> [String; 2] {
        [format_rational(&self.re), format_rational(&self.im)]
    }

    pub fn from_pair(re: &str, im: &str) -> Result<Self> {
        Ok(GaussianRational {
            re: parse_rational(re)?,
            im: parse_rational(im)?,
        })
    }

    /// True when the printed form needs parentheses inside a product.
    pub(crate) fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_rational(Rational::one())
    }
}

impl From<Rational> for GaussianRational {
    fn from(value: Rational) -> Self {
        Self::from_rational(value)
    }
}

impl From<i64> for GaussianRational {
    fn from(value: i64) -> Self {
        Self::from_int(value)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::from_rational(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = &self.re;
        let im = &self.im;
        if im.is_zero() {
            return write!(f, "{}", format_rational(re));
        }
        let im_text = if im.is_one() {
            "i".to_string()
        } else if *im == -Rational::one() {
            "-i".to_string()
        } else {
            format!("{}i", format_rational(im))
        };
        if re.is_zero() {
            write!(f, "{im_text}")
        } else if im.is_negative() {
            write!(f, "{}{}", format_rational(re), im_text)
        } else {
            write!(f, "{}+{}", format_rational(re), im_text)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_imag_part(part: &str) -> Result<Rational> {
    let body = part.strip_suffix('i').unwrap_or(part);
    let body = body.strip_suffix('*').unwrap_or(body).trim();
    match body {
        "" | "+" => Ok(Rational::one()),
        "-" => Ok(-Rational::one()),
        _ => parse_rational(body.strip_prefix('+').unwrap_or(body)),
    }
}

/// Accepts `3/2`, `-i`, `1/4i`, `2*i`, `1/2-3/4i`, `(1+i)`.
impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(&compact);
        if body.is_empty() {
            return Err(Error::parse(format!("{text:?}"), "empty scalar"));
        }
        // split at a sign that is not the first character and does not follow '/'
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'/');
        let (first, second) = match split {
            Some(k) => (&body[..k], Some(&body[k..])),
            None => (body, None),
        };
        let wrap = |e: Error| match e {
            Error::Parse { message, .. } => Error::parse(format!("{text:?}"), message),
            other => other,
        };
        let mut value = GaussianRational::zero();
        for part in std::iter::once(first).chain(second) {
            if part.ends_with('i') {
                value.im += parse_imag_part(part).map_err(wrap)?;
            } else {
                let p = part.strip_prefix('+').unwrap_or(part);
                value.re += parse_rational(p).map_err(wrap)?;
            }
        }
        Ok(value)
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let [re, im] = self.to_pair();
        let mut tup = serializer.serialize_tuple(2)?;
        tup.serialize_element(&re)?;
        tup.serialize_element(&im)?;
        tup.end()
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(deserializer)?;
        GaussianRational::from_pair(&re, &im).map_err(de::Error::custom)
    }
}

//! Exact rational and Gaussian-rational arithmetic.
//!
//! [`Rational`] is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator, so structural equality is numeric equality.
//! [`GaussianRational`] is an element of `Q(i)` built from two rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational literal {0:?}")]
    Parse(String),
}

/// An exact fraction `p/q` with `q > 0` and `gcd(|p|, q) = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer/denom`, reducing to lowest terms.
    pub fn new(numer: i64, denom: i64) -> Result<Self, ExactError> {
        if denom == 0 {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn from_parts(numer: BigInt, denom: BigInt) -> Result<Self, ExactError> {
        if denom.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Integer value when the fraction is integral and fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    /// Accepts `"p"` or `"p/q"` with an optional leading minus on `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::Parse(s.to_string());
        let parse_int = |t: &str, allow_sign: bool| -> Result<BigInt, ExactError> {
            let digits = if allow_sign {
                t.strip_prefix('-').unwrap_or(t)
            } else {
                t
            };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        match s.split_once('/') {
            None => Ok(Rational::from_bigint(parse_int(s, true)?)),
            Some((p, q)) => {
                let numer = parse_int(p, true)?;
                let denom = parse_int(q, false)?;
                Rational::from_parts(numer, denom)
            }
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
        Rational::from_bigint(n)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($ty:ident, $trait:ident, $method:ident) => {
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<$ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$method(&rhs)
            }
        }
    };
}

impl<'b> Add<&'b Rational> for &Rational {
    type Output = Rational;
    fn add(self, rhs: &'b Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl<'b> Sub<&'b Rational> for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &'b Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl<'b> Mul<&'b Rational> for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &'b Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

/// Panics on a zero divisor; use [`Rational::recip`] for a checked inverse.
impl<'b> Div<&'b Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &'b Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

forward_binop!(Rational, Add, add);
forward_binop!(Rational, Sub, sub);
forward_binop!(Rational, Mul, mul);
forward_binop!(Rational, Div, div);

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

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

/// An element `re + im·i` of the Gaussian rationals `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::real(Rational::from_integer(n))
    }

    /// Shorthand for the real fraction `numer/denom`; panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::real(Rational::new(numer, denom).expect("nonzero denominator"))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
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

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse `conj(a) / |a|²`.
    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.im.is_zero() {
            return Ok(Self::real(self.re.recip()?));
        }
        let scale = self.norm_sqr().recip()?;
        Ok(GaussianRational {
            re: &self.re * &scale,
            im: -(&self.im * &scale),
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational {
            re: &self.re * r,
            im: &self.im * r,
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => {
                write!(f, "{} - {}i", self.re, self.im.abs())
            }
            (false, false) => write!(f, "{} + {}i", self.re, self.im),
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl<'b> Add<&'b GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'b> Sub<&'b GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'b> Mul<&'b GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'b GaussianRational) -> GaussianRational {
        // Real operands dominate in practice.
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => GaussianRational::real(&self.re * &rhs.re),
            (true, false) => rhs.scale(&self.re),
            (false, true) => self.scale(&rhs.re),
            (false, false) => GaussianRational {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

/// Panics on a zero divisor; use [`GaussianRational::inv`] for a checked inverse.
#[allow(clippy::suspicious_arithmetic_impl)]
impl<'b> Div<&'b GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &'b GaussianRational) -> GaussianRational {
        self * &rhs.inv().expect("gaussian division by zero")
    }
}

forward_binop!(GaussianRational, Add, add);
forward_binop!(GaussianRational, Sub, sub);
forward_binop!(GaussianRational, Mul, mul);
forward_binop!(GaussianRational, Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
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

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for j in 2..=n {
        acc *= j;
    }
    Rational::from_bigint(acc)
}

/// `binom(n, k)` as an exact rational; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    Rational::from_bigint(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    fn g(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::new(q(re.0, re.1), q(im.0, im.1))
    }

    #[test]
    fn addition_examples() {
        let a = GaussianRational::frac(1, 2);
        let b = GaussianRational::frac(1, 3);
        assert_eq!(&a + &b, GaussianRational::frac(5, 6));
        let z = g((7, 3), (-2, 5));
        assert_eq!(&z + &GaussianRational::zero(), z);
        assert_eq!(
            g((1, 1), (1, 1)) + g((1, 1), (-1, 1)),
            GaussianRational::from(2)
        );
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(
            g((1, 1), (1, 1)) * g((1, 1), (-1, 1)),
            GaussianRational::from(2)
        );
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from(-1));
        assert_eq!(
            GaussianRational::frac(2, 3) * GaussianRational::frac(3, 2),
            GaussianRational::one()
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            GaussianRational::from(2).inv().unwrap(),
            GaussianRational::frac(1, 2)
        );
        assert_eq!(GaussianRational::i().inv().unwrap(), -GaussianRational::i());
        let a = g((1, 1), (1, 1));
        let inv = a.inv().unwrap();
        assert_eq!(inv, g((1, 2), (-1, 2)));
        assert_eq!(&a * &inv, GaussianRational::one());
        assert_eq!(
            GaussianRational::zero().inv(),
            Err(ExactError::DivisionByZero)
        );
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(g((1, 1), (1, 1)).conj(), g((1, 1), (-1, 1)));
        let r = GaussianRational::frac(-4, 9);
        assert_eq!(r.conj(), r);
        let z = g((3, 7), (5, 2));
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn canonical_form() {
        let r = q(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(q(0, -5), Rational::zero());
        assert_eq!(q(0, 7).denom(), &BigInt::from(1));
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn string_forms() {
        assert_eq!(q(-3, 2).to_string(), "-3/2");
        assert_eq!(q(4, 2).to_string(), "2");
        assert_eq!("-3/2".parse::<Rational>().unwrap(), q(-3, 2));
        assert_eq!("6/4".parse::<Rational>().unwrap(), q(3, 2));
        assert_eq!("17".parse::<Rational>().unwrap(), q(17, 1));
        for bad in ["", "1/0", "a", "1/-2", "+1", "1/", "--1"] {
            assert!(
                bad.parse::<Rational>().is_err(),
                "{bad:?} should be rejected"
            );
        }
        let z = g((1, 2), (-5, 3));
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(json, r#"{"re":"1/2","im":"-5/3"}"#);
        assert_eq!(serde_json::from_str::<GaussianRational>(&json).unwrap(), z);
    }

    #[test]
    fn binomial_and_factorial() {
        assert_eq!(factorial(0), Rational::one());
        assert_eq!(factorial(6), Rational::from(720));
        assert_eq!(binomial(6, 2), Rational::from(15));
        assert_eq!(binomial(12, 6), Rational::from(924));
        assert_eq!(binomial(2, 3), Rational::zero());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=12).prop_map(|(p, d)| q(p, d))
    }

    fn small_gaussian() -> impl Strategy<Value = GaussianRational> {
        (small_rational(), small_rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
    }

    fn is_canonical(r: &Rational) -> bool {
        use num_integer::Integer;
        r.denom() > &BigInt::zero() && r.numer().gcd(r.denom()).is_one()
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_gaussian(), b in small_gaussian(), c in small_gaussian()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), GaussianRational::one());
            }
        }

        #[test]
        fn conj_is_ring_homomorphism(a in small_gaussian(), b in small_gaussian()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        }

        #[test]
        fn outputs_are_canonical(a in small_gaussian(), b in small_gaussian()) {
            let prod = &a * &b;
            let sum = &a + &b;
            for r in [&prod.re, &prod.im, &sum.re, &sum.im] {
                prop_assert!(is_canonical(r));
            }
        }

        #[test]
        fn json_round_trip(a in small_gaussian()) {
            let json = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<GaussianRational>(&json).unwrap(), a);
        }
    }
}

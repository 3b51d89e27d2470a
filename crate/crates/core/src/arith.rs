//! Arbitrary-precision integers and normalized rationals.
//!
//! Every other module computes exclusively with these values. A [`Rational`]
//! is always stored in lowest terms with a positive denominator, so equality
//! is structural.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Unbounded signed integer.
pub type Integer = BigInt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// `num / den`, normalized. Fails on a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, Error> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num.into(), den))
    }

    /// Small-integer convenience constructor; panics on `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::normalized(BigInt::from(num), BigInt::from(den))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    fn normalized(mut num: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() && !g.is_zero() {
            num /= &g;
            den /= &g;
        }
        if num.is_zero() {
            den = BigInt::one();
        }
        Self { num, den }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    /// Combined bit length of numerator and denominator.
    pub fn bits(&self) -> u64 {
        self.num.bits() + self.den.bits()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.num.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    /// True when the denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        let d = self.den.magnitude();
        (d & (d - BigUint::one())).is_zero()
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<Self, Error> {
        Self::one().checked_div(self)
    }

    /// Integer power; negative exponents invert and fail on zero.
    pub fn pow(&self, exp: i64) -> Result<Self, Error> {
        let e = exp.unsigned_abs();
        let e32 = u32::try_from(e).map_err(|_| Error::Unsupported("exponent too large".into()))?;
        let raised = Self {
            num: num_traits::pow(self.num.clone(), e32 as usize),
            den: num_traits::pow(self.den.clone(), e32 as usize),
        };
        if exp < 0 {
            raised.recip()
        } else {
            Ok(raised)
        }
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&self.den))
    }

    /// Nearest integer with ties resolved to the even neighbour.
    pub fn nearest_integer(&self) -> BigInt {
        let two = BigInt::from(2);
        let fl = self.floor();
        let frac2 = (&self.num - &fl * &self.den) * &two;
        match frac2.cmp(&self.den) {
            Ordering::Less => fl,
            Ordering::Greater => fl + 1,
            Ordering::Equal => {
                if fl.is_even() {
                    fl
                } else {
                    fl + 1
                }
            }
        }
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Self) -> Self {
        (self + other) * Rational::ratio(1, 2)
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Lossy conversion for display and test oracles only.
    pub fn to_f64(&self) -> f64 {
        match (self.num.to_f64(), self.den.to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                // scale both down to keep the quotient representable
                let shift = self.den.bits().max(self.num.bits()).saturating_sub(1000);
                let n = (&self.num >> shift).to_f64().unwrap_or(0.0);
                let d = (&self.den >> shift).to_f64().unwrap_or(1.0);
                n / d
            }
        }
    }

    /// Decimal rendering truncated toward zero to `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = (&self.num.abs() * &scale) / &self.den;
        let int_part = &scaled / &scale;
        let frac_part = (&scaled % &scale).to_string();
        let mut out = String::new();
        if self.is_negative() {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            for _ in frac_part.len()..digits {
                out.push('0');
            }
            out.push_str(&frac_part);
        }
        out
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::integer(n)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `[-]int` or `[-]int/posint`, surrounding whitespace allowed.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::InvalidLiteral(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num: BigInt = n.parse().map_err(|_| bad())?;
        let den: BigInt = match d {
            Some(d) => {
                if d.starts_with(['-', '+']) {
                    return Err(bad());
                }
                d.parse().map_err(|_| bad())?
            }
            None => BigInt::one(),
        };
        Rational::new(num, den)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                let f: fn(&Rational, &Rational) -> Rational = $body;
                f(self, rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Rational::sum(a, b, false));
forward_binop!(Sub, sub, |a, b| Rational::sum(a, b, true));
// cross-cancelling keeps the gcds small when one factor is small
forward_binop!(Mul, mul, |a, b| {
    let g1 = a.num.gcd(&b.den);
    let g2 = b.num.gcd(&a.den);
    if a.num.is_zero() || b.num.is_zero() {
        return Rational::zero();
    }
    Rational {
        num: (&a.num / &g1) * (&b.num / &g2),
        den: (&a.den / &g2) * (&b.den / &g1),
    }
});

impl Rational {
    fn sum(a: &Rational, b: &Rational, subtract: bool) -> Rational {
        let bn = if subtract { -&b.num } else { b.num.clone() };
        if a.den == b.den {
            return Rational::normalized(&a.num + bn, a.den.clone());
        }
        let g = a.den.gcd(&b.den);
        if g.is_one() {
            // coprime denominators: the result is already in lowest terms
            let num = &a.num * &b.den + bn * &a.den;
            let den = if num.is_zero() { BigInt::one() } else { &a.den * &b.den };
            return Rational { num, den };
        }
        Rational::normalized(&a.num * (&b.den / &g) + bn * (&a.den / &g), &a.den / &g * &b.den)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -(self.clone())
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = &*self * rhs;
    }
}

/// Smallest `k >= 0` with `2^k >= x` for positive `x`.
pub fn ceil_log2(x: &Rational) -> u64 {
    if *x <= Rational::one() {
        return 0;
    }
    let c = x.ceil();
    let bits = c.bits();
    // c is a power of two exactly when c & (c - 1) == 0
    let m = c.magnitude();
    if (m & (m - BigUint::one())).is_zero() {
        bits - 1
    } else {
        bits
    }
}

/// Smallest integer `m >= 1` with `m^k >= x`.
pub(crate) fn ceil_root(x: &Rational, k: u32) -> u64 {
    if *x <= Rational::one() {
        return 1;
    }
    let c = x.ceil();
    let m = c.magnitude();
    let mut r = num_integer::Roots::nth_root(m, k);
    if num_traits::pow(r.clone(), k as usize) < *m {
        r += 1u32;
    }
    r.to_u64().unwrap_or(u64::MAX).max(1)
}

//! Exact scalar types: arbitrary-precision rationals and complex rationals.
//!
//! All geometric predicates in this crate reduce to sign tests on `Rat`
//! values, so integer invariants (genus, turning numbers, cone orders of
//! dilation surfaces) are computed without any floating arithmetic. The
//! complex type doubles as the 2D point/vector type: a polygon vertex is a
//! point of the complex plane and a gluing map is `z ↦ a·z + b`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

pub type Rat = BigRational;

/// Rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Complex number with exact rational real and imaginary parts.
///
/// Used both as a scalar (gluing derivatives, character values) and as a
/// point or direction vector in the plane.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        CRat::new(rat_int(re), rat_int(im))
    }

    pub fn zero() -> Self {
        CRat::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        CRat::new(Rat::one(), Rat::zero())
    }

    pub fn real(re: Rat) -> Self {
        CRat::new(re, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True when the value is a real number > 0.
    pub fn is_positive_real(&self) -> bool {
        self.im.is_zero() && self.re.is_positive()
    }

    pub fn conj(&self) -> Self {
        CRat::new(self.re.clone(), -self.im.clone())
    }

    /// Squared modulus |z|², exact.
    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero complex rational");
        CRat::new(&self.re / &n, -&self.im / &n)
    }

    /// Multiplication by i: rotation by +90°, exact.
    pub fn rot90(&self) -> Self {
        CRat::new(-self.im.clone(), self.re.clone())
    }

    /// Cross product Im(conj(self)·other); positive when `other` lies
    /// counterclockwise of `self`.
    pub fn cross(&self, other: &CRat) -> Rat {
        &self.re * &other.im - &self.im * &other.re
    }

    /// Dot product Re(conj(self)·other).
    pub fn dot(&self, other: &CRat) -> Rat {
        &self.re * &other.re + &self.im * &other.im
    }

    pub fn scale(&self, s: &Rat) -> Self {
        CRat::new(&self.re * s, &self.im * s)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_f64();
        re.hypot(im)
    }

    pub fn arg_f64(&self) -> f64 {
        let (re, im) = self.to_f64();
        im.atan2(re)
    }
}

impl Add for CRat {
    type Output = CRat;
    fn add(self, rhs: CRat) -> CRat {
        CRat::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<'a> Add<&'a CRat> for &'a CRat {
    type Output = CRat;
    fn add(self, rhs: &CRat) -> CRat {
        CRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl AddAssign for CRat {
    fn add_assign(&mut self, rhs: CRat) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for CRat {
    type Output = CRat;
    fn sub(self, rhs: CRat) -> CRat {
        CRat::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<'a> Sub<&'a CRat> for &'a CRat {
    type Output = CRat;
    fn sub(self, rhs: &CRat) -> CRat {
        CRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl SubAssign for CRat {
    fn sub_assign(&mut self, rhs: CRat) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl Mul for CRat {
    type Output = CRat;
    fn mul(self, rhs: CRat) -> CRat {
        &self * &rhs
    }
}

impl<'a> Mul<&'a CRat> for &'a CRat {
    type Output = CRat;
    fn mul(self, rhs: &CRat) -> CRat {
        CRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for CRat {
    type Output = CRat;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: CRat) -> CRat {
        &self * &rhs.inv()
    }
}

impl<'a> Div<&'a CRat> for &'a CRat {
    type Output = CRat;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &CRat) -> CRat {
        self * &rhs.inv()
    }
}

impl Neg for CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat::new(-self.re, -self.im)
    }
}

impl fmt::Debug for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

impl fmt::Display for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// gcd of absolute values; gcd of the empty or all-zero collection is 0.
pub fn gcd_abs(values: &[i64]) -> u64 {
    let mut g: u64 = 0;
    for &v in values {
        g = gcd_u64(g, v.unsigned_abs());
    }
    g
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

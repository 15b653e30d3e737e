//! Number types the operator kernels run over.
//!
//! Every kernel is generic over [`Scalar`] so the same code path can run in
//! `f64` for experiments and in exact rationals ([`Rational`]) for oracle
//! comparisons on small spaces.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub trait Scalar:
    Clone
    + PartialOrd
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_count(n: usize) -> Self;
    fn abs_val(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact for exponent 1; other exponents go through `f64` for rationals.
    fn powf(&self, e: f64) -> Self;
    fn is_finite_value(&self) -> bool;
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_count(n: usize) -> Self {
        n as f64
    }
    #[inline]
    fn abs_val(&self) -> Self {
        self.abs()
    }
    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }
    #[inline]
    fn powf(&self, e: f64) -> Self {
        if e == 1.0 {
            *self
        } else {
            f64::powf(*self, e)
        }
    }
    #[inline]
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn from_count(n: usize) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn powf(&self, e: f64) -> Self {
        if e == 1.0 {
            self.clone()
        } else {
            let v = Scalar::to_f64(self).powf(e);
            Rational::from_float(v).unwrap_or_else(<Rational as Zero>::zero)
        }
    }
    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Exact rational `num / den`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational image of a finite `f64` (every finite double is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

//! Number types the LP, cut and separation code is generic over.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::Rational;

pub trait Scalar: Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// Whether arithmetic is exact; inexact types compare with [`Scalar::EPS`].
    const EXACT: bool;
    const EPS: f64;

    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// `self -= f * b`.
    fn sub_mul(&mut self, f: &Self, b: &Self);

    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn near_zero(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
    /// Exactly zero; used for sparsity.
    fn is_exact_zero(&self) -> bool;
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const EPS: f64 = 1e-9;

    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sub_mul(&mut self, f: &Self, b: &Self) {
        *self -= f * b;
    }
    fn is_pos(&self) -> bool {
        *self > Self::EPS
    }
    fn is_neg(&self) -> bool {
        *self < -Self::EPS
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const EPS: f64 = 0.0;

    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sub_mul(&mut self, f: &Self, b: &Self) {
        *self -= f * b;
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const EPS: f64 = 0.0;

    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v as i128)
    }
    fn from_f64(v: f64) -> Self {
        Rational::approximate_float(v).expect("representable float")
    }
    fn to_f64(&self) -> f64 {
        crate::rational::to_f64(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sub_mul(&mut self, f: &Self, b: &Self) {
        *self -= f * b;
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Converts an exact rational into a big rational.
pub fn big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

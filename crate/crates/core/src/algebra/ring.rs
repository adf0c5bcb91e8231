//! The coefficient-ring abstraction shared by polynomials and series.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::Rational;

/// A commutative ring containing the rationals, with exact equality.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    /// Multiplicative inverse, when one exists in the ring.
    fn try_inv(&self) -> Option<Self>;

    fn from_int(k: i64) -> Self {
        Self::from_rational(&super::rational::rat(k))
    }

    fn scale(&self, r: &Rational) -> Self {
        self.clone() * &Self::from_rational(r)
    }
}

impl Ring for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
}

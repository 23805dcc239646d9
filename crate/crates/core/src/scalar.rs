//! Scalar traits shared by the exact linear algebra.
//!
//! Everything in this crate is exact. The rational field and the integer
//! ring are abstracted so that the same code runs over machine-word
//! rationals and over big rationals; the rest of the crate uses the
//! aliases exported at the crate root.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// An exact integer type usable in Smith/Hermite reductions.
pub trait IntScalar:
    Clone
    + Debug
    + Display
    + Eq
    + Ord
    + Hash
    + Integer
    + Signed
    + ToPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;
}

macro_rules! int_scalar_prim {
    ($($t:ty),*) => {$(
        impl IntScalar for $t {
            fn from_i64(v: i64) -> Self { v as $t }
        }
    )*};
}
int_scalar_prim!(i64, i128);

impl IntScalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

/// An exact field of characteristic zero with rational semantics.
pub trait Scalar:
    Clone + Debug + Display + Eq + Ord + Hash + Num + Signed + FromStr + Send + Sync + 'static
{
    type Int: IntScalar;

    fn from_int(v: i64) -> Self;
    fn from_frac(n: i64, d: i64) -> Self;
    fn from_integer(v: Self::Int) -> Self;
    fn numer_int(&self) -> Self::Int;
    fn denom_int(&self) -> Self::Int;

    fn is_integral(&self) -> bool {
        self.denom_int().is_one()
    }

    /// Largest integer not exceeding the value.
    fn floor_val(&self) -> Self {
        Self::from_integer(self.numer_int().div_floor(&self.denom_int()))
    }

    /// Representative in `[0, 1)`.
    fn frac(&self) -> Self {
        self.clone() - self.floor_val()
    }

    fn to_i64(&self) -> Option<i64> {
        if self.is_integral() {
            ToPrimitive::to_i64(&self.numer_int())
        } else {
            None
        }
    }
}

impl<I: IntScalar> Scalar for Ratio<I> {
    type Int = I;

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(I::from_i64(v))
    }
    fn from_frac(n: i64, d: i64) -> Self {
        Ratio::new(I::from_i64(n), I::from_i64(d))
    }
    fn from_integer(v: I) -> Self {
        Ratio::from_integer(v)
    }
    fn numer_int(&self) -> I {
        self.numer().clone()
    }
    fn denom_int(&self) -> I {
        self.denom().clone()
    }
}

/// Least common multiple of the denominators of a slice.
pub fn common_denominator<T: Scalar>(xs: &[T]) -> T::Int {
    xs.iter()
        .fold(T::Int::one(), |acc, x| acc.lcm(&x.denom_int()))
}

pub fn is_zero_slice<T: Zero>(xs: &[T]) -> bool {
    xs.iter().all(Zero::is_zero)
}

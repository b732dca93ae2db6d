//! Small helpers over arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn from_u64(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Smallest integer not below `q`. Panics if the result does not fit in u64.
pub fn ceil_u64(q: &Rational) -> u64 {
    q.ceil()
        .to_integer()
        .to_u64()
        .expect("ceiling out of u64 range")
}

pub fn floor_u64(q: &Rational) -> u64 {
    q.floor()
        .to_integer()
        .to_u64()
        .expect("floor out of u64 range")
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn sum<I: IntoIterator<Item = Rational>>(it: I) -> Rational {
    it.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

pub fn pow2(n: u32) -> Rational {
    Rational::from_integer(BigInt::one() << n as usize)
}

//! Field scalars.
//!
//! Everything in this crate is linear algebra over a field. The production
//! field is [`Rat`](crate::Rat) (arbitrary-precision rationals); the prime
//! fields [`Fp`] are used for modular searches and are also valid scalars for
//! every generic routine.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

/// A field element usable by every generic routine in the crate.
///
/// Elimination assumes exact arithmetic: a value is a pivot iff it is not
/// `zero()`. Floating-point types satisfy the bound syntactically but are not
/// supported.
pub trait Scalar:
    Num + Neg<Output = Self> + FromPrimitive + Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl<T> Scalar for T where
    T: Num + Neg<Output = T> + FromPrimitive + Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// Element of the prime field `Z/PZ`.
///
/// `P` must be a prime below 2^32 so products fit in a `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(value: u64) -> Self {
        Fp(value % P)
    }

    pub fn from_i64(value: i64) -> Self {
        Fp(value.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Symmetric representative in `(-P/2, P/2]`.
    pub fn centered(self) -> i64 {
        if self.0 > P / 2 {
            self.0 as i64 - P as i64
        } else {
            self.0 as i64
        }
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Reduction of a rational number; `None` when `P` divides the denominator.
    pub fn reduce(q: &BigRational) -> Option<Self> {
        let modulus = BigInt::from(P);
        let den = q.denom().mod_floor(&modulus).to_u64()?;
        if den == 0 {
            return None;
        }
        let num = q.numer().mod_floor(&modulus).to_u64()?;
        Some(Fp(num) / Fp(den))
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        assert!(rhs.0 != 0, "division by zero in F_{P}");
        self * rhs.pow(P - 2)
    }
}

impl<const P: u64> Rem for Fp<P> {
    type Output = Self;
    /// Every nonzero element divides every other, so the remainder is zero.
    fn rem(self, rhs: Self) -> Self {
        assert!(rhs.0 != 0, "remainder by zero in F_{P}");
        Fp(0)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Num for Fp<P> {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        i64::from_str_radix(s, radix).map(Fp::from_i64)
    }
}

impl<const P: u64> FromPrimitive for Fp<P> {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Fp::from_i64(n))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Fp::new(n))
    }
}

/// Converts a small integer into any scalar.
pub fn from_int<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("every field contains the integers' image")
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn field_axioms_mod_seven() {
        for a in 1..7 {
            let x = F7::new(a);
            assert_eq!(x * x.inv(), F7::one());
            assert_eq!(x + (-x), F7::zero());
        }
        assert_eq!(F7::from_i64(-1).value(), 6);
        assert_eq!(F7::new(6).centered(), -1);
        assert_eq!(F7::new(3).centered(), 3);
    }

    #[test]
    fn rational_reduction() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(F7::reduce(&half), Some(F7::new(4)));
        let seventh = BigRational::new(1.into(), 7.into());
        assert_eq!(F7::reduce(&seventh), None);
        let neg = BigRational::new((-3).into(), 5.into());
        // -3/5 = -3 * 3 = -9 = 5 mod 7
        assert_eq!(F7::reduce(&neg), Some(F7::new(5)));
    }
}

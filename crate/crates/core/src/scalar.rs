//! Integer scalars that can hold continuants.
//!
//! Every continuant recurrence in the crate is written once against [`Scalar`]
//! and instantiated for machine words (`u32`, `u64`, `u128`) or for the
//! unbounded [`Natural`](crate::Natural). Machine words report overflow through
//! `None`/[`CfError::Overflow`](crate::CfError::Overflow) instead of wrapping.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, ToPrimitive, Unsigned};

pub trait Scalar:
    Integer
    + Unsigned
    + Clone
    + Debug
    + Display
    + Hash
    + Send
    + Sync
    + CheckedAdd
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + 'static
{
    /// Largest representable value, if the type is bounded.
    const MAX: Option<Self>;

    /// `a * x + y`, or `None` if the result does not fit.
    fn mul_add(a: u64, x: &Self, y: &Self) -> Option<Self> {
        Self::from_u64(a)?.checked_mul(x)?.checked_add(y)
    }

    /// Natural logarithm, accurate to f64 precision for any magnitude.
    fn ln(&self) -> f64;

    fn to_natural(&self) -> BigUint;

    fn from_natural(n: &BigUint) -> Option<Self>;

    /// Saturating conversion used to clamp quotients into term range.
    fn saturating_u64(&self) -> u64 {
        self.to_u64().unwrap_or(u64::MAX)
    }
}

macro_rules! impl_word_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const MAX: Option<Self> = Some(<$t>::MAX);

            fn ln(&self) -> f64 {
                (*self as f64).ln()
            }

            fn to_natural(&self) -> BigUint {
                BigUint::from(*self)
            }

            fn from_natural(n: &BigUint) -> Option<Self> {
                <$t>::try_from(n).ok()
            }
        }
    };
}

impl_word_scalar!(u32);
impl_word_scalar!(u64);
impl_word_scalar!(u128);

impl Scalar for BigUint {
    const MAX: Option<Self> = None;

    fn mul_add(a: u64, x: &Self, y: &Self) -> Option<Self> {
        Some(x * a + y)
    }

    fn ln(&self) -> f64 {
        let bits = self.bits();
        if bits <= 1000 {
            return self.to_f64().unwrap_or(f64::INFINITY).ln();
        }
        // keep the top 64 bits and add the shifted-out part back in log space
        let shift = bits - 64;
        let top = (self >> shift).to_f64().unwrap_or(f64::INFINITY);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }

    fn to_natural(&self) -> BigUint {
        self.clone()
    }

    fn from_natural(n: &BigUint) -> Option<Self> {
        Some(n.clone())
    }
}
